"""Binary snapshots of fields and spectra.

Layout (all little-endian)::

    offset  size  content
    0       8     magic  b"WGNLSNAP"
    8       4     u32 format version (currently 1)
    12      4     u32 kind: 0 = Field (physical samples), 1 = Spectrum (FFT order)
    16      8     f64 half_length L
    24      8     u64 nx
    32      8     u64 ny
    40      16*nx*ny  complex samples as (re, im) f64 pairs, x1 index fastest

"x1 index fastest" means element ``[j, k]`` is stored at position ``j + nx*k``.
"""
from __future__ import annotations

import struct

import numpy as np

from .errors import ParameterError
from .spectral import DomainSpec, Field, Spectrum

MAGIC = b"WGNLSNAP"
VERSION = 1
KIND_FIELD = 0
KIND_SPECTRUM = 1

_HEADER = struct.Struct("<8sII")
_DOMAIN = struct.Struct("<dQQ")


def encode(obj) -> bytes:
    if isinstance(obj, Field):
        kind, data = KIND_FIELD, obj.values
    elif isinstance(obj, Spectrum):
        kind, data = KIND_SPECTRUM, obj.coeffs
    else:
        raise ParameterError(f"cannot snapshot {type(obj).__name__}")
    d = obj.domain
    payload = np.asarray(data.T, dtype="<c16").tobytes(order="C")
    return _HEADER.pack(MAGIC, VERSION, kind) + _DOMAIN.pack(d.half_length, d.nx, d.ny) + payload


def decode(buf: bytes):
    if len(buf) < _HEADER.size + _DOMAIN.size:
        raise ParameterError("snapshot truncated")
    magic, version, kind = _HEADER.unpack_from(buf, 0)
    if magic != MAGIC:
        raise ParameterError("not a waveguide snapshot (bad magic)")
    if version != VERSION:
        raise ParameterError(f"unsupported snapshot version {version}")
    L, nx, ny = _DOMAIN.unpack_from(buf, _HEADER.size)
    domain = DomainSpec(L, int(nx), int(ny))
    offset = _HEADER.size + _DOMAIN.size
    expected = 16 * domain.nx * domain.ny
    if len(buf) - offset != expected:
        raise ParameterError(f"snapshot payload is {len(buf) - offset} bytes, expected {expected}")
    flat = np.frombuffer(buf, dtype="<c16", offset=offset)
    data = flat.reshape(domain.ny, domain.nx).T.astype(np.complex128)
    if kind == KIND_FIELD:
        return Field(data, domain)
    if kind == KIND_SPECTRUM:
        return Spectrum(data, domain)
    raise ParameterError(f"unknown snapshot kind {kind}")


def save(path, obj):
    with open(path, "wb") as fh:
        fh.write(encode(obj))


def load(path):
    with open(path, "rb") as fh:
        return decode(fh.read())
