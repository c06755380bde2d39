import struct

import numpy as np
import pytest

from waveguide_nls import snapshot
from waveguide_nls.errors import ParameterError
from waveguide_nls.spectral import DomainSpec, Field, Spectrum

from conftest import random_field, random_spectrum


class TestSnapshot:
    def test_field_round_trip(self, tmp_path, rect_domain, rng):
        f = random_field(rect_domain, rng)
        snapshot.save(tmp_path / "f.bin", f)
        g = snapshot.load(tmp_path / "f.bin")
        assert isinstance(g, Field)
        assert g.domain == rect_domain
        assert np.array_equal(g.values, f.values)

    def test_spectrum_round_trip(self, rect_domain, rng):
        s = random_spectrum(rect_domain, rng)
        t = snapshot.decode(snapshot.encode(s))
        assert isinstance(t, Spectrum)
        assert np.array_equal(t.coeffs, s.coeffs)

    def test_layout(self):
        d = DomainSpec(1.5, 8, 8)
        v = np.zeros(d.shape, dtype=complex)
        v[1, 0] = 1 + 2j  # x1 index 1 -> second element
        v[0, 1] = 3 - 4j  # x2 index 1 -> element nx
        buf = snapshot.encode(Field(v, d))
        assert buf[:8] == b"WGNLSNAP"
        assert struct.unpack_from("<II", buf, 8) == (1, 0)
        assert struct.unpack_from("<dQQ", buf, 16) == (1.5, 8, 8)
        data = np.frombuffer(buf, dtype="<f8", offset=40)
        assert data.size == 2 * 64
        assert tuple(data[2:4]) == (1.0, 2.0)
        assert tuple(data[16:18]) == (3.0, -4.0)

    def test_bad_magic(self, small_domain, rng):
        buf = bytearray(snapshot.encode(random_field(small_domain, rng)))
        buf[0:8] = b"XXXXXXXX"
        with pytest.raises(ParameterError):
            snapshot.decode(bytes(buf))

    def test_truncated(self, small_domain, rng):
        buf = snapshot.encode(random_field(small_domain, rng))
        with pytest.raises(ParameterError):
            snapshot.decode(buf[:-16])
        with pytest.raises(ParameterError):
            snapshot.decode(buf[:20])

    def test_bad_version(self, small_domain, rng):
        buf = bytearray(snapshot.encode(random_field(small_domain, rng)))
        struct.pack_into("<I", buf, 8, 99)
        with pytest.raises(ParameterError):
            snapshot.decode(bytes(buf))

    def test_unsupported_object(self):
        with pytest.raises(ParameterError):
            snapshot.encode(np.zeros((8, 8)))
