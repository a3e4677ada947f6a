import itertools

import numpy as np
import pytest

from polar2d.exceptions import ConfigError
from polar2d.modem import LLR_MAX, get_constellation, hard_demap, llr_demap, map_bits

NAMES = ["bpsk", "qpsk", "16qam"]


@pytest.mark.parametrize("name", NAMES)
def test_constellation_energy_and_size(name):
    c = get_constellation(name)
    assert c.points.size == 2**c.bits_per_symbol
    assert abs(np.mean(np.abs(c.points) ** 2) - 1.0) <= 1e-12
    assert len({tuple(r) for r in c.labels}) == c.points.size


@pytest.mark.parametrize("name", ["qpsk", "16qam"])
def test_gray_adjacency(name):
    c = get_constellation(name)
    d = np.abs(c.points[:, None] - c.points[None, :])
    dmin = np.min(d[d > 1e-9])
    for i, j in zip(*np.nonzero(np.isclose(d, dmin))):
        assert np.count_nonzero(c.labels[i] != c.labels[j]) == 1


def test_mapping_conventions():
    assert map_bits(np.array([[0, 1]]), "bpsk").tolist() == [[1, -1]]
    assert map_bits(np.array([[0, 0]]), "qpsk")[0, 0] == pytest.approx((1 + 1j) / np.sqrt(2))
    q = get_constellation("QAM16")
    assert q.name == "16qam" and np.array_equal(q.points, get_constellation("16qam").points)
    with pytest.raises(ConfigError):
        get_constellation("8psk")
    with pytest.raises(ConfigError):
        map_bits(np.zeros((2, 6), dtype=np.uint8), "16qam")


def test_map_bits_groups_temporal_bits():
    bits = np.array([[0, 0, 0, 1, 1, 0, 1, 1], [1, 1, 1, 1, 0, 0, 0, 0]], dtype=np.uint8)
    sym = map_bits(bits, "16qam")
    assert sym.shape == (2, 2)
    c = get_constellation("16qam")
    assert sym[0, 0] == c.points[0b0001] and sym[0, 1] == c.points[0b1011]


@pytest.mark.parametrize("name", NAMES)
def test_noiseless_roundtrip(name):
    rng = np.random.default_rng(1)
    bits = rng.integers(0, 2, (3, 4, 32), dtype=np.uint8)
    gain = np.sqrt(np.array([3.0, 1.0, 0.2, 0.05]))[:, None]
    y = np.sqrt(2.0) * gain * map_bits(bits, name)
    assert np.array_equal(hard_demap(y, gain, 2.0, name), bits)
    llr = llr_demap(y, gain, 2.0, 1e-3, name).reshape(bits.shape)
    assert np.array_equal(llr < 0, bits.astype(bool))


def test_bpsk_closed_form():
    assert llr_demap(np.array([1 + 0j]), 1.0, 1.0, 1.0, "bpsk")[0, 0] == pytest.approx(4.0)
    rng = np.random.default_rng(2)
    y = rng.normal(size=100) + 1j * rng.normal(size=100)
    lam, es, n0 = 2.3, 0.7, 1.3
    got = llr_demap(y, np.sqrt(lam), es, n0, "bpsk")[:, 0]
    want = np.clip(4 * np.sqrt(lam * es) * y.real / n0, -LLR_MAX, LLR_MAX)
    assert np.max(np.abs(got - want)) <= 1e-12
    assert np.array_equal(llr_demap(-y, 1.0, 1.0, 1.0, "bpsk"), -llr_demap(y, 1.0, 1.0, 1.0, "bpsk"))


@pytest.mark.parametrize("name", ["qpsk", "16qam"])
def test_exact_llr_matches_brute_force(name):
    c = get_constellation(name)
    rng = np.random.default_rng(3)
    y = rng.normal(size=50) + 1j * rng.normal(size=50)
    g, n0 = 0.8, 0.6
    got = llr_demap(y, g, 1.0, n0, name)
    for k, yk in enumerate(y):
        for j in range(c.bits_per_symbol):
            p = [0.0, 0.0]
            for lab in itertools.product((0, 1), repeat=c.bits_per_symbol):
                idx = int("".join(map(str, lab)), 2)
                p[lab[j]] += np.exp(-abs(yk - g * c.points[idx]) ** 2 / n0)
            assert got[k, j] == pytest.approx(np.log(p[0] / p[1]), abs=1e-9)


def test_exact_vs_maxlog_sign_agreement_16qam():
    rng = np.random.default_rng(4)
    c = get_constellation("16qam")
    bits = rng.integers(0, 2, (1, 4 * 100_000), dtype=np.uint8)
    x = map_bits(bits, c)
    es = 10 ** (20 / 10)
    y = np.sqrt(es) * x + (rng.normal(size=x.shape) + 1j * rng.normal(size=x.shape)) / np.sqrt(2)
    exact = llr_demap(y, 1.0, es, 1.0, c)
    maxlog = llr_demap(y, 1.0, es, 1.0, c, max_log=True)
    assert np.mean(np.sign(exact) != np.sign(maxlog)) <= 1e-3


@pytest.mark.parametrize("name", NAMES)
def test_llr_mean_positive_for_zero_bits(name):
    rng = np.random.default_rng(5)
    c = get_constellation(name)
    x = map_bits(np.zeros((1, 4000 * c.bits_per_symbol), dtype=np.uint8), c)
    for es in [0.1, 1.0, 10.0]:
        y = np.sqrt(es) * x + (rng.normal(size=x.shape) + 1j * rng.normal(size=x.shape)) / np.sqrt(2)
        assert np.all(llr_demap(y, 1.0, es, 1.0, c).mean(axis=(0, 1)) > 0)


def test_demap_validation():
    with pytest.raises(ValueError):
        llr_demap(np.ones(2), 1.0, 1.0, 0.0, "bpsk")
    with pytest.raises(ValueError):
        llr_demap(np.ones(2), -1.0, 1.0, 1.0, "bpsk")
    assert np.all(np.abs(llr_demap(np.array([1e9]), 1.0, 1.0, 1.0, "16qam")) <= LLR_MAX)
