import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from polar2d import SpatiotemporalPolarCode
from polar2d.exceptions import ConfigError, DimensionError
from polar2d.polar_core import encode_2d
from polar2d.reliability import ConstructionMethod, construct


def test_params_and_clone():
    est = SpatiotemporalPolarCode(t_slots=16, rate=0.25, construction="ga_uniform")
    assert est.get_params() == dict(t_slots=16, rate=0.25, construction="ga_uniform", min_sum=False)
    c = clone(est.set_params(min_sum=True))
    assert c.get_params()["min_sum"] is True and not hasattr(c, "code_config_")


def test_fit_matches_construct():
    gam = np.array([30.0, 8.0, 2.0, 0.5])
    est = SpatiotemporalPolarCode(t_slots=8).fit(gam)
    ref = construct(gam, 8, 16, ConstructionMethod.RCA)
    assert np.array_equal(est.order_, ref.order)
    assert est.k_info_ == 16 and est.n_streams_ == 4
    assert est.code_config_.frozen_mask.sum() == 16


def test_transform_is_encoder():
    est = SpatiotemporalPolarCode(t_slots=8).fit([[10.0, 1.0]])
    rng = np.random.default_rng(0)
    info = rng.integers(0, 2, (20, est.k_info_), dtype=np.uint8)
    x = est.transform(info)
    u = np.zeros((20, 16), dtype=np.uint8)
    u[:, est.code_config_.info_set] = info
    assert np.array_equal(x, encode_2d(u.reshape(20, 2, 8)).reshape(20, 16))


@pytest.mark.parametrize("min_sum", [False, True])
def test_noiseless_roundtrip(min_sum):
    est = SpatiotemporalPolarCode(t_slots=16, rate=0.5, min_sum=min_sum).fit([4.0, 2.0, 1.0, 0.5])
    info = np.random.default_rng(1).integers(0, 2, (50, est.k_info_), dtype=np.uint8)
    llr = 8.0 * (1.0 - 2.0 * est.transform(info))
    assert np.array_equal(est.predict(llr), info)


def test_errors():
    est = SpatiotemporalPolarCode(t_slots=8)
    with pytest.raises(NotFittedError):
        est.transform(np.zeros((1, 8)))
    with pytest.raises(ConfigError):
        est.fit([1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        est.fit([1.0, -1.0])
    with pytest.raises(DimensionError):
        est.fit([[1.0, 1.0], [1.0, 1.0]])
    est.fit([1.0, 1.0])
    with pytest.raises(DimensionError):
        est.transform(np.zeros((1, 9)))
    with pytest.raises(ValueError):
        est.transform(np.full((1, 8), 2))
    with pytest.raises(DimensionError):
        est.predict(np.zeros((1, 15)))
    with pytest.raises(ValueError):
        est.predict(np.full((1, 16), np.nan))
