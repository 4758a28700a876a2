import dataclasses
import math

import pytest

from relayregions import (
    ChannelParams,
    Frontier,
    FrontierPoint,
    GdpcParams,
    InformedBothParams,
    Negative,
    NonDegraded,
    NonPositive,
    OutOfRange,
    RatePoint,
    RelayRegionsError,
    SCHEMES,
    rho_upper_bound,
    validate_channel,
    validate_gdpc,
)


def test_channel_params_roundtrip():
    c = ChannelParams(p1=2.0, p2=0.5, q=1.5, n1=0.2, n2=0.9)
    assert c.p1 == 2.0
    assert c.n2 == 0.9
    validate_channel(c)


def test_channel_params_rejects_bad_powers():
    with pytest.raises(NonPositive):
        ChannelParams(0.0, 1.0, 1.0, 0.1, 1.0)
    with pytest.raises(NonPositive):
        ChannelParams(1.0, 1.0, 1.0, 0.0, 1.0)
    with pytest.raises(OutOfRange):
        ChannelParams(1.0, 1.0, 1.0, 0.1, float("nan"))
    with pytest.raises(Negative):
        ChannelParams(1.0, -0.1, 1.0, 0.1, 1.0)
    with pytest.raises(Negative):
        ChannelParams(1.0, 1.0, -2.0, 0.1, 1.0)


def test_channel_params_requires_noise_ordering():
    # the relay branch must be the cleaner one
    with pytest.raises(NonDegraded):
        ChannelParams(1.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(NonDegraded):
        ChannelParams(1.0, 1.0, 1.0, 2.0, 1.0)


def test_errors_are_both_semantic_and_builtin():
    assert issubclass(NonPositive, RelayRegionsError)
    assert issubclass(NonPositive, ValueError)
    assert issubclass(NonDegraded, RelayRegionsError)
    assert issubclass(OutOfRange, ValueError)


def test_channel_params_frozen():
    c = ChannelParams(1.0, 1.0, 1.0, 0.1, 1.0)
    with pytest.raises(dataclasses.FrozenInstanceError):
        c.p1 = 3.0


def test_rho_upper_bound():
    c = ChannelParams(1.0, 1.0, 2.0, 0.1, 1.0)
    assert rho_upper_bound(c, 0.0) == 1.0
    c = ChannelParams(1.0, 1.0, 0.4, 0.1, 1.0)
    assert rho_upper_bound(c, 0.2) == pytest.approx(0.5)
    assert rho_upper_bound(c, 1.0) == 0.0
    c0 = ChannelParams(1.0, 1.0, 0.0, 0.1, 1.0)
    assert rho_upper_bound(c0, 0.3) == 0.0


@pytest.mark.parametrize("field", range(4))
def test_gdpc_params_unit_interval(field):
    vals = [0.5, 0.0, 0.5, 0.5]
    vals[field] = 1.2
    with pytest.raises(OutOfRange):
        GdpcParams(*vals)
    vals[field] = -0.01
    with pytest.raises(OutOfRange):
        GdpcParams(*vals)


def test_validate_gdpc_caps_rho():
    c = ChannelParams(1.0, 1.0, 0.4, 0.1, 1.0)
    validate_gdpc(c, GdpcParams(0.2, 0.5, 0.3, 0.3))
    with pytest.raises(OutOfRange):
        validate_gdpc(c, GdpcParams(0.2, 0.51, 0.3, 0.3))
    # zero bound forces rho = 0
    validate_gdpc(c, GdpcParams(1.0, 0.0, 0.3, 0.3))
    with pytest.raises(OutOfRange):
        validate_gdpc(c, GdpcParams(1.0, 0.1, 0.3, 0.3))


def test_informed_both_params_bounds():
    InformedBothParams(0.0, 1.0)
    with pytest.raises(OutOfRange):
        InformedBothParams(-0.1, 0.5)
    with pytest.raises(OutOfRange):
        InformedBothParams(0.5, 1.5)


def test_rate_point_rejects_bad_values():
    with pytest.raises(OutOfRange):
        RatePoint(-0.01, 0.5)
    with pytest.raises(OutOfRange):
        RatePoint(0.5, float("nan"))
    with pytest.raises(OutOfRange):
        RatePoint(float("inf"), 0.0)


def test_rate_point_clamped():
    p = RatePoint.clamped(float("nan"), -3.0)
    assert p.r1 == 0.0 and p.r02 == 0.0
    p = RatePoint.clamped(0.25, 1.5)
    assert p.r1 == 0.25 and p.r02 == 1.5


def test_schemes_tuple():
    assert SCHEMES == ("gdpc", "dpc", "informed-both", "nostate-outer")


def _pt(gamma, r1, r02):
    return FrontierPoint(gamma, 0.0, 0.0, 0.0, RatePoint(r1, r02))


def test_frontier_valid():
    f = Frontier(
        "gdpc",
        (_pt(0.0, 0.0, 1.0), _pt(0.5, 0.4, 0.7), _pt(1.0, 0.9, 0.7)),
    )
    assert len(f.points) == 3


def test_frontier_rejects_unknown_scheme():
    with pytest.raises(OutOfRange):
        Frontier("magic", (_pt(0.0, 0.0, 1.0),))


def test_frontier_rejects_non_monotone():
    with pytest.raises(OutOfRange):
        Frontier("gdpc", (_pt(0.0, 0.5, 1.0), _pt(0.5, 0.5, 0.9)))
    with pytest.raises(OutOfRange):
        Frontier("gdpc", (_pt(0.0, 0.1, 0.5), _pt(0.5, 0.2, 0.6)))


def test_nan_gamma_rejected():
    with pytest.raises(OutOfRange):
        GdpcParams(math.nan, 0.0, 0.0, 0.0)
