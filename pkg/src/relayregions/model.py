"""Domain types and validation for the degraded Gaussian relay broadcast
channel with additive interference known at the encoder.

Geometry: a source (power budget p1) transmits to a nearby user and a far
user. The nearby user also acts as a relay with power budget p2, helping
only the far user. The relay branch sees Gaussian noise of power n1, the
far branch sees the relay's observation plus independent extra noise, for
a total of n2 > n1. An i.i.d. Gaussian interference of power q rides on
top of the source input.

Conventions shared by every module:

* powers and noise variances are linear, never dB;
* rates are bits per channel use, log base 2;
* an analytic rate expression that comes out negative, or lands on a
  0/0 boundary (vanishing signal layers), is exposed as exactly 0.0.

All types are frozen dataclasses, safe to share between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class RelayRegionsError(Exception):
    """Base class for every error raised by this package."""


class NonPositive(RelayRegionsError, ValueError):
    """A parameter that must be strictly positive is zero or negative."""


class Negative(RelayRegionsError, ValueError):
    """A parameter that must be nonnegative is negative."""


class NonDegraded(RelayRegionsError, ValueError):
    """Noise powers violate the degradedness requirement n1 < n2."""


class OutOfRange(RelayRegionsError, ValueError):
    """A value lies outside its admissible interval."""


def _require_finite(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise OutOfRange(f"{name} must be finite, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class ChannelParams:
    """Channel-side constants: powers p1, p2, interference power q and
    noise powers n1 < n2."""

    p1: float
    p2: float
    q: float
    n1: float
    n2: float

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "q", "n1", "n2"):
            _require_finite(name, getattr(self, name))
        if self.p1 <= 0:
            raise NonPositive(f"p1 must be > 0, got {self.p1}")
        if self.n1 <= 0:
            raise NonPositive(f"n1 must be > 0, got {self.n1}")
        if self.n2 <= 0:
            raise NonPositive(f"n2 must be > 0, got {self.n2}")
        if self.p2 < 0:
            raise Negative(f"p2 must be >= 0, got {self.p2}")
        if self.q < 0:
            raise Negative(f"q must be >= 0, got {self.q}")
        if self.n1 >= self.n2:
            raise NonDegraded(
                f"need n1 < n2 (far branch noisier), got n1={self.n1}, n2={self.n2}"
            )


def validate_channel(c: ChannelParams) -> ChannelParams:
    """Return ``c`` after re-running its invariant checks.

    Constructing ChannelParams already validates; this exists so call
    sites handed an unknown object can force the checks explicitly.
    """
    return ChannelParams(c.p1, c.p2, c.q, c.n1, c.n2)


def rho_upper_bound(c: ChannelParams, gamma: float) -> float:
    """Largest admissible interference-cancellation fraction rho for a
    given private-power split gamma: min(1, q / ((1-gamma) p1)), and 0
    when the denominator or q vanishes."""
    gbar_p1 = (1.0 - gamma) * c.p1
    if gbar_p1 <= 0.0 or c.q <= 0.0:
        return 0.0
    return min(1.0, c.q / gbar_p1)


@dataclass(frozen=True)
class GdpcParams:
    """Coding knobs of the inner bound when only the source knows the
    interference.

    gamma   fraction of p1 spent on the private layer
    rho     fraction of the remaining power spent cancelling interference
    beta    correlation between the binning codeword and the relay input
    alpha2  inflation factor of the common binning layer
    """

    gamma: float
    rho: float
    beta: float
    alpha2: float

    def __post_init__(self) -> None:
        for name in ("gamma", "rho", "beta", "alpha2"):
            v = _require_finite(name, getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise OutOfRange(f"{name} must lie in [0, 1], got {v}")


def validate_gdpc(c: ChannelParams, g: GdpcParams) -> GdpcParams:
    """Check the channel-coupled bound on rho and return ``g``.

    rho may not exceed min(1, q/((1-gamma) p1)); when (1-gamma) p1 = 0 or
    q = 0 there is nothing to cancel and rho must be exactly 0.
    """
    validate_channel(c)
    bound = rho_upper_bound(c, g.gamma)
    if bound == 0.0:
        if g.rho != 0.0:
            raise OutOfRange(
                "rho must be 0 when (1-gamma)*p1 = 0 or q = 0, "
                f"got rho={g.rho}"
            )
    elif g.rho > bound:
        raise OutOfRange(f"rho must be <= {bound} for this channel, got {g.rho}")
    return g


@dataclass(frozen=True)
class InformedBothParams:
    """Power-split knobs of the construction where source and relay both
    know the interference: gamma for the private layer, beta for the
    fresh-versus-cooperative split of the common power."""

    gamma: float
    beta: float

    def __post_init__(self) -> None:
        for name in ("gamma", "beta"):
            v = _require_finite(name, getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise OutOfRange(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class RatePoint:
    """An achievable pair: private rate r1 to the nearby user and sum
    rate r02 (common plus far-user rate), both in bits per channel use."""

    r1: float
    r02: float

    def __post_init__(self) -> None:
        for name in ("r1", "r02"):
            v = _require_finite(name, getattr(self, name))
            if v < 0.0:
                raise OutOfRange(f"{name} must be >= 0, got {v}")

    @classmethod
    def clamped(cls, r1: float, r02: float) -> "RatePoint":
        """Build a RatePoint applying the negative-to-zero convention.

        NaN (a 0/0 boundary of the analytic expressions) also maps to 0.
        """
        return cls(_clamp_rate(r1), _clamp_rate(r02))


def _clamp_rate(x: float) -> float:
    if math.isnan(x) or x < 0.0:
        return 0.0
    return float(x)


@dataclass(frozen=True)
class GdpcCoeffs:
    """The four power products a, b, c, d whose log ratios give the two
    sum-rate bounds, plus the residual interference power qprime."""

    a: float
    b: float
    c: float
    d: float
    qprime: float


SCHEMES = ("gdpc", "dpc", "informed-both", "nostate-outer")


@dataclass(frozen=True)
class FrontierPoint:
    """One frontier sample: the power split gamma, the optimizing knobs
    (rho and alpha2 are 0 for schemes that do not use them) and the rates."""

    gamma: float
    rho: float
    beta: float
    alpha2: float
    rate: RatePoint


@dataclass(frozen=True)
class Frontier:
    """A rate-region boundary traced over gamma for one scheme.

    Points run with r1 strictly increasing and r02 non-increasing; the
    optimizer discards dominated points before construction.
    """

    scheme: str
    points: tuple[FrontierPoint, ...]

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise OutOfRange(f"unknown scheme {self.scheme!r}, want one of {SCHEMES}")
        for prev, cur in zip(self.points, self.points[1:]):
            if cur.rate.r1 <= prev.rate.r1:
                raise OutOfRange("frontier r1 coordinates must strictly increase")
            if cur.rate.r02 > prev.rate.r02:
                raise OutOfRange("frontier r02 coordinates must be non-increasing")
