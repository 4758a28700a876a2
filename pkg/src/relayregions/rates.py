"""Closed-form achievable rates for the relay broadcast channel with
additive Gaussian interference.

Private layer: a fraction gamma of the source power rides under the
common layers and is decoded only by the nearby user, contributing
cap_c(gamma*p1/n1) regardless of the interference (binning against the
residual interference absorbs it).

Common layers, interference known at the source only: the remaining
power (1-gamma)*p1 splits again, a fraction rho spent subtracting a
scaled copy of the interference and the rest, pw = (1-rho)(1-gamma)*p1,
spent on a binned codeword correlated (coefficient beta) with the relay
input. With pwt = (1-beta^2)*pw the part of that codeword independent
of the relay input, and

    qprime = (sqrt(q) - sqrt(rho*(1-gamma)*p1))^2

the leftover interference power, the two sum-rate bounds are
0.5*log2(a/b) and 0.5*log2(c/d) where

    a = pwt*(pwt + qprime + gamma*p1 + n1)
    b = (1-alpha2)^2*pwt*qprime + (n1 + gamma*p1)*(pwt + alpha2^2*qprime)
    c = pwt*(pw + p2 + qprime + 2*beta*sqrt(pw*p2) + gamma*p1 + n2)
    d = (1-alpha2)^2*pwt*qprime + (n2 + gamma*p1)*(pwt + alpha2^2*qprime)

and alpha2 is the inflation factor of the common binning layer.

Interference known everywhere (or absent): the capacity region is the
no-interference one. With power split gamma and cooperative split beta3,

    r1  = cap_c(gamma*p1/n1)
    r02 = min( cap_c(beta3*(1-gamma)*p1/(gamma*p1+n1)),
               cap_c(((1-gamma)*p1 + p2
                      + 2*sqrt((1-beta3)*(1-gamma)*p1*p2))/(gamma*p1+n2)) ).

beta3 is deliberately a different symbol from the binning beta above:
the two agree only through the mapping beta3 = 1 - beta**2, which the
test suite checks on the q = 0 reduction.

Negative or 0/0-indeterminate expressions clamp to exactly 0 (they mark
useless parameter choices, not invalid inputs).
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .model import (
    ChannelParams,
    GdpcCoeffs,
    GdpcParams,
    OutOfRange,
    RatePoint,
    RelayRegionsError,
    validate_channel,
    validate_gdpc,
)

_LN2 = math.log(2.0)


class NegativeArgument(RelayRegionsError, ValueError):
    """cap_c called with a negative SNR-like argument."""


def cap_c(x: float) -> float:
    """Gaussian capacity function 0.5*log2(1+x), x >= 0, in bits."""
    if x < 0:
        raise NegativeArgument(f"cap_c argument must be >= 0, got {x}")
    return 0.5 * math.log1p(x) / _LN2


def qprime(c: ChannelParams, gamma: float, rho: float) -> float:
    """Residual interference power (sqrt(q) - sqrt(rho*(1-gamma)*p1))^2."""
    validate_gdpc(c, GdpcParams(gamma=gamma, rho=rho, beta=0.0, alpha2=0.0))
    spent = rho * (1.0 - gamma) * c.p1
    return (math.sqrt(c.q) - math.sqrt(spent)) ** 2


def _sum_terms(p1, p2, q, n1, n2, gamma, rho, beta, alpha2):
    """Unclamped log-ratio sum-rate terms, elementwise over numpy inputs.

    Returns (r1_sum, r2_sum, (a, b, c, d, qprime)). Zero denominators can
    only occur together with zero numerators; callers clamp the resulting
    non-finite values to 0.
    """
    gbar = 1.0 - gamma
    pw = (1.0 - rho) * gbar * p1
    pwt = (1.0 - beta * beta) * pw
    qp = (np.sqrt(q) - np.sqrt(rho * gbar * p1)) ** 2
    gp1 = gamma * p1
    a = pwt * (pwt + qp + gp1 + n1)
    b = (1.0 - alpha2) ** 2 * pwt * qp + (n1 + gp1) * (pwt + alpha2**2 * qp)
    c = pwt * (pw + p2 + qp + 2.0 * beta * np.sqrt(pw * p2) + gp1 + n2)
    d = (1.0 - alpha2) ** 2 * pwt * qp + (n2 + gp1) * (pwt + alpha2**2 * qp)
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = 0.5 * np.log2(a / b)
        r2 = 0.5 * np.log2(c / d)
    return r1, r2, (a, b, c, d, qp)


def _clamp_array(r):
    """Map negative, nan and -inf entries to 0.0 (clamping convention)."""
    return np.where(np.isfinite(r) & (r > 0.0), r, 0.0)


class GdpcRates(NamedTuple):
    r1_sum: float
    r2_sum: float
    r_private: float


def gdpc_coeffs(c: ChannelParams, g: GdpcParams) -> GdpcCoeffs:
    """The a, b, c, d products and qprime at one parameter point."""
    validate_gdpc(c, g)
    _, _, (a, b, cc, d, qp) = _sum_terms(
        c.p1, c.p2, c.q, c.n1, c.n2, g.gamma, g.rho, g.beta, g.alpha2
    )
    return GdpcCoeffs(a=float(a), b=float(b), c=float(cc), d=float(d), qprime=float(qp))


def gdpc_rates(c: ChannelParams, g: GdpcParams) -> GdpcRates:
    """Clamped sum-rate bounds and the private rate at one point.

    The achievable sum rate of the scheme is min(r1_sum, r2_sum); the
    private rate cap_c(gamma*p1/n1) comes on top of it.
    """
    validate_gdpc(c, g)
    r1, r2, _ = _sum_terms(
        c.p1, c.p2, c.q, c.n1, c.n2, g.gamma, g.rho, g.beta, g.alpha2
    )
    return GdpcRates(
        r1_sum=float(_clamp_array(r1)),
        r2_sum=float(_clamp_array(r2)),
        r_private=cap_c(g.gamma * c.p1 / c.n1),
    )


def _check_unit(name: str, v: float) -> float:
    if not 0.0 <= v <= 1.0:
        raise OutOfRange(f"{name} must lie in [0, 1], got {v}")
    return float(v)


def nostate_terms(c: ChannelParams, gamma: float, beta3: float) -> tuple[float, float]:
    """The two competing sum-rate terms of the no-interference region.

    The first (relay decoding) term increases with beta3, the second
    (far-user combining) term decreases; their min is what the region
    maximizes over beta3.
    """
    validate_channel(c)
    _check_unit("gamma", gamma)
    _check_unit("beta3", beta3)
    gbar_p1 = (1.0 - gamma) * c.p1
    t1 = cap_c(beta3 * gbar_p1 / (gamma * c.p1 + c.n1))
    cross = 2.0 * math.sqrt((1.0 - beta3) * gbar_p1 * c.p2)
    t2 = cap_c((gbar_p1 + c.p2 + cross) / (gamma * c.p1 + c.n2))
    return t1, t2


def nostate_region(c: ChannelParams, gamma: float, beta3: float) -> RatePoint:
    """Rate pair of the no-interference capacity region at (gamma, beta3)."""
    t1, t2 = nostate_terms(c, gamma, beta3)
    return RatePoint.clamped(cap_c(gamma * c.p1 / c.n1), min(t1, t2))


def relay_rate_informed_both(c: ChannelParams) -> float:
    """Best sum rate of the relay channel (no private layer, gamma = 0)
    when source and relay both know the interference; independent of q."""
    from .optimize import max_beta_nostate

    return max_beta_nostate(validate_channel(c), 0.0)[1]
