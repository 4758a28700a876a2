"""Brute-force evaluation of the achievable regions on tiny discrete
alphabets.

The Gaussian modules check the closed forms against a covariance oracle;
this module checks the region formulas themselves, with no Gaussian
structure anywhere. A channel is a conditional pmf p(y1,y2|x1,x2,s) on
alphabets of size at most 4, an input strategy is a joint pmf over
(s,u1,u2,x1,x2), and every information term is evaluated by exhaustive
summation. dmc_maximize enumerates all strategies whose conditional
probabilities are multiples of 1/denominator, which is crude but exact:
an oracle, not a solver.

Axis order everywhere: (s, u1, u2, x1, x2, y1, y2); the channel tensor
is indexed [s][x1][x2][y1][y2].
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import OutOfRange, RatePoint, RelayRegionsError

AXES = ("s", "u1", "u2", "x1", "x2", "y1", "y2")
_PMF_TOL = 1e-12
_MAX_ALPHABET = 4
_MAX_CANDIDATES = 10**8


class NotNormalized(RelayRegionsError, ValueError):
    """A pmf does not sum to 1 (or has negative mass, or marginals that
    contradict the channel spec)."""


class TooLarge(RelayRegionsError, ValueError):
    """The requested enumeration exceeds the candidate budget."""


def _check_pmf(name: str, p: np.ndarray, axis=None) -> None:
    if (p < 0).any():
        raise NotNormalized(f"{name} has negative entries")
    sums = p.sum() if axis is None else p.sum(axis=axis)
    if not np.allclose(sums, 1.0, rtol=0.0, atol=_PMF_TOL):
        raise NotNormalized(f"{name} must sum to 1 within {_PMF_TOL}")


@dataclass(frozen=True, eq=False)
class DmcSpec:
    """A discrete channel: alphabet sizes for (s,u1,u2,x1,x2,y1,y2), the
    interference pmf p_s and the channel law p(y1,y2|x1,x2,s)."""

    sizes: tuple[int, ...]
    p_s: np.ndarray
    channel: np.ndarray

    def __post_init__(self) -> None:
        if len(self.sizes) != len(AXES):
            raise OutOfRange(f"sizes must list {len(AXES)} cardinalities {AXES}")
        for name, n in zip(AXES, self.sizes):
            if not isinstance(n, (int, np.integer)) or not 1 <= n <= _MAX_ALPHABET:
                raise OutOfRange(
                    f"|{name}| must be an integer in [1, {_MAX_ALPHABET}], got {n!r}"
                )
        ns, nu1, nu2, nx1, nx2, ny1, ny2 = self.sizes
        p_s = np.array(self.p_s, dtype=float)
        channel = np.array(self.channel, dtype=float)
        if p_s.shape != (ns,):
            raise OutOfRange(f"p_s must have shape ({ns},), got {p_s.shape}")
        if channel.shape != (ns, nx1, nx2, ny1, ny2):
            raise OutOfRange(
                "channel must be indexed [s][x1][x2][y1][y2] with shape "
                f"{(ns, nx1, nx2, ny1, ny2)}, got {channel.shape}"
            )
        _check_pmf("p_s", p_s)
        _check_pmf("channel rows", channel, axis=(3, 4))
        p_s.flags.writeable = False
        channel.flags.writeable = False
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        object.__setattr__(self, "p_s", p_s)
        object.__setattr__(self, "channel", channel)


@dataclass(frozen=True, eq=False)
class AuxJoint:
    """A joint strategy pmf over (s,u1,u2,x1,x2)."""

    pmf: np.ndarray

    def __post_init__(self) -> None:
        pmf = np.array(self.pmf, dtype=float)
        if pmf.ndim != 5:
            raise OutOfRange(f"aux joint must be 5-dimensional, got shape {pmf.shape}")
        _check_pmf("aux joint", pmf)
        pmf.flags.writeable = False
        object.__setattr__(self, "pmf", pmf)


def compose_full(d: DmcSpec, a: AuxJoint) -> np.ndarray:
    """Full 7-dim joint p(s,u1,u2,x1,x2,y1,y2) = aux * channel.

    The strategy's interference marginal must reproduce d.p_s: the
    encoder chooses inputs given s, it does not choose s.
    """
    if a.pmf.shape != tuple(d.sizes[:5]):
        raise OutOfRange(
            f"aux joint shape {a.pmf.shape} does not match spec sizes {d.sizes[:5]}"
        )
    marg_s = a.pmf.sum(axis=(1, 2, 3, 4))
    if np.abs(marg_s - d.p_s).max() > _PMF_TOL:
        raise NotNormalized("aux joint marginal over s must equal p_s")
    return a.pmf[..., None, None] * d.channel[:, None, None, :, :, :, :]


def _entropy_bits(p: np.ndarray) -> float:
    flat = np.asarray(p).ravel()
    pos = flat[flat > 0.0]
    return float(-(pos * np.log2(pos)).sum())


def discrete_cmi(joint: np.ndarray, axes, set_a, set_b, set_c=()) -> float:
    """I(A;B|C) in bits on a named-axis joint pmf, with 0 log 0 := 0,
    clamped at 0 against rounding noise."""
    joint = np.asarray(joint, dtype=float)
    axes = tuple(axes)
    if joint.ndim != len(axes):
        raise OutOfRange(f"joint has {joint.ndim} axes but {len(axes)} names given")
    _check_pmf("joint", joint)
    set_a, set_b, set_c = tuple(set_a), tuple(set_b), tuple(set_c)
    for name in (*set_a, *set_b, *set_c):
        if name not in axes:
            raise OutOfRange(f"unknown axis {name!r}, have {axes}")
    groups = (set(set_a), set(set_b), set(set_c))
    if groups[0] & groups[1] or groups[0] & groups[2] or groups[1] & groups[2]:
        raise OutOfRange("the three axis sets must be disjoint")

    def h(keep: set) -> float:
        drop = tuple(i for i, name in enumerate(axes) if name not in keep)
        return _entropy_bits(joint.sum(axis=drop)) if drop else _entropy_bits(joint)

    a, b, c = groups
    val = h(a | c) + h(b | c) - h(c) - h(a | b | c)
    return max(0.0, val)


def eval_informed_both(d: DmcSpec, a: AuxJoint) -> RatePoint:
    """Achievable pair when source and relay both know the interference:
    every bound conditions on s, and no binning penalty appears."""
    full = compose_full(d, a)
    r1 = discrete_cmi(full, AXES, ("x1",), ("y1",), ("s", "u1", "x2"))
    t1 = discrete_cmi(full, AXES, ("u2",), ("y1",), ("s", "u1"))
    t2 = discrete_cmi(full, AXES, ("u1", "u2"), ("y2",)) - discrete_cmi(
        full, AXES, ("u1", "u2"), ("s",)
    )
    return RatePoint.clamped(r1, min(t1, t2))


def eval_informed_source(d: DmcSpec, a: AuxJoint) -> RatePoint:
    """Achievable pair when only the source knows the interference: each
    mutual information pays the binning penalty I(aux; s | ...)."""
    full = compose_full(d, a)
    r1 = discrete_cmi(full, AXES, ("u1",), ("y1",), ("u2", "x2")) - discrete_cmi(
        full, AXES, ("u1",), ("s",), ("u2", "x2")
    )
    penalty = discrete_cmi(full, AXES, ("u2",), ("s",), ("x2",))
    t1 = discrete_cmi(full, AXES, ("u2",), ("y1",), ("x2",)) - penalty
    t2 = discrete_cmi(full, AXES, ("u2", "x2"), ("y2",)) - penalty
    return RatePoint.clamped(r1, min(t1, t2))


_BOUNDS = {
    "informed-both": eval_informed_both,
    "informed-source": eval_informed_source,
}


def _compositions(total: int, cells: int) -> np.ndarray:
    """All nonneg integer vectors of the given length summing to total,
    in lexicographic order, as an (count, cells) array."""
    out = []
    for bars in itertools.combinations(range(total + cells - 1), cells - 1):
        prev = -1
        row = []
        for b in (*bars, total + cells - 1):
            row.append(b - prev - 1)
            prev = b
        out.append(row)
    return np.array(out, dtype=float)


@dataclass(frozen=True)
class DmcOptResult:
    best: AuxJoint
    value: RatePoint
    evaluations: int
    bounds: str


def dmc_maximize(
    d: DmcSpec,
    bounds: str = "informed-source",
    denominator: int = 8,
    objective: str = "r02",
) -> DmcOptResult:
    """Exhaustively search strategies whose per-state conditional pmfs
    have entries in multiples of 1/denominator.

    Maximizes the chosen coordinate (r02 by default), breaking ties by
    the other coordinate and then by the lexicographically smallest
    flattened pmf, so the argmax is reproducible and independent of
    enumeration order.
    """
    if bounds not in _BOUNDS:
        raise OutOfRange(f"bounds must be one of {tuple(_BOUNDS)}, got {bounds!r}")
    if denominator not in (4, 8, 16):
        raise OutOfRange(f"denominator must be 4, 8 or 16, got {denominator!r}")
    if objective not in ("r02", "r1"):
        raise OutOfRange(f"objective must be 'r02' or 'r1', got {objective!r}")
    evaluate = _BOUNDS[bounds]
    ns, nu1, nu2, nx1, nx2 = d.sizes[:5]
    cells = nu1 * nu2 * nx1 * nx2
    per_state = math.comb(denominator + cells - 1, cells - 1)
    total = per_state**ns
    if total > _MAX_CANDIDATES:
        raise TooLarge(
            f"{total} candidate strategies exceed the {_MAX_CANDIDATES} budget"
        )
    cond = _compositions(denominator, cells) / float(denominator)
    shape = (ns, nu1, nu2, nx1, nx2)
    best_key: tuple[float, float] | None = None
    best_flat: tuple[float, ...] | None = None
    best_aux: AuxJoint | None = None
    best_rate: RatePoint | None = None
    evaluations = 0
    for combo in itertools.product(range(per_state), repeat=ns):
        pmf = (cond[list(combo)] * d.p_s[:, None]).reshape(shape)
        aux = AuxJoint(pmf)
        rate = evaluate(d, aux)
        evaluations += 1
        key = (rate.r02, rate.r1) if objective == "r02" else (rate.r1, rate.r02)
        flat = tuple(pmf.ravel())
        if (
            best_key is None
            or key > best_key
            or (key == best_key and flat < best_flat)
        ):
            best_key, best_flat, best_aux, best_rate = key, flat, aux, rate
    return DmcOptResult(
        best=best_aux, value=best_rate, evaluations=evaluations, bounds=bounds
    )


def make_degraded_channel(p_y1: np.ndarray, p_y2_given_y1x2: np.ndarray) -> np.ndarray:
    """Compose p(y1,y2|x1,x2,s) = p(y1|x1,x2,s) * p(y2|y1,x2).

    p_y1 is indexed [s][x1][x2][y1], p_y2_given_y1x2 is [y1][x2][y2].
    The evaluators accept any channel tensor; this factory is for specs
    that do want the far output built from the relay output.
    """
    p_y1 = np.asarray(p_y1, dtype=float)
    p_y2 = np.asarray(p_y2_given_y1x2, dtype=float)
    _check_pmf("p(y1|x1,x2,s)", p_y1, axis=3)
    _check_pmf("p(y2|y1,x2)", p_y2, axis=2)
    return np.einsum("sabc,cbd->sabcd", p_y1, p_y2)


def binary_pipes_spec() -> DmcSpec:
    """Noiseless binary test channel: y1 copies x1, y2 copies x2, a
    single interference symbol and a singleton u1 alphabet."""
    eye = np.eye(2)
    p_y1 = np.zeros((1, 2, 2, 2))
    p_y1[0] = eye[:, None, :]  # p(y1|x1,x2) = [x1 == y1]
    p_y2 = np.zeros((2, 2, 2))
    p_y2[:] = eye[None, :, :]  # p(y2|y1,x2) = [x2 == y2]
    channel = make_degraded_channel(p_y1, p_y2)
    return DmcSpec(
        sizes=(1, 1, 2, 2, 2, 2, 2), p_s=np.array([1.0]), channel=channel
    )
