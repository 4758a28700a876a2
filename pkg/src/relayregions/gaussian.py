"""Covariance-based verification of the closed-form rates.

Every rate expression in this package is a combination of mutual
informations between jointly Gaussian variables. This module rebuilds
those variables explicitly: it assembles the joint covariance matrix
implied by each coding construction and evaluates

    I(A; B | C) = 0.5*log2( det S_AC * det S_BC / (det S_C * det S_ABC) )

directly from labeled submatrices, without touching the closed forms.
Agreement between the two routes is what the verify_* reports certify.

The constructions deliberately contain deterministic linear relations
(the relay input is a scaled copy of a layer the source also sends), so
the naive four-determinant formula would hit singular submatrices.
Before evaluating, each label set is reduced to a subset that is
linearly independent given the conditioning set; dropping a label that
is almost surely a linear function of the others leaves the mutual
information unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .model import (
    ChannelParams,
    GdpcParams,
    InformedBothParams,
    OutOfRange,
    RelayRegionsError,
    validate_channel,
    validate_gdpc,
)
from .rates import cap_c, gdpc_coeffs

_LN2 = math.log(2.0)
_RANK_TOL = 1e-10
_PSD_TOL = -1e-10
_LOGDET_FLOOR = math.log(1e-300)


class SingularSubmatrix(RelayRegionsError, ArithmeticError):
    """A determinant needed by the mutual-information formula vanished
    even after redundant labels were eliminated."""


class ZeroStatePower(RelayRegionsError, ValueError):
    """The encoder-informed construction needs interference power q > 0."""


@dataclass(frozen=True, eq=False)
class CovarianceSystem:
    """A labeled joint Gaussian covariance over named scalar variables."""

    labels: tuple[str, ...]
    sigma: np.ndarray

    def __post_init__(self) -> None:
        sigma = np.array(self.sigma, dtype=float)
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
            raise OutOfRange(f"sigma must be square, got shape {sigma.shape}")
        if len(self.labels) != sigma.shape[0]:
            raise OutOfRange(
                f"{len(self.labels)} labels for a {sigma.shape[0]}-dim sigma"
            )
        if len(set(self.labels)) != len(self.labels):
            raise OutOfRange("labels must be unique")
        if not np.allclose(sigma, sigma.T, rtol=0.0, atol=1e-9):
            raise OutOfRange("sigma must be symmetric")
        if float(np.linalg.eigvalsh(sigma).min(initial=0.0)) < _PSD_TOL:
            raise OutOfRange("sigma is not positive semidefinite")
        sigma.flags.writeable = False
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "labels", tuple(self.labels))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise OutOfRange(f"unknown label {label!r}, have {self.labels}") from None

    def var(self, label: str) -> float:
        i = self.index(label)
        return float(self.sigma[i, i])

    def cov(self, a: str, b: str) -> float:
        return float(self.sigma[self.index(a), self.index(b)])


def _residual_variance(sigma: np.ndarray, kept: list[int], j: int) -> float:
    """Variance of component j left after projecting onto span(kept)."""
    if not kept:
        return float(sigma[j, j])
    m = sigma[np.ix_(kept, kept)]
    v = sigma[kept, j]
    try:
        sol = np.linalg.solve(m, v)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(m, v, rcond=None)[0]
    return float(sigma[j, j] - v @ sol)


def _reduce(sigma: np.ndarray, base: list[int], cand: list[int]) -> list[int]:
    """Subset of cand that stays linearly independent on top of base."""
    kept = list(base)
    out = []
    for j in cand:
        if _residual_variance(sigma, kept, j) > _RANK_TOL:
            out.append(j)
            kept.append(j)
    return out


def _logdet(sigma: np.ndarray, rows: list[int]) -> float:
    if not rows:
        return 0.0
    sign, val = np.linalg.slogdet(sigma[np.ix_(rows, rows)])
    if sign <= 0.0 or val <= _LOGDET_FLOOR:
        raise SingularSubmatrix(
            "singular covariance submatrix; eliminate dependent labels first"
        )
    return float(val)


def _unique_indices(cov: CovarianceSystem, labels: Iterable[str]) -> list[int]:
    out: list[int] = []
    for lab in labels:
        i = cov.index(lab)
        if i not in out:
            out.append(i)
    return out


def gaussian_cmi(
    cov: CovarianceSystem,
    set_a: Iterable[str],
    set_b: Iterable[str],
    set_c: Iterable[str] = (),
) -> float:
    """Conditional mutual information I(A; B | C) in bits.

    Labels appearing in C (or determined by C, or redundant within their
    own set) are eliminated before the determinant formula is applied, so
    the deterministic relations of the constructions are handled exactly.
    An empty A or B after elimination gives 0. If a label survives in
    both A and B the information diverges and SingularSubmatrix is raised.
    """
    a_idx = _unique_indices(cov, set_a)
    b_idx = _unique_indices(cov, set_b)
    c_idx = _unique_indices(cov, set_c)
    return _cmi_from_sigma(cov.sigma, a_idx, b_idx, c_idx)


def _cmi_from_sigma(
    sigma: np.ndarray, a_idx: list[int], b_idx: list[int], c_idx: list[int]
) -> float:
    c_kept = _reduce(sigma, [], c_idx)
    a_kept = _reduce(sigma, c_kept, a_idx)
    b_kept = _reduce(sigma, c_kept, b_idx)
    if not a_kept or not b_kept:
        return 0.0
    if set(a_kept) & set(b_kept):
        raise SingularSubmatrix(
            "a non-degenerate label sits in both sets; mutual information diverges"
        )
    val = (
        _logdet(sigma, a_kept + c_kept)
        + _logdet(sigma, b_kept + c_kept)
        - _logdet(sigma, c_kept)
        - _logdet(sigma, a_kept + b_kept + c_kept)
    ) / (2.0 * _LN2)
    if val < 0.0:
        if val < -1e-9:
            raise SingularSubmatrix(
                f"mutual information evaluated to {val}; matrix too ill-conditioned"
            )
        return 0.0
    return val


def _assemble(labels: tuple[str, ...], mix: np.ndarray, variances) -> CovarianceSystem:
    """Covariance of labels = mix @ basis, basis independent with the
    given variances: sigma = mix diag(variances) mix^T (exactly PSD)."""
    sigma = (mix * np.asarray(variances, dtype=float)) @ mix.T
    return CovarianceSystem(tuple(labels), sigma)


class InformedBothCoeffs(NamedTuple):
    """Derived constants of the both-informed construction."""

    p_coop: float
    p_fresh: float
    lam: float
    alpha1: float
    alpha2: float


def informed_both_coeffs(
    c: ChannelParams, p: InformedBothParams
) -> InformedBothCoeffs:
    """Layer powers and inflation factors of the both-informed scheme.

    The common power (1-gamma)*p1 splits into a fresh part beta*(1-gamma)*p1
    carried alone by the source and a cooperative part sent coherently with
    the relay, whose combined power is p_coop = (sqrt((1-beta)(1-gamma)p1)
    + sqrt(p2))^2. lam is the source's share of the cooperative codeword.
    """
    validate_channel(c)
    gbar_p1 = (1.0 - p.gamma) * c.p1
    p_coop = (math.sqrt((1.0 - p.beta) * gbar_p1) + math.sqrt(c.p2)) ** 2
    p_fresh = p.beta * gbar_p1
    lam = math.sqrt((1.0 - p.beta) * gbar_p1 / p_coop) if p_coop > 0.0 else 0.0
    den = p_coop + p_fresh + p.gamma * c.p1 + c.n2
    return InformedBothCoeffs(
        p_coop=p_coop,
        p_fresh=p_fresh,
        lam=lam,
        alpha1=p_coop / den,
        alpha2=p_fresh / den,
    )


def build_cov_informed_both(
    c: ChannelParams, p: InformedBothParams
) -> CovarianceSystem:
    """Joint covariance of the construction with the interference known
    at source and relay.

    Independent basis components: the interference S (power q), the
    cooperative innovation V1 (p_coop), the fresh innovation V2 (p_fresh),
    the private signal X1p (gamma*p1) and the two noises. Then

        U1 = alpha1*S + V1          (cooperative auxiliary)
        U2 = alpha2*S + V2          (fresh auxiliary)
        X2 = (1-lam)*V1             (relay input)
        X1 = lam*V1 + V2 + X1p      (source input)
        Y1 = X1 + S + Z1
        Y2 = Y1 + X2 + Z2p

    Both power constraints hold with equality by construction.
    """
    k = informed_both_coeffs(c, p)
    variances = (c.q, k.p_coop, k.p_fresh, p.gamma * c.p1, c.n1, c.n2 - c.n1)
    labels = ("S", "U1", "U2", "X1p", "X1", "X2", "Y1", "Y2")
    #          S         V1     V2   X1p  Z1   Z2p
    mix = np.array(
        [
            [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],  # S
            [k.alpha1, 1.0, 0.0, 0.0, 0.0, 0.0],  # U1
            [k.alpha2, 0.0, 1.0, 0.0, 0.0, 0.0],  # U2
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],  # X1p
            [0.0, k.lam, 1.0, 1.0, 0.0, 0.0],  # X1
            [0.0, 1.0 - k.lam, 0.0, 0.0, 0.0, 0.0],  # X2
            [1.0, k.lam, 1.0, 1.0, 1.0, 0.0],  # Y1
            [1.0, 1.0, 1.0, 1.0, 1.0, 1.0],  # Y2
        ]
    )
    cov = _assemble(labels, mix, variances)
    assert cov.var("X1") <= c.p1 + 1e-9
    assert cov.var("X2") <= c.p2 + 1e-9
    return cov


def build_cov_informed_source(c: ChannelParams, g: GdpcParams) -> CovarianceSystem:
    """Joint covariance of the construction with the interference known
    at the source only.

    A fraction rho of the common power is spent sending -sqrt(rho*(1-gamma)
    *p1/q)*S, which shrinks the interference seen by both receivers to
    Sprime with power qprime. The rest, Uw with power pw = (1-rho)(1-gamma)
    *p1, is the binning codeword, correlated with the relay input X2 so
    that E[Uw*X2] = beta*sqrt(pw*p2). The auxiliaries are

        U2 = alpha2*Sprime + Uw                       (common layer)
        U1 = alpha1*(1-alpha2)*Sprime + X1p           (private layer)

    with alpha1 = gamma*p1/(gamma*p1 + n1), and the channel outputs obey
    Y1 = X1p + Uw + Sprime + Z1 exactly as linear relations.
    """
    validate_gdpc(c, g)
    if c.q <= 0.0:
        raise ZeroStatePower(
            "interference power q must be > 0 for the encoder-informed "
            "construction; with q = 0 use the no-interference region"
        )
    gbar = 1.0 - g.gamma
    pw = (1.0 - g.rho) * gbar * c.p1
    s_coef = math.sqrt(g.rho * gbar * c.p1 / c.q)
    kappa = 1.0 - s_coef
    alpha1 = g.gamma * c.p1 / (g.gamma * c.p1 + c.n1)
    if pw > 0.0:
        c_uw = g.beta * math.sqrt(c.p2 / pw)
        e2_var = (1.0 - g.beta**2) * c.p2
    else:
        # no binning power: the relay input carries its full power alone
        c_uw = 0.0
        e2_var = c.p2
    variances = (c.q, g.gamma * c.p1, pw, e2_var, c.n1, c.n2 - c.n1)
    labels = ("S", "Sprime", "U1", "U2", "Uw", "X1p", "X1", "X2", "Y1", "Y2")
    #          S                X1p  Uw   E2   Z1   Z2p
    mix = np.array(
        [
            [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],  # S
            [kappa, 0.0, 0.0, 0.0, 0.0, 0.0],  # Sprime
            [alpha1 * (1.0 - g.alpha2) * kappa, 1.0, 0.0, 0.0, 0.0, 0.0],  # U1
            [g.alpha2 * kappa, 0.0, 1.0, 0.0, 0.0, 0.0],  # U2
            [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],  # Uw
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],  # X1p
            [-s_coef, 1.0, 1.0, 0.0, 0.0, 0.0],  # X1
            [0.0, 0.0, c_uw, 1.0, 0.0, 0.0],  # X2
            [kappa, 1.0, 1.0, 0.0, 1.0, 0.0],  # Y1
            [kappa, 1.0, 1.0 + c_uw, 1.0, 1.0, 1.0],  # Y2
        ]
    )
    cov = _assemble(labels, mix, variances)
    assert cov.var("X1") <= c.p1 + 1e-9
    assert cov.var("X2") <= c.p2 + 1e-9
    return cov


@dataclass(frozen=True)
class TermCheck:
    """One compared quantity: the oracle value against the closed form."""

    term: str
    oracle: float
    closed: float

    @property
    def abs_diff(self) -> float:
        return abs(self.oracle - self.closed)

    def to_dict(self) -> dict:
        return {
            "term": self.term,
            "oracle": self.oracle,
            "closed": self.closed,
            "abs_diff": self.abs_diff,
        }


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of one verification: passed iff max_abs_diff <= tol."""

    name: str
    tol: float
    max_abs_diff: float
    passed: bool
    details: tuple[TermCheck, ...]

    @classmethod
    def from_terms(
        cls, name: str, tol: float, details: tuple[TermCheck, ...]
    ) -> "VerifyReport":
        worst = max(t.abs_diff for t in details)
        return cls(
            name=name,
            tol=tol,
            max_abs_diff=worst,
            passed=worst <= tol,
            details=details,
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "tol": self.tol,
            "max_abs_diff": self.max_abs_diff,
            "pass": self.passed,
            "details": [t.to_dict() for t in self.details],
        }


def verify_informed_both(
    c: ChannelParams, p: InformedBothParams, tol: float = 1e-9
) -> VerifyReport:
    """Check that the both-informed construction achieves the
    no-interference region, term by term.

    The gated private-rate row conditions the oracle on everything the
    nearby user has decoded (S, U1, U2, X2), which is what the decoder
    actually does and what matches cap_c(gamma*p1/n1). The row that
    conditions on the cooperative layer only is reported as well, against
    its own closed form cap_c((gamma + beta*(1-gamma))*p1/n1): leaving the
    fresh layer undecoded folds its power into the private signal.

    Every compared value is free of q, which is the claimed interference
    independence of the capacity region.
    """
    cov = build_cov_informed_both(c, p)
    gbar_p1 = (1.0 - p.gamma) * c.p1
    gp1 = p.gamma * c.p1
    cross = 2.0 * math.sqrt((1.0 - p.beta) * gbar_p1 * c.p2)
    details = (
        TermCheck(
            term="I(X1;Y1|S,U1,U2,X2)",
            oracle=gaussian_cmi(cov, ["X1"], ["Y1"], ["S", "U1", "U2", "X2"]),
            closed=cap_c(gp1 / c.n1),
        ),
        TermCheck(
            term="I(X1;Y1|S,U1,X2)",
            oracle=gaussian_cmi(cov, ["X1"], ["Y1"], ["S", "U1", "X2"]),
            closed=cap_c((gp1 + p.beta * gbar_p1) / c.n1),
        ),
        TermCheck(
            term="I(U2;Y1|S,U1)",
            oracle=gaussian_cmi(cov, ["U2"], ["Y1"], ["S", "U1"]),
            closed=cap_c(p.beta * gbar_p1 / (gp1 + c.n1)),
        ),
        TermCheck(
            term="I(U1,U2;Y2)-I(U1,U2;S)",
            oracle=gaussian_cmi(cov, ["U1", "U2"], ["Y2"])
            - gaussian_cmi(cov, ["U1", "U2"], ["S"]),
            closed=cap_c((gbar_p1 + c.p2 + cross) / (gp1 + c.n2)),
        ),
    )
    return VerifyReport.from_terms("informed-both-capacity", tol, details)


def verify_gdpc(c: ChannelParams, g: GdpcParams, tol: float = 1e-9) -> VerifyReport:
    """Check the closed-form a/b, c/d log ratios and the private rate
    against the covariance oracle for the encoder-informed construction.

    The closed forms are compared unclamped, so agreement is meaningful
    even where a parameter choice drives a bound negative.
    """
    cov = build_cov_informed_source(c, g)
    k = gdpc_coeffs(c, g)
    gp_common = gaussian_cmi(cov, ["U2"], ["Sprime"], ["X2"])
    details = (
        TermCheck(
            term="I(U1;Y1|U2,X2)-I(U1;Sprime|U2,X2)",
            oracle=gaussian_cmi(cov, ["U1"], ["Y1"], ["U2", "X2"])
            - gaussian_cmi(cov, ["U1"], ["Sprime"], ["U2", "X2"]),
            closed=cap_c(g.gamma * c.p1 / c.n1),
        ),
        TermCheck(
            term="I(U2;Y1|X2)-I(U2;Sprime|X2)",
            oracle=gaussian_cmi(cov, ["U2"], ["Y1"], ["X2"]) - gp_common,
            closed=0.5 * math.log2(k.a / k.b),
        ),
        TermCheck(
            term="I(U2,X2;Y2)-I(U2;Sprime|X2)",
            oracle=gaussian_cmi(cov, ["U2", "X2"], ["Y2"]) - gp_common,
            closed=0.5 * math.log2(k.c / k.d),
        ),
    )
    return VerifyReport.from_terms("gdpc-closed-forms", tol, details)


def verify_relay_identity(
    c: ChannelParams, p: InformedBothParams, tol: float = 1e-9
) -> VerifyReport:
    """Check that conditioning the fresh layer's rate on the relay input
    or on the cooperative auxiliary gives the same value.

    Under the both-informed construction X2 is an invertible function of
    U1 given S whenever p2 > 0, so I(U2;Y1|S,X2) = I(U2;Y1|S,U1). With
    p2 = 0 the relay input is identically zero and the identity only
    survives at beta = 0 or beta = 1, where the cooperative auxiliary
    carries no innovation either.
    """
    cov = build_cov_informed_both(c, p)
    lhs = gaussian_cmi(cov, ["U2"], ["Y1"], ["S", "X2"])
    rhs = gaussian_cmi(cov, ["U2"], ["Y1"], ["S", "U1"])
    details = (TermCheck(term="I(U2;Y1|S,X2) vs I(U2;Y1|S,U1)", oracle=lhs, closed=rhs),)
    return VerifyReport.from_terms("relay-rate-identity", tol, details)


def sample_mi_estimate(
    cov: CovarianceSystem,
    set_a: Iterable[str],
    set_b: Iterable[str],
    set_c: Iterable[str],
    n_samples: int,
    seed: int,
) -> float:
    """Monte-Carlo replica of gaussian_cmi: draw n_samples joint Gaussian
    vectors, form the sample covariance (divisor n-1) and evaluate the
    same reduced log-determinant formula on it.

    Sampling uses numpy's default PCG64 generator seeded with ``seed``
    and the symmetric eigendecomposition factor of sigma, so results are
    reproducible run to run.
    """
    if n_samples < 1000:
        raise OutOfRange(f"n_samples must be >= 1000, got {n_samples}")
    w, vecs = np.linalg.eigh(cov.sigma)
    factor = vecs * np.sqrt(np.clip(w, 0.0, None))
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n_samples, len(cov.labels))) @ factor.T
    x -= x.mean(axis=0)
    sample_sigma = (x.T @ x) / (n_samples - 1)
    sample_sigma = 0.5 * (sample_sigma + sample_sigma.T)
    a_idx = _unique_indices(cov, set_a)
    b_idx = _unique_indices(cov, set_b)
    c_idx = _unique_indices(cov, set_c)
    return _cmi_from_sigma(sample_sigma, a_idx, b_idx, c_idx)
