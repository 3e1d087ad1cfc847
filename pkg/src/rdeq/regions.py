"""Closed-form evaluators for every region characterization.

Each evaluator takes an explicit auxiliary system (channels plus a
reconstruction map) and returns the induced bound values for the region it
belongs to.  A candidate tuple (R_A, R_C, D, Delta) is a member *at that
system* iff it satisfies the returned inequalities; the region itself is the
union (plus convex hull / closure) over all systems, which the optimizer
module searches.

Cardinality caps are deliberately not enforced here: membership testing must
accept systems of any size.  Only the optimizer applies the caps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .probability import (
    Channel,
    DistortionMeasure,
    JointSource,
    compose_full_joint,
    entropy_unchecked,
    h2,
    star,
)

#: axis names for the composed joint
_U, _V, _W, _A, _C, _E = range(6)

LOG2_2PIE = math.log2(2.0 * math.pi * math.e)


def positive_part(x: float) -> float:
    return max(0.0, x)


# ---------------------------------------------------------------------------
# entropy helpers over a dense multi-axis joint
# ---------------------------------------------------------------------------

def _ent(p: np.ndarray, axes: tuple[int, ...]) -> float:
    drop = tuple(ax for ax in range(p.ndim) if ax not in axes)
    return entropy_unchecked(p.sum(axis=drop) if drop else p)


def _cond_ent(p: np.ndarray, x_axes: tuple[int, ...], z_axes: tuple[int, ...]) -> float:
    """H(X|Z)."""
    hz = _ent(p, z_axes) if z_axes else 0.0
    return max(0.0, _ent(p, x_axes + z_axes) - hz)


def _cmi(p: np.ndarray, x_axes: tuple[int, ...], y_axes: tuple[int, ...],
         z_axes: tuple[int, ...] = ()) -> float:
    """I(X;Y|Z) = H(XZ) + H(YZ) - H(XYZ) - H(Z)."""
    hz = _ent(p, z_axes) if z_axes else 0.0
    val = (
        _ent(p, x_axes + z_axes)
        + _ent(p, y_axes + z_axes)
        - _ent(p, x_axes + y_axes + z_axes)
        - hz
    )
    return max(0.0, val)


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegionPoint:
    """A tuple (R_A, R_C, D, Delta); rates in bits/symbol, D in distortion units.

    Delta may be negative only under the Gaussian differential-entropy
    convention; discrete constructors keep it in [0, log2 |A|].
    """

    r_a: float
    r_c: float
    d: float
    delta: float

    def __post_init__(self) -> None:
        if self.r_a < -1e-12 or self.r_c < -1e-12 or self.d < -1e-12:
            raise ValidationError(f"rates and distortion must be non-negative: {self}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.r_a, self.r_c, self.d, self.delta)


@dataclass(frozen=True)
class AuxiliarySystem:
    """Channels p(u|v), p(v|a), p(w|c) and a reconstruction map V x W -> A."""

    u_given_v: Channel
    v_given_a: Channel
    w_given_c: Channel
    reconstruction: np.ndarray

    def __post_init__(self) -> None:
        recon = np.asarray(self.reconstruction, dtype=int)
        nv = self.v_given_a.output_size
        nw = self.w_given_c.output_size
        if recon.shape != (nv, nw):
            raise ValidationError(
                f"reconstruction must have shape ({nv}, {nw}), got {recon.shape}"
            )
        if self.u_given_v.input_size != nv:
            raise ValidationError("u_given_v input size must match v_given_a output size")
        recon = recon.copy()
        recon.setflags(write=False)
        object.__setattr__(self, "reconstruction", recon)

    @property
    def sizes(self) -> tuple[int, int, int]:
        """(|U|, |V|, |W|)."""
        return (
            self.u_given_v.output_size,
            self.v_given_a.output_size,
            self.w_given_c.output_size,
        )


def binary_chain_system(alpha: float, beta: float, w_given_c: Channel,
                        reconstruction: np.ndarray) -> AuxiliarySystem:
    """The degraded binary chain A -BSC(alpha)-> V -BSC(beta)-> U."""
    return AuxiliarySystem(Channel.bsc(beta), Channel.bsc(alpha), w_given_c, reconstruction)


@dataclass(frozen=True)
class InnerBounds:
    """The six bound values of the inner region at one auxiliary system.

    A tuple is a member at this system iff
        R_A >= r_a_min,  R_C >= r_c_min,  R_A + R_C >= sum_min,
        D >= d_min,  Delta <= delta_max,  Delta - R_C <= delta_minus_rc_max.
    """

    r_a_min: float
    r_c_min: float
    sum_min: float
    d_min: float
    delta_max: float
    delta_minus_rc_max: float

    def admits(self, point: RegionPoint, tol: float = 1e-9) -> bool:
        return (
            point.r_a >= self.r_a_min - tol
            and point.r_c >= self.r_c_min - tol
            and point.r_a + point.r_c >= self.sum_min - tol
            and point.d >= self.d_min - tol
            and point.delta <= self.delta_max + tol
            and point.delta - point.r_c <= self.delta_minus_rc_max + tol
        )


@dataclass(frozen=True)
class UncodedBounds:
    """Bound values for the uncoded-side-information region at one system."""

    r_a_min: float
    d_min: float
    delta_max: float

    def admits(self, r_a: float, d: float, delta: float, tol: float = 1e-9) -> bool:
        return (
            r_a >= self.r_a_min - tol
            and d >= self.d_min - tol
            and delta <= self.delta_max + tol
        )


@dataclass(frozen=True)
class LosslessBounds:
    """Bound values for the distributed-lossless region at one system."""

    r_a_min: float
    r_c_min: float
    sum_min: float
    delta_max: float

    def admits(self, r_a: float, r_c: float, delta: float, tol: float = 1e-9) -> bool:
        return (
            r_a >= self.r_a_min - tol
            and r_c >= self.r_c_min - tol
            and r_a + r_c >= self.sum_min - tol
            and delta <= self.delta_max + tol
        )


@dataclass(frozen=True)
class GaussianParams:
    """Correlation gains of the Gaussian side-information channels."""

    rho_c: float
    rho_e: float

    def __post_init__(self) -> None:
        if not 0.0 < self.rho_c < 1.0:
            raise ValidationError(f"rho_c must lie in (0, 1), got {self.rho_c}")
        if not 0.0 <= self.rho_e < 1.0:
            raise ValidationError(f"rho_e must lie in [0, 1), got {self.rho_e}")


@dataclass(frozen=True)
class BinaryParams:
    """Binary model parameters: BSC crossover p, BEC erasure eps, chain (alpha, beta)."""

    p: float
    eps: float
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 0.5:
            raise ValidationError(f"p must lie in [0, 1/2], got {self.p}")
        if not 0.0 <= self.eps <= 1.0:
            raise ValidationError(f"eps must lie in [0, 1], got {self.eps}")
        if not 0.0 <= self.alpha <= 0.5:
            raise ValidationError(f"alpha must lie in [0, 1/2], got {self.alpha}")
        if not 0.0 <= self.beta <= 0.5:
            raise ValidationError(f"beta must lie in [0, 1/2], got {self.beta}")


# ---------------------------------------------------------------------------
# coded side information: inner region, corner points, outer region
# ---------------------------------------------------------------------------

def _expected_distortion(p_vwa: np.ndarray, d: DistortionMeasure, recon: np.ndarray) -> float:
    nv, nw, _ = p_vwa.shape
    v_idx, w_idx = np.meshgrid(np.arange(nv), np.arange(nw), indexing="ij")
    cost = d.table[:, recon[v_idx, w_idx]]  # (a, v, w)
    return float(np.einsum("vwa,avw->", p_vwa, cost))


def inner_bound_point(source: JointSource, d: DistortionMeasure,
                      sys: AuxiliarySystem) -> InnerBounds:
    """Evaluate the six inner-region bounds at a given auxiliary system."""
    p = compose_full_joint(source, sys.u_given_v, sys.v_given_a, sys.w_given_c).probs
    p_vwa = np.transpose(p.sum(axis=(_U, _C, _E)), (0, 1, 2))  # (v, w, a)
    return InnerBounds(
        r_a_min=_cmi(p, (_V,), (_A,), (_W,)),
        r_c_min=_cmi(p, (_W,), (_C,), (_V,)),
        sum_min=_cmi(p, (_V, _W), (_A, _C)),
        d_min=_expected_distortion(p_vwa, d, sys.reconstruction),
        delta_max=_cond_ent(p, (_A,), (_V, _W))
        + _cmi(p, (_A,), (_W,), (_U,))
        - _cmi(p, (_A,), (_E,), (_U,)),
        delta_minus_rc_max=_cond_ent(p, (_A,), (_V,))
        - _cmi(p, (_A,), (_E,), (_U,))
        - _cmi(p, (_W,), (_C,), (_V,)),
    )


def corner_point(source: JointSource, d: DistortionMeasure, sys: AuxiliarySystem,
                 which: str) -> RegionPoint:
    """One of the three extreme points of the inner region at a given system.

    The three points share D; (I) and (II) share R_A + R_C and Delta; (II) and
    (III) share R_A + R_C and Delta - R_C.
    """
    p = compose_full_joint(source, sys.u_given_v, sys.v_given_a, sys.w_given_c).probs
    p_vwa = p.sum(axis=(_U, _C, _E))
    dist = _expected_distortion(p_vwa, d, sys.reconstruction)
    h_a_ue = _cond_ent(p, (_A,), (_U, _E))
    if which == "I":
        r_a = _cmi(p, (_V,), (_A,), (_W,))
        r_c = _cmi(p, (_W,), (_C,))
        delta = h_a_ue - _cmi(p, (_V,), (_A,), (_U, _W))
    elif which == "II":
        r_a = _cmi(p, (_U,), (_A,)) + _cmi(p, (_V,), (_A,), (_U, _W))
        r_c = _cmi(p, (_W,), (_C,), (_U,))
        delta = h_a_ue - _cmi(p, (_V,), (_A,), (_U, _W))
    elif which == "III":
        r_a = _cmi(p, (_V,), (_A,))
        r_c = _cmi(p, (_W,), (_C,), (_V,))
        delta = h_a_ue - _cmi(p, (_V,), (_A,), (_U,))
    else:
        raise ValidationError(f"corner point must be one of 'I', 'II', 'III', got {which!r}")
    return RegionPoint(r_a, r_c, dist, delta)


def outer_bound_point(
    source: JointSource,
    d: DistortionMeasure,
    u_given_v: Channel,
    v_given_a: Channel,
    w_given_c_weak: Channel,
    reconstruction: np.ndarray,
) -> InnerBounds:
    """Evaluate the outer-region bounds; a membership test only.

    The outer region requires only the factorizations p(u,v,a,c,e) =
    p(u|v)p(v|a)p(a,c,e) and p(w,a,c,e) = p(w|c)p(a,c,e); W and (U, V) need
    not be jointly constrained.  Terms that mix W with (U, V) are evaluated
    under the canonical coupling in which W is drawn from C independently of
    (U, V), so at matched channels this coincides with ``inner_bound_point``.
    No search over the outer region is attempted.
    """
    sys = AuxiliarySystem(u_given_v, v_given_a, w_given_c_weak, reconstruction)
    return inner_bound_point(source, d, sys)


# ---------------------------------------------------------------------------
# uncoded side information (Bob sees C directly)
# ---------------------------------------------------------------------------

def _compose_uncoded(source: JointSource, u_given_v: Channel, v_given_a: Channel) -> np.ndarray:
    """p(u, v, a, c, e) with axes (u, v, a, c, e)."""
    return np.einsum("vu,av,ace->uvace", u_given_v.rows, v_given_a.rows, source.probs)


def uncoded_region_point(
    source: JointSource,
    d: DistortionMeasure,
    u_given_v: Channel,
    v_given_a: Channel,
    reconstruction: np.ndarray,
) -> UncodedBounds:
    """Exact region for uncoded side information at one (U, V, reconstruction)."""
    p = _compose_uncoded(source, u_given_v, v_given_a)  # (u, v, a, c, e)
    nv = v_given_a.output_size
    nc = source.alphabet_sizes[1]
    recon = np.asarray(reconstruction, dtype=int)
    if recon.shape != (nv, nc):
        raise ValidationError(f"reconstruction must have shape ({nv}, {nc}), got {recon.shape}")
    p_vca = np.transpose(p.sum(axis=(0, 4)), (0, 2, 1))  # (v, c, a)
    return UncodedBounds(
        r_a_min=_cmi(p, (1,), (2,), (3,)),
        d_min=_expected_distortion(p_vca, d, recon),
        delta_max=_cond_ent(p, (2,), (1, 3))
        + _cmi(p, (2,), (3,), (0,))
        - _cmi(p, (2,), (4,), (0,)),
    )


def uncoded_region_point_alt(
    source: JointSource,
    d: DistortionMeasure,
    u_given_v: Channel,
    v_given_a: Channel,
    reconstruction: np.ndarray,
) -> UncodedBounds:
    """Alternative rate form: R_A >= [I(U;C) - I(U;E)]_+ + I(V;A|C).

    Same Delta bound; the extra positive-part term is the price of making the
    common layer decodable at the eavesdropper.
    """
    base = uncoded_region_point(source, d, u_given_v, v_given_a, reconstruction)
    p = _compose_uncoded(source, u_given_v, v_given_a)
    extra = positive_part(_cmi(p, (0,), (3,)) - _cmi(p, (0,), (4,)))
    return UncodedBounds(
        r_a_min=extra + _cmi(p, (1,), (2,), (3,)),
        d_min=base.d_min,
        delta_max=base.delta_max,
    )


# ---------------------------------------------------------------------------
# distributed lossless compression
# ---------------------------------------------------------------------------

def _compose_lossless(source: JointSource, u_given_a: Channel) -> np.ndarray:
    """p(u, a, c, e)."""
    return np.einsum("au,ace->uace", u_given_a.rows, source.probs)


def lossless_region_point(source: JointSource, u_given_a: Channel) -> LosslessBounds:
    """Exact compression-equivocation region at one helper variable U."""
    if u_given_a.input_size != source.alphabet_sizes[0]:
        raise ValidationError("u_given_a input size must match |A|")
    p = _compose_lossless(source, u_given_a)  # (u, a, c, e)
    return LosslessBounds(
        r_a_min=_cond_ent(p, (1,), (2,)),
        r_c_min=_cond_ent(p, (2,), (0,)),
        sum_min=_ent(p, (1, 2)),
        delta_max=_cmi(p, (1,), (2,), (0,)) - _cmi(p, (1,), (3,), (0,)),
    )


def lossless_region_point_alt(source: JointSource, u_given_a: Channel) -> LosslessBounds:
    """Alternative rate form: R_A >= [I(U;C) - I(U;E)]_+ + H(A|C)."""
    base = lossless_region_point(source, u_given_a)
    p = _compose_lossless(source, u_given_a)
    extra = positive_part(_cmi(p, (0,), (2,)) - _cmi(p, (0,), (3,)))
    return LosslessBounds(
        r_a_min=extra + base.r_a_min,
        r_c_min=base.r_c_min,
        sum_min=base.sum_min,
        delta_max=base.delta_max,
    )


# ---------------------------------------------------------------------------
# Gaussian closed forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianBounds:
    """R_A lower bound and Delta upper bound (differential-entropy convention)."""

    r_a_min: float
    delta_max: float


def _gaussian_sigma2(rho_c: float, r_c: float) -> float:
    """Var(A | best rate-r_c description of C) = 1 - rho_c^2 + rho_c^2 2^(-2 r_c)."""
    if math.isinf(r_c):
        return 1.0 - rho_c * rho_c
    return 1.0 - rho_c * rho_c + rho_c * rho_c * 2.0 ** (-2.0 * r_c)


def gaussian_inner(params: GaussianParams, r_c: float, d: float) -> GaussianBounds:
    """Achievable (R_A, Delta) bounds for the Gaussian model at fixed (R_C, D).

    ``r_c`` may be ``math.inf`` (uncoded side information at Bob).  Delta is in
    bits with the differential-entropy convention and may be negative.
    """
    if d <= 0.0:
        raise ValidationError(f"distortion must be positive, got {d}")
    if r_c < 0.0:
        raise ValidationError(f"R_C must be non-negative, got {r_c}")
    sigma2 = _gaussian_sigma2(params.rho_c, r_c)
    rate = positive_part(0.5 * math.log2(sigma2 / d))
    one_minus_rho_e2 = 1.0 - params.rho_e * params.rho_e
    eve_term = 0.5 * math.log2(
        1.0 + one_minus_rho_e2 * positive_part(1.0 / d - 1.0 / sigma2)
    )
    delta = 0.5 * math.log2(2.0 * math.pi * math.e * one_minus_rho_e2) - min(rate, eve_term)
    return GaussianBounds(r_a_min=rate, delta_max=delta)


def gaussian_optimal_no_eve_si(rho_c: float, r_c: float, d: float) -> GaussianBounds:
    """Exact region when the eavesdropper has no side information (rho_e = 0)."""
    params = GaussianParams(rho_c=rho_c, rho_e=0.0)
    if d <= 0.0:
        raise ValidationError(f"distortion must be positive, got {d}")
    if r_c < 0.0:
        raise ValidationError(f"R_C must be non-negative, got {r_c}")
    sigma2 = _gaussian_sigma2(params.rho_c, r_c)
    rate = positive_part(0.5 * math.log2(sigma2 / d))
    return GaussianBounds(r_a_min=rate, delta_max=0.5 * LOG2_2PIE - rate)


# ---------------------------------------------------------------------------
# binary BEC/BSC closed forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinaryBounds:
    r_a_min: float
    d_min: float
    delta_max: float


def binary_bec_bsc_point(params: BinaryParams) -> BinaryBounds:
    """Closed-form region point for the uniform binary source with BEC/BSC
    side informations, at chain parameters (alpha, beta)."""
    p, eps, alpha, beta = params.p, params.eps, params.alpha, params.beta
    ab = star(alpha, beta)
    return BinaryBounds(
        r_a_min=eps * (1.0 - h2(alpha)),
        d_min=eps * alpha,
        delta_max=eps * h2(alpha) + (1.0 - eps) * h2(ab) - h2(star(p, ab)) + h2(p),
    )


def binary_wyner_ziv_point(p: float, eps: float, alpha: float) -> BinaryBounds:
    """The beta = 0 specialization (single quantization layer, decodable by Eve)."""
    return binary_bec_bsc_point(BinaryParams(p=p, eps=eps, alpha=alpha, beta=0.0))


def bec_bsc_reconstruction() -> np.ndarray:
    """Reconstruction for the binary model: trust C unless erased, else V.

    V is on axis 0 with symbols (0, 1); C on axis 1 with symbols (0, e, 1).
    """
    return np.array([[0, 0, 1], [0, 1, 1]])
