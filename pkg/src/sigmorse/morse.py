"""Handle calculus for sphere sweeps of algebraic curves, and inequality checkers.

The sweep bookkeeping tracks (c, k, chi, pg): boundary components of the
sliced curve, components and Euler characteristic of its normalization, and
geometric genus.  Smooth states satisfy 2k - 2pg = chi + c.  A singular
crossing of multiplicity p with r branches acts like attaching r disks by p
one-handles: chi changes by r - p and the (c, g, k) changes are data.

w(L) = -sigma + n - c and u(L) = -sigma - n + c are the monotone quantities:
birth/death/join/marriage never decrease w (never increase u), a divorce
moves them by at most 2 the wrong way.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence, Union

from . import links as links_mod
from .links import (
    Given,
    LinkDescriptor,
    SingularityData,
    TorusLink,
    Verdict,
    descriptor_invariants,
)
from .spectra import SignatureProfile, torus_n0, torus_signature, torus_signature_tl

__all__ = [
    "SurfaceState",
    "Birth",
    "Death",
    "Join",
    "Divorce",
    "Marriage",
    "SingularCrossing",
    "HandleEvent",
    "FakeCounts",
    "MorseScenario",
    "ScenarioSingularity",
    "w_u",
    "apply_handle",
    "fake_counts",
    "check_mthm2",
    "check_betti",
    "check_tlbetti",
    "check_intermediate",
    "handle_counts_smooth",
    "cormain_bound",
    "cusp_bound_check",
    "cusp_max",
    "ratknot_check",
    "ratknot2_check",
]


def w_u(sigma: int, n: int, c: int) -> tuple[int, int]:
    """w = -sigma + n - c and u = -sigma - n + c; always w + u = -2 sigma."""
    return -sigma + n - c, -sigma - n + c


@dataclass(frozen=True)
class SurfaceState:
    c: int = 0
    k: int = 0
    chi: int = 0
    pg: int = 0

    def __post_init__(self):
        if self.c < 0 or self.k < 0 or self.pg < 0:
            raise ValueError(f"negative counts in surface state {self}")

    @property
    def smooth_consistent(self) -> bool:
        return 2 * self.k - 2 * self.pg == self.chi + self.c


class Birth:
    deltas = (1, 1, 1, 0)


class Death:
    deltas = (-1, 0, 1, 0)


class Join:
    deltas = (-1, -1, -1, 0)


class Divorce:
    deltas = (1, 0, -1, 0)


class Marriage:
    deltas = (-1, 0, -1, 1)


@dataclass(frozen=True)
class SingularCrossing:
    sing: SingularityData
    delta_c: int
    delta_g: int
    delta_k: int

    @property
    def deltas(self) -> tuple[int, int, int, int]:
        chi = self.sing.branches - self.sing.multiplicity
        return (self.delta_c, self.delta_k, chi, self.delta_g)


HandleEvent = Union[type[Birth], type[Death], type[Join], type[Divorce], type[Marriage], SingularCrossing]


def apply_handle(state: SurfaceState, event: HandleEvent) -> SurfaceState:
    """Advance the surface state by one handle event; rejects negative counts."""
    dc, dk, dchi, dpg = event.deltas
    return SurfaceState(state.c + dc, state.k + dk, state.chi + dchi, state.pg + dpg)


@dataclass(frozen=True)
class FakeCounts:
    marriages: int
    divorces: int
    joins: int


def fake_counts(delta_c: int, delta_g: int, delta_k: int,
                branches: Optional[int] = None,
                multiplicity: Optional[int] = None) -> FakeCounts:
    """Fake-handle counts at a singular crossing from the (c, g, k) changes.

    f_m = delta_g and f_d = delta_c + delta_g - delta_k always.  The join
    count needs the branch count: f_j = r - delta_k (each of the r local
    disks is wired in by a join); without r the bare delta_k is reported,
    which matches the handle-table accounting read off the normalization.
    When both r and p are known they must satisfy the crossing identity
    p = r + delta_c + 2 delta_g - 2 delta_k.
    """
    f_m = delta_g
    f_d = delta_c + delta_g - delta_k
    f_j = (branches - delta_k) if branches is not None else delta_k
    if f_m < 0 or f_d < 0 or f_j < 0:
        raise ValueError(
            f"inconsistent crossing data: fake counts (m={f_m}, d={f_d}, j={f_j}) negative")
    if branches is not None and multiplicity is not None:
        expected = branches + delta_c + 2 * delta_g - 2 * delta_k
        if expected != multiplicity:
            raise ValueError(
                f"crossing data inconsistent with multiplicity: "
                f"r + dc + 2dg - 2dk = {expected} but p = {multiplicity}")
    return FakeCounts(f_m, f_d, f_j)


@dataclass(frozen=True)
class ScenarioSingularity:
    data: SingularityData
    delta_c: Optional[int] = None
    delta_g: Optional[int] = None
    delta_k: Optional[int] = None


@dataclass(frozen=True)
class MorseScenario:
    """Inputs of the sweep inequalities: singularities, link at infinity, genus.

    The first Betti number b of the affine curve is 2 pg + sum(r_k - 1) + d - 1;
    a stored b is cross-validated against that formula and a mismatch is an
    error, not a warning.
    """

    singularities: tuple[ScenarioSingularity, ...]
    infinity: LinkDescriptor
    pg: int
    b: Optional[int] = None
    name: str = "scenario"

    def __post_init__(self):
        if self.pg < 0:
            raise ValueError("geometric genus cannot be negative")
        derived = self.betti()
        if self.b is not None and self.b != derived:
            raise ValueError(
                f"scenario '{self.name}': stored b={self.b} disagrees with "
                f"2pg + R + d - 1 = {derived}")

    def d(self) -> int:
        return descriptor_invariants(self.infinity, Fraction(1, 2))[2]

    def betti(self) -> int:
        big_r = sum(s.data.branches - 1 for s in self.singularities)
        return 2 * self.pg + big_r + self.d() - 1


def _scenario_terms(sc: MorseScenario, x: Fraction):
    inf = descriptor_invariants(sc.infinity, x)
    sings = [descriptor_invariants(s.data.link, x) for s in sc.singularities]
    return inf, sings


def check_mthm2(sc: MorseScenario, x: Fraction = Fraction(1, 2)) -> tuple[Verdict, Verdict]:
    """The two sweep inequalities at angle x.

    w(L_inf) >= sum w(L_k) - 2(pg + d - 1)   and
    u(L_inf) <= sum u(L_k) + 2(pg + d - 1).
    """
    (s_inf, n_inf, c_inf), sings = _scenario_terms(sc, x)
    w_inf, u_inf = w_u(s_inf, n_inf, c_inf)
    corr = 2 * (sc.pg + c_inf - 1)
    w_sum = sum(w_u(*t)[0] for t in sings)
    u_sum = sum(w_u(*t)[1] for t in sings)
    return Verdict.of_ge(w_inf, w_sum - corr), Verdict.of_le(u_inf, u_sum + corr)


def check_betti(sc: MorseScenario) -> Verdict:
    """|sigma(L_inf) - sum sigma(L_k)| <= b + n(L_inf) - 1 at the classical angle."""
    (s_inf, n_inf, _), sings = _scenario_terms(sc, Fraction(1, 2))
    lhs = abs(s_inf - sum(s for s, _, _ in sings))
    b = sc.b if sc.b is not None else sc.betti()
    return Verdict.of_le(lhs, b + n_inf - 1)


def check_tlbetti(sc: MorseScenario, x: Fraction) -> Verdict:
    """|sigma*_x(L_inf) - sum sigma*_x(L_k)| <= b + n_0(L_inf)."""
    (s_inf, n_inf, _), sings = _scenario_terms(sc, x)
    lhs = abs(s_inf - sum(s for s, _, _ in sings))
    b = sc.b if sc.b is not None else sc.betti()
    return Verdict.of_le(lhs, b + (n_inf - 1))


def check_intermediate(pg0: int, pg1: int, c0: int, c1: int, k0: int, k1: int,
                       a_d01: int, f_d01: int) -> Verdict:
    """Divorce budget between two radii: a_d + f_d <= dpg + dc - dk."""
    bound = (pg1 - pg0) + (c1 - c0) - (k1 - k0)
    return Verdict.of_le(a_d01 + f_d01, bound)


def handle_counts_smooth(pg: int, d: int) -> tuple[int, int, int]:
    """Handle counts of a full smooth sweep: (a_m, a_d, a_b - a_j) = (pg, d+pg-1, 1)."""
    if pg < 0 or d < 1:
        raise ValueError("need pg >= 0 and d >= 1")
    return pg, d + pg - 1, 1


def cormain_bound(p: int, q: int) -> int:
    """Largest k such that a branch with an A_{2k} singularity fits: floor(-sigma/2)."""
    return (-torus_signature(p, q)) // 2


@lru_cache(maxsize=None)
def _sig_sixth(d: int) -> int:
    return torus_signature_tl(d, d, Fraction(1, 6))


def cusp_bound_check(d: int, s: int) -> Verdict:
    """Can a degree-d curve have s ordinary cusps?  The exact desk version.

    With b = (d-1)^2 - 2s, requires |sigma*_{1/6}(T_{d,d}) + 2s| <= b + n_0.
    Rejects s that makes b negative.
    """
    if d < 2:
        raise ValueError("need degree >= 2")
    if s < 0:
        raise ValueError("cusp count cannot be negative")
    b = (d - 1) ** 2 - 2 * s
    if b < 0:
        raise ValueError(f"s={s} exceeds the genus budget of degree {d} (b would be {b})")
    lhs = abs(_sig_sixth(d) + 2 * s)
    return Verdict.of_le(lhs, b + torus_n0(d, d))


def cusp_max(d: int) -> int:
    """Largest cusp count passing cusp_bound_check; tends to (23/72) d^2."""
    lo, hi = 0, (d - 1) ** 2 // 2
    if not cusp_bound_check(d, lo).holds:
        raise ValueError(f"no admissible cusp count for degree {d}")
    while lo < hi:
        mid = (lo + hi + 1) // 2
        try:
            ok = cusp_bound_check(d, mid).holds
        except ValueError:
            ok = False
        if ok:
            lo = mid
        else:
            hi = mid - 1
    return lo


def ratknot_check(sigma: int, m: int, pg: int) -> Verdict:
    """-sigma >= 2 - 2m - 2pg for an m-component link bounding a genus-pg curve."""
    return Verdict.of_ge(-sigma, 2 - 2 * m - 2 * pg)


def ratknot2_check(profile: SignatureProfile) -> Verdict:
    """A knot bounding a rational curve has sigma* <= 0 everywhere on the profile."""
    worst = max(s for _, _, s, _ in profile.intervals())
    return Verdict.of_le(worst, 0)
