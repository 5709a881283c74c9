"""Exact signatures of torus links via spectrum counting, plus the cable recursion.

Everything in this module is exact rational arithmetic: interval membership at
a breakpoint decides the value of the invariant, so no floats are allowed in
any comparison.  The signature of the (p,q) torus link is obtained by counting
the multiset  { i/p + j/q : 1 <= i < p, 1 <= j < q }  inside a window of length
one; the window (x, 1+x] (open left, closed right) realises the right-limit
regularisation of the signature function.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "SignatureProfile",
    "CableChain",
    "torus_spectrum",
    "torus_signature",
    "torus_signature_tl",
    "closed_form_small",
    "signature_profile_torus",
    "cable_signature_tl",
    "torus_n0",
]

HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)


def _validate_params(p: int, q: int, minimum: int = 1) -> None:
    if not (isinstance(p, int) and isinstance(q, int)):
        raise TypeError("torus parameters must be integers")
    if p < minimum or q < minimum:
        raise ValueError(f"torus parameters must be >= {minimum}, got ({p}, {q})")


def torus_spectrum(p: int, q: int) -> list[Fraction]:
    """Multiset { i/p + j/q } as a sorted list of exact rationals in (0, 2).

    Cardinality is (p-1)(q-1); the multiset is symmetric under e -> 2 - e.
    Rejects p < 2 or q < 2 (the spectrum would be empty; trivial components
    are the caller's concern).
    """
    _validate_params(p, q, minimum=2)
    return sorted(Fraction(i, p) + Fraction(j, q) for i in range(1, p) for j in range(1, q))


def torus_signature(p: int, q: int) -> int:
    """Signature of the (p,q) torus link: #S - 2#(S in the open (1/2, 3/2)).

    Spectrum elements landing exactly on 1/2 or 3/2 are counted +1 (they are
    outside the open window); this follows the counting formula verbatim and
    can differ from the symmetrised Seifert form by the number of such
    elements.  That situation only arises for certain non-coprime pairs.
    Returns 0 when p == 1 or q == 1 (unknot / unlink of one strand).
    """
    _validate_params(p, q)
    if p == 1 or q == 1:
        return 0
    # integer form of  1/2 < i/p + j/q < 3/2,  i.e.  pq < 2(iq + jp) < 3pq
    pq = p * q
    inside = 0
    for i in range(1, p):
        iq2 = 2 * i * q
        for j in range(1, q):
            m = iq2 + 2 * j * p
            if pq < m < 3 * pq:
                inside += 1
    return (p - 1) * (q - 1) - 2 * inside


def torus_signature_tl(p: int, q: int, x: Fraction) -> int:
    """Right-limit signature at angle x in (0,1): #S - 2#(S in (x, 1+x]).

    The closed right end encodes the right limit of the signature function;
    comparisons are exact (integers only, no Fraction objects in the loop).
    """
    _validate_params(p, q)
    x = Fraction(x)
    if not (0 < x < 1):
        raise ValueError(f"angle parameter must satisfy 0 < x < 1, got {x}")
    if p == 1 or q == 1:
        return 0
    # e = (iq + jp)/(pq);  e > x  <=>  (iq + jp) * xd > xn * pq
    #                      e <= 1 + x  <=>  (iq + jp) * xd <= (xd + xn) * pq
    xn, xd = x.numerator, x.denominator
    lo = xn * p * q
    hi = (xd + xn) * p * q
    inside = 0
    for i in range(1, p):
        iq = i * q
        for j in range(1, q):
            m = (iq + j * p) * xd
            if lo < m <= hi:
                inside += 1
    return (p - 1) * (q - 1) - 2 * inside


def closed_form_small(p: int, n: int) -> int:
    """Closed forms for sigma(T_{p,n}), p in {2,3,4}, gcd(p,n) = 1."""
    if p not in (2, 3, 4):
        raise ValueError(f"closed form only available for p in {{2,3,4}}, got p={p}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if gcd(p, n) != 1:
        raise ValueError(f"closed form requires gcd(p,n)=1, got ({p},{n})")
    if p == 2:
        return -(n - 1)  # n = 2m+1 -> -2m
    if p == 3:
        return 4 * (n // 6) - 2 * (n - 1)
    return 4 * (n // 4) - 3 * (n - 1)


@dataclass(frozen=True)
class SignatureProfile:
    """Piecewise-constant (sigma*, n*) on (0,1), right-continuous.

    ``breakpoints`` are the jump locations, strictly inside (0,1), sorted.
    ``values[k]`` is the value on the k-th interval; there are
    len(breakpoints) + 1 intervals:  (0,b1), [b1,b2), ..., [bk,1).
    """

    breakpoints: tuple[Fraction, ...]
    values: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("profile needs exactly one value per interval")
        if any(not (0 < b < 1) for b in self.breakpoints):
            raise ValueError("breakpoints must lie strictly inside (0,1)")
        if list(self.breakpoints) != sorted(set(self.breakpoints)):
            raise ValueError("breakpoints must be sorted and distinct")

    def value_at(self, x: Fraction) -> tuple[int, int]:
        x = Fraction(x)
        if not (0 < x < 1):
            raise ValueError(f"profile is defined on (0,1), got {x}")
        k = 0
        for b in self.breakpoints:
            if x >= b:
                k += 1
            else:
                break
        return self.values[k]

    def intervals(self) -> list[tuple[Fraction, Fraction, int, int]]:
        ends = [Fraction(0)] + list(self.breakpoints) + [Fraction(1)]
        return [(ends[k], ends[k + 1], *self.values[k]) for k in range(len(self.values))]

    def to_csv(self) -> str:
        lines = ["x_lo,x_hi,sigma_star,n_star"]
        for lo, hi, s, n in self.intervals():
            lines.append(f"{lo.numerator}/{lo.denominator},{hi.numerator}/{hi.denominator},{s},{n}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "SignatureProfile":
        rows = [ln for ln in text.strip().splitlines() if ln]
        if not rows or rows[0] != "x_lo,x_hi,sigma_star,n_star":
            raise ValueError("bad profile CSV header")
        breakpoints: list[Fraction] = []
        values: list[tuple[int, int]] = []
        for ln in rows[1:]:
            lo, hi, s, n = ln.split(",")
            if values:  # lo of every row after the first is a breakpoint
                breakpoints.append(Fraction(lo))
            values.append((int(s), int(n)))
        return cls(tuple(breakpoints), tuple(values))


@lru_cache(maxsize=None)
def torus_n0(p: int, q: int) -> int:
    """Minimal index of a non-vanishing Alexander polynomial for T_{p,q}.

    Computed as the generic corank of V - tV^T of the braid-derived Seifert
    matrix (exact rank at random rational t).  Cached; falls back to 0 for
    parameters too large to build the matrix, which is safe because torus
    links are fibred (det(V - tV^T) is the monodromy characteristic
    polynomial, never identically zero).
    """
    _validate_params(p, q)
    if p == 1 or q == 1:
        return 0
    if (p - 1) * q - p + 1 > 400:
        return 0
    from . import seifert  # deferred: seifert does not import spectra

    V = seifert.seifert_from_positive_braid(seifert.torus_braid(max(p, 2), q if p >= 2 else max(q, 2)))
    return seifert.generic_corank(V)


def signature_profile_torus(p: int, q: int) -> SignatureProfile:
    """Full (sigma*, n*) profile of the torus link on (0,1).

    Breakpoints are the spectrum elements reduced mod 1 (elements equal to 1
    reduce to the excluded endpoint 0 and produce no interior breakpoint).
    n* is constant in x: 1 for knots, 1 + generic Alexander corank otherwise.
    """
    _validate_params(p, q, minimum=2)
    spec = torus_spectrum(p, q)
    breaks = sorted({e if e < 1 else e - 1 for e in spec} - {Fraction(0)})
    n_star = 1 if gcd(p, q) == 1 else torus_n0(p, q) + 1
    ends = [Fraction(0)] + breaks + [Fraction(1)]
    values = []
    for k in range(len(ends) - 1):
        mid = (ends[k] + ends[k + 1]) / 2
        values.append((torus_signature_tl(p, q, mid), n_star))
    return SignatureProfile(tuple(breaks), tuple(values))


@dataclass(frozen=True)
class CableChain:
    """Iterated torus knot: stage 1 a torus pair, later stages (pattern, winding).

    Stage k > 1 with parameters (p_k, q_k) is the (p_k, q_k)-cable on the
    previous stage; the companion signature is evaluated at angle q_k * x.
    """

    stages: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.stages:
            raise ValueError("cable chain must have at least one stage")
        for (a, b) in self.stages:
            if a < 1 or b < 1:
                raise ValueError(f"invalid cable stage ({a}, {b})")

    @classmethod
    def of(cls, stages: Iterable[Sequence[int]]) -> "CableChain":
        return cls(tuple((int(a), int(b)) for a, b in stages))


def cable_signature_tl(chain: CableChain, x: Fraction) -> int:
    """sigma*_x of an iterated torus knot via the cabling recursion.

    sigma*_x(stage k) = sigma*_{q_k x mod 1}(stage k-1) + sigma*_x(T_{p_k,q_k});
    when q_k x is an integer the companion form vanishes and contributes 0.
    """
    x = Fraction(x)
    if not (0 < x < 1):
        raise ValueError(f"angle parameter must satisfy 0 < x < 1, got {x}")
    stages = chain.stages
    p, q = stages[-1]
    total = torus_signature_tl(p, q, x)
    if len(stages) > 1:
        inner = (q * x) % 1
        if inner != 0:
            total += cable_signature_tl(CableChain(stages[:-1]), inner)
    return total
