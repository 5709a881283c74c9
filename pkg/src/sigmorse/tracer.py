"""Numeric sphere-slicing of plane algebraic curves.

Given a curve in C^2 (parametric t -> (x(t), y(t)) or implicit F = 0) and a
center, locate the radii where the sphere fails to be transverse, trace the
intersection link at non-critical radii, compute linking numbers, and
classify the handle event at each critical radius by component tracking.

The parametric path is primary: the link at radius r is the image of the
level set {g(t) = r^2} of the pulled-back squared distance g, a smooth real
function on the t-plane, which is traced by predictor-corrector steps.
Criticality in the t-plane reads  x'(t) conj(x(t)-xi1) + y'(t) conj(y(t)-xi2) = 0,
solved as a two-real-equation system by Newton from a grid of seeds.
Self-intersections of the parametrisation are found from the divided
differences (x(t)-x(s))/(t-s), (y(t)-y(s))/(t-s), which remove the diagonal.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
import numpy.polynomial.polynomial as npp
from scipy import ndimage

__all__ = [
    "ParametricCurve",
    "ImplicitCurve",
    "CurveSpec",
    "CriticalPoint",
    "LinkSnapshot",
    "SweepEvent",
    "GenericityReport",
    "TraceError",
    "transversality_det",
    "critical_points",
    "trace_link",
    "sweep",
    "bezout_budget",
    "budget_report",
    "genericity_check",
    "curve_from_json",
    "curve_to_json",
    "snapshot_svg",
]

G1_TOL = 1e-6
SEED_GRID = 241
SUBLEVEL_GRID = 601


class TraceError(Exception):
    """Numeric failure while tracing (non-convergence, step underflow, non-closure)."""


def _poly(coeffs) -> np.ndarray:
    a = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128))
    return np.trim_zeros(a, "b") if a.any() else a[:1]


@dataclass(frozen=True)
class ParametricCurve:
    """t -> (x(t), y(t)) with complex polynomial coefficients (low degree first)."""

    x: np.ndarray
    y: np.ndarray
    center: tuple[complex, complex] = (0j, 0j)

    def __post_init__(self):
        object.__setattr__(self, "x", _poly(self.x))
        object.__setattr__(self, "y", _poly(self.y))
        if len(self.x) <= 1 and len(self.y) <= 1:
            raise ValueError("parametric curve must be non-constant")
        object.__setattr__(self, "center", (complex(self.center[0]), complex(self.center[1])))

    @property
    def degree(self) -> int:
        return max(len(self.x), len(self.y)) - 1

    # -- pulled-back squared distance and its Wirtinger derivatives ---------
    def point(self, t):
        return npp.polyval(t, self.x), npp.polyval(t, self.y)

    def g(self, t):
        X, Y = self.point(t)
        return np.abs(X - self.center[0]) ** 2 + np.abs(Y - self.center[1]) ** 2

    def h(self, t):
        """dg/dt; criticality of g is h = 0."""
        X, Y = self.point(t)
        return (npp.polyval(t, npp.polyder(self.x)) * np.conj(X - self.center[0])
                + npp.polyval(t, npp.polyder(self.y)) * np.conj(Y - self.center[1]))

    def h_t(self, t):
        X, Y = self.point(t)
        return (npp.polyval(t, npp.polyder(self.x, 2)) * np.conj(X - self.center[0])
                + npp.polyval(t, npp.polyder(self.y, 2)) * np.conj(Y - self.center[1]))

    def h_tbar(self, t):
        return (np.abs(npp.polyval(t, npp.polyder(self.x))) ** 2
                + np.abs(npp.polyval(t, npp.polyder(self.y))) ** 2)

    def seed_radius(self) -> float:
        r = 1.0
        for c in (self.x, self.y):
            if len(c) > 1 and abs(c[-1]) > 0:
                r = max(r, 1.0 + max(abs(c[:-1])) / abs(c[-1]))
        return 1.6 * r + max(abs(self.center[0]), abs(self.center[1]))


@dataclass(frozen=True)
class ImplicitCurve:
    """F(w1, w2) = 0 with coefficient matrix coeffs[i, j] on w1^i w2^j."""

    coeffs: np.ndarray
    center: tuple[complex, complex] = (0j, 0j)

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.coeffs, dtype=np.complex128))
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "center", (complex(self.center[0]), complex(self.center[1])))

    @property
    def degree(self) -> int:
        nz = np.argwhere(np.abs(self.coeffs) > 0)
        return int(nz.sum(axis=1).max()) if len(nz) else 0

    def F(self, w1, w2):
        return npp.polyval2d(w1, w2, self.coeffs)

    def dF(self, w1, w2):
        return (npp.polyval2d(w1, w2, npp.polyder(self.coeffs, axis=0)),
                npp.polyval2d(w1, w2, npp.polyder(self.coeffs, axis=1)))


CurveSpec = Union[ParametricCurve, ImplicitCurve]


def transversality_det(curve: ImplicitCurve, w: tuple[complex, complex]) -> complex:
    """conj(dF/dw1)(w2-xi2) - conj(dF/dw2)(w1-xi1); zero iff the sphere through
    w is non-transverse there (and zero by definition at singular points)."""
    if not isinstance(curve, ImplicitCurve):
        raise TypeError("transversality determinant needs an implicit curve")
    f1, f2 = curve.dF(w[0], w[1])
    xi = curve.center
    return np.conj(f1) * (w[1] - xi[1]) - np.conj(f2) * (w[0] - xi[0])


@dataclass(frozen=True)
class CriticalPoint:
    rho: float
    kind: str                      # "min" | "saddle" | "singular"
    location: tuple[complex, complex]
    params: tuple[complex, ...] = ()   # preimages (parametric case)
    morse_index: Optional[int] = None  # 0 for min, 1 for saddle
    multiplicity: Optional[int] = None  # singular: p
    branches: Optional[int] = None      # singular: r


@dataclass
class LinkSnapshot:
    r: float
    components: list[np.ndarray]       # each (N, 2) complex: points on S(xi, r)
    c: int
    k: Optional[int]
    linking: np.ndarray
    closure_gaps: tuple[float, ...] = ()   # image-space trace-closure residual per component

    def closure_residuals(self) -> list[float]:
        return list(self.closure_gaps)


@dataclass(frozen=True)
class SweepEvent:
    rho: float
    kind: str          # birth/join/divorce/marriage/singular/composite/unresolved
    criticals: tuple[CriticalPoint, ...]
    delta_c: int
    delta_k: int
    delta_chi: int
    delta_g: int
    g1_violation: bool = False
    detail: str = ""


@dataclass(frozen=True)
class GenericityReport:
    g1: bool
    g2: bool
    g3: bool
    near_violations: tuple[str, ...]
    tolerances: dict


# --------------------------------------------------------------------------
# critical points, parametric
# --------------------------------------------------------------------------

def _newton_h_batch(curve: ParametricCurve, seeds: np.ndarray, iters: int = 60) -> np.ndarray:
    """Vectorized Newton for h(t, conj t) = 0 over a batch of seeds.

    The update solves  h_t dt + h_tbar conj(dt) = -h  as a closed-form 2x2
    real system per seed.  Returns the converged roots (unfiltered).
    """
    t = np.asarray(seeds, dtype=np.complex128).copy()
    for _ in range(iters):
        hv = curve.h(t)
        A = curve.h_t(t)
        B = curve.h_tbar(t).astype(np.complex128)
        m11 = (A + B).real
        m12 = (-A + B).imag
        m21 = (A + B).imag
        m22 = (A - B).real
        det = m11 * m22 - m12 * m21
        bad = np.abs(det) < 1e-300
        det = np.where(bad, 1.0, det)
        dx = (-hv.real * m22 + hv.imag * m12) / det
        dy = (hv.real * m21 - hv.imag * m11) / det
        dt = dx + 1j * dy
        mag = np.abs(dt)
        dt = np.where(mag > 1.0, dt / np.maximum(mag, 1e-300), dt)
        dt = np.where(bad, 0.0, dt)
        t = t + dt
        np.clip(t.real, -1e6, 1e6, out=t.real)
        np.clip(t.imag, -1e6, 1e6, out=t.imag)
    ok = np.abs(curve.h(t)) < 1e-9 * (1 + np.abs(t))
    return t[ok]


def _poly_roots(coeffs: np.ndarray) -> np.ndarray:
    c = np.trim_zeros(np.asarray(coeffs, dtype=np.complex128), "b")
    if len(c) <= 1:
        return np.array([], dtype=np.complex128)
    return np.roots(c[::-1])


def _vanishing_order(curve: ParametricCurve, t0: complex, scale: float) -> int:
    """Smallest k >= 1 with (x^(k), y^(k)) != 0 at t0."""
    xd, yd = curve.x, curve.y
    for k in range(1, max(len(xd), len(yd)) + 1):
        xd, yd = (npp.polyder(xd) if len(xd) > 1 else np.zeros(1)), \
                 (npp.polyder(yd) if len(yd) > 1 else np.zeros(1))
        mag = abs(npp.polyval(t0, xd)) + abs(npp.polyval(t0, yd))
        if mag > 1e-6 * scale:
            return k
    return 1


def _self_intersections(curve: ParametricCurve) -> list[tuple[complex, complex]]:
    """Distinct parameter pairs (t, s), t != s, with equal image, via the
    divided differences P(t,s) = (x(t)-x(s))/(t-s) and Q likewise."""
    nx, ny = len(curve.x), len(curve.y)
    if max(nx, ny) < 3:
        return []
    # P coefficient matrix: P[a,b] = x[a+b+1]
    dP = np.zeros((nx, nx), dtype=np.complex128)
    for a in range(nx - 1):
        for b in range(nx - 1 - a):
            dP[a, b] = curve.x[a + b + 1]
    dQ = np.zeros((ny, ny), dtype=np.complex128)
    for a in range(ny - 1):
        for b in range(ny - 1 - a):
            dQ[a, b] = curve.y[a + b + 1]

    def PQ(t, s):
        return npp.polyval2d(t, s, dP), npp.polyval2d(t, s, dQ)

    dPdt, dPds = npp.polyder(dP, axis=0), npp.polyder(dP, axis=1)
    dQdt, dQds = npp.polyder(dQ, axis=0), npp.polyder(dQ, axis=1)
    R = curve.seed_radius()
    ring = [R * 0.7 * cmath.exp(2j * cmath.pi * k / 9 + 0.37j) for k in range(9)] \
         + [R * 0.25 * cmath.exp(2j * cmath.pi * k / 7 + 0.11j) for k in range(7)]
    pairs: list[tuple[complex, complex]] = []
    for t0 in ring:
        for s0 in ring:
            if abs(t0 - s0) < 1e-9:
                continue
            t, s = t0, s0
            ok = False
            for _ in range(60):
                pv, qv = PQ(t, s)
                if abs(pv) + abs(qv) < 1e-12 * (1 + abs(t) + abs(s)):
                    ok = True
                    break
                J = np.array([[npp.polyval2d(t, s, dPdt), npp.polyval2d(t, s, dPds)],
                              [npp.polyval2d(t, s, dQdt), npp.polyval2d(t, s, dQds)]])
                try:
                    d = np.linalg.solve(J, [-pv, -qv])
                except np.linalg.LinAlgError:
                    break
                step = complex(d[0]), complex(d[1])
                cap = max(abs(step[0]), abs(step[1]))
                if cap > R:
                    step = (step[0] * R / cap, step[1] * R / cap)
                t, s = t + step[0], s + step[1]
                if abs(t) > 20 * R or abs(s) > 20 * R:
                    break
            if not ok or abs(t - s) < 1e-6 * (1 + abs(t)):
                continue
            if any(min(abs(t - a) + abs(s - b), abs(t - b) + abs(s - a)) < 1e-6
                   for a, b in pairs):
                continue
            X1, Y1 = curve.point(t)
            X2, Y2 = curve.point(s)
            if abs(X1 - X2) + abs(Y1 - Y2) < 1e-8 * (1 + abs(X1) + abs(Y1)):
                pairs.append((t, s))
    return pairs


def _preimages(curve: ParametricCurve, w: tuple[complex, complex]) -> list[complex]:
    cand = _poly_roots(np.copy(curve.x) - np.array([w[0]] + [0] * (len(curve.x) - 1)))
    if len(curve.x) <= 1:  # x constant: use y
        cand = _poly_roots(np.copy(curve.y) - np.array([w[1]] + [0] * (len(curve.y) - 1)))
    out = []
    scale = 1 + abs(w[0]) + abs(w[1])
    for t in cand:
        X, Y = curve.point(t)
        if abs(X - w[0]) + abs(Y - w[1]) < 1e-6 * scale:
            if not any(abs(t - u) < 1e-7 * (1 + abs(t)) for u in out):
                out.append(complex(t))
    return out


def critical_points(curve: CurveSpec) -> list[CriticalPoint]:
    """All critical points of the distance-to-center function, rho ascending.

    Smooth ones carry a Morse index (0 or 1; index 2 cannot occur).  Singular
    points of the curve (parameter-singular or self-intersections) are
    reported with multiplicity p and branch count r.
    """
    if isinstance(curve, ImplicitCurve):
        return _critical_points_implicit(curve)
    R = curve.seed_radius()
    axis = np.linspace(-R, R, SEED_GRID)
    seeds = (axis[None, :] + 1j * axis[:, None]).ravel()
    # singular images: parameter-singular points and self-intersections
    singular_imgs: list[tuple[complex, complex]] = []
    if len(curve.x) > 1 and len(curve.y) > 1:
        dx, dy = npp.polyder(curve.x), npp.polyder(curve.y)
        scale = 1 + float(np.abs(dy).max())
        for t in _poly_roots(dx):
            if abs(npp.polyval(t, dy)) < 1e-6 * scale:
                X, Y = curve.point(t)
                singular_imgs.append((complex(X), complex(Y)))
    for (t, s) in _self_intersections(curve):
        X, Y = curve.point(t)
        singular_imgs.append((complex(X), complex(Y)))
    # dedup singular images
    merged: list[tuple[complex, complex]] = []
    for w in singular_imgs:
        if not any(abs(w[0] - v[0]) + abs(w[1] - v[1]) < 1e-6 * (1 + abs(v[0]) + abs(v[1]))
                   for v in merged):
            merged.append(w)
    out: list[CriticalPoint] = []
    sing_params: list[complex] = []
    deriv_scale = 1 + float(np.abs(npp.polyder(curve.x)).max() if len(curve.x) > 1 else 0) \
                    + float(np.abs(npp.polyder(curve.y)).max() if len(curve.y) > 1 else 0)
    for w in merged:
        pre = _preimages(curve, w)
        sing_params.extend(pre)
        p = sum(_vanishing_order(curve, t, deriv_scale) for t in pre)
        rho = math.sqrt(abs(complex(w[0]) - curve.center[0]) ** 2
                        + abs(complex(w[1]) - curve.center[1]) ** 2)
        out.append(CriticalPoint(rho=rho, kind="singular", location=w,
                                 params=tuple(pre), multiplicity=p, branches=len(pre)))
    # smooth criticals from the vectorized Newton sweep over h
    roots = _newton_h_batch(curve, seeds)
    found: list[complex] = []
    for t in np.sort_complex(roots):
        if not any(abs(t - u) < 1e-8 * max(R, 1) for u in found):
            found.append(complex(t))
    for t in found:
        if any(abs(t - u) < 1e-6 * (1 + abs(u)) for u in sing_params):
            continue
        a, b = abs(curve.h_t(t)), curve.h_tbar(t)
        if b < 1e-9 * deriv_scale ** 2:
            continue  # parameter-singular point already handled
        X, Y = curve.point(t)
        idx = 0 if a < b else 1
        out.append(CriticalPoint(rho=math.sqrt(float(curve.g(t))),
                                 kind=("min" if idx == 0 else "saddle"),
                                 location=(complex(X), complex(Y)),
                                 params=(t,), morse_index=idx))
    out.sort(key=lambda cp: cp.rho)
    return out


# --------------------------------------------------------------------------
# tracing, parametric
# --------------------------------------------------------------------------

def _trace_level_circle(curve: ParametricCurve, r: float, t0: complex,
                        step0: float, floor: float, max_dt: float) -> tuple[np.ndarray, float]:
    """Trace one closed component of {g = r^2} through t0; returns t-samples.

    Step control lives in image space (initial step0, halving on corrector
    failure, hard floor); max_dt caps the parameter-plane stride so the
    sample density stays compatible with the seed grid.
    """
    r2 = r * r

    def correct(t):
        for _ in range(12):
            f = float(curve.g(t)) - r2
            if abs(f) < 1e-12 * r2:
                return t
            grad = 2 * np.conj(curve.h(t))
            g2 = abs(grad) ** 2
            if g2 == 0:
                return None
            t = t - f * grad / g2
        return t if abs(float(curve.g(t)) - r2) < 1e-10 * r2 else None

    t = correct(t0)
    if t is None:
        raise TraceError(f"could not project seed onto the level set at r={r}")
    pts = [t]
    step = step0
    start = t
    total = 0.0
    max_steps = 400000
    for n in range(max_steps):
        grad = 2 * np.conj(curve.h(t))
        speed = math.sqrt(float(curve.h_tbar(t)))  # |w'(t)|
        if abs(grad) == 0 or speed == 0:
            raise TraceError("hit a critical point while tracing; radius too close to critical")
        tau = 1j * grad / abs(grad)
        dt_len = min(step / speed, max_dt)
        cand = correct(t + tau * dt_len)
        if cand is None or abs(cand - (t + tau * dt_len)) > 0.5 * dt_len + 1e-15:
            step *= 0.5
            if step < floor:
                raise TraceError(f"step underflow at r={r}")
            continue
        total += dt_len * speed
        t = cand
        pts.append(t)
        step = min(step * 1.3, 40 * step0)
        if n > 4 and total > 6 * dt_len * speed and abs(t - start) < 1.6 * dt_len:
            # refinement: creep up on the start point until the image-space
            # gap is far below the closure tolerance, then close exactly
            for _ in range(200):
                speed = math.sqrt(float(curve.h_tbar(t)))
                gap_img = abs(t - start) * speed
                if gap_img < 1e-8 * r:
                    break
                grad = 2 * np.conj(curve.h(t))
                tau = 1j * grad / abs(grad)
                if (tau.real * (start - t).real + tau.imag * (start - t).imag) < 0:
                    tau = -tau
                cand = correct(t + tau * min(abs(t - start) * 0.6, dt_len))
                if cand is None or abs(cand - start) >= abs(t - start):
                    break
                t = cand
                pts.append(t)
            gap_img = abs(t - start) * math.sqrt(float(curve.h_tbar(t)))
            pts.append(start)
            return np.array(pts), float(gap_img)
    raise TraceError(f"component failed to close after {max_steps} steps at r={r}")


def _resample(points: np.ndarray, n: int) -> np.ndarray:
    """Uniform arclength resampling of a closed polyline in C^2 ((N,2) complex)."""
    seg = np.abs(np.diff(points[:, 0])) ** 2 + np.abs(np.diff(points[:, 1])) ** 2
    s = np.concatenate([[0.0], np.cumsum(np.sqrt(seg))])
    if s[-1] == 0:
        return points[:n]
    u = np.linspace(0.0, s[-1], n, endpoint=False)
    out = np.empty((n, 2), dtype=np.complex128)
    for col in range(2):
        out[:, col] = (np.interp(u, s, points[:, col].real)
                       + 1j * np.interp(u, s, points[:, col].imag))
    return out


def _sublevel_components(curve: ParametricCurve, r: float) -> int:
    R = curve.seed_radius()
    for _ in range(4):
        axis = np.linspace(-R, R, SUBLEVEL_GRID)
        tt = axis[None, :] + 1j * axis[:, None]
        mask = curve.g(tt) <= r * r
        if mask[0, :].any() or mask[-1, :].any() or mask[:, 0].any() or mask[:, -1].any():
            R *= 1.6
            continue
        _, n = ndimage.label(mask)
        return int(n)
    raise TraceError("sublevel set keeps touching the sampling box; radius too large")


def _gauss_linking(a: np.ndarray, b: np.ndarray) -> float:
    """Gauss linking integral of two closed polylines in R^3 (solid-angle sum)."""
    lk = 0.0
    nb = len(b)
    for i in range(len(a)):
        p1, p2 = a[i], a[(i + 1) % len(a)]
        q1 = b
        q2 = np.roll(b, -1, axis=0)
        A = q1 - p1
        B = q1 - p2
        C = q2 - p2
        D = q2 - p1
        an = np.linalg.norm(A, axis=1)
        bn = np.linalg.norm(B, axis=1)
        cn = np.linalg.norm(C, axis=1)
        dn = np.linalg.norm(D, axis=1)
        cross = np.cross(B, C)
        p = np.einsum("ij,ij->i", A, cross)
        d1 = an * bn * cn + np.einsum("ij,ij->i", A, B) * cn \
            + np.einsum("ij,ij->i", B, C) * an + np.einsum("ij,ij->i", C, A) * bn
        d2 = an * dn * cn + np.einsum("ij,ij->i", A, D) * cn \
            + np.einsum("ij,ij->i", D, C) * an + np.einsum("ij,ij->i", C, A) * dn
        lk += float(np.sum(np.arctan2(p, d1) + np.arctan2(p, d2)))
    return lk / (2 * math.pi)


def _stereographic(components: list[np.ndarray], center, r: float) -> list[np.ndarray]:
    """Project S(xi, r) in R^4 to R^3 from a pole far from the link."""
    clouds = [np.column_stack([(c[:, 0] - center[0]).real, (c[:, 0] - center[0]).imag,
                               (c[:, 1] - center[1]).real, (c[:, 1] - center[1]).imag]) / r
              for c in components]
    allpts = np.vstack(clouds)
    best, best_d = None, -1.0
    rng = np.random.default_rng(20110404)  # fixed: pole choice must be deterministic
    for _ in range(64):
        v = rng.normal(size=4)
        v /= np.linalg.norm(v)
        d = float(np.min(np.linalg.norm(allpts - v, axis=1)))
        if d > best_d:
            best, best_d = v, d
    if best_d < 0.05:
        raise TraceError("no stereographic pole is safely away from the link")
    pole = best
    basis = [v for v in np.eye(4) if abs(v @ pole) < 0.95][:3]
    onb = []
    for v in basis:
        for u in [pole] + onb:
            v = v - (v @ u) * u
        onb.append(v / np.linalg.norm(v))
    out = []
    for cl in clouds:
        denom = 1.0 - cl @ pole
        out.append(np.column_stack([cl @ onb[0], cl @ onb[1], cl @ onb[2]]) / denom[:, None])
    return out


def trace_link(curve: CurveSpec, r: float, resample: int = 512,
               criticals: Optional[list[CriticalPoint]] = None) -> LinkSnapshot:
    """Trace C intersect S(center, r) at a non-critical radius.

    Components are closed polylines resampled to uniform arclength; c is the
    component count, k the number of sublevel-set components (parametric
    case), and the linking matrix comes from the Gauss integral after
    stereographic projection.  Pass a precomputed critical list to skip the
    (expensive) critical search.
    """
    if isinstance(curve, ImplicitCurve):
        return _trace_link_implicit(curve, r, resample)
    crit = criticals if criticals is not None else critical_points(curve)
    gap = min((abs(cp.rho - r) for cp in crit), default=1.0)
    if gap < 1e-9 * max(r, 1.0):
        raise ValueError(f"radius {r} is critical (within {gap:.2e} of a critical radius)")
    R = curve.seed_radius()
    axis = np.linspace(-R, R, SEED_GRID)
    spacing = float(axis[1] - axis[0])
    tt = axis[None, :] + 1j * axis[:, None]
    vals = curve.g(tt) - r * r
    sign_flip = np.abs(np.diff(np.signbit(vals), axis=1))
    seeds = [complex(tt[i, j] + 0.5 * spacing) for i, j in np.argwhere(sign_flip)]
    t_circles: list[np.ndarray] = []
    gaps: list[float] = []
    consumed = np.zeros(len(seeds), dtype=bool)
    seed_arr = np.array(seeds) if seeds else np.zeros(0, dtype=np.complex128)
    step0, floor = 1e-3 * r, 1e-9 * r
    for si, t0 in enumerate(seeds):
        if consumed[si]:
            continue
        circle, gap = _trace_level_circle(curve, r, t0, step0, floor, max_dt=1.5 * spacing)
        t_circles.append(circle)
        gaps.append(gap)
        dmin = np.min(np.abs(seed_arr[None, :] - circle[:, None]), axis=0)
        consumed |= dmin < 2.5 * spacing
        consumed[si] = True
    comps = []
    for circ in t_circles:
        X, Y = curve.point(circ)
        comps.append(_resample(np.column_stack([X, Y]), resample))
    k = _sublevel_components(curve, r)
    lk = _linking_matrix(comps, curve.center, r)
    return LinkSnapshot(r=r, components=comps, c=len(comps), k=k, linking=lk,
                        closure_gaps=tuple(gaps))


def _linking_matrix(comps: list[np.ndarray], center, r: float) -> np.ndarray:
    n = len(comps)
    lk = np.zeros((n, n), dtype=np.int64)
    if n < 2:
        return lk
    proj = _stereographic(comps, center, r)
    for i in range(n):
        for j in range(i + 1, n):
            raw = _gauss_linking(proj[i], proj[j])
            rounded = int(round(raw))
            if abs(raw - rounded) > 0.05:
                raise TraceError(
                    f"linking number between components {i},{j} not near an integer: {raw}")
            lk[i, j] = lk[j, i] = rounded
    return lk


# --------------------------------------------------------------------------
# implicit path (secondary)
# --------------------------------------------------------------------------

def _implicit_curve_points(curve: ImplicitCurve, n_slices: int = 48) -> list[tuple[complex, complex]]:
    deg = curve.coeffs.shape[1] - 1
    pts = []
    scale = 1.0 + float(np.abs(curve.coeffs).max())
    for w1 in np.linspace(-2 * scale, 2 * scale, n_slices):
        for rot in (1.0, 1j, (1 + 1j) / math.sqrt(2)):
            z1 = w1 * rot + curve.center[0]
            coeffs_y = np.array([npp.polyval(z1, curve.coeffs[:, j]) for j in range(curve.coeffs.shape[1])])
            for z2 in _poly_roots(coeffs_y):
                pts.append((complex(z1), complex(z2)))
    return pts


def _gn_correct_implicit(curve: ImplicitCurve, w: np.ndarray, r: float, iters: int = 30):
    """Gauss-Newton onto {Re F = Im F = 0, g = r^2} in R^4; w is length-4 real."""
    xi = curve.center
    for _ in range(iters):
        z1, z2 = complex(w[0], w[1]), complex(w[2], w[3])
        f = curve.F(z1, z2)
        gval = abs(z1 - xi[0]) ** 2 + abs(z2 - xi[1]) ** 2 - r * r
        res = np.array([f.real, f.imag, gval])
        if np.abs(res).max() < 1e-13 * max(1.0, r * r):
            return w
        f1, f2 = curve.dF(z1, z2)
        J = np.zeros((3, 4))
        J[0] = [f1.real, -f1.imag, f2.real, -f2.imag]
        J[1] = [f1.imag, f1.real, f2.imag, f2.real]
        J[2] = [2 * (z1 - xi[0]).real, 2 * (z1 - xi[0]).imag,
                2 * (z2 - xi[1]).real, 2 * (z2 - xi[1]).imag]
        try:
            dw = np.linalg.lstsq(J, -res, rcond=None)[0]
        except np.linalg.LinAlgError:
            return None
        w = w + dw
    return None


def _trace_link_implicit(curve: ImplicitCurve, r: float, resample: int) -> LinkSnapshot:
    seeds = []
    for (z1, z2) in _implicit_curve_points(curve):
        gv = abs(z1 - curve.center[0]) ** 2 + abs(z2 - curve.center[1]) ** 2
        if abs(gv - r * r) < 0.6 * r * r:
            seeds.append(np.array([z1.real, z1.imag, z2.real, z2.imag]))
    comps: list[np.ndarray] = []
    gaps: list[float] = []
    step0, floor = 1e-3 * r, 1e-9 * r
    for w0 in seeds:
        w = _gn_correct_implicit(curve, w0, r)
        if w is None:
            continue
        pt = complex(w[0], w[1]), complex(w[2], w[3])
        if any(np.min(np.abs(c[:, 0] - pt[0]) + np.abs(c[:, 1] - pt[1])) < 0.05 * r
               for c in comps):
            continue
        path = [w.copy()]
        step = step0
        start = w.copy()
        n_steps = 0
        while n_steps < 300000:
            n_steps += 1
            z1, z2 = complex(w[0], w[1]), complex(w[2], w[3])
            f1, f2 = curve.dF(z1, z2)
            xi = curve.center
            J = np.array([
                [f1.real, -f1.imag, f2.real, -f2.imag],
                [f1.imag, f1.real, f2.imag, f2.real],
                [2 * (z1 - xi[0]).real, 2 * (z1 - xi[0]).imag,
                 2 * (z2 - xi[1]).real, 2 * (z2 - xi[1]).imag]])
            _, _, vt = np.linalg.svd(J)
            tau = vt[-1]
            if path is not None and len(path) > 1 and np.dot(tau, w - path[-2]) < 0:
                tau = -tau
            cand = _gn_correct_implicit(curve, w + step * tau, r, iters=12)
            if cand is None:
                step *= 0.5
                if step < floor:
                    raise TraceError(f"implicit step underflow at r={r}")
                continue
            w = cand
            path.append(w.copy())
            step = min(step * 1.25, 30 * step0)
            if len(path) > 6 and np.linalg.norm(w - start) < 1.5 * step:
                for _ in range(200):
                    gap = np.linalg.norm(w - start)
                    if gap < 1e-8 * r:
                        break
                    direction = (start - w)
                    cand = _gn_correct_implicit(curve, w + 0.6 * direction, r, iters=12)
                    if cand is None or np.linalg.norm(cand - start) >= gap:
                        break
                    w = cand
                    path.append(w.copy())
                gaps.append(float(np.linalg.norm(w - start)))
                path.append(start.copy())
                break
        else:
            raise TraceError(f"implicit component failed to close at r={r}")
        arr = np.array(path)
        comps.append(_resample(
            np.column_stack([arr[:, 0] + 1j * arr[:, 1], arr[:, 2] + 1j * arr[:, 3]]), resample))
    lk = _linking_matrix(comps, curve.center, r)
    return LinkSnapshot(r=r, components=comps, c=len(comps), k=None, linking=lk,
                        closure_gaps=tuple(gaps))


def _critical_points_implicit(curve: ImplicitCurve) -> list[CriticalPoint]:
    """Solve {F = 0, J_xi = 0} by damped Newton on the real 4-system."""
    xi = curve.center
    eps = 1e-6

    def system(w):
        z1, z2 = complex(w[0], w[1]), complex(w[2], w[3])
        f = curve.F(z1, z2)
        j = transversality_det(curve, (z1, z2))
        return np.array([f.real, f.imag, j.real, j.imag])

    out_pts: list[np.ndarray] = []
    for w0 in _implicit_curve_points(curve):
        w = np.array([w0[0].real, w0[0].imag, w0[1].real, w0[1].imag])
        ok = False
        for _ in range(120):
            res = system(w)
            if np.abs(res).max() < 1e-11 * (1 + np.abs(w).max()):
                ok = True
                break
            J = np.empty((4, 4))
            for col in range(4):
                dw = np.zeros(4)
                dw[col] = eps * (1 + abs(w[col]))
                J[:, col] = (system(w + dw) - res) / dw[col]
            try:
                d = np.linalg.solve(J, -res)
            except np.linalg.LinAlgError:
                break
            if np.linalg.norm(d) > 1.0:
                d /= np.linalg.norm(d)
            w = w + d
        if not ok:
            continue
        if any(np.linalg.norm(w - u) < 1e-6 * (1 + np.linalg.norm(u)) for u in out_pts):
            continue
        out_pts.append(w)
    crits = []
    scale = 1 + float(np.abs(curve.coeffs).max())
    for w in out_pts:
        z1, z2 = complex(w[0], w[1]), complex(w[2], w[3])
        sing = _polish_implicit_singular(curve, (z1, z2))
        if sing is not None:
            z1, z2 = sing
            rho = math.sqrt(abs(z1 - xi[0]) ** 2 + abs(z2 - xi[1]) ** 2)
            crits.append(CriticalPoint(rho=rho, kind="singular", location=(z1, z2)))
            continue
        rho = math.sqrt(abs(z1 - xi[0]) ** 2 + abs(z2 - xi[1]) ** 2)
        idx = _implicit_morse_index(curve, (z1, z2))
        crits.append(CriticalPoint(rho=rho, kind=("min" if idx == 0 else "saddle"),
                                   location=(z1, z2), morse_index=idx))
    crits.sort(key=lambda cp: cp.rho)
    return crits


def _polish_implicit_singular(curve: ImplicitCurve, w: tuple[complex, complex],
                              radius: float = 1e-3):
    """Newton-polish a nearby root of {dF/dw1 = dF/dw2 = 0}; accept it as a
    singular point when it stays within `radius` and lies on the curve."""
    d1 = npp.polyder(curve.coeffs, axis=0)
    d2 = npp.polyder(curve.coeffs, axis=1)
    z1, z2 = w
    for _ in range(60):
        f1 = npp.polyval2d(z1, z2, d1)
        f2 = npp.polyval2d(z1, z2, d2)
        if abs(f1) + abs(f2) < 1e-13 * (1 + abs(z1) + abs(z2)):
            break
        J = np.array([
            [npp.polyval2d(z1, z2, npp.polyder(d1, axis=0)),
             npp.polyval2d(z1, z2, npp.polyder(d1, axis=1))],
            [npp.polyval2d(z1, z2, npp.polyder(d2, axis=0)),
             npp.polyval2d(z1, z2, npp.polyder(d2, axis=1))]])
        try:
            d = np.linalg.solve(J, [-f1, -f2])
        except np.linalg.LinAlgError:
            return None
        z1, z2 = z1 + complex(d[0]), z2 + complex(d[1])
    else:
        return None
    if abs(z1 - w[0]) + abs(z2 - w[1]) > radius * (1 + abs(w[0]) + abs(w[1])):
        return None
    if abs(curve.F(z1, z2)) > 1e-8 * (1 + float(np.abs(curve.coeffs).max())):
        return None
    return (z1, z2)


def _implicit_morse_index(curve: ImplicitCurve, w: tuple[complex, complex]) -> int:
    """Index of g|C at a smooth critical point, by sampling g on the curve nearby."""
    z1, z2 = w
    f1, f2 = curve.dF(z1, z2)
    # complex tangent direction of C at w
    tau = np.array([-f2, f1])
    tau /= np.linalg.norm([abs(tau[0]), abs(tau[1])])
    xi = curve.center
    g0 = abs(z1 - xi[0]) ** 2 + abs(z2 - xi[1]) ** 2
    eps = 1e-4 * (1 + math.sqrt(g0))
    signs = []
    for theta in np.linspace(0, 2 * math.pi, 16, endpoint=False):
        d = eps * cmath.exp(1j * theta)
        w1, w2 = z1 + d * tau[0], z2 + d * tau[1]
        # correct back onto C along the gradient of F
        for _ in range(20):
            f = curve.F(w1, w2)
            if abs(f) < 1e-14 * (1 + abs(w1) + abs(w2)):
                break
            g1c, g2c = curve.dF(w1, w2)
            nrm = abs(g1c) ** 2 + abs(g2c) ** 2
            w1 -= f * g1c.conjugate() / nrm
            w2 -= f * g2c.conjugate() / nrm
        signs.append(abs(w1 - xi[0]) ** 2 + abs(w2 - xi[1]) ** 2 - g0)
    return 0 if all(s > 0 for s in signs) else 1


# --------------------------------------------------------------------------
# sweep and event classification
# --------------------------------------------------------------------------

def _classify_smooth_group(group: list[CriticalPoint], dc: int, dk: int) -> tuple[str, str]:
    """Resolve a group of smooth criticals into named handles from (dc, dk).

    With b births and s saddles: joins j satisfy dk = b - j, divorces dv and
    marriages mg fill s - j with dc = b - j + dv - mg; dv = (s + dc - b) / 2.
    """
    births = sum(1 for cp in group if cp.morse_index == 0)
    saddles = sum(1 for cp in group if cp.morse_index == 1)
    joins = births - dk
    div2 = saddles + dc - births
    if joins < 0 or joins > saddles or div2 % 2 or div2 < 0:
        return "unresolved", f"component bookkeeping failed (dc={dc}, dk={dk})"
    divorces = div2 // 2
    marriages = saddles - joins - divorces
    if divorces > saddles - joins or marriages < 0:
        return "unresolved", f"component bookkeeping failed (dc={dc}, dk={dk})"
    names = (["birth"] * births + ["join"] * joins
             + ["divorce"] * divorces + ["marriage"] * marriages)
    if len(names) == 1:
        return names[0], ""
    return "composite", "+".join(names)


def sweep(curve: CurveSpec, r_min: float, r_max: float,
          samples: int = 0) -> tuple[list[LinkSnapshot], list[SweepEvent]]:
    """Trace the link across [r_min, r_max] and classify every handle event.

    Snapshots are taken at non-critical radii bracketing each critical value
    (plus `samples` extra evenly spaced radii).  Critical radii closer than
    the G1 tolerance are processed as one composite event with combined
    deltas and flagged.
    """
    all_crit = critical_points(curve)
    crit = [cp for cp in all_crit if r_min < cp.rho < r_max]
    groups: list[list[CriticalPoint]] = []
    for cp in crit:
        if groups and abs(cp.rho - groups[-1][-1].rho) <= G1_TOL * max(1.0, cp.rho):
            groups[-1].append(cp)
        else:
            groups.append([cp])
    radii = [r_min]
    for a, b in zip(groups, groups[1:]):
        radii.append(0.5 * (a[-1].rho + b[0].rho))
    radii.append(r_max)
    if samples:
        extra = np.linspace(r_min, r_max, samples + 2)[1:-1]
        for r in extra:
            if all(abs(r - cp.rho) > 10 * G1_TOL * max(1.0, r) for cp in crit):
                radii.append(float(r))
    radii = sorted(set(radii))
    snapshots = [trace_link(curve, r, criticals=all_crit) for r in radii]
    by_r = {s.r: s for s in snapshots}
    events: list[SweepEvent] = []
    for gi, group in enumerate(groups):
        rho = group[0].rho
        before = max((s for s in snapshots if s.r < rho), key=lambda s: s.r)
        after = min((s for s in snapshots if s.r > rho), key=lambda s: s.r)
        dc = after.c - before.c
        dk = (after.k - before.k) if (after.k is not None and before.k is not None) else 0
        g1_bad = len(group) > 1
        singulars = [cp for cp in group if cp.kind == "singular"]
        if singulars:
            dchi = sum((cp.branches or 1) - (cp.multiplicity or 1) for cp in singulars) \
                 + sum({0: 1, 1: -1}.get(cp.morse_index, 0) for cp in group if cp.kind != "singular")
            dg2 = 2 * dk - dchi - dc
            if dg2 % 2:
                events.append(SweepEvent(rho, "unresolved", tuple(group), dc, dk, dchi, 0,
                                         g1_bad, "non-integer genus change"))
                continue
            events.append(SweepEvent(rho, "singular", tuple(group), dc, dk, dchi, dg2 // 2,
                                     g1_bad, ""))
        else:
            kind, detail = _classify_smooth_group(group, dc, dk)
            dchi = sum(1 if cp.morse_index == 0 else -1 for cp in group)
            names = detail.split("+") if kind == "composite" else [kind]
            dg = names.count("marriage")
            events.append(SweepEvent(rho, kind, tuple(group), dc, dk, dchi, dg, g1_bad, detail))
    return snapshots, events


def smooth_handle_ledger(events: Sequence[SweepEvent]) -> dict:
    """Count smooth births/joins/divorces/marriages over classified events."""
    counts = {"birth": 0, "join": 0, "divorce": 0, "marriage": 0}
    for ev in events:
        if ev.kind in counts:
            counts[ev.kind] += 1
        elif ev.kind == "composite":
            for name in ev.detail.split("+"):
                if name in counts:
                    counts[name] += 1
    return counts


# --------------------------------------------------------------------------
# budgets and genericity
# --------------------------------------------------------------------------

def bezout_budget(d: int) -> int:
    """d(d-2): non-transversality points of a degree-d curve, with multiplicity."""
    if d < 1:
        raise ValueError("degree must be positive")
    return d * (d - 2)


def budget_report(curve: CurveSpec, milnor: Optional[dict] = None) -> dict:
    """Informational comparison of detected criticals against the budget.

    Intersection multiplicities can be negative (the determinant locus is
    only real-algebraic), so the detected count need not match the budget;
    supplied Milnor numbers contribute mu - 1 each at singular points.
    """
    crit = critical_points(curve)
    d = curve.degree
    rep = {
        "degree": d,
        "budget": bezout_budget(d),
        "detected": len(crit),
        "smooth": sum(1 for c in crit if c.kind != "singular"),
        "singular": sum(1 for c in crit if c.kind == "singular"),
        "criticals": [
            {"rho": round(c.rho, 10), "kind": c.kind,
             "multiplicity": c.multiplicity, "branches": c.branches}
            for c in crit
        ],
        "note": "signed multiplicities possible; detected count may exceed the budget",
    }
    if milnor:
        rep["teissier_contributions"] = {k: v - 1 for k, v in milnor.items()}
    return rep


def genericity_check(curve: CurveSpec, tol: float = 1e-6) -> GenericityReport:
    """Tolerance-qualified tests of the three genericity conditions.

    G1: critical radii pairwise distinct; G2: Morse nondegeneracy at smooth
    criticals; G3: branch tangents at singular points have nonzero components
    both along and orthogonal to the radial complex line.
    """
    crit = critical_points(curve)
    near: list[str] = []
    g1 = True
    for a, b in zip(crit, crit[1:]):
        if abs(a.rho - b.rho) <= tol * max(1.0, a.rho):
            g1 = False
            near.append(f"G1: radii {a.rho:.8f} and {b.rho:.8f} coincide")
    g2 = True
    if isinstance(curve, ParametricCurve):
        for cp in crit:
            if cp.kind == "singular" or not cp.params:
                continue
            t = cp.params[0]
            a, b = abs(curve.h_t(t)), float(curve.h_tbar(t))
            det = b * b - a * a
            if abs(det) <= tol * (a * a + b * b):
                g2 = False
                near.append(f"G2: degenerate Hessian at rho={cp.rho:.8f}")
        g3 = True
        for cp in crit:
            if cp.kind != "singular":
                continue
            z = complex(cp.location[0]) - curve.center[0], complex(cp.location[1]) - curve.center[1]
            nz = math.sqrt(abs(z[0]) ** 2 + abs(z[1]) ** 2)
            if nz == 0:
                continue
            e_r = (z[0] / nz, z[1] / nz)
            e_p = (-e_r[1].conjugate(), e_r[0].conjugate())
            for t0 in cp.params:
                xd, yd = curve.x, curve.y
                v = None
                for _ in range(max(len(xd), len(yd))):
                    xd = npp.polyder(xd) if len(xd) > 1 else np.zeros(1)
                    yd = npp.polyder(yd) if len(yd) > 1 else np.zeros(1)
                    vx, vy = npp.polyval(t0, xd), npp.polyval(t0, yd)
                    if abs(vx) + abs(vy) > 1e-9:
                        v = (complex(vx), complex(vy))
                        break
                if v is None:
                    continue
                nv = math.sqrt(abs(v[0]) ** 2 + abs(v[1]) ** 2)
                beta = (v[0] * e_r[0].conjugate() + v[1] * e_r[1].conjugate()) / nv
                alpha = (v[0] * e_p[0].conjugate() + v[1] * e_p[1].conjugate()) / nv
                if abs(alpha * beta) <= tol:
                    g3 = False
                    near.append(f"G3: branch tangent at rho={cp.rho:.8f} nearly radial/spherical")
    else:
        g3 = True
    return GenericityReport(g1=g1, g2=g2, g3=g3, near_violations=tuple(near),
                            tolerances={"g1": tol, "g2": tol, "g3": tol})


# --------------------------------------------------------------------------
# wire formats
# --------------------------------------------------------------------------

def _c2pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _pair2c(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])


def curve_from_json(text: str) -> CurveSpec:
    doc = json.loads(text)
    center_raw = doc.get("center", [0, 0, 0, 0])
    if len(center_raw) == 4:
        center = (complex(center_raw[0], center_raw[1]), complex(center_raw[2], center_raw[3]))
    else:
        center = (_pair2c(center_raw[0]), _pair2c(center_raw[1]))
    if "parametric" in doc:
        par = doc["parametric"]
        return ParametricCurve(np.array([_pair2c(v) for v in par["x"]]),
                               np.array([_pair2c(v) for v in par["y"]]), center)
    if "implicit" in doc:
        rows = doc["implicit"]["coeffs"]
        mat = np.array([[_pair2c(v) for v in row] for row in rows])
        return ImplicitCurve(mat, center)
    raise ValueError("curve JSON needs a 'parametric' or 'implicit' block")


def curve_to_json(curve: CurveSpec) -> str:
    center = [curve.center[0].real, curve.center[0].imag,
              curve.center[1].real, curve.center[1].imag]
    if isinstance(curve, ParametricCurve):
        doc = {"parametric": {"x": [_c2pair(v) for v in curve.x],
                              "y": [_c2pair(v) for v in curve.y]},
               "center": center}
    else:
        doc = {"implicit": {"coeffs": [[_c2pair(v) for v in row] for row in curve.coeffs]},
               "center": center}
    return json.dumps(doc, indent=1)


def snapshot_svg(snap: LinkSnapshot, center, size: int = 480) -> str:
    """Stereographic projection of a snapshot to an SVG diagram.

    Projects to the plane by dropping the third coordinate; at each 2D
    crossing the strand with the smaller dropped coordinate gets a gap.
    """
    proj3 = _stereographic(snap.components, center, snap.r)
    segs = []  # (comp, i, p, q, z_mid)
    for ci, arr in enumerate(proj3):
        closed = np.vstack([arr, arr[:1]])
        for i in range(len(arr)):
            p, q = closed[i], closed[i + 1]
            segs.append([ci, i, p[:2], q[:2], 0.5 * (p[2] + q[2])])
    gaps = set()
    for a in range(len(segs)):
        for b in range(a + 1, len(segs)):
            c1, i1, p1, q1, z1 = segs[a]
            c2, i2, p2, q2, z2 = segs[b]
            if c1 == c2 and abs(i1 - i2) <= 1:
                continue
            d1, d2 = q1 - p1, q2 - p2
            den = d1[0] * d2[1] - d1[1] * d2[0]
            if abs(den) < 1e-14:
                continue
            w = p2 - p1
            s = (w[0] * d2[1] - w[1] * d2[0]) / den
            u = (w[0] * d1[1] - w[1] * d1[0]) / den
            if 0 <= s <= 1 and 0 <= u <= 1:
                gaps.add((c1, i1) if z1 < z2 else (c2, i2))
    pts_all = np.vstack([a[:, :2] for a in proj3])
    lo, hi = pts_all.min(axis=0), pts_all.max(axis=0)
    span = max((hi - lo).max(), 1e-9)

    def sxy(p):
        q = (p - lo) / span * (size - 40) + 20
        return f"{q[0]:.2f},{size - q[1]:.2f}"

    colors = ["#204a87", "#a40000", "#4e9a06", "#ce5c00", "#5c3566"]
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">']
    for ci, arr in enumerate(proj3):
        closed = np.vstack([arr, arr[:1]])
        color = colors[ci % len(colors)]
        run: list[str] = []
        for i in range(len(arr)):
            if (ci, i) in gaps:
                if run:
                    lines.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.6" '
                                 f'points="{" ".join(run)}"/>')
                    run = []
                continue
            if not run:
                run.append(sxy(closed[i][:2]))
            run.append(sxy(closed[i + 1][:2]))
        if run:
            lines.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.6" '
                         f'points="{" ".join(run)}"/>')
    lines.append("</svg>")
    return "\n".join(lines)
