"""Symbolic link descriptors with uniform access to (sigma*, n*, c).

A descriptor is a torus link, an iterated torus (cable) knot, a sum, or a
user-supplied invariant record for links whose signatures this package does
not compute itself (splice-diagram links at infinity enter this way).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

from .spectra import (
    CableChain,
    SignatureProfile,
    cable_signature_tl,
    torus_n0,
    torus_signature_tl,
)

__all__ = [
    "TorusLink",
    "Cable",
    "DisconnectedSum",
    "ConnectedSum",
    "Given",
    "LinkDescriptor",
    "PuiseuxData",
    "SingularityData",
    "Verdict",
    "cable_chain_from_puiseux",
    "descriptor_invariants",
    "sigmult_check",
    "stupid_check",
    "nemethi_check",
    "descriptor_to_obj",
    "descriptor_from_obj",
]


@dataclass(frozen=True)
class Verdict:
    """Outcome of one inequality check: lhs vs rhs with signed slack.

    ``holds`` is the stated inequality; ``slack`` is how far it is from
    failing (0 means tight), with the orientation documented per checker.
    """

    lhs: int
    rhs: int
    holds: bool
    slack: int

    @staticmethod
    def of_le(lhs: int, rhs: int) -> "Verdict":
        return Verdict(lhs, rhs, lhs <= rhs, rhs - lhs)

    @staticmethod
    def of_ge(lhs: int, rhs: int) -> "Verdict":
        return Verdict(lhs, rhs, lhs >= rhs, lhs - rhs)


@dataclass(frozen=True)
class TorusLink:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError(f"bad torus parameters ({self.p}, {self.q})")

    @property
    def components(self) -> int:
        return gcd(self.p, self.q)


@dataclass(frozen=True)
class Cable:
    chain: CableChain

    @property
    def components(self) -> int:
        return 1  # iterated torus knots only


@dataclass(frozen=True)
class DisconnectedSum:
    parts: tuple["LinkDescriptor", ...]

    def __post_init__(self):
        if len(self.parts) < 1:
            raise ValueError("sum needs at least one part")


@dataclass(frozen=True)
class ConnectedSum:
    parts: tuple["LinkDescriptor", ...]

    def __post_init__(self):
        if len(self.parts) < 1:
            raise ValueError("sum needs at least one part")


@dataclass(frozen=True)
class Given:
    """User-supplied invariants: either a full profile or a single value at x = 1/2."""

    name: str
    c: int
    sigma: Optional[int] = None
    n: Optional[int] = None
    profile: Optional[SignatureProfile] = None

    def __post_init__(self):
        if self.profile is None and (self.sigma is None or self.n is None):
            raise ValueError(f"Given '{self.name}' needs either a profile or (sigma, n)")


LinkDescriptor = Union[TorusLink, Cable, DisconnectedSum, ConnectedSum, Given]


@dataclass(frozen=True)
class PuiseuxData:
    """Characteristic exponents (n; m_1 < m_2 < ...) of a unibranched parametrisation."""

    n: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("multiplicity n must be >= 2")
        if not self.exponents:
            raise ValueError("need at least one characteristic exponent")
        ms = self.exponents
        if any(ms[i] >= ms[i + 1] for i in range(len(ms) - 1)):
            raise ValueError("characteristic exponents must be strictly increasing")
        e = self.n
        for m in ms:
            e2 = gcd(e, m)
            if e2 == e:
                raise ValueError(f"exponent {m} is not characteristic (gcd does not drop)")
            e = e2
        if e != 1:
            raise ValueError("exponent chain must terminate with gcd 1")


def cable_chain_from_puiseux(d: PuiseuxData) -> CableChain:
    """Cable parameters of the singularity link of a unibranched parametrisation.

    With gcds e_0 = n, e_i = gcd(e_{i-1}, m_i) the Newton pairs are
    p_i = e_{i-1}/e_i, q_1 = m_1/e_1, q_i = (m_i - m_{i-1})/e_i, and the
    cabling invariants follow a_1 = q_1, a_i = q_i + p_i p_{i-1} a_{i-1};
    stage i is the (a_i, p_i)-cable.  The convention is anchored by
    (4; 6, 9) -> [(2, 3), (15, 2)].
    """
    e = [d.n]
    for m in d.exponents:
        e.append(gcd(e[-1], m))
    stages: list[tuple[int, int]] = []
    a_prev = 0
    p_prev = 1
    for i, m in enumerate(d.exponents, start=1):
        p_i = e[i - 1] // e[i]
        if i == 1:
            q_i = m // e[1]
            a_i = q_i
            stages.append((p_i, q_i))
        else:
            q_i = (m - d.exponents[i - 2]) // e[i]
            a_i = q_i + p_i * p_prev * a_prev
            stages.append((a_i, p_i))
        a_prev, p_prev = a_i, p_i
    return CableChain.of(stages)


@dataclass(frozen=True)
class SingularityData:
    """One singular point: its link plus local numerical invariants."""

    link: LinkDescriptor
    multiplicity: int
    branches: int
    milnor: Optional[int] = None
    delta: Optional[int] = None

    def __post_init__(self):
        if self.branches < 1:
            raise ValueError("branch count must be >= 1")
        if self.multiplicity < 2:
            raise ValueError("a genuine singular point has multiplicity >= 2")
        if self.milnor is not None:
            if (self.milnor + self.branches - 1) % 2 != 0:
                raise ValueError("mu + r - 1 must be even")
            d = (self.milnor + self.branches - 1) // 2
            if self.delta is not None and self.delta != d:
                raise ValueError(f"delta={self.delta} disagrees with (mu+r-1)/2={d}")
            object.__setattr__(self, "delta", d)


def descriptor_invariants(link: LinkDescriptor, x: Fraction) -> tuple[int, int, int]:
    """(sigma*_x, n*_x, c) of a descriptor, exact.

    Disconnected sums add all three quantities; connected sums add sigma and
    subtract k-1 from both n and c (the k summands share a component).
    """
    x = Fraction(x)
    if not (0 < x < 1):
        raise ValueError(f"angle parameter must satisfy 0 < x < 1, got {x}")
    if isinstance(link, TorusLink):
        if link.p == 1 or link.q == 1:
            return 0, 1, 1
        n_star = 1 if gcd(link.p, link.q) == 1 else torus_n0(link.p, link.q) + 1
        return torus_signature_tl(link.p, link.q, x), n_star, link.components
    if isinstance(link, Cable):
        return cable_signature_tl(link.chain, x), 1, 1
    if isinstance(link, DisconnectedSum):
        parts = [descriptor_invariants(p, x) for p in link.parts]
        return (sum(s for s, _, _ in parts),
                sum(n for _, n, _ in parts),
                sum(c for _, _, c in parts))
    if isinstance(link, ConnectedSum):
        parts = [descriptor_invariants(p, x) for p in link.parts]
        k = len(parts)
        return (sum(s for s, _, _ in parts),
                sum(n for _, n, _ in parts) - (k - 1),
                sum(c for _, _, c in parts) - (k - 1))
    if isinstance(link, Given):
        if link.profile is not None:
            s, n = link.profile.value_at(x)
            return s, n, link.c
        if x != Fraction(1, 2):
            raise ValueError(
                f"Given '{link.name}' only carries data at x = 1/2, asked for {x}")
        return link.sigma, link.n, link.c
    raise TypeError(f"not a link descriptor: {link!r}")


def _is_unknot(link: LinkDescriptor) -> bool:
    return isinstance(link, TorusLink) and (link.p == 1 or link.q == 1)


def _is_hopf(link: LinkDescriptor) -> bool:
    return isinstance(link, TorusLink) and sorted((link.p, link.q)) == [2, 2]


def sigmult_check(s: SingularityData, sigma: int) -> Verdict:
    """sigma(L) <= 1 - r for an r-branch singularity link.

    Equality is only allowed for the Hopf link and the trivial knot; for any
    other descriptor an exact tie counts as a failure.
    """
    v = Verdict.of_le(sigma, 1 - s.branches)
    if v.holds and v.slack == 0 and not (_is_hopf(s.link) or _is_unknot(s.link)):
        return Verdict(v.lhs, v.rhs, False, 0)
    return v


def stupid_check(sigma_l: int, sigma_k: int, n: int) -> Verdict:
    """sigma(L) <= sigma(K_{n+1}) + 1 - n for an (n+1)-branch singularity link."""
    return Verdict.of_le(sigma_l, sigma_k + 1 - n)


def nemethi_check(sigma: int, sigma1: int, sigma2: int) -> Verdict:
    """sigma <= sigma_1 + sigma_2 for a local decomposition of the singularity."""
    return Verdict.of_le(sigma, sigma1 + sigma2)


# --- JSON wire format -------------------------------------------------------

def descriptor_to_obj(link: LinkDescriptor):
    if isinstance(link, TorusLink):
        return {"type": "torus", "p": link.p, "q": link.q}
    if isinstance(link, Cable):
        return {"type": "cable", "stages": [list(s) for s in link.chain.stages]}
    if isinstance(link, DisconnectedSum):
        return {"type": "disconnected", "parts": [descriptor_to_obj(p) for p in link.parts]}
    if isinstance(link, ConnectedSum):
        return {"type": "connected", "parts": [descriptor_to_obj(p) for p in link.parts]}
    if isinstance(link, Given):
        obj = {"type": "given", "name": link.name, "c": link.c}
        if link.profile is not None:
            obj["profile"] = {
                "breakpoints": [str(b) for b in link.profile.breakpoints],
                "values": [list(v) for v in link.profile.values],
            }
        else:
            obj["sigma"] = link.sigma
            obj["n"] = link.n
        return obj
    raise TypeError(f"not a link descriptor: {link!r}")


def descriptor_from_obj(obj) -> LinkDescriptor:
    if isinstance(obj, list):  # bare array reads as a disconnected sum
        return DisconnectedSum(tuple(descriptor_from_obj(o) for o in obj))
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValueError(f"bad link descriptor object: {obj!r}")
    kind = obj["type"]
    if kind == "torus":
        return TorusLink(int(obj["p"]), int(obj["q"]))
    if kind == "cable":
        return Cable(CableChain.of(obj["stages"]))
    if kind == "puiseux":
        data = PuiseuxData(int(obj["n"]), tuple(int(m) for m in obj["exponents"]))
        return Cable(cable_chain_from_puiseux(data))
    if kind in ("disconnected", "connected"):
        parts = tuple(descriptor_from_obj(o) for o in obj["parts"])
        return DisconnectedSum(parts) if kind == "disconnected" else ConnectedSum(parts)
    if kind == "given":
        profile = None
        if "profile" in obj:
            profile = SignatureProfile(
                tuple(Fraction(b) for b in obj["profile"]["breakpoints"]),
                tuple((int(s), int(n)) for s, n in obj["profile"]["values"]),
            )
        return Given(
            name=obj.get("name", "given"),
            c=int(obj["c"]),
            sigma=None if "sigma" not in obj else int(obj["sigma"]),
            n=None if "n" not in obj else int(obj["n"]),
            profile=profile,
        )
    raise ValueError(f"unknown link descriptor type {kind!r}")


def descriptor_to_json(link: LinkDescriptor) -> str:
    return json.dumps(descriptor_to_obj(link), indent=1)


def descriptor_from_json(text: str) -> LinkDescriptor:
    return descriptor_from_obj(json.loads(text))
