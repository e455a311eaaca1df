"""STL formula AST over a UAV fleet.

Formulas are immutable trees built from atomic predicates on fleet states
(halfspaces, box membership/avoidance, pairwise separation) and the bounded
temporal operators Eventually / Always / Until.  Time bounds are discrete
step indices on a shared grid; UAV indices are 0-based internally and render
as ``u1..uD`` in the text form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce


@dataclass(frozen=True)
class Box:
    """Axis-aligned box with inclusive corners, one entry per spatial axis."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("box corners must have equal dimension")
        if any(l > h for l, h in zip(self.lo, self.hi)):
            raise ValueError(f"inverted box: lo={self.lo} hi={self.hi}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def center(self) -> tuple[float, ...]:
        return tuple((l + h) / 2.0 for l, h in zip(self.lo, self.hi))

    def contains(self, point) -> bool:
        return all(l <= p <= h for l, p, h in zip(self.lo, point, self.hi))


@dataclass(frozen=True)
class Interval:
    """Discrete time window ``[lo, hi]`` in steps.  ``lo == hi`` is a single instant."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError(f"negative interval bound: [{self.lo},{self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"inverted interval: [{self.lo},{self.hi}]")

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


class Formula:
    """Base class; nodes are frozen dataclasses and safe to share."""

    __slots__ = ()


@dataclass(frozen=True)
class TrueF(Formula):
    def __str__(self) -> str:
        return "true"


class Atom(Formula):
    """Atomic predicate ``mu(x) >= 0``; subclasses define the margin ``mu``."""

    __slots__ = ()


@dataclass(frozen=True)
class Halfspace(Atom):
    """``a . pos_uav - b >= 0``; coefficients are one per spatial axis."""

    uav: int
    coeffs: tuple[float, ...]
    offset: float

    def __str__(self) -> str:
        nums = ",".join(_fmt(c) for c in (*self.coeffs, self.offset))
        return f"hs(u{self.uav + 1},{nums})"


@dataclass(frozen=True)
class InBox(Atom):
    """Membership margin: depth of pos_uav inside the named box (negative outside)."""

    uav: int
    region: str
    box: Box

    def __str__(self) -> str:
        return f"in(u{self.uav + 1},{self.region})"


@dataclass(frozen=True)
class OutBox(Atom):
    """Avoidance margin: distance of pos_uav outside the box (negative inside)."""

    uav: int
    region: str
    box: Box

    def __str__(self) -> str:
        return f"out(u{self.uav + 1},{self.region})"


@dataclass(frozen=True)
class Separation(Atom):
    """``|pos_a - pos_b| - dist >= 0`` (Euclidean pairwise separation)."""

    uav_a: int
    uav_b: int
    dist: float

    def __post_init__(self):
        if self.uav_a == self.uav_b:
            raise ValueError("separation atom needs two distinct UAVs")

    def __str__(self) -> str:
        return f"sep(u{self.uav_a + 1},u{self.uav_b + 1},{_fmt(self.dist)})"


@dataclass(frozen=True)
class Not(Formula):
    child: Formula

    def __str__(self) -> str:
        return f"!{_child_str(self.child)}"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Eventually(Formula):
    window: Interval
    child: Formula

    def __str__(self) -> str:
        return f"F{self.window}{_child_str(self.child)}"


@dataclass(frozen=True)
class Always(Formula):
    window: Interval
    child: Formula

    def __str__(self) -> str:
        return f"G{self.window}{_child_str(self.child)}"


@dataclass(frozen=True)
class Until(Formula):
    window: Interval
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} U{self.window} {self.right})"


def _fmt(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def _child_str(phi: Formula) -> str:
    """Atoms are self-delimiting; everything else gets parentheses."""
    if isinstance(phi, (Atom, TrueF)):
        return str(phi)
    s = str(phi)
    return s if s.startswith("(") else f"({s})"


def pretty(phi: Formula) -> str:
    """Canonical text form; ``parse(pretty(phi))`` reproduces ``phi``."""
    return str(phi)


def conj(parts) -> Formula:
    """Left fold of binary Ands; empty input yields ``true``."""
    parts = list(parts)
    if not parts:
        return TrueF()
    return reduce(And, parts)


def uavs(phi: Formula) -> frozenset[int]:
    """Set of UAV indices the formula constrains."""
    if isinstance(phi, (Halfspace, InBox, OutBox)):
        return frozenset((phi.uav,))
    if isinstance(phi, Separation):
        return frozenset((phi.uav_a, phi.uav_b))
    if isinstance(phi, TrueF):
        return frozenset()
    if isinstance(phi, Not):
        return uavs(phi.child)
    if isinstance(phi, (Eventually, Always)):
        return uavs(phi.child)
    if isinstance(phi, (And, Or, Until)):
        return uavs(phi.left) | uavs(phi.right)
    raise TypeError(f"not a formula node: {phi!r}")


def horizon(phi: Formula) -> int:
    """Largest time index an evaluation at t=0 can touch; +1 samples suffice."""
    if isinstance(phi, (Atom, TrueF)):
        return 0
    if isinstance(phi, Not):
        return horizon(phi.child)
    if isinstance(phi, (And, Or)):
        return max(horizon(phi.left), horizon(phi.right))
    if isinstance(phi, (Eventually, Always)):
        return phi.window.hi + horizon(phi.child)
    if isinstance(phi, Until):
        return phi.window.hi + max(horizon(phi.left), horizon(phi.right))
    raise TypeError(f"not a formula node: {phi!r}")


def sample_count(phi: Formula) -> int:
    return horizon(phi) + 1


def uav_horizon(phi: Formula, uav: int) -> int | None:
    """Largest index reachable inside sub-formulas that mention ``uav``.

    ``None`` when the UAV does not appear at all.
    """
    if isinstance(phi, (Atom, TrueF)):
        return 0 if uav in uavs(phi) else None
    if isinstance(phi, Not):
        return uav_horizon(phi.child, uav)
    if isinstance(phi, (And, Or)):
        parts = [uav_horizon(c, uav) for c in (phi.left, phi.right)]
        parts = [p for p in parts if p is not None]
        return max(parts) if parts else None
    if isinstance(phi, (Eventually, Always)):
        h = uav_horizon(phi.child, uav)
        return None if h is None else phi.window.hi + h
    if isinstance(phi, Until):
        parts = [uav_horizon(c, uav) for c in (phi.left, phi.right)]
        parts = [p for p in parts if p is not None]
        return phi.window.hi + max(parts) if parts else None
    raise TypeError(f"not a formula node: {phi!r}")


def negate_atom(atom: Atom) -> Formula:
    """Exact complement where one exists; box atoms flip kind, others keep Not."""
    if isinstance(atom, InBox):
        return OutBox(atom.uav, atom.region, atom.box)
    if isinstance(atom, OutBox):
        return InBox(atom.uav, atom.region, atom.box)
    return Not(atom)


def nnf(phi: Formula) -> Formula:
    """Push negation down to atoms (negation normal form).

    ``!true`` is kept as a leaf (there is no dedicated false node).  A negated
    Until is expanded into its finite conjunction over witness instants
    ``G[j,j]!right | F[1,j-1]!left``; on traces where the two operands share a
    common available range this is robustness-exact.
    """
    return _nnf(phi, False)


def _nnf(phi: Formula, neg: bool) -> Formula:
    if isinstance(phi, TrueF):
        return Not(phi) if neg else phi
    if isinstance(phi, Atom):
        return negate_atom(phi) if neg else phi
    if isinstance(phi, Not):
        return _nnf(phi.child, not neg)
    if isinstance(phi, And):
        op = Or if neg else And
        return op(_nnf(phi.left, neg), _nnf(phi.right, neg))
    if isinstance(phi, Or):
        op = And if neg else Or
        return op(_nnf(phi.left, neg), _nnf(phi.right, neg))
    if isinstance(phi, Eventually):
        op = Always if neg else Eventually
        return op(phi.window, _nnf(phi.child, neg))
    if isinstance(phi, Always):
        op = Eventually if neg else Always
        return op(phi.window, _nnf(phi.child, neg))
    if isinstance(phi, Until):
        if not neg:
            return Until(phi.window, _nnf(phi.left, False), _nnf(phi.right, False))
        terms = []
        for j in range(phi.window.lo, phi.window.hi + 1):
            miss = Always(Interval(j, j), _nnf(phi.right, True))
            if j >= 2:
                escape = Eventually(Interval(1, j - 1), _nnf(phi.left, True))
                terms.append(Or(miss, escape))
            else:
                terms.append(miss)
        return conj(terms)
    raise TypeError(f"not a formula node: {phi!r}")


def is_nnf(phi: Formula) -> bool:
    if isinstance(phi, Not):
        return isinstance(phi.child, (Atom, TrueF))
    if isinstance(phi, (Atom, TrueF)):
        return True
    if isinstance(phi, (Eventually, Always)):
        return is_nnf(phi.child)
    if isinstance(phi, (And, Or, Until)):
        return is_nnf(phi.left) and is_nnf(phi.right)
    return False


def iter_nodes(phi: Formula):
    """Pre-order traversal."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (Eventually, Always)):
            stack.append(node.child)
        elif isinstance(node, (And, Or, Until)):
            stack.append(node.right)
            stack.append(node.left)


def validate(phi: Formula, n_uavs: int) -> None:
    """Raise if the formula references a UAV outside ``0..n_uavs-1``."""
    bad = [u for u in uavs(phi) if not 0 <= u < n_uavs]
    if bad:
        names = ", ".join(f"u{u + 1}" for u in sorted(bad))
        raise ValueError(f"formula references unknown UAVs: {names}")


def depth(phi: Formula) -> int:
    if isinstance(phi, (Atom, TrueF)):
        return 0
    if isinstance(phi, Not):
        return depth(phi.child)
    if isinstance(phi, (Eventually, Always)):
        return 1 + depth(phi.child)
    if isinstance(phi, (And, Or, Until)):
        return 1 + max(depth(phi.left), depth(phi.right))
    raise TypeError(f"not a formula node: {phi!r}")
