"""Permutations of {1..n} and the subgroups of S_n they generate.

Composition convention, fixed for the whole package: ``compose(p, q)`` applies
``p`` first and then ``q`` (left-to-right action on points), so
``compose(p, q)(i) == q(p(i))``.  Conjugation is ``conjugate(p, g) = g^-1 p g``
under the same convention, which makes it a right action:
``conjugate(conjugate(p, g), h) == conjugate(p, compose(g, h))``.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

COMPOSITION_CONVENTION = "left-to-right"


class PermutationError(ValueError):
    """Malformed permutation input (non-bijection, degree mismatch, bad text)."""


@dataclass(frozen=True, slots=True, order=True)
class Permutation:
    """A bijection of {1..n}; ``images[i - 1]`` is the image of point ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        n = len(images)
        if n < 1:
            raise PermutationError("degree must be at least 1")
        if sorted(images) != list(range(1, n + 1)):
            raise PermutationError(f"not a bijection of 1..{n}: {list(images)}")
        object.__setattr__(self, "images", images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __str__(self) -> str:
        return format_perm(self)

    def __repr__(self) -> str:
        return f"Permutation({format_perm(self)})"

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles, including fixed points, each starting at its least point."""
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        nontrivial = [c for c in self.cycles() if len(c) > 1]
        if not nontrivial:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in nontrivial)

    def zero_based(self) -> tuple[int, ...]:
        return tuple(v - 1 for v in self.images)

    @classmethod
    def from_zero_based(cls, images: Iterable[int]) -> "Permutation":
        return cls(tuple(int(v) + 1 for v in images))


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def from_cycles(n: int, *cycles: Sequence[int]) -> Permutation:
    """Build a permutation of degree ``n`` from 1-based cycles, e.g. ``from_cycles(3, (1, 2))``."""
    images = list(range(1, n + 1))
    seen = set()
    for cyc in cycles:
        for i, a in enumerate(cyc):
            if not 1 <= a <= n or a in seen:
                raise PermutationError(f"bad cycle {tuple(cyc)} for degree {n}")
            seen.add(a)
            images[a - 1] = cyc[(i + 1) % len(cyc)]
    return Permutation(tuple(images))


def transposition(n: int, i: int, j: int) -> Permutation:
    return from_cycles(n, (i, j))


def _check_degrees(*perms: Permutation) -> int:
    n = perms[0].degree
    for p in perms[1:]:
        if p.degree != n:
            raise PermutationError(f"degree mismatch: {n} vs {p.degree}")
    return n


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply ``p``, then ``q``."""
    _check_degrees(p, q)
    qi = q.images
    return Permutation(tuple(qi[v - 1] for v in p.images))


def inverse(p: Permutation) -> Permutation:
    out = [0] * p.degree
    for i, v in enumerate(p.images, start=1):
        out[v - 1] = i
    return Permutation(tuple(out))


def conjugate(p: Permutation, g: Permutation) -> Permutation:
    """Return ``g^-1 p g``: relabel each point ``x`` of ``p``'s cycles as ``g(x)``."""
    _check_degrees(p, g)
    return compose(compose(inverse(g), p), g)


def power(p: Permutation, k: int) -> Permutation:
    base = p if k >= 0 else inverse(p)
    out = identity(p.degree)
    for _ in range(abs(k)):
        out = compose(out, base)
    return out


def is_identity(p: Permutation) -> bool:
    return all(v == i for i, v in enumerate(p.images, start=1))


@dataclass(frozen=True)
class CycleType:
    """Cycle lengths sorted in decreasing order, fixed points included."""

    partition: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.partition)

    def counts(self) -> Counter:
        return Counter(self.partition)

    def __str__(self) -> str:
        return "+".join(map(str, self.partition))


def cycle_type(p: Permutation) -> CycleType:
    return CycleType(tuple(sorted((len(c) for c in p.cycles()), reverse=True)))


def is_transposition(p: Permutation) -> bool:
    moved = [i for i, v in enumerate(p.images, start=1) if v != i]
    return len(moved) == 2 and p(moved[0]) == moved[1]


# -- text form ---------------------------------------------------------------

_PERM_RE = re.compile(r"^\s*\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]\s*$")


def format_perm(p: Permutation) -> str:
    """One-line image notation, e.g. ``[2,1,3]`` for (1 2) in S_3."""
    return "[" + ",".join(map(str, p.images)) + "]"


def parse_perm(text: str, degree: int | None = None) -> Permutation:
    m = _PERM_RE.match(text)
    if not m:
        raise PermutationError(f"cannot parse permutation {text!r}")
    p = Permutation(tuple(int(t) for t in m.group(1).split(",")))
    if degree is not None and p.degree != degree:
        raise PermutationError(f"expected degree {degree}, got {p.degree} in {text!r}")
    return p


# -- generated subgroups ------------------------------------------------------

@dataclass(frozen=True)
class GeneratedGroupSummary:
    order: int
    transitive: bool
    point_stabilizer_order: int
    orbit_of_one: frozenset[int]

    @property
    def regular(self) -> bool:
        return self.transitive and self.point_stabilizer_order == 1


def orbit(point: int, gens: Sequence[Permutation]) -> set[int]:
    """Orbit of ``point`` under the group generated by ``gens`` (BFS over generators)."""
    seen = {point}
    stack = [point]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g(x)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def is_transitive(gens: Sequence[Permutation]) -> bool:
    return len(orbit(1, gens)) == gens[0].degree


class StabilizerChain:
    """Deterministic Schreier-Sims stabilizer chain on base 1, 2, ..., n.

    Permutations are handled internally as 0-based tuples.  Level ``k`` stores a
    transversal for the orbit of point ``k`` under the stabilizer of 0..k-1.
    """

    def __init__(self, gens: Sequence[Permutation]):
        if not gens:
            raise PermutationError("empty generator list")
        self.degree = _check_degrees(*gens)
        self._ident = tuple(range(self.degree))
        self._gens: list[list[tuple[int, ...]]] = [[] for _ in range(self.degree)]
        self._trans: list[dict[int, tuple[int, ...]]] = [
            {k: self._ident} for k in range(self.degree)
        ]
        for g in gens:
            self._extend(0, g.zero_based())

    @staticmethod
    def _mul(p, q):
        return tuple(q[v] for v in p)

    @staticmethod
    def _inv(p):
        out = [0] * len(p)
        for i, v in enumerate(p):
            out[v] = i
        return tuple(out)

    def _sift(self, g, level):
        for k in range(level, self.degree):
            b = g[k]
            t = self._trans[k].get(b)
            if t is None:
                return g, k
            g = self._mul(g, self._inv(t))
        return g, self.degree

    def _extend(self, level, g):
        """Add ``g`` (which fixes points < level) to the chain and restore the invariants."""
        h, k = self._sift(g, level)
        if h == self._ident:
            return
        # h fixes 0..k-1; it is a new generator for levels level..k
        for lev in range(level, k + 1):
            self._gens[lev].append(h)
        for lev in range(k, level - 1, -1):
            self._rebuild_orbit(lev)

    def _rebuild_orbit(self, level):
        trans = self._trans[level]
        gens = self._gens[level]
        queue = list(trans.items())
        # close the orbit, then push Schreier generators one level down
        i = 0
        while i < len(queue):
            pt, t = queue[i]
            i += 1
            for s in gens:
                q = s[pt]
                if q not in trans:
                    trans[q] = self._mul(t, s)
                    queue.append((q, trans[q]))
        for pt, t in list(trans.items()):
            for s in gens:
                ts = self._mul(t, s)
                schreier = self._mul(ts, self._inv(trans[ts[level]]))
                if schreier != self._ident and level + 1 < self.degree:
                    self._extend(level + 1, schreier)

    def order(self) -> int:
        return math.prod(len(t) for t in self._trans)

    def stabilizer_order(self) -> int:
        """Order of the stabilizer of point 1."""
        return math.prod(len(t) for t in self._trans[1:])

    def contains(self, p: Permutation) -> bool:
        h, k = self._sift(p.zero_based(), 0)
        return k == self.degree and h == self._ident


def summarize_generated_group(gens: Sequence[Permutation]) -> GeneratedGroupSummary:
    chain = StabilizerChain(gens)
    orb = frozenset(orbit(1, gens))
    return GeneratedGroupSummary(
        order=chain.order(),
        transitive=len(orb) == chain.degree,
        point_stabilizer_order=chain.stabilizer_order(),
        orbit_of_one=orb,
    )


def naive_closure(gens: Sequence[Permutation]) -> set[Permutation]:
    """All elements of the generated group by multiplying until a fixpoint. Small groups only."""
    if not gens:
        raise PermutationError("empty generator list")
    n = _check_degrees(*gens)
    elems = {identity(n)}
    frontier = [identity(n)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return elems


def symmetric_group(n: int) -> list[Permutation]:
    """All n! elements of S_n in lexicographic order of their images."""
    from itertools import permutations

    return [Permutation(p) for p in permutations(range(1, n + 1))]


def transpositions(n: int) -> list[Permutation]:
    return [transposition(n, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
