"""Orbits of representations under simultaneous conjugation, and what each
orbit says about the covering surface it describes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .enumerator import MonodromyRep, SearchConfig, enumerate_reps, transposition_count
from .perm import Permutation, is_transposition, summarize_generated_group

# explicit closure over the whole symmetric group up to this degree
FULL_GROUP_DEGREE = 4
# default: close fixed-sigma inputs explicitly up to this degree, quotient method above
EXPLICIT_CLOSURE_DEGREE = 6
DIGEST_DEGREE = 4

Raw = tuple  # (sigma, a1, a2, b1, b2), each a 0-based image tuple


class ClassificationError(ValueError):
    pass


@dataclass(frozen=True)
class ConjugacyClassRecord:
    representative: MonodromyRep
    orbit_size: int
    stabilizer_order: int
    member_digests: tuple[str, ...] | None = None

    @property
    def degree(self) -> int:
        return self.representative.degree


@dataclass(frozen=True)
class SurfaceReport:
    degree: int
    chi: int
    k_squared: int
    galois: bool
    image_order: int
    image_transitive: bool
    general_type_claimed: bool


def _raw(rep: MonodromyRep) -> Raw:
    return tuple(p.zero_based() for p in rep.generators())


def _rep(raw: Raw) -> MonodromyRep:
    return MonodromyRep.from_zero_based(*raw)


def _conj(raw: Raw, g: tuple[int, ...]) -> Raw:
    """g^-1 p g on every component: the point x -> p(x) becomes g(x) -> g(p(x))."""
    out = []
    for p in raw:
        q = [0] * len(p)
        for x, px in enumerate(p):
            q[g[x]] = g[px]
        out.append(tuple(q))
    return tuple(out)


def _adjacent_transpositions(points: Sequence[int], n: int) -> list[tuple[int, ...]]:
    gens = []
    for i, j in zip(points, points[1:]):
        g = list(range(n))
        g[i], g[j] = j, i
        gens.append(tuple(g))
    return gens


def _orbit(seed: Raw, gens: Sequence[tuple[int, ...]], universe: set | None) -> set:
    orb = {seed}
    stack = [seed]
    while stack:
        x = stack.pop()
        for g in gens:
            y = _conj(x, g)
            if y not in orb:
                if universe is not None and y not in universe:
                    raise ClassificationError(
                        "input is not closed under conjugation: "
                        f"{_rep(y).serialized()} missing"
                    )
                orb.add(y)
                stack.append(y)
    return orb


def _key(raw: Raw):
    return raw  # tuples of images compare lexicographically: sigma first, then a1, a2, b1, b2


def close_fixed_sigma(raws: Iterable[Raw], n: int) -> set:
    """Spread solutions with sigma = (1 2) to every transposition by conjugation."""
    out = set()
    raws = list(raws)
    for i, j in itertools.combinations(range(n), 2):
        # g maps 1 -> i+1 and 2 -> j+1, so g^-1 (1 2) g = (i+1 j+1)
        rest = [k for k in range(n) if k not in (i, j)]
        g = [0] * n
        g[0], g[1] = i, j
        for src, dst in zip(range(2, n), rest):
            g[src] = dst
        g = tuple(g)
        out.update(_conj(r, g) for r in raws)
    return out


def _is_fixed_sigma(raws: list[Raw], n: int) -> bool:
    return n >= 3 and len({r[0] for r in raws}) == 1


def classify(solutions: Iterable[MonodromyRep], method: str = "auto") -> list[ConjugacyClassRecord]:
    """Partition representations into orbits under simultaneous conjugation by S_n.

    A set whose members all share one sigma is read as the sigma = (1 2) slice
    of a complete, conjugation-stable solution set.  ``method`` is ``closure``
    (rebuild the full set and take orbits in it), ``centralizer`` (take orbits
    of the centralizer of sigma inside the slice), or ``auto``.
    Records are sorted by representative.
    """
    solutions = list(solutions)
    if not solutions:
        return []
    degrees = {r.degree for r in solutions}
    if len(degrees) != 1:
        raise ClassificationError(f"mixed degrees: {sorted(degrees)}")
    n = degrees.pop()
    raws = [_raw(r) for r in solutions]
    universe = set(raws)
    if len(universe) != len(raws):
        raise ClassificationError("duplicate representations in input")
    fixed = _is_fixed_sigma(raws, n)
    if method == "auto":
        method = "centralizer" if fixed and n > EXPLICIT_CLOSURE_DEGREE else "closure"
    if method == "centralizer":
        if not fixed:
            raise ClassificationError("centralizer method needs a single-sigma input")
        records = _classify_centralizer(universe, n)
    elif method == "closure":
        if fixed:
            sigma = raws[0][0]
            if not is_transposition(Permutation.from_zero_based(sigma)):
                raise ClassificationError("common sigma is not a transposition")
            universe = _normalize_to_12(universe, sigma, n)
            universe = close_fixed_sigma(universe, n)
        records = _classify_closure(universe, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    records.sort(key=lambda rec: rec.representative.key())
    return records


def _normalize_to_12(universe: set, sigma: tuple[int, ...], n: int) -> set:
    moved = [i for i in range(n) if sigma[i] != i]
    if moved == [0, 1]:
        return universe
    # h with h^-1 sigma h = (1 2): h sends the moved points to 0 and 1
    i, j = moved
    rest = [k for k in range(n) if k not in moved]
    h = [0] * n
    h[i], h[j] = 0, 1
    for src, dst in zip(rest, range(2, n)):
        h[src] = dst
    return {_conj(r, tuple(h)) for r in universe}


def _classify_closure(universe: set, n: int) -> list[ConjugacyClassRecord]:
    n_fact = math.factorial(n)
    if n <= FULL_GROUP_DEGREE:
        group = list(itertools.permutations(range(n)))
    else:
        gens = _adjacent_transpositions(list(range(n)), n)
    seen: set = set()
    records = []
    for seed in sorted(universe):
        if seed in seen:
            continue
        if n <= FULL_GROUP_DEGREE:
            orb = {_conj(seed, g) for g in group}
            missing = orb - universe
            if missing:
                raise ClassificationError(
                    "input is not closed under conjugation: "
                    f"{_rep(min(missing)).serialized()} missing"
                )
        else:
            orb = _orbit(seed, gens, universe)
        seen |= orb
        digests = None
        if n <= DIGEST_DEGREE:
            digests = tuple(_rep(r).serialized() for r in sorted(orb))
        records.append(
            ConjugacyClassRecord(
                representative=_rep(min(orb)),
                orbit_size=len(orb),
                stabilizer_order=n_fact // len(orb),
                member_digests=digests,
            )
        )
    return records


def _classify_centralizer(universe: set, n: int) -> list[ConjugacyClassRecord]:
    """Orbits of C(sigma) inside the single-sigma slice.

    Every S_n-orbit meets the slice in exactly one C(sigma)-orbit, and the
    stabilizer of a slice member lies in C(sigma), so the full orbit has size
    n! * |C-orbit| / |C(sigma)|.
    """
    sigma = next(iter(universe))[0]
    universe = _normalize_to_12(universe, sigma, n)
    n_fact = math.factorial(n)
    cent_order = 2 * math.factorial(n - 2)
    gens = [tuple([1, 0] + list(range(2, n)))] + _adjacent_transpositions(list(range(2, n)), n)
    # g0^-1 (1 2) g0 = (n-1 n), the lexicographically least transposition
    g0 = tuple(list(range(n - 2, n)) + list(range(0, n - 2)))
    seen: set = set()
    records = []
    for seed in sorted(universe):
        if seed in seen:
            continue
        orb = _orbit(seed, gens, universe)
        seen |= orb
        if cent_order % len(orb):
            raise ClassificationError("orbit size does not divide the centralizer order")
        stab = cent_order // len(orb)
        rep = min(_conj(r, g0) for r in orb)
        records.append(
            ConjugacyClassRecord(
                representative=_rep(rep), orbit_size=n_fact // stab, stabilizer_order=stab
            )
        )
    return records


def surface_report(record: ConjugacyClassRecord) -> SurfaceReport:
    rep = record.representative
    n = rep.degree
    summary = summarize_generated_group(list(rep.generators()))
    return SurfaceReport(
        degree=n,
        chi=1,
        k_squared=10 - n,
        galois=summary.transitive and summary.order == n,
        image_order=summary.order,
        image_transitive=summary.transitive,
        general_type_claimed=2 <= n <= 9,
    )


@dataclass
class TableRow:
    degree: int
    total: int
    fixed_sigma: int
    classes: int
    k_squared: int
    complete: bool = True
    elapsed: float = 0.0

    @property
    def transpositions(self) -> int:
        return transposition_count(self.degree)

    def factored(self) -> str:
        """Total as (number of transpositions) * (count with sigma = (1 2))."""
        if self.total == 0 or self.transpositions == 1:
            return str(self.total)
        return f"{self.transpositions}·{self.fixed_sigma}"


def table_report(
    max_degree: int,
    min_degree: int = 2,
    worker_count: int = 1,
    progress: Callable[[int, int, int], None] | None = None,
) -> list[TableRow]:
    """Enumerate and classify every degree in ``min_degree..max_degree``."""
    rows = []
    for n in range(min_degree, max_degree + 1):
        cb = (lambda done, total, n=n: progress(n, done, total)) if progress else None
        res = enumerate_reps(SearchConfig(n, fix_sigma=True, worker_count=worker_count), progress=cb)
        classes = classify(res.solutions) if res.solutions else []
        if classes and sum(c.orbit_size for c in classes) != res.total_count:
            raise ClassificationError(f"degree {n}: orbit sizes do not add up to the total")
        rows.append(
            TableRow(
                degree=n,
                total=res.total_count,
                fixed_sigma=res.fixed_sigma_count,
                classes=len(classes),
                k_squared=10 - n,
                complete=res.complete,
                elapsed=res.elapsed,
            )
        )
    return rows


def render_table(rows: Sequence[TableRow]) -> str:
    header = ["n", "representations", "total", "classes", "K^2"]
    body = [[str(r.degree), r.factored(), str(r.total), str(r.classes), str(r.k_squared)] for r in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h) for i, h in enumerate(header)]
    lines = [" | ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.append("-+-".join("-" * w for w in widths))
    lines.extend(" | ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body)
    return "\n".join(lines)
