"""The five-generator, eleven-relation presentation of the braid group B_2 on a
closed genus-2 surface, and evaluation of words under permutation assignments."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .perm import Permutation, PermutationError, compose, identity, inverse

COMMUTATOR_CONVENTION = "xyXY"  # [x, y] = x y x^-1 y^-1


class Gen(enum.Enum):
    A1 = "a1"
    A2 = "a2"
    B1 = "b1"
    B2 = "b2"
    SIGMA = "sigma"

    @property
    def pretty(self) -> str:
        return {"a1": "a₁", "a2": "a₂", "b1": "b₁", "b2": "b₂", "sigma": "σ"}[self.value]


A1, A2, B1, B2, SIGMA = Gen.A1, Gen.A2, Gen.B1, Gen.B2, Gen.SIGMA

_SUPERSCRIPT = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


@dataclass(frozen=True)
class BraidWord:
    """Sequence of ``(generator, exponent)`` letters; the empty word is the identity."""

    letters: tuple[tuple[Gen, int], ...] = ()

    def __post_init__(self):
        for g, e in self.letters:
            if not isinstance(g, Gen) or not isinstance(e, int) or e == 0:
                raise ValueError(f"bad letter {(g, e)!r}")

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def generators(self) -> set[Gen]:
        return {g for g, _ in self.letters}

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.letters:
            parts.append(g.pretty if e == 1 else g.pretty + str(e).translate(_SUPERSCRIPT))
        return " ".join(parts)


def word(*letters) -> BraidWord:
    """``word(SIGMA, -1, A1, 1)`` or ``word((SIGMA, -1), (A1, 1))``; a bare Gen means exponent 1."""
    out = []
    items = list(letters)
    i = 0
    while i < len(items):
        item = items[i]
        if isinstance(item, tuple):
            out.append((item[0], int(item[1])))
            i += 1
        elif i + 1 < len(items) and isinstance(items[i + 1], int):
            out.append((item, items[i + 1]))
            i += 2
        else:
            out.append((item, 1))
            i += 1
    return BraidWord(tuple(out))


def commutator(x: BraidWord, y: BraidWord) -> BraidWord:
    return x * y * x.inverse() * y.inverse()


@dataclass(frozen=True)
class Relation:
    tag: str
    lhs: BraidWord
    rhs: BraidWord

    def __str__(self) -> str:
        return f"({self.tag}) {self.lhs} = {self.rhs}"


RELATION_TAGS = ("R2a", "R2b", "R2c", "R2d", "R3a", "R3b", "R3c", "R3d", "R4a", "R4b", "TR")


def _build_relations() -> tuple[Relation, ...]:
    s_ = word(SIGMA, -1)
    s = word(SIGMA)
    rels = []
    for tag, x in zip(("R2a", "R2b", "R2c", "R2d"), (A1, A2, B1, B2)):
        xw = word(x)
        rels.append(Relation(tag, s_ * xw * s_ * xw, xw * s_ * xw * s_))
    for tag, (x, y) in zip(("R3a", "R3b", "R3c", "R3d"), ((A1, A2), (B1, B2), (A1, B2), (B1, A2))):
        xw, yw = word(x), word(y)
        rels.append(Relation(tag, s_ * xw * s * yw, yw * s_ * xw * s))
    for tag, (a, b) in zip(("R4a", "R4b"), ((A1, B1), (A2, B2))):
        aw, bw = word(a), word(b)
        rels.append(Relation(tag, s_ * aw * s_ * bw, bw * s_ * aw * s))
    lhs = commutator(word(A1), word(B1, -1)) * commutator(word(A2), word(B2, -1))
    rels.append(Relation("TR", lhs, word(SIGMA, 2)))
    return tuple(rels)


_RELATIONS = _build_relations()


def bellingeri_relations() -> list[Relation]:
    return list(_RELATIONS)


def relation(tag: str) -> Relation:
    for r in _RELATIONS:
        if r.tag == tag:
            return r
    raise KeyError(tag)


@dataclass(frozen=True)
class GeneratorAssignment:
    """Images of the five generators in S_n."""

    degree: int
    images: Mapping[Gen, Permutation]

    def __post_init__(self):
        missing = set(Gen) - set(self.images)
        if missing:
            raise ValueError(f"unassigned generators: {sorted(g.value for g in missing)}")
        for g, p in self.images.items():
            if p.degree != self.degree:
                raise PermutationError(f"{g.value} has degree {p.degree}, expected {self.degree}")

    @classmethod
    def of(cls, a1, a2, b1, b2, sigma) -> "GeneratorAssignment":
        return cls(sigma.degree, {A1: a1, A2: a2, B1: b1, B2: b2, SIGMA: sigma})

    def __getitem__(self, g: Gen) -> Permutation:
        return self.images[g]

    def conjugated(self, g: Permutation) -> "GeneratorAssignment":
        from .perm import conjugate

        return GeneratorAssignment(self.degree, {k: conjugate(v, g) for k, v in self.images.items()})


def evaluate_word(w: BraidWord, asg: GeneratorAssignment) -> Permutation:
    """Product of the assigned images, read left to right under the package's composition convention."""
    out = identity(asg.degree)
    inverses: dict[Gen, Permutation] = {}
    for g, e in w.letters:
        if e > 0:
            p = asg[g]
        else:
            if g not in inverses:
                inverses[g] = inverse(asg[g])
            p = inverses[g]
        for _ in range(abs(e)):
            out = compose(out, p)
    return out


def relation_holds(rel: Relation, asg: GeneratorAssignment) -> bool:
    return evaluate_word(rel.lhs, asg) == evaluate_word(rel.rhs, asg)


def failing_relations(asg: GeneratorAssignment) -> list[str]:
    return [r.tag for r in _RELATIONS if not relation_holds(r, asg)]


def satisfies_all_relations(asg: GeneratorAssignment) -> bool:
    return all(relation_holds(r, asg) for r in _RELATIONS)
