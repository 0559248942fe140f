"""Finite probability simplices, the distribution monad, and Segre diagrams.

All arithmetic is exact (``fractions.Fraction``); nothing in this module
touches floating point.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .errors import DomainError, InputError, SizeError


def as_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, or ``"num/den"`` string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"refusing inexact weight {value!r}; use Fraction or 'p/q'")


def fraction_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, eq=False)
class FinDist:
    """A finitely supported distribution with exact weights.

    ``support`` is ordered and may contain zero-weight outcomes, so a
    distribution always remembers the outcome set it lives on. Equality
    ignores the order of the support.
    """

    support: tuple
    weights: tuple

    def __post_init__(self):
        support = tuple(self.support)
        weights = tuple(as_fraction(w) for w in self.weights)
        if len(support) != len(weights):
            raise InputError("support and weights differ in length")
        if not support:
            raise InputError("empty support")
        if len(set(support)) != len(support):
            raise InputError("support labels must be distinct")
        if any(w < 0 for w in weights):
            raise InputError("negative weight")
        if sum(weights) != 1:
            raise InputError(f"weights sum to {sum(weights)}, not 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_mapping(cls, mapping: dict) -> FinDist:
        return cls(tuple(mapping), tuple(mapping.values()))

    @classmethod
    def uniform(cls, outcomes: Iterable) -> FinDist:
        outcomes = tuple(outcomes)
        return cls(outcomes, (Fraction(1, len(outcomes)),) * len(outcomes))

    def weight(self, x) -> Fraction:
        try:
            return self.weights[self.support.index(x)]
        except ValueError:
            return Fraction(0)

    def items(self):
        return zip(self.support, self.weights)

    def as_dict(self) -> dict:
        return dict(self.items())

    def outcome_set(self) -> frozenset:
        return frozenset(self.support)

    def __eq__(self, other):
        if not isinstance(other, FinDist):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self):
        return hash(frozenset(self.items()))

    def __repr__(self):
        inner = ", ".join(f"{x!r}: {fraction_text(w)}" for x, w in self.items())
        return f"FinDist({{{inner}}})"

    def to_json(self) -> str:
        return json.dumps(
            {"support": list(self.support), "weights": [fraction_text(w) for w in self.weights]}
        )

    @classmethod
    def from_json(cls, text: str) -> FinDist:
        try:
            data = json.loads(text)
            return cls(tuple(data["support"]), tuple(data["weights"]))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise InputError(f"bad FinDist JSON: {exc}") from exc


def unit(x, outcomes: Sequence) -> FinDist:
    """Point mass at ``x`` on the outcome set ``outcomes``."""
    outcomes = tuple(outcomes)
    if x not in outcomes:
        raise DomainError(f"{x!r} is not an outcome")
    return FinDist(outcomes, tuple(Fraction(int(y == x)) for y in outcomes))


def pushforward(f: Callable | dict, d: FinDist, codomain: Sequence | None = None) -> FinDist:
    """Image distribution of ``d`` under ``f``.

    Without ``codomain`` the result is supported on the images of the
    support, in order of first appearance.
    """
    fn = f.__getitem__ if isinstance(f, dict) else f
    out: dict = {y: Fraction(0) for y in (codomain or ())}
    for x, w in d.items():
        try:
            y = fn(x)
        except (KeyError, IndexError) as exc:
            raise DomainError(f"map undefined on {x!r}") from exc
        if codomain is not None and y not in out:
            raise DomainError(f"{y!r} outside the declared codomain")
        out[y] = out.get(y, Fraction(0)) + w
    return FinDist.from_mapping(out)


def flatten(dd: FinDist) -> FinDist:
    """Collapse a distribution over distributions to its mixture."""
    inner = dd.support
    if not all(isinstance(d, FinDist) for d in inner):
        raise DomainError("flatten needs a distribution over FinDist values")
    outcomes = inner[0].support
    shared = frozenset(outcomes)
    if any(d.outcome_set() != shared for d in inner[1:]):
        raise DomainError("inner distributions live on different outcome sets")
    mix = {x: Fraction(0) for x in outcomes}
    for d, w in dd.items():
        for x, v in d.items():
            mix[x] += w * v
    return FinDist.from_mapping(mix)


def tensor(p: FinDist, q: FinDist) -> FinDist:
    """Product distribution on pairs, row-major (``p`` index outer)."""
    support = tuple((x, y) for x in p.support for y in q.support)
    weights = tuple(a * b for a in p.weights for b in q.weights)
    return FinDist(support, weights)


# -- Eilenberg-Moore algebras -------------------------------------------------


@dataclass(frozen=True)
class AlgebraCarrier:
    """A candidate algebra: sample points plus a structure map.

    ``structure_map`` must accept any FinDist whose outcomes are points of
    the ambient space, not only points listed in ``carrier``; the second
    algebra law applies it to distributions over its own outputs.
    """

    carrier: tuple
    structure_map: Callable[[FinDist], Any]


@dataclass
class AlgebraReport:
    passed: bool
    checked: int
    unit_witness: Any = None
    mult_witness: tuple | None = None  # (dd, gamma(mu(dd)), gamma(Delta_gamma(dd)))
    exhaustive: bool = True


def weight_grid(denominator: int) -> tuple:
    return tuple(Fraction(k, denominator) for k in range(denominator + 1))


def grid_distributions(outcomes: Sequence, denominator: int) -> list:
    """Every distribution on ``outcomes`` with weights in ``{0, 1/d, ..., 1}``."""
    outcomes = tuple(outcomes)
    found = []
    for parts in _compositions(denominator, len(outcomes)):
        found.append(FinDist(outcomes, tuple(Fraction(k, denominator) for k in parts)))
    return found


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def _positive_compositions(total: int, parts: int):
    if total < parts:
        return
    for c in _compositions(total - parts, parts):
        yield tuple(k + 1 for k in c)


def check_algebra(
    algebra: AlgebraCarrier,
    sample_depth: int = 2,
    denominator: int = 4,
    exhaustive_limit: int = 4,
    samples: int = 2000,
    seed: int = 0,
) -> AlgebraReport:
    """Check both Eilenberg-Moore laws for ``algebra``.

    First-level distributions range over the weight grid with the given
    ``denominator`` (5 points for the default 4). Second-level
    distributions mix at most ``sample_depth`` distinct first-level ones
    with positive grid weights. Carriers larger than ``exhaustive_limit``
    are checked on ``samples`` seeded random second-level distributions.
    """
    if sample_depth < 1:
        raise InputError("sample_depth must be at least 1")
    gamma = algebra.structure_map
    points = algebra.carrier
    checked = 0
    for x in points:
        checked += 1
        if gamma(unit(x, points)) != x:
            return AlgebraReport(False, checked, unit_witness=x)

    level1 = grid_distributions(points, denominator)
    exhaustive = len(points) <= exhaustive_limit
    if exhaustive:
        candidates = _all_mixtures(level1, sample_depth, denominator)
    else:
        candidates = _random_mixtures(level1, sample_depth, denominator, samples, seed)

    for dd in candidates:
        checked += 1
        lhs = gamma(flatten(dd))
        rhs = gamma(pushforward(gamma, dd))
        if lhs != rhs:
            return AlgebraReport(False, checked, mult_witness=(dd, lhs, rhs), exhaustive=exhaustive)
    return AlgebraReport(True, checked, exhaustive=exhaustive)


def _all_mixtures(level1, depth, denominator):
    for k in range(1, min(depth, len(level1)) + 1):
        for chosen in itertools.combinations(level1, k):
            for parts in _positive_compositions(denominator, k):
                yield FinDist(chosen, tuple(Fraction(p, denominator) for p in parts))


def _random_mixtures(level1, depth, denominator, samples, seed):
    rng = random.Random(seed)
    for _ in range(samples):
        k = rng.randint(1, min(depth, len(level1), denominator))
        chosen = rng.sample(level1, k)
        cuts = sorted(rng.sample(range(1, denominator), k - 1))
        parts = [b - a for a, b in zip([0, *cuts], [*cuts, denominator])]
        yield FinDist(tuple(chosen), tuple(Fraction(p, denominator) for p in parts))


def barycenter(d: FinDist):
    """Convex combination of points (rationals or tuples of rationals)."""
    first = d.support[0]
    if isinstance(first, tuple):
        return tuple(sum((w * x[i] for x, w in d.items()), Fraction(0)) for i in range(len(first)))
    return sum((w * x for x, w in d.items()), Fraction(0))


def argmax(d: FinDist):
    """Heaviest outcome; ties go to the lexicographically smallest label."""
    best = max(d.weights)
    return min(x for x, w in d.items() if w == best)


def barycenter_algebra(points: Iterable) -> AlgebraCarrier:
    return AlgebraCarrier(tuple(points), barycenter)


def argmax_algebra(points: Iterable) -> AlgebraCarrier:
    return AlgebraCarrier(tuple(points), argmax)


# -- projective points and the Segre map --------------------------------------


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A point of rational projective space, compared up to scaling."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(as_fraction(c) for c in self.coords)
        if not coords or all(c == 0 for c in coords):
            raise InputError("projective point needs a nonzero coordinate")
        object.__setattr__(self, "coords", coords)

    @property
    def dimension(self) -> int:
        return len(self.coords) - 1

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        a, b = self.coords, other.coords
        if len(a) != len(b):
            return False
        return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a)))

    def __hash__(self):
        pivot = next(c for c in self.coords if c != 0)
        return hash(tuple(c / pivot for c in self.coords))

    def scaled(self, factor) -> ProjPoint:
        factor = as_fraction(factor)
        if factor == 0:
            raise DomainError("cannot scale by zero")
        return ProjPoint(tuple(factor * c for c in self.coords))

    def __repr__(self):
        return "[" + ":".join(fraction_text(c) for c in self.coords) + "]"


def segre(p: ProjPoint, q: ProjPoint) -> ProjPoint:
    """Segre map P^n x P^m -> P^((n+1)(m+1)-1), products in row-major order."""
    return ProjPoint(tuple(a * b for a in p.coords for b in q.coords))


def segre_many(points: Sequence[ProjPoint]) -> ProjPoint:
    out = points[0]
    for p in points[1:]:
        out = segre(out, p)
    return out


# -- the hypercube of Segre embeddings ----------------------------------------

MAX_CUBE = 12


@dataclass(frozen=True)
class VertexLabel:
    """Parenthesised product of projective spaces attached to a binary word.

    ``factors`` holds the projective dimension of each factor after the
    Segre merges the word prescribes; ``blocks`` holds how many original
    P^1 factors went into each.
    """

    blocks: tuple

    @property
    def factors(self) -> tuple:
        return tuple(2**b - 1 for b in self.blocks)

    @property
    def dimension(self) -> int:
        """Dimension of the product variety; for one factor, its P^N."""
        return sum(self.factors)

    @property
    def product(self) -> str:
        return " x ".join(f"P^{d}" for d in self.factors)

    @property
    def parenthesised(self) -> str:
        parts = []
        for b in self.blocks:
            inner = " x ".join(["P^1"] * b)
            parts.append(f"({inner})" if b > 1 else inner)
        return " x ".join(parts)


def vertex_label(word: Sequence[int]) -> VertexLabel:
    """Merge each maximal run of r ones into one block of r+1 factors."""
    blocks = [1]
    for bit in word:
        if bit:
            blocks[-1] += 1
        else:
            blocks.append(1)
    return VertexLabel(tuple(blocks))


@dataclass(frozen=True)
class HypercubeDiagram:
    n: int
    vertices: tuple
    edges: tuple
    labels: dict = field(hash=False, compare=False)

    def degree(self, v) -> int:
        return sum(v in e for e in self.edges)

    def neighbours(self, v) -> list:
        return [b if a == v else a for a, b in self.edges if v in (a, b)]


def word_text(word: Sequence[int]) -> str:
    return "".join(str(b) for b in word)


def hypercube_diagram(n: int) -> HypercubeDiagram:
    """Diagram of generalised Segre embeddings of (P^1)^(n+1).

    Vertices are binary words of length n in lexicographic order; an edge
    joins two words that differ in one letter, i.e. one extra Segre merge.
    """
    if not 1 <= n <= MAX_CUBE:
        raise SizeError(f"n must lie in 1..{MAX_CUBE}, got {n}")
    vertices = tuple(itertools.product((0, 1), repeat=n))
    edges = []
    for v in vertices:
        for j in range(n):
            if v[j] == 0:
                edges.append((v, v[:j] + (1,) + v[j + 1 :]))
    edges.sort()
    labels = {v: vertex_label(v) for v in vertices}
    return HypercubeDiagram(n, vertices, tuple(edges), labels)


def emit_dot(diagram: HypercubeDiagram) -> str:
    lines = [f"graph segre_cube_{diagram.n} {{"]
    for v in diagram.vertices:
        lab = diagram.labels[v]
        lines.append(f'  "{word_text(v)}" [label="({word_text(v)})\\n{lab.product}"];')
    for a, b in diagram.edges:
        j = next(i for i in range(diagram.n) if a[i] != b[i]) + 1
        lines.append(f'  "{word_text(a)}" -- "{word_text(b)}" [label="h{j}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
