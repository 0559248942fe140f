"""Modified parenthesised braids.

A braid runs from a source word (top) to a target word (bottom). Strands
are numbered 1..n by their top position, crossings are signed Artin
generators read top to bottom (``k`` for sigma_k, ``-k`` for its inverse),
and every strand carries the translation applied to its letter on the way
down. Pinch events glue adjacent strands at an interior level; attach
events glue them on the top or bottom line.

Braids compare by free reduction of the crossing word between event
levels; braid relations are not applied.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    CompositionError,
    DomainError,
    GeometryError,
    InputError,
    NonInvertibleError,
    NotInPaBError,
    SkeletonError,
)
from .magma import (
    IDENTITY,
    Leaf,
    Node,
    ParenWord,
    TMap,
    Translation,
    delete_leaf,
    format_word,
    parse_word,
    relabel,
    replace_leaf,
)
from .quasigroup import LatinSquare
from .simplex import as_fraction, fraction_text

SIDES = ("top", "bottom")


@dataclass(frozen=True, order=True)
class Pinch:
    level: int
    strands: tuple

    def __post_init__(self):
        object.__setattr__(self, "strands", tuple(sorted(set(self.strands))))


@dataclass(frozen=True, order=True)
class Attach:
    side: str
    strands: tuple

    def __post_init__(self):
        if self.side not in SIDES:
            raise InputError(f"attach side must be top or bottom, not {self.side!r}")
        object.__setattr__(self, "strands", tuple(sorted(set(self.strands))))


def permutation_of(crossings: Sequence[int], n: int) -> tuple:
    """0-based top position -> bottom position induced by the crossings."""
    order = list(range(n))
    for c in crossings:
        k = abs(c)
        order[k - 1], order[k] = order[k], order[k - 1]
    perm = [0] * n
    for pos, strand in enumerate(order):
        perm[strand] = pos
    return tuple(perm)


def positions_at(crossings: Sequence[int], n: int, level: int) -> dict:
    """Strand id (1-based) -> 0-based position after ``level`` crossings."""
    perm = permutation_of(crossings[:level], n)
    return {s + 1: p for s, p in enumerate(perm)}


def free_reduce(word: Iterable[int]) -> tuple:
    out: list = []
    for c in word:
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def _contiguous(ps) -> bool:
    ps = sorted(ps)
    return ps == list(range(ps[0], ps[0] + len(ps)))


@dataclass(frozen=True, eq=False)
class ModifiedBraid:
    source: ParenWord
    target: ParenWord
    crossings: tuple = ()
    pinches: frozenset = frozenset()
    attaches: frozenset = frozenset()
    translations: tuple = None
    square: LatinSquare | None = None

    def __post_init__(self):
        n = self.source.length
        if self.target.length != n:
            raise DomainError(f"source has {n} strands, target {self.target.length}")
        crossings = tuple(int(c) for c in self.crossings)
        if any(c == 0 or abs(c) >= n for c in crossings):
            raise DomainError(f"crossing indices must satisfy 1 <= |k| < {n}")
        translations = (IDENTITY,) * n if self.translations is None else tuple(
            t if isinstance(t, TMap) else TMap.parse(t) for t in self.translations
        )
        pinches = frozenset(self.pinches)
        attaches = frozenset(self.attaches)
        object.__setattr__(self, "crossings", crossings)
        object.__setattr__(self, "translations", translations)
        object.__setattr__(self, "pinches", pinches)
        object.__setattr__(self, "attaches", attaches)
        for ev in (*pinches, *attaches):
            if len(ev.strands) < 2 or not all(1 <= s <= n for s in ev.strands):
                raise GeometryError(f"{ev} needs at least two strands among 1..{n}")
        for p in pinches:
            if not 0 <= p.level <= len(crossings):
                raise GeometryError(f"pinch level {p.level} outside 0..{len(crossings)}")
            pos = positions_at(crossings, n, p.level)
            if not _contiguous([pos[s] for s in p.strands]):
                raise GeometryError(f"strands {p.strands} are not adjacent at level {p.level}")
        bottom = positions_at(crossings, n, len(crossings))
        tgt = self.target.letters()
        for a in attaches:
            pos = {s: s - 1 for s in a.strands} if a.side == "top" else bottom
            ps = [pos[s] for s in a.strands]
            if not _contiguous(ps):
                raise GeometryError(f"strands {a.strands} are not adjacent on the {a.side} line")
            if a.side == "bottom" and len({tgt[p] for p in ps}) != 1:
                raise SkeletonError(f"bottom attach of {a.strands} joins different letters")
        # letters must agree with the strand translations
        object.__setattr__(self, "_skeleton", Translation(
            self.source, self.target, translations, permutation_of(crossings, n), self.square
        ))

    # -- construction -------------------------------------------------------

    @classmethod
    def identity(cls, w: ParenWord, square: LatinSquare | None = None) -> ModifiedBraid:
        return cls(w, w, square=square)

    @classmethod
    def build(
        cls,
        source: ParenWord,
        target: ParenWord,
        crossings: Sequence[int] = (),
        square: LatinSquare | None = None,
        translations: Sequence | None = None,
        pinches: Iterable[Pinch] = (),
        attaches: Iterable[Attach] = (),
    ) -> ModifiedBraid:
        """Braid whose strand translations default to one left multiplication.

        A strand carrying letter u to a bottom letter v gets the identity
        when u == v and L_x with x * u = v otherwise.
        """
        n = source.length
        if translations is None:
            perm = permutation_of(crossings, n)
            src, tgt = source.letters(), target.letters()
            translations = []
            for s in range(n):
                u, v = src[s], tgt[perm[s]]
                if u == v:
                    translations.append(IDENTITY)
                elif square is None:
                    raise SkeletonError(f"letter {u!r} becomes {v!r} but no Latin square was given")
                else:
                    translations.append(TMap.left(square.right_divide(u, v)))
        return cls(source, target, tuple(crossings), frozenset(pinches), frozenset(attaches),
                   tuple(translations), square)

    # -- basic data ---------------------------------------------------------

    @property
    def strands(self) -> int:
        return self.source.length

    @property
    def permutation(self) -> tuple:
        return self._skeleton.perm

    def has_events(self) -> bool:
        return bool(self.pinches or self.attaches)

    def endpoint_map(self) -> dict:
        """Strand id -> bottom position (1-based); bottom-attached strands share one point."""
        out = {s + 1: p + 1 for s, p in enumerate(self.permutation)}
        for a in self.attaches:
            if a.side == "bottom":
                meet = min(out[s] for s in a.strands)
                for s in a.strands:
                    out[s] = meet
        return out

    def strand_at_bottom(self, i: int) -> int:
        """Strand id ending at bottom position ``i`` (1-based)."""
        if not 1 <= i <= self.strands:
            raise DomainError(f"bottom position {i} outside 1..{self.strands}")
        return self.permutation.index(i - 1) + 1

    def skeleton(self) -> Translation:
        return self._skeleton

    def _reduced_parts(self):
        cuts = sorted({p.level for p in self.pinches} | {0, len(self.crossings)})
        crossings: list = []
        new_level = {0: 0}
        for a, b in zip(cuts, cuts[1:]):
            crossings.extend(free_reduce(self.crossings[a:b]))
            new_level[b] = len(crossings)
        pinches = frozenset(Pinch(new_level[p.level], p.strands) for p in self.pinches)
        return tuple(crossings), pinches, tuple(t.reduced() for t in self.translations)

    def reduced(self) -> ModifiedBraid:
        """Free-reduce the crossing word between pinch levels and the translations."""
        crossings, pinches, translations = self._reduced_parts()
        return ModifiedBraid(self.source, self.target, crossings, pinches, self.attaches,
                             translations, self.square)

    def _key(self):
        key = self.__dict__.get("_cached_key")
        if key is None:
            crossings, pinches, translations = self._reduced_parts()
            key = (self.source, self.target, crossings, pinches, self.attaches, translations)
            object.__setattr__(self, "_cached_key", key)
        return key

    def __eq__(self, other):
        if not isinstance(other, ModifiedBraid):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"ModifiedBraid({format_word(self.source)} -> {format_word(self.target)}, {list(self.crossings)})"

    def _replace(self, **changes) -> ModifiedBraid:
        fields = dict(
            source=self.source, target=self.target, crossings=self.crossings, pinches=self.pinches,
            attaches=self.attaches, translations=self.translations, square=self.square,
        )
        fields.update(changes)
        return ModifiedBraid(**fields)


# -- category structure -------------------------------------------------------


def _common_square(a, b):
    if a is not None and b is not None and a != b:
        raise CompositionError("braids refer to different Latin squares")
    return a if a is not None else b


def compose(b1: ModifiedBraid, b2: ModifiedBraid) -> ModifiedBraid:
    """``b1`` on top of ``b2``.

    The bottom attaches of ``b1`` and the top attaches of ``b2`` end up in
    the interior and become pinches at the junction level.
    """
    if b1.target != b2.source:
        raise CompositionError(f"{format_word(b1.target)} is not {format_word(b2.source)}")
    square = _common_square(b1.square, b2.square)
    perm1 = b1.permutation
    at_bottom = {p + 1: s + 1 for s, p in enumerate(perm1)}  # b1 bottom position -> b1 strand
    shift = len(b1.crossings)

    def lift(ids):
        return tuple(at_bottom[t] for t in ids)

    pinches = set(b1.pinches)
    pinches.update(Pinch(p.level + shift, lift(p.strands)) for p in b2.pinches)
    pinches.update(Pinch(shift, a.strands) for a in b1.attaches if a.side == "bottom")
    pinches.update(Pinch(shift, lift(a.strands)) for a in b2.attaches if a.side == "top")
    attaches = {a for a in b1.attaches if a.side == "top"}
    attaches.update(Attach("bottom", lift(a.strands)) for a in b2.attaches if a.side == "bottom")
    translations = tuple(b1.translations[s].then(b2.translations[perm1[s]]) for s in range(b1.strands))
    return ModifiedBraid(
        b1.source, b2.target, b1.crossings + b2.crossings, frozenset(pinches), frozenset(attaches),
        translations, square,
    )


def inverse(b: ModifiedBraid) -> ModifiedBraid:
    if b.has_events():
        raise NonInvertibleError("non-invertible: pinched or attached strands cannot be separated again")
    n = b.strands
    translations = [IDENTITY] * n
    for s, p in enumerate(b.permutation):
        translations[p] = b.translations[s].inverse()
    crossings = tuple(-c for c in reversed(b.crossings))
    return ModifiedBraid(b.target, b.source, crossings, translations=tuple(translations), square=b.square)


# -- tower operations ---------------------------------------------------------


def extend(b: ModifiedBraid, side: str = "left", letter="x") -> ModifiedBraid:
    """Add a straight outermost strand carrying ``letter``."""
    leaf = Leaf(letter)
    if side == "left":
        return ModifiedBraid(
            Node(leaf, b.source), Node(leaf, b.target),
            tuple(c + 1 if c > 0 else c - 1 for c in b.crossings),
            frozenset(Pinch(p.level, [s + 1 for s in p.strands]) for p in b.pinches),
            frozenset(Attach(a.side, [s + 1 for s in a.strands]) for a in b.attaches),
            (IDENTITY,) + b.translations, b.square,
        )
    if side == "right":
        return b._replace(
            source=Node(b.source, leaf), target=Node(b.target, leaf),
            translations=b.translations + (IDENTITY,),
        )
    raise InputError(f"side must be left or right, not {side!r}")


def cable(b: ModifiedBraid, i: int) -> ModifiedBraid:
    """Double the strand ending at bottom position ``i`` (1-based).

    Each crossing of the doubled strand with a neighbour becomes two
    consecutive crossings with the same sign; events on that strand now
    involve both copies.
    """
    n = b.strands
    s = b.strand_at_bottom(i)
    order = list(range(1, n + 1))
    new_crossings: list = []
    level = [0]
    for c in b.crossings:
        k, sign = abs(c), (1 if c > 0 else -1)
        ps = order.index(s)  # 0-based
        if ps < k - 1:
            new_crossings.append(sign * (k + 1))
        elif ps > k:
            new_crossings.append(sign * k)
        elif ps == k - 1:
            new_crossings += [sign * (k + 1), sign * k]
        else:
            new_crossings += [sign * k, sign * (k + 1)]
        order[k - 1], order[k] = order[k], order[k - 1]
        level.append(len(new_crossings))

    def bump(ids):
        out = [t + 1 if t > s else t for t in ids]
        return out + [s + 1] if s in ids else out

    src, tgt = b.source.letters(), b.target.letters()
    x, y = src[s - 1], tgt[i - 1]
    return ModifiedBraid(
        replace_leaf(b.source, s - 1, Node(Leaf(x), Leaf(x))),
        replace_leaf(b.target, i - 1, Node(Leaf(y), Leaf(y))),
        tuple(new_crossings),
        frozenset(Pinch(level[p.level], bump(p.strands)) for p in b.pinches),
        frozenset(Attach(a.side, bump(a.strands)) for a in b.attaches),
        b.translations[:s] + b.translations[s - 1:],
        b.square,
    )


def remove_strand(b: ModifiedBraid, i: int) -> ModifiedBraid:
    """Delete the strand ending at bottom position ``i`` (1-based)."""
    n = b.strands
    if n < 2:
        raise DomainError("cannot remove the only strand")
    s = b.strand_at_bottom(i)
    order = list(range(1, n + 1))
    new_crossings: list = []
    level = [0]
    for c in b.crossings:
        k, sign = abs(c), (1 if c > 0 else -1)
        if s not in (order[k - 1], order[k]):
            ps = order.index(s)
            new_crossings.append(sign * (k - 1 if ps < k - 1 else k))
        order[k - 1], order[k] = order[k], order[k - 1]
        level.append(len(new_crossings))

    def drop(ids):
        return [t - 1 if t > s else t for t in ids if t != s]

    pinches = frozenset(
        Pinch(level[p.level], drop(p.strands)) for p in b.pinches if len(drop(p.strands)) >= 2
    )
    attaches = frozenset(
        Attach(a.side, drop(a.strands)) for a in b.attaches if len(drop(a.strands)) >= 2
    )
    return ModifiedBraid(
        delete_leaf(b.source, s - 1), delete_leaf(b.target, i - 1), tuple(new_crossings),
        pinches, attaches, b.translations[: s - 1] + b.translations[s:], b.square,
    )


def skeleton(b: ModifiedBraid) -> Translation:
    return b.skeleton()


def pinch(b: ModifiedBraid, level: int, strands: Sequence[int]) -> ModifiedBraid:
    return b._replace(pinches=b.pinches | {Pinch(level, strands)})


def attach(b: ModifiedBraid, side: str, strands: Sequence[int]) -> ModifiedBraid:
    return b._replace(attaches=b.attaches | {Attach(side, strands)})


def embed_pab(
    source: ParenWord,
    crossings: Sequence[int],
    target: ParenWord | None = None,
    square: LatinSquare | None = None,
) -> ModifiedBraid:
    """A parenthesised braid on distinct letters, viewed as a modified braid.

    Letters ride their strands unchanged, so the skeleton is a pure
    permutation. ``target`` fixes the bottom parenthesisation; its letters
    must be the permuted source letters. By default the source shape is kept.
    """
    letters = source.letters()
    if len(set(letters)) != len(letters):
        raise NotInPaBError("parenthesised braids need distinct letters")
    n = len(letters)
    if any(c == 0 or abs(c) >= n for c in crossings):
        raise DomainError(f"crossing indices must satisfy 1 <= |k| < {n}")
    perm = permutation_of(crossings, n)
    bottom = [None] * n
    for s, p in enumerate(perm):
        bottom[p] = letters[s]
    if target is None:
        target = relabel(source, bottom)
    elif tuple(target.letters()) != tuple(bottom):
        raise NotInPaBError(f"target letters {target.letters()} are not the braided {tuple(bottom)}")
    return ModifiedBraid(source, target, tuple(crossings), square=square)


# -- linear combinations and the unipotent filtration -------------------------


@dataclass(frozen=True, eq=False)
class BraidCombination:
    """Rational combination of braids over one skeleton.

    ``degree`` is the formal filtration degree: 0 for plain braids, 1 for
    elements built as augmentation-ideal members, additive under
    composition. Degree >= 1 forces the coefficients to sum to zero.
    """

    skeleton: Translation
    terms: tuple = ()
    degree: int = 0

    def __post_init__(self):
        merged: dict = {}
        for coef, braid in self.terms:
            coef = as_fraction(coef)
            if braid.skeleton() != self.skeleton:
                raise SkeletonError(f"term {braid!r} lies over a different skeleton")
            merged[braid] = merged.get(braid, Fraction(0)) + coef
        terms = tuple(sorted(
            ((c, b) for b, c in merged.items() if c != 0), key=lambda cb: braid_to_json(cb[1])
        ))
        if self.degree < 0:
            raise DomainError("filtration degree is nonnegative")
        if self.degree >= 1 and sum(c for c, _ in terms) != 0:
            raise DomainError("a positive-degree element must have coefficient sum 0")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, braid: ModifiedBraid, coef=1) -> BraidCombination:
        return cls(braid.skeleton(), ((as_fraction(coef), braid),), 0)

    @classmethod
    def difference(cls, b1: ModifiedBraid, b2: ModifiedBraid) -> BraidCombination:
        """``b1 - b2``, an element of the augmentation ideal."""
        return cls(b1.skeleton(), ((Fraction(1), b1), (Fraction(-1), b2)), 1)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, BraidCombination):
            return NotImplemented
        return self.skeleton == other.skeleton and dict(
            (b, c) for c, b in self.terms
        ) == dict((b, c) for c, b in other.terms)

    def __hash__(self):
        return hash((self.skeleton, frozenset((b, c) for c, b in self.terms)))

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return scale(self, -1)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __rmul__(self, coef):
        return scale(self, coef)

    def __matmul__(self, other):
        return compose_bilinear(self, other)

    def __repr__(self):
        body = " + ".join(f"{fraction_text(c)}*{b!r}" for c, b in self.terms) or "0"
        return f"BraidCombination({body}; degree={self.degree})"


def add(x: BraidCombination, y: BraidCombination) -> BraidCombination:
    if x.skeleton != y.skeleton:
        raise SkeletonError("cannot add combinations over different skeletons")
    return BraidCombination(x.skeleton, x.terms + y.terms, min(x.degree, y.degree))


def scale(x: BraidCombination, coef) -> BraidCombination:
    coef = as_fraction(coef)
    return BraidCombination(x.skeleton, tuple((coef * c, b) for c, b in x.terms), x.degree)


def compose_bilinear(x: BraidCombination, y: BraidCombination) -> BraidCombination:
    skel = x.skeleton.then(y.skeleton)
    terms = tuple((a * c, compose(b, d)) for a, b in x.terms for c, d in y.terms)
    return BraidCombination(skel, terms, x.degree + y.degree)


def augmentation(x: BraidCombination) -> Fraction:
    return sum((c for c, _ in x.terms), Fraction(0))


def truncate(x: BraidCombination, m: int) -> BraidCombination:
    """Image in the m-th unipotent quotient: zero once the degree exceeds m."""
    if m < 0:
        raise DomainError("truncation level must be nonnegative")
    if x.degree > m:
        return BraidCombination(x.skeleton, (), x.degree)
    return x


def coproduct(x):
    """Group-like coproduct: a braid B goes to the pair (B, B).

    For a combination the result is the list of ``(coef, B, B)`` terms.
    """
    if isinstance(x, ModifiedBraid):
        return (x, x)
    return [(c, b, b) for c, b in x.terms]


# -- serialisation ------------------------------------------------------------


def _square_dict(square):
    if square is None:
        return None
    return {"alphabet": list(square.alphabet), "table": [list(r) for r in square.table]}


def braid_to_dict(b: ModifiedBraid) -> dict:
    return {
        "source": format_word(b.source),
        "target": format_word(b.target),
        "crossings": list(b.crossings),
        "pinches": [{"level": p.level, "strands": list(p.strands)} for p in sorted(b.pinches)],
        "attaches": [
            {"side": a.side, "strands": list(a.strands)}
            for a in sorted(b.attaches, key=lambda a: (SIDES.index(a.side), a.strands))
        ],
        "translations": [str(t) for t in b.translations],
        "square": _square_dict(b.square),
    }


def braid_to_json(b: ModifiedBraid) -> str:
    return json.dumps(braid_to_dict(b), sort_keys=True)


def braid_from_dict(data: dict) -> ModifiedBraid:
    try:
        square = None
        if data.get("square"):
            sq = data["square"]
            square = LatinSquare(tuple(sq["alphabet"]), tuple(tuple(r) for r in sq["table"]))
        source = parse_word(data["source"])
        target = parse_word(data["target"])
        pinches = [Pinch(int(p["level"]), [int(s) for s in p["strands"]]) for p in data.get("pinches", [])]
        attaches = [Attach(a["side"], [int(s) for s in a["strands"]]) for a in data.get("attaches", [])]
        crossings = [int(c) for c in data.get("crossings", [])]
        translations = data.get("translations")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad braid JSON: {exc!r}") from exc
    return ModifiedBraid.build(source, target, crossings, square, translations, pinches, attaches)


def braid_from_json(text: str) -> ModifiedBraid:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad braid JSON: {exc}") from exc
    return braid_from_dict(data)


def translation_to_dict(t: Translation) -> dict:
    return {
        "source": format_word(t.source),
        "target": format_word(t.target),
        "perm": list(t.perm),
        "maps": [str(m) for m in t.maps],
        "square": _square_dict(t.square),
    }


def combination_to_json(x: BraidCombination) -> str:
    return json.dumps(
        {
            "skeleton": translation_to_dict(x.skeleton),
            "degree": x.degree,
            "terms": [{"coef": fraction_text(c), "braid": braid_to_dict(b)} for c, b in x.terms],
        },
        sort_keys=True,
    )


def combination_from_json(text: str) -> BraidCombination:
    try:
        data = json.loads(text)
        terms = [(as_fraction(t["coef"]), braid_from_dict(t["braid"])) for t in data["terms"]]
        degree = int(data.get("degree", 0))
        if "skeleton" in data:
            sk = data["skeleton"]
            square = None
            if sk.get("square"):
                square = LatinSquare(tuple(sk["square"]["alphabet"]),
                                     tuple(tuple(r) for r in sk["square"]["table"]))
            skel = Translation(parse_word(sk["source"]), parse_word(sk["target"]),
                               tuple(sk["maps"]), tuple(sk["perm"]), square)
        elif terms:
            skel = terms[0][1].skeleton()
        else:
            raise InputError("an empty combination needs an explicit skeleton")
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        if isinstance(exc, InputError) or isinstance(exc, DomainError):
            raise
        raise InputError(f"bad combination JSON: {exc!r}") from exc
    return BraidCombination(skel, tuple(terms), degree)


# -- ASCII rendering ----------------------------------------------------------


def render(b: ModifiedBraid) -> str:
    """Fixed-width picture, one row per crossing or pinch level.

    A positive crossing is drawn ``+-/-+`` (left strand over), a negative
    one ``+-\\-+``; pinched strands are joined by ``*---*``.
    """
    n = b.strands
    width = 4
    src, tgt = b.source.letters(), b.target.letters()

    def row(cells, note=""):
        line = "".join(c.ljust(width) for c in cells).rstrip()
        return (line.ljust(width * n + 2) + note).rstrip()

    lines = [f"top:    {format_word(b.source)}", row([str(x) for x in src])]
    top = sorted(a.strands for a in b.attaches if a.side == "top")
    lines.append(row(_bar(n, [[s - 1 for s in st] for st in top]), "attach" if top else ""))
    pinch_at: dict = {}
    for p in b.pinches:
        pinch_at.setdefault(p.level, []).append(p.strands)

    def pinch_rows(level):
        if level not in pinch_at:
            return
        pos = positions_at(b.crossings, n, level)
        groups = [[pos[s] for s in st] for st in sorted(pinch_at[level])]
        lines.append(row(_bar(n, groups), "pinch"))

    pinch_rows(0)
    for t, c in enumerate(b.crossings, start=1):
        k = abs(c)
        cells = ["|"] * n
        cells[k - 1] = "+-/-" if c > 0 else "+-\\-"
        cells[k] = "+"
        lines.append(row(cells, f"s{k}" if c > 0 else f"s{k}^-1"))
        pinch_rows(t)
    bottom = sorted(a.strands for a in b.attaches if a.side == "bottom")
    pos = positions_at(b.crossings, n, len(b.crossings))
    lines.append(row(_bar(n, [[pos[s] for s in st] for st in bottom]), "attach" if bottom else ""))
    lines.append(row([str(x) for x in tgt]))
    lines.append(f"bottom: {format_word(b.target)}")
    return "\n".join(lines) + "\n"


def _bar(n, groups):
    cells = ["|"] * n
    for g in groups:
        g = sorted(g)
        for p in g[:-1]:
            cells[p] = "*---"
        cells[g[-1]] = "*"
    return cells
