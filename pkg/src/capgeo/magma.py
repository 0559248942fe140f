"""Parenthesised words, Dyck paths, the magma operad, and translated words.

A parenthesised word is a leaf-labelled binary tree (``Leaf`` / ``Node``).
Letters may repeat. Translations act letter by letter through left and
right multiplications of a Latin square.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Callable, Sequence, Union

from .errors import (
    ArityError,
    CompositionError,
    DomainError,
    DyckFormatError,
    SizeError,
    SkeletonError,
    UnknownSymbolError,
    WordSyntaxError,
)
from .quasigroup import LatinSquare

MAX_PARENTHESIZATION = 12


@dataclass(frozen=True)
class Leaf:
    symbol: object

    @property
    def length(self) -> int:
        return 1

    def letters(self) -> tuple:
        return (self.symbol,)

    def __str__(self):
        return format_word(self)


@dataclass(frozen=True)
class Node:
    left: ParenWord
    right: ParenWord

    @property
    def length(self) -> int:
        return self.left.length + self.right.length

    def letters(self) -> tuple:
        return self.left.letters() + self.right.letters()

    def __str__(self):
        return format_word(self)


ParenWord = Union[Leaf, Node]


def concat(w1: ParenWord, w2: ParenWord) -> Node:
    return Node(w1, w2)


def decompose(w: ParenWord) -> tuple:
    """The two blocks of ``w``."""
    if isinstance(w, Leaf):
        raise DomainError("a single letter has no blocks")
    return w.left, w.right


def shape(w: ParenWord):
    """The tree with letters forgotten (nested tuples, ``None`` at leaves)."""
    if isinstance(w, Leaf):
        return None
    return (shape(w.left), shape(w.right))


def relabel(w: ParenWord, letters: Sequence) -> ParenWord:
    """Same tree, leaves relabelled left to right from ``letters``."""
    if len(letters) != w.length:
        raise ArityError(f"{len(letters)} letters for a word of length {w.length}")
    it = iter(letters)

    def go(t):
        if isinstance(t, Leaf):
            return Leaf(next(it))
        left = go(t.left)
        return Node(left, go(t.right))

    return go(w)


def leaf_depths(w: ParenWord) -> tuple:
    if isinstance(w, Leaf):
        return (0,)
    return tuple(d + 1 for d in leaf_depths(w.left) + leaf_depths(w.right))


def delete_leaf(w: ParenWord, position: int) -> ParenWord:
    """Remove leaf ``position`` (0-based); its sibling takes the parent's place."""
    if isinstance(w, Leaf):
        raise DomainError("cannot delete the only letter")
    n_left = w.left.length
    if position < n_left:
        if isinstance(w.left, Leaf):
            return w.right
        return Node(delete_leaf(w.left, position), w.right)
    if isinstance(w.right, Leaf):
        return w.left
    return Node(w.left, delete_leaf(w.right, position - n_left))


def replace_leaf(w: ParenWord, position: int, subtree: ParenWord) -> ParenWord:
    """Substitute ``subtree`` for leaf ``position`` (0-based)."""
    if isinstance(w, Leaf):
        if position != 0:
            raise DomainError("leaf position out of range")
        return subtree
    n_left = w.left.length
    if position < n_left:
        return Node(replace_leaf(w.left, position, subtree), w.right)
    return Node(w.left, replace_leaf(w.right, position - n_left, subtree))


# -- text syntax --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\(|\)|[^\s(),]+)")


def _tokens(text: str) -> list:
    spaced = bool(re.search(r"[\s,]", text.strip()))
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos] in " \t\n,":
            pos += 1
            continue
        if text[pos] in "()":
            out.append(text[pos])
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        tok = m.group(1)
        if spaced:
            out.append(("sym", tok))
        else:
            out.extend(("sym", ch) for ch in tok)
        pos = m.end()
    return out


def parse_word(text: str, normalize: bool = False, convert: Callable | None = None) -> ParenWord:
    """Parse a fully parenthesised binary term such as ``((c(ab))d)``.

    Letters are single characters unless the text contains spaces or
    commas, in which case they are whitespace/comma separated tokens.
    Groups of more than two items are rejected unless ``normalize`` asks
    for left nesting, which reads ``(c(ab)d)`` as ``((c(ab))d)``.
    ``convert`` is applied to every letter (``int`` for operad words).
    """
    toks = _tokens(text)
    if not toks:
        raise WordSyntaxError("empty word")
    pos = 0

    def group(closing: bool):
        nonlocal pos
        items = []
        while pos < len(toks):
            tok = toks[pos]
            if tok == "(":
                pos += 1
                items.append(group(True))
            elif tok == ")":
                if not closing:
                    raise WordSyntaxError(f"unbalanced ')' in {text!r}")
                pos += 1
                return combine(items)
            else:
                pos += 1
                items.append(Leaf(convert(tok[1]) if convert else tok[1]))
        if closing:
            raise WordSyntaxError(f"unclosed '(' in {text!r}")
        return combine(items)

    def combine(items):
        if not items:
            raise WordSyntaxError(f"empty group in {text!r}")
        if len(items) > 2 and not normalize:
            raise WordSyntaxError(f"non-binary group of {len(items)} items in {text!r}; use normalize")
        out = items[0]
        for nxt in items[1:]:
            out = Node(out, nxt)
        return out

    return group(False)


def format_word(w: ParenWord) -> str:
    compact = all(len(str(x)) == 1 for x in w.letters())
    sep = "" if compact else " "

    def go(t):
        if isinstance(t, Leaf):
            return str(t.symbol)
        return "(" + go(t.left) + sep + go(t.right) + ")"

    return go(w)


# -- Catalan enumeration and Dyck paths ---------------------------------------


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def enumerate_parenthesizations(letters: Sequence) -> list:
    """All binary trees over the fixed leaf sequence ``letters``."""
    letters = tuple(letters)
    n = len(letters) - 1
    if n < 0:
        raise DomainError("need at least one letter")
    if n > MAX_PARENTHESIZATION:
        raise SizeError(f"{n + 1} letters exceed the bound of {MAX_PARENTHESIZATION + 1}")

    @lru_cache(maxsize=None)
    def trees(i, j):
        if j - i == 1:
            return (Leaf(letters[i]),)
        return tuple(Node(a, b) for k in range(i + 1, j) for a in trees(i, k) for b in trees(k, j))

    return list(trees(0, len(letters)))


@dataclass(frozen=True)
class DyckPath:
    """Up/down path from height 0 back to 0 that never dips below the axis.

    ``labels`` maps a vertex index (0..2n) to the letters of the block
    whose opening step starts there.
    """

    steps: str
    labels: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        height = 0
        for k, s in enumerate(self.steps):
            if s == "U":
                height += 1
            elif s == "D":
                height -= 1
            else:
                raise DyckFormatError(f"bad step {s!r} at {k}; use U and D")
            if height < 0:
                raise DyckFormatError(f"path {self.steps!r} drops below the axis at step {k + 1}")
        if height != 0:
            raise DyckFormatError(f"path {self.steps!r} ends at height {height}")

    @property
    def semilength(self) -> int:
        return len(self.steps) // 2

    def __str__(self):
        return self.steps


def to_dyck(w: ParenWord) -> DyckPath:
    """Encode a tree: a node emits U, its left block, D, its right block."""
    steps: list = []
    labels: dict = {}

    def go(t):
        if isinstance(t, Leaf):
            return
        labels[len(steps)] = t.letters()
        steps.append("U")
        go(t.left)
        steps.append("D")
        go(t.right)

    go(w)
    return DyckPath("".join(steps), labels)


def from_dyck(path: DyckPath | str, letters: Sequence) -> ParenWord:
    if isinstance(path, str):
        path = DyckPath(path)
    letters = tuple(letters)
    if len(letters) != path.semilength + 1:
        raise ArityError(f"path of semilength {path.semilength} needs {path.semilength + 1} letters")
    steps = path.steps
    pos = 0
    leaf = iter(letters)

    def go():
        nonlocal pos
        if pos < len(steps) and steps[pos] == "U":
            pos += 1
            left = go()
            pos += 1  # the matching D
            return Node(left, go())
        return Leaf(next(leaf))

    return go()


# -- free-magma morphisms -----------------------------------------------------


def eval_morphism(w: ParenWord, f: Callable | dict, m: Callable):
    """Extend ``f`` on letters to the unique magma morphism into ``(carrier, m)``."""
    fn = f.__getitem__ if isinstance(f, dict) else f
    if isinstance(w, Leaf):
        try:
            return fn(w.symbol)
        except KeyError:
            raise UnknownSymbolError(f"letter {w.symbol!r} outside the domain") from None
    return m(eval_morphism(w.left, fn, m), eval_morphism(w.right, fn, m))


# -- the magma operad ---------------------------------------------------------


def graft(w: ParenWord, i: int, v: ParenWord) -> ParenWord:
    """Operadic composition: put ``v`` in place of leaf ``i``.

    ``w`` carries the labels 1..n and ``v`` the labels 1..m. Labels of ``v``
    shift up by i-1 and labels of ``w`` above i shift up by m-1.
    """
    n, m = w.length, v.length
    if sorted(w.letters()) != list(range(1, n + 1)):
        raise DomainError("graft needs a word labelled 1..n")
    if not 1 <= i <= n:
        raise DomainError(f"position {i} outside 1..{n}")
    shifted_v = relabel(v, [x + i - 1 for x in v.letters()])

    def go(t):
        if isinstance(t, Leaf):
            if t.symbol == i:
                return shifted_v
            return Leaf(t.symbol + m - 1 if t.symbol > i else t.symbol)
        return Node(go(t.left), go(t.right))

    return go(w)


def act(w: ParenWord, sigma: Sequence[int]) -> ParenWord:
    """Symmetric-group action relabelling letter k as ``sigma[k-1]``."""
    return relabel(w, [sigma[x - 1] for x in w.letters()])


def magma_operad(n: int) -> list:
    """M(n): every tree on n leaves carrying a permutation of 1..n."""
    trees = enumerate_parenthesizations(range(n))
    return [relabel(t, p) for t in trees for p in itertools.permutations(range(1, n + 1))]


# -- translation maps ---------------------------------------------------------

_STEP = re.compile(r"^(L|R)_?(.+?)(\^-1)?$")


@dataclass(frozen=True)
class TMap:
    """A composite of left/right translations and their inverses.

    ``steps`` lists ``(kind, symbol)`` in the order they are applied, kind
    being ``L``, ``R``, ``L-`` or ``R-`` (the last two are the divisions).
    Text form uses function-composition order: ``L_b.R_a`` applies R_a first.
    """

    steps: tuple = ()

    @classmethod
    def parse(cls, text: str) -> TMap:
        text = text.strip()
        if text in ("", "id"):
            return cls()
        steps = []
        for part in reversed(re.split(r"\s*[.∘]\s*", text)):
            if part == "id":
                continue
            m = _STEP.match(part)
            if not m:
                raise UnknownSymbolError(f"cannot read translation {part!r}")
            kind = m.group(1) + ("-" if m.group(3) else "")
            steps.append((kind, m.group(2)))
        return cls(tuple(steps))

    @classmethod
    def left(cls, r) -> TMap:
        return cls((("L", r),))

    @classmethod
    def right(cls, r) -> TMap:
        return cls((("R", r),))

    def is_identity(self) -> bool:
        return not self.reduced().steps

    def __call__(self, x, square: LatinSquare | None):
        for kind, r in self.steps:
            if square is None:
                raise DomainError("a non-identity translation needs a Latin square")
            if kind == "L":
                x = square.mul(r, x)
            elif kind == "R":
                x = square.mul(x, r)
            elif kind == "L-":
                x = square.left_divide(r, x)
            else:
                x = square.right_divide(r, x)
        return x

    def then(self, other: TMap) -> TMap:
        return TMap(self.steps + other.steps)

    def inverse(self) -> TMap:
        flip = {"L": "L-", "L-": "L", "R": "R-", "R-": "R"}
        return TMap(tuple((flip[k], r) for k, r in reversed(self.steps)))

    def reduced(self) -> TMap:
        flip = {"L": "L-", "L-": "L", "R": "R-", "R-": "R"}
        out: list = []
        for k, r in self.steps:
            if out and out[-1] == (flip[k], r):
                out.pop()
            else:
                out.append((k, r))
        return TMap(tuple(out))

    def __str__(self):
        if not self.steps:
            return "id"
        parts = [f"{k[0]}_{r}" + ("^-1" if k.endswith("-") else "") for k, r in self.steps]
        return ".".join(reversed(parts))


IDENTITY = TMap()


def _maps(per_leaf) -> tuple:
    return tuple(t if isinstance(t, TMap) else TMap.parse(t) for t in per_leaf)


def distort(w: ParenWord, per_leaf: Sequence, square: LatinSquare) -> ParenWord:
    """Apply one translation per letter; the tree shape is kept."""
    maps = _maps(per_leaf)
    if len(maps) != w.length:
        raise ArityError(f"{len(maps)} translations for a word of length {w.length}")
    return relabel(w, [t(x, square) for t, x in zip(maps, w.letters())])


@dataclass(frozen=True, eq=False)
class Translation:
    """A morphism of parenthesised translated words.

    The letter at source position ``i`` travels to target position
    ``perm[i]`` and is changed on the way by ``maps[i]``. With the identity
    permutation this is the plain letter-wise action. Source and target may
    be parenthesised differently (a re-association with no letter moving).
    Positions are 0-based.
    """

    source: ParenWord
    target: ParenWord
    maps: tuple
    perm: tuple = None
    square: LatinSquare | None = field(default=None, repr=False)

    def __post_init__(self):
        n = self.source.length
        maps = _maps(self.maps)
        perm = tuple(range(n)) if self.perm is None else tuple(self.perm)
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "perm", perm)
        if self.target.length != n or len(maps) != n:
            raise ArityError("source, target and maps must have the same length")
        if sorted(perm) != list(range(n)):
            raise DomainError(f"{perm} is not a permutation of 0..{n - 1}")
        src, tgt = self.source.letters(), self.target.letters()
        for i, t in enumerate(maps):
            if t(src[i], self.square) != tgt[perm[i]]:
                raise SkeletonError(
                    f"{t} sends {src[i]!r} to {t(src[i], self.square)!r}, target reads {tgt[perm[i]]!r}"
                )

    @classmethod
    def identity(cls, w: ParenWord, square: LatinSquare | None = None) -> Translation:
        return cls(w, w, (IDENTITY,) * w.length, None, square)

    @property
    def length(self) -> int:
        return self.source.length

    def then(self, other: Translation) -> Translation:
        """``self`` followed by ``other`` (diagrammatic order)."""
        if self.target != other.source:
            raise CompositionError(f"target {self.target} is not source {other.source}")
        square = self.square if self.square is not None else other.square
        perm = tuple(other.perm[p] for p in self.perm)
        maps = tuple(self.maps[i].then(other.maps[self.perm[i]]) for i in range(self.length))
        return Translation(self.source, other.target, maps, perm, square)

    def inverse(self) -> Translation:
        n = self.length
        perm = [0] * n
        maps = [IDENTITY] * n
        for i, p in enumerate(self.perm):
            perm[p] = i
            maps[p] = self.maps[i].inverse()
        return Translation(self.target, self.source, tuple(maps), tuple(perm), self.square)

    def is_pure_permutation(self) -> bool:
        return all(t.is_identity() for t in self.maps)

    def positional(self, square: LatinSquare | None = None) -> Translation:
        """Equivalent letter-wise translation with identity permutation.

        Each position j whose letter changes from u to v gets one map: L_x
        (x * u = v) when the incoming letter arrives from the right or stays
        put, and R_y (u * y = v) when it arrives from the left. For a swap
        of two letters this is exactly the pair from ``solve_transposition``.
        """
        square = square or self.square
        src, tgt = self.source.letters(), self.target.letters()
        origin = {p: i for i, p in enumerate(self.perm)}
        maps = []
        for j, (u, v) in enumerate(zip(src, tgt)):
            if u == v:
                maps.append(IDENTITY)
            elif square is None:
                raise DomainError("positional form needs a Latin square")
            elif origin[j] >= j:
                maps.append(TMap.left(square.right_divide(u, v)))
            else:
                maps.append(TMap.right(square.left_divide(u, v)))
        return Translation(self.source, self.target, tuple(maps), None, square)

    def _key(self):
        return (self.source, self.target, self.perm, tuple(t.reduced() for t in self.maps))

    def __eq__(self, other):
        if not isinstance(other, Translation):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        maps = ", ".join(str(t) for t in self.maps)
        return f"Translation({self.source} -> {self.target}; [{maps}]; perm={list(self.perm)})"


def translation(w: ParenWord, per_leaf: Sequence, square: LatinSquare) -> Translation:
    return Translation(w, distort(w, per_leaf, square), tuple(_maps(per_leaf)), None, square)


def apply_translation(t: Translation) -> ParenWord:
    """Recompute the target word from the source and the maps."""
    out = [None] * t.length
    for i, x in enumerate(t.source.letters()):
        out[t.perm[i]] = t.maps[i](x, t.square)
    return relabel(t.target, out)


def apply_permutation(letters: Sequence, sigma: Sequence[int]) -> tuple:
    """Move the letter at position i to position ``sigma[i]`` (0-based)."""
    out = [None] * len(letters)
    for i, p in enumerate(sigma):
        out[p] = letters[i]
    return tuple(out)


def transpositions(sigma: Sequence[int]) -> list:
    """Swaps realising ``sigma``, cycle by cycle from the left.

    The cycle c0 -> c1 -> ... -> c(k-1) becomes swaps (c0,c1), (c0,c2), ...,
    (c0,c(k-1)), applied in that order.
    """
    seen = set()
    swaps = []
    for start in range(len(sigma)):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        nxt = sigma[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = sigma[nxt]
        swaps.extend((cycle[0], c) for c in cycle[1:])
    return swaps


def permutation_via_translations(square: LatinSquare, w: ParenWord, sigma: Sequence[int]) -> Translation:
    """Realise a permutation of the letters of ``w`` by translation maps.

    Every swap of letters a (left) and b (right) puts L_x at a's position
    and R_y at b's, with x * a = b and b * y = a.
    """
    letters = list(w.letters())
    if len(set(letters)) != len(letters):
        raise DomainError("permutations are realised only on words with distinct letters")
    if sorted(sigma) != list(range(len(letters))):
        raise ArityError(f"{list(sigma)} is not a permutation of the {len(letters)} positions")
    maps = [IDENTITY] * len(letters)
    for i, j in transpositions(sigma):
        a, b = letters[i], letters[j]
        x, y = square.solve_transposition(a, b)
        maps[i] = maps[i].then(TMap.left(x))
        maps[j] = maps[j].then(TMap.right(y))
        letters[i], letters[j] = b, a
    return Translation(w, relabel(w, letters), tuple(maps), None, square)
