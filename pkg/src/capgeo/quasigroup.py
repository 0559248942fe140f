"""Latin squares, quasigroup/loop/Moufang predicates, and code metrics."""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, InputError, NotLatinError, UnknownSymbolError

EXHAUSTIVE_ORDER = 8
SAMPLED_IDENTITY_CHECKS = 20000


def is_quasigroup(table: Sequence[Sequence], alphabet: Sequence | None = None) -> bool:
    """True iff ``table`` is a Latin square over ``alphabet``.

    Without an alphabet the set of symbols in the first row is used.
    """
    rows = [tuple(r) for r in table]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        return False
    symbols = set(alphabet) if alphabet is not None else set(rows[0])
    if len(symbols) != n:
        return False
    if any(set(r) != symbols for r in rows):
        return False
    return all(set(col) == symbols for col in zip(*rows))


@dataclass(frozen=True)
class LatinSquare:
    """Multiplication table of a finite quasigroup.

    Entry ``table[i][j]`` is ``alphabet[i] * alphabet[j]``. Symbols are
    opaque strings ordered as given.
    """

    alphabet: tuple
    table: tuple

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        table = tuple(tuple(r) for r in self.table)
        if len(set(alphabet)) != len(alphabet):
            raise NotLatinError("repeated symbol in alphabet")
        if not is_quasigroup(table, alphabet):
            raise NotLatinError("table is not a Latin square over the alphabet")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "table", table)
        index = {s: i for i, s in enumerate(alphabet)}
        object.__setattr__(self, "_index", index)
        # left/right division lookups, built once
        ldiv = {(r, table[index[r]][j]): alphabet[j] for r in alphabet for j in range(len(alphabet))}
        rdiv = {(r, table[i][index[r]]): alphabet[i] for r in alphabet for i in range(len(alphabet))}
        object.__setattr__(self, "_ldiv", ldiv)
        object.__setattr__(self, "_rdiv", rdiv)

    @classmethod
    def cyclic(cls, alphabet: Sequence) -> LatinSquare:
        """Z/n on ``alphabet`` with ``alphabet[0]`` as identity."""
        alphabet = tuple(alphabet)
        n = len(alphabet)
        return cls(alphabet, tuple(tuple(alphabet[(i + j) % n] for j in range(n)) for i in range(n)))

    @property
    def order(self) -> int:
        return len(self.alphabet)

    def _i(self, s) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise UnknownSymbolError(f"{s!r} is not in the alphabet {self.alphabet}") from None

    def mul(self, x, y):
        return self.table[self._i(x)][self._i(y)]

    __call__ = mul

    def left_translate(self, r, x):
        """L_r(x) = r * x."""
        return self.mul(r, x)

    def right_translate(self, r, x):
        """R_r(x) = x * r."""
        return self.mul(x, r)

    def left_divide(self, r, z):
        """The unique x with r * x = z."""
        self._i(r), self._i(z)
        return self._ldiv[(r, z)]

    def right_divide(self, r, z):
        """The unique x with x * r = z."""
        self._i(r), self._i(z)
        return self._rdiv[(r, z)]

    def solve_transposition(self, a, b) -> tuple:
        """Return ``(x, y)`` with ``x * a == b`` and ``b * y == a``.

        Applying L_x at the position of ``a`` and R_y at the position of
        ``b`` swaps the two letters.
        """
        if a == b:
            raise DomainError("transposition needs two distinct letters")
        return self.right_divide(a, b), self.left_divide(b, a)

    def identity_element(self):
        for e in self.alphabet:
            if all(self.mul(e, x) == x and self.mul(x, e) == x for x in self.alphabet):
                return e
        return None

    def is_loop(self) -> bool:
        return self.identity_element() is not None

    def is_associative(self, seed: int = 0) -> bool:
        m = self.mul
        return all(m(m(a, b), c) == m(a, m(b, c)) for a, b, c in self._tuples(3, seed))

    def is_moufang(self, standard: bool = False, seed: int = 0) -> bool:
        """Check the near-associativity identities.

        By default the three identities as usually printed are checked:
        ``(ab)(cd) = a((bc)d)``, ``a(ab) = (aa)b`` and
        ``(ab)(ac) = (aa)(bc)``. With ``standard=True`` the classical
        Moufang identity ``(ab)(ca) = (a(bc))a`` is checked instead; note the
        printed four-variable identity forces associativity in any loop.
        Above order 8 the identities are sampled with ``seed``.
        """
        m = self.mul
        if standard:
            return all(m(m(a, b), m(c, a)) == m(m(a, m(b, c)), a) for a, b, c in self._tuples(3, seed))
        for a, b, c, d in self._tuples(4, seed):
            if m(m(a, b), m(c, d)) != m(a, m(m(b, c), d)):
                return False
        for a, b, c in self._tuples(3, seed):
            if m(a, m(a, b)) != m(m(a, a), b):
                return False
            if m(m(a, b), m(a, c)) != m(m(a, a), m(b, c)):
                return False
        return True

    def _tuples(self, k: int, seed: int = 0):
        if self.order <= EXHAUSTIVE_ORDER:
            return itertools.product(self.alphabet, repeat=k)
        rng = random.Random(f"{seed}:{self.order}:{k}")
        return (tuple(rng.choice(self.alphabet) for _ in range(k)) for _ in range(SAMPLED_IDENTITY_CHECKS))

    def to_json(self) -> str:
        return json.dumps({"alphabet": list(self.alphabet), "table": [list(r) for r in self.table]})

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.alphabet)
        w.writerows(self.table)
        return buf.getvalue()


def read_latin(text: str) -> LatinSquare:
    """Parse a Latin square from JSON or CSV (header row = alphabet)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
            return LatinSquare(tuple(data["alphabet"]), tuple(tuple(r) for r in data["table"]))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise InputError(f"bad Latin square JSON: {exc}") from exc
    rows = [[c.strip() for c in r] for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise InputError("empty Latin square CSV")
    return LatinSquare(tuple(rows[0]), tuple(tuple(r) for r in rows[1:]))


def cyclic_square_abcd() -> LatinSquare:
    """The 4x4 table on a, b, c, d used in the distortion examples (identity d)."""
    return read_latin("a,b,c,d\nb,c,d,a\nc,d,a,b\nd,a,b,c\na,b,c,d\n")


# -- codes --------------------------------------------------------------------


def hamming(w1: Sequence, w2: Sequence) -> int:
    if len(w1) != len(w2):
        raise DomainError(f"words of lengths {len(w1)} and {len(w2)}")
    return sum(a != b for a, b in zip(w1, w2))


@dataclass(frozen=True)
class Code:
    q: int
    n: int
    words: tuple

    def __post_init__(self):
        words = tuple(tuple(w) for w in self.words)
        if self.q < 2 or self.n < 1:
            raise InputError("need q >= 2 and n >= 1")
        if not words:
            raise InputError("a code is a nonempty set of words")
        if any(len(w) != self.n for w in words):
            raise InputError(f"every word must have length {self.n}")
        if len(set(words)) != len(words):
            raise InputError("repeated codeword")
        letters = {x for w in words for x in w}
        if len(letters) > self.q:
            raise InputError(f"{len(letters)} letters used with q = {self.q}")
        object.__setattr__(self, "words", words)


@dataclass(frozen=True)
class CodePoint:
    """Rate and relative minimum distance of a code.

    ``rate`` is exact when the code size is a power of q; otherwise it is a
    float rounded to 12 significant digits and ``rate_exact`` is False.
    ``rate_floor`` reads the rate bracket as a floor and is always exact.
    """

    rate: Fraction | float
    delta: Fraction
    rate_exact: bool
    rate_floor: Fraction


def exact_log(value: int, base: int) -> int | None:
    k, acc = 0, 1
    while acc < value:
        acc *= base
        k += 1
    return k if acc == value else None


def code_point(code: Code) -> CodePoint:
    if len(code.words) < 2:
        raise DomainError("minimum distance is undefined for a single codeword")
    d = min(hamming(a, b) for a, b in itertools.combinations(code.words, 2))
    size = len(code.words)
    k = exact_log(size, code.q)
    floor_log = 0
    while code.q ** (floor_log + 1) <= size:
        floor_log += 1
    if k is not None:
        rate, exact = Fraction(k, code.n), True
    else:
        rate, exact = float(f"{math.log(size, code.q) / code.n:.12g}"), False
    return CodePoint(rate, Fraction(d, code.n), exact, Fraction(floor_log, code.n))


def read_code(text: str) -> Code:
    """Parse a JSON header line ``{"q": .., "n": ..}`` then one word per line.

    Words are split on whitespace or commas when present, otherwise read
    one character per letter.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty code file")
    try:
        header = json.loads(lines[0])
        q, n = int(header["q"]), int(header["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad code header: {exc}") from exc
    words = []
    for ln in lines[1:]:
        parts = ln.replace(",", " ").split()
        words.append(tuple(parts) if len(parts) > 1 else tuple(ln))
    code = Code(q, n, tuple(words))
    alphabet = header.get("alphabet")
    if alphabet is not None:
        bad = {x for w in code.words for x in w} - set(alphabet)
        if bad:
            raise UnknownSymbolError(f"letters outside the declared alphabet: {sorted(bad)}")
    return code
