"""Exponential families as toric data, and torus point counts of bounded height.

A family on ``m`` outcomes has an ``n x m`` integer statistics matrix ``Q``
(row ``i`` holds ``q_i`` evaluated at every outcome) and positive base
weights ``p0``. The toric map sends the formal generator ``y_i`` to the
Laurent monomial ``t^{q_i}``; its kernel is spanned by binomials read off
the integer vectors ``u`` with ``sum_i u_i q_i = 0``.

Counting uses the naive height of a primitive integer representative.
On P^n the anticanonical height is ``H^(n+1)``, on (P^1)^k it is the
product of the squared factor heights. Only torus points (every
homogeneous coordinate nonzero) are counted.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import DegenerateScheduleError, DomainError, InputError, SizeError
from .simplex import FinDist, as_fraction

DEFAULT_PRECISION = 1e-12
MAX_SIEVE = 2_000_000  # largest naive height bound the sieves will build
MAX_PN_DIMENSION = 8
MAX_P1_FACTORS = 4
DOUBLING_TOLERANCE = 0.10
STABILITY_TOLERANCE = 0.15


def density_tolerance() -> float:
    raw = os.environ.get("CAPGEO_PRECISION")
    if not raw:
        return DEFAULT_PRECISION
    try:
        tol = float(raw)
    except ValueError:
        raise InputError(f"CAPGEO_PRECISION must be a number, got {raw!r}") from None
    if not 0 < tol < 1:
        raise InputError("CAPGEO_PRECISION must lie in (0, 1)")
    return tol


@dataclass(frozen=True)
class ExponentialFamily:
    Q: tuple
    p0: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.Q)
        if not rows or not rows[0]:
            raise InputError("Q must be a nonempty matrix")
        m = len(rows[0])
        if any(len(r) != m for r in rows):
            raise InputError("Q rows differ in length")
        for r in rows:
            for x in r:
                if isinstance(x, bool) or not isinstance(x, int):
                    raise InputError(f"Q entries must be integers, got {x!r}")
        p0 = tuple(as_fraction(w) for w in self.p0)
        if len(p0) != m:
            raise InputError(f"p0 has {len(p0)} entries for {m} outcomes")
        if any(w <= 0 for w in p0):
            raise InputError("base weights must be positive")
        object.__setattr__(self, "Q", rows)
        object.__setattr__(self, "p0", p0)

    @property
    def n(self) -> int:
        return len(self.Q)

    @property
    def m(self) -> int:
        return len(self.Q[0])

    @classmethod
    def from_json(cls, text: str) -> ExponentialFamily:
        try:
            data = json.loads(text)
            Q = data["Q"]
            p0 = data.get("p0") or ["1"] * len(Q[0])
        except (json.JSONDecodeError, KeyError, TypeError, IndexError) as exc:
            raise InputError(f"bad family JSON: {exc!r}") from exc
        return cls(Q, p0)

    def to_json(self) -> str:
        return json.dumps({"Q": [list(r) for r in self.Q], "p0": [str(w) for w in self.p0]})


def independence_model() -> ExponentialFamily:
    """Two binary variables: generators y1..y4 map to t1t3, t1t4, t2t3, t2t4."""
    return ExponentialFamily(((1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)), ("1",) * 4)


# -- densities ------------------------------------------------------------------


@dataclass(frozen=True)
class Density:
    """Probabilities of a family at one parameter value.

    ``exact`` holds the rational distribution when it is available (theta
    zero); ``probs`` are mpmath numbers otherwise.
    """

    probs: tuple
    log_partition: object
    exact: FinDist | None
    tolerance: float


def _theta_value(x):
    if isinstance(x, mpmath.mpf):
        return x
    if isinstance(x, float):
        return mpmath.mpf(x)
    return as_fraction(x)


def parse_theta(text: str) -> list:
    """Comma-separated rationals; ``log(r)`` stands for the natural log of r."""
    out = []
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"log\((.+)\)", part)
        if m:
            r = as_fraction(m.group(1).strip())
            if r <= 0:
                raise DomainError(f"log of a nonpositive number: {part}")
            out.append(("log", r))
        else:
            out.append(as_fraction(part))
    return out


def density_at(f: ExponentialFamily, theta: Sequence) -> Density:
    """``p_j`` proportional to ``p0_j exp(sum_i theta_i q_ij)``."""
    if len(theta) != f.n:
        raise InputError(f"theta has {len(theta)} entries, the family has {f.n} parameters")
    tol = density_tolerance()
    theta = [t if isinstance(t, tuple) else _theta_value(t) for t in theta]
    if all(not isinstance(t, tuple) and t == 0 for t in theta):
        total = sum(f.p0)
        exact = FinDist(tuple(range(f.m)), tuple(w / total for w in f.p0))
        psi = Fraction(0) if total == 1 else mpmath.log(mpmath.mpf(total.numerator) / total.denominator)
        return Density(exact.weights, psi, exact, tol)
    dps = max(30, int(-math.log10(tol)) + 15)
    with mpmath.workdps(dps):
        th = [mpmath.log(mpmath.mpf(t[1].numerator) / t[1].denominator) if isinstance(t, tuple)
              else (mpmath.mpf(t.numerator) / t.denominator if isinstance(t, Fraction) else t)
              for t in theta]
        raw = []
        for j in range(f.m):
            s = mpmath.fsum(th[i] * f.Q[i][j] for i in range(f.n))
            raw.append(mpmath.mpf(f.p0[j].numerator) / f.p0[j].denominator * mpmath.exp(s))
        z = mpmath.fsum(raw)
        probs = tuple(p / z for p in raw)
        if abs(mpmath.fsum(probs) - 1) > tol:
            raise DomainError("normalisation drifted past the declared tolerance")
        return Density(probs, mpmath.log(z), None, tol)


def log_partition(f: ExponentialFamily, theta: Sequence):
    return density_at(f, theta).log_partition


# -- monomial maps and the kernel lattice ---------------------------------------


def _positive(t: Sequence) -> list:
    t = [as_fraction(x) for x in t]
    if any(x <= 0 for x in t):
        raise DomainError("monomial parameters must be positive")
    return t


def monomial_parametrization(f: ExponentialFamily, t: Sequence) -> tuple:
    """``tau_j = prod_i t_i^{q_ij}`` for ``t`` of length n."""
    t = _positive(t)
    if len(t) != f.n:
        raise InputError(f"need {f.n} parameters, got {len(t)}")
    return tuple(math.prod((t[i] ** f.Q[i][j] for i in range(f.n)), start=Fraction(1)) for j in range(f.m))


def lift_monomials(f: ExponentialFamily, t: Sequence) -> tuple:
    """The toric map on generators: ``y_i = prod_j t_j^{q_ij}`` for ``t`` of length m."""
    t = _positive(t)
    if len(t) != f.m:
        raise InputError(f"need {f.m} torus coordinates, got {len(t)}")
    return tuple(math.prod((t[j] ** f.Q[i][j] for j in range(f.m)), start=Fraction(1)) for i in range(f.n))


def _left_kernel(rows: Sequence[Sequence[int]]) -> list:
    """Integer basis of {u : sum_i u_i rows[i] = 0} by unimodular row reduction."""
    n, m = len(rows), len(rows[0])
    aug = [list(rows[i]) + [int(i == k) for k in range(n)] for i in range(n)]
    pivot_row = 0
    for col in range(m):
        while True:
            live = [r for r in range(pivot_row, n) if aug[r][col] != 0]
            if not live:
                break
            best = min(live, key=lambda r: abs(aug[r][col]))
            aug[pivot_row], aug[best] = aug[best], aug[pivot_row]
            p = aug[pivot_row][col]
            done = True
            for r in range(pivot_row + 1, n):
                if aug[r][col]:
                    q = aug[r][col] // p
                    aug[r] = [a - q * b for a, b in zip(aug[r], aug[pivot_row])]
                    if aug[r][col]:
                        done = False
            if done:
                pivot_row += 1
                break
        if pivot_row == n:
            break
    basis = [row[m:] for row in aug[pivot_row:]]
    return [_normalise_sign(u) for u in basis]


def _normalise_sign(u):
    for x in u:
        if x:
            return tuple(u) if x > 0 else tuple(-y for y in u)
    return tuple(u)


def kernel_lattice(f: ExponentialFamily) -> list:
    """Basis of the lattice of integer relations ``sum_i u_i q_i = 0``."""
    basis = _left_kernel(f.Q)
    for u in basis:
        if any(sum(u[i] * f.Q[i][j] for i in range(f.n)) for j in range(f.m)):
            raise AssertionError(f"kernel vector {u} fails the relation")
    return basis


def column_relations(f: ExponentialFamily) -> list:
    """Basis of integer ``v`` with ``Q v = 0`` (relations among outcomes)."""
    return _left_kernel([[f.Q[i][j] for i in range(f.n)] for j in range(f.m)])


@dataclass(frozen=True)
class Binomial:
    plus: tuple
    minus: tuple

    @classmethod
    def from_vector(cls, u: Sequence[int]) -> Binomial:
        return cls(tuple(max(x, 0) for x in u), tuple(max(-x, 0) for x in u))

    def evaluate(self, y: Sequence) -> Fraction:
        def mono(e):
            return math.prod((Fraction(v) ** k for v, k in zip(y, e)), start=Fraction(1))
        return mono(self.plus) - mono(self.minus)

    def __str__(self):
        def mono(e):
            parts = [f"y{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
            return "".join(parts) or "1"
        return f"{mono(self.plus)} - {mono(self.minus)}"


@dataclass(frozen=True)
class ToricModel:
    family: ExponentialFamily
    kernel_basis: tuple
    binomials: tuple
    cone_generators: tuple


def toric_model(f: ExponentialFamily) -> ToricModel:
    basis = tuple(kernel_lattice(f))
    cone = tuple(tuple(f.Q[i][j] for i in range(f.n)) for j in range(f.m))
    return ToricModel(f, basis, tuple(Binomial.from_vector(u) for u in basis), cone)


def binomial_generators(model: ToricModel) -> list:
    return [(b.plus, b.minus) for b in model.binomials]


# -- varieties and heights ------------------------------------------------------


@dataclass(frozen=True)
class ProjectiveSpace:
    n: int

    @property
    def picard_rank(self) -> int:
        return 1

    def __str__(self):
        return f"P{self.n}"


@dataclass(frozen=True)
class ProductOfP1:
    k: int

    @property
    def picard_rank(self) -> int:
        return self.k

    def __str__(self):
        return "P1" if self.k == 1 else "x".join(["P1"] * self.k)


def parse_variety(text: str):
    """``P1``, ``P2``, ``P1xP1``, ``P1^3`` and so on."""
    s = text.replace(" ", "").upper()
    m = re.fullmatch(r"P1\^(\d+)", s)
    if m:
        k = int(m.group(1))
        return ProductOfP1(k) if k > 1 else ProjectiveSpace(1)
    parts = s.split("X")
    if len(parts) > 1 and all(p == "P1" for p in parts):
        return ProductOfP1(len(parts))
    m = re.fullmatch(r"P(\d+)", s)
    if m and int(m.group(1)) >= 1:
        return ProjectiveSpace(int(m.group(1)))
    raise InputError(f"unknown variety {text!r}; try P1, P2, P1xP1 or P1^3")


@dataclass(frozen=True)
class CountSpec:
    variety: object
    B: int

    def __post_init__(self):
        if isinstance(self.B, bool) or not isinstance(self.B, int) or self.B < 1:
            raise InputError(f"height bound must be a positive integer, got {self.B!r}")

    @property
    def picard_rank(self) -> int:
        return self.variety.picard_rank


def naive_height(coords: Sequence) -> int:
    """Max absolute coordinate of the primitive integer representative."""
    fr = [as_fraction(c) for c in coords]
    if all(c == 0 for c in fr):
        raise DomainError("the zero vector is not a projective point")
    den = math.lcm(*(c.denominator for c in fr))
    ints = [int(c * den) for c in fr]
    g = math.gcd(*ints)
    return max(abs(x) // g for x in ints)


def anticanonical_height(variety, point) -> int:
    """``point`` is a coordinate tuple on P^n, or a tuple of pairs on (P^1)^k."""
    if isinstance(variety, ProjectiveSpace):
        return naive_height(point) ** (variety.n + 1)
    return math.prod(naive_height(p) ** 2 for p in point)


def integer_root(x: int, k: int) -> int:
    """Largest h with h**k <= x."""
    if k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    h = int(round(x ** (1.0 / k)))
    while h ** k > x:
        h -= 1
    while (h + 1) ** k <= x:
        h += 1
    return h


def _sieve_totient(limit: int) -> list:
    phi = list(range(limit + 1))
    for p in range(2, limit + 1):
        if phi[p] == p:
            for q in range(p, limit + 1, p):
                phi[q] -= phi[q] // p
    return phi


def _sieve_mobius(limit: int) -> list:
    mu = [1] * (limit + 1)
    is_comp = bytearray(limit + 1)
    for p in range(2, limit + 1):
        if not is_comp[p]:
            for q in range(p, limit + 1, p):
                if q > p:
                    is_comp[q] = 1
                mu[q] = -mu[q]
            for q in range(p * p, limit + 1, p * p):
                mu[q] = 0
    return mu


def _check_budget(limit: int, what: str):
    if limit > MAX_SIEVE:
        raise SizeError(f"{what} needs a sieve of size {limit}, above the budget {MAX_SIEVE}")


def _p1_layers(limit: int) -> list:
    """``a[h]`` = number of torus points of P^1 with naive height exactly h."""
    phi = _sieve_totient(limit)
    a = [0] * (limit + 1)
    if limit >= 1:
        a[1] = 2
    for h in range(2, limit + 1):
        a[h] = 4 * phi[h]
    return a


def _dirichlet(a: list, b: list) -> list:
    limit = len(a) - 1
    out = [0] * (limit + 1)
    for i in range(1, limit + 1):
        if a[i]:
            ai = a[i]
            for j in range(1, limit // i + 1):
                out[i * j] += ai * b[j]
    return out


def count_points(spec: CountSpec) -> int:
    """Number of torus points of anticanonical height at most ``B``."""
    v = spec.variety
    if isinstance(v, ProjectiveSpace):
        if not 1 <= v.n <= MAX_PN_DIMENSION:
            raise SizeError(f"P^n counting supports 1 <= n <= {MAX_PN_DIMENSION}")
        H = integer_root(spec.B, v.n + 1)
        _check_budget(H, f"P{v.n} at B={spec.B}")
        if v.n == 1:
            return sum(_p1_layers(H))
        mu = _sieve_mobius(H)
        primitive = sum(mu[d] * (2 * (H // d)) ** (v.n + 1) for d in range(1, H + 1) if mu[d])
        return primitive // 2
    if isinstance(v, ProductOfP1):
        if not 1 <= v.k <= MAX_P1_FACTORS:
            raise SizeError(f"(P^1)^k counting supports 1 <= k <= {MAX_P1_FACTORS}")
        X = math.isqrt(spec.B)
        _check_budget(X, f"{v} at B={spec.B}")
        base = _p1_layers(X)
        acc = base
        for _ in range(v.k - 1):
            acc = _dirichlet(acc, base)
        return sum(acc)
    raise InputError(f"unsupported variety {v!r}")


# -- asymptotic fit -------------------------------------------------------------


def normalized_count(N: int, B: int, k: int) -> float:
    return N / (B * math.log(B) ** (k - 1))


@dataclass(frozen=True)
class FitReport:
    variety: object
    rows: tuple  # (B, N, normalized)
    c_est: float
    doubling_ratio: float
    doubling_expected: float
    doubling_error: float
    stability: float
    passed: bool

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["B", "N", "normalized"])
        for B, N, r in self.rows:
            w.writerow([B, N, f"{r:.10g}"])
        return buf.getvalue()

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"variety={self.variety} c_est={self.c_est:.10g} "
            f"doubling={self.doubling_ratio:.6f} expected={self.doubling_expected:.6f} "
            f"doubling_error={self.doubling_error:.4f} stability={self.stability:.4f} verdict={verdict}"
        )


def parse_schedule(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            value = float(part) if re.search(r"[eE.]", part) else int(part)
        except ValueError:
            raise InputError(f"bad schedule entry {part!r}") from None
        if value != int(value):
            raise InputError(f"schedule entries must be integers, got {part!r}")
        out.append(int(value))
    return out


def manin_fit(variety, schedule: Sequence[int]) -> FitReport:
    """Compare counts along ``schedule`` with growth ``B (log B)^(k-1)``.

    Besides the schedule the count is taken at ``B/4``, ``B/2`` and ``2B``
    for the last bound ``B``. The doubling ratio ``N(2B)/N(B)`` is compared
    with ``2 (log 2B / log B)^(k-1)`` and the normalized count must move by
    less than the stability tolerance between ``B/4`` and ``B``.
    """
    schedule = [int(b) for b in schedule]
    if len(schedule) < 3:
        raise DegenerateScheduleError("a fit needs at least three bounds")
    if any(b2 <= b1 for b1, b2 in zip(schedule, schedule[1:])):
        raise DegenerateScheduleError("schedule must be strictly increasing")
    if schedule[0] < 4:
        raise DegenerateScheduleError("bounds below 4 leave nothing to normalise")
    k = variety.picard_rank
    cache: dict = {}

    def N(B):
        if B not in cache:
            cache[B] = count_points(CountSpec(variety, B))
        return cache[B]

    rows = tuple((B, N(B), normalized_count(N(B), B, k)) for B in schedule)
    last = schedule[-1]
    ratio = N(2 * last) / N(last)
    expected = 2 * (math.log(2 * last) / math.log(last)) ** (k - 1)
    err = abs(ratio - expected) / expected
    early = normalized_count(N(last // 4), last // 4, k)
    stability = abs(rows[-1][2] - early) / early
    passed = err < DOUBLING_TOLERANCE and stability < STABILITY_TOLERANCE
    return FitReport(variety, rows, rows[-1][2], ratio, expected, err, stability, passed)


def count_csv(variety, bounds: Sequence[int]) -> str:
    k = variety.picard_rank
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["B", "N", "normalized"])
    for B in bounds:
        n = count_points(CountSpec(variety, B))
        norm = normalized_count(n, B, k) if B > 1 or k == 1 else float("nan")
        w.writerow([B, n, f"{norm:.10g}"])
    return buf.getvalue()
