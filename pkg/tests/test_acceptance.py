"""Acceptance criteria, one test per criterion.

Each test prints a single ``CRITERION n: PASS|FAIL`` line with its runtime
and fails if the law breaks or the runtime bound is exceeded.
"""
import itertools
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction as F
from functools import lru_cache
from pathlib import Path

import networkx as nx

from braidgen import SQUARE, composable_chain, random_braid, random_combination
from capgeo.errors import NonInvertibleError
from capgeo.magma import distort, enumerate_parenthesizations, format_word, from_dyck, parse_word, to_dyck
from capgeo.mpab import (
    ModifiedBraid,
    cable,
    compose,
    compose_bilinear,
    embed_pab,
    inverse,
    pinch,
    remove_strand,
    truncate,
)
from capgeo.quasigroup import cyclic_square_abcd
from capgeo.simplex import (
    FinDist,
    ProjPoint,
    argmax_algebra,
    barycenter_algebra,
    check_algebra,
    flatten,
    grid_distributions,
    hypercube_diagram,
    pushforward,
    segre,
    unit,
)
from capgeo.toric import (
    CountSpec,
    ProductOfP1,
    ProjectiveSpace,
    count_points,
    independence_model,
    kernel_lattice,
    lift_monomials,
    manin_fit,
    toric_model,
)
from test_toric import brute_count_p1k, brute_count_pn, brute_kernel, in_integer_span

DATA = Path(__file__).parent / "data"
RANDOM_CASES = 10_000


@contextmanager
def criterion(number, seconds):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < seconds
        print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s, bound {seconds}s)")
    assert elapsed < seconds, f"criterion {number} took {elapsed:.2f}s"


def test_criterion_1_hypercube():
    fig_words = {"".join(w) for w in itertools.product("01", repeat=4)}
    with criterion(1, 1):
        for n in range(1, 7):
            d = hypercube_diagram(n)
            g = nx.Graph(list(d.edges))
            g.add_nodes_from(d.vertices)
            assert len(d.vertices) == 2 ** n
            assert len(d.edges) == n * 2 ** (n - 1)
            assert all(deg == n for _, deg in g.degree())
            assert nx.weisfeiler_lehman_graph_hash(g) == nx.weisfeiler_lehman_graph_hash(nx.hypercube_graph(n))
            assert nx.is_isomorphic(g, nx.hypercube_graph(n))
        assert {"".join(map(str, v)) for v in hypercube_diagram(4).vertices} == fig_words


def test_criterion_2_segre():
    rng = random.Random(2024)

    def point(dim):
        while True:
            c = tuple(F(rng.randint(-12, 12), rng.randint(1, 12)) for _ in range(dim + 1))
            if any(c):
                return ProjPoint(c)

    with criterion(2, 1):
        for _ in range(100):
            p, q, r = point(1), point(1), point(1)
            lhs = segre(segre(p, q), r)
            rhs = segre(p, segre(q, r))
            assert lhs.coords == rhs.coords and lhs.dimension == 7
            s, t = F(rng.randint(1, 9), rng.randint(1, 9)), F(-rng.randint(1, 9), rng.randint(1, 9))
            assert segre(p.scaled(s), q.scaled(t)) == segre(p, q)


def test_criterion_3_monad_laws():
    with criterion(3, 10):
        for size in (1, 2, 3):
            outcomes = "abc"[:size]
            grid = grid_distributions(outcomes, 4)
            for d in grid:
                assert flatten(unit(d, [d])) == d
                assert flatten(pushforward(lambda x: unit(x, outcomes), d)) == d
                assert pushforward(lambda x: x, d) == d
            # associativity of flatten on pairs of grid mixtures
            mixtures = [FinDist((a, b), (F(1, 4), F(3, 4))) for a, b in itertools.combinations(grid, 2)]
            for m1, m2 in itertools.islice(itertools.combinations(mixtures, 2), 400):
                if m1.outcome_set() != m2.outcome_set():
                    continue
                ddd = FinDist((m1, m2), (F(1, 2), F(1, 2)))
                assert flatten(pushforward(flatten, ddd)) == flatten(flatten(ddd))
            pts = [tuple(F(int(i == j)) for j in range(size)) for i in range(size)]
            assert check_algebra(barycenter_algebra(pts), denominator=4).passed
        report = check_algebra(argmax_algebra(["a", "b"]))
        assert not report.passed and report.mult_witness is not None


def test_criterion_4_worked_examples():
    square = cyclic_square_abcd()
    with criterion(4, 1):
        w = parse_word("((c(ab))d)")
        assert format_word(distort(w, ["L_a", "id", "R_b", "id"], square)) == "((d(ad))d)"
        word = parse_word("(((ba)d)c)")
        got = ["".join(distort(word, [f"L_{r}"] * 4, square).letters()) for r in "abc"]
        assert got == ["cbad", "dcba", "adcb"]
        assert square.is_loop() and square.identity_element() == "d"
        assert square.is_moufang()


@lru_cache(maxsize=None)
def catalan_oracle(n):
    return 1 if n == 0 else sum(catalan_oracle(i) * catalan_oracle(n - 1 - i) for i in range(n))


def test_criterion_5_catalan_dyck():
    with criterion(5, 30):
        for n in range(0, 11):
            letters = [f"x{k}" for k in range(n + 1)]
            trees = enumerate_parenthesizations(letters)
            assert len(trees) == catalan_oracle(n)
        for leaves in range(1, 11):
            letters = [f"x{k}" for k in range(leaves)]
            for t in enumerate_parenthesizations(letters):
                assert from_dyck(to_dyck(t), letters) == t


def test_criterion_6_mpab_laws():
    rng = random.Random(6)
    with criterion(6, 30):
        for _ in range(RANDOM_CASES):
            a, b, c = composable_chain(rng)
            ab = compose(a, b)
            assert compose(ab, c) == compose(a, compose(b, c))
            assert compose(ModifiedBraid.identity(a.source, SQUARE), a) == a
            assert compose(a, ModifiedBraid.identity(a.target, SQUARE)) == a
            assert ab.skeleton() == a.skeleton().then(b.skeleton())
        for _ in range(RANDOM_CASES):
            b = random_braid(rng, n=rng.randint(1, 4))
            i = rng.randint(1, b.strands)
            c = cable(b, i)
            assert remove_strand(c, i) == b and remove_strand(c, i + 1) == b
        for _ in range(RANDOM_CASES):
            a, b = composable_chain(rng, 2)
            x = random_combination(rng, a, rng.randint(0, 1))
            y = random_combination(rng, b, rng.randint(0, 1))
            xy = compose_bilinear(x, y)
            assert xy.degree == x.degree + y.degree
            m = rng.randint(0, 2)
            assert truncate(xy, m) == truncate(compose_bilinear(truncate(x, m), truncate(y, m)), m)
        # exhaustive small cases
        for n in (2, 3):
            w = parse_word("((ab)c)") if n == 3 else parse_word("(ab)")
            gens = [g for k in range(1, n) for g in (k, -k)]
            words = [list(p) for length in range(3) for p in itertools.product(gens, repeat=length)]
            for u, v in itertools.product(words, repeat=2):
                bu = embed_pab(w, u)
                bv = embed_pab(bu.target, v)
                assert compose(bu, bv).skeleton() == bu.skeleton().then(bv.skeleton())
                assert compose(bu, inverse(bu)) == ModifiedBraid.identity(w)
                for i in range(1, n + 1):
                    assert remove_strand(cable(bu, i), i) == bu
        pinched = pinch(ModifiedBraid.identity(parse_word("(ab)")), 0, [1, 2])
        try:
            inverse(pinched)
        except NonInvertibleError:
            pass
        else:
            raise AssertionError("inverse accepted a pinched braid")


def test_criterion_7_toric_ideal():
    rng = random.Random(7)
    with criterion(7, 1):
        f = independence_model()
        basis = kernel_lattice(f)
        assert len(basis) == 1 and basis[0] in ((1, -1, -1, 1), (-1, 1, 1, -1))
        brute = brute_kernel(f.Q, 3)
        assert all(in_integer_span(u, basis) for u in brute)
        assert set(brute) == {tuple(k * x for x in basis[0]) for k in range(-3, 4) if k}
        model = toric_model(f)
        for _ in range(20):
            t = [F(rng.randint(1, 50), rng.randint(1, 50)) for _ in range(f.m)]
            y = lift_monomials(f, t)
            assert all(b.evaluate(y) == 0 for b in model.binomials)


def test_criterion_8_manin():
    with criterion(8, 300):
        for B in (1, 4, 10, 99, 256, 500, 1000):
            assert count_points(CountSpec(ProjectiveSpace(1), B)) == brute_count_pn(1, B)
            assert count_points(CountSpec(ProjectiveSpace(2), B)) == brute_count_pn(2, B)
            assert count_points(CountSpec(ProductOfP1(2), B)) == brute_count_p1k(2, B)
        p1 = manin_fit(ProjectiveSpace(1), [10 ** 3, 10 ** 4, 10 ** 5])
        assert abs(p1.doubling_ratio - 2) / 2 < 0.10
        p1p1 = manin_fit(ProductOfP1(2), [10 ** 3, 10 ** 4, 10 ** 5])
        assert p1p1.stability < 0.15


CLI_COMMANDS = [
    ["segre-cube", "4", "--dot", "-"],
    ["distort", "((c(ab))d)", "--latin", str(DATA / "cyclic_square.csv"), "--plan", "L_a,id,R_b,id"],
    ["dyck", "((ab)c)"],
    ["dyck", "--invert", "UUDD"],
    ["latin", str(DATA / "cyclic_square.csv"), "--seed", "3"],
    ["braid", "compose", str(DATA / "sigma1.json"), str(DATA / "sigma1_inv.json")],
    ["braid", "inverse", str(DATA / "sigma1.json")],
    ["braid", "inverse", str(DATA / "pinched.json")],
    ["braid", "cable", str(DATA / "sigma1.json"), "--i", "1"],
    ["braid", "remove", str(DATA / "sigma1.json"), "--i", "2"],
    ["braid", "extend", str(DATA / "sigma1.json"), "--side", "left"],
    ["braid", "skeleton", str(DATA / "sigma1.json")],
    ["braid", "truncate", str(DATA / "degree2.json"), "--m", "1"],
    ["braid", "render", str(DATA / "sigma1.json")],
    ["toric", "ideal", "--model", "independence"],
    ["toric", "density", "--json", str(DATA / "two_point.json"), "--theta", "log(3)"],
    ["toric", "count", "--variety", "P1", "--B", "4"],
    ["toric", "count", "--variety", "P2", "--schedule", "10,100,1000", "--csv", "-"],
    ["toric", "fit", "--variety", "P1xP1", "--schedule", "1e3,1e4,1e5"],
]


def test_criterion_9_cli_determinism():
    with criterion(9, 60):
        for cmd in CLI_COMMANDS:
            runs = [subprocess.run([sys.executable, "-m", "capgeo", *cmd], capture_output=True)
                    for _ in range(2)]
            first, second = runs
            assert first.stdout + first.stderr, cmd
            assert (first.stdout, first.stderr, first.returncode) == (second.stdout, second.stderr, second.returncode)
