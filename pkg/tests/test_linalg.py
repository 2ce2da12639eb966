import random
from fractions import Fraction

from urc.linalg import (
    ScalarMatrix,
    independent_subset,
    rank_of_rows,
    rref_rank_kernel,
    solve_affine_system,
)
from urc.scalars import MultiPoly, RationalFunction


def F(x):
    return Fraction(x)


def test_identity_full_rank():
    m = ScalarMatrix.from_rows([[F(1), F(0), F(0)],
                                [F(0), F(1), F(0)],
                                [F(0), F(0), F(1)]])
    res = rref_rank_kernel(m)
    assert res.rank == 3
    assert res.kernel_basis == ()


def test_hand_reduced_2x3():
    # hand row-reduction: x3 free, x1 = -x3, x2 = -x3
    res = rref_rank_kernel([[F(1), F(0), F(1)], [F(0), F(1), F(1)]])
    assert res.rank == 2
    assert res.kernel_basis == ((F(-1), F(-1), F(1)),)


def test_tangent_hyperplane_rows():
    # linear parts of the four affine equations at the origin (P side):
    # z2+z3+z4+z5, 3z3+z4+2z5, 3z3+z5, z3 over (z2..z6)
    rows = [[1, 1, 1, 1, 0],
            [0, 3, 1, 2, 0],
            [0, 3, 0, 1, 0],
            [0, 1, 0, 0, 0]]
    res = rref_rank_kernel([[F(x) for x in r] for r in rows])
    assert res.rank == 4
    assert len(res.kernel_basis) == 1
    assert res.kernel_basis[0] == (F(0), F(0), F(0), F(0), F(1))


def test_solve_zero_system():
    res = solve_affine_system([[F(0), F(0)], [F(0), F(0)]], [F(0), F(0)])
    assert res.kind == "parametrized"
    assert res.particular == (F(0), F(0))
    assert len(res.kernel_basis) == 2


def test_solve_inconsistent():
    res = solve_affine_system([[F(1)], [F(1)]], [F(1), F(2)])
    assert res.kind == "inconsistent"
    assert res.particular is None


def test_solve_unique():
    res = solve_affine_system([[F(2), F(0)], [F(0), F(4)]], [F(6), F(2)])
    assert res.kind == "unique"
    assert res.particular == (F(3), Fraction(1, 2))


def test_rank_invariance_under_permutations_and_row_ops():
    rng = random.Random(3)
    for _ in range(25):
        rows = [[F(rng.randint(-4, 4)) for _ in range(4)] for _ in range(3)]
        base = rank_of_rows(rows)
        perm_rows = rows[:]
        rng.shuffle(perm_rows)
        cols = list(range(4))
        rng.shuffle(cols)
        permuted = [[r[c] for c in cols] for r in perm_rows]
        assert rank_of_rows(permuted) == base
        # unimodular row operation: add an integer multiple of one row
        i, j = rng.sample(range(3), 2)
        modified = [list(r) for r in rows]
        k = rng.randint(-3, 3)
        modified[i] = [a + k * b for a, b in zip(modified[i], modified[j])]
        assert rank_of_rows(modified) == base


def _s_ring_matrix():
    ring = ("s",)
    s = RationalFunction.variable(ring, "s")
    one = RationalFunction.const(ring, 1)
    # rank 2 for generic s, drops to 1 at s = 0
    return [[s, one], [s * s, s]], ring


def test_function_field_rank_and_specializations():
    rows, ring = _s_ring_matrix()
    rows = [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1] + 1]]
    sym_rank = rank_of_rows(rows)
    rng = random.Random(9)
    seen = []
    for _ in range(5):
        while True:
            val = Fraction(rng.randint(-6, 6))
            try:
                spec = [[e.eval_at({"s": val}) for e in row] for row in rows]
                break
            except ZeroDivisionError:
                continue
        r = rank_of_rows(spec)
        assert r <= sym_rank  # semicontinuity
        seen.append(r)
    assert max(seen) == sym_rank


def test_function_field_kernel_is_exact():
    ring = ("s",)
    s = RationalFunction.variable(ring, "s")
    one = RationalFunction.const(ring, 1)
    res = rref_rank_kernel([[s, one, s + 1]])
    assert res.rank == 1
    assert len(res.kernel_basis) == 2
    for v in res.kernel_basis:
        acc = RationalFunction.const(ring, 0)
        for a, b in zip([s, one, s + 1], v):
            acc = acc + a * b
        assert acc == 0


def test_independent_subset_prefers_early_rows():
    rows = [[F(1), F(0)], [F(2), F(0)], [F(0), F(1)]]
    assert independent_subset(rows) == [0, 2]


def test_mixed_fraction_and_function_field_rows():
    ring = ("x", "y")
    x = RationalFunction.variable(ring, "x")
    rows = [[Fraction(1), Fraction(0)], [x, RationalFunction.const(ring, 1)]]
    assert rank_of_rows(rows) == 2
