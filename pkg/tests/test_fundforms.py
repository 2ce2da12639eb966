import random
from fractions import Fraction

import pytest

from urc.fundforms import (
    CurveGerm,
    NotSmoothCurveGermError,
    PointNotOnSchemeError,
    UndecidedError,
    branch_expand,
    coefficient_flag_ranks,
    linear_nondegenerate,
    osculating_flag,
    zariski_tangent,
)
from urc.parsing import parse_expression
from urc.scalars import MultiPoly, TruncatedSeries, compose_series, series_substitute

from quartic_fixture import ABCD_AT_P, ABCD_AT_Q, G_AT_P, G_AT_Q, Z_RING, parse_g


ORIGIN5 = tuple(Fraction(0) for _ in Z_RING)


def p_side_system():
    return [parse_g(t) for t in G_AT_P]


def q_side_system():
    return [parse_g(t) for t in G_AT_Q]


# ---------------------------------------------------------------------------
# tangent spaces

def test_tangent_p_side_is_last_coordinate_line():
    dim, kernel = zariski_tangent(p_side_system(), ORIGIN5)
    assert dim == 1
    assert kernel[0] == (0, 0, 0, 0, 1)


def test_tangent_q_side_is_last_coordinate_line():
    dim, kernel = zariski_tangent(q_side_system(), ORIGIN5)
    assert dim == 1
    assert kernel[0] == (0, 0, 0, 0, 1)


def test_tangent_parabola():
    ring = ("z2", "z3")
    sys_ = [parse_expression("z2 - z3^2", ring)]
    dim, kernel = zariski_tangent(sys_, (Fraction(0), Fraction(0)))
    assert dim == 1
    assert kernel[0] == (0, 1)


def test_tangent_requires_point_on_scheme():
    ring = ("z2", "z3")
    sys_ = [parse_expression("z2 - 1", ring)]
    with pytest.raises(PointNotOnSchemeError):
        zariski_tangent(sys_, (Fraction(0), Fraction(0)))


# ---------------------------------------------------------------------------
# branch expansion: the two golden germs

def test_branch_p_side_coefficients():
    germ = branch_expand(p_side_system(), ORIGIN5, "z6", 4)
    expected = tuple(tuple(Fraction(c) for c in v) for v in ABCD_AT_P)
    assert germ.coefficient_vectors() == expected


def test_branch_q_side_coefficients_and_collapse():
    germ = branch_expand(q_side_system(), ORIGIN5, "z6", 4)
    expected = tuple(tuple(Fraction(c) for c in v) for v in ABCD_AT_Q)
    assert germ.coefficient_vectors() == expected
    a, b, c, d = germ.coefficient_vectors()
    assert d == tuple(2 * x for x in b)


def test_branch_transverse_autoselection():
    germ = branch_expand(p_side_system(), ORIGIN5, order=3)
    assert germ.transverse == "z6"


def test_branch_parabola_exact():
    ring = ("z2", "z3")
    sys_ = [parse_expression("z2 - z3^2", ring)]
    germ = branch_expand(sys_, (Fraction(0), Fraction(0)), "z3", 3)
    assert germ.coefficient_vectors() == ((Fraction(0), Fraction(1)),
                                          (Fraction(1), Fraction(0)),
                                          (Fraction(0), Fraction(0)))


def test_branch_rejects_singular_germ():
    ring = ("z2", "z3")
    sys_ = [parse_expression("z2^2 - z3^2", ring)]
    with pytest.raises(NotSmoothCurveGermError):
        branch_expand(sys_, (Fraction(0), Fraction(0)), "z3", 3)


def test_branch_residual_is_the_oracle():
    # substituting the germ back into every equation is the independent
    # check; do it explicitly here for both published germs
    for system in (p_side_system(), q_side_system()):
        germ = branch_expand(system, ORIGIN5, "z6", 4)
        for g in system:
            vals = series_substitute(g, germ.series, ORIGIN5)
            assert all(v == 0 for v in vals[:5])


# ---------------------------------------------------------------------------
# osculating flags

def test_flag_p_side_all_forms_nonzero():
    germ = branch_expand(p_side_system(), ORIGIN5, "z6", 4)
    flag = osculating_flag(germ)
    assert flag.ranks == (1, 2, 3, 4)
    assert flag.ff_nonzero(2) and flag.ff_nonzero(3) and flag.ff_nonzero(4)


def test_flag_q_side_fourth_form_vanishes():
    germ = branch_expand(q_side_system(), ORIGIN5, "z6", 4)
    flag = osculating_flag(germ)
    assert flag.ranks == (1, 2, 3, 3)
    assert flag.ff_nonzero(2) and flag.ff_nonzero(3)
    assert not flag.ff_nonzero(4)


def test_flag_rational_normal_curve():
    vectors = []
    for k in range(1, 5):
        vectors.append(tuple(Fraction(1) if i == k - 1 else Fraction(0)
                             for i in range(4)))
    assert coefficient_flag_ranks(vectors) == (1, 2, 3, 4)


def test_flag_increments_are_zero_or_one():
    rng = random.Random(41)
    for _ in range(20):
        vectors = [tuple(Fraction(rng.randint(-2, 2)) for _ in range(4))
                   for _ in range(5)]
        if all(x == 0 for x in vectors[0]):
            vectors[0] = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
        ranks = coefficient_flag_ranks(vectors)
        assert all(b - a in (0, 1) for a, b in zip(ranks, ranks[1:]))


# ---------------------------------------------------------------------------
# invariance properties

def _germ_vectors(system):
    return branch_expand(system, ORIGIN5, "z6", 4).coefficient_vectors()


def test_reparametrization_leaves_ranks_invariant():
    rng = random.Random(43)
    for system in (p_side_system(), q_side_system()):
        vectors = _germ_vectors(system)
        base_ranks = coefficient_flag_ranks(vectors)
        for _ in range(10):
            lam = Fraction(rng.randint(-3, 3))
            inner = [Fraction(1), lam, Fraction(0), Fraction(0)]
            rep = compose_series(vectors, inner, 4)
            assert coefficient_flag_ranks(rep) == base_ranks


def test_linear_chart_change_leaves_ranks_invariant():
    rng = random.Random(47)
    for system in (p_side_system(), q_side_system()):
        vectors = _germ_vectors(system)
        base_ranks = coefficient_flag_ranks(vectors)
        for _ in range(10):
            while True:
                mat = [[Fraction(rng.randint(-2, 2)) for _ in range(5)]
                       for _ in range(5)]
                from urc.linalg import rank_of_rows
                if rank_of_rows(mat) == 5:
                    break
            moved = [tuple(sum(row[i] * v[i] for i in range(5)) for row in mat)
                     for v in vectors]
            assert coefficient_flag_ranks(moved) == base_ranks


# ---------------------------------------------------------------------------
# linear nondegeneracy

def test_p_side_nondegenerate_in_tangent_hyperplane():
    germ = branch_expand(p_side_system(), ORIGIN5, "z6", 4)
    assert linear_nondegenerate(germ, 4) is True


def test_planar_series_is_degenerate():
    coeffs = ((Fraction(0), Fraction(0), Fraction(1)),
              (Fraction(1), Fraction(0), Fraction(0)),
              (Fraction(0), Fraction(0), Fraction(0)))
    series = TruncatedSeries("t", 3, coeffs)
    germ = CurveGerm(("x", "y", "t0"), (Fraction(0),) * 3, "t0", series)
    assert linear_nondegenerate(germ, 3) is False


def test_rational_normal_quartic_nondegenerate():
    ring = ("w", "x", "y", "z")
    sys_ = [parse_expression("x - w^2", ring),
            parse_expression("y - w^3", ring),
            parse_expression("z - w^4", ring)]
    origin = tuple(Fraction(0) for _ in ring)
    germ = branch_expand(sys_, origin, "w", 2)
    # order 2 is not enough; the stored system lets the check deepen it
    assert linear_nondegenerate(germ, 4) is True


def test_q_side_undecided_status_when_capped():
    # the Q-side germ never reaches rank 5 in its 5-dim ambient chart
    germ = branch_expand(q_side_system(), ORIGIN5, "z6", 4)
    with pytest.raises(UndecidedError):
        linear_nondegenerate(germ, 5)
