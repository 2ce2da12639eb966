"""Curve-germ machinery: Zariski tangent spaces, order-by-order branch
expansion of a smooth one-dimensional solution germ, osculating flags and
fundamental-form nonvanishing.

A germ is a graph over one transverse coordinate t: every other
coordinate is an exact truncated Taylor series in t, solved one order at a
time from the defining equations.  Each order is an inhomogeneous linear
solve against the Jacobian at the base point; the solved germ is verified
by substitution, so a successful expansion certifies its own residual.

Everything works verbatim over Q or over the function field Q(s): the
defining polynomials may carry RationalFunction coefficients in a base
parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import rank_of_rows, rref_rank_kernel, solve_affine_system
from .scalars import MultiPoly, RationalFunction, TruncatedSeries, series_substitute


class GermError(ValueError):
    pass


class PointNotOnSchemeError(GermError):
    pass


class NotSmoothCurveGermError(GermError):
    pass


class UndecidedError(RuntimeError):
    """Linear nondegeneracy undecided at the order cap."""


@dataclass(frozen=True)
class CurveGerm:
    """Truncated parametrization of a curve germ through ``base``.

    The transverse coordinate's own expansion is exactly t; the germ is
    immersed (order-1 coefficient nonzero).  ``system`` optionally records
    the defining polynomials so the expansion can be deepened later.
    """

    chart: tuple
    base: tuple
    transverse: str
    series: TruncatedSeries
    system: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "chart", tuple(self.chart))
        object.__setattr__(self, "base", tuple(self.base))
        if self.transverse not in self.chart:
            raise GermError(f"transverse {self.transverse!r} not a chart variable")
        if self.series.dimension != len(self.chart):
            raise GermError("series dimension does not match chart")
        tau = self.chart.index(self.transverse)
        c1 = self.series.coeffs[0]
        if all(x == 0 for x in c1):
            raise GermError("germ is not immersed (vanishing first coefficient)")
        if c1[tau] != 1 or any(v[tau] != 0 for v in self.series.coeffs[1:]):
            raise GermError("transverse coordinate must expand as exactly t")

    @property
    def order(self) -> int:
        return self.series.order

    def coefficient_vectors(self) -> tuple:
        return self.series.coeffs


@dataclass(frozen=True)
class OsculatingFlag:
    """Ranks of the span of the first k Taylor coefficient vectors.

    The k-th fundamental form of the germ is nonzero at the base point
    exactly when ranks[k-1] = ranks[k-2] + 1 (1-indexed orders)."""

    vectors: tuple
    ranks: tuple

    def ff_nonzero(self, k: int) -> bool:
        if k < 1 or k > len(self.ranks):
            raise GermError(f"no order-{k} data in this flag")
        if k == 1:
            return self.ranks[0] == 1
        return self.ranks[k - 1] == self.ranks[k - 2] + 1


def zariski_tangent(system: Sequence[MultiPoly], pt: Sequence) -> tuple:
    """(dimension, kernel basis) of the Jacobian at a point of the scheme."""
    system = list(system)
    if not system:
        raise GermError("empty system")
    ring = system[0].ring
    pt = tuple(pt)
    asg = dict(zip(ring, pt))
    for g in system:
        if g.eval_at(asg) != 0:
            raise PointNotOnSchemeError(f"point not on scheme: {g} != 0 there")
    jac = [[g.diff(v).eval_at(asg) for v in ring] for g in system]
    res = rref_rank_kernel(jac)
    return len(res.kernel_basis), res.kernel_basis


def _select_transverse(ring, kernel_vec) -> str:
    """Coordinate of the largest absolute kernel entry over Q (ties by
    variable order); over a function field, the first nonzero entry."""
    best = None
    for name, val in zip(ring, kernel_vec):
        if val == 0:
            continue
        if isinstance(val, Fraction):
            mag = abs(val)
            if best is None or mag > best[1]:
                best = (name, mag)
        else:
            return name
    if best is None:
        raise NotSmoothCurveGermError("zero kernel vector")
    return best[0]


def branch_expand(system: Sequence[MultiPoly], pt: Sequence,
                  transverse: str | None = None, order: int = 4) -> CurveGerm:
    """Expand the unique smooth branch of a 1-dimensional scheme germ.

    Requires tangent dimension 1 with the kernel not orthogonal to the
    transverse direction.  Coefficients are determined order by order by
    exact linear solves; the full residual is rechecked by substitution.
    """
    system = list(system)
    ring = system[0].ring
    n = len(ring)
    pt = tuple(pt)
    dim, kernel = zariski_tangent(system, pt)
    if dim != 1:
        raise NotSmoothCurveGermError(
            f"not a smooth curve germ: tangent dimension {dim}")
    kvec = kernel[0]
    if transverse is None:
        transverse = _select_transverse(ring, kvec)
    tau = ring.index(transverse)
    if kvec[tau] == 0:
        raise NotSmoothCurveGermError(
            f"transverse direction {transverse!r} not in the tangent line")
    scale = kvec[tau]
    c1 = tuple(v / scale for v in kvec)

    asg = dict(zip(ring, pt))
    jac_cols = [i for i in range(n) if i != tau]
    jac = [[g.diff(ring[i]).eval_at(asg) for i in jac_cols] for g in system]

    coeffs = [list(c1)]
    zero = c1[tau] - c1[tau]  # additive zero of the scalar field in play
    for k in range(2, order + 1):
        coeffs.append([zero] * n)
        germ = TruncatedSeries("t", k, tuple(tuple(v) for v in coeffs))
        rhs = []
        for g in system:
            vals = series_substitute(g, germ, pt)
            rhs.append(-vals[k])
        sol = solve_affine_system(jac, rhs)
        if sol.kind == "inconsistent":
            raise NotSmoothCurveGermError(
                f"no formal branch at order {k} (check smoothness)")
        if sol.kind != "unique":
            raise NotSmoothCurveGermError(
                f"underdetermined branch at order {k}: Jacobian lost column rank")
        for idx, val in zip(jac_cols, sol.particular):
            coeffs[-1][idx] = val

    series = TruncatedSeries("t", order, tuple(tuple(v) for v in coeffs))
    germ = CurveGerm(ring, pt, transverse, series, tuple(system))
    if __debug__:
        for g in system:
            vals = series_substitute(g, series, pt)
            assert all(v == 0 for v in vals[: order + 1]), "branch residual nonzero"
    return germ


def osculating_flag(germ: CurveGerm) -> OsculatingFlag:
    if germ.order < 2:
        raise GermError("flag needs a germ of order >= 2")
    vectors = germ.coefficient_vectors()
    return OsculatingFlag(vectors, coefficient_flag_ranks(vectors))


def coefficient_flag_ranks(vectors: Sequence) -> tuple:
    """ranks[k-1] = rank of the matrix with rows c_1..c_k."""
    ranks = []
    rows: list = []
    for v in vectors:
        rows.append(list(v))
        ranks.append(rank_of_rows(rows))
    return tuple(ranks)


def linear_nondegenerate(germ: CurveGerm, ambient_projective_dim: int) -> bool:
    """True iff the osculating ranks reach the ambient projective
    dimension, deepening the expansion on demand up to the cap
    ambient + 2 when the defining system is available."""
    target = ambient_projective_dim
    ranks = coefficient_flag_ranks(germ.coefficient_vectors())
    if ranks and max(ranks) >= target:
        return True
    cap = ambient_projective_dim + 2
    if germ.system is not None and germ.order < cap:
        deeper = branch_expand(list(germ.system), germ.base, germ.transverse, cap)
        ranks = coefficient_flag_ranks(deeper.coefficient_vectors())
        if max(ranks) >= target:
            return True
        raise UndecidedError(f"undecided at order {cap}")
    if germ.system is not None:
        raise UndecidedError(f"undecided at order {germ.order}")
    return False
