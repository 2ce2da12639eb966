"""Universal-family distributions on explicit charts.

A family chart carries two distinguished pieces: the vertical line field
V along the curve parameter and the tautological field F along the curve
directions.  The flag T^0 = V + F, T^{k+1} = [V, T^k] + T^k brackets with
V only (unlike the weak derived flag, which brackets with all of T^0).

The blowup family of a parametrized curve Z = {zeta(s)} lives on the
chart (s, x_1..x_n) with V = d/ds and F = sum zeta_i(s) d/dx_i; bracketing
with V differentiates zeta, so the flag ranks march through the osculating
flag of Z.  The Cartan-side counterpart comes from the null field on the
projectivized annihilator bundle of a (2,3,5) distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .distributions import (
    Chart,
    DistributionSpec,
    FlagReport,
    PointQ,
    VectorField,
    _iterate_flag,
    derived_flag,
    generic_rank,
    in_span,
    lie_bracket,
    prune_to_basis,
    zelenko_null_field,
)
from .scalars import MultiPoly, RationalFunction


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyChart:
    chart: Chart
    V_gens: tuple
    F_gens: tuple
    name: str = "family"

    def __post_init__(self):
        for g in self.V_gens + self.F_gens:
            if g.chart != self.chart:
                raise FamilyError("generator chart mismatch")
        total = list(self.V_gens) + list(self.F_gens)
        if generic_rank(total) != len(total):
            raise FamilyError("V and F generators are not independent "
                              "at the generic point")

    @property
    def t0(self) -> DistributionSpec:
        return DistributionSpec(self.chart, self.V_gens + self.F_gens,
                                name=self.name)


def blowup_family_chart(zeta) -> FamilyChart:
    """Family chart of the lines through the affine curve s -> zeta(s):
    chart (s, x_1..x_n), V = d/ds, F = sum zeta_i(s) d/dx_i."""
    zeta = list(zeta)
    if not zeta:
        raise FamilyError("empty curve parametrization")
    for z in zeta:
        if not isinstance(z, MultiPoly) or z.ring != ("s",):
            raise FamilyError("zeta components must be polynomials in s")
    if all(z.diff("s").is_zero() for z in zeta):
        raise FamilyError("zeta'(s) vanishes identically (not an immersed curve)")
    n = len(zeta)
    names = ("s",) + tuple(f"x{i}" for i in range(1, n + 1))
    chart = Chart(names)
    ring = names
    zero = RationalFunction.const(ring, 0)
    one = RationalFunction.const(ring, 1)
    v = VectorField(chart, (one,) + (zero,) * n)
    comps = [zero]
    for z in zeta:
        comps.append(RationalFunction(z.restrict_ring(ring)))
    f = VectorField(chart, tuple(comps))
    return FamilyChart(chart, (v,), (f,), name="blowup")


def family_flag(fc: FamilyChart, max_k: int | None = None,
                probe: PointQ | None = None) -> FlagReport:
    """Ranks of T^0 subset T^1 subset ..., bracketing with V only."""
    if probe is None:
        probe = PointQ((0,) * fc.chart.dim)
    if max_k is None:
        max_k = fc.chart.dim + 1
    v_basis = prune_to_basis(list(fc.V_gens))
    seed = list(fc.V_gens) + list(fc.F_gens)
    return _iterate_flag("vertical", seed, lambda basis: v_basis, max_k, probe)


def _flag_basis_at(fc: FamilyChart, k: int, probe: PointQ) -> list:
    rep = family_flag(fc, probe=probe)
    idx = min(k, rep.stabilized_at)
    return list(rep.steps[idx].generators)


def check_F_invariance(fc: FamilyChart, k: int, probe: PointQ | None = None) -> bool:
    """Exact membership [F, T^k] subset T^k over the fraction field."""
    if probe is None:
        probe = PointQ((0,) * fc.chart.dim)
    basis = _flag_basis_at(fc, k, probe)
    for f in fc.F_gens:
        for g in basis:
            if not in_span(lie_bracket(f, g), basis):
                return False
    return True


def check_T2_identity(fc: FamilyChart, probe: PointQ | None = None) -> bool:
    """The second vertical flag member, the second strong derived member
    and the second weak derived member of T^0 span the same sheaf
    generically (equal ranks and mutual containment)."""
    if probe is None:
        probe = PointQ((0,) * fc.chart.dim)
    t2 = _flag_basis_at(fc, 2, probe)
    strong = derived_flag(fc.t0, "strong", probe=probe)
    weak = derived_flag(fc.t0, "weak", probe=probe)
    s2 = list(strong.steps[min(2, strong.stabilized_at)].generators)
    w2 = list(weak.steps[min(2, weak.stabilized_at)].generators)
    r = generic_rank(t2)
    if generic_rank(s2) != r or generic_rank(w2) != r:
        return False
    return (generic_rank(t2 + s2) == r and generic_rank(t2 + w2) == r
            and generic_rank(s2 + w2) == r)


def zelenko_family_chart(d: DistributionSpec, pt: PointQ) -> FamilyChart:
    """Family chart of a Cartan distribution's canonical curve family:
    the null field projected to the affine chart w1 = 1 of the
    projectivized annihilator bundle, with the fiber direction as F."""
    res = zelenko_null_field(d, pt)
    wchart = res.chart
    w1, w2 = wchart.variables[-2], wchart.variables[-1]
    base = wchart.variables[:-2]
    w = "w"
    while w in base:
        w = "_" + w
    names = base + (w,)
    chart = Chart(names)
    sub = {w1: MultiPoly.const(names, 1), w2: MultiPoly.variable(names, w)}

    def push(c: RationalFunction) -> RationalFunction:
        return c.substitute(sub, names)

    null = res.null_field
    n = len(base)
    comps = [push(null.components[i]) for i in range(n)]
    fiber = push(null.components[n + 1]) - \
        RationalFunction.variable(names, w) * push(null.components[n])
    comps.append(fiber)
    vflat = VectorField(chart, tuple(comps))
    zero = RationalFunction.const(names, 0)
    one = RationalFunction.const(names, 1)
    fflat = VectorField(chart, tuple([zero] * n + [one]))
    return FamilyChart(chart, (vflat,), (fflat,), name="zelenko")
