"""Vector-field algebra on affine charts.

Distributions are given by generator vector fields with rational-function
components.  Generic ranks are ranks over the fraction field of the chart
ring (an exact symbolic computation, not a probabilistic one); pointwise
ranks are exact evaluations at probe points.  Saturation of meromorphic
distributions is never computed: fraction-field ranks equal
saturated-sheaf ranks at generic points, and every FlagReport records
this convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .linalg import independent_subset, poly_lcm, rank_of_rows, rref_rank_kernel
from .scalars import DenominatorZeroError, MultiPoly, RationalFunction

RANK_CONVENTION = "generic ranks are fraction-field ranks; saturation not computed"


class ChartError(ValueError):
    pass


class ProbeError(ValueError):
    """The probe point hits a denominator zero; supply another point."""


class FlagError(RuntimeError):
    """Flag failed to stabilize within the step bound (internal bug)."""


class ClassifyError(ValueError):
    """Input outside the Goursat/Cartan classification domain."""


@dataclass(frozen=True)
class Chart:
    variables: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ChartError(f"chart variables not distinct: {self.variables}")

    @property
    def dim(self) -> int:
        return len(self.variables)

    def __str__(self):
        return " ".join(self.variables)


@dataclass(frozen=True)
class PointQ:
    coordinates: tuple

    def __post_init__(self):
        object.__setattr__(self, "coordinates",
                           tuple(Fraction(c) for c in self.coordinates))

    def assignment(self, chart: Chart) -> dict:
        if len(self.coordinates) != chart.dim:
            raise ChartError("point dimension does not match chart")
        return dict(zip(chart.variables, self.coordinates))

    def __str__(self):
        return " ".join(str(c) for c in self.coordinates)


@dataclass(frozen=True)
class VectorField:
    chart: Chart
    components: tuple

    def __post_init__(self):
        comps = []
        ring = self.chart.variables
        for c in self.components:
            if isinstance(c, RationalFunction):
                if c.ring != ring:
                    raise ChartError("component ring does not match chart")
                comps.append(c)
            elif isinstance(c, MultiPoly):
                if c.ring != ring:
                    raise ChartError("component ring does not match chart")
                comps.append(RationalFunction(c))
            else:
                comps.append(RationalFunction.const(ring, c))
        if len(comps) != self.chart.dim:
            raise ChartError("component count does not match chart dimension")
        object.__setattr__(self, "components", tuple(comps))

    def eval_at(self, pt: PointQ) -> tuple:
        asg = pt.assignment(self.chart)
        try:
            return tuple(c.eval_at(asg) for c in self.components)
        except DenominatorZeroError as exc:
            raise ProbeError(f"probe invalid, supply another point: {exc}") from None

    def is_zero(self) -> bool:
        return all(not c for c in self.components)

    def __str__(self):
        parts = []
        for name, c in zip(self.chart.variables, self.components):
            if not c:
                continue
            if c == 1:
                parts.append(f"d/d{name}")
            else:
                parts.append(f"({c})*d/d{name}")
        return " + ".join(parts) if parts else "0"


def vf_add(v: VectorField, w: VectorField) -> VectorField:
    _same_chart(v, w)
    return VectorField(v.chart, tuple(a + b for a, b in zip(v.components, w.components)))


def vf_scale(v: VectorField, s) -> VectorField:
    return VectorField(v.chart, tuple(c * s for c in v.components))


def _same_chart(v: VectorField, w: VectorField):
    if v.chart != w.chart:
        raise ChartError("vector fields live on different charts")


def lie_bracket(v: VectorField, w: VectorField) -> VectorField:
    """[v, w]_i = sum_j (v_j dw_i/dx_j - w_j dv_i/dx_j), exact."""
    _same_chart(v, w)
    ring = v.chart.variables
    out = []
    for i in range(v.chart.dim):
        acc = RationalFunction.const(ring, 0)
        for j, name in enumerate(ring):
            vj = v.components[j]
            wj = w.components[j]
            if vj:
                acc = acc + vj * w.components[i].diff(name)
            if wj:
                acc = acc - wj * v.components[i].diff(name)
        out.append(acc)
    return VectorField(v.chart, tuple(out))


@dataclass(frozen=True)
class DistributionSpec:
    chart: Chart
    generators: tuple
    name: str = "D"

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.generators:
            raise ChartError("distribution needs at least one generator")
        for g in self.generators:
            if g.chart != self.chart:
                raise ChartError("generator chart mismatch")

    @property
    def dim(self) -> int:
        return self.chart.dim


def _rows(fields: Sequence[VectorField]) -> list:
    return [list(f.components) for f in fields]


def generic_rank(fields: Sequence[VectorField]) -> int:
    if not fields:
        return 0
    return rank_of_rows(_rows(fields))


def point_rank(fields: Sequence[VectorField], pt: PointQ) -> int:
    if not fields:
        return 0
    return rank_of_rows([list(f.eval_at(pt)) for f in fields])


def prune_to_basis(fields: Sequence[VectorField]) -> list:
    """Fraction-field basis as a pivoted subset, earlier fields first."""
    keep = independent_subset(_rows(fields))
    return [fields[i] for i in keep]


def in_span(field_: VectorField, basis: Sequence[VectorField]) -> bool:
    """Exact fraction-field membership of a vector field in a span."""
    if field_.is_zero():
        return True
    if not basis:
        return False
    r = rank_of_rows(_rows(list(basis)))
    return rank_of_rows(_rows(list(basis) + [field_])) == r


# ---------------------------------------------------------------------------
# derived flags

@dataclass(frozen=True)
class FlagStep:
    generators: tuple      # pruned fraction-field basis of this flag member
    generic_rank: int
    point_rank: int


@dataclass(frozen=True)
class FlagReport:
    mode: str              # "strong" (d^i), "weak" (d^(i)) or "vertical"
    chart: Chart
    probe: PointQ
    steps: tuple           # FlagStep for i = 0..stabilized_at
    growth_vector: tuple   # distinct generic ranks
    bracket_generating: bool
    stabilized_at: int
    convention: str = RANK_CONVENTION

    @property
    def point_growth(self) -> tuple:
        return tuple(s.point_rank for s in self.steps)

    @property
    def generic_growth(self) -> tuple:
        return tuple(s.generic_rank for s in self.steps)


def _iterate_flag(mode: str, seed: Sequence[VectorField],
                  bracket_source: Callable[[list], list],
                  max_steps: int, probe: PointQ) -> FlagReport:
    chart = seed[0].chart
    current_all = list(seed)
    basis = prune_to_basis(current_all)
    steps = [FlagStep(tuple(basis), len(basis), point_rank(current_all, probe))]
    for step in range(1, max_steps + 2):
        sources = bracket_source(basis)
        new = []
        for a in sources:
            for b in basis:
                br = lie_bracket(a, b)
                if not br.is_zero():
                    new.append(br)
        candidate = basis + new
        rank = generic_rank(candidate)
        if rank == steps[-1].generic_rank:
            stabilized = step - 1
            growth = tuple(s.generic_rank for s in steps)
            return FlagReport(mode, chart, probe, tuple(steps), growth,
                              growth[-1] == chart.dim, stabilized)
        prank = point_rank(candidate, probe)
        basis = prune_to_basis(candidate)
        steps.append(FlagStep(tuple(basis), rank, prank))
        if rank == chart.dim:
            growth = tuple(s.generic_rank for s in steps)
            return FlagReport(mode, chart, probe, tuple(steps), growth,
                              True, step)
    raise FlagError(f"flag did not stabilize within {max_steps} steps")


def derived_flag(d: DistributionSpec, mode: str = "strong",
                 max_steps: int | None = None,
                 probe: PointQ | None = None) -> FlagReport:
    """Derived flag d^i D (strong: bracket the current member with itself)
    or d^(i) D (weak: bracket only with D), with generic and probe ranks."""
    if mode not in ("strong", "weak"):
        raise ValueError(f"unknown flag mode {mode!r}")
    if probe is None:
        probe = PointQ((0,) * d.chart.dim)
    if max_steps is None:
        max_steps = d.chart.dim + 1
    seed = list(d.generators)
    d_basis = prune_to_basis(seed)
    if mode == "strong":
        source = lambda basis: basis
    else:
        source = lambda basis: d_basis
    return _iterate_flag(mode, seed, source, max_steps, probe)


def growth_vector_at(d: DistributionSpec, pt: PointQ) -> tuple:
    """Pointwise ranks of the strong flag members at the probe."""
    report = derived_flag(d, "strong", probe=pt)
    return report.point_growth


def regularity_check(d: DistributionSpec, pt: PointQ) -> bool:
    """True iff every strong/weak flag member and Ch(D) have probe rank
    equal to generic rank."""
    for mode in ("strong", "weak"):
        rep = derived_flag(d, mode, probe=pt)
        for s in rep.steps:
            if s.point_rank != s.generic_rank:
                return False
    ch_rank, ch_basis_at_pt = cauchy_characteristic_rank(d, pt)
    if ch_rank:
        if rank_of_rows([list(v) for v in ch_basis_at_pt]) != ch_rank:
            return False
    return True


# ---------------------------------------------------------------------------
# Cauchy characteristic and Levi tensor

def _reduce_mod_basis(vec: list, rref_rows, pivots) -> list:
    out = list(vec)
    for row, c in zip(rref_rows, pivots):
        f = out[c]
        if f == 0:
            continue
        out = [a - f * b for a, b in zip(out, row)]
    return out


def cauchy_characteristic_rank(d: DistributionSpec, pt: PointQ):
    """Generic rank of Ch(D) = {v in D : [v, D] in D}, and a basis of the
    generic kernel evaluated at the probe.

    Since [sum c_i g_i, g_j] = sum c_i [g_i, g_j] modulo D for function
    coefficients c_i, membership is a linear condition on the c_i over the
    fraction field.
    """
    basis = prune_to_basis(list(d.generators))
    r = len(basis)
    res = rref_rank_kernel(_rows(basis))
    rref_rows = [list(row) for row in res.rref.entries[:res.rank]]
    pivots = res.pivots

    rows = []
    for j in range(r):
        residuals = []
        for i in range(r):
            br = lie_bracket(basis[i], basis[j])
            residuals.append(_reduce_mod_basis(list(br.components), rref_rows, pivots))
        for coord in range(d.chart.dim):
            if coord in pivots:
                continue
            row = [residuals[i][coord] for i in range(r)]
            if any(x != 0 for x in row):
                rows.append(row)
    if not rows:
        kernel = [tuple(RationalFunction.const(d.chart.variables, 1 if k == i else 0)
                        for k in range(r)) for i in range(r)]
        rank = r
    else:
        kres = rref_rank_kernel(rows)
        kernel = list(kres.kernel_basis)
        rank = len(kernel)

    basis_at_pt = []
    for cvec in kernel:
        fld = VectorField(d.chart, tuple(RationalFunction.const(d.chart.variables, 0)
                                         for _ in range(d.chart.dim)))
        for ci, gi in zip(cvec, basis):
            fld = vf_add(fld, vf_scale(gi, ci))
        # clear denominators so the evaluation is defined off their zeros
        cleared = _clear_field_denominators(fld)
        basis_at_pt.append(cleared.eval_at(pt))
    return rank, tuple(basis_at_pt)


def _clear_field_denominators(v: VectorField) -> VectorField:
    ring = v.chart.variables
    mult = MultiPoly.const(ring, 1)
    for c in v.components:
        if not c.den.is_constant():
            mult = poly_lcm(mult, c.den)
    if mult == 1:
        return v
    return vf_scale(v, RationalFunction(mult))


@dataclass(frozen=True)
class LeviTensor:
    """Pairwise bracket classes in T/D at a point, in the complement basis
    given by the non-pivot coordinate directions."""

    complement: tuple   # chart variable names spanning the complement
    matrix: tuple       # matrix[i][j] = class of [g_i, g_j](pt), a tuple

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in cell) for row in self.matrix for cell in row)


def levi_tensor_at(d: DistributionSpec, pt: PointQ) -> LeviTensor:
    gens = list(d.generators)
    values = [list(g.eval_at(pt)) for g in gens]
    res = rref_rank_kernel(values)
    rref_rows = [list(row) for row in res.rref.entries[:res.rank]]
    pivots = res.pivots
    complement = tuple(d.chart.variables[c] for c in range(d.chart.dim)
                       if c not in pivots)
    comp_idx = [c for c in range(d.chart.dim) if c not in pivots]
    matrix = []
    for i in range(len(gens)):
        row = []
        for j in range(len(gens)):
            br = lie_bracket(gens[i], gens[j]).eval_at(pt)
            reduced = _reduce_mod_basis(list(br), rref_rows, pivots)
            row.append(tuple(reduced[c] for c in comp_idx))
        matrix.append(tuple(row))
    return LeviTensor(complement, tuple(matrix))


# ---------------------------------------------------------------------------
# prolongation and inverse image

def prolong(d: DistributionSpec, fiber_names: Sequence[str] | None = None) -> DistributionSpec:
    """Prolongation on an affine chart of P(D).

    The fiber coordinates parametrize the line g_1 + sum lam_i g_i inside
    D; the new generators are the fiber directions plus that tautological
    line, lifted horizontally.
    """
    basis = prune_to_basis(list(d.generators))
    r = len(basis)
    if r < 1:
        raise ChartError("empty distribution")
    if fiber_names is None:
        fiber_names = []
        for i in range(2, r + 1):
            name = f"lam{i}"
            while name in d.chart.variables or name in fiber_names:
                name = "_" + name
            fiber_names.append(name)
    fiber_names = tuple(fiber_names)
    if len(fiber_names) != r - 1:
        raise ChartError("need one fiber coordinate per extra generator")
    new_chart = Chart(d.chart.variables + fiber_names)
    ring = new_chart.variables

    def lift(f: VectorField) -> list:
        return [c.substitute({}, ring) for c in f.components] + \
            [RationalFunction.const(ring, 0)] * (r - 1)

    gens = []
    taut = lift(basis[0])
    for k, name in enumerate(fiber_names):
        lam = RationalFunction.variable(ring, name)
        shifted = lift(basis[k + 1])
        taut = [a + lam * b for a, b in zip(taut, shifted)]
    gens.append(VectorField(new_chart, tuple(taut)))
    for k, name in enumerate(fiber_names):
        comps = [RationalFunction.const(ring, 0)] * new_chart.dim
        comps[d.chart.dim + k] = RationalFunction.const(ring, 1)
        gens.append(VectorField(new_chart, tuple(comps)))
    return DistributionSpec(new_chart, tuple(gens), name=f"pr({d.name})")


def inverse_image_under_projection(d: DistributionSpec,
                                   fiber_names: Sequence[str]) -> DistributionSpec:
    """pi^{-1} D for the coordinate projection that forgets new fiber
    variables: generators lifted horizontally plus all fiber directions."""
    fiber_names = tuple(fiber_names)
    for name in fiber_names:
        if name in d.chart.variables:
            raise ChartError(f"fiber name {name!r} collides with the chart")
    new_chart = Chart(d.chart.variables + fiber_names)
    ring = new_chart.variables
    gens = []
    for g in d.generators:
        comps = [c.substitute({}, ring) for c in g.components]
        comps += [RationalFunction.const(ring, 0)] * len(fiber_names)
        gens.append(VectorField(new_chart, tuple(comps)))
    for k in range(len(fiber_names)):
        comps = [RationalFunction.const(ring, 0)] * new_chart.dim
        comps[d.chart.dim + k] = RationalFunction.const(ring, 1)
        gens.append(VectorField(new_chart, tuple(comps)))
    return DistributionSpec(new_chart, tuple(gens), name=f"inv({d.name})")


# ---------------------------------------------------------------------------
# classification

GOURSAT = "Goursat"
CARTAN = "Cartan"
NOT_BRACKET_GENERATING = "NotBracketGenerating"
IRREGULAR = "Irregular"


def classify_rank2(d: DistributionSpec, pt: PointQ) -> str:
    """Goursat / Cartan / NotBracketGenerating / Irregular for a rank-2
    distribution, from the strong-flag growth vector."""
    if point_rank(list(d.generators), pt) != 2:
        raise ClassifyError("distribution does not have rank 2 at the probe")
    if not regularity_check(d, pt):
        return IRREGULAR
    rep = derived_flag(d, "strong", probe=pt)
    growth = rep.growth_vector
    n = d.chart.dim
    if growth[-1] < n:
        return NOT_BRACKET_GENERATING
    if growth == tuple(range(2, n + 1)):
        return GOURSAT
    if n == 5 and growth == (2, 3, 5):
        return CARTAN
    raise ClassifyError(
        f"rank-2 growth {growth} in dimension {n} is neither Goursat nor Cartan")


# ---------------------------------------------------------------------------
# annihilator coframe and the null field of a (2,3,5) distribution

def annihilator_coframe(d: DistributionSpec, pt: PointQ) -> tuple:
    """Exact 1-forms annihilating every generator, with denominators
    cleared; errors if the generator rank jumps at the probe."""
    gens = list(d.generators)
    g_rank = generic_rank(gens)
    if point_rank(gens, pt) != g_rank:
        raise ProbeError("rank jump at the probe; annihilator undefined there")
    res = rref_rank_kernel(_rows(gens))
    forms = []
    ring = d.chart.variables
    for vec in res.kernel_basis:
        form = [v if isinstance(v, RationalFunction) else
                RationalFunction.const(ring, v) for v in vec]
        mult = MultiPoly.const(ring, 1)
        for c in form:
            if not c.den.is_constant():
                mult = poly_lcm(mult, c.den)
        if mult != 1:
            form = [c * RationalFunction(mult) for c in form]
        forms.append(tuple(form))
    if __debug__:
        for form in forms:
            for g in gens:
                acc = RationalFunction.const(ring, 0)
                for a, b in zip(form, g.components):
                    acc = acc + a * b
                assert acc == 0, "annihilator verification failed"
    return tuple(forms)


@dataclass(frozen=True)
class ZelenkoRecord:
    """Exact identity checks for the null field on the annihilator bundle
    W of dD: the tautological form vanishes on it, it is transverse to the
    fibers of W -> Y, and it projects into D."""

    theta_vanishes: bool
    transverse_to_fibers: bool
    projects_into_d: bool
    null_space_dim: int

    def all_pass(self) -> bool:
        return (self.theta_vanishes and self.transverse_to_fibers
                and self.projects_into_d and self.null_space_dim == 1)


@dataclass(frozen=True)
class ZelenkoResult:
    chart: Chart           # (base variables, w1, w2)
    null_field: VectorField
    record: ZelenkoRecord
    annihilator: tuple     # the two 1-forms spanning W


def zelenko_null_field(d: DistributionSpec, pt: PointQ,
                       fiber_values: tuple = (1, 1)) -> ZelenkoResult:
    """Null line field of sigma = d(theta)|_W for a Cartan distribution.

    W is the rank-2 annihilator of dD inside T*Y; on the chart
    (x, w1, w2) of its total space the tautological 1-form is
    theta = sum_i (w1 a_i + w2 b_i) dx_i for the coframe (a, b).  The
     2-form sigma has a 1-dimensional null space away from a bad locus
    (checked at the probe extended by ``fiber_values``), and the null
    field satisfies the three exact identities in the record.
    """
    verdict = classify_rank2(d, pt)
    if verdict != CARTAN:
        raise ClassifyError(f"null field needs a Cartan distribution, got {verdict}")
    flag = derived_flag(d, "strong", probe=pt)
    dd_basis = list(flag.steps[1].generators)
    dd = DistributionSpec(d.chart, tuple(dd_basis), name="dD")
    alpha, beta = annihilator_coframe(dd, pt)

    w_names = []
    for base in ("w1", "w2"):
        name = base
        while name in d.chart.variables or name in w_names:
            name = "_" + name
        w_names.append(name)
    chart = Chart(d.chart.variables + tuple(w_names))
    ring = chart.variables
    n = d.chart.dim
    w1 = RationalFunction.variable(ring, w_names[0])
    w2 = RationalFunction.variable(ring, w_names[1])
    alpha = [a.substitute({}, ring) for a in alpha]
    beta = [b.substitute({}, ring) for b in beta]
    zeta = [w1 * a + w2 * b for a, b in zip(alpha, beta)]

    # sigma = sum_i d(zeta_i) ^ dx_i on the frame (x_1..x_n, w1, w2)
    dim = chart.dim
    zero = RationalFunction.const(ring, 0)
    sigma = [[zero for _ in range(dim)] for _ in range(dim)]
    for k in range(n):
        for i in range(n):
            sigma[k][i] = zeta[i].diff(ring[k]) - zeta[k].diff(ring[i])
    for a in (n, n + 1):
        for i in range(n):
            sigma[a][i] = zeta[i].diff(ring[a])
            sigma[i][a] = -sigma[a][i]
    res = rref_rank_kernel(sigma)
    null_dim = dim - res.rank
    if null_dim != 1:
        raise ClassifyError(f"null space of sigma has dimension {null_dim}, expected 1")

    ext_pt = PointQ(pt.coordinates + tuple(Fraction(v) for v in fiber_values))
    spec_rows = []
    for row in sigma:
        try:
            spec_rows.append([e.eval_at(ext_pt.assignment(chart)) for e in row])
        except DenominatorZeroError:
            raise ProbeError("probe invalid for sigma, supply another point") from None
    if rank_of_rows(spec_rows) != dim - 1:
        raise ProbeError("sigma degenerates at the probe (bad locus), "
                         "supply another fiber/base point")

    null_vec = res.kernel_basis[0]
    null = _clear_field_denominators(VectorField(chart, tuple(null_vec)))

    theta_val = RationalFunction.const(ring, 0)
    for i in range(n):
        theta_val = theta_val + zeta[i] * null.components[i]
    theta_ok = theta_val == 0

    transverse = any(null.components[i] for i in range(n))

    gens_lifted = []
    for g in d.generators:
        gens_lifted.append([c.substitute({}, ring) for c in g.components])
    proj = [null.components[i] for i in range(n)]
    r0 = rank_of_rows(gens_lifted)
    membership = rank_of_rows(gens_lifted + [proj]) == r0

    record = ZelenkoRecord(theta_ok, transverse, membership, null_dim)
    return ZelenkoResult(chart, null, record, (tuple(alpha), tuple(beta)))
