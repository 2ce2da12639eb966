"""Canonical jet-space charts and their rank-2 systems; the dictionary
between ODEs and distributions.

The order-k jet chart is (t, u, u1, ..., uk) with the canonical system
spanned by d/du_k and the total-derivative field
d/dt + sum u_{i+1} d/du_i.  An ODE u^(n) = F(t, u, ..., u_{n-1}) is a
section over the order-(n-1) chart and adds F to the top slot of the
total derivative.
"""

from __future__ import annotations

from dataclasses import dataclass

from .distributions import Chart, DistributionSpec, VectorField
from .scalars import MultiPoly, RationalFunction, ScalarError


class JetError(ValueError):
    pass


def jet_variables(k: int) -> tuple:
    if k < 0:
        raise JetError("jet order must be >= 0")
    return ("t", "u") + tuple(f"u{i}" for i in range(1, k + 1))


@dataclass(frozen=True)
class JetChart:
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise JetError("jet order must be >= 0")

    @property
    def chart(self) -> Chart:
        return Chart(jet_variables(self.order))

    @property
    def dim(self) -> int:
        return self.order + 2


@dataclass(frozen=True)
class OdeSpec:
    """u^(n) = F with F a polynomial or rational function on the
    order-(n-1) jet chart."""

    order: int
    rhs: object  # MultiPoly or RationalFunction over jet_variables(order - 1)

    def __post_init__(self):
        if self.order < 2:
            raise JetError("ODE order must be >= 2")
        ring = jet_variables(self.order - 1)
        rhs = self.rhs
        if isinstance(rhs, MultiPoly):
            rhs = RationalFunction(rhs)
        if not isinstance(rhs, RationalFunction):
            raise JetError("rhs must be a polynomial or rational function")
        if rhs.ring != ring:
            raise JetError(f"rhs must live on the ring {ring}")
        object.__setattr__(self, "rhs", rhs)


def build_jet_distribution(k: int) -> DistributionSpec:
    """The canonical rank-2 system on the order-k jet chart."""
    if k < 1:
        raise JetError("jet system needs order >= 1")
    chart = JetChart(k).chart
    ring = chart.variables
    zero = RationalFunction.const(ring, 0)
    one = RationalFunction.const(ring, 1)
    top = [zero] * chart.dim
    top[-1] = one
    vertical = VectorField(chart, tuple(top))
    comps = [zero] * chart.dim
    comps[0] = one
    for i in range(1, chart.dim - 1):
        comps[i] = RationalFunction.variable(ring, ring[i + 1])
    total = VectorField(chart, tuple(comps))
    return DistributionSpec(chart, (vertical, total), name=f"J{k}")


def ode_to_distribution(o: OdeSpec) -> DistributionSpec:
    """The rank-2 system of an order-n ODE on the order-(n-1) chart."""
    chart = JetChart(o.order - 1).chart
    ring = chart.variables
    zero = RationalFunction.const(ring, 0)
    one = RationalFunction.const(ring, 1)
    top = [zero] * chart.dim
    top[-1] = one
    vertical = VectorField(chart, tuple(top))
    comps = [zero] * chart.dim
    comps[0] = one
    for i in range(1, chart.dim - 1):
        comps[i] = RationalFunction.variable(ring, ring[i + 1])
    comps[-1] = o.rhs
    total = VectorField(chart, tuple(comps))
    return DistributionSpec(chart, (vertical, total), name=f"ODE{o.order}")


@dataclass(frozen=True)
class OdeFormCheck:
    """Cubic-in-top-derivative admissibility: an order-n equation belongs
    to an unbendable family exactly when F is at most cubic in u_{n-1};
    the four coefficient functions are free of u_{n-1}."""

    admissible: bool
    coefficients: tuple | None  # (a0, a1, a2, a3) when admissible
    witness: object | None      # offending term otherwise


def check_goursat_ode_form(o: OdeSpec) -> OdeFormCheck:
    top = jet_variables(o.order - 1)[-1]
    rhs = o.rhs
    if rhs.den.degree_in(top) > 0:
        raise JetError(f"rhs must be polynomial in {top}")
    num = rhs.num
    buckets = num.collect(top)
    max_deg = max(buckets) if buckets else 0
    if max_deg > 3:
        return OdeFormCheck(False, None, (max_deg, buckets[max_deg]))
    ring = tuple(v for v in rhs.ring if v != top)
    den = rhs.den.restrict_ring(ring)
    coeffs = []
    for k in range(4):
        numk = buckets.get(k)
        if numk is None:
            coeffs.append(RationalFunction.const(ring, 0))
        else:
            coeffs.append(RationalFunction(numk, den))
    return OdeFormCheck(True, tuple(coeffs), None)
