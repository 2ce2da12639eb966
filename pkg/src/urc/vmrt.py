"""Lines on projective hypersurfaces and their VMRT.

For a point x of a line contained in a hypersurface {f = 0}, projecting
from x identifies the cone of lines on the hypersurface through x with
the zero scheme of the coefficient forms of f(x + lam*y) in lam.  This
module computes those defining equations, the affine curve germ of the
VMRT at the line's direction, the normal-bundle splitting type of the
line, fundamental-form profiles at rational and symbolic points of the
line, and the Goursat/Cartan verdict for the family of lines.

Coordinates are always normalized first: an explicit rational change of
coordinates moves the given line to {x_2 = ... = x_n = 0}, and points of
the line are parametrized as [1 : s : 0 : ... : 0] plus the single extra
chart point [0 : 1 : 0 : ... : 0] ("infinity").  The symbolic pipeline
runs the whole computation over Q(s) at once.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .fundforms import (
    NotSmoothCurveGermError,
    branch_expand,
    coefficient_flag_ranks,
    zariski_tangent,
)
from .linalg import rank_of_rows, rref_rank_kernel, solve_affine_system
from .probes import ProbeSampler
from .scalars import (
    IdenticallySingularError,
    poly_exact_div,
    MultiPoly,
    RationalFunction,
    ScalarField,
    binary_form_common_zeros,
    poly_gcd,
    rational_roots,
)

MAX_DEGREE = 6
MAX_AMBIENT = 8

GOURSAT = "Goursat"
CARTAN = "Cartan"
NOT_APPLICABLE = "NotApplicable"
INCONCLUSIVE = "Inconclusive"


class VmrtError(ValueError):
    pass


class PipelineError(RuntimeError):
    """An internal consistency identity failed; indicates a bug."""


@dataclass(frozen=True)
class Hypersurface:
    ambient_dim: int
    degree: int
    poly: MultiPoly

    def __post_init__(self):
        if len(self.poly.ring) != self.ambient_dim + 1:
            raise VmrtError("ring size must be ambient dimension + 1")
        if self.poly.is_zero():
            raise VmrtError("zero polynomial")
        if not self.poly.is_homogeneous() or self.poly.total_degree() != self.degree:
            raise VmrtError(f"polynomial is not homogeneous of degree {self.degree}")
        if self.degree > MAX_DEGREE:
            raise VmrtError(f"degree cap is {MAX_DEGREE}")
        if self.ambient_dim > MAX_AMBIENT:
            raise VmrtError(f"ambient dimension cap is {MAX_AMBIENT}")

    @classmethod
    def from_poly(cls, poly: MultiPoly) -> "Hypersurface":
        return cls(len(poly.ring) - 1, poly.total_degree(), poly)


@dataclass(frozen=True)
class LineSpec:
    basis: tuple  # two projective points spanning the line

    def __post_init__(self):
        basis = tuple(tuple(Fraction(c) for c in b) for b in self.basis)
        if len(basis) != 2 or len(basis[0]) != len(basis[1]):
            raise VmrtError("a line needs two coordinate vectors of equal length")
        if rank_of_rows([list(b) for b in basis]) != 2:
            raise VmrtError("line basis is not of rank 2")
        object.__setattr__(self, "basis", basis)


@dataclass(frozen=True)
class NormalBundleType:
    splitting: tuple  # integers, weakly decreasing

    def __post_init__(self):
        object.__setattr__(self, "splitting",
                           tuple(sorted(self.splitting, reverse=True)))

    @property
    def is_unbendable(self) -> bool:
        s = self.splitting
        return bool(s) and s[0] == 1 and all(x == 0 for x in s[1:])

    def __str__(self):
        return "{" + ",".join(str(d) for d in self.splitting) + "}"


def _invert(rows):
    n = len(rows)
    aug = [list(r) + [Fraction(1) if j == i else Fraction(0) for j in range(n)]
           for i, r in enumerate(rows)]
    res = rref_rank_kernel(aug)
    if res.rank != n:
        raise VmrtError("coordinate change is singular")
    return tuple(tuple(res.rref.entries[i][n:]) for i in range(n))


def _mat_vec(rows, vec):
    return tuple(sum((r[j] * vec[j] for j in range(len(vec))), start=Fraction(0))
                 for r in rows)


@dataclass(frozen=True)
class LinePair:
    """A hypersurface with a line moved to {x_2 = ... = x_n = 0}.

    change_rows is the matrix A with x_original = A * x_normalized; its
    first two columns are the given basis vectors.
    """

    original: Hypersurface
    line: LineSpec
    hyper: Hypersurface
    change_rows: tuple
    change_inv_rows: tuple

    @property
    def ambient_dim(self) -> int:
        return self.original.ambient_dim

    @property
    def degree(self) -> int:
        return self.original.degree

    def to_normalized_point(self, x: Sequence) -> tuple:
        x = tuple(Fraction(c) for c in x)
        if len(x) != self.ambient_dim + 1:
            raise VmrtError("point has wrong coordinate count")
        return _mat_vec(self.change_inv_rows, x)

    def line_parameter(self, x: Sequence):
        """'inf' or the parameter s with x = [1 : s : 0 : ... : 0]."""
        xn = self.to_normalized_point(x)
        if any(c != 0 for c in xn[2:]):
            raise VmrtError("point does not lie on the line")
        if xn[0] == 0:
            return "inf"
        return xn[1] / xn[0]

    def point_at(self, s) -> tuple:
        """Normalized projective coordinates for parameter s (or 'inf')."""
        n = self.ambient_dim
        if isinstance(s, str):
            if s != "inf":
                raise VmrtError(f"bad parameter {s!r}")
            return (Fraction(0), Fraction(1)) + (Fraction(0),) * (n - 1)
        if isinstance(s, RationalFunction):
            fld = ScalarField(s.ring)
            return (fld.one(), s) + (fld.zero(),) * (n - 1)
        return (Fraction(1), Fraction(s)) + (Fraction(0),) * (n - 1)


def normalize_line(h: Hypersurface, l: LineSpec) -> LinePair:
    n = h.ambient_dim
    if len(l.basis[0]) != n + 1:
        raise VmrtError("line coordinates do not match the ambient space")
    cols = [list(l.basis[0]), list(l.basis[1])]
    for i in range(n + 1):
        e = [Fraction(1) if j == i else Fraction(0) for j in range(n + 1)]
        if rank_of_rows(cols + [e]) > len(cols):
            cols.append(e)
        if len(cols) == n + 1:
            break
    change_rows = tuple(tuple(cols[j][i] for j in range(n + 1))
                        for i in range(n + 1))
    inv = _invert(change_rows)
    ring = h.poly.ring
    asg = {}
    for i, name in enumerate(ring):
        img = MultiPoly.zero(ring)
        for j in range(n + 1):
            if change_rows[i][j] != 0:
                img = img + change_rows[i][j] * MultiPoly.variable(ring, ring[j])
        asg[name] = img
    moved = h.poly.substitute(asg)
    return LinePair(h, l, Hypersurface(n, h.degree, moved), change_rows, inv)


# ---------------------------------------------------------------------------
# containment and smoothness

def contains_line(h: Hypersurface, l: LineSpec) -> bool:
    ring = ("t0", "t1")
    t0 = MultiPoly.variable(ring, "t0")
    t1 = MultiPoly.variable(ring, "t1")
    asg = {name: l.basis[0][i] * t0 + l.basis[1][i] * t1
           for i, name in enumerate(h.poly.ring)}
    return h.poly.substitute(asg, ring).is_zero()


def restricted_gradient(pair: LinePair) -> list:
    """The nonzero partials of the normalized equation restricted to the
    line, as binary forms in (t0, t1)."""
    ring = ("t0", "t1")
    f = pair.hyper.poly
    names = f.ring
    asg = {names[0]: MultiPoly.variable(ring, "t0"),
           names[1]: MultiPoly.variable(ring, "t1")}
    asg.update({v: MultiPoly.zero(ring) for v in names[2:]})
    forms = []
    for v in names:
        g = f.diff(v).substitute(asg, ring)
        if g:
            forms.append(g)
    return forms


def smooth_along_line(h: Hypersurface, l: LineSpec) -> bool:
    if not contains_line(h, l):
        raise VmrtError("line is not contained in the hypersurface")
    pair = normalize_line(h, l)
    forms = restricted_gradient(pair)
    if not forms:
        return False
    try:
        return binary_form_common_zeros(forms).empty
    except IdenticallySingularError:
        return False


# ---------------------------------------------------------------------------
# VMRT equations

def vmrt_equations(h: Hypersurface, x: Sequence) -> list:
    """Forms h_1..h_d in y-coordinates with f(x + lam*y) = sum h_k lam^k,
    projecting from x onto the coordinate hyperplane that avoids it.

    The supplied projective representative is used verbatim, so rescaling
    x rescales h_k by c^k (the same subscheme).
    """
    x = tuple(x)
    names = h.poly.ring
    n = h.ambient_dim
    if len(x) != n + 1:
        raise VmrtError("point has wrong coordinate count")
    j = next((i for i, c in enumerate(x) if c != 0), None)
    if j is None:
        raise VmrtError("zero vector is not a projective point")
    y_names = tuple(f"y{i}" for i in range(n + 1) if i != j)
    ring = ("lam",) + y_names
    lam = MultiPoly.variable(ring, "lam")
    asg = {}
    for i, name in enumerate(names):
        img = MultiPoly.const(ring, x[i])
        if i != j:
            img = img + lam * MultiPoly.variable(ring, f"y{i}")
        asg[name] = img
    expanded = h.poly.substitute(asg, ring)
    buckets = expanded.collect("lam")
    if 0 in buckets:
        raise VmrtError("point is not on the hypersurface")
    zero = MultiPoly.zero(y_names)
    return [buckets.get(k, zero) for k in range(1, h.degree + 1)]


def affine_vmrt(h: Hypersurface, x: Sequence, dehomogenize: str) -> list:
    """The forms h_k with the chosen y-variable set to 1 and the others
    renamed z_i; the origin is the image of the 'dehomogenize' direction."""
    hs = vmrt_equations(h, x)
    y_names = hs[0].ring
    if dehomogenize not in y_names:
        raise VmrtError(f"{dehomogenize!r} is not a projection coordinate")
    z_names = tuple("z" + v[1:] for v in y_names if v != dehomogenize)
    sub = {dehomogenize: Fraction(1)}
    for v in y_names:
        if v != dehomogenize:
            sub[v] = MultiPoly.variable(z_names, "z" + v[1:])
    return [g.substitute(sub, z_names) for g in hs]


def _line_dehomogenizer(x: Sequence) -> str:
    """The y-coordinate hit by the line direction at a normalized point
    [x0 : x1 : 0 : ...]: y1 on the finite chart, y0 at infinity."""
    return "y1" if x[0] != 0 else "y0"


# ---------------------------------------------------------------------------
# normal bundle

def normal_bundle_type(h: Hypersurface, l: LineSpec) -> NormalBundleType:
    """Splitting type of the line's normal bundle inside the hypersurface,
    from kernel dimensions of the twisted restriction maps
    (s_2..s_n) -> sum s_i * (df/dx_i)|_line."""
    if not smooth_along_line(h, l):
        raise VmrtError("hypersurface is singular along the line")
    pair = normalize_line(h, l)
    n = h.ambient_dim
    d = h.degree
    ring = ("t0", "t1")
    f = pair.hyper.poly
    names = f.ring
    asg = {names[0]: MultiPoly.variable(ring, "t0"),
           names[1]: MultiPoly.variable(ring, "t1")}
    asg.update({v: MultiPoly.zero(ring) for v in names[2:]})
    partials = [f.diff(v).substitute(asg, ring) for v in names[2:]]

    def binary_coeffs(p: MultiPoly, deg: int) -> list:
        out = [Fraction(0)] * (deg + 1)
        for mono, coef in p.terms.items():
            e = dict(mono)
            out[e.get(0, 0)] = coef
        return out

    def kernel_dim(k: int) -> int:
        if k + 1 < 0:
            return 0
        rows = []
        for fi in partials:
            for a in range(k + 2):
                mono = MultiPoly(ring, {tuple(p for p in ((0, a), (1, k + 1 - a))
                                              if p[1]): Fraction(1)})
                rows.append(binary_coeffs(mono * fi, d + k))
        domain = (n - 1) * (k + 2)
        return domain - rank_of_rows(rows)

    rank_n = n - 2
    splitting = []
    h_prev = 0
    m_prev = 0
    for k in range(-1, d + n + 3):
        hk = kernel_dim(k)
        mk = hk - h_prev
        new = mk - m_prev
        if new < 0 or mk < m_prev:
            raise PipelineError("kernel dimension sequence is not convex")
        splitting.extend([-k] * new)
        if mk == rank_n:
            break
        h_prev, m_prev = hk, mk
    else:
        raise PipelineError("normal bundle reconstruction did not terminate")
    if len(splitting) != rank_n or sum(splitting) != (n - 1) - d:
        raise PipelineError("normal bundle degree bookkeeping failed")
    return NormalBundleType(tuple(splitting))


# ---------------------------------------------------------------------------
# fundamental-form profiles

@dataclass(frozen=True)
class FfProfile:
    parameter: object        # Fraction or 'inf'
    tangent_dim: int
    ranks: tuple | None      # osculating ranks, None when the germ is singular
    germ: object | None


def ff_profile_at_point(h: Hypersurface, l: LineSpec, x: Sequence,
                        order: int = 4) -> FfProfile:
    """Osculating ranks of the VMRT germ at the line's direction over the
    point x (given in original coordinates or as a parameter value)."""
    pair = normalize_line(h, l)
    if isinstance(x, (tuple, list)):
        s = pair.line_parameter(x)
    else:
        s = x
    return _profile(pair, s, order)


def _profile(pair: LinePair, s, order: int) -> FfProfile:
    xn = pair.point_at(s)
    gs = affine_vmrt(pair.hyper, xn, _line_dehomogenizer(xn))
    zring = gs[0].ring
    if isinstance(s, RationalFunction):
        zero = ScalarField(s.ring).zero()
    else:
        zero = Fraction(0)
    origin = tuple(zero for _ in zring)
    dim, _ = zariski_tangent([g for g in gs if g], origin)
    if dim != 1:
        return FfProfile(s, dim, None, None)
    germ = branch_expand([g for g in gs if g], origin, None, order)
    ranks = coefficient_flag_ranks(germ.coefficient_vectors())
    return FfProfile(s, 1, ranks, germ)


def _det(rows) -> object:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [[r[k] for k in range(n) if k != j] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        total = rows[0][0] - rows[0][0]
    return total


def _as_s_poly(x: RationalFunction) -> MultiPoly:
    return x.num


def _strip_rational_roots(p: MultiPoly, var: str):
    """(rational roots, leftover factor after dividing them out)."""
    roots = rational_roots(p, var)
    ring = p.ring
    left = p
    for r in roots:
        lin = MultiPoly.variable(ring, var) - MultiPoly.const(ring, r)
        while True:
            try:
                cand = poly_exact_div(left, lin)
            except Exception:
                break
            left = cand
    return roots, left


@dataclass(frozen=True)
class Ff3Locus:
    """Vanishing locus of the third fundamental form along the line.

    ``locus_poly`` (monic in s) cuts the finite locus when not None;
    ``generically_zero`` marks an identically vanishing form.  Exceptional
    values are parameters where the symbolic expansion degenerates
    (denominator zeros or Jacobian rank drops); rational ones are
    re-checked pointwise by the caller, non-rational ones are reported via
    ``unresolved_polys``.
    """

    empty: bool
    locus_poly: MultiPoly | None
    generically_zero: bool
    exceptional_values: tuple
    unresolved_polys: tuple
    infinity_tangent_dim: int
    infinity_ff3_nonzero: bool | None

    def describe(self) -> str:
        if self.generically_zero:
            return "everywhere"
        if self.empty:
            return "empty"
        return str(self.locus_poly)


def ff3_vanishing_locus(h: Hypersurface, l: LineSpec) -> Ff3Locus:
    """Run the germ expansion at the symbolic point [1 : s : 0 : ... : 0]
    over Q(s); the third form vanishes where all 3x3 minors of the first
    three coefficient vectors do.  Includes the single extra chart point
    at infinity, checked pointwise over Q."""
    if h.degree < 3:
        raise VmrtError("VMRT degree too low for a third fundamental form")
    pair = normalize_line(h, l)
    fld = ScalarField(("s",))
    s = fld.generator("s")
    sring = ("s",)

    inf_profile = _profile(pair, "inf", 3)
    inf_ok = None
    if inf_profile.ranks is not None:
        inf_ok = inf_profile.ranks[2] == 3

    profile = _profile(pair, s, 3)
    if profile.tangent_dim != 1:
        raise PipelineError(
            f"VMRT germ has generic tangent dimension {profile.tangent_dim}")
    a, b, c = profile.germ.coefficient_vectors()

    exceptional_polys = []
    for vec in (a, b, c):
        for entry in vec:
            if not entry.den.is_constant():
                exceptional_polys.append(entry.den)
    jac_bad = _jacobian_drop_locus(pair, profile)
    if jac_bad is not None:
        exceptional_polys.append(jac_bad)

    rows = [list(a), list(b), list(c)]
    minors = []
    ncols = len(a)
    for cols in itertools.combinations(range(ncols), 3):
        sub = [[row[j] for j in cols] for row in rows]
        minors.append(_det(sub))
    nonzero = [m for m in minors if m != 0]
    if not nonzero:
        return Ff3Locus(False, None, True, (), (),
                        inf_profile.tangent_dim, inf_ok)
    g = MultiPoly.zero(sring)
    for m in nonzero:
        g = poly_gcd(g, _as_s_poly(m))
        if g.is_constant():
            break
    if not g.is_constant() and g.total_degree() > 1:
        raise PipelineError(
            f"third-form locus has degree {g.total_degree()} > 1: "
            "line-bundle bookkeeping violated")
    exc_values = set()
    unresolved = []
    for p in exceptional_polys:
        r, left = _strip_rational_roots(p, "s")
        exc_values.update(r)
        if not left.is_constant():
            unresolved.append(left)
    locus_poly = None if g.is_constant() else g
    empty = g.is_constant()
    return Ff3Locus(empty, locus_poly, False,
                    tuple(sorted(exc_values)), tuple(unresolved),
                    inf_profile.tangent_dim, inf_ok)


def _jacobian_drop_locus(pair: LinePair, profile: FfProfile):
    """gcd of the maximal minors of the symbolic germ's solve Jacobian;
    roots are parameters where the order-by-order solve may degenerate."""
    germ = profile.germ
    system = germ.system
    ring = system[0].ring
    tau = germ.transverse
    asg = {v: c for v, c in zip(ring, germ.base)}
    cols = [v for v in ring if v != tau]
    jac = [[g.diff(v).eval_at(asg) for v in cols] for g in system]
    nrows = len(jac)
    ncols = len(cols)
    if nrows < ncols:
        raise PipelineError("underdetermined Jacobian in the symbolic solve")
    g = None
    sring = ("s",)
    for picks in itertools.combinations(range(nrows), ncols):
        d = _det([jac[i] for i in picks])
        if d == 0:
            continue
        p = _as_s_poly(d) if isinstance(d, RationalFunction) else None
        if p is None:
            return None  # constant minor: never degenerates
        g = p if g is None else poly_gcd(g, p)
        if g.is_constant():
            return None
    if g is None:
        raise PipelineError("symbolic Jacobian has no nonzero maximal minor")
    return g


# ---------------------------------------------------------------------------
# symmetry

@dataclass(frozen=True)
class SignedPermutation:
    """Coordinate permutation with scalings: (gamma x)_i = c_i * x_{src_i}."""

    source: tuple
    scales: tuple

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(int(i) for i in self.source))
        object.__setattr__(self, "scales",
                           tuple(Fraction(c) for c in self.scales))
        if sorted(self.source) != list(range(len(self.source))):
            raise VmrtError("source indices must be a permutation")
        if len(self.scales) != len(self.source):
            raise VmrtError("one scale per coordinate")
        if any(c == 0 for c in self.scales):
            raise VmrtError("scales must be nonzero")

    def apply_point(self, x: Sequence) -> tuple:
        return tuple(c * x[i] for c, i in zip(self.scales, self.source))


@dataclass(frozen=True)
class SymmetryCheck:
    is_symmetry: bool
    factor: Fraction | None
    preserves_line: bool | None
    fixed_points: tuple          # projective points on the line, if any
    fixes_line_pointwise: bool


def _sqrt_fraction(q: Fraction):
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def check_symmetry(h: Hypersurface, gamma: SignedPermutation,
                   line: LineSpec | None = None) -> SymmetryCheck:
    """Is f o gamma proportional to f; if a line is supplied, does gamma
    preserve it, and which of its points are fixed."""
    names = h.poly.ring
    asg = {names[i]: gamma.scales[i] * MultiPoly.variable(names, names[gamma.source[i]])
           for i in range(len(names))}
    moved = h.poly.substitute(asg)
    mono, coef = h.poly.leading()
    factor = moved.terms.get(mono, Fraction(0)) / coef
    is_sym = factor != 0 and moved == h.poly * factor
    if line is None:
        return SymmetryCheck(is_sym, factor if is_sym else None, None, (), False)

    b1, b2 = line.basis
    img1, img2 = gamma.apply_point(b1), gamma.apply_point(b2)
    preserves = (rank_of_rows([list(b1), list(b2), list(img1)]) == 2
                 and rank_of_rows([list(b1), list(b2), list(img2)]) == 2)
    fixed = []
    fixes_pointwise = False
    if preserves:
        m = []
        for img in (img1, img2):
            sol = solve_affine_system([[b1[i], b2[i]] for i in range(len(b1))],
                                      list(img))
            m.append(sol.particular)
        # columns of the 2x2 matrix of gamma on the line
        m00, m01 = m[0][0], m[1][0]
        m10, m11 = m[0][1], m[1][1]
        tr = m00 + m11
        det = m00 * m11 - m01 * m10
        disc = tr * tr - 4 * det
        root = _sqrt_fraction(disc)
        eigs = []
        if root is not None:
            eigs = [(tr + root) / 2, (tr - root) / 2]
        seen = []
        for lam in eigs:
            rows = [[m00 - lam, m01], [m10, m11 - lam]]
            if all(x == 0 for row in rows for x in row):
                fixes_pointwise = True
                continue
            res = rref_rank_kernel(rows)
            for vec in res.kernel_basis:
                pt = tuple(vec[0] * b1[i] + vec[1] * b2[i] for i in range(len(b1)))
                pt = _normalize_projective(pt)
                if pt not in seen:
                    seen.append(pt)
        fixed = seen
    return SymmetryCheck(is_sym, factor if is_sym else None, preserves,
                         tuple(fixed), fixes_pointwise)


def _normalize_projective(pt) -> tuple:
    lead = next((c for c in pt if c != 0), None)
    if lead is None:
        raise VmrtError("zero vector is not a projective point")
    out = tuple(c / lead for c in pt)
    mult = 1
    for c in out:
        mult = mult * c.denominator // _gcd(mult, c.denominator)
    return tuple(c * mult for c in out)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a) if a else 1


# ---------------------------------------------------------------------------
# the verdict

@dataclass(frozen=True)
class VmrtReport:
    contains: bool
    smooth_along_line: bool
    normal_bundle: NormalBundleType | None
    tangent_dims: dict
    ff_profiles: dict
    ff3_locus: Ff3Locus | None
    verdict: str
    reason: str
    bracket_generating_probe: str | None
    change_rows: tuple = field(default=())

    def locus_text(self) -> str:
        return self.ff3_locus.describe() if self.ff3_locus else "n/a"


def _probe_parameters(sampler: ProbeSampler, count: int) -> list:
    params = [Fraction(1), Fraction(-1)]
    for v in sampler.fractions(count + 4):
        if v not in params:
            params.append(v)
        if len(params) >= max(count, 2):
            break
    return params[: max(count, 2)]


def classify_line_family(h: Hypersurface, l: LineSpec, order: int = 4,
                         probes: int = 3, seed: int = 0) -> VmrtReport:
    """Goursat/Cartan verdict for the family of lines through the given
    one, per the dimension-4 criterion (bracket-generating implies
    Goursat) and the dimension-5 third-fundamental-form criterion."""
    contains = contains_line(h, l)
    if not contains:
        return VmrtReport(False, False, None, {}, {}, None, NOT_APPLICABLE,
                          "line is not contained in the hypersurface", None)
    smooth = smooth_along_line(h, l)
    if not smooth:
        return VmrtReport(True, False, None, {}, {}, None, NOT_APPLICABLE,
                          "hypersurface is singular along the line", None)
    pair = normalize_line(h, l)
    if h.degree < 3:
        return VmrtReport(True, True, None, {}, {}, None, NOT_APPLICABLE,
                          "VMRT degree too low for a third fundamental form",
                          None, pair.change_rows)
    nb = normal_bundle_type(h, l)
    if not nb.is_unbendable:
        return VmrtReport(True, True, nb, {}, {}, None, NOT_APPLICABLE,
                          f"line is not unbendable: splitting {nb}", None,
                          pair.change_rows)
    dim_x = h.ambient_dim - 1
    if dim_x not in (4, 5):
        return VmrtReport(True, True, nb, {}, {}, None, NOT_APPLICABLE,
                          f"classification covers 4- and 5-folds, got {dim_x}",
                          None, pair.change_rows)

    sampler = ProbeSampler(seed)
    params = _probe_parameters(sampler, probes) + ["inf"]
    tangent_dims = {}
    ff_profiles = {}
    target_rank = h.ambient_dim - 2
    certificate = None
    for sv in params:
        key = f"s={sv}"
        try:
            prof = _profile(pair, sv, order)
        except NotSmoothCurveGermError:
            tangent_dims[key] = 1
            continue
        tangent_dims[key] = prof.tangent_dim
        if prof.ranks is None:
            continue
        ff_profiles[key] = prof.ranks
        if certificate is None and max(prof.ranks) >= target_rank:
            certificate = key

    if certificate is None:
        return VmrtReport(True, True, nb, tangent_dims, ff_profiles, None,
                          INCONCLUSIVE,
                          "no linear-nondegeneracy certificate at probed "
                          "points; cannot certify bracket generation", None,
                          pair.change_rows)

    if dim_x == 4:
        return VmrtReport(True, True, nb, tangent_dims, ff_profiles, None,
                          GOURSAT,
                          "ambient 4-fold: bracket-generating families are "
                          "of Goursat type (nondegenerate VMRT germ at "
                          f"{certificate})", certificate, pair.change_rows)

    locus = ff3_vanishing_locus(h, l)
    vanishing_points = []
    unresolved_reasons = [str(p) for p in locus.unresolved_polys]
    if locus.generically_zero:
        return VmrtReport(True, True, nb, tangent_dims, ff_profiles, locus,
                          GOURSAT,
                          "third fundamental form vanishes identically "
                          "along the line", certificate, pair.change_rows)
    candidates = set(locus.exceptional_values)
    if locus.locus_poly is not None:
        candidates.update(rational_roots(locus.locus_poly, "s"))
    for s0 in sorted(candidates):
        key = f"s={s0}"
        prof = ff_profiles.get(key)
        if prof is None:
            p = _profile(pair, s0, 3)
            tangent_dims[key] = p.tangent_dim
            if p.ranks is None:
                unresolved_reasons.append(f"VMRT singular at {key}")
                continue
            ff_profiles[key] = p.ranks
            prof = p.ranks
        if prof[2] < 3:
            vanishing_points.append(key)
    if locus.infinity_ff3_nonzero is False:
        vanishing_points.append("s=inf")
    elif locus.infinity_ff3_nonzero is None:
        unresolved_reasons.append("VMRT singular at s=inf")

    if vanishing_points:
        return VmrtReport(True, True, nb, tangent_dims, ff_profiles, locus,
                          GOURSAT,
                          "third fundamental form vanishes at "
                          + ", ".join(vanishing_points), certificate,
                          pair.change_rows)
    if unresolved_reasons:
        return VmrtReport(True, True, nb, tangent_dims, ff_profiles, locus,
                          INCONCLUSIVE,
                          "unresolved exceptional parameters: "
                          + "; ".join(unresolved_reasons), certificate,
                          pair.change_rows)
    return VmrtReport(True, True, nb, tangent_dims, ff_profiles, locus,
                      CARTAN,
                      "third fundamental form nonzero at every point of the "
                      "line (empty vanishing locus, infinity included)",
                      certificate, pair.change_rows)
