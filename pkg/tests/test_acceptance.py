"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line.  Every comparison is exact (rational arithmetic, canonical forms);
the stated wall-clock budgets are asserted.

Criterion 5 is expected RED: the pairing line on the Fermat cubic 4-fold
is of the second type (normal bundle {1,1,-1}, not unbendable), so the
expected 'Goursat' verdict is mathematically unattainable on that input;
see the decisions ledger.  The intended behavior (a cubic 4-fold line
family certifying Goursat) is covered green in test_vmrt.py with a
first-type line.
"""

import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from urc.cli import RunConfig, dispatch
from urc.distributions import (
    CARTAN,
    Chart,
    DistributionSpec,
    PointQ,
    VectorField,
    classify_rank2,
    derived_flag,
    lie_bracket,
    zelenko_null_field,
)
from urc.families import blowup_family_chart, family_flag
from urc.fundforms import branch_expand, coefficient_flag_ranks
from urc.kvio import parse_kv
from urc.parsing import parse_expression, parse_vector_field
from urc.scalars import (
    MultiPoly,
    RationalFunction,
    ScalarField,
    compose_series,
    series_substitute,
)
from urc.vmrt import GOURSAT, Hypersurface, LineSpec, ff3_vanishing_locus, \
    ff_profile_at_point, normalize_line

from quartic_fixture import (
    ABCD_AT_P,
    ABCD_AT_Q,
    G_AT_P,
    G_AT_Q,
    H_AT_P,
    H_AT_Q,
    Z_RING,
    parse_g,
    parse_h,
)

INPUTS = Path(__file__).resolve().parents[1] / "inputs"
QUARTIC = str(INPUTS / "quartic5fold.hsf")
FERMAT = str(INPUTS / "fermat_cubic4fold.hsf")
CUBIC_SURFACE = str(INPUTS / "cubic_surface.hsf")
HILBERT_CARTAN = str(INPUTS / "hilbert_cartan.dist")
RNC_FAMILY = str(INPUTS / "rnc_family.fam")


def _report(criterion: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {criterion}: {status}{suffix}")
    assert ok, f"criterion {criterion} failed{suffix}"


def _run(sub, *inputs, **kw):
    return dispatch(RunConfig(subcommand=sub, inputs=list(inputs), **kw))


def test_criterion_1_quartic_p_side_golden():
    t0 = time.monotonic()
    res = _run("vmrt", QUARTIC, point="1,1,0,0,0,0,0", fmt="structured")
    kv = parse_kv(res.text)
    ok = res.status == 0
    for i, text in enumerate(H_AT_P, start=1):
        ok = ok and kv[f"h{i}"] == str(parse_h(text))
    for i, text in enumerate(G_AT_P, start=1):
        ok = ok and kv[f"g{i}"] == str(parse_g(text))
    ok = ok and kv["tangent_dim"] == "1" and kv["transverse"] == "z6"
    expected = {"a": "0 0 0 0 1", "b": "1 -1 0 0 0",
                "c": "-1 -1 1 1 0", "d": "2 -2 -4 4 0"}
    for name, vec in expected.items():
        ok = ok and kv[f"branch.{name}"] == vec
    elapsed = time.monotonic() - t0
    _report("1 (P-side golden reproduction)", ok and elapsed < 5.0,
            f"{elapsed:.2f}s")


def test_criterion_2_quartic_q_side_golden():
    t0 = time.monotonic()
    res = _run("vmrt", QUARTIC, point="-1,1,0,0,0,0,0", fmt="structured")
    kv = parse_kv(res.text)
    ok = res.status == 0
    for i, text in enumerate(H_AT_Q, start=1):
        ok = ok and kv[f"h{i}"] == str(parse_h(text))
    for i, text in enumerate(G_AT_Q, start=1):
        ok = ok and kv[f"g{i}"] == str(parse_g(text))
    expected = {"a": "0 0 0 0 1", "b": "-1 -1 -2 -2 0",
                "c": "-1 -1 -3 -3 0", "d": "-2 -2 -4 -4 0"}
    for name, vec in expected.items():
        ok = ok and kv[f"branch.{name}"] == vec
    b = tuple(Fraction(t) for t in kv["branch.b"].split())
    d = tuple(Fraction(t) for t in kv["branch.d"].split())
    ok = ok and d == tuple(2 * x for x in b)
    ok = ok and kv["ff_ranks"] == "1 2 3 3"
    elapsed = time.monotonic() - t0
    _report("2 (Q-side golden reproduction)", ok and elapsed < 5.0,
            f"{elapsed:.2f}s")


def test_criterion_3_normal_bundles():
    res = _run("line-type", QUARTIC, fmt="structured")
    kv = parse_kv(res.text)
    ok = kv["normal_bundle"] == "1 0 0 0"
    res2 = _run("line-type", CUBIC_SURFACE, fmt="structured")
    kv2 = parse_kv(res2.text)
    ok = ok and kv2["normal_bundle"] == "-1"
    _report("3 (normal bundle splittings)", ok,
            f"quartic {kv['normal_bundle']}; cubic surface {kv2['normal_bundle']}")


def test_criterion_4_quartic_cartan_verdict():
    t0 = time.monotonic()
    res = _run("line-type", QUARTIC, fmt="structured")
    kv = parse_kv(res.text)
    ok = (res.status == 0 and kv["verdict"] == "Cartan"
          and kv["ff3.locus"] == "empty"
          and kv["ff3.infinity_nonzero"] == "true"
          and kv["ff3.exceptional"] == ""
          and kv["ff3.unresolved"] == "")
    elapsed = time.monotonic() - t0
    _report("4 (quartic 5-fold verdict Cartan)", ok and elapsed < 60.0,
            f"{elapsed:.2f}s")


def test_criterion_5_fermat_cubic_goursat():
    # expected RED: the pairing line is of the second type ({1,1,-1}),
    # so 'Goursat' cannot be attained on this input; see the ledger
    t0 = time.monotonic()
    res = _run("line-type", FERMAT, fmt="structured")
    kv = parse_kv(res.text)
    ok = (kv["verdict"] == "Goursat"
          and kv["bracket_generating_probe"] != "none")
    elapsed = time.monotonic() - t0
    _report("5 (Fermat cubic 4-fold Goursat)", ok and elapsed < 30.0,
            f"{elapsed:.2f}s; actual verdict {kv['verdict']}: "
            f"normal bundle {kv.get('normal_bundle')}")


def test_criterion_6_jet_spaces():
    t0 = time.monotonic()
    ok = True
    for k in range(1, 7):
        res = _run("jet", str(k), fmt="structured")
        kv = parse_kv(res.text)
        expected = " ".join(str(r) for r in range(2, k + 3))
        ok = ok and kv["growth_vector"] == expected
        ok = ok and kv["modes_agree"] == "true"
        ok = ok and kv["verdict"] == "Goursat"
    elapsed = time.monotonic() - t0
    _report("6 (jet systems k=1..6)", ok and elapsed < 10.0, f"{elapsed:.2f}s")


def test_criterion_7_hilbert_cartan_and_zelenko():
    t0 = time.monotonic()
    res = _run("classify", HILBERT_CARTAN, fmt="structured")
    kv = parse_kv(res.text)
    ok = kv["verdict"] == "Cartan" and kv["growth_vector"] == "2 3 5"
    res2 = _run("zelenko", HILBERT_CARTAN, fmt="structured")
    kv2 = parse_kv(res2.text)
    ok = (ok and res2.status == 0
          and kv2["theta_vanishes"] == "true"
          and kv2["transverse"] == "true"
          and kv2["projects_into_d"] == "true"
          and kv2["null_space_dim"] == "1")
    elapsed = time.monotonic() - t0
    _report("7 (Hilbert-Cartan model and null field)", ok and elapsed < 10.0,
            f"{elapsed:.2f}s")


def test_criterion_8_blowup_family():
    t0 = time.monotonic()
    res = _run("family", RNC_FAMILY, fmt="structured")
    kv = parse_kv(res.text)
    ok = (res.status == 0 and kv["flag_ranks"] == "2 3 4 5 6"
          and kv["f_invariance.1"] == "true"
          and kv["f_invariance.2"] == "true"
          and kv["f_invariance.3"] == "true"
          and kv["t2_identity"] == "true")
    elapsed = time.monotonic() - t0
    _report("8 (blowup family flags and checks)", ok and elapsed < 10.0,
            f"{elapsed:.2f}s")


def test_criterion_9_cross_module_identity():
    from test_families import _projective_germ_ranks, zeta_poly
    ok = True
    for zeta in (["1", "s", "s^2", "s^3", "s^4"],
                 ["1", "s", "0", "0", "0"],
                 ["1", "s", "s^2"]):
        polys = zeta_poly(zeta)
        fc = blowup_family_chart(polys)
        probe = PointQ((1,) + (0,) * (fc.chart.dim - 1))
        fam = family_flag(fc, probe=probe).generic_growth
        increments = [b - a for a, b in zip(fam, fam[1:])]
        germ_ranks = _projective_germ_ranks(polys, len(increments) + 1)
        germ_inc = [germ_ranks[0]] + [b - a for a, b in
                                      zip(germ_ranks, germ_ranks[1:])]
        ok = ok and increments == germ_inc[: len(increments)]
    _report("9 (family flag vs osculating flag increments)", ok)


# ---------------------------------------------------------------------------
# criterion 10: property suites

def _random_poly_field(rng, chart):
    ring = chart.variables
    comps = []
    for _ in ring:
        p = MultiPoly.zero(ring)
        for _ in range(rng.randint(0, 2)):
            mono = []
            for i in range(len(ring)):
                e = rng.randint(0, 2)
                if e:
                    mono.append((i, e))
            p = p + MultiPoly(ring, {tuple(mono): Fraction(rng.randint(-3, 3))})
        comps.append(RationalFunction(p))
    return VectorField(chart, tuple(comps))


def test_criterion_10a_bracket_laws_100_fields():
    t0 = time.monotonic()
    rng = random.Random(101)
    chart = Chart(("x1", "x2", "x3", "x4"))
    zero = VectorField(chart, (0,) * 4)
    count = 0
    ok = True
    while count < 100:
        u = _random_poly_field(rng, chart)
        v = _random_poly_field(rng, chart)
        w = _random_poly_field(rng, chart)
        count += 1
        anti = VectorField(chart, tuple(-c for c in lie_bracket(v, u).components))
        ok = ok and lie_bracket(u, v) == anti
        jac = VectorField(chart, tuple(
            a + b + c for a, b, c in zip(
                lie_bracket(u, lie_bracket(v, w)).components,
                lie_bracket(v, lie_bracket(w, u)).components,
                lie_bracket(w, lie_bracket(u, v)).components)))
        ok = ok and jac == zero
    _report("10a (bracket antisymmetry/Jacobi, 100 fields)",
            ok and count == 100, f"{time.monotonic() - t0:.1f}s")


def _germ_corpus():
    germs = []
    origin = tuple(Fraction(0) for _ in Z_RING)
    for texts in (G_AT_P, G_AT_Q):
        system = [parse_g(t) for t in texts]
        germs.append((system, origin, branch_expand(system, origin, "z6", 4)))
    return germs


def test_criterion_10b_branch_residuals():
    ok = True
    for system, base, germ in _germ_corpus():
        for g in system:
            vals = series_substitute(g, germ.series, base)
            ok = ok and all(v == 0 for v in vals[: germ.order + 1])
    # the symbolic germ as well
    h, line = _quartic_pair()
    pair = normalize_line(h, line)
    fld = ScalarField(("s",))
    from urc.vmrt import _profile
    prof = _profile(pair, fld.generator("s"), 3)
    zero = fld.zero()
    for g in prof.germ.system:
        vals = series_substitute(g, prof.germ.series,
                                 tuple(zero for _ in prof.germ.chart))
        ok = ok and all(v == 0 for v in vals[:4])
    _report("10b (branch residuals vanish to stated order)", ok)


def _quartic_pair():
    from urc.cli import load_hypersurface
    return load_hypersurface(Path(QUARTIC).read_text())


def test_criterion_10c_invariance_20_transformations():
    from urc.linalg import rank_of_rows
    rng = random.Random(103)
    ok = True
    transformations = 0
    for system, base, germ in _germ_corpus():
        vectors = germ.coefficient_vectors()
        ranks = coefficient_flag_ranks(vectors)
        for _ in range(5):
            lam = Fraction(rng.randint(-3, 3))
            inner = [Fraction(1), lam, Fraction(0), Fraction(0)]
            moved = compose_series(vectors, inner, 4)
            ok = ok and coefficient_flag_ranks(moved) == ranks
            transformations += 1
        for _ in range(5):
            while True:
                mat = [[Fraction(rng.randint(-2, 2)) for _ in range(5)]
                       for _ in range(5)]
                if rank_of_rows(mat) == 5:
                    break
            moved = [tuple(sum(row[i] * v[i] for i in range(5)) for row in mat)
                     for v in vectors]
            ok = ok and coefficient_flag_ranks(moved) == ranks
            transformations += 1
    _report("10c (reparametrization/linear-change invariance)",
            ok and transformations == 20, f"{transformations} transformations")


def test_criterion_10d_specialization_agreement():
    h, line = _quartic_pair()
    pair = normalize_line(h, line)
    from urc.vmrt import _profile
    fld = ScalarField(("s",))
    sym = _profile(pair, fld.generator("s"), 4)
    rng = random.Random(107)
    checked = 0
    ok = True
    while checked < 5:
        s0 = Fraction(rng.randint(-8, 8))
        point = _profile(pair, s0, 4)
        if point.ranks is None:
            continue
        for sym_vec, pt_vec in zip(sym.germ.coefficient_vectors(),
                                   point.germ.coefficient_vectors()):
            spec = tuple(e.eval_at({"s": s0}) for e in sym_vec)
            ok = ok and spec == pt_vec
        checked += 1
    _report("10d (Q(s) pipeline vs pointwise specialization)",
            ok and checked == 5)


def test_criterion_10e_semicontinuity_10_probes():
    d, _ = _hilbert_cartan()
    jet3 = _jet3()
    rng = random.Random(109)
    ok = True
    for dist in (d, jet3):
        for _ in range(10):
            pt = PointQ(tuple(Fraction(rng.randint(-3, 3))
                              for _ in range(dist.chart.dim)))
            for mode in ("strong", "weak"):
                rep = derived_flag(dist, mode, probe=pt)
                for s in rep.steps:
                    ok = ok and s.point_rank <= s.generic_rank
    _report("10e (pointwise rank <= generic rank, 10 probes per flag)", ok)


def _hilbert_cartan():
    from urc.cli import load_distribution
    return load_distribution(Path(HILBERT_CARTAN).read_text())


def _jet3():
    from urc.jets import build_jet_distribution
    return build_jet_distribution(3)
