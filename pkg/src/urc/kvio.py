"""Structured report format: flat, line-oriented ``key = value`` text.

Every number is an exact rational printed as p/q (or an integer);
polynomials and vector fields are printed in canonical form, so parsing
the structured output reproduces the report object exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .distributions import Chart, FlagReport, FlagStep, PointQ, VectorField
from .parsing import parse_expression, parse_vector_field
from .scalars import MultiPoly
from .vmrt import Ff3Locus, NormalBundleType, VmrtReport


def render_kv(pairs) -> str:
    return "\n".join(f"{k} = {v}" for k, v in pairs) + "\n"


def parse_kv(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, sep, value = line.partition(" = ")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        out[key.strip()] = value.strip()
    return out


def _bool(s: str) -> bool:
    if s in ("true", "false"):
        return s == "true"
    raise ValueError(f"expected true/false, got {s!r}")


def _fractions(s: str) -> tuple:
    return tuple(Fraction(tok) for tok in s.split())


def _ints(s: str) -> tuple:
    return tuple(int(tok) for tok in s.split())


# ---------------------------------------------------------------------------
# FlagReport

def flag_report_to_kv(rep: FlagReport) -> list:
    pairs = [
        ("report", "flag"),
        ("mode", rep.mode),
        ("chart", str(rep.chart)),
        ("probe", str(rep.probe)),
        ("growth_vector", " ".join(str(r) for r in rep.growth_vector)),
        ("point_growth", " ".join(str(r) for r in rep.point_growth)),
        ("bracket_generating", "true" if rep.bracket_generating else "false"),
        ("stabilized_at", str(rep.stabilized_at)),
        ("convention", rep.convention),
        ("steps", str(len(rep.steps))),
    ]
    for i, step in enumerate(rep.steps):
        pairs.append((f"step.{i}.generic_rank", str(step.generic_rank)))
        pairs.append((f"step.{i}.point_rank", str(step.point_rank)))
        pairs.append((f"step.{i}.generators", str(len(step.generators))))
        for j, g in enumerate(step.generators):
            pairs.append((f"step.{i}.gen.{j}", str(g)))
    return pairs


def flag_report_from_kv(kv: dict) -> FlagReport:
    chart = Chart(tuple(kv["chart"].split()))
    probe = PointQ(_fractions(kv["probe"]))
    nsteps = int(kv["steps"])
    steps = []
    for i in range(nsteps):
        ngens = int(kv[f"step.{i}.generators"])
        gens = []
        for j in range(ngens):
            comps = parse_vector_field(kv[f"step.{i}.gen.{j}"], chart.variables)
            gens.append(VectorField(chart, comps))
        steps.append(FlagStep(tuple(gens),
                              int(kv[f"step.{i}.generic_rank"]),
                              int(kv[f"step.{i}.point_rank"])))
    return FlagReport(
        mode=kv["mode"],
        chart=chart,
        probe=probe,
        steps=tuple(steps),
        growth_vector=_ints(kv["growth_vector"]),
        bracket_generating=_bool(kv["bracket_generating"]),
        stabilized_at=int(kv["stabilized_at"]),
        convention=kv["convention"],
    )


# ---------------------------------------------------------------------------
# VmrtReport

def _locus_to_kv(loc: Ff3Locus, pairs: list):
    pairs.append(("ff3.locus", loc.describe()))
    pairs.append(("ff3.exceptional",
                  " ".join(str(v) for v in loc.exceptional_values)))
    pairs.append(("ff3.unresolved",
                  " ; ".join(str(p) for p in loc.unresolved_polys)))
    pairs.append(("ff3.infinity_tangent_dim", str(loc.infinity_tangent_dim)))
    inf = loc.infinity_ff3_nonzero
    pairs.append(("ff3.infinity_nonzero",
                  "none" if inf is None else ("true" if inf else "false")))


def _locus_from_kv(kv: dict) -> Ff3Locus:
    desc = kv["ff3.locus"]
    generically_zero = desc == "everywhere"
    empty = desc == "empty"
    locus_poly = None
    if not generically_zero and not empty:
        locus_poly = parse_expression(desc, ("s",), require_poly=True)
    exceptional = _fractions(kv["ff3.exceptional"]) if kv["ff3.exceptional"] else ()
    unresolved = tuple(
        parse_expression(p.strip(), ("s",), require_poly=True)
        for p in kv["ff3.unresolved"].split(";") if p.strip())
    inf_raw = kv["ff3.infinity_nonzero"]
    inf = None if inf_raw == "none" else inf_raw == "true"
    return Ff3Locus(empty, locus_poly, generically_zero, exceptional,
                    unresolved, int(kv["ff3.infinity_tangent_dim"]), inf)


def vmrt_report_to_kv(rep: VmrtReport) -> list:
    pairs = [
        ("report", "line-type"),
        ("verdict", rep.verdict),
        ("reason", rep.reason),
        ("contains", "true" if rep.contains else "false"),
        ("smooth_along_line", "true" if rep.smooth_along_line else "false"),
        ("normal_bundle",
         " ".join(str(d) for d in rep.normal_bundle.splitting)
         if rep.normal_bundle else "n/a"),
        ("bracket_generating_probe", rep.bracket_generating_probe or "none"),
    ]
    pairs.append(("probes", " ".join(sorted(rep.tangent_dims))))
    for key in sorted(rep.tangent_dims):
        pairs.append((f"tangent_dim.{key}", str(rep.tangent_dims[key])))
    for key in sorted(rep.ff_profiles):
        pairs.append((f"ff_ranks.{key}",
                      " ".join(str(r) for r in rep.ff_profiles[key])))
    if rep.ff3_locus is not None:
        _locus_to_kv(rep.ff3_locus, pairs)
    pairs.append(("change_rows", str(len(rep.change_rows))))
    for i, row in enumerate(rep.change_rows):
        pairs.append((f"change.{i}", " ".join(str(c) for c in row)))
    return pairs


def vmrt_report_from_kv(kv: dict) -> VmrtReport:
    nb = None
    if kv["normal_bundle"] != "n/a":
        nb = NormalBundleType(_ints(kv["normal_bundle"]))
    tangent_dims = {}
    ff_profiles = {}
    probes = kv["probes"].split() if kv["probes"] else []
    for key in probes:
        tangent_dims[key] = int(kv[f"tangent_dim.{key}"])
        rk = kv.get(f"ff_ranks.{key}")
        if rk is not None:
            ff_profiles[key] = _ints(rk)
    locus = _locus_from_kv(kv) if "ff3.locus" in kv else None
    nrows = int(kv["change_rows"])
    change = tuple(_fractions(kv[f"change.{i}"]) for i in range(nrows))
    probe = kv["bracket_generating_probe"]
    return VmrtReport(
        contains=_bool(kv["contains"]),
        smooth_along_line=_bool(kv["smooth_along_line"]),
        normal_bundle=nb,
        tangent_dims=tangent_dims,
        ff_profiles=ff_profiles,
        ff3_locus=locus,
        verdict=kv["verdict"],
        reason=kv["reason"],
        bracket_generating_probe=None if probe == "none" else probe,
        change_rows=change,
    )
