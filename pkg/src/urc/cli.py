"""Command-line front door.

Subcommands: growth, classify, jet, ode, vmrt, line-type, zelenko, family.
Input files are small line-oriented text formats (see the README); output
is human-readable text or the structured ``key = value`` format.  Exit
status: 0 on success, 2 on mathematical inconclusiveness or failed
preconditions, 1 on input errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import kvio
from .distributions import (
    CARTAN,
    Chart,
    ClassifyError,
    DistributionSpec,
    PointQ,
    ProbeError,
    VectorField,
    classify_rank2,
    derived_flag,
    zelenko_null_field,
)
from .families import (
    FamilyError,
    blowup_family_chart,
    check_F_invariance,
    check_T2_identity,
    family_flag,
)
from .fundforms import UndecidedError
from .jets import JetError, OdeSpec, build_jet_distribution, check_goursat_ode_form, \
    jet_variables, ode_to_distribution
from .parsing import ParseError, parse_expression, parse_rational, parse_vector_field
from .probes import ProbeSampler
from .scalars import DenominatorZeroError, MultiPoly, ScalarError
from .vmrt import (
    GOURSAT,
    Hypersurface,
    LineSpec,
    PipelineError,
    VmrtError,
    affine_vmrt,
    classify_line_family,
    ff_profile_at_point,
    normalize_line,
    vmrt_equations,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONCLUSIVE = 2


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    inputs: list
    order: int = 4
    seed: int = 0
    probes: int = 3
    max_steps: int | None = None
    mode: str = "strong"
    fmt: str = "text"
    point: str | None = None
    max_k: int | None = None


@dataclass
class DispatchResult:
    status: int
    text: str
    report: object = None


# ---------------------------------------------------------------------------
# file formats

def _read_sections(text: str) -> list:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise InputError(f"line {lineno}: expected 'key: value'")
        out.append((key.strip(), value.strip(), lineno))
    return out


def load_hypersurface(text: str):
    ambient = None
    variables = None
    poly = None
    line = None
    for key, value, lineno in _read_sections(text):
        if key == "ambient":
            if not value.startswith("P"):
                raise InputError(f"line {lineno}: ambient must look like P6")
            ambient = int(value[1:])
        elif key == "vars":
            variables = tuple(value.split())
        elif key == "poly":
            if variables is None:
                raise InputError(f"line {lineno}: vars must come before poly")
            try:
                poly = parse_expression(value, variables, require_poly=True)
            except (ParseError, ScalarError) as exc:
                raise InputError(f"line {lineno}: {exc}") from None
        elif key == "line":
            vecs = []
            for chunk in value.replace("[", " ").split("]"):
                chunk = chunk.strip().strip(",")
                if chunk:
                    vecs.append(tuple(parse_rational(t)
                                      for t in chunk.split(",") if t.strip()))
            if len(vecs) != 2:
                raise InputError(f"line {lineno}: a line needs two vectors")
            line = LineSpec(tuple(vecs))
        else:
            raise InputError(f"line {lineno}: unknown key {key!r}")
    if ambient is None or variables is None or poly is None:
        raise InputError("hypersurface file needs ambient, vars and poly")
    if len(variables) != ambient + 1:
        raise InputError("vars count must be ambient dimension + 1")
    return Hypersurface(ambient, poly.total_degree(), poly), line


def load_distribution(text: str):
    chart = None
    gens = []
    probe = None
    for key, value, lineno in _read_sections(text):
        if key == "chart":
            chart = Chart(tuple(value.split()))
        elif key == "field":
            if value != "QQ":
                raise InputError(f"line {lineno}: only field QQ is supported")
        elif key == "gen":
            if chart is None:
                raise InputError(f"line {lineno}: chart must come before gen")
            try:
                comps = parse_vector_field(value, chart.variables)
            except ParseError as exc:
                raise InputError(f"line {lineno}: {exc}") from None
            gens.append(VectorField(chart, comps))
        elif key == "probe":
            probe = PointQ(tuple(parse_rational(t) for t in value.split()))
        else:
            raise InputError(f"line {lineno}: unknown key {key!r}")
    if chart is None or not gens:
        raise InputError("distribution file needs a chart and generators")
    return DistributionSpec(chart, tuple(gens)), probe


def load_family(text: str):
    for key, value, lineno in _read_sections(text):
        if key != "family":
            raise InputError(f"line {lineno}: family files carry one 'family:' line")
        tokens = value.split(None, 1)
        if not tokens or tokens[0] != "blowup":
            raise InputError(f"line {lineno}: only 'blowup' families are supported")
        rest = tokens[1] if len(tokens) > 1 else ""
        n = None
        zeta = None
        head, sep, tail = rest.partition("zeta")
        for tok in head.split():
            if tok.startswith("n="):
                n = int(tok[2:])
        if not sep:
            raise InputError(f"line {lineno}: missing zeta = ...")
        tail = tail.lstrip()
        if tail.startswith("="):
            tail = tail[1:]
        try:
            zeta = [parse_expression(chunk.strip(), ("s",), require_poly=True)
                    for chunk in tail.split(",")]
        except (ParseError, ScalarError) as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        if n is not None and n != len(zeta):
            raise InputError(f"line {lineno}: n={n} but zeta has {len(zeta)} entries")
        return zeta
    raise InputError("family file is empty")


def parse_ode_spec(text: str) -> OdeSpec:
    text = text.strip()
    if text.startswith("ode:"):
        text = text[4:].strip()
    order = None
    rhs_text = None
    head, sep, tail = text.partition("F")
    for tok in head.replace(",", " ").split():
        if tok.startswith("order="):
            order = int(tok[6:])
    if not sep:
        raise InputError("ODE spec needs 'F = <expression>'")
    tail = tail.lstrip()
    if tail.startswith("="):
        rhs_text = tail[1:].strip()
    if order is None or rhs_text is None:
        raise InputError("ODE spec looks like: order=4  F = t*u3^3 + u")
    ring = jet_variables(order - 1)
    try:
        rhs = parse_expression(rhs_text, ring)
    except ParseError as exc:
        raise InputError(str(exc)) from None
    return OdeSpec(order, rhs)


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _pick_probe(d: DistributionSpec, probe, seed: int) -> PointQ:
    if probe is not None:
        return probe
    sampler = ProbeSampler(seed)

    def valid(pt: PointQ) -> bool:
        try:
            for g in d.generators:
                g.eval_at(pt)
            return True
        except ProbeError:
            return False

    return sampler.point(d.chart.dim, valid=valid)


# ---------------------------------------------------------------------------
# rendering

def _render_flag_text(rep) -> list:
    lines = [f"mode: {rep.mode}",
             f"chart: {rep.chart}",
             f"probe: {rep.probe}",
             f"growth vector (generic): ({', '.join(str(r) for r in rep.growth_vector)})",
             f"growth at probe:         ({', '.join(str(r) for r in rep.point_growth)})",
             f"bracket generating: {'yes' if rep.bracket_generating else 'no'}",
             f"stabilized at step: {rep.stabilized_at}",
             f"note: {rep.convention}"]
    for i, step in enumerate(rep.steps):
        lines.append(f"step {i}: generic rank {step.generic_rank}, "
                     f"probe rank {step.point_rank}")
        for g in step.generators:
            lines.append(f"  gen: {g}")
    return lines


def _finish(cfg: RunConfig, status: int, text_lines: list, kv_pairs, report=None):
    if cfg.fmt == "structured" and kv_pairs is not None:
        return DispatchResult(status, kvio.render_kv(kv_pairs), report)
    return DispatchResult(status, "\n".join(text_lines) + "\n", report)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_growth(cfg: RunConfig) -> DispatchResult:
    d, probe = load_distribution(_read_file(cfg.inputs[0]))
    probe = _pick_probe(d, probe, cfg.seed)
    rep = derived_flag(d, cfg.mode, max_steps=cfg.max_steps, probe=probe)
    return _finish(cfg, EXIT_OK, _render_flag_text(rep),
                   kvio.flag_report_to_kv(rep), rep)


def _cmd_classify(cfg: RunConfig) -> DispatchResult:
    d, probe = load_distribution(_read_file(cfg.inputs[0]))
    probe = _pick_probe(d, probe, cfg.seed)
    verdict = classify_rank2(d, probe)
    rep = derived_flag(d, "strong", max_steps=cfg.max_steps, probe=probe)
    lines = [f"verdict: {verdict}",
             f"growth vector: ({', '.join(str(r) for r in rep.growth_vector)})"]
    pairs = [("report", "classify"), ("verdict", verdict),
             ("growth_vector", " ".join(str(r) for r in rep.growth_vector))]
    return _finish(cfg, EXIT_OK, lines, pairs, verdict)


def _cmd_jet(cfg: RunConfig) -> DispatchResult:
    k = int(cfg.inputs[0])
    d = build_jet_distribution(k)
    probe = PointQ((0,) * d.chart.dim)
    strong = derived_flag(d, "strong", probe=probe)
    weak = derived_flag(d, "weak", probe=probe)
    verdict = classify_rank2(d, probe)
    agree = strong.generic_growth == weak.generic_growth
    lines = [f"jet order: {k}",
             f"chart: {d.chart}",
             f"growth vector: ({', '.join(str(r) for r in strong.growth_vector)})",
             f"strong/weak flags agree: {'yes' if agree else 'no'}",
             f"verdict: {verdict}"]
    pairs = [("report", "jet"), ("order", str(k)), ("chart", str(d.chart)),
             ("growth_vector", " ".join(str(r) for r in strong.growth_vector)),
             ("modes_agree", "true" if agree else "false"),
             ("verdict", verdict)]
    return _finish(cfg, EXIT_OK, lines, pairs, strong)


def _cmd_ode(cfg: RunConfig) -> DispatchResult:
    spec = parse_ode_spec(" ".join(cfg.inputs))
    check = check_goursat_ode_form(spec)
    d = ode_to_distribution(spec)
    probe = PointQ((0,) * d.chart.dim)
    rep = derived_flag(d, "strong", probe=probe)
    verdict = classify_rank2(d, probe)
    lines = [f"ode order: {spec.order}",
             f"rhs: {spec.rhs}"]
    pairs = [("report", "ode"), ("order", str(spec.order)),
             ("rhs", str(spec.rhs))]
    if check.admissible:
        lines.append("admissible: yes (cubic in the top derivative)")
        pairs.append(("admissible", "true"))
        for i, c in enumerate(check.coefficients):
            lines.append(f"a{i}: {c}")
            pairs.append((f"a{i}", str(c)))
    else:
        deg, coef = check.witness
        lines.append(f"admissible: no (degree {deg} term with coefficient {coef})")
        pairs.append(("admissible", "false"))
        pairs.append(("witness_degree", str(deg)))
        pairs.append(("witness_coefficient", str(coef)))
    lines.append(f"growth vector: ({', '.join(str(r) for r in rep.growth_vector)})")
    lines.append(f"verdict: {verdict}")
    pairs.append(("growth_vector", " ".join(str(r) for r in rep.growth_vector)))
    pairs.append(("verdict", verdict))
    return _finish(cfg, EXIT_OK, lines, pairs, check)


def _cmd_vmrt(cfg: RunConfig) -> DispatchResult:
    h, line = load_hypersurface(_read_file(cfg.inputs[0]))
    if line is None:
        raise InputError("hypersurface file needs a line: entry for vmrt")
    pair = normalize_line(h, line)
    if cfg.point is not None:
        coords = tuple(parse_rational(t) for t in cfg.point.split(","))
    else:
        s = ProbeSampler(cfg.seed).fraction()
        xn = pair.point_at(s)
        # map back to original coordinates for the report
        coords = tuple(
            sum((pair.change_rows[i][j] * xn[j] for j in range(len(xn))),
                start=Fraction(0))
            for i in range(len(xn)))
    s = pair.line_parameter(coords)
    # use the caller's projective representative verbatim: rescaling the
    # point rescales h_k by c^k (same subscheme, different printed forms)
    xn = pair.to_normalized_point(coords)
    hs = vmrt_equations(pair.hyper, xn)
    gs = affine_vmrt(pair.hyper, xn, "y1" if s != "inf" else "y0")
    prof = ff_profile_at_point(h, line, coords, order=cfg.order)
    lines = [f"point: [{':'.join(str(c) for c in coords)}] (parameter {s})"]
    pairs = [("report", "vmrt"),
             ("point", " ".join(str(c) for c in coords)),
             ("parameter", str(s))]
    for i, p in enumerate(hs, start=1):
        lines.append(f"h{i}: {p}")
        pairs.append((f"h{i}", str(p)))
    for i, p in enumerate(gs, start=1):
        lines.append(f"g{i}: {p}")
        pairs.append((f"g{i}", str(p)))
    lines.append(f"tangent dimension at the line direction: {prof.tangent_dim}")
    pairs.append(("tangent_dim", str(prof.tangent_dim)))
    status = EXIT_OK
    if prof.ranks is not None:
        germ = prof.germ
        names = ("a", "b", "c", "d", "e", "f")
        for name, vec in zip(names, germ.coefficient_vectors()):
            lines.append(f"branch {name}: ({', '.join(str(v) for v in vec)})")
            pairs.append((f"branch.{name}", " ".join(str(v) for v in vec)))
        lines.append(f"transverse coordinate: {germ.transverse}")
        pairs.append(("transverse", germ.transverse))
        lines.append(f"osculating ranks: ({', '.join(str(r) for r in prof.ranks)})")
        pairs.append(("ff_ranks", " ".join(str(r) for r in prof.ranks)))
    else:
        lines.append("VMRT is singular at the line direction over this point")
        pairs.append(("ff_ranks", "n/a"))
        status = EXIT_INCONCLUSIVE
    return _finish(cfg, status, lines, pairs, prof)


def _cmd_line_type(cfg: RunConfig) -> DispatchResult:
    h, line = load_hypersurface(_read_file(cfg.inputs[0]))
    if line is None:
        raise InputError("hypersurface file needs a line: entry for line-type")
    rep = classify_line_family(h, line, order=cfg.order, probes=cfg.probes,
                               seed=cfg.seed)
    lines = [f"verdict: {rep.verdict}",
             f"reason: {rep.reason}",
             f"contains line: {'yes' if rep.contains else 'no'}",
             f"smooth along line: {'yes' if rep.smooth_along_line else 'no'}"]
    if rep.normal_bundle is not None:
        lines.append(f"normal bundle splitting: {rep.normal_bundle}")
    for key in sorted(rep.ff_profiles):
        lines.append(f"ff ranks at {key}: "
                     f"({', '.join(str(r) for r in rep.ff_profiles[key])})")
    if rep.ff3_locus is not None:
        lines.append(f"ff3 vanishing locus: {rep.ff3_locus.describe()}")
        inf = rep.ff3_locus.infinity_ff3_nonzero
        lines.append("ff3 at infinity chart: "
                     + ("nonzero" if inf else "zero" if inf is False else "singular"))
    if rep.bracket_generating_probe:
        lines.append(f"bracket-generating certificate at {rep.bracket_generating_probe}")
    status = EXIT_OK if rep.verdict in (GOURSAT, CARTAN) else EXIT_INCONCLUSIVE
    return _finish(cfg, status, lines, kvio.vmrt_report_to_kv(rep), rep)


def _cmd_zelenko(cfg: RunConfig) -> DispatchResult:
    d, probe = load_distribution(_read_file(cfg.inputs[0]))
    probe = _pick_probe(d, probe, cfg.seed)
    res = zelenko_null_field(d, probe)
    rec = res.record
    ok = rec.all_pass()
    lines = [f"chart of the annihilator bundle: {res.chart}",
             f"null field: {res.null_field}",
             f"theta(null) = 0: {'pass' if rec.theta_vanishes else 'FAIL'}",
             f"transverse to fibers: {'pass' if rec.transverse_to_fibers else 'FAIL'}",
             f"projects into D: {'pass' if rec.projects_into_d else 'FAIL'}",
             f"null space dimension: {rec.null_space_dim}",
             f"all checks: {'pass' if ok else 'FAIL'}"]
    pairs = [("report", "zelenko"), ("chart", str(res.chart)),
             ("null_field", str(res.null_field)),
             ("theta_vanishes", "true" if rec.theta_vanishes else "false"),
             ("transverse", "true" if rec.transverse_to_fibers else "false"),
             ("projects_into_d", "true" if rec.projects_into_d else "false"),
             ("null_space_dim", str(rec.null_space_dim)),
             ("all_pass", "true" if ok else "false")]
    return _finish(cfg, EXIT_OK if ok else EXIT_INCONCLUSIVE, lines, pairs, res)


def _cmd_family(cfg: RunConfig) -> DispatchResult:
    zeta = load_family(_read_file(cfg.inputs[0]))
    fc = blowup_family_chart(zeta)
    sampler = ProbeSampler(cfg.seed)

    def valid(pt: PointQ) -> bool:
        try:
            for g in fc.V_gens + fc.F_gens:
                g.eval_at(pt)
            return True
        except ProbeError:
            return False

    probe = sampler.point(fc.chart.dim, valid=valid)
    rep = family_flag(fc, max_k=cfg.max_k, probe=probe)
    checks = {k: check_F_invariance(fc, k, probe) for k in (1, 2, 3)}
    t2 = check_T2_identity(fc, probe)
    lines = [f"chart: {fc.chart}",
             f"probe: {probe}",
             "flag ranks (T^0..): ("
             + ", ".join(str(r) for r in rep.generic_growth) + ")"]
    for k in (1, 2, 3):
        lines.append(f"[F, T^{k}] inside T^{k}: {'yes' if checks[k] else 'no'}")
    lines.append(f"second-step identity (vertical = strong = weak): "
                 f"{'yes' if t2 else 'no'}")
    pairs = [("report", "family"), ("chart", str(fc.chart)),
             ("probe", str(probe)),
             ("flag_ranks", " ".join(str(r) for r in rep.generic_growth))]
    for k in (1, 2, 3):
        pairs.append((f"f_invariance.{k}", "true" if checks[k] else "false"))
    pairs.append(("t2_identity", "true" if t2 else "false"))
    return _finish(cfg, EXIT_OK, lines, pairs, rep)


_COMMANDS = {
    "growth": _cmd_growth,
    "classify": _cmd_classify,
    "jet": _cmd_jet,
    "ode": _cmd_ode,
    "vmrt": _cmd_vmrt,
    "line-type": _cmd_line_type,
    "zelenko": _cmd_zelenko,
    "family": _cmd_family,
}


def dispatch(cfg: RunConfig) -> DispatchResult:
    handler = _COMMANDS.get(cfg.subcommand)
    if handler is None:
        raise InputError(f"unknown subcommand {cfg.subcommand!r}")
    try:
        return handler(cfg)
    except (InputError, ParseError) as exc:
        return DispatchResult(EXIT_INPUT, f"input error: {exc}\n")
    except (ClassifyError, ProbeError, UndecidedError, VmrtError, JetError,
            FamilyError, DenominatorZeroError, PipelineError, ScalarError) as exc:
        return DispatchResult(EXIT_INCONCLUSIVE, f"{exc}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="urc",
        description="exact-arithmetic toolkit for rank-2 distributions, "
                    "jet systems and line families on hypersurfaces")
    ap.add_argument("subcommand", choices=sorted(_COMMANDS))
    ap.add_argument("inputs", nargs="*",
                    help="input file, jet order, or ODE spec tokens")
    ap.add_argument("--order", type=int, default=4,
                    help="series expansion depth (default 4)")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for probe sampling (default 0)")
    ap.add_argument("--probes", type=int, default=3,
                    help="number of probe points (default 3)")
    ap.add_argument("--max-steps", type=int, default=None,
                    help="flag step bound (default: chart dimension + 1)")
    ap.add_argument("--max-k", type=int, default=None,
                    help="family flag depth bound")
    ap.add_argument("--mode", choices=("strong", "weak"), default="strong",
                    help="derived flag mode for growth")
    ap.add_argument("--point", default=None,
                    help="projective point as comma-separated rationals")
    ap.add_argument("--format", dest="fmt", choices=("text", "structured"),
                    default="text")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.order < 2:
        print("input error: --order must be >= 2", file=sys.stderr)
        return EXIT_INPUT
    if args.probes < 1:
        print("input error: --probes must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    if not args.inputs:
        print("input error: missing input (file, jet order or ODE spec)",
              file=sys.stderr)
        return EXIT_INPUT
    cfg = RunConfig(subcommand=args.subcommand, inputs=args.inputs,
                    order=args.order, seed=args.seed, probes=args.probes,
                    max_steps=args.max_steps, mode=args.mode, fmt=args.fmt,
                    point=args.point, max_k=args.max_k)
    result = dispatch(cfg)
    sys.stdout.write(result.text)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
