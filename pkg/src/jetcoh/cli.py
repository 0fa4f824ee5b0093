"""Command-line front end.

    jetcoh --input torus.txt compare-theorem
    jetcoh --input plane.txt --mode machine lambda-bracket x_1 y_1

Exit status: 0 when every check passes, 1 when a mathematical check fails,
2 on input or precondition errors.
"""
import argparse
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from . import lc
from .errors import ConsistencyError, JetcohError
from .jets import JetRing, enumerate_monomials
from .lambda_bracket import PVAStructure, closed_form_survey, induced_poisson_at_lambda_zero, pva_axiom_suite
from .loop_complex import (BlockResult, MultidegreeWindow, blockwise_cohomology, build_base_complex,
                           build_loop_complex, cartan_suite, theorem_symplectic_check)
from .poisson import (CheckResult, PoissonStructure, algebroid_axiom_check, cotangent_algebroid,
                      schouten_jacobi_check, tangent_algebroid)
from .problem import ParseError, ProblemSpec, parse_expression, parse_problem

COMMANDS = ("check-poisson", "jet-info", "lambda-bracket", "pva-check", "loop-cohomology",
            "derham", "lc-crosscheck", "compare-theorem")


@dataclass
class Report:
    command: str
    variety: str
    blocks: List[BlockResult] = field(default_factory=list)
    checks: List[CheckResult] = field(default_factory=list)
    values: List[Tuple[str, str]] = field(default_factory=list)
    verdict: Optional[bool] = None

    @property
    def ok(self):
        if self.verdict is not None and not self.verdict:
            return False
        return all(c.passed for c in self.checks)


@dataclass
class Options:
    command: str
    args: List[str] = field(default_factory=list)
    algebroid: str = "cotangent"
    reduce: bool = True
    jobs: int = 1


def _token(s: str) -> str:
    return "".join(str(s).split())


def _window(spec: ProblemSpec) -> MultidegreeWindow:
    return MultidegreeWindow(tuple(spec.multidegree), spec.total)


def _poisson(spec: ProblemSpec) -> PoissonStructure:
    return PoissonStructure(spec.base, dict(spec.brackets))


def run_command(spec: ProblemSpec, opts: Options) -> Report:
    rep = Report(opts.command, spec.variety)
    base = spec.base
    W = spec.weight
    win = _window(spec)
    cmd = opts.command
    if cmd == "check-poisson":
        P = _poisson(spec)
        res = schouten_jacobi_check(P)
        rep.checks.append(res)
        if res:
            rep.checks.append(algebroid_axiom_check(cotangent_algebroid(P)))
        q = P.bivector_degree()
        rep.values.append(("bivector-degree", "inhomogeneous" if q is None else _token(q)))
    elif cmd == "jet-info":
        ring = JetRing(base, W)
        rep.values.append(("cutoff", str(W)))
        rep.values.append(("jet-variables", str(len(ring.variables()))))
        rep.values.append(("invertible", ",".join(base.names[a] for a in sorted(base.invertible)) or "none"))
        for w in range(W + 1):
            count = sum(len(enumerate_monomials(base.m, base.invertible, w, d, max_level=W))
                        for d in win.degrees() if all(x >= 0 or a in base.invertible for a, x in enumerate(d)))
            rep.values.append((f"monomials-w{w}", str(count)))
    elif cmd == "lambda-bracket":
        if len(opts.args) != 2:
            raise ParseError("lambda-bracket needs two expressions <f> <g>")
        P = PVAStructure(JetRing(base, W), _poisson(spec))
        f, g = (parse_expression(a, base.names, base.invertible, jets=True) for a in opts.args)
        for p in (f, g):
            for mono in p.terms:
                for (_, i), _ in mono:
                    if i > W:
                        raise ParseError(f"jet level {i} exceeds the weight window W={W}")
        val = P.bracket(f.with_invertible(P.ring.invertible), g.with_invertible(P.ring.invertible))
        rep.values.append(("bracket", val.format(name=base.var_name)))
    elif cmd == "pva-check":
        pi = _poisson(spec)
        P = PVAStructure(JetRing(base, W), pi)
        rep.checks.extend(pva_axiom_suite(P, W))
        winners, _ = closed_form_survey(P, W)
        rep.checks.append(CheckResult("closed-form-oracle", bool(winners), "reading=" + ",".join(winners)))
        rec = induced_poisson_at_lambda_zero(P)
        rep.checks.append(CheckResult("lambda-zero-round-trip", rec.pi == pi.pi))
    elif cmd in ("loop-cohomology", "derham"):
        if cmd == "derham":
            C = build_base_complex(tangent_algebroid(base))
            weights, reduce = [0], False
        else:
            L = cotangent_algebroid(_poisson(spec)) if opts.algebroid == "cotangent" else tangent_algebroid(base)
            C = build_loop_complex(L, W)
            weights, reduce = range(W + 1), opts.reduce
        rep.checks.extend(C.checks)
        r = blockwise_cohomology(C, reduce, weights, win, opts.jobs)
        rep.blocks = r.blocks
        rep.checks.extend(r.checks)
        for n, h in r.totals().items():
            rep.values.append((f"H{n}", str(h)))
        if cmd == "loop-cohomology":
            bad = [b for b in r.blocks if b.label[1] > 0 and b.hdim]
            rep.checks.append(CheckResult("positive-weight-acyclic", not bad,
                                          "" if not bad else f"block=({bad[0].label[0]},{bad[0].label[1]},"
                                          f"{_token(bad[0].label[2])})"))
            if opts.algebroid == "tangent":
                rep.checks.extend(cartan_suite(C, range(1, W + 1), win))
    elif cmd == "lc-crosscheck":
        P = PVAStructure(JetRing(base, W), _poisson(spec))
        ir = lc.intertwine_check(P, W, win, max_degree=spec.lcdegree)
        rep.checks.extend(ir.checks)
        rep.values.append(("convention", _token(ir.convention)))
    elif cmd == "compare-theorem":
        res = theorem_symplectic_check(_poisson(spec), W, win, opts.jobs)
        rep.blocks = res.report.blocks
        rep.checks.extend(res.checks)
        for n, h in res.report.totals().items():
            rep.values.append((f"H{n}", str(h)))
        for n, h in res.base_report.totals().items():
            rep.values.append((f"base-H{n}", str(h)))
        rep.verdict = res.verdict
    else:
        raise ParseError(f"unknown command {cmd!r}")
    return rep


def _block_fields(b: BlockResult):
    n, w, d = b.label
    return n, w, "(" + ",".join(str(x) for x in d) + ")", b.dim, b.hdim


def emit_report(r: Report, mode: str = "human") -> str:
    lines = []
    if mode == "machine":
        lines.append(f"command {r.command}")
        lines.append(f"variety {r.variety}")
        for b in r.blocks:
            n, w, d, dim, h = _block_fields(b)
            lines.append(f"block deg={n} w={w} d={d} dim={dim} hdim={h}")
        for k, v in r.values:
            lines.append(f"value {k}={_token(v)}")
        for c in r.checks:
            s = f"check {c.name} {'pass' if c.passed else 'fail'}"
            if c.detail:
                s += f" detail={_token(c.detail)}"
            lines.append(s)
        if r.verdict is not None:
            lines.append(f"verdict {'PASS' if r.verdict else 'FAIL'}")
        return "\n".join(lines) + "\n"
    lines.append(f"{r.command} on {r.variety}")
    if r.blocks:
        rows = [("deg", "w", "d", "dim", "hdim")] + [tuple(str(x) for x in _block_fields(b)) for b in r.blocks]
        widths = [max(len(row[k]) for row in rows) for k in range(5)]
        for row in rows:
            lines.append("  " + "  ".join(c.rjust(wd) for c, wd in zip(row, widths)))
    if r.values:
        kw = max(len(k) for k, _ in r.values)
        for k, v in r.values:
            lines.append(f"  {k.ljust(kw)}  {v}")
    if r.checks:
        cw = max(len(c.name) for c in r.checks)
        for c in r.checks:
            lines.append(f"  {c.name.ljust(cw)}  {'pass' if c.passed else 'FAIL'}" + (f"  {c.detail}" if c.detail else ""))
    if r.verdict is not None:
        lines.append(f"verdict {'PASS' if r.verdict else 'FAIL'}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jetcoh", description="Jet-ring Poisson vertex and loop de Rham-Lie computations.")
    ap.add_argument("--input", required=True, help="problem document")
    ap.add_argument("--mode", choices=("human", "machine"), default="human")
    ap.add_argument("--algebroid", choices=("cotangent", "tangent"), default="cotangent")
    ap.add_argument("--reduce", choices=("on", "off"), default="on")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("args", nargs="*", help="command arguments (lambda-bracket: <f> <g>)")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        with open(ns.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: [cli] cannot read {ns.input}: {exc.strerror}", file=sys.stderr)
        return 2
    opts = Options(ns.command, list(ns.args), ns.algebroid, ns.reduce == "on", max(1, ns.jobs))
    try:
        spec = parse_problem(text)
        rep = run_command(spec, opts)
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except JetcohError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_report(rep, ns.mode))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
