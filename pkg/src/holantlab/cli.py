"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 format, 3 budget, 4 verification failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats as F
from .graph import DEFAULT_EDGE_BUDGET, BudgetExceeded, GraphError
from .gridtiling import DEFAULT_SEARCH_BUDGET
from .scalar import Scalar

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(x, pretty: bool) -> str:
    s = Scalar.coerce(x)
    text = str(s)
    if pretty and (s.re.denominator != 1 or s.im.denominator != 1):
        approx = f"{float(s.re):.12g}" if s.im == 0 else f"{float(s.re):.12g}{float(s.im):+.12g}i"
        text += f" (~{approx})"
    return text


def _out(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# commands

def cmd_holant_eval(args):
    from .graph import holant, weighted_graph_to_signature_graph
    doc = F.read_json(args.file)
    if isinstance(doc, dict) and doc.get("format") == "weighted-graph":
        eg, _ = F.decode_embedded(doc)
        g = weighted_graph_to_signature_graph(eg.vertices, eg.edges)
    else:
        g = F.decode_graph(doc)
    print(_fmt(holant(g, method=args.method, budget=args.edge_budget), args.pretty))


def cmd_gate_sig(args):
    from .gates import gate_signature
    from .signatures import all_inputs, bits_str
    gate = F.decode_gate(F.read_json(args.file))
    if gate.arity > args.arity_budget:
        raise BudgetExceeded(f"gate arity {gate.arity} exceeds --arity-budget {args.arity_budget}")
    table = gate_signature(gate)
    lines = []
    for bits in all_inputs(gate.arity):
        v = table(bits)
        if args.all or not v.is_zero():
            lines.append(f"{bits_str(bits) or '-'} {_fmt(v, args.pretty)}")
    print("\n".join(lines) if lines else "(all zero)")


def cmd_matchgate_verify(args):
    from .matchgates import NAMED_BUILDERS, NamedMatchgate, verify_matchgate
    name = args.target.upper()
    if name not in NAMED_BUILDERS and "GAMMA_" + name in NAMED_BUILDERS:
        name = "GAMMA_" + name
    if name in NAMED_BUILDERS and not Path(args.target).exists():
        mg = NAMED_BUILDERS[name]()
    else:
        doc = F.read_json(args.target)
        gate = F.decode_gate(doc)
        if "target" not in doc:
            raise F.FormatError("gate file needs a 'target' signature to verify against", "$")
        mg = NamedMatchgate(Path(args.target).name, gate, F.decode_signature(doc["target"], "$.target"))
    rep = verify_matchgate(mg)
    if args.table:
        for bits, got, want in rep.rows:
            mark = "ok" if got == want else "MISMATCH"
            print(f"{bits} {_fmt(got, args.pretty)} {_fmt(want, args.pretty)} {mark}")
    good = rep.total - len(rep.mismatches)
    print(f"{good}/{rep.total} inputs match")
    if rep.mismatches:
        raise VerificationFailed(f"{mg.name}: {len(rep.mismatches)} mismatching inputs")


def cmd_pm(args):
    from .matching import perfmatch_apex, perfmatch_bruteforce, perfmatch_fkt
    g, apices = F.decode_embedded(F.read_json(args.file))
    if args.apex:
        apices = [F.decode_id(F.loads(a) if a[:1] in "[0123456789-" else a) for a in args.apex]
    if args.method == "brute":
        if len(g.vertices) > args.vertex_budget:
            raise BudgetExceeded(f"{len(g.vertices)} vertices exceed --vertex-budget {args.vertex_budget}")
        val = perfmatch_bruteforce(g)
    elif args.method == "fkt":
        val = perfmatch_fkt(g)
    else:
        if len(apices) > args.apex_budget:
            raise BudgetExceeded(f"{len(apices)} apices exceed --apex-budget {args.apex_budget}")
        stats: dict = {}
        val = perfmatch_apex(g, apices, stats)
    print(_fmt(val, args.pretty))


def cmd_perm(args):
    from .linalg import permanent, permanent_mod
    rows = F.decode_matrix(F.read_json(args.file))
    if len(rows) > args.size_budget:
        raise BudgetExceeded(f"{len(rows)}x{len(rows)} matrix exceeds --size-budget {args.size_budget}")
    if args.mod_log is None:
        print(_fmt(permanent(rows), args.pretty))
    else:
        if args.mod_log < 1:
            raise UsageError("--mod-log must be positive")
        print(f"{permanent_mod(rows, 1 << args.mod_log)} (mod 2^{args.mod_log})")


def cmd_ring(args):
    from .mod2k import mod_ring_demo
    res = mod_ring_demo(args.a, args.b, args.m)
    for key in ("sum", "difference", "product", "power", "two_to_m"):
        print(f"{key}={res[key].value}")


def cmd_genus_pm(args):
    from .genus import genus_perfmatch
    model = F.decode_plane_model(F.read_json(args.file))
    res = genus_perfmatch(model, check=False, jobs=args.jobs)
    print(_fmt(res.value, args.pretty))
    print(f"constituents={res.constituents} fkt_calls={res.fkt_calls}")
    if args.terms:
        for choice, coef, pm in res.terms:
            print(f"  term={''.join(map(str, choice)) or '-'} coef={coef} perfmatch={pm}")


def cmd_gridtiling(args):
    from .gridtiling import VERTICAL, HORIZONTAL, balance, count_tilings, parity_tilings
    t = F.decode_instance(F.read_json(args.file))
    if args.action == "count":
        print(count_tilings(t, budget=args.search_budget))
    elif args.action == "parity":
        print(parity_tilings(t, budget=args.search_budget))
    else:
        direction = VERTICAL if args.direction == "vertical" else HORIZONTAL
        bal, T = balance(t, direction)
        sys.stderr.write(f"T={T}\n")
        _out(args, F.dumps(F.encode_instance(bal)))


def cmd_reduce(args):
    from .gridtiling import (VERTICAL, HORIZONTAL, balance, clique_to_psub, count_cliques, count_psub,
                             count_tilings, psub_to_gridtiling)
    doc = F.read_json(args.file)
    if args.kind == "clique":
        if args.k is None:
            raise UsageError("reduce clique needs --k")
        verts, edges = F.decode_simple_graph(doc)
        p, mult = clique_to_psub((verts, edges), args.k)
        out = F.encode_psub(p)
        out["multiplier"] = mult
        if args.verify:
            a, b = count_psub(p, budget=args.search_budget), count_cliques((verts, edges), args.k)
            sys.stderr.write(f"copies={a} cliques={b} multiplier={mult}\n")
            if a != mult * b:
                raise VerificationFailed("copies != multiplier * cliques")
        _out(args, F.dumps(out))
    elif args.kind == "psub":
        p = F.decode_psub(doc)
        t = psub_to_gridtiling(p)
        if args.verify:
            a, b = count_psub(p, budget=args.search_budget), count_tilings(t, budget=args.search_budget)
            sys.stderr.write(f"copies={a} tilings={b}\n")
            if a != b:
                raise VerificationFailed("reduction is not parsimonious on this input")
        _out(args, F.dumps(F.encode_instance(t)))
    else:
        t = F.decode_instance(doc)
        direction = VERTICAL if args.direction == "vertical" else HORIZONTAL
        bal, T = balance(t, direction)
        if args.verify:
            a, b = count_tilings(t, budget=args.search_budget), count_tilings(bal, budget=args.search_budget)
            sys.stderr.write(f"T={T} tilings_before={a} tilings_after={b}\n")
            if a != b:
                raise VerificationFailed("balancing changed the tiling count")
        _out(args, F.dumps(F.encode_instance(bal)))


def _branch_name(omega) -> str:
    return "branch_" + ("".join(map(str, omega)) or "empty")


def cmd_pipeline_apex(args):
    from .apex import verify_combined_gridtiling
    t = F.decode_instance(F.read_json(args.file))
    emit = None
    if args.emit_branches:
        outdir = Path(args.emit_branches)
        outdir.mkdir(parents=True, exist_ok=True)

        def emit(br):
            doc = F.encode_graph(br.graph)
            doc["apices"] = [F.encode_id(a) for a in br.apices]
            doc["coefficient"] = F.encode_scalar(br.coefficient)
            F.write_json(outdir / f"{_branch_name(br.omega)}.graph", doc)
    rep = verify_combined_gridtiling(t, abstract=args.abstract, emit=emit, jobs=args.jobs)
    if args.verify:
        print(rep.dump())
        if not rep.ok:
            raise VerificationFailed(f"tiling count {rep.lhs} != combination {rep.rhs}")
    else:
        print(_fmt(rep.rhs, args.pretty))


def cmd_pipeline_mod2k(args):
    from .mod2k import modulo_combination_eval
    t = F.decode_instance(F.read_json(args.file))
    emit = None
    if args.emit_branches:
        outdir = Path(args.emit_branches)
        outdir.mkdir(parents=True, exist_ok=True)

        def emit(omega, g, apices):
            doc = F.encode_graph(g)
            doc["apices"] = [F.encode_id(a) for a in apices]
            F.write_json(outdir / f"{_branch_name(omega)}.graph", doc)
    parity, tr = modulo_combination_eval(t, modulus_log=args.modulus_log, abstract=args.abstract,
                                         emit=emit, jobs=args.jobs)
    if args.transcript:
        Path(args.transcript).write_text("\n".join(tr.lines()) + "\n")
    where = "M" if parity else "0"
    print(f"parity={parity} (sum = {where} mod 2M)")


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="holantlab", description="Exact Holant, matchgate and PerfMatch tools.")
    p.add_argument("--pretty", action="store_true", help="append decimal approximations to fractions")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for branch evaluation")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)
    sub.required = True

    h = sub.add_parser("holant").add_subparsers(dest="sub", parser_class=_Parser)
    h.required = True
    x = h.add_parser("eval")
    x.add_argument("file")
    x.add_argument("--method", choices=("contract", "enumerate"), default="contract")
    x.add_argument("--edge-budget", type=int, default=DEFAULT_EDGE_BUDGET)
    x.set_defaults(func=cmd_holant_eval)

    gsub = sub.add_parser("gate").add_subparsers(dest="sub", parser_class=_Parser)
    gsub.required = True
    x = gsub.add_parser("sig")
    x.add_argument("file")
    x.add_argument("--all", action="store_true", help="print zero entries too")
    x.add_argument("--arity-budget", type=int, default=20)
    x.set_defaults(func=cmd_gate_sig)

    m = sub.add_parser("matchgate").add_subparsers(dest="sub", parser_class=_Parser)
    m.required = True
    x = m.add_parser("verify")
    x.add_argument("target", help="GAMMA_PASS, GAMMA_PRE, GAMMA_ACT, DUMMY or a gate file")
    x.add_argument("--table", action="store_true", help="print the full comparison table")
    x.set_defaults(func=cmd_matchgate_verify)

    x = sub.add_parser("pm")
    x.add_argument("method", choices=("brute", "fkt", "apex"))
    x.add_argument("file")
    x.add_argument("--apex", action="append", help="apex vertex id (repeatable; overrides the file)")
    x.add_argument("--vertex-budget", type=int, default=40)
    x.add_argument("--apex-budget", type=int, default=8)
    x.set_defaults(func=cmd_pm)

    x = sub.add_parser("perm")
    x.add_argument("file")
    x.add_argument("--mod-log", type=int, default=None, help="reduce modulo 2^K")
    x.add_argument("--size-budget", type=int, default=20)
    x.set_defaults(func=cmd_perm)

    x = sub.add_parser("ring")
    x.add_argument("a", type=int)
    x.add_argument("b", type=int)
    x.add_argument("--m", type=int, required=True, help="work in Z/2^m")
    x.set_defaults(func=cmd_ring)

    gs = sub.add_parser("genus").add_subparsers(dest="sub", parser_class=_Parser)
    gs.required = True
    x = gs.add_parser("pm")
    x.add_argument("file")
    x.add_argument("--terms", action="store_true", help="list every constituent")
    x.set_defaults(func=cmd_genus_pm)

    x = sub.add_parser("gridtiling")
    x.add_argument("action", choices=("count", "parity", "balance"))
    x.add_argument("file")
    x.add_argument("--direction", choices=("vertical", "horizontal"), default="vertical")
    x.add_argument("--search-budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    x.add_argument("--out")
    x.set_defaults(func=cmd_gridtiling)

    x = sub.add_parser("reduce")
    x.add_argument("kind", choices=("clique", "psub", "gridtiling"))
    x.add_argument("file")
    x.add_argument("--k", type=int)
    x.add_argument("--direction", choices=("vertical", "horizontal"), default="vertical")
    x.add_argument("--verify", action="store_true", help="recount both sides")
    x.add_argument("--search-budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    x.add_argument("--out")
    x.set_defaults(func=cmd_reduce)

    pl = sub.add_parser("pipeline").add_subparsers(dest="sub", parser_class=_Parser)
    pl.required = True
    x = pl.add_parser("apex")
    x.add_argument("file")
    x.add_argument("--verify", action="store_true")
    x.add_argument("--abstract", action="store_true", help="skip flattening; contract signature graphs")
    x.add_argument("--emit-branches", metavar="DIR")
    x.set_defaults(func=cmd_pipeline_apex)
    x = pl.add_parser("mod2k")
    x.add_argument("file")
    x.add_argument("--modulus-log", type=int, default=None)
    x.add_argument("--abstract", action="store_true")
    x.add_argument("--emit-branches", metavar="DIR")
    x.add_argument("--transcript", metavar="FILE")
    x.set_defaults(func=cmd_pipeline_mod2k)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        args.func(args)
        return EXIT_OK
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except VerificationFailed as exc:
        sys.stderr.write(f"verification failed: {exc}\n")
        return EXIT_VERIFY
    except ArithmeticError as exc:
        # invariant checks inside the pipelines
        sys.stderr.write(f"verification failed: {exc}\n")
        return EXIT_VERIFY
    except F.FormatError as exc:
        sys.stderr.write(f"format error: {exc}\n")
        return EXIT_FORMAT
    except (GraphError, ValueError, KeyError) as exc:
        sys.stderr.write(f"format error: {exc}\n")
        return EXIT_FORMAT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
