"""Command-line interface.

Every subcommand builds a report dict, prints it as text or JSON, and exits
with 0 (verified), 1 (axiom or verification failure), 2 (usage or
configuration error) or 3 (inconclusive within the solver budget).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import randgen
from .barcobar import TruncationError, bar_ass, bar_com, bar_lie, bar_unital, cobar_ass
from .dgcore import AxiomError, DgAlgebra, DgLieAlgebra, check_axioms
from .exactalg import fmt
from .presentation import ParseError, dumps, parse

OK, FAILURE, USAGE, INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --- helpers ------------------------------------------------------------------------

def _load(path: str, check: bool = True):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        obj = parse(text)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if check:
        bad = check_axioms(obj)
        if bad:
            raise AxiomError(bad)
    return obj


def _algebra(path: str) -> DgAlgebra:
    A = _load(path)
    if not isinstance(A, DgAlgebra):
        raise UsageError(f"{path}: expected an associative or commutative algebra, got a Lie algebra")
    return A


def _lie(path: str) -> DgLieAlgebra:
    g = _load(path)
    if not isinstance(g, DgLieAlgebra):
        raise UsageError(f"{path}: expected a Lie algebra presentation (lie flag)")
    return g


def _window(s: str) -> Tuple[int, int]:
    try:
        lo, hi = (int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("degree window must be 'lo,hi'") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("degree window must have lo <= hi")
    return lo, hi


def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s!r}")
    return v


def element_to_json(g, x) -> Dict[str, str]:
    """Entries keyed "weight:word->target" with "p/q" values, sorted."""
    names = g.target.space.names
    out = {}
    for (w, i, j), c in sorted(x.items()):
        if c:
            out[f"{w}:{g.C.labels[w][i]}->{names[j]}"] = fmt(c)
    return out


def element_from_json(g, d: Dict[str, str]):
    names = {n: j for j, n in enumerate(g.target.space.names)}
    labels = {(w, l): i for w, ls in g.C.labels.items() for i, l in enumerate(ls)}
    out = {}
    for key, val in d.items():
        head, _, tgt = key.rpartition("->")
        w, _, label = head.partition(":")
        try:
            e = (int(w), labels[(int(w), label)], names[tgt])
        except (KeyError, ValueError):
            raise UsageError(f"unknown entry {key!r} for this convolution algebra") from None
        try:
            c = Fraction(val)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad scalar {val!r} for {key!r}") from None
        if c:
            out[e] = c
    return out


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _convolution(A: DgAlgebra, A2: DgAlgebra, flavor: str, W: int):
    from .mc import convolution
    if A.unital:
        if not A2.unital:
            raise UsageError("a unital source needs a unital target")
        C = bar_unital(A, "commutative" if flavor == "com" else "associative", W)
    else:
        C = bar_com(A, W) if flavor == "com" else bar_ass(A, W)
    return convolution(C, A2, W)


def _matrix_rows(B, table, w, shift):
    src = B.dim(w)
    tgt = B.dim(w - shift)
    rows = [["0"] * src for _ in range(tgt)]
    for i, col in table.get(w, {}).items():
        for j, c in col.items():
            rows[j][i] = fmt(c)
    return rows


# --- commands -------------------------------------------------------------------------

def cmd_check(args):
    obj = _load(args.file, check=False)
    bad = check_axioms(obj)
    kind = "lie" if isinstance(obj, DgLieAlgebra) else ("commutative" if obj.commutative else "associative")
    report = {"command": "check", "name": obj.name, "kind": kind, "dim": obj.space.dim,
              "ok": not bad, "violations": [{"identity": v.identity, "witness": list(v.witness),
                                             "detail": v.detail} for v in bad]}
    lines = [f"{obj.name}: {kind}, dim {obj.space.dim}"]
    lines += [f"VIOLATION {v}" for v in bad] or ["all axioms hold"]
    return report, lines, OK if not bad else FAILURE


def cmd_bar(args):
    obj = _load(args.file)
    W = args.max_weight
    flavor = args.flavor
    if flavor in ("lie", "ulie"):
        if not isinstance(obj, DgLieAlgebra):
            raise UsageError(f"flavor {flavor} needs a Lie algebra input")
        B = bar_lie(obj, W)
    else:
        if not isinstance(obj, DgAlgebra):
            raise UsageError(f"flavor {flavor} needs an algebra input")
        if flavor == "ass":
            B = bar_ass(obj, W)
        elif flavor == "com":
            try:
                B = bar_com(obj, W)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        else:
            if not obj.unital:
                raise UsageError(f"flavor {flavor} needs a unital algebra")
            try:
                B = bar_unital(obj, "associative" if flavor == "uass" else "commutative", W)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    dims = B.dims()
    report = {"command": "bar", "flavor": flavor, "max_weight": W, "kind": B.kind, "dims": dims,
              "by_degree": B.dimension_table()["by_degree"],
              "labels": {w: B.labels[w] for w in range(1, W + 1)},
              "d0": {w: _matrix_rows(B, B.d0, w, 0) for w in range(1, W + 1)},
              "d1": {w: _matrix_rows(B, B.d1, w, 1) for w in range(2, W + 1)},
              "curvature": {f"{w}:{B.labels[w][i]}": fmt(c) for (w, i), c in sorted(B.curvature.items())}}
    if flavor == "ulie":
        from .pbw import EnvelopingAlgebra, sym_dims
        T = args.cap_T or W
        U = EnvelopingAlgebra(obj, T)
        report["enveloping"] = {"T": T, "length_dims": U.length_dims(), "sym_dims": sym_dims(obj.space.degrees, T)}
    bad = B.check_axioms()
    report["axioms"] = [str(v) for v in bad]
    lines = [f"{B.kind} bar through weight {W}", "dims " + ",".join(map(str, dims))]
    for w in range(1, W + 1):
        if B.dim(w):
            lines.append(f"weight {w}: " + " ".join(B.labels[w]))
    if B.curvature:
        lines.append("curvature " + ", ".join(f"{k}={v}" for k, v in report["curvature"].items()))
    if flavor == "ulie":
        e = report["enveloping"]
        lines.append(f"U length dims (T={e['T']}) " + ",".join(map(str, e["length_dims"])))
    lines.append("axioms hold" if not bad else f"{len(bad)} axiom violations")
    return report, lines, OK if not bad else FAILURE


def cmd_cobar(args):
    A = _algebra(args.file)
    if A.unital:
        raise UsageError("cobar takes the bar of a non-unital algebra")
    W = args.max_weight
    C = cobar_ass(bar_ass(A, W), args.degree_window, W)
    H = C.homology()
    from .dgcore import homology_of
    H_A = {k: v[0] for k, v in homology_of(A, args.degree_window).items()}
    report = {"command": "cobar", "max_weight": W, "window": list(args.degree_window),
              "homology": {k: H[k] for k in sorted(H)}, "homology_of_A": {k: H_A[k] for k in sorted(H_A)}}
    lines = [f"cobar(bar A) through weight {W}, degrees {args.degree_window[0]}..{args.degree_window[1]}",
             "H " + ", ".join(f"{k}:{v}" for k, v in sorted(H.items())),
             "H(A) " + ", ".join(f"{k}:{v}" for k, v in sorted(H_A.items()))]
    return report, lines, OK


def cmd_mc(args):
    from .mc import mc_check, mc_extend
    A, A2 = _algebra(args.source), _algebra(args.target)
    g = _convolution(A, A2, args.flavor, args.max_weight)
    if args.element:
        data = _read_json(args.element)
        alpha = element_from_json(g, data.get("alpha", data))
        sampled = False
    else:
        rng = random.Random(args.seed)
        base = randgen.augmentation_mc(g, A) if g.curved else None
        alpha = randgen.random_mc(rng, g, base=base)
        sampled = True
    try:
        res = mc_check(g, alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = not any(res.values())
    ext = {}
    for w in range(0, g.W):
        e = mc_extend(g, {}, w) if not g.curved else None
        if e is not None:
            ext[w + 1] = {"consistent": e.consistent, "kernel_dim": len(e.kernel)}
    report = {"command": "mc", "mode": g.mode, "max_weight": g.W, "curved": g.curved, "sampled": sampled,
              "alpha": element_to_json(g, alpha), "is_mc": ok,
              "residual": {w: element_to_json(g, r) for w, r in sorted(res.items()) if r},
              "linear_extensions": ext}
    lines = [f"convolution algebra ({g.mode}{', curved' if g.curved else ''}) through weight {g.W}"]
    lines += [f"  {k} = {v}" for k, v in report["alpha"].items()] or ["  alpha = 0"]
    lines.append("MAURER-CARTAN" if ok else "NOT MAURER-CARTAN")
    return report, lines, OK if ok else FAILURE


def _pair_from_args(args, g):
    """(alpha, alpha2, witness) from --elements, or synthesized from --seed."""
    if args.elements:
        data = _read_json(args.elements)
        if "max_weight" in data and int(data["max_weight"]) != args.max_weight:
            raise UsageError(f"truncation mismatch: elements built through {data['max_weight']}, "
                             f"--max-weight is {args.max_weight}")
        return tuple(element_from_json(g, data.get(k, {})) for k in ("alpha", "alpha2", "witness"))
    return None


def cmd_gauge_search(args):
    from .mc import ObstructionReport, gauge_search
    A, A2 = _algebra(args.source), _algebra(args.target)
    g = _convolution(A, A2, args.flavor, args.max_weight)
    pair = _pair_from_args(args, g)
    if pair is None:
        rng = random.Random(args.seed)
        base = randgen.augmentation_mc(g, A) if g.curved else None
        alpha = randgen.random_mc(rng, g, base=base)
        from .mc import gauge_act
        alpha2 = gauge_act(g, randgen.random_gauge(rng, g), alpha)
    else:
        alpha, alpha2, _ = pair
    try:
        res = gauge_search(g, alpha, alpha2, budget=args.budget)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = {"command": "gauge-search", "max_weight": g.W, "alpha": element_to_json(g, alpha),
              "alpha2": element_to_json(g, alpha2)}
    if isinstance(res, ObstructionReport):
        d = res.to_dict()
        d["residual"] = element_to_json(g, res.residual)
        report["result"] = d
        lines = [f"{res.status.upper()} at weight {res.weight}"] + [f"  {t}" for t in res.trace]
        return report, lines, INCONCLUSIVE if res.status == "inconclusive" else FAILURE
    report["result"] = {"status": "found", "gauge": element_to_json(g, res)}
    lines = ["GAUGE FOUND"] + [f"  {k} = {v}" for k, v in report["result"]["gauge"].items()]
    return report, lines, OK


def _lift_report(h, res, pair_f, pair_g, witness, g_big):
    return {
        "f": element_to_json(h, pair_f), "g": element_to_json(h, pair_g),
        "witness": element_to_json(g_big, witness),
        "gauge": element_to_json(h, res.gauge),
        "stages": [{"stage": s.stage, "strategy": s.strategy, "discrepancy_size": s.discrepancy_size}
                   for s in res.stages],
    }


def _verify(h, mu, f, f2, W):
    from .mc import add, gauge_act, truncate
    return not truncate(add(gauge_act(h, mu, f), (-1, f2)), 1, W)


def cmd_gauge_lift(args):
    from .faithful import MorphismPair, faithfulness_witness, unital_faithfulness_witness, synthesize
    from .pbw import convolution_retraction, unital_retraction
    A, A2 = _algebra(args.source), _algebra(args.target)
    W = args.max_weight
    R = unital_retraction(A, A2, W) if A.unital else convolution_retraction(A, A2, W)
    pair = _pair_from_args(args, R.h)
    if pair is None:
        rng = random.Random(args.seed)
        if A.unital:
            from .mc import bch, gauge_act
            f = randgen.random_mc(rng, R.h, base=randgen.augmentation_mc(R.h, A))
            mu0 = randgen.random_gauge(rng, R.h)
            f2 = gauge_act(R.h, mu0, f)
            lam = bch(R.g, randgen.twisted_cycle(rng, R.g, R.i(f2)), R.i(mu0))
        else:
            f, f2, lam, _ = randgen.synthesize_pair(rng, R.h, R.g, R.i)
    else:
        f, f2, _ = pair
        data = _read_json(args.elements)
        lam = element_from_json(R.g, data.get("witness", {}))
    p = MorphismPair(A, A2, f, f2, lam, "unital" if A.unital else "commutative", R)
    try:
        res = unital_faithfulness_witness(p, W) if A.unital else faithfulness_witness(p, W)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = {"command": "gauge-lift", "max_weight": W, **_lift_report(R.h, res, f, f2, lam, R.g),
              "verified": _verify(R.h, res.gauge, f, f2, W)}
    lines = [f"stage {s.stage}: strategy {s.strategy}" for s in res.stages]
    lines.append("VERIFIED" if report["verified"] else "NOT VERIFIED")
    return report, lines, OK if report["verified"] else FAILURE


def cmd_retraction(args):
    from .faithful import check_retraction
    from .pbw import convolution_retraction, unital_retraction
    A, A2 = _algebra(args.source), _algebra(args.target)
    W = args.max_weight
    try:
        R = unital_retraction(A, A2, W) if A.unital else convolution_retraction(A, A2, W)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    bad = check_retraction(R)
    report = {"command": "retraction", "max_weight": W, "unital": A.unital, "ok": not bad,
              "violations": [{"identity": v.identity, "witness": list(v.witness)} for v in bad]}
    lines = [f"retraction contract through weight {W}"]
    lines += [f"VIOLATION {v}" for v in bad] or ["r.i = id, chain map, filtration, module map: all hold"]
    return report, lines, OK if not bad else FAILURE


def cmd_pbw(args):
    from .pbw import ARITY_CAP, pbw_decompose
    if args.n > ARITY_CAP:
        raise UsageError(f"arity {args.n} exceeds cap {ARITY_CAP}")
    P = pbw_decompose(args.n)
    ranks = [P.ranks[k] for k in sorted(P.ranks)]
    ok = all(P.certificate.values())
    report = {"command": "pbw", "n": args.n, "ranks": ranks, "certificate": P.certificate, "ok": ok}
    lines = ["ranks " + ",".join(map(str, ranks))]
    lines += [f"  {k}: {'yes' if v else 'NO'}" for k, v in sorted(P.certificate.items())]
    return report, lines, OK if ok else FAILURE


def cmd_envelope(args):
    from .faithful import enveloping_faithfulness_witness, synthesize
    from .pbw import enveloping_retraction, sym_dims
    g, h = _lie(args.source), _lie(args.target)
    W = args.max_weight
    try:
        R = enveloping_retraction(g, h, W, args.cap_T)
    except TruncationError as exc:
        raise UsageError(str(exc)) from None
    if args.synthesize is not None:
        f, f2, lam, _ = randgen.synthesize_pair(random.Random(args.synthesize), R.h, R.g, R.i)
    else:
        f, f2, lam = {}, {}, {}
    res = enveloping_faithfulness_witness(g, h, f, f2, lam, W, retraction=R)
    U = R.U
    T = U.T
    report = {"command": "envelope", "max_weight": W, "T": T, "length_dims": U.length_dims(),
              "sym_dims": sym_dims(h.space.degrees, T), **_lift_report(R.h, res, f, f2, lam, R.g),
              "verified": _verify(R.h, res.gauge, f, f2, W)}
    trivial = not res.gauge
    lines = [f"U h through length {T}: " + ",".join(map(str, report["length_dims"])),
             "TRIVIAL WITNESS" if trivial and report["verified"] else
             ("WITNESS FOUND" if report["verified"] else "NOT VERIFIED")]
    return report, lines, OK if report["verified"] else FAILURE


def cmd_example_1_4(args):
    from .faithful import example_1_4
    A2 = _algebra(args.file)
    try:
        rep = example_1_4(A2, args.poly_D)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = {"command": "example-1-4", **rep}
    lines = [rep["verdict"], f"H0 = {rep['H0']}, H1 = {rep['H1']}, "
                             f"{'stable' if rep['stable'] else 'NOT stable'} from D={rep['D']} to D={rep['D'] + 1}"]
    return report, lines, OK if rep["stable"] else INCONCLUSIVE


def cmd_faithful(args):
    from .faithful import MorphismPair, faithfulness_witness, synthesize_commutative
    from .pbw import convolution_retraction
    W = args.max_weight
    if (args.source is None) != (args.target is None):
        raise UsageError("give both algebra files or neither")
    if args.source is None:
        if args.synthesize is None:
            raise UsageError("without algebra files, --synthesize SEED is required")
        p = synthesize_commutative(args.synthesize, W)
        A, A2 = p.A, p.A2
    else:
        A, A2 = _algebra(args.source), _algebra(args.target)
        R = convolution_retraction(A, A2, W)
        if args.morphisms:
            data = _read_json(args.morphisms)
            if "max_weight" in data and int(data["max_weight"]) != W:
                raise UsageError(f"truncation mismatch: morphisms built through {data['max_weight']}, "
                                 f"--max-weight is {W}")
            f = element_from_json(R.h, data.get("f", {}))
            f2 = element_from_json(R.h, data.get("g", {}))
            lam = element_from_json(R.g, data.get("witness", {}))
        elif args.synthesize is not None:
            f, f2, lam, _ = randgen.synthesize_pair(random.Random(args.synthesize), R.h, R.g, R.i)
        else:
            f = f2 = lam = {}
        p = MorphismPair(A, A2, f, f2, lam, "commutative", R)
    R = p.retraction
    try:
        res = faithfulness_witness(p, W)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    verified = _verify(R.h, res.gauge, p.f, p.g, W)
    from .presentation import dump
    report = {"command": "faithful", "max_weight": W, "source": dump(A), "target": dump(A2),
              **_lift_report(R.h, res, p.f, p.g, p.witness, R.g), "verified": verified,
              "verdict": "WITNESS FOUND" if verified else "NOT VERIFIED"}
    lines = [report["verdict"]]
    lines += [f"stage {s.stage}: strategy {s.strategy}" for s in res.stages]
    lines += [f"  {k} = {v}" for k, v in report["gauge"].items()] or ["  zero homotopy"]
    return report, lines, OK if verified else FAILURE


def cmd_suite(args):
    from . import suite
    which = args.criteria or sorted(suite.CRITERIA)
    for k in which:
        if k not in suite.CRITERIA:
            raise UsageError(f"no criterion {k}")
    res = suite.run(which)
    report = {"command": "suite", "criteria": res}
    lines = [f"criterion {k}: {'PASS' if r['passed'] else 'FAIL'}  {r['summary']}" for k, r in res.items()]
    return report, lines, OK if all(r["passed"] for r in res.values()) else FAILURE


# --- parser ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE)


def _common(with_defaults: bool) -> argparse.ArgumentParser:
    """Global flags; accepted before or after the subcommand."""
    d = (lambda v: v) if with_defaults else (lambda v: argparse.SUPPRESS)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-weight", type=_positive, default=d(4), help="truncation weight W (default 4)")
    common.add_argument("--degree-window", type=_window, default=d((-3, 3)), help="degrees lo,hi (default -3,3)")
    common.add_argument("--cap-T", type=_positive, default=d(None), help="word-length cap for U h")
    common.add_argument("--poly-D", type=_positive, default=d(3), help="polynomial degree cap (default 3)")
    common.add_argument("--budget", type=int, default=d(None), help="widening budget for gauge search")
    common.add_argument("--seed", type=int, default=d(0))
    common.add_argument("--format", choices=("text", "json"), default=d("text"))
    return common


def build_parser() -> argparse.ArgumentParser:
    top = _common(True)
    common = _common(False)
    p = _Parser(prog="mcgauge", description="Maurer-Cartan gauge lifting and bar constructions, exactly.",
                parents=[top])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", parents=[common], help="parse a presentation and check its axioms")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("bar", parents=[common], help="bar construction dimensions and differentials")
    s.add_argument("file")
    s.add_argument("--flavor", choices=("ass", "com", "uass", "ucom", "lie", "ulie"), default="ass")
    s.set_defaults(func=cmd_bar)

    s = sub.add_parser("cobar", parents=[common], help="homology of cobar(bar A) in a degree window")
    s.add_argument("file")
    s.set_defaults(func=cmd_cobar)

    for name, func, hlp in (("mc", cmd_mc, "check or sample a Maurer-Cartan element"),
                            ("gauge-search", cmd_gauge_search, "search for a gauge between two MC elements"),
                            ("gauge-lift", cmd_gauge_lift, "lift an associative homotopy to a commutative one")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("source")
        s.add_argument("target")
        s.add_argument("--flavor", choices=("com", "ass"), default="com")
        if name == "mc":
            s.add_argument("--element", help="JSON file with the element")
        else:
            s.add_argument("--elements", help="JSON file with alpha, alpha2 (and witness)")
        s.set_defaults(func=func)

    s = sub.add_parser("retraction", parents=[common], help="verify the retraction contract")
    s.add_argument("source")
    s.add_argument("target")
    s.set_defaults(func=cmd_retraction)

    s = sub.add_parser("pbw", parents=[common], help="Eulerian decomposition of Q[S_n]")
    s.add_argument("n", type=_positive)
    s.set_defaults(func=cmd_pbw)

    s = sub.add_parser("envelope", parents=[common], help="enveloping algebra retraction and witness")
    s.add_argument("source", help="Lie algebra g")
    s.add_argument("target", help="Lie algebra h")
    s.add_argument("--synthesize", type=int, metavar="SEED")
    s.set_defaults(func=cmd_envelope)

    s = sub.add_parser("example-1-4", parents=[common], help="maps out of K[x,y] versus its cofibrant model")
    s.add_argument("file")
    s.set_defaults(func=cmd_example_1_4)

    s = sub.add_parser("faithful", parents=[common], help="C-infinity homotopy from an A-infinity one")
    s.add_argument("source", nargs="?")
    s.add_argument("target", nargs="?")
    s.add_argument("--morphisms", help="JSON file with f, g, witness (and max_weight)")
    s.add_argument("--synthesize", type=int, metavar="SEED")
    s.set_defaults(func=cmd_faithful)

    s = sub.add_parser("suite", parents=[common], help="run acceptance criteria")
    s.add_argument("criteria", nargs="*", type=int)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, lines, code = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (AxiomError, TruncationError) as exc:
        if isinstance(exc, TruncationError):
            print(f"error: {exc}", file=sys.stderr)
            return USAGE
        report = {"command": args.command, "ok": False,
                  "violations": [{"identity": v.identity, "witness": list(v.witness)} for v in exc.report]}
        lines = [f"VIOLATION {v}" for v in exc.report]
        code = FAILURE
    if args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
