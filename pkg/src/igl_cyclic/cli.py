"""Command-line interface: ``igl-cyclic {check,prove,translate,countermodel,corpus-run}``.

Reports are JSON lines on stdout (``check``, ``countermodel``, ``corpus-run``)
or stderr (``prove``, ``translate``, whose stdout carries the proof file).
Exit codes: 0 accept / proof found / valid, 1 reject / no proof /
countermodel found, 2 parse error, 3 resource limit, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence, TextIO

from . import proofio
from .calculus import CheckReport, System, check_finite, conclusion
from .core import ParseError, ResourceLimit, Sequent, interpret, parse_formula, parse_sequent, seq, show_sequent
from .cyclic import check_cyclic, progress_by_name
from .proofio import ProofDocument
from .semantics import MAX_FRAME_SIZE, Countermodel, valid_up_to
from .transform import DEFAULT_MAX_DEPTH, DEFAULT_MAX_STATES, InternalError, Prover
from .translate import circ_to_fin, fin_to_circ

EXIT_OK, EXIT_REJECT, EXIT_PARSE, EXIT_LIMIT, EXIT_INTERNAL = range(5)


class _Emitter:
    def __init__(self, stream: TextIO, deterministic: bool):
        self.stream = stream
        self.deterministic = deterministic

    def __call__(self, record: dict) -> None:
        if not self.deterministic:
            record = {**record, "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
        self.stream.write(json.dumps(record, sort_keys=True) + "\n")

    def report(self, command: str, rep: CheckReport, **extra) -> None:
        self({"command": command, "accepted": rep.accepted, "nodes_checked": rep.nodes_checked,
              "failures": len(rep.failures), **extra})
        for f in rep.failures:
            self({"command": command, "failure": f.as_dict()})


def check_document(doc: ProofDocument, progress: str = "k4circ") -> CheckReport:
    if doc.kind == "cyclic":
        return check_cyclic(doc.cyclic(), progress_by_name(progress), doc.system)
    return check_finite(doc.tree, doc.system, doc.assumptions or None)


def _self_certify(text: str, progress: str = "k4circ") -> CheckReport:
    """Re-read an emitted document and check it from scratch."""
    rep = check_document(proofio.loads(text), progress)
    if not rep.accepted:
        raise InternalError(f"emitted proof does not re-check: {rep.failures[0].detail}")
    return rep


def _write_output(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc: ProofDocument, as_json: bool) -> str:
    return proofio.dumps_json(doc) if as_json else proofio.dumps(doc)


# -- commands -------------------------------------------------------------------


def cmd_check(args) -> int:
    try:
        progress_by_name(args.progress)
    except ValueError as e:
        raise ParseError(str(e)) from None
    doc = proofio.read(args.file)
    if args.system:
        doc.system = System.parse(args.system)
    if args.kind:
        doc.kind = args.kind
    if doc.kind == "finite" and doc.backlinks:
        raise ParseError("a finite document cannot carry backlinks")
    rep = check_document(doc, args.progress)
    emit = _Emitter(sys.stdout, args.deterministic)
    emit.report("check", rep, file=args.file, system=doc.system.value, kind=doc.kind,
                progress=args.progress if doc.kind == "cyclic" else None)
    return EXIT_OK if rep.accepted else EXIT_REJECT


def _parse_goal(text: str) -> Sequent:
    return parse_sequent(text) if "=>" in text else seq([], parse_formula(text))


def cmd_prove(args) -> int:
    goal = _parse_goal(args.sequent)
    emit = _Emitter(sys.stderr, args.deterministic)
    prover = Prover(max_depth=args.max_depth, max_states=args.max_states)
    p = prover.prove(goal)
    if p is None:
        record = {"command": "prove", "goal": show_sequent(goal), "result": "NoProof"}
        if args.countermodel_size:
            cm = valid_up_to(interpret(goal), args.countermodel_size)
            if isinstance(cm, Countermodel):
                record["countermodel"] = {**cm.model.as_dict(), "world": cm.world}
        emit(record)
        return EXIT_REJECT
    doc = ProofDocument(p, System.iGLSeq)
    text = _dump(doc, args.json)
    _self_certify(text)
    _write_output(text, args.output)
    emit({"command": "prove", "goal": show_sequent(goal), "result": "Proof", "nodes": p.size(),
          "height": p.height, "states": prover.states})
    return EXIT_OK


def cmd_translate(args) -> int:
    doc = proofio.read(args.file)
    emit = _Emitter(sys.stderr, args.deterministic)
    if args.direction == "fin2circ":
        if doc.kind != "finite":
            raise ParseError("fin2circ expects a finite proof document")
        pre = check_finite(doc.tree, System.iGLSeq)
        if not pre.accepted:
            emit.report("translate", pre, stage="input")
            return EXIT_REJECT
        d = fin_to_circ(doc.tree)
        out = ProofDocument.from_cyclic(d)
    else:
        if doc.kind != "cyclic":
            raise ParseError("circ2fin expects a cyclic proof document")
        pre = check_document(doc)
        if not pre.accepted:
            emit.report("translate", pre, stage="input")
            return EXIT_REJECT
        q = circ_to_fin(doc.cyclic())
        out = ProofDocument(q, System.iGLSeq)
    if conclusion(out.tree) != conclusion(doc.tree):
        raise InternalError("translation changed the root sequent")
    text = _dump(out, args.json)
    rep = _self_certify(text)
    _write_output(text, args.output)
    emit.report("translate", rep, direction=args.direction, backlinks=len(out.backlinks),
                root=show_sequent(conclusion(out.tree)))
    return EXIT_OK


def cmd_countermodel(args) -> int:
    goal = _parse_goal(args.formula)
    emit = _Emitter(sys.stdout, args.deterministic)
    res = valid_up_to(interpret(goal), args.max_size)
    if isinstance(res, Countermodel):
        emit({"command": "countermodel", "goal": show_sequent(goal), "result": "Countermodel",
              "model": res.model.as_dict(), "world": res.world})
        if args.describe:
            sys.stdout.write(res.model.describe() + f"\nrefuted at w{res.world}\n")
        return EXIT_REJECT
    emit({"command": "countermodel", "goal": show_sequent(goal), "result": "Valid", "max_size": args.max_size})
    return EXIT_OK


def cmd_corpus_run(args) -> int:
    from . import acceptance

    emit = _Emitter(sys.stdout, args.deterministic)
    ok = True
    for r in acceptance.run_all(fast=args.fast):
        ok = ok and r.passed
        record = {"command": "corpus-run", "criterion": r.number, "name": r.name, "passed": r.passed,
                  "detail": r.detail}
        if not args.deterministic:
            record["seconds"] = round(r.seconds, 3)
        emit(record)
    return EXIT_OK if ok else EXIT_REJECT


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--deterministic", action="store_true", help="omit timestamps from reports")
    ap = argparse.ArgumentParser(prog="igl-cyclic", description="Finite and cyclic proofs for intuitionistic GL.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="check a proof file")
    c.add_argument("file")
    c.add_argument("--system", choices=[s.value for s in System])
    c.add_argument("--kind", choices=proofio.KINDS)
    c.add_argument("--progress", default="k4circ", help="k4circ (default), none, never or grz-K")
    c.set_defaults(run=cmd_check)

    p = sub.add_parser("prove", parents=[common], help="search for an iGL proof of a sequent")
    p.add_argument("sequent", help="sequent such as 'p, p->q => q', or a formula")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true", help="emit the proof as JSON")
    p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument("--countermodel-size", type=int, default=4,
                   help="frame size bound for the countermodel attached to a failure (0 disables)")
    p.set_defaults(run=cmd_prove)

    t = sub.add_parser("translate", parents=[common], help="finite <-> cyclic translation")
    t.add_argument("direction", choices=["fin2circ", "circ2fin"])
    t.add_argument("file")
    t.add_argument("-o", "--output")
    t.add_argument("--json", action="store_true")
    t.set_defaults(run=cmd_translate)

    m = sub.add_parser("countermodel", parents=[common], help="search for a Kripke countermodel")
    m.add_argument("formula", help="formula or sequent")
    m.add_argument("--max-size", type=int, default=4, help=f"largest frame size (at most {MAX_FRAME_SIZE})")
    m.add_argument("--describe", action="store_true", help="also print the model in readable form")
    m.set_defaults(run=cmd_countermodel)

    r = sub.add_parser("corpus-run", parents=[common], help="run the acceptance checks over the bundled corpus")
    r.add_argument("--fast", action="store_true", help="fewer random goals for the transformer check")
    r.set_defaults(run=cmd_corpus_run)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except ParseError as e:
        sys.stderr.write(f"parse error: {e}\n")
        return EXIT_PARSE
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_PARSE
    except ResourceLimit as e:
        sys.stderr.write(f"resource limit: {e}\n")
        return EXIT_LIMIT
    except InternalError as e:
        sys.stderr.write(f"internal error: {e}\n")
        return EXIT_INTERNAL
    except ValueError as e:
        sys.stderr.write(f"rejected: {e}\n")
        return EXIT_REJECT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
