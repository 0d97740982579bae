"""The bundled proof corpus.

Finite iGL proofs live in ``corpus/finite/``; hand-written cyclic
derivations in ``corpus/cyclic/``.  ``regenerate`` rebuilds the finite files
from ``GOALS`` with the prover; the acceptance checks only read them.
"""

from __future__ import annotations

import re
from pathlib import Path as FsPath

from . import proofio
from .calculus import R, Step, System, node
from .core import parse_sequent
from .cyclic import CyclicDerivation
from .proofio import ProofDocument
from .transform import prove
from .translate import fin_to_circ
from .trees import FinTree

CORPUS_DIR = FsPath(__file__).with_name("corpus")

GOALS = [
    "=> []([]p->p)->[]p",
    "[]([]p->p) => []p",
    "[]([]q->q), []([]p->p) => [](p&q)",
    "=> []([]([]p->p)->[]p)",
    "=> [](bot->bot)",
    "=> []p->[][]p",
    "[](p->q), []p => []q",
    "=> [](p&q)->[]p&[]q",
    "[]p, []q => [](p&q)",
    "=> []p|[]q -> [](p|q)",
    "=> []bot -> [][]bot",
    "=> []([]bot->bot)->[]bot",
    "[]([]p->p), []q => [](p&q)",
    "[]([](p&q)->p&q) => []p",
    "=> ([]([]p->p)->[]p)&([]([]q->q)->[]q)",
    "[]([]p->p) => [][]p",
    "=> p->p",
    "p&q => q&p",
    "p|q => q|p",
    "=> p->q->p",
    "p->q, q->r, p => r",
    "[]([]p->p) => []p & []p",
    "[]([]p->p) => [](p|q)",
    "[]([]p->p), []([]p->q) => []q",
    "=> [][]p->[][][]p",
    "p, p->[]q => []q|r",
    "=> bot -> p",
    "[]([]p->p&q) => []p",
    "[]([](p|q)->p|q) => [](q|p)",
]


def _slug(text: str) -> str:
    table = {"[]": "B", "->": "I", "&": "A", "|": "O", "=>": "T", "bot": "F"}
    for k, v in table.items():
        text = text.replace(k, v)
    return re.sub(r"[^A-Za-z0-9]+", "", text)


def nonprogress_example() -> CyclicDerivation:
    """A cycle through ImpL only, "deriving" the underivable ``p->q, q->p => p``."""
    root = parse_sequent("p->q, q->p => p")
    right = node(
        parse_sequent("q, q->p => p"),
        R.ImpL,
        node(parse_sequent("q->p, q => q"), R.Prop),
        node(parse_sequent("p, q => p"), R.Prop),
    )
    tree = node(root, R.ImpL, FinTree(Step(root, R.Assump)), right)
    return CyclicDerivation(tree, {(0,): ()})


def trivial_box_cycle() -> CyclicDerivation:
    """``=> [](bot->bot)`` closed by a loop through RK4."""
    goal = parse_sequent("=> [](bot->bot)")
    inner = parse_sequent("bot => bot")
    under = parse_sequent("=> bot->bot")
    tree = node(goal, R.RK4, node(under, R.ImpR, node(inner, R.Absurd)))
    return CyclicDerivation(tree)


def regenerate(directory: FsPath = CORPUS_DIR) -> list[FsPath]:
    written = []
    fin = directory / "finite"
    cyc = directory / "cyclic"
    fin.mkdir(parents=True, exist_ok=True)
    cyc.mkdir(parents=True, exist_ok=True)
    for i, g in enumerate(GOALS):
        p = prove(parse_sequent(g))
        if p is None:
            raise RuntimeError(f"corpus goal {g!r} is not provable")
        out = fin / f"{i:02d}-{_slug(g)}.proof"
        proofio.write(str(out), ProofDocument(p, System.iGLSeq))
        written.append(out)
    loeb = fin_to_circ(prove(parse_sequent(GOALS[0])))
    for name, d in (("nonprogress", nonprogress_example()), ("box-top", trivial_box_cycle()), ("loeb", loeb)):
        out = cyc / f"{name}.proof"
        proofio.write(str(out), ProofDocument.from_cyclic(d))
        written.append(out)
    return written


def load(kind: str = "finite", directory: FsPath = CORPUS_DIR) -> list[tuple[str, ProofDocument]]:
    return [(f.name, proofio.read(str(f))) for f in sorted((directory / kind).glob("*.proof"))]
