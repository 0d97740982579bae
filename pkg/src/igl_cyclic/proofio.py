"""Reading and writing proof documents (text and JSON)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .calculus import RuleName, Step, System
from .core import ParseError, Sequent, parse_sequent, show_sequent
from .cyclic import CyclicDerivation
from .trees import FinTree, Path

INDENT = "  "
KINDS = ("finite", "cyclic")


@dataclass
class ProofDocument:
    tree: FinTree
    system: System = System.iGLSeq
    kind: str = "finite"
    assumptions: list[Sequent] = field(default_factory=list)
    backlinks: dict[Path, Path] = field(default_factory=dict)

    def cyclic(self) -> CyclicDerivation:
        return CyclicDerivation(self.tree, dict(self.backlinks), frozenset(self.assumptions))

    @classmethod
    def from_cyclic(cls, d: CyclicDerivation) -> ProofDocument:
        return cls(d.proof, System.iK4Seq, "cyclic", sorted(d.open_assumptions, key=str), dict(d.backlinks))


def format_path(p: Path) -> str:
    return "[" + ",".join(str(i) for i in p) + "]"


def parse_path(text: str) -> Path:
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise ParseError(f"bad path {text!r}")
    body = t[1:-1].strip()
    if not body:
        return ()
    try:
        return tuple(int(x) for x in body.split(","))
    except ValueError as e:
        raise ParseError(f"bad path {text!r}") from e


def _rule(text: str) -> RuleName:
    try:
        return RuleName(text)
    except ValueError:
        raise ParseError(f"unknown rule name {text!r}") from None


# -- text format --------------------------------------------------------------


def dumps(doc: ProofDocument) -> str:
    lines = [f"%system {doc.system.value}", f"%kind {doc.kind}"]
    lines += [f"%assume {show_sequent(s)}" for s in doc.assumptions]
    for path, t in doc.tree.nodes():
        step: Step = t.label
        line = f"{INDENT * len(path)}{show_sequent(step.sequent)} :: {step.rule.value}"
        if path in doc.backlinks:
            line += f" backlink {format_path(doc.backlinks[path])}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def loads(text: str) -> ProofDocument:
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e}") from None
        return from_json(data)
    system, kind = System.iGLSeq, "finite"
    assumptions: list[Sequent] = []
    backlinks: dict[Path, Path] = {}
    # stack of (depth, path, label, children)
    stack: list[tuple[int, Path, Step, list]] = []
    root: FinTree | None = None

    def pop_to(depth: int) -> None:
        nonlocal root
        while stack and stack[-1][0] >= depth:
            d, _, label, kids = stack.pop()
            t = FinTree(label, kids)
            if stack:
                stack[-1][3].append(t)
            else:
                root = t

    seen_node = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        if raw.startswith("%"):
            if seen_node:
                raise ParseError(f"line {lineno}: header after the proof body")
            key, _, val = raw[1:].partition(" ")
            val = val.strip()
            if key == "system":
                try:
                    system = System.parse(val)
                except ValueError as e:
                    raise ParseError(f"line {lineno}: {e}") from None
            elif key == "kind":
                if val not in KINDS:
                    raise ParseError(f"line {lineno}: kind must be finite or cyclic")
                kind = val
            elif key == "assume":
                assumptions.append(_at(lineno, parse_sequent, val))
            else:
                raise ParseError(f"line {lineno}: unknown header %{key}")
            continue
        stripped = raw.lstrip(" ")
        width = len(raw) - len(stripped)
        if width % len(INDENT):
            raise ParseError(f"line {lineno}: indentation must be a multiple of {len(INDENT)}")
        depth = width // len(INDENT)
        if not seen_node:
            if depth:
                raise ParseError(f"line {lineno}: the root must not be indented")
            seen_node = True
        elif depth == 0:
            raise ParseError(f"line {lineno}: more than one root")
        elif depth > stack[-1][0] + 1:
            raise ParseError(f"line {lineno}: indentation jumps by more than one level")
        seq_text, sep, rest = stripped.partition("::")
        if not sep:
            raise ParseError(f"line {lineno}: expected '<sequent> :: <rule>'")
        parts = rest.split(None, 2)
        if not parts:
            raise ParseError(f"line {lineno}: missing rule name")
        rule = _rule(parts[0])
        pop_to(depth)
        path: Path = stack[-1][1] + (len(stack[-1][3]),) if stack else ()
        if len(parts) > 1:
            if parts[0] != "Assump" or parts[1] != "backlink" or len(parts) < 3:
                raise ParseError(f"line {lineno}: only Assump leaves take 'backlink <path>'")
            backlinks[path] = _at(lineno, parse_path, parts[2])
        stack.append((depth, path, Step(_at(lineno, parse_sequent, seq_text), rule), []))
    pop_to(0)
    if root is None:
        raise ParseError("empty proof document")
    doc = ProofDocument(root, system, kind, assumptions, backlinks)
    _validate_backlinks(doc)
    return doc


def _at(lineno: int, fn, text: str):
    try:
        return fn(text)
    except ParseError as e:
        raise ParseError(f"line {lineno}: {e}") from None


def _validate_backlinks(doc: ProofDocument) -> None:
    nodes = doc.tree.node_set()
    for s, b in doc.backlinks.items():
        if b not in nodes:
            raise ParseError(f"backlink target {format_path(b)} of {format_path(s)} is not a node")
    if doc.backlinks and doc.kind != "cyclic":
        raise ParseError("backlinks are only allowed in cyclic documents")


# -- JSON ---------------------------------------------------------------------


def to_json(doc: ProofDocument) -> dict:
    def enc(t: FinTree, path: Path) -> dict:
        out = {"sequent": show_sequent(t.label.sequent), "rule": t.label.rule.value}
        if path in doc.backlinks:
            out["backlink"] = list(doc.backlinks[path])
        out["children"] = [enc(c, path + (i,)) for i, c in enumerate(t.children)]
        return out

    return {
        "system": doc.system.value,
        "kind": doc.kind,
        "assumptions": [show_sequent(s) for s in doc.assumptions],
        "root": enc(doc.tree, ()),
    }


def from_json(data: dict) -> ProofDocument:
    backlinks: dict[Path, Path] = {}

    def dec(obj: dict, path: Path) -> FinTree:
        try:
            step = Step(parse_sequent(obj["sequent"]), _rule(obj["rule"]))
            kids = obj.get("children", [])
        except (KeyError, TypeError) as e:
            raise ParseError(f"malformed node at {format_path(path)}: {e}") from None
        if "backlink" in obj:
            try:
                backlinks[path] = tuple(int(i) for i in obj["backlink"])
            except (TypeError, ValueError):
                raise ParseError(f"bad backlink at {format_path(path)}") from None
        return FinTree(step, [dec(c, path + (i,)) for i, c in enumerate(kids)])

    if not isinstance(data, dict) or "root" not in data:
        raise ParseError("JSON proof document needs a 'root' node")
    try:
        system = System.parse(data.get("system", "iGL"))
    except ValueError as e:
        raise ParseError(str(e)) from None
    kind = data.get("kind", "finite")
    if kind not in KINDS:
        raise ParseError("kind must be finite or cyclic")
    doc = ProofDocument(
        dec(data["root"], ()),
        system,
        kind,
        [parse_sequent(s) for s in data.get("assumptions", [])],
        backlinks,
    )
    _validate_backlinks(doc)
    return doc


def dumps_json(doc: ProofDocument) -> str:
    return json.dumps(to_json(doc), indent=2, sort_keys=True) + "\n"


def read(path: str) -> ProofDocument:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(path: str, doc: ProofDocument, as_json: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(doc) if as_json else dumps(doc))
