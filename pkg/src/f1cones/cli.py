"""Command-line front end.

Exit status: 0 when a check holds or a construction succeeds, 1 when a check
fails (the witness is printed), 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from typing import Optional, Sequence

from . import criteria, functors
from .complex import ComplexMorphism, ConeComplex, components
from .cone import refine_by_function
from .errors import F1Error, KrullWarning, NonConstantCharacters, UnknownCommand
from .f1algebra import F1Algebra, is_integral, normalize, primes, units
from .serialize import Document, parse, serialize, to_payload

COMMANDS = ("describe", "check", "normalize", "blowup", "complete", "subdivide", "algebraise", "expand", "oracle")
PROPERTIES = ("separated", "proper", "overconvergent", "quasicompact", "noetherian", "normal", "algebraisable")


class Report:
    def __init__(self, status: int = 0):
        self.status = status
        self.lines: list[str] = []
        self.data: dict = {}
        self.document: Optional[Document] = None

    def add(self, line: str = ""):
        self.lines.append(line)


# helpers -----------------------------------------------------------------------


def _vecs(vs) -> str:
    return "[" + ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in vs) + "]"


def _as_complex(doc: Document) -> ConeComplex:
    if doc.kind == "complex":
        return doc.obj
    if doc.kind in ("scheme_atlas", "formal_scheme_atlas"):
        return functors.sigma(doc.obj)
    if doc.kind == "algebra":
        return functors.sigma(functors.SchemeAtlas([doc.obj]))
    if doc.kind == "cone":
        from .cone import PuncturedCone

        return ConeComplex([PuncturedCone(doc.obj)])
    raise F1Error(f"a {doc.kind} document cannot be read as a complex")


def _as_subject(doc: Document):
    return doc.obj if doc.kind == "morphism" else _as_complex(doc)


def _ideals(text: Optional[str], n: int, allow_none: bool = False) -> list:
    if text is None:
        raise F1Error("--ideal is required")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise F1Error(f"--ideal is not valid JSON: {e.msg}") from None

    def depth(x):
        return 1 + depth(x[0]) if isinstance(x, list) and x else (1 if isinstance(x, list) else 0)

    if isinstance(raw, list) and raw and (raw[0] is None or depth(raw) == 3):
        if len(raw) != n:
            raise F1Error(f"--ideal lists {len(raw)} ideals for {n} charts")
        per = raw
    else:
        per = [raw] * n
    out = []
    for t in per:
        if t is None and allow_none:
            out.append(None)
        elif isinstance(t, list):
            out.append([tuple(v) for v in t])
        else:
            raise F1Error("--ideal must be a list of exponent vectors, or one such list (or null) per chart")
    return out


def _chart_ideals(charts: Sequence[F1Algebra], ideals: list) -> list:
    """Exponent vectors over the generators of a presented chart become characters."""
    out = []
    for A, T in zip(charts, ideals):
        if T is not None and A.mode == "presented":
            n = len(A.generators)
            T = [A.group.combine(v, A.generators) if len(v) == n and n != A.group.dim else v for v in T]
        out.append(T)
    return out


def _longest_chain(S: ConeComplex) -> int:
    cells = S.cells
    below: dict[int, set] = {c: set() for c in range(len(cells))}
    for c, cell in enumerate(cells):
        for chart, face in cell.nodes:
            for d in S.cells_of(chart):
                for ch2, face2 in cells[d].nodes:
                    if ch2 == chart and frozenset(face2) < frozenset(face):
                        below[c].add(d)
    memo: dict[int, int] = {}

    def height(c):
        if c not in memo:
            memo[c] = 1 + max((height(d) for d in below[c]), default=0)
        return memo[c]

    return max((height(c) for c in below), default=0)


# commands ----------------------------------------------------------------------


def describe(doc: Document) -> Report:
    rep = Report()
    rep.data["kind"] = doc.kind
    if doc.kind == "algebra":
        A = doc.obj
        ps = primes(A)
        rep.add(f"algebra ({A.mode}): character group rank {A.group.rank}, torsion {list(A.group.torsion)}")
        rep.add(f"generators: {_vecs(A.generators)}")
        try:
            integral = is_integral(A)
        except F1Error as e:
            integral = f"undecided ({e})"
        rep.add(f"integral: {integral}")
        rep.add(f"normal: {normalize(A)[1]}")
        rep.add(f"units: rank {units(A).rank}")
        rep.add(f"points (primes): {len(ps)}")
        for k, p in enumerate(ps):
            rep.add(f"  prime {k}: face {_vecs(p.face.rays)}, complement generated by {_vecs(p.complement_generators)}")
        rep.data.update(points=len(ps), rank=A.group.rank)
        return rep
    if doc.kind == "cone":
        c = doc.obj
        rep.add(f"cone of dimension {c.dim} in rank {c.rank}")
        rep.add(f"rays: {_vecs(c.ray_tuple)}")
        if c.lineality:
            rep.add(f"lineality: {_vecs(c.lineality)}")
        fs = c.faces()
        rep.add(f"faces: {len(fs)}")
        for f in fs:
            rep.add(f"  {_vecs(f.rays)} cut out by {tuple(f.cutter)}")
        rep.data.update(faces=len(fs), dim=c.dim)
        return rep
    if doc.kind == "morphism":
        f = doc.obj
        rep.add(f"morphism: {len(f.source.cones)} source cones -> {len(f.target.cones)} target cones")
        for i, a in enumerate(f.assignments):
            rep.add(f"  cone {i} -> cone {a.target}, characters {[list(r) for r in a.charmap]}")
        return rep
    S = _as_complex(doc)
    comps = components(S)
    rep.add(f"{doc.kind}: {len(S.cones)} cones, {len(S.gluings)} gluings, {len(comps)} connected component(s)")
    rep.add(f"character ranks: {[pc.group.rank for pc in S.cones]}")
    for i, pc in enumerate(S.cones):
        rep.add(f"cone {i}: rays {_vecs(pc.cone.ray_tuple)}")
        punct = pc.puncture_faces()
        rep.add(f"  punctures: {', '.join(_vecs(f.rays) for f in punct) if punct else 'none'}")
        rep.add(f"  unpunctured faces: {', '.join(_vecs(f.rays) for f in pc.kept_faces())}")
    rep.add(f"points: {len(S.cells)}")
    for k, cell in enumerate(S.cells):
        where = ", ".join(f"cone {ch} face {_vecs(S.cones[ch].cone.ray_tuple[r] for r in face)}" for ch, face in cell.nodes)
        rep.add(f"  point {k}: {where}")
    chain = _longest_chain(S)
    rep.add(f"longest specialization chain: {chain}")
    try:
        X = functors.spec(S)
        for i, A in enumerate(X.charts):
            rep.add(f"chart {i}: {_vecs(A.generators)}, {len(primes(A))} primes")
    except F1Error as e:
        rep.add(f"charts: unavailable ({e})")
    rep.data.update(points=len(S.cells), chain=chain, components=len(comps), cones=len(S.cones))
    return rep


def check(doc: Document, prop: str) -> Report:
    subject = _as_subject(doc)
    if prop == "separated":
        v = criteria.check_separated(subject)
    elif prop == "overconvergent":
        v = criteria.check_overconvergent(subject)
    elif prop == "proper":
        v = criteria.check_proper(subject)
    else:
        S = subject.source if isinstance(subject, ComplexMorphism) else subject
        if prop == "normal" and doc.kind == "algebra":
            ok = normalize(doc.obj)[1]
            v = criteria.Verdict("normal", ok, None if ok else {"chart": 0})
        else:
            v = {
                "quasicompact": criteria.check_quasicompact,
                "noetherian": criteria.check_noetherian,
                "normal": criteria.check_normal,
                "algebraisable": criteria.check_algebraisable,
            }[prop](S)
    rep = Report(0 if v.holds else 1)
    rep.add(f"{v.property}: {'yes' if v.holds else 'no'}")
    if v.witness is not None:
        rep.add(f"witness: {json.dumps(criteria._jsonable(v.witness), sort_keys=True)}")
    rep.data["verdict"] = v.to_json()
    return rep


def cmd_normalize(doc: Document) -> Report:
    rep = Report()
    if doc.kind == "algebra":
        B, was = normalize(doc.obj)
        rep.add(f"was normal: {was}")
        rep.add(f"normalization: {_vecs(B.generators)}")
        rep.document = Document("algebra", B)
        rep.data["was_normal"] = was
    elif doc.kind == "scheme_atlas":
        X = functors.normalize_scheme(doc.obj)
        changed = [i for i, (a, b) in enumerate(zip(doc.obj.charts, X.charts)) if a.generators != b.generators]
        rep.add(f"charts changed: {changed}")
        rep.document = Document("scheme_atlas", X)
        rep.data["changed"] = changed
    else:
        raise F1Error(f"normalize expects an algebra or scheme_atlas document, not {doc.kind}")
    return rep


def cmd_blowup(doc: Document, ideal: str) -> Report:
    rep = Report()
    if doc.kind == "algebra":
        doc = Document("scheme_atlas", functors.SchemeAtlas([doc.obj]))
    if doc.kind == "scheme_atlas":
        X, f = functors.blow_up(doc.obj, _chart_ideals(doc.obj.charts, _ideals(ideal, len(doc.obj.charts))))
        rep.add(f"blow-up: {len(X.charts)} charts")
        for i, A in enumerate(X.charts):
            rep.add(f"  chart {i}: {_vecs(A.generators)}")
        rep.add(f"non-normal charts: {X.non_normal}")
        rep.document = Document("scheme_atlas", X)
        rep.data["non_normal"] = X.non_normal
    else:
        S = _as_complex(doc)
        R, f = functors.blow_up(S, _ideals(ideal, len(S.cones)))
        rep.add(f"refinement: {len(R.cones)} cones")
        for i, pc in enumerate(R.cones):
            rep.add(f"  cone {i}: rays {_vecs(pc.cone.ray_tuple)} over cone {f.assignments[i].target}")
        rep.document = Document("morphism", f)
    ov = criteria.check_overconvergent(f)
    rep.add(f"morphism overconvergent: {'yes' if ov.holds else 'no'}")
    return rep


def cmd_complete(doc: Document, ideal: str) -> Report:
    rep = Report()
    if doc.kind == "algebra":
        doc = Document("scheme_atlas", functors.SchemeAtlas([doc.obj]))
    if doc.kind not in ("scheme_atlas", "formal_scheme_atlas"):
        raise F1Error(f"complete expects an algebra or atlas document, not {doc.kind}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", KrullWarning)
        X = functors.complete(doc.obj, _chart_ideals(doc.obj.charts, _ideals(ideal, len(doc.obj.charts), allow_none=True)))
    for w in caught:
        if issubclass(w.category, KrullWarning):
            rep.add(f"warning: {w.message}")
    rep.data["krull_flags"] = list(X.krull_flags)
    if not X.krull_flags:
        S = functors.sigma(X)
        for i, pc in enumerate(S.cones):
            punct = pc.puncture_faces()
            rep.add(f"cone {i}: punctures {', '.join(_vecs(f.rays) for f in punct) if punct else 'none'}")
    rep.document = Document("formal_scheme_atlas", X)
    return rep


def cmd_subdivide(doc: Document, function: str) -> Report:
    fs = _ideals(function, 1)[0]
    rep = Report()
    if doc.kind != "cone":
        return cmd_blowup(doc, function)
    pieces = refine_by_function(doc.obj, fs)
    rep.add(f"{len(pieces)} pieces")
    for c in pieces:
        rep.add(f"  rays {_vecs(c.ray_tuple)}")
    rep.data["pieces"] = [[list(r) for r in c.ray_tuple] for c in pieces]
    return rep


def cmd_algebraise(doc: Document) -> Report:
    S = _as_complex(doc)
    try:
        res = functors.algebraise(S)
    except NonConstantCharacters as e:
        rep = Report(1)
        rep.add("algebraisable: no")
        rep.add(f"monodromy: {[list(r) for r in e.matrix]}")
        rep.add(f"loop through cones: {list(e.loop[:2])}")
        rep.data["witness"] = {"loop": list(e.loop[:2]), "matrix": [list(r) for r in e.matrix]}
        return rep
    rep = Report()
    rep.add("algebraisable: yes")
    for i, (A, T) in enumerate(zip(res.atlas.charts, res.markings)):
        mark = "none" if T is None else _vecs(T.generators)
        rep.add(f"chart {i}: {_vecs(A.generators)}, marking {mark}")
    rep.document = Document("formal_scheme_atlas", functors.FormalSchemeAtlas(res.atlas, res.markings))
    return rep


def cmd_expand(doc: Document, kind: str, stages: int, cutter: str, center: str) -> Report:
    if doc.kind != "cone":
        raise F1Error(f"expand expects a cone document, not {doc.kind}")
    f = tuple(json.loads(cutter))
    T = [tuple(v) for v in json.loads(center)]
    out = functors.expansion_stages(doc.obj, f, T, kind, stages)
    rep = Report()
    for k, S in enumerate(out, 1):
        rep.add(f"stage {k}: {len(S.cones)} cones")
        for pc in S.cones:
            rep.add(f"  rays {_vecs(pc.cone.ray_tuple)}")
    limit = criteria.check_proper_limit(out)
    rep.add(f"cone counts: {limit.witness['cone_counts']}")
    rep.data["stages"] = [[[list(r) for r in pc.cone.ray_tuple] for pc in S.cones] for S in out]
    return rep


def cmd_oracle(doc: Document, group: str, radius: int) -> Report:
    subject = _as_subject(doc)
    jets = criteria.jet_oracle(subject, group, radius)
    sep = criteria.check_separated(subject)
    over = criteria.check_overconvergent(subject)
    agree = sep.holds == jets.separated and over.holds == jets.overconvergent
    rep = Report(0 if agree else 1)
    rep.add(f"jets checked on the radius-{radius} box over {group}")
    rep.add(f"separated: oracle {'yes' if jets.separated else 'no'}, exact {'yes' if sep.holds else 'no'}")
    rep.add(f"overconvergent: oracle {'yes' if jets.overconvergent else 'no'}, exact {'yes' if over.holds else 'no'}")
    if jets.multiple:
        c, t, p = jets.multiple[0]
        rep.add(f"first jet with several lifts: cell {c}, point {list(p)}")
    if jets.uncovered:
        c, p = jets.uncovered[0]
        rep.add(f"first jet without a lift: cell {c}, point {list(p)}")
    rep.add("agreement: " + ("yes" if agree else "no"))
    rep.data.update(agree=agree, separated=jets.separated, overconvergent=jets.overconvergent)
    return rep


# entry points ------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="f1cones", description="Cone complexes and F1-schemes.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
        return s

    s = cmd("describe", "list cones, faces, punctures, points and charts")
    s.add_argument("file")
    s = cmd("check", "decide a property")
    s.add_argument("property", choices=PROPERTIES)
    s.add_argument("file")
    s = cmd("normalize", "normalize an algebra or atlas")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s = cmd("blowup", "blow up along a monomial ideal")
    s.add_argument("file")
    s.add_argument("--ideal", required=True)
    s.add_argument("-o", "--output")
    s = cmd("complete", "formally complete along a monomial ideal")
    s.add_argument("file")
    s.add_argument("--ideal", required=True)
    s.add_argument("-o", "--output")
    s = cmd("subdivide", "split a cone into domains of linearity")
    s.add_argument("file")
    s.add_argument("--function", required=True)
    s = cmd("algebraise", "find an ordinary atlas completing to the complex")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s = cmd("expand", "stages of an expansion")
    s.add_argument("file")
    s.add_argument("--kind", required=True, choices=("el", "él", "Sur", "sur"))
    s.add_argument("--stages", type=int, required=True)
    s.add_argument("--cutter", required=True, help="character cutting out the open face")
    s.add_argument("--center", required=True, help="generators of the center ideal")
    s = cmd("oracle", "count jet lifts and compare with the exact checks")
    s.add_argument("file")
    s.add_argument("--group", choices=("Z", "Q"), default="Z")
    s.add_argument("--radius", type=int, default=10)
    return p


def dispatch(argv: Sequence[str]) -> tuple[int, str]:
    """Run one command; return (exit status, output text)."""
    argv = list(argv)
    positional = [a for a in argv if not a.startswith("-")]
    if not positional or positional[0] not in COMMANDS:
        name = positional[0] if positional else ""
        raise UnknownCommand(f"unknown command {name!r}; expected one of {', '.join(COMMANDS)}")
    args = _parser().parse_args(argv)
    doc = parse(args.file)
    c = args.command
    if c == "describe":
        rep = describe(doc)
    elif c == "check":
        rep = check(doc, args.property)
    elif c == "normalize":
        rep = cmd_normalize(doc)
    elif c == "blowup":
        rep = cmd_blowup(doc, args.ideal)
    elif c == "complete":
        rep = cmd_complete(doc, args.ideal)
    elif c == "subdivide":
        rep = cmd_subdivide(doc, args.function)
    elif c == "algebraise":
        rep = cmd_algebraise(doc)
    elif c == "expand":
        rep = cmd_expand(doc, args.kind, args.stages, args.cutter, args.center)
    else:
        rep = cmd_oracle(doc, args.group, args.radius)
    out = getattr(args, "output", None)
    if out and rep.document is not None:
        with open(out, "w") as fh:
            fh.write(serialize(rep.document))
        rep.add(f"wrote {out}")
    if getattr(args, "json", False):
        body = {"status": rep.status, "report": rep.lines, "data": rep.data}
        if rep.document is not None:
            body["result"] = {"kind": rep.document.kind, "payload": to_payload(rep.document.kind, rep.document.obj)}
        return rep.status, json.dumps(body, sort_keys=True, default=_default) + "\n"
    return rep.status, "\n".join(rep.lines) + "\n"


def _default(x):
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(type(x).__name__)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        status, text = dispatch(argv)
    except SystemExit as e:  # argparse usage errors
        return 2 if e.code else 0
    except (F1Error, OSError, ValueError) as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return 2
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
