"""JSON documents for algebras, cones, complexes, atlases and morphisms.

A document is a JSON object ``{"format_version": 1, "kind": ..., "payload": ...}``.
Serialization is canonical: keys are sorted, cones are stored by their
irredundant inequalities, and faces (punctures, gluing faces) by their
canonical cutters. On input, cones may also be given by rays and faces by
lists of rays.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .characters import CharacterGroup
from .complex import ComplexMorphism, ConeComplex, Gluing
from .cone import Cone, PuncturedCone
from .errors import F1Error, InvariantError, SchemaError
from .f1algebra import PRESENTED, F1Algebra, MonomialIdeal, from_presentation

FORMAT_VERSION = 1
KINDS = ("algebra", "cone", "complex", "scheme_atlas", "formal_scheme_atlas", "morphism")


@dataclass
class Document:
    kind: str
    obj: Any
    format_version: int = FORMAT_VERSION


# writing -----------------------------------------------------------------------


def group_to_json(g: CharacterGroup) -> dict:
    return {"rank": g.rank, "torsion": list(g.torsion)}


def algebra_to_json(A: F1Algebra) -> dict:
    if A.mode == PRESENTED:
        n = len(A.generators)
        return {"mode": "presented", "n_generators": n, "relations": [[list(a), list(b)] for a, b in A.relations]}
    return {"mode": "embedded", "group": group_to_json(A.group), "generators": sorted(list(g) for g in A.generators)}


def _canonical_inequalities(c: Cone) -> list:
    return sorted(list(c.group.element(f)) for f in c.polar_generators())


def _cutter(c: Cone, face) -> list:
    return list(c.face_of_rays(face).cutter)


def cone_to_json(c: Cone) -> dict:
    return {"group": group_to_json(c.group), "inequalities": _canonical_inequalities(c)}


def punctured_to_json(pc: PuncturedCone, ident: int) -> dict:
    return {
        "id": ident,
        "cone": cone_to_json(pc.cone),
        "punctures": sorted(_cutter(pc.cone, f.ray_indices) for f in pc.puncture_faces()),
    }


def complex_to_json(S: ConeComplex) -> dict:
    gluings = []
    for g in S.gluings:
        ci, cj = S.cones[g.i].cone, S.cones[g.j].cone
        fi = ci.face(ci.group.element(g.cutter_i)).ray_indices
        fj = cj.face(cj.group.element(g.cutter_j)).ray_indices
        gluings.append(
            {
                "from": g.i,
                "from_cutter": _cutter(ci, fi),
                "to": g.j,
                "to_cutter": _cutter(cj, fj),
                "charmap": [list(r) for r in g.charmap],
            }
        )
    gluings.sort(key=lambda d: (d["from"], d["to"], d["from_cutter"], d["to_cutter"], d["charmap"]))
    return {"cones": [punctured_to_json(pc, k) for k, pc in enumerate(S.cones)], "gluings": gluings}


def atlas_to_json(X) -> dict:
    from .functors import FormalSchemeAtlas

    atlas = X.atlas if isinstance(X, FormalSchemeAtlas) else X
    out = {
        "charts": [algebra_to_json(A) for A in atlas.charts],
        "gluings": sorted(
            (
                {"from": g.i, "from_localize": list(g.f_i), "to": g.j, "to_localize": list(g.f_j), "charmap": [list(r) for r in g.charmap]}
                for g in atlas.gluings
            ),
            key=lambda d: (d["from"], d["to"], d["from_localize"], d["to_localize"]),
        ),
    }
    if isinstance(X, FormalSchemeAtlas):
        out["ideals"] = [None if T is None else sorted(list(t) for t in T.generators) for T in X.ideals]
    return out


def morphism_to_json(f: ComplexMorphism) -> dict:
    return {
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "assignments": [
            {"cone": k, "target_cone": a.target, "charmap": [list(r) for r in a.charmap]} for k, a in enumerate(f.assignments)
        ],
    }


def to_payload(kind: str, obj) -> dict:
    return {
        "algebra": algebra_to_json,
        "cone": cone_to_json,
        "complex": complex_to_json,
        "scheme_atlas": atlas_to_json,
        "formal_scheme_atlas": atlas_to_json,
        "morphism": morphism_to_json,
    }[kind](obj)


def kind_of(obj) -> str:
    from .functors import FormalSchemeAtlas, SchemeAtlas

    for cls, kind in (
        (F1Algebra, "algebra"),
        (Cone, "cone"),
        (ConeComplex, "complex"),
        (FormalSchemeAtlas, "formal_scheme_atlas"),
        (SchemeAtlas, "scheme_atlas"),
        (ComplexMorphism, "morphism"),
    ):
        if isinstance(obj, cls):
            return kind
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def serialize(doc: Document | Any) -> str:
    if not isinstance(doc, Document):
        doc = Document(kind_of(doc), doc)
    body = {"format_version": doc.format_version, "kind": doc.kind, "payload": to_payload(doc.kind, doc.obj)}
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


# reading -----------------------------------------------------------------------


class _Reader:
    """Field access that reports the offending field and its line."""

    def __init__(self, text: str):
        self.text = text

    def fail(self, field: str, message: str):
        m = re.search(r'"' + re.escape(field.split(".")[-1].split("[")[0]) + r'"\s*:', self.text)
        line = self.text.count("\n", 0, m.start()) + 1 if m else None
        raise SchemaError(message, field=field, line=line)

    def get(self, obj, key: str, path: str, types=None, optional=False, default=None):
        if not isinstance(obj, dict):
            self.fail(path, f"{path} must be an object")
        if key not in obj:
            if optional:
                return default
            self.fail(f"{path}.{key}", f"missing field {path}.{key}")
        val = obj[key]
        if types is not None and not isinstance(val, types):
            self.fail(f"{path}.{key}", f"field {path}.{key} has the wrong type")
        return val

    def ints(self, val, path: str) -> tuple:
        if not isinstance(val, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in val):
            self.fail(path, f"{path} must be a list of integers")
        return tuple(val)

    def vectors(self, val, path: str) -> list[tuple]:
        if not isinstance(val, list):
            self.fail(path, f"{path} must be a list of integer vectors")
        return [self.ints(v, f"{path}[{k}]") for k, v in enumerate(val)]

    def group(self, obj, path: str) -> CharacterGroup:
        g = self.get(obj, "group", path, dict)
        rank = self.get(g, "rank", f"{path}.group", int)
        torsion = self.ints(self.get(g, "torsion", f"{path}.group", list, optional=True, default=[]), f"{path}.group.torsion")
        return CharacterGroup(rank, torsion)

    def algebra(self, obj, path: str) -> F1Algebra:
        mode = self.get(obj, "mode", path, str, optional=True, default="embedded")
        if mode == "presented":
            n = self.get(obj, "n_generators", path, int)
            rels = self.get(obj, "relations", path, list, optional=True, default=[])
            pairs = []
            for k, r in enumerate(rels):
                if not isinstance(r, list) or len(r) != 2:
                    self.fail(f"{path}.relations[{k}]", "a relation is a pair of exponent vectors")
                pairs.append((self.ints(r[0], f"{path}.relations[{k}]"), self.ints(r[1], f"{path}.relations[{k}]")))
            return from_presentation(n, pairs)
        if mode != "embedded":
            self.fail(f"{path}.mode", f"unknown algebra mode {mode!r}")
        group = self.group(obj, path)
        gens = self.vectors(self.get(obj, "generators", path, list), f"{path}.generators")
        return F1Algebra(group, tuple(group.element(g) for g in gens))

    def cone(self, obj, path: str) -> Cone:
        """Inequalities (the stored form) or, as a convenience, rays plus lineality."""
        group = self.group(obj, path)
        if "inequalities" in obj:
            ineqs = self.vectors(obj["inequalities"], f"{path}.inequalities")
            for v in ineqs:
                if len(v) != group.dim:
                    self.fail(f"{path}.inequalities", f"inequalities in {path} must have length {group.dim}")
            return Cone(group, [group.element(v) for v in ineqs])
        rays = self.vectors(self.get(obj, "rays", path, list), f"{path}.rays")
        lin = self.vectors(self.get(obj, "lineality", path, list, optional=True, default=[]), f"{path}.lineality")
        for v in rays + lin:
            if len(v) != group.rank:
                self.fail(f"{path}.rays", f"vectors in {path} must have length {group.rank}")
        return Cone.from_rays(group, rays + lin + [tuple(-x for x in v) for v in lin])

    def face(self, cone: Cone, spec, path: str, key: str) -> frozenset:
        """A face given by a cutter (``key`` ending in _cutter) or by its rays."""
        if key.endswith("cutter"):
            f = self.ints(spec, path)
            if len(f) != cone.group.dim:
                self.fail(path, f"{path} must have length {cone.group.dim}")
            if not cone.is_nonpositive(cone.group.element(f)):
                self.fail(path, f"{path} is not nonpositive on the cone, so it cuts out no face")
            return cone.face(cone.group.element(f)).ray_indices
        vecs = self.vectors(spec, path)
        idx = {r: k for k, r in enumerate(cone.ray_tuple)}
        missing = [v for v in vecs if v not in idx]
        if missing:
            self.fail(path, f"{path}: {list(missing[0])} is not a ray of the cone")
        return frozenset(idx[v] for v in vecs)

    def punctured(self, obj, path: str) -> PuncturedCone:
        inner = self.get(obj, "cone", path, dict, optional=True, default=obj)
        cone = self.cone(inner, f"{path}.cone" if inner is not obj else path)
        punct = self.get(obj, "punctures", path, list, optional=True, default=[])
        faces = []
        for k, p in enumerate(punct):
            # a cutter is a nonempty integer vector; anything else lists rays
            key = "cutter" if isinstance(p, list) and p and all(isinstance(x, int) for x in p) else "rays"
            faces.append(self.face(cone, p, f"{path}.punctures[{k}]", key))
        return PuncturedCone(cone, faces)

    def complex(self, obj, path: str) -> ConeComplex:
        raw = self.get(obj, "cones", path, list)
        if all(isinstance(c, dict) and "id" in c for c in raw):
            ids = [c["id"] for c in raw]
            if sorted(ids) != list(range(len(raw))):
                self.fail(f"{path}.cones", "cone ids must be 0, 1, ..., n-1")
            raw = sorted(raw, key=lambda c: c["id"])
        cones = [self.punctured(c, f"{path}.cones[{k}]") for k, c in enumerate(raw)]
        gluings = []
        for k, g in enumerate(self.get(obj, "gluings", path, list, optional=True, default=[])):
            gp = f"{path}.gluings[{k}]"
            i, j = self.get(g, "from", gp, int), self.get(g, "to", gp, int)
            if not (0 <= i < len(cones) and 0 <= j < len(cones)):
                self.fail(gp, f"{gp} refers to a missing cone")
            cut = []
            for end, idx in (("from", i), ("to", j)):
                key = f"{end}_cutter" if f"{end}_cutter" in g else f"{end}_face"
                face = self.face(cones[idx].cone, self.get(g, key, gp, list), f"{gp}.{key}", key)
                cut.append(cones[idx].cone.face_of_rays(face).cutter)
            m = self.vectors(self.get(g, "charmap", gp, list), f"{gp}.charmap")
            gluings.append(Gluing(i, cut[0], j, cut[1], m))
        return ConeComplex(cones, gluings)

    def atlas(self, obj, path: str, formal: bool):
        from .functors import FormalSchemeAtlas, SchemeAtlas, SchemeGluing

        charts = [self.algebra(a, f"{path}.charts[{k}]") for k, a in enumerate(self.get(obj, "charts", path, list))]
        gluings = []
        for k, g in enumerate(self.get(obj, "gluings", path, list, optional=True, default=[])):
            gp = f"{path}.gluings[{k}]"
            gluings.append(
                SchemeGluing(
                    self.get(g, "from", gp, int),
                    self.ints(self.get(g, "from_localize", gp, list), f"{gp}.from_localize"),
                    self.get(g, "to", gp, int),
                    self.ints(self.get(g, "to_localize", gp, list), f"{gp}.to_localize"),
                    self.vectors(self.get(g, "charmap", gp, list), f"{gp}.charmap"),
                )
            )
        atlas = SchemeAtlas(charts, gluings)
        if not formal:
            return atlas
        raw = self.get(obj, "ideals", path, list)
        if len(raw) != len(charts):
            self.fail(f"{path}.ideals", "one ideal (or null) per chart is required")
        ideals = []
        for k, (A, t) in enumerate(zip(charts, raw)):
            if t is None:
                ideals.append(None)
            else:
                ideals.append(MonomialIdeal(A, tuple(A.group.element(v) for v in self.vectors(t, f"{path}.ideals[{k}]"))))
        return FormalSchemeAtlas(atlas, ideals)

    def morphism(self, obj, path: str) -> ComplexMorphism:
        src = self.complex(self.get(obj, "source", path, dict), f"{path}.source")
        tgt = self.complex(self.get(obj, "target", path, dict), f"{path}.target")
        assigns = []
        for k, a in enumerate(self.get(obj, "assignments", path, list)):
            ap = f"{path}.assignments[{k}]"
            target = self.get(a, "target_cone", ap, int, optional=True)
            if target is None:
                target = self.get(a, "target", ap, int)
            assigns.append((target, self.vectors(self.get(a, "charmap", ap, list), f"{ap}.charmap")))
        return ComplexMorphism(src, tgt, assigns)


def parse_text(text: str) -> Document:
    try:
        body = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not valid JSON: {e.msg}", field=None, line=e.lineno) from None
    r = _Reader(text)
    version = r.get(body, "format_version", "document", int)
    if version != FORMAT_VERSION:
        r.fail("format_version", f"unsupported format_version {version}")
    kind = r.get(body, "kind", "document", str)
    if kind not in KINDS:
        r.fail("kind", f"unknown document kind {kind!r}")
    payload = r.get(body, "payload", "document", dict)
    try:
        if kind == "algebra":
            obj = r.algebra(payload, "payload")
        elif kind == "cone":
            obj = r.cone(payload, "payload")
        elif kind == "complex":
            obj = r.complex(payload, "payload")
        elif kind in ("scheme_atlas", "formal_scheme_atlas"):
            obj = r.atlas(payload, "payload", kind == "formal_scheme_atlas")
        else:
            obj = r.morphism(payload, "payload")
    except SchemaError:
        raise
    except InvariantError:
        raise
    except F1Error as e:
        raise InvariantError(str(e)) from e
    return Document(kind, obj, version)


def parse(path: str | Path) -> Document:
    return parse_text(Path(path).read_text())


def dump(obj, path: str | Path) -> None:
    Path(path).write_text(serialize(obj))
