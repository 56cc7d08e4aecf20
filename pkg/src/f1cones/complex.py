"""Punctured cone complexes: atlases of punctured cones glued along faces.

A gluing ``(i, cutter_i, j, cutter_j, M)`` identifies the face of cone i cut by
``cutter_i`` with the face of cone j cut by ``cutter_j``. ``M`` is the integer
matrix of the character isomorphism K_j -> K_i acting on free coordinates
(column vectors), so a point v of N_i corresponds to ``M^T v`` in N_j.
Torsion in the character groups is ignored here: cones only see N(Q).

Faces are identified transitively; the resulting classes are called cells.
Every cell remembers, for each (chart, face) node in it, the character map
from that node's group to the group of the first node (its root).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from . import lattice as lat
from .characters import CharacterGroup, Element
from .cone import Cone, Face, PuncturedCone
from .errors import (
    IncoherentTransition,
    InvariantError,
    NonConstantSystem,
    NonIsomorphicGluing,
    NotASubcomplex,
    SelfGluedFaces,
)

Matrix = tuple  # tuple of integer row tuples
Node = tuple  # (chart index, sorted tuple of ray indices)


def as_matrix(m: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in m)


def identity_matrix(n: int) -> Matrix:
    return as_matrix(lat.identity(n))


def mat_mul(a: Matrix, b: Matrix, inner: Optional[int] = None) -> Matrix:
    if not a:
        return ()
    k = len(a[0]) if inner is None else inner
    if k == 0:
        n = len(b[0]) if b else 0
        return tuple((0,) * n for _ in a)
    if not b or not b[0]:
        return tuple(() for _ in a)
    return as_matrix(lat.matmul(a, b))


def mat_inv(a: Matrix) -> Matrix:
    if not a:
        return ()
    return as_matrix(lat.unimodular_inverse(a))


def mat_t(a: Matrix, nrows: Optional[int] = None) -> Matrix:
    """Transpose; ``nrows`` is the row count of the result for empty inputs."""
    if not a:
        return tuple(() for _ in range(nrows or 0))
    return as_matrix(lat.transpose(a))


def apply(a: Matrix, v: Sequence) -> tuple:
    return tuple(lat.dot(row, v) for row in a)


def node_key(chart: int, rays: Iterable[int]) -> Node:
    return (chart, tuple(sorted(rays)))


@dataclass(frozen=True)
class Gluing:
    i: int
    cutter_i: Element
    j: int
    cutter_j: Element
    charmap: Matrix

    def __post_init__(self):
        object.__setattr__(self, "cutter_i", tuple(int(x) for x in self.cutter_i))
        object.__setattr__(self, "cutter_j", tuple(int(x) for x in self.cutter_j))
        object.__setattr__(self, "charmap", as_matrix(self.charmap))

    def reversed(self) -> "Gluing":
        return Gluing(self.j, self.cutter_j, self.i, self.cutter_i, mat_inv(self.charmap))

    def to_json(self) -> dict:
        return {
            "from": self.i,
            "from_cutter": list(self.cutter_i),
            "to": self.j,
            "to_cutter": list(self.cutter_j),
            "charmap": [list(r) for r in self.charmap],
        }


@dataclass(frozen=True)
class Cell:
    """An equivalence class of unpunctured faces under the gluings."""

    nodes: tuple
    transitions: Mapping  # node -> matrix K_node -> K_root

    @property
    def root(self) -> Node:
        return self.nodes[0]

    def charts(self) -> list[int]:
        return [n[0] for n in self.nodes]

    def node_of(self, chart: int) -> Optional[Node]:
        for n in self.nodes:
            if n[0] == chart:
                return n
        return None

    def transition(self, a: Node, b: Node) -> Matrix:
        """Character map K_b -> K_a between two nodes of this cell."""
        return mat_mul(mat_inv(self.transitions[a]), self.transitions[b])


class ConeComplex:
    """A validated finite atlas of punctured cones."""

    def __init__(self, cones: Sequence[PuncturedCone], gluings: Sequence[Gluing] = ()):
        self.cones = tuple(cones)
        for c in self.cones:
            if not isinstance(c, PuncturedCone):
                raise InvariantError("cones must be PuncturedCone values")
        canon = []
        for g in gluings:
            if not isinstance(g, Gluing):
                g = Gluing(*g)
            self._check_gluing_shape(g)
            if g.i > g.j:
                g = g.reversed()
            canon.append(g)
        canon.sort(key=lambda g: (g.i, g.j, g.cutter_i, g.cutter_j, g.charmap))
        self.gluings = tuple(canon)
        self._closure  # validate eagerly

    def _check_gluing_shape(self, g: Gluing):
        n = len(self.cones)
        if not (0 <= g.i < n and 0 <= g.j < n):
            raise InvariantError(f"gluing refers to a missing cone: {g.i}, {g.j}")
        ri, rj = self.cones[g.i].group.rank, self.cones[g.j].group.rank
        if ri != rj:
            raise NonIsomorphicGluing(f"cones {g.i} and {g.j} have character groups of different rank")
        m = g.charmap
        if len(m) != ri or any(len(row) != ri for row in m):
            raise NonIsomorphicGluing(f"charmap of gluing {g.i}-{g.j} must be {ri}x{ri}")
        if ri and abs(lat.det(m)) != 1:
            raise NonIsomorphicGluing(f"charmap {[list(r) for r in m]} of gluing {g.i}-{g.j} is not invertible over Z")

    # closure -------------------------------------------------------------
    @cached_property
    def _closure(self):
        adj: dict[Node, list[tuple[Node, Matrix]]] = {}
        for ci, pc in enumerate(self.cones):
            for face in pc.kept_faces():
                adj[node_key(ci, face.ray_indices)] = []
        for g in self.gluings:
            for sub_i, sub_j in self._glued_pairs(g):
                a, b = node_key(g.i, sub_i), node_key(g.j, sub_j)
                adj[a].append((b, g.charmap))
                adj[b].append((a, mat_inv(g.charmap)))
        cells, where = [], {}
        pending = None
        for start in sorted(adj):
            if start in where:
                continue
            r = self.cones[start[0]].group.rank
            trans = {start: identity_matrix(r)}
            conflict = None
            queue = deque([start])
            while queue:
                a = queue.popleft()
                for b, m in adj[a]:
                    gb = mat_mul(trans[a], m, r)
                    if b in trans:
                        if trans[b] != gb and conflict is None:
                            conflict = b
                    else:
                        trans[b] = gb
                        queue.append(b)
            nodes = sorted(trans)
            charts = [n[0] for n in nodes]
            if len(set(charts)) != len(charts):
                dup = next(c for c in charts if charts.count(c) > 1)
                faces = [list(n[1]) for n in nodes if n[0] == dup]
                raise SelfGluedFaces(f"distinct faces {faces} of cone {dup} are identified")
            if conflict is not None and pending is None:
                pending = conflict
            # re-root at the smallest node
            root = nodes[0]
            inv_root = mat_inv(trans[root])
            trans = {n: mat_mul(inv_root, trans[n], r) for n in nodes}
            idx = len(cells)
            cells.append(Cell(tuple(nodes), trans))
            for n in nodes:
                where[n] = idx
        if pending is not None:
            raise IncoherentTransition(
                f"face {list(pending[1])} of cone {pending[0]} is identified with itself through a "
                f"nontrivial character map"
            )
        return cells, where

    def _glued_pairs(self, g: Gluing):
        """Pairs of ray-index sets (sub-face of face_i, its image in face_j)."""
        ci, cj = self.cones[g.i], self.cones[g.j]
        fi, fj = ci.cone.face(ci.group.element(g.cutter_i)), cj.cone.face(cj.group.element(g.cutter_j))
        if ci.is_punctured(fi) or cj.is_punctured(fj):
            raise NonIsomorphicGluing(f"gluing {g.i}-{g.j} is along a punctured face")
        mt = mat_t(g.charmap)
        rays_j = {r: k for k, r in enumerate(cj.cone.ray_tuple)}
        image = {}
        for k in fi.ray_indices:
            w = apply(mt, ci.cone.ray_tuple[k])
            if w not in rays_j or rays_j[w] not in fj.ray_indices:
                raise NonIsomorphicGluing(
                    f"gluing {g.i}-{g.j}: ray {ci.cone.ray_tuple[k]} maps to {w}, not a ray of the target face"
                )
            image[k] = rays_j[w]
        if set(image.values()) != set(fj.ray_indices) or len(fi.ray_indices) != len(fj.ray_indices):
            raise NonIsomorphicGluing(f"gluing {g.i}-{g.j} does not map the face onto the face")
        out = []
        for s in ci.cone._face_table:
            if s <= fi.ray_indices:
                t = frozenset(image[k] for k in s)
                if ci.is_punctured(s) != cj.is_punctured(t):
                    raise NonIsomorphicGluing(f"gluing {g.i}-{g.j} does not match punctures on face {sorted(s)}")
                if not ci.is_punctured(s):
                    out.append((s, t))
        return out

    @property
    def cells(self) -> list[Cell]:
        return self._closure[0]

    def cell_index(self, chart: int, rays: Iterable[int]) -> int:
        return self._closure[1][node_key(chart, rays)]

    def cells_of(self, chart: int) -> list[int]:
        return sorted({i for n, i in self._closure[1].items() if n[0] == chart})

    def __len__(self):
        return len(self.cones)

    @property
    def canonical(self):
        where = self._closure[1]
        cells = self.cells
        return self.cones, frozenset((n, cells[i].root, cells[i].transitions[n]) for n, i in where.items())

    def __eq__(self, other):
        if not isinstance(other, ConeComplex):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self):
        return hash(self.cones)

    def __repr__(self):
        return f"ConeComplex({len(self.cones)} cones, {len(self.gluings)} gluings)"

    def to_json(self) -> dict:
        from .serialize import complex_to_json

        return complex_to_json(self)


def validate(cones: Sequence[PuncturedCone], gluings: Sequence = ()) -> ConeComplex:
    return ConeComplex(cones, gluings)


# contiguity --------------------------------------------------------------


def shared_faces(S: ConeComplex, a: int, b: int, maximal: bool = True) -> list[tuple[frozenset, frozenset, Matrix]]:
    """Faces of cone a identified with faces of cone b, with the map K_b -> K_a."""
    out = []
    for cell in S.cells:
        na, nb = cell.node_of(a), cell.node_of(b)
        if na is not None and nb is not None:
            out.append((frozenset(na[1]), frozenset(nb[1]), cell.transition(na, nb)))
    if maximal:
        out = [x for x in out if not any(x[0] < y[0] for y in out)]
    out.sort(key=lambda x: (-len(x[0]), sorted(x[0])))
    return out


def contiguous(S: ConeComplex, a: int, b: int) -> Optional[Face]:
    """A largest shared face of cones a and b, as a face of cone a, or None."""
    sh = shared_faces(S, a, b)
    if not sh:
        return None
    return S.cones[a].cone.face_of_rays(sh[0][0])


def contiguity_classes(S: ConeComplex, i: int) -> list[int]:
    return [j for j in range(len(S.cones)) if shared_faces(S, i, j, maximal=False)]


def components(S: ConeComplex) -> list[list[int]]:
    parent = list(range(len(S.cones)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cell in S.cells:
        cs = cell.charts()
        for c in cs[1:]:
            parent[find(c)] = find(cs[0])
    groups: dict[int, list[int]] = {}
    for c in range(len(S.cones)):
        groups.setdefault(find(c), []).append(c)
    return sorted(groups.values())


# sub-complexes -------------------------------------------------------------


def with_punctures(S: ConeComplex, extra: Mapping[int, Iterable[frozenset]], drop: Iterable[int] = ()) -> tuple[ConeComplex, dict[int, int]]:
    """Add punctures per chart, drop the given charts, keep gluings on unpunctured faces."""
    drop = set(drop)
    keep = [c for c in range(len(S.cones)) if c not in drop]
    index = {c: k for k, c in enumerate(keep)}
    cones = []
    for c in keep:
        pc = S.cones[c]
        cones.append(PuncturedCone(pc.cone, set(pc.punctures) | set(extra.get(c, ()))))
    gluings = []
    for g in S.gluings:
        if g.i in index and g.j in index:
            ci, cj = cones[index[g.i]], cones[index[g.j]]
            fi = ci.cone.face(ci.group.element(g.cutter_i))
            fj = cj.cone.face(cj.group.element(g.cutter_j))
            if not ci.is_punctured(fi) and not cj.is_punctured(fj):
                gluings.append(Gluing(index[g.i], g.cutter_i, index[g.j], g.cutter_j, g.charmap))
    return ConeComplex(cones, gluings), index


def restrict(S: ConeComplex, charts: Iterable[int]) -> ConeComplex:
    """The subcomplex on a set of charts."""
    charts = set(charts)
    return with_punctures(S, {}, [c for c in range(len(S.cones)) if c not in charts])[0]


def big_star(S: ConeComplex, i: int, with_index: bool = False):
    """Puncture S along every cone discontiguous with cone i."""
    far = [k for k in range(len(S.cones)) if not shared_faces(S, i, k, maximal=False)]
    bad = set()
    for k in far:
        bad.update(S.cells_of(k))
    extra: dict[int, set] = {}
    for idx in bad:
        for chart, rays in S.cells[idx].nodes:
            extra.setdefault(chart, set()).add(frozenset(rays))
    out, index = with_punctures(S, extra, far)
    return (out, index) if with_index else out


def small_star(S: ConeComplex, i: int, face: Optional[Iterable[int] | Face] = None) -> ConeComplex:
    """Subcomplex of the cones containing cone i (or the given face of cone i) as a face."""
    pc = S.cones[i]
    if face is None:
        rays = frozenset(range(len(pc.cone.ray_tuple)))
    elif isinstance(face, Face):
        rays = face.ray_indices
    else:
        rays = frozenset(face)
    cell = S.cells[S.cell_index(i, rays)]
    return restrict(S, cell.charts())


def puncture_along(S: ConeComplex, sub: Mapping[int, Iterable]) -> ConeComplex:
    """Puncture S along a subcomplex given as faces per chart (closed under faces and gluings)."""
    marked = set()
    for chart, faces in sub.items():
        if not 0 <= chart < len(S.cones):
            raise NotASubcomplex(f"no cone {chart}")
        pc = S.cones[chart]
        for f in faces:
            if isinstance(f, Face):
                s = f.ray_indices
            elif isinstance(f, frozenset):
                s = f
            else:
                try:
                    s = pc.cone.face(pc.group.element(f)).ray_indices
                except InvariantError as e:
                    raise NotASubcomplex(str(e)) from None
            if s not in pc.cone._face_table:
                raise NotASubcomplex(f"{sorted(s)} is not a face of cone {chart}")
            for t in pc.cone._face_table:
                if t <= s and not pc.is_punctured(t):
                    marked.add(S.cell_index(chart, t))
    extra: dict[int, set] = {}
    for idx in marked:
        for chart, rays in S.cells[idx].nodes:
            pc = S.cones[chart]
            if len(rays) == len(pc.cone.ray_tuple):
                raise NotASubcomplex(f"puncturing would remove all of cone {chart}")
            extra.setdefault(chart, set()).add(frozenset(rays))
    return with_punctures(S, extra)[0]


def from_pieces(S: ConeComplex, pieces: Sequence[tuple[int, frozenset]]) -> ConeComplex:
    """Complex whose charts are the given faces of charts of S, glued along shared cells."""
    new_cones, ray_maps = [], []
    for chart, rays in pieces:
        pc = S.cones[chart]
        face = pc.cone.face_of_rays(rays)
        cone = pc.cone if len(rays) == len(pc.cone.ray_tuple) else face.as_cone()
        pos = {r: k for k, r in enumerate(cone.ray_tuple)}
        rmap = {k: pos[pc.cone.ray_tuple[k]] for k in rays}
        punct = [frozenset(rmap[k] for k in p) for p in pc.punctures if p <= rays]
        new_cones.append(PuncturedCone(cone, punct))
        ray_maps.append(rmap)
    gluings = []
    for p in range(len(pieces)):
        for q in range(p + 1, len(pieces)):
            (a, fa), (b, fb) = pieces[p], pieces[q]
            shared = []
            for cell in S.cells:
                na, nb = cell.node_of(a), cell.node_of(b)
                if na is None or nb is None:
                    continue
                sa, sb = frozenset(na[1]), frozenset(nb[1])
                if sa <= fa and sb <= fb:
                    shared.append((sa, sb, cell.transition(na, nb)))
            shared = [x for x in shared if not any(x[0] < y[0] for y in shared)]
            for sa, sb, m in shared:
                ca, cb = new_cones[p].cone, new_cones[q].cone
                ua = ca.face_of_rays(frozenset(ray_maps[p][k] for k in sa)).cutter
                ub = cb.face_of_rays(frozenset(ray_maps[q][k] for k in sb)).cutter
                gluings.append(Gluing(p, ua, q, ub, m))
    return ConeComplex(new_cones, gluings)


# local systems -------------------------------------------------------------


@dataclass(frozen=True)
class Loop:
    edge: tuple  # (chart a, chart b, face of a)
    matrix: Matrix

    @property
    def is_trivial(self) -> bool:
        return self.matrix == identity_matrix(len(self.matrix))


@dataclass(frozen=True)
class LocalSystem:
    base: int
    charts: tuple
    tree: tuple  # edges (parent, child, face of parent)
    transitions: Mapping  # chart -> matrix K_chart -> K_base
    loops: tuple

    @property
    def is_constant(self) -> bool:
        return all(l.is_trivial for l in self.loops)

    def nontrivial_loops(self) -> list[Loop]:
        return [l for l in self.loops if not l.is_trivial]


def _edges(S: ConeComplex, charts: Sequence[int]):
    out = []
    for a in charts:
        for b in charts:
            if a < b:
                for fa, fb, m in shared_faces(S, a, b):
                    out.append((a, b, fa, m))
    return out


def _first_step(parent: Mapping[int, int], base: int, target: int, other: int) -> int:
    """First chart after ``base`` on the tree path to ``target`` (``other`` if target is base)."""
    if target == base:
        return other
    while parent[target] != base:
        target = parent[target]
    return target


def monodromy(S: ConeComplex, basepoint: int = 0) -> LocalSystem:
    """Spanning tree of the contiguity graph around ``basepoint`` and the
    monodromy of every remaining edge, as automorphisms of K_base."""
    comp = next(c for c in components(S) if basepoint in c)
    r = S.cones[basepoint].group.rank
    edges = _edges(S, comp)
    adj: dict[int, list] = {c: [] for c in comp}
    for k, (a, b, fa, m) in enumerate(edges):
        adj[a].append((k, b, m))
        adj[b].append((k, a, mat_inv(m)))
    trans = {basepoint: identity_matrix(r)}
    parent: dict[int, int] = {}
    tree, used = [], set()
    queue = deque([basepoint])
    while queue:
        a = queue.popleft()
        for k, b, m in adj[a]:
            if b not in trans:
                trans[b] = mat_mul(trans[a], m, r)
                parent[b] = a
                used.add(k)
                tree.append((a, b, tuple(sorted(edges[k][2]))))
                queue.append(b)
    loops = []
    for k, (a, b, fa, m) in enumerate(edges):
        if k in used:
            continue
        # leave along the tree to b, cross back to a, return along the tree;
        # reversed if that leaves the basepoint towards a higher-numbered chart
        mono = mat_mul(mat_mul(trans[b], mat_inv(m), r), mat_inv(trans[a]), r)
        if _first_step(parent, basepoint, a, b) < _first_step(parent, basepoint, b, a):
            mono = mat_inv(mono)
        loops.append(Loop((a, b, tuple(sorted(fa))), mono))
    return LocalSystem(basepoint, tuple(comp), tuple(tree), trans, tuple(loops))


def develop(S: ConeComplex, basepoint: int = 0) -> dict[int, Matrix]:
    """Linear embeddings N_chart -> N_base (matrices on column vectors) for the
    component of ``basepoint``; requires constant monodromy."""
    ls = monodromy(S, basepoint)
    if not ls.is_constant:
        loop = ls.nontrivial_loops()[0]
        raise NonConstantSystem(f"monodromy {[list(r) for r in loop.matrix]} around edge {loop.edge[:2]}")
    return {c: mat_t(mat_inv(m)) for c, m in ls.transitions.items()}


def developed_rays(S: ConeComplex, dev: Mapping[int, Matrix], chart: int, rays: Optional[Iterable[int]] = None) -> list[tuple]:
    pc = S.cones[chart]
    idx = range(len(pc.cone.ray_tuple)) if rays is None else sorted(rays)
    return [apply(dev[chart], pc.cone.ray_tuple[k]) for k in idx]


# morphisms ----------------------------------------------------------------


@dataclass(frozen=True)
class Assignment:
    target: int
    charmap: Matrix  # K_target -> K_source on free coordinates (source rank x target rank)


class ComplexMorphism:
    """Per source cone: a target cone and a character map K_target -> K_source.

    The induced map on N is the transpose of the character map."""

    def __init__(self, source: ConeComplex, target: ConeComplex, assignments: Sequence):
        self.source = source
        self.target = target
        items = []
        for a in assignments:
            if not isinstance(a, Assignment):
                a = Assignment(int(a[0]), as_matrix(a[1]))
            items.append(Assignment(a.target, as_matrix(a.charmap)))
        self.assignments = tuple(items)
        self._validate()

    def linear_map(self, chart: int) -> Matrix:
        a = self.assignments[chart]
        return mat_t(a.charmap, self.target.cones[a.target].group.rank)

    def image(self, chart: int, v: Sequence) -> tuple:
        return apply(self.linear_map(chart), v)

    def _validate(self):
        S, T = self.source, self.target
        if len(self.assignments) != len(S.cones):
            raise InvariantError("one assignment per source cone is required")
        for i, a in enumerate(self.assignments):
            if not 0 <= a.target < len(T.cones):
                raise InvariantError(f"cone {i} assigned to missing target {a.target}")
            rs, rt = S.cones[i].group.rank, T.cones[a.target].group.rank
            if len(a.charmap) != rs or any(len(row) != rt for row in a.charmap):
                raise InvariantError(f"charmap of cone {i} must be {rs}x{rt}")
            tc = T.cones[a.target]
            for v in S.cones[i].cone.ray_tuple:
                if not tc.cone.contains(self.image(i, v)):
                    raise InvariantError(f"ray {v} of cone {i} does not map into target cone {a.target}")
            for face in S.cones[i].kept_faces():
                tf = self.target_face(i, face.ray_indices)
                if tc.is_punctured(tf):
                    raise InvariantError(f"kept face {face.rays} of cone {i} maps into a punctured face")
        for g in S.gluings:
            self._check_gluing(g)

    def target_face(self, chart: int, rays: Iterable[int]) -> frozenset:
        """Smallest face of the assigned target cone containing the image of a face."""
        pc = self.source.cones[chart]
        tc = self.target.cones[self.assignments[chart].target].cone
        pts = [self.image(chart, pc.cone.ray_tuple[k]) for k in rays]
        total = tuple(sum(x) for x in zip(*pts)) if pts else (0,) * tc.rank
        return tc.minimal_face_containing(total).ray_indices

    def _check_gluing(self, g: Gluing):
        S, T = self.source, self.target
        fi = S.cones[g.i].cone.face(S.cones[g.i].group.element(g.cutter_i)).ray_indices
        ta, tb = self.assignments[g.i], self.assignments[g.j]
        phi_a = self.target_face(g.i, fi)
        fj = S.cones[g.j].cone.face(S.cones[g.j].group.element(g.cutter_j)).ray_indices
        phi_b = self.target_face(g.j, fj)
        ca = T.cell_index(ta.target, phi_a)
        cb = T.cell_index(tb.target, phi_b)
        if ca != cb:
            raise InvariantError(f"gluing {g.i}-{g.j} maps to faces that are not identified in the target")
        cell = T.cells[ca]
        trans = cell.transition(node_key(ta.target, phi_a), node_key(tb.target, phi_b))
        rs = S.cones[g.i].group.rank
        lhs = mat_mul(ta.charmap, trans, T.cones[ta.target].group.rank)
        rhs = mat_mul(g.charmap, tb.charmap, rs)
        if lhs != rhs:
            raise InvariantError(f"morphism is not compatible with gluing {g.i}-{g.j}")

    @classmethod
    def identity(cls, S: ConeComplex) -> "ComplexMorphism":
        return cls(S, S, [(i, identity_matrix(c.group.rank)) for i, c in enumerate(S.cones)])

    @classmethod
    def to_point(cls, S: ConeComplex) -> "ComplexMorphism":
        return cls(S, point_complex(), [(0, tuple(() for _ in range(c.group.rank))) for c in S.cones])

    def __repr__(self):
        return f"ComplexMorphism({self.source!r} -> {self.target!r})"


def point_complex() -> ConeComplex:
    return ConeComplex([PuncturedCone(Cone(CharacterGroup(0), []))])


def preimage(f: ComplexMorphism, j: int) -> ConeComplex:
    """The complex of pieces sigma_i meet f^-1(sigma_j), with induced punctures and gluings."""
    S, T = f.source, f.target
    target_cells = set(T.cells_of(j))
    pieces = []
    for i, a in enumerate(f.assignments):
        t = a.target
        faces = [frozenset(T.cells[c].node_of(t)[1]) for c in target_cells if T.cells[c].node_of(t) is not None]
        faces = [x for x in faces if not any(x < y for y in faces)]
        tc = T.cones[t].cone
        pc = S.cones[i]
        for phi in sorted(faces, key=sorted):
            cutter = tc.face_of_rays(phi).cutter
            pulled = apply(a.charmap, tc.group.free(cutter))
            piece = pc.cone.face(pc.group.element(pulled)).ray_indices
            if not pc.is_punctured(piece) and (i, piece) not in pieces:
                pieces.append((i, piece))

    # drop pieces already identified with a face of a larger piece
    def covered(p):
        cell = S.cells[S.cell_index(*p)]
        return any(
            q != p and (n := cell.node_of(q[0])) is not None and frozenset(n[1]) <= q[1] and len(q[1]) > len(p[1])
            for q in pieces
        )

    return from_pieces(S, [p for p in pieces if not covered(p)])
