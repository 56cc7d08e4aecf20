"""Rational polyhedral cones in N(Q), the dual of a character group.

Sign convention: a character f defines the half-space {v : v(f) <= 0}. The
cone of an algebra A is therefore {v : v(a) <= 0 for all a in A \\ 0}, so the
affine line F1[t] has the ray {v <= 0}. Most toric software uses the
opposite sign.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import config
from . import lattice as lat
from .characters import CharacterGroup, Element
from .errors import CharacterMismatch, DimensionBound, InvariantError, NotPointed
from .hilbert import lattice_points_basis
from .polyhedra import double_description, face_ray_sets, generated_cone_dual


class Cone:
    """A cone {v in N(Q) : v(f) <= 0 for f in inequalities}; immutable."""

    __slots__ = ("group", "inequalities", "_rays", "lineality", "facets", "equations", "__dict__")

    def __init__(self, group: CharacterGroup, inequalities: Iterable[Sequence[int]]):
        self.group = group
        self.inequalities = tuple(group.element(f) for f in inequalities)
        r = group.rank
        rays, lin = double_description([group.free(f) for f in self.inequalities], r)
        self._rays = tuple(rays)
        self.lineality = tuple(lin)
        facets, eqs = generated_cone_dual(self._rays, self.lineality, r)
        self.facets = tuple(facets)
        self.equations = tuple(eqs)

    @classmethod
    def from_rays(cls, group: CharacterGroup, rays: Iterable[Sequence[int]]) -> "Cone":
        rays = [tuple(int(x) for x in v) for v in rays]
        facets, eqs = generated_cone_dual(rays, [], group.rank)
        ineqs = list(facets) + list(eqs) + [tuple(-x for x in e) for e in eqs]
        return cls(group, ineqs)

    @property
    def rank(self) -> int:
        return self.group.rank

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    def rays(self) -> list[tuple[int, ...]]:
        """Primitive extreme rays in lexicographic order."""
        if self.lineality:
            raise NotPointed(f"cone has lineality {list(self.lineality)}")
        return list(self._rays)

    @property
    def ray_tuple(self) -> tuple:
        return self._rays

    @cached_property
    def dim(self) -> int:
        return lat.rank(list(self._rays) + list(self.lineality), self.rank) if (self._rays or self.lineality) else 0

    def contains(self, v: Sequence) -> bool:
        return all(lat.dot(self.group.free(f), v) <= 0 for f in self.inequalities)

    def is_nonpositive(self, f: Element) -> bool:
        """Is the character f nonpositive on the whole cone?"""
        fr = self.group.free(f)
        if any(lat.dot(fr, l) for l in self.lineality):
            return False
        return all(lat.dot(fr, r) <= 0 for r in self._rays)

    def vanishes(self, f: Element) -> bool:
        fr = self.group.free(f)
        return all(lat.dot(fr, r) == 0 for r in self._rays) and all(lat.dot(fr, l) == 0 for l in self.lineality)

    def canonical_h(self) -> tuple[tuple, tuple]:
        return self.facets, self.equations

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return self.group == other.group and self._rays == other._rays and self.lineality == other.lineality

    def __hash__(self):
        return hash((self.group, self._rays, self.lineality))

    def __repr__(self):
        return f"Cone(rank={self.rank}, rays={list(self._rays)})" + (f" + lin{list(self.lineality)}" if self.lineality else "")

    # faces ------------------------------------------------------------
    @cached_property
    def _face_table(self) -> dict[frozenset, list[int]]:
        self.rays()
        return face_ray_sets(self._rays, self.facets)

    def faces(self, restrict_to=None) -> list["Face"]:
        """All faces with cutters, smallest first.

        With ``restrict_to`` an algebra A, only the faces cut out by an element
        of A \\ 0 are returned, each with the sum of the generators of A
        vanishing on it as cutter.
        """
        out = []
        for rs, facet_idx in self._face_table.items():
            if restrict_to is None:
                cutter = self.group.zero
                for j in facet_idx:
                    cutter = self.group.add(cutter, self.group.element(self.facets[j]))
                out.append(Face(self, cutter, rs))
            else:
                face_rays = [self._rays[i] for i in rs]
                cutter = self.group.zero
                for g in restrict_to.generators:
                    if all(lat.dot(self.group.free(g), r) == 0 for r in face_rays):
                        cutter = self.group.add(cutter, g)
                if self._zero_set(cutter) == rs:
                    out.append(Face(self, cutter, rs))
        out.sort(key=lambda f: (len(f.ray_indices), sorted(f.ray_indices)))
        return out

    def _zero_set(self, f: Element) -> frozenset:
        fr = self.group.free(f)
        return frozenset(i for i, r in enumerate(self._rays) if lat.dot(fr, r) == 0)

    def face(self, cutter: Sequence[int]) -> "Face":
        """The face cut out by a character nonpositive on the cone."""
        cutter = self.group.element(cutter)
        self.rays()
        if not self.is_nonpositive(cutter):
            raise InvariantError(f"cutter {cutter} is not nonpositive on {self}")
        return Face(self, cutter, self._zero_set(cutter))

    def face_of_rays(self, ray_indices: Iterable[int]) -> "Face":
        rs = frozenset(ray_indices)
        if rs not in self._face_table:
            raise InvariantError(f"ray set {sorted(rs)} is not a face of {self}")
        cutter = self.group.zero
        for j in self._face_table[rs]:
            cutter = self.group.add(cutter, self.group.element(self.facets[j]))
        return Face(self, cutter, rs)

    def minimal_face_containing(self, v: Sequence) -> "Face":
        """Smallest face whose span contains the point v (v must lie in the cone)."""
        rs = frozenset(range(len(self._rays)))
        for f in self.facets:
            if lat.dot(f, v) == 0:
                rs = rs & frozenset(i for i, r in enumerate(self._rays) if lat.dot(f, r) == 0)
        return self.face_of_rays(rs)

    def polar_generators(self) -> list[tuple[int, ...]]:
        """Free parts generating the polar cone (facets plus +/- equations)."""
        return list(self.facets) + list(self.equations) + [tuple(-x for x in e) for e in self.equations]


class Face:
    """A face of a cone, recorded by a cutter f with face = cone and {v(f) = 0}."""

    __slots__ = ("parent", "cutter", "ray_indices")

    def __init__(self, parent: Cone, cutter: Element, ray_indices: frozenset):
        self.parent = parent
        self.cutter = cutter
        self.ray_indices = frozenset(ray_indices)

    @property
    def rays(self) -> list[tuple[int, ...]]:
        return [self.parent.ray_tuple[i] for i in sorted(self.ray_indices)]

    @property
    def dim(self) -> int:
        return lat.rank(self.rays, self.parent.rank) if self.ray_indices else 0

    @property
    def is_proper(self) -> bool:
        return len(self.ray_indices) < len(self.parent.ray_tuple)

    def as_cone(self) -> Cone:
        g = self.parent.group
        return Cone(g, self.parent.inequalities + (g.neg(self.cutter),))

    def __le__(self, other: "Face") -> bool:
        return self.parent == other.parent and self.ray_indices <= other.ray_indices

    def __lt__(self, other: "Face") -> bool:
        return self.parent == other.parent and self.ray_indices < other.ray_indices

    def __eq__(self, other):
        if not isinstance(other, Face):
            return NotImplemented
        return self.parent == other.parent and self.ray_indices == other.ray_indices

    def __hash__(self):
        return hash((self.parent, self.ray_indices))

    def __repr__(self):
        return f"Face(rays={self.rays}, cutter={self.cutter})"


class Membership(enum.Enum):
    KEPT = "kept"
    PUNCTURED = "punctured"
    OUTSIDE = "outside"


class PuncturedCone:
    """A cone with a downward-closed set of proper faces removed."""

    __slots__ = ("cone", "punctures")

    def __init__(self, cone: Cone, punctures: Iterable = ()):
        cone.rays()
        self.cone = cone
        sets = set()
        for p in punctures:
            if isinstance(p, Face):
                if p.parent != cone:
                    raise InvariantError("puncture is a face of a different cone")
                sets.add(p.ray_indices)
            elif isinstance(p, frozenset):
                sets.add(p)
            else:
                sets.add(cone.face(p).ray_indices)
        full = frozenset(range(len(cone.ray_tuple)))
        table = cone._face_table
        for s in sets:
            if s not in table:
                raise InvariantError(f"puncture {sorted(s)} is not a face")
            if s == full:
                raise InvariantError("punctures must be proper faces")
        for s in sets:
            for t in table:
                if t < s and t not in sets:
                    missing = cone.face_of_rays(t)
                    raise InvariantError(
                        f"punctures are not downward closed: face with rays {missing.rays} "
                        f"(cutter {list(missing.cutter)}) is missing"
                    )
        self.punctures = frozenset(sets)

    @classmethod
    def downward_closed(cls, cone: Cone, punctures: Iterable = ()) -> "PuncturedCone":
        """Puncture the given faces together with all of their faces."""
        sets = set()
        for p in punctures:
            s = p.ray_indices if isinstance(p, Face) else p if isinstance(p, frozenset) else cone.face(p).ray_indices
            sets.update(t for t in cone._face_table if t <= s)
        return cls(cone, sets)

    @property
    def group(self) -> CharacterGroup:
        return self.cone.group

    def puncture_faces(self) -> list[Face]:
        return sorted((self.cone.face_of_rays(s) for s in self.punctures), key=lambda f: (len(f.ray_indices), sorted(f.ray_indices)))

    def maximal_punctures(self) -> list[Face]:
        ps = self.punctures
        return [self.cone.face_of_rays(s) for s in sorted(ps, key=lambda s: (len(s), sorted(s))) if not any(s < t for t in ps)]

    def kept_faces(self) -> list[Face]:
        return [f for f in self.cone.faces() if f.ray_indices not in self.punctures]

    def is_punctured(self, face: Face | frozenset) -> bool:
        s = face.ray_indices if isinstance(face, Face) else face
        return s in self.punctures

    def __eq__(self, other):
        if not isinstance(other, PuncturedCone):
            return NotImplemented
        return self.cone == other.cone and self.punctures == other.punctures

    def __hash__(self):
        return hash((self.cone, self.punctures))

    def __repr__(self):
        ps = [self.cone.face_of_rays(s).rays for s in sorted(self.punctures, key=sorted)]
        return f"PuncturedCone({self.cone!r}, punctures={ps})"


# operations ------------------------------------------------------------


def polar_cone(algebra) -> PuncturedCone:
    """The cone of an algebra, with no punctures."""
    return PuncturedCone(Cone(algebra.group, algebra.log_generators()))


def rays(c: Cone) -> list[tuple[int, ...]]:
    return c.rays()


def faces(c: Cone, restrict_to=None) -> list[Face]:
    return c.faces(restrict_to)


def intersect(c1: Cone, c2: Cone) -> Cone:
    if c1.group != c2.group:
        raise CharacterMismatch(f"{c1.group} vs {c2.group}")
    return Cone(c1.group, c1.inequalities + c2.inequalities)


def refine_by_function(c: Cone, fs: Sequence[Sequence[int]], include_zero: bool = False) -> list[Cone]:
    """Full-dimensional domains of linearity of max_i v(f_i) on c."""
    return [d for d, _ in linearity_domains(c, fs, include_zero)]


def linearity_domains(c: Cone, fs: Sequence[Sequence[int]], include_zero: bool = False) -> list[tuple[Cone, Element]]:
    """Like refine_by_function, also reporting which function attains the max on each piece."""
    g = c.group
    fns = [g.element(f) for f in fs]
    if not fns:
        raise InvariantError("refine_by_function needs at least one function")
    if include_zero:
        fns = [g.zero] + fns
    seen, out = [], []
    for i, fi in enumerate(fns):
        d = Cone(g, list(c.inequalities) + [g.sub(fj, fi) for j, fj in enumerate(fns) if j != i])
        if d.dim == c.dim and d not in seen:
            seen.append(d)
            out.append((d, fi))
    out.sort(key=lambda p: p[0].ray_tuple)
    return out


def hilbert_basis(c: Cone) -> list[Element]:
    """Minimal generating set of the polar monoid {f : v(f) <= 0 on c}."""
    bound = config.hilbert_dimension_bound()
    c.rays()
    if c.dim > bound:
        raise DimensionBound(f"cone of dimension {c.dim} exceeds the Hilbert basis bound {bound}")
    r = c.rank
    free = lattice_points_basis(c.facets, c.equations, r)
    g = c.group
    out = [g.element(tuple(h) + (0,) * len(g.torsion)) for h in free]
    out.extend(g.torsion_generators())
    return sorted(set(out))


def quotient_by_face(c: Cone, tau: Face) -> tuple[list[list[int]], Cone]:
    """Projection N -> N / <tau> (rows are characters vanishing on tau) and the image cone."""
    g = c.group
    r = g.rank
    basis = lat.integer_kernel([list(v) for v in tau.rays], r) if tau.ray_indices else [tuple(x) for x in lat.identity(r)]
    proj = [list(b) for b in basis]
    qg = CharacterGroup(len(proj), g.torsion)
    ineqs = []
    for f in c.inequalities:
        if all(lat.dot(g.free(f), v) == 0 for v in tau.rays):
            coords = lat.row_lattice_coordinates(proj, list(g.free(f))) if proj else ()
            ineqs.append(tuple(coords) + tuple(f[r:]))
    return proj, Cone(qg, ineqs)


def pullback_character(proj: Sequence[Sequence[int]], group: CharacterGroup, f: Element) -> Element:
    """A character of N / <tau> read as a character of N."""
    k = len(proj)
    free = [sum(f[i] * proj[i][j] for i in range(k)) for j in range(group.rank)]
    return group.element(tuple(free) + tuple(f[k:]))


def membership(pc: PuncturedCone, v: Sequence, H: str = "Q") -> Membership:
    """Classify a point of N(H) against the punctured cone (H is "Z" or "Q")."""
    if H not in ("Z", "Q"):
        raise InvariantError(f"unsupported value group {H!r}")
    vec = [Fraction(x) for x in v]
    if H == "Z" and any(x.denominator != 1 for x in vec):
        raise InvariantError(f"{v} is not an integer point")
    if len(vec) != pc.cone.rank:
        raise InvariantError("point has the wrong dimension")
    if not pc.cone.contains(vec):
        return Membership.OUTSIDE
    face = pc.cone.minimal_face_containing(vec)
    return Membership.PUNCTURED if face.ray_indices in pc.punctures else Membership.KEPT
