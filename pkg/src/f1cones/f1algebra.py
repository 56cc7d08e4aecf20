"""Finitely generated F1-algebras: monoids with an absorbing zero.

An algebra is stored through the logarithms of its generators, elements of a
CharacterGroup K. In embedded mode A \\ 0 is the submonoid of K they generate
(so A is integral). In presented mode A is the free commutative monoid on the
generators modulo a finite list of monomial relations, and K is its
groupification.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterable, Optional, Sequence

from . import config
from . import lattice as lat
from .characters import CharacterGroup, Element, present_quotient
from .cone import Cone, Face
from .errors import (
    DimensionBound,
    EmptyCompletion,
    EmptyPresentation,
    InvariantError,
    SNotInIdeal,
    UndecidedWithinBound,
    ZeroElement,
    ZeroIdeal,
    ZeroRelation,
)
from .hilbert import lattice_points_basis
from .polyhedra import double_description, generated_cone_dual

EMBEDDED = "embedded"
PRESENTED = "presented"


class Empty:
    """Marker for the empty scheme, which is not an F1Algebra."""

    def __repr__(self):
        return "Empty"


EMPTY = Empty()


@dataclass(frozen=True, eq=False)
class F1Algebra:
    group: CharacterGroup
    generators: tuple
    mode: str = EMBEDDED
    relations: tuple = ()

    def __post_init__(self):
        gens = tuple(self.group.element(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if self.mode not in (EMBEDDED, PRESENTED):
            raise InvariantError(f"unknown mode {self.mode!r}")
        if self.mode == EMBEDDED and self.relations:
            raise InvariantError("relations are only meaningful in presented mode")
        rels = tuple((tuple(a), tuple(b)) for a, b in self.relations)
        object.__setattr__(self, "relations", rels)

    # construction ------------------------------------------------------
    @classmethod
    def embedded(cls, group: CharacterGroup, generators: Iterable[Sequence[int]]) -> "F1Algebra":
        return cls(group, tuple(group.element(g) for g in generators))

    @classmethod
    def free(cls, n: int) -> "F1Algebra":
        """F1[x_1, ..., x_n]."""
        return cls(CharacterGroup(n), tuple(tuple(r) for r in lat.identity(n)))

    @classmethod
    def laurent(cls, n: int) -> "F1Algebra":
        """F1[x_1^{+-1}, ..., x_n^{+-1}], the coefficient field of rank n."""
        ids = [tuple(r) for r in lat.identity(n)]
        return cls(CharacterGroup(n), tuple(ids + [tuple(-x for x in r) for r in ids]))

    # basic structure -----------------------------------------------------
    @property
    def rank(self) -> int:
        return self.group.rank

    def log_generators(self) -> list[Element]:
        return list(self.generators)

    def __eq__(self, other):
        if not isinstance(other, F1Algebra):
            return NotImplemented
        if self.mode != other.mode or self.group != other.group:
            return False
        if self.mode == PRESENTED:
            return self.generators == other.generators and sorted(self.relations) == sorted(other.relations)
        return all(other.contains(g) for g in self.generators) and all(self.contains(g) for g in other.generators)

    def __hash__(self):
        return hash((self.mode, self.group))

    def __repr__(self):
        if self.mode == PRESENTED:
            return f"F1Algebra(presented, n={len(self.generators)}, relations={list(self.relations)}, group={self.group})"
        return f"F1Algebra({self.group}, generators={list(self.generators)})"

    @cached_property
    def _span(self):
        """Span cone C of the generators in K(Q), a grading that is positive off its
        lineality, and the quotient map K -> K / <unit generators>."""
        g = self.group
        r = g.rank
        gens = sorted({x for x in self.generators if x != g.zero})
        frees = [g.free(x) for x in gens]
        facets, eqs = generated_cone_dual(frees, [], r)
        grading = [-sum(f[k] for f in facets) for k in range(r)]
        units = [x for x in gens if lat.dot(grading, g.free(x)) == 0]
        nonunits = sorted((x for x in gens if lat.dot(grading, g.free(x)) > 0), key=lambda x: -lat.dot(grading, g.free(x)))
        quot, images = present_quotient(g.dim, [list(u) for u in units] + g.relation_rows())
        return facets, eqs, grading, units, nonunits, quot, images

    def _in_span(self, free: Sequence[int]) -> bool:
        facets, eqs = self._span[:2]
        return all(lat.dot(a, free) <= 0 for a in facets) and all(lat.dot(e, free) == 0 for e in eqs)

    def contains(self, f: Optional[Sequence[int]]) -> bool:
        """Is f (an element of K) the logarithm of an element of A \\ 0?"""
        if f is None:
            return False
        g = self.group
        f = g.element(f)
        if self.mode == PRESENTED:
            return underlying_integral(self).contains(f)
        facets, eqs, grading, units, nonunits, quot, images = self._span
        memo: dict = {}

        def key(x):
            return quot.combine(x, images)

        def rec(x) -> bool:
            if not self._in_span(g.free(x)):
                return False
            k = key(x)
            if k == quot.zero:
                return True
            if k in memo:
                return memo[k]
            memo[k] = False
            level = lat.dot(grading, g.free(x))
            res = False
            for n in nonunits:
                if lat.dot(grading, g.free(n)) <= level and rec(g.sub(x, n)):
                    res = True
                    break
            memo[k] = res
            return res

        return rec(f)

    def reduced(self) -> "F1Algebra":
        """The same embedded algebra on a minimal sorted generating set."""
        if self.mode == PRESENTED:
            return self
        g = self.group
        keep = sorted({x for x in self.generators if x != g.zero})
        for x in sorted(keep, reverse=True):
            rest = [y for y in keep if y != x]
            if g.generates(rest) and F1Algebra(g, tuple(rest)).contains(x):
                keep = rest
        return F1Algebra(g, tuple(keep))

    def unit_generators(self) -> list[Element]:
        if self.mode == PRESENTED:
            return underlying_integral(self).unit_generators()
        return list(self._span[3])

    def to_json(self) -> dict:
        out = {"group": self.group.to_json(), "generators": [list(g) for g in self.generators], "mode": self.mode}
        if self.mode == PRESENTED:
            out["relations"] = [[list(a), list(b)] for a, b in self.relations]
        return out


@dataclass(frozen=True)
class MonomialIdeal:
    owner: F1Algebra
    generators: tuple

    def __post_init__(self):
        g = self.owner.group
        gens = tuple(g.element(t) for t in self.generators)
        for t in gens:
            if not self.owner.contains(t):
                raise InvariantError(f"ideal generator {t} is not an element of the algebra")
        object.__setattr__(self, "generators", gens)

    @property
    def is_zero(self) -> bool:
        return not self.generators


@dataclass(frozen=True)
class PrimeRecord:
    face: Face
    complement_generators: tuple

    @property
    def is_zero_prime(self) -> bool:
        return not self.face.ray_indices

    def __repr__(self):
        return f"PrimeRecord(face={self.face.rays}, complement={list(self.complement_generators)})"


# operations ---------------------------------------------------------------


def from_presentation(n_generators: int, relations: Sequence) -> F1Algebra:
    """The monoid <x_1..x_n | a_k = b_k> with a zero adjoined."""
    relations = list(relations)
    if n_generators < 0 or (n_generators == 0 and relations):
        raise EmptyPresentation("a presentation needs generators (n = 0 is only the field F1)")
    rels = []
    for pair in relations:
        if pair is None or len(pair) != 2:
            raise InvariantError(f"relation {pair!r} is not a pair of exponent vectors")
        a, b = pair
        for side in (a, b):
            if side is None or side == 0 or isinstance(side, str):
                raise ZeroRelation("relations may not equate a monomial with zero")
            if len(side) != n_generators or any(int(x) < 0 for x in side):
                raise InvariantError(f"exponent vector {side!r} must have {n_generators} nonnegative entries")
        rels.append((tuple(int(x) for x in a), tuple(int(x) for x in b)))
    group, images = present_quotient(n_generators, [[x - y for x, y in zip(a, b)] for a, b in rels])
    return F1Algebra(group, tuple(images), PRESENTED, tuple(rels))


def underlying_integral(A: F1Algebra) -> F1Algebra:
    """The image of A \\ 0 in its groupification, as an embedded algebra."""
    if A.mode == EMBEDDED:
        return A
    g = A.group
    gens = sorted({x for x in A.generators if x != g.zero})
    return F1Algebra(g, tuple(gens))


def is_integral(A: F1Algebra, degree_bound: Optional[int] = None) -> bool:
    """Cancellativity, decided exactly in embedded mode and by bounded normal
    forms in presented mode."""
    if A.mode == EMBEDDED:
        return True
    n = len(A.generators)
    if not A.relations:
        return True
    bound = config.normal_form_degree_bound() if degree_bound is None else degree_bound
    limit = 2 * bound
    moves = [(a, b) for a, b in A.relations] + [(b, a) for a, b in A.relations]
    g = A.group

    def log(m):
        return g.combine(m, A.generators)

    component: dict = {}
    truncated: dict = {}
    next_id = 0
    for d in range(bound + 1):
        for combo in combinations_with_replacement(range(n), d):
            m = [0] * n
            for i in combo:
                m[i] += 1
            m = tuple(m)
            if m in component:
                continue
            cid = next_id
            next_id += 1
            trunc = False
            component[m] = cid
            queue = deque([m])
            while queue:
                x = queue.popleft()
                for a, b in moves:
                    if all(xi >= ai for xi, ai in zip(x, a)):
                        y = tuple(xi - ai + bi for xi, ai, bi in zip(x, a, b))
                        if sum(y) > limit:
                            trunc = True
                            continue
                        if y not in component:
                            component[y] = cid
                            queue.append(y)
            truncated[cid] = trunc
    by_log: dict = {}
    for m, cid in component.items():
        if sum(m) <= bound:
            by_log.setdefault(log(m), set()).add(cid)
    undecided = False
    for cids in by_log.values():
        if len(cids) > 1:
            closed = [c for c in cids if not truncated[c]]
            if len(closed) >= 2:
                return False
            undecided = True
    if undecided:
        raise UndecidedWithinBound(f"normal forms up to degree {bound} do not settle cancellativity")
    return True


def _integral_view(A: F1Algebra) -> F1Algebra:
    if A.mode == EMBEDDED:
        return A
    if not is_integral(A):
        raise InvariantError("algebra is not integral; apply underlying_integral first")
    return underlying_integral(A)


def normalize(A: F1Algebra) -> tuple[F1Algebra, bool]:
    """Saturation of A \\ 0 in its groupification, with a flag telling whether
    A was already normal."""
    B = _integral_view(A)
    g = B.group
    if not g.generates(list(B.generators)):
        sub, coords = g.subgroup(list(B.generators))
        inner, was_normal = normalize(F1Algebra(sub, tuple(coords)))
        if was_normal:
            return B, True
        stacked = [list(c) for c in coords] + sub.relation_rows()
        k = len(coords)
        lifted = []
        for y in inner.generators:
            c = lat.row_lattice_coordinates(stacked, list(y))
            lifted.append(g.combine(c[:k], B.generators))
        return F1Algebra(g, tuple(sorted(set(lifted)))).reduced(), False
    r = g.rank
    facets, eqs = B._span[:2]
    frees = [g.free(x) for x in B.generators]
    dim = lat.rank(frees, r) if frees else 0
    bound = config.hilbert_dimension_bound()
    if dim > bound:
        raise DimensionBound(f"span of dimension {dim} exceeds the Hilbert basis bound {bound}")
    rays, lin = double_description(list(facets) + list(eqs) + [tuple(-x for x in e) for e in eqs], r)
    basis = lattice_points_basis(rays, lin, r)
    gens = [g.element(tuple(h) + (0,) * len(g.torsion)) for h in basis] + g.torsion_generators()
    out = F1Algebra(g, tuple(sorted(set(gens)))).reduced()
    was_normal = all(B.contains(x) for x in out.generators)
    return (B if was_normal else out), was_normal


def units(A: F1Algebra) -> CharacterGroup:
    """The unit group A^x as an abstract group."""
    B = underlying_integral(A)
    return B.group.subgroup(B.unit_generators())[0]


def localize(A: F1Algebra, f: Optional[Sequence[int]]) -> F1Algebra:
    """A[f^-1]; the cone drops to the face cut out by f."""
    if f is None:
        raise ZeroElement("localizing at zero gives the empty scheme")
    g = A.group
    f = g.element(f)
    if not A.contains(f):
        raise InvariantError(f"{f} is not an element of the algebra")
    return F1Algebra(g, tuple(A.generators) + (g.neg(f),))


def _sigma(A: F1Algebra) -> Cone:
    return Cone(A.group, A.log_generators())


def primes(A: F1Algebra) -> list[PrimeRecord]:
    """One prime per face of the cone of A, smallest face (the zero prime) first."""
    B = underlying_integral(A)
    out = []
    for face in _sigma(B).faces(restrict_to=B):
        rays = face.rays
        comp = tuple(x for x in B.generators if all(lat.dot(B.group.free(x), v) == 0 for v in rays))
        out.append(PrimeRecord(face, comp))
    return out


def quotient_by_prime(A: F1Algebra, p: PrimeRecord) -> F1Algebra:
    """The closed subscheme V(p): the algebra on A \\ p."""
    B = underlying_integral(A)
    g = B.group
    comp = list(p.complement_generators)
    if g.generates(comp):
        return F1Algebra(g, tuple(comp))
    sub, coords = g.subgroup(comp)
    return F1Algebra(sub, tuple(coords))


def ideal_membership(T: MonomialIdeal, f: Optional[Sequence[int]]) -> bool:
    if f is None:
        return False
    g = T.owner.group
    f = g.element(f)
    return any(T.owner.contains(g.sub(f, t)) for t in T.generators)


def rees_chart(A: F1Algebra, T: MonomialIdeal, s: Sequence[int]) -> F1Algebra:
    """The chart O{T/s} of the blow-up of T: adjoin t / s for every generator t."""
    B = _integral_view(A)
    g = B.group
    s = g.element(s)
    if not ideal_membership(T, s):
        raise SNotInIdeal(f"{s} is not in the ideal")
    gens = tuple(B.generators) + tuple(g.sub(t, s) for t in T.generators)
    return F1Algebra(g, gens).reduced()


def completion_punctures(A: F1Algebra, T: MonomialIdeal) -> list[Face]:
    """Faces of the cone of A on which some generator of T vanishes."""
    if T is None or T.is_zero:
        raise ZeroIdeal("completion needs a nonzero ideal")
    B = underlying_integral(A)
    g = B.group
    cone = _sigma(B)
    out = []
    full = frozenset(range(len(cone.rays())))
    for face in cone.faces():
        rays = face.rays
        if any(all(lat.dot(g.free(t), v) == 0 for v in rays) for t in T.generators):
            if face.ray_indices == full:
                raise EmptyCompletion("an ideal generator vanishes on the whole cone")
            out.append(face)
    return out


def krull_injective(A: F1Algebra, T: MonomialIdeal) -> bool:
    """False iff some element of T has logarithm identically zero on the cone of A."""
    if T is None or T.is_zero:
        raise ZeroIdeal("krull_injective needs a nonzero ideal")
    B = underlying_integral(A)
    g = B.group
    rays = _sigma(B).rays()
    return not any(all(lat.dot(g.free(t), v) == 0 for v in rays) for t in T.generators)


def has_enough_jets(A: F1Algebra) -> bool:
    """Always true for finitely generated algebras: the span of a finitely
    generated monoid is polyhedral, so every rational jet pulls back
    effectively. Kept for symmetry with the other predicates."""
    return True
