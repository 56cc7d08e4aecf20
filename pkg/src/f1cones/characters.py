"""Finitely generated abelian groups in Smith form and their elements.

An element of ``CharacterGroup(rank, torsion)`` is a tuple of ints: ``rank``
free coordinates followed by one residue per torsion invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import lattice as lat
from .errors import InvariantError

Element = tuple


@dataclass(frozen=True)
class CharacterGroup:
    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise InvariantError("rank must be nonnegative")
        prev = 1
        for d in self.torsion:
            if d < 2 or d % prev:
                raise InvariantError(f"torsion invariants must be >= 2 and divisibility-chained: {self.torsion}")
            prev = d

    @property
    def dim(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def zero(self) -> Element:
        return (0,) * self.dim

    def element(self, coords: Sequence[int]) -> Element:
        coords = tuple(int(x) for x in coords)
        if len(coords) == self.rank and self.torsion:
            coords = coords + (0,) * len(self.torsion)
        if len(coords) != self.dim:
            raise InvariantError(f"element {coords} has wrong length for {self}")
        return self.normalize(coords)

    def normalize(self, e: Sequence[int]) -> Element:
        r = self.rank
        return tuple(e[:r]) + tuple(x % d for x, d in zip(e[r:], self.torsion))

    def add(self, a: Element, b: Element) -> Element:
        return self.normalize([x + y for x, y in zip(a, b)])

    def sub(self, a: Element, b: Element) -> Element:
        return self.normalize([x - y for x, y in zip(a, b)])

    def neg(self, a: Element) -> Element:
        return self.normalize([-x for x in a])

    def scale(self, a: Element, k: int) -> Element:
        return self.normalize([k * x for x in a])

    def combine(self, coeffs: Sequence[int], elements: Sequence[Element]) -> Element:
        out = [0] * self.dim
        for c, e in zip(coeffs, elements):
            if c:
                for i, x in enumerate(e):
                    out[i] += c * x
        return self.normalize(out)

    def free(self, e: Element) -> tuple[int, ...]:
        return tuple(e[: self.rank])

    def is_torsion(self, e: Element) -> bool:
        return not any(e[: self.rank])

    def relation_rows(self) -> list[list[int]]:
        rows = []
        for i, d in enumerate(self.torsion):
            row = [0] * self.dim
            row[self.rank + i] = d
            rows.append(row)
        return rows

    def torsion_generators(self) -> list[Element]:
        out = []
        for i in range(len(self.torsion)):
            e = [0] * self.dim
            e[self.rank + i] = 1
            out.append(tuple(e))
        return out

    def in_subgroup(self, generators: Sequence[Element], target: Element) -> bool:
        rows = [list(g) for g in generators] + self.relation_rows()
        return lat.in_row_lattice(rows, list(target)) if rows else not any(target)

    def generates(self, generators: Sequence[Element]) -> bool:
        return all(self.in_subgroup(generators, tuple(e)) for e in lat.identity(self.dim))

    def subgroup(self, generators: Sequence[Element]) -> tuple["CharacterGroup", list[Element]]:
        """Abstract presentation of the subgroup generated by ``generators``.

        Returns the subgroup and the coordinates of each generator in it.
        """
        k = len(generators)
        if k == 0:
            return CharacterGroup(0), []
        stacked = [list(g) for g in generators] + self.relation_rows()
        kernel = lat.integer_kernel(lat.transpose(stacked, len(stacked)), len(stacked))
        relations = [list(c[:k]) for c in kernel if any(c[:k])]
        return present_quotient(k, relations)

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


def present_quotient(n: int, relations: Sequence[Sequence[int]]) -> tuple[CharacterGroup, list[Element]]:
    """Z^n modulo the lattice spanned by ``relations``.

    Returns the quotient group in Smith form together with the images of the
    standard basis vectors. The free part is put in row Hermite form so that
    equal inputs give equal outputs (cusp: x -> 3, y -> 2).
    """
    rels = [list(r) for r in relations if any(r)]
    diag, _, v = lat.smith(rels, len(rels), n) if rels else ([], None, lat.identity(n))
    r = len(diag)
    tors_cols = [j for j in range(r) if diag[j] > 1]
    free_cols = list(range(r, n))
    torsion = tuple(diag[j] for j in tors_cols)
    images_free = [[v[i][j] for j in free_cols] for i in range(n)]
    images_tors = [[v[i][j] % diag[j] for j in tors_cols] for i in range(n)]
    f = len(free_cols)
    if f:
        rows = lat.transpose(images_free, f)
        t = _row_hermite_transform(rows, n)
        rows = lat.matmul(t, rows)
        images_free = lat.transpose(rows, n)
    group = CharacterGroup(f, torsion)
    images = [group.normalize(tuple(images_free[i]) + tuple(images_tors[i])) for i in range(n)]
    return group, images


def _row_hermite_transform(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Unimodular T with T . rows in row Hermite normal form (positive pivots)."""
    m = len(rows)
    a = [list(r) for r in rows]
    t = lat.identity(m)
    piv_row = 0
    for c in range(ncols):
        if piv_row == m:
            break
        while True:
            nz = [i for i in range(piv_row, m) if a[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            a[piv_row], a[p] = a[p], a[piv_row]
            t[piv_row], t[p] = t[p], t[piv_row]
            done = True
            for i in range(piv_row + 1, m):
                if a[i][c]:
                    q = a[i][c] // a[piv_row][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[piv_row])]
                    t[i] = [x - q * y for x, y in zip(t[i], t[piv_row])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if not any(a[i][c] for i in range(piv_row, m)):
            continue
        if a[piv_row][c] < 0:
            a[piv_row] = [-x for x in a[piv_row]]
            t[piv_row] = [-x for x in t[piv_row]]
        for i in range(piv_row):
            q = a[i][c] // a[piv_row][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[piv_row])]
                t[i] = [x - q * y for x, y in zip(t[i], t[piv_row])]
        piv_row += 1
    return t


def element_list(group: CharacterGroup, items: Iterable[Sequence[int]]) -> tuple[Element, ...]:
    return tuple(group.element(x) for x in items)
