"""Exact sparse linear algebra over the rationals.

Vectors are dicts from sortable keys to nonzero rationals.  The echelon form
is built incrementally; each stored row has a distinct pivot and later rows
are reduced against earlier ones, so reducing a vector against the rows in
insertion order is exact.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Sequence

from affvir.arith import Rational

Vec = dict


def axpy(y: dict, a: Rational, x: dict) -> None:
    """In place y += a*x, dropping cancelled entries."""
    if not a:
        return
    for k, c in x.items():
        v = y.get(k, 0) + a * c
        if v:
            y[k] = v
        else:
            y.pop(k, None)


class Echelon:
    """Incremental row echelon form, optionally tracking combinations.

    ``add`` returns None when the vector is independent of the stored rows;
    otherwise it returns the dependency as a map from earlier tags to
    coefficients (the vector equals that combination of tagged inputs).
    """

    def __init__(self, track: bool = False):
        self.rows: list[tuple[Hashable, dict, dict | None]] = []
        self.pivots: dict[Hashable, int] = {}
        self.track = track

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict, combo: dict | None = None) -> dict:
        v = dict(vec)
        for piv, row, rcombo in self.rows:
            c = v.get(piv)
            if c:
                axpy(v, -c, row)
                if combo is not None and rcombo is not None:
                    axpy(combo, -c, rcombo)
        return v

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def add(self, vec: dict, tag: Hashable = None):
        combo = {tag: Rational(1)} if self.track else None
        v = self.reduce(vec, combo)
        if not v:
            if combo is None:
                return {}
            return {k: -c for k, c in combo.items() if k != tag}
        piv = min(v)
        inv = 1 / v[piv]
        v = {k: c * inv for k, c in v.items()}
        if combo is not None:
            combo = {k: c * inv for k, c in combo.items()}
        self.pivots[piv] = len(self.rows)
        self.rows.append((piv, v, combo))
        return None


def rank(vectors: Iterable[dict]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def kernel(images: Sequence[dict]) -> list[dict[int, Rational]]:
    """Basis of the kernel of the map sending basis vector j to images[j].

    Each kernel vector is returned as a dict from domain index to coefficient.
    """
    ech = Echelon(track=True)
    out = []
    for j, img in enumerate(images):
        dep = ech.add(img, tag=j)
        if dep is not None:
            vec = {j: Rational(1)}
            for k, c in dep.items():
                vec[k] = vec.get(k, 0) - c
            out.append({k: c for k, c in vec.items() if c})
    return out


def reduced_basis(vectors: Iterable[dict]) -> list[dict]:
    """A fully reduced echelon basis of the span (unique for a given span)."""
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    rows = [row for _, row, _ in ech.rows]
    pivs = [p for p, _, _ in ech.rows]
    # back substitution so every pivot column is clear in other rows
    for i in reversed(range(len(rows))):
        for j in range(len(rows)):
            if j != i:
                c = rows[j].get(pivs[i])
                if c:
                    axpy(rows[j], -c, rows[i])
    order = sorted(range(len(rows)), key=lambda i: pivs[i])
    return [rows[i] for i in order]


def solve_square(matrix: Sequence[Sequence[Rational]]) -> list[list[Rational]]:
    """Inverse of a nonsingular square matrix by Gauss-Jordan elimination."""
    n = len(matrix)
    aug = [[Rational(x) for x in row] + [Rational(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
