"""Exact sparse linear algebra over Q: rows are dicts col -> Fraction/int."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

from ._kernel import rank_int_rows

Vec = dict[int, object]


def vadd(u: Mapping, v: Mapping, c=1) -> dict:
    """u + c*v as a fresh sparse vector."""
    out = dict(u)
    for k, x in v.items():
        w = out.get(k, 0) + c * x
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def vscale(v: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vclean(v: Mapping) -> dict:
    return {k: x for k, x in v.items() if x}


def integer_row(row: Mapping) -> dict[int, int]:
    den = 1
    for x in row.values():
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    if den == 1:
        return {c: int(x) for c, x in row.items() if x}
    return {c: int(x * den) for c, x in row.items() if x}


class SMat:
    """Sparse nrows x ncols matrix stored by rows."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: list[dict] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [{} for _ in range(nrows)]

    @classmethod
    def identity(cls, n: int) -> "SMat":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, dense: list[list], ncols: int | None = None) -> "SMat":
        nc = ncols if ncols is not None else (len(dense[0]) if dense else 0)
        return cls(len(dense), nc, [{j: x for j, x in enumerate(r) if x} for r in dense])

    @classmethod
    def from_columns(cls, nrows: int, cols: list[Mapping]) -> "SMat":
        m = cls(nrows, len(cols))
        for j, col in enumerate(cols):
            for i, x in col.items():
                if x:
                    m.rows[i][j] = m.rows[i].get(j, 0) + x
        for r in m.rows:
            for j in [j for j, x in r.items() if not x]:
                del r[j]
        return m

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                out[i][j] = x
        return out

    def columns(self) -> list[dict]:
        cols: list[dict] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                cols[j][i] = x
        return cols

    @property
    def T(self) -> "SMat":
        return SMat(self.ncols, self.nrows, self.columns())

    def apply(self, v: Mapping) -> dict:
        out = {}
        for i, r in enumerate(self.rows):
            s = 0
            for j, x in r.items():
                y = v.get(j)
                if y:
                    s += x * y
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "SMat") -> "SMat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        rows = []
        for r in self.rows:
            acc: dict = {}
            for k, x in r.items():
                for j, y in other.rows[k].items():
                    acc[j] = acc.get(j, 0) + x * y
            rows.append(vclean(acc))
        return SMat(self.nrows, other.ncols, rows)

    def _check(self, other: "SMat"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "SMat") -> "SMat":
        self._check(other)
        return SMat(self.nrows, self.ncols, [vadd(a, b) for a, b in zip(self.rows, other.rows)])

    def __sub__(self, other: "SMat") -> "SMat":
        self._check(other)
        return SMat(self.nrows, self.ncols, [vadd(a, b, -1) for a, b in zip(self.rows, other.rows)])

    def __neg__(self) -> "SMat":
        return self.scale(-1)

    def scale(self, c) -> "SMat":
        return SMat(self.nrows, self.ncols, [vscale(r, c) for r in self.rows])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SMat) or self.shape != other.shape:
            return False
        return all(vclean(a) == vclean(b) for a, b in zip(self.rows, other.rows))

    __hash__ = None

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return not any(any(x for x in r.values()) for r in self.rows)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def __repr__(self) -> str:
        return f"SMat({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def hstack(mats: list[SMat]) -> SMat:
    nrows = mats[0].nrows
    rows = [{} for _ in range(nrows)]
    off = 0
    for m in mats:
        if m.nrows != nrows:
            raise ValueError("row mismatch in hstack")
        for i, r in enumerate(m.rows):
            for j, x in r.items():
                rows[i][j + off] = x
        off += m.ncols
    return SMat(nrows, off, rows)


def vstack(mats: list[SMat]) -> SMat:
    ncols = mats[0].ncols
    rows = []
    for m in mats:
        if m.ncols != ncols:
            raise ValueError("column mismatch in vstack")
        rows.extend(dict(r) for r in m.rows)
    return SMat(len(rows), ncols, rows)


def rank(m: SMat | Iterable[Mapping]) -> int:
    rows = m.rows if isinstance(m, SMat) else m
    return rank_int_rows(integer_row(r) for r in rows if r)


class Echelon:
    """Reduced row echelon basis of a subspace, kept incrementally."""

    def __init__(self):
        self.pivots: dict[int, dict] = {}

    def reduce(self, v: Mapping) -> dict:
        v = {k: Fraction(x) for k, x in v.items() if x}
        for c in sorted(set(v) & set(self.pivots)):
            x = v.get(c)
            if x:
                v = vadd(v, self.pivots[c], -x)
        return v

    def add(self, v: Mapping) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        c = min(v)
        v = vscale(v, 1 / v[c])
        for k, p in self.pivots.items():
            x = p.get(c)
            if x:
                self.pivots[k] = vadd(p, v, -x)
        self.pivots[c] = v
        return True

    def __contains__(self, v: Mapping) -> bool:
        return not self.reduce(v)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def basis(self) -> list[dict]:
        return [self.pivots[c] for c in sorted(self.pivots)]


def span(vectors: Iterable[Mapping]) -> Echelon:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e


def kernel(m: SMat) -> list[dict]:
    """Basis of {x : m x = 0} indexed by columns."""
    e = span(m.rows)
    free = [j for j in range(m.ncols) if j not in e.pivots]
    out = []
    for j in free:
        v = {j: Fraction(1)}
        for c, row in e.pivots.items():
            x = row.get(j)
            if x:
                v[c] = -x
        out.append(v)
    return out


def solve(m: SMat, b: Mapping) -> dict | None:
    """Some x with m x = b, or None."""
    aug = [dict(r) for r in m.rows]
    n = m.ncols
    for i, x in b.items():
        if x:
            aug[i][n] = x
    e = span(aug)
    if n in e.pivots:
        return None
    x = {}
    for c, row in e.pivots.items():
        y = row.get(n)
        if y:
            x[c] = y
    return x


class Quotient:
    """V / W for W spanned by given vectors in a space of dimension `dim`.

    The complement basis is the set of non-pivot coordinates of W's reduced echelon form.
    """

    def __init__(self, dim: int, sub: Iterable[Mapping]):
        self.dim = dim
        self.sub = span(sub)
        self.keep = [j for j in range(dim) if j not in self.sub.pivots]
        self.pos = {j: i for i, j in enumerate(self.keep)}

    @property
    def qdim(self) -> int:
        return len(self.keep)

    def project(self, v: Mapping) -> dict:
        r = self.sub.reduce(v)
        return {self.pos[j]: x for j, x in r.items()}

    def lift(self, i: int) -> dict:
        return {self.keep[i]: 1}

    def projection(self) -> SMat:
        return SMat.from_columns(self.qdim, [self.project({j: 1}) for j in range(self.dim)])

    def section(self) -> SMat:
        return SMat.from_columns(self.dim, [self.lift(i) for i in range(self.qdim)])


def fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
