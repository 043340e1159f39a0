"""Finite truncated chain complexes over Q: homology, chain maps, cones, contractions."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Sequence

from .linalg import SMat, fmt, rank
from .report import Report, StructuralError


def workers() -> int:
    try:
        return max(1, int(os.environ.get("OPBAR_WORKERS", "1")))
    except ValueError:
        return 1


def _rank_job(m: SMat) -> int:
    return rank(m)


class ChainComplex:
    """C_0..C_top with d[n]: C_n -> C_(n-1) for 1 <= n <= top and an optional augmentation C_0 -> A."""

    def __init__(self, dims: Sequence[int], d: dict[int, SMat], aug: SMat | None = None,
                 labels: Sequence[Sequence] | None = None, aug_labels: Sequence | None = None):
        self.dims = list(dims)
        self.d = dict(d)
        self.aug = aug
        self.labels = [list(x) for x in labels] if labels is not None else None
        self.aug_labels = list(aug_labels) if aug_labels is not None else None
        for n in range(1, len(self.dims)):
            m = self.d.get(n)
            if m is None:
                self.d[n] = m = SMat(self.dims[n - 1], self.dims[n])
            if m.shape != (self.dims[n - 1], self.dims[n]):
                raise StructuralError(f"differential {n} has shape {m.shape}")
        if aug is not None and aug.ncols != self.dims[0]:
            raise StructuralError("augmentation has wrong shape")
        self._rank: dict[int, int] = {}

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    @property
    def aug_dim(self) -> int:
        return self.aug.nrows if self.aug is not None else 0

    def boundary(self, n: int) -> SMat:
        """d_n with d_0 the augmentation (or zero)."""
        if n == 0:
            return self.aug if self.aug is not None else SMat(0, self.dims[0])
        return self.d[n]

    def rank_of(self, n: int) -> int:
        if n not in self._rank:
            self._rank[n] = rank(self.boundary(n))
        return self._rank[n]

    def precompute_ranks(self, levels: Sequence[int]):
        todo = [n for n in levels if n not in self._rank]
        w = workers()
        if w > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=min(w, len(todo))) as ex:
                for n, r in zip(todo, ex.map(_rank_job, [self.boundary(n) for n in todo])):
                    self._rank[n] = r
        else:
            for n in todo:
                self.rank_of(n)

    def check_d2(self) -> Report:
        rep = Report("d^2 = 0")
        for n in range(2, self.top + 1):
            rep.check((self.d[n - 1] @ self.d[n]).is_zero(), "d2", f"d_{n - 1} d_{n} != 0")
        if self.aug is not None and self.top >= 1:
            rep.check((self.aug @ self.d[1]).is_zero(), "d2", "eps d_1 != 0")
        return rep

    def homology(self, k: int, augmented: bool = True) -> int:
        """dim H_k; H_-1 is the cokernel of the augmentation."""
        if k >= self.top:
            raise StructuralError(f"homology in degree {k} needs degree {k + 1} (top is {self.top})")
        if k == -1:
            if not augmented or self.aug is None:
                raise StructuralError("degree -1 needs an augmentation")
            return self.aug_dim - self.rank_of(0)
        ker = self.dims[k] - (self.rank_of(k) if (k > 0 or augmented) else 0)
        return ker - self.rank_of(k + 1)

    def betti(self, augmented: bool = True) -> dict[int, int]:
        lo = -1 if augmented and self.aug is not None else 0
        self.precompute_ranks(range(0 if augmented and self.aug is not None else 1, self.top + 1))
        return {k: self.homology(k, augmented) for k in range(lo, self.top)}

    def truncate(self, top: int) -> "ChainComplex":
        labels = self.labels[:top + 1] if self.labels is not None else None
        return ChainComplex(self.dims[:top + 1], {n: self.d[n] for n in range(1, top + 1)}, self.aug, labels,
                            self.aug_labels)

    def to_text(self) -> str:
        """Line format: dims, aug, optional basis labels, then one `d n row col value` line per entry."""
        lines = [f"dims {' '.join(map(str, self.dims))}"]
        if self.aug is not None:
            lines.append(f"aug {self.aug_dim}")
        if self.labels is not None:
            for n, labs in enumerate(self.labels):
                lines.extend(f"label {n} {i} {lab}" for i, lab in enumerate(labs))
        if self.aug_labels is not None:
            lines.extend(f"auglabel {i} {lab}" for i, lab in enumerate(self.aug_labels))
        for n in range(1, self.top + 1):
            for i, row in enumerate(self.d[n].rows):
                for j in sorted(row):
                    lines.append(f"d {n} {i} {j} {fmt(row[j])}")
        if self.aug is not None:
            for i, row in enumerate(self.aug.rows):
                for j in sorted(row):
                    lines.append(f"e {i} {j} {fmt(row[j])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ChainComplex":
        dims, aug_dim, labels, aug_labels, entries = None, None, {}, {}, []
        for line in text.splitlines():
            if not line.strip():
                continue
            tag, _, rest = line.partition(" ")
            if tag == "dims":
                dims = [int(x) for x in rest.split()]
            elif tag == "aug":
                aug_dim = int(rest)
            elif tag == "label":
                n, i, lab = rest.split(" ", 2)
                labels.setdefault(int(n), {})[int(i)] = lab
            elif tag == "auglabel":
                i, lab = rest.split(" ", 1)
                aug_labels[int(i)] = lab
            elif tag in ("d", "e"):
                entries.append((tag, rest.split()))
            else:
                raise StructuralError(f"unknown line {line!r}")
        if dims is None:
            raise StructuralError("missing dims line")
        d = {n: SMat(dims[n - 1], dims[n]) for n in range(1, len(dims))}
        aug = SMat(aug_dim, dims[0]) if aug_dim is not None else None
        for tag, parts in entries:
            m = d[int(parts[0])] if tag == "d" else aug
            i, j, v = (parts[1:] if tag == "d" else parts)
            m.rows[int(i)][int(j)] = Fraction(v)
        labs = [[labels[n][i] for i in range(k)] for n, k in enumerate(dims)] if labels else None
        alabs = [aug_labels[i] for i in range(aug_dim)] if aug_labels else None
        return cls(dims, d, aug, labs, alabs)


class ChainMap:
    """f_n: C_n -> D_n for 0 <= n <= top, optionally with a map of augmentation targets."""

    def __init__(self, src: ChainComplex, tgt: ChainComplex, maps: dict[int, SMat], aug_map: SMat | None = None):
        self.src, self.tgt = src, tgt
        self.maps = dict(maps)
        self.aug_map = aug_map

    @property
    def top(self) -> int:
        return min(self.src.top, self.tgt.top, max(self.maps))

    def validate(self) -> Report:
        s, t = self.src, self.tgt
        rep = Report("chain map")
        for n in range(self.top + 1):
            rep.check(self.maps[n].shape == (t.dims[n], s.dims[n]), "shape", f"f_{n} has wrong shape")
        if not rep.ok:
            return rep
        for n in range(1, self.top + 1):
            rep.check(t.d[n] @ self.maps[n] == self.maps[n - 1] @ s.d[n], "commutes", f"d f_{n} != f_{n - 1} d")
        if s.aug is not None and t.aug is not None:
            g = self.aug_map if self.aug_map is not None else SMat.identity(s.aug_dim)
            rep.check(t.aug @ self.maps[0] == g @ s.aug, "augmentation", "eps f_0 != g eps")
        return rep


def mapping_cone(f: ChainMap) -> ChainComplex:
    """Cone_n = C_(n-1) + D_n with d(c, x) = (-dc, f c + dx); unaugmented."""
    c, d = f.src, f.tgt
    top = min(c.top + 1, d.top, f.top + 1)
    dims = [(c.dims[n - 1] if n >= 1 else 0) + d.dims[n] for n in range(top + 1)]
    diffs = {}
    for n in range(1, top + 1):
        cn1 = c.dims[n - 1]
        cn2 = c.dims[n - 2] if n >= 2 else 0
        rows = [{} for _ in range(dims[n - 1])]
        if n >= 2:
            for i, row in enumerate(c.d[n - 1].rows):
                for j, x in row.items():
                    rows[i][j] = -x
        for i, row in enumerate(f.maps[n - 1].rows):
            for j, x in row.items():
                rows[cn2 + i][j] = x
        for i, row in enumerate(d.d[n].rows):
            for j, x in row.items():
                rows[cn2 + i][cn1 + j] = x
        diffs[n] = SMat(dims[n - 1], dims[n], rows)
    return ChainComplex(dims, diffs)


def verify_contraction(c: ChainComplex, h: dict[int, SMat], upto: int | None = None) -> Report:
    """eps h_-1 = 1, d_1 h_0 + h_-1 eps = 1 and d_(n+1) h_n + h_(n-1) d_n = 1 for 1 <= n <= upto."""
    if c.aug is None:
        raise StructuralError("contraction needs an augmented complex")
    upto = c.top - 1 if upto is None else upto
    if upto > c.top - 1:
        raise StructuralError(f"contraction through degree {upto} needs degree {upto + 1}")
    rep = Report("contraction")
    rep.check(c.aug @ h[-1] == SMat.identity(c.aug_dim), "eps h", "eps h_-1 != 1")
    for n in range(0, upto + 1):
        lhs = c.d[n + 1] @ h[n] + h[n - 1] @ c.boundary(n)
        rep.check(lhs == SMat.identity(c.dims[n]), "dh+hd", f"degree {n}")
    return rep
