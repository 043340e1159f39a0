"""Simplicial bar construction of a P-module at a module object, its normalization and contraction."""
from __future__ import annotations

from math import prod

from .catmod import ModuleMorphism, p1p2
from .chain import ChainComplex, ChainMap
from .linalg import Quotient, SMat, vclean
from .opmodule import PModule
from .report import Report, StructuralError

MAX_DIM = 200_000


class Tower:
    """T_0 <-f_1- T_1 <- ... <-f_n- T_n <-alpha- M, stored as (fs=(f_1..f_n), alpha)."""

    __slots__ = ("fs", "alpha", "objs", "factors", "size", "offset")

    def __init__(self, fs: tuple[int, ...], alpha: int, objs: tuple[int, ...], factors: tuple[int, ...], offset: int):
        self.fs, self.alpha, self.objs, self.factors = fs, alpha, objs, factors
        self.size = prod(factors)
        self.offset = offset

    def encode(self, elem: tuple[int, ...]) -> int:
        i = 0
        for x, r in zip(elem, self.factors):
            i = i * r + x
        return self.offset + i

    def decode(self, idx: int) -> tuple[int, ...]:
        i = idx - self.offset
        out = []
        for r in reversed(self.factors):
            i, x = divmod(i, r)
            out.append(x)
        return tuple(reversed(out))


class BarComplex:
    def __init__(self, mm: PModule, m: int, top: int, eta: dict[int, dict] | None = None):
        self.mm, self.M, self.top = mm, m, top
        self.p, self.om = mm.operad, mm.om
        if self.p.graded or any(any(d) for d in mm.degrees):
            raise StructuralError("bar complexes are built for ungraded operads and modules only")
        self.eta = eta
        self.towers: list[list[Tower]] = []
        self.index: list[dict] = []
        self._enumerate()
        self.faces: dict[int, list[SMat]] = {}
        for n in range(1, top + 1):
            self.faces[n] = [self._face(n, i) for i in range(n + 1)]
        d = {}
        for n in range(1, top + 1):
            acc = self.faces[n][0]
            for i in range(1, n + 1):
                acc = acc + self.faces[n][i] if i % 2 == 0 else acc - self.faces[n][i]
            d[n] = acc
        self.complex = ChainComplex(self.dims, d, self._augmentation(), [self.labels(n) for n in range(top + 1)],
                                    [f"m{i}" for i in range(mm.dims[m])])

    @property
    def dims(self) -> list[int]:
        return [sum(t.size for t in ts) for ts in self.towers]

    def _tower(self, fs, alpha, offset) -> Tower:
        om, p, c = self.om, self.p, self.om.opcat.cat
        m = om.mod
        objs = [m.tgt[alpha]]
        for f in reversed(fs):
            objs.append(c.cod[f])
        objs = tuple(reversed(objs))
        factors = (p.dims[objs[0]],) + tuple(p.dims[om.opcat.fiber[f]] for f in fs) + (self.mm.dims[om.fiber[alpha]],)
        return Tower(tuple(fs), alpha, objs, factors, offset)

    def _enumerate(self):
        c, m = self.om.opcat.cat, self.om.mod
        keys = [((), a) for a in sorted(m.out[self.M])]
        for n in range(self.top + 1):
            if n:
                nxt = []
                for fs, a in keys:
                    t0 = c.cod[fs[0]] if fs else m.tgt[a]
                    nxt.extend(((f,) + fs, a) for f in sorted(c.out[t0]))
                keys = sorted(nxt)
            off, ts = 0, []
            for fs, a in keys:
                t = self._tower(fs, a, off)
                ts.append(t)
                off += t.size
            if off > MAX_DIM:
                raise StructuralError(f"bar degree {n} has dimension {off}, above the limit {MAX_DIM}")
            self.towers.append(ts)
            self.index.append({(t.fs, t.alpha): t for t in ts})

    def tower(self, n: int, fs, alpha) -> Tower:
        return self.index[n][(tuple(fs), alpha)]

    def labels(self, n: int) -> list[str]:
        c, m = self.om.opcat.cat, self.om.mod
        out = []
        for t in self.towers[n]:
            name = "<".join(str(c.obj[x]) for x in t.objs) + f"<{m.obj[self.M]}"
            for i in range(t.size):
                out.append(f"{name}:{','.join(map(str, t.decode(t.offset + i)))}")
        return out

    def _apply_face(self, n: int, i: int, t: Tower, e: tuple) -> dict:
        p, om, mm = self.p, self.om, self.mm
        c, m, o = om.opcat.cat, om.mod, om.opcat
        fs, a = t.fs, t.alpha
        out: dict = {}
        if i == 0:
            tgt = self.tower(n - 1, fs[1:], a)
            for k, x in p.gam(fs[0], {e[1]: 1}, {e[0]: 1}).items():
                out[tgt.encode((k,) + e[2:])] = x
        elif i < n:
            f1, f2 = fs[i - 1], fs[i]
            tgt = self.tower(n - 1, fs[:i - 1] + (c.comp[(f1, f2)],) + fs[i + 1:], a)
            for k, x in p.gam(o.fmor[(f2, f1)], {e[i + 1]: 1}, {e[i]: 1}).items():
                out[tgt.encode(e[:i] + (k,) + e[i + 2:])] = x
        else:
            fn = fs[-1]
            tgt = self.tower(n - 1, fs[:-1], m.act[(fn, a)])
            for k, x in mm.act(om.fmor[(a, fn)], {e[-1]: 1}, {e[-2]: 1}).items():
                out[tgt.encode(e[:-2] + (k,))] = x
        return out

    def _face(self, n: int, i: int) -> SMat:
        cols = []
        for t in self.towers[n]:
            for j in range(t.size):
                cols.append(self._apply_face(n, i, t, t.decode(t.offset + j)))
        return SMat.from_columns(self.dims[n - 1], cols)

    def _augmentation(self) -> SMat:
        cols = []
        for t in self.towers[0]:
            for j in range(t.size):
                t0, x = t.decode(t.offset + j)
                cols.append(self.mm.act(t.alpha, {x: 1}, {t0: 1}))
        return SMat.from_columns(self.mm.dims[self.M], cols)

    def degeneracy(self, n: int, j: int) -> SMat:
        """s_j: beta_n -> beta_(n+1), inserting 1 at T_j with the fiberwise unit."""
        if self.eta is None:
            raise StructuralError("degeneracies need fiberwise units")
        if n + 1 > self.top:
            raise StructuralError("degeneracy leaves the computed range")
        c = self.om.opcat.cat
        cols = []
        for t in self.towers[n]:
            tj = t.objs[j]
            tgt = self.tower(n + 1, t.fs[:j] + (c.ident[tj],) + t.fs[j:], t.alpha)
            for k in range(t.size):
                e = t.decode(t.offset + k)
                cols.append({tgt.encode(e[:j + 1] + (u,) + e[j + 1:]): x for u, x in self.eta[tj].items()})
        return SMat.from_columns(self.dims[n + 1], cols)

    def simplicial_identities(self) -> Report:
        rep = Report("simplicial identities")
        d = lambda n, i: self.faces[n][i]
        for n in range(2, self.top + 1):
            for j in range(n + 1):
                for i in range(j):
                    rep.check(d(n - 1, i) @ d(n, j) == d(n - 1, j - 1) @ d(n, i), "dd", f"n={n} i={i} j={j}")
        if self.eta is None:
            return rep
        for n in range(0, self.top):
            s = {j: self.degeneracy(n, j) for j in range(n + 1)}
            ident = SMat.identity(self.dims[n])
            for j in range(n + 1):
                rep.check(d(n + 1, j) @ s[j] == ident, "ds", f"d_{j} s_{j} n={n}")
                rep.check(d(n + 1, j + 1) @ s[j] == ident, "ds", f"d_{j + 1} s_{j} n={n}")
                for i in range(n + 2):
                    if i < j:
                        rep.check(d(n + 1, i) @ s[j] == self.degeneracy(n - 1, j - 1) @ d(n, i), "ds",
                                  f"d_{i} s_{j} n={n}")
                    elif i > j + 1:
                        rep.check(d(n + 1, i) @ s[j] == self.degeneracy(n - 1, j) @ d(n, i - 1), "ds",
                                  f"d_{i} s_{j} n={n}")
            if n + 2 <= self.top:
                for j in range(n + 1):
                    for i in range(j + 1):
                        rep.check(self.degeneracy(n + 1, i) @ s[j] == self.degeneracy(n + 1, j + 1) @ s[i], "ss",
                                  f"s_{i} s_{j} n={n}")
        return rep

    def normalized(self) -> tuple[ChainComplex, list[Quotient]]:
        """Quotient by the span of the degeneracies in each degree."""
        quots = []
        for n in range(self.top + 1):
            sub = []
            if n >= 1:
                for j in range(n):
                    sub.extend(self.degeneracy(n - 1, j).columns())
            quots.append(Quotient(self.dims[n], sub))
        d = {}
        for n in range(1, self.top + 1):
            q, sec = quots[n - 1].projection(), quots[n].section()
            d[n] = q @ self.complex.d[n] @ sec
        for n in range(1, self.top + 1):
            # the degenerate part must map into the degenerate part
            for j in range(n - 1):
                img = self.complex.d[n] @ self.degeneracy(n - 1, j)
                if not (quots[n - 1].projection() @ img).is_zero():
                    raise StructuralError("degeneracies are not preserved by the differential")
        labels = [[self.complex.labels[n][k] for k in quots[n].keep] for n in range(self.top + 1)]
        return ChainComplex([q.qdim for q in quots], d, self.complex.aug @ quots[0].section(), labels,
                            self.complex.aug_labels), quots

    def contraction(self) -> dict[int, SMat]:
        """h_-1(u) = eta (x) u on the terminal arrow and h_n prepending the morphism to the terminal."""
        if self.eta is None:
            raise StructuralError("contraction needs fiberwise units")
        info = p1p2(self.om, self.M)
        if not (info["P1"] and info["P2"]):
            raise StructuralError("contraction needs (P1) and (P2) at the module object")
        om, c, m = self.om, self.om.opcat.cat, self.om.mod
        w, top = info["omega"], info["top"]
        eta = self.eta[top]
        h = {}
        t = self.tower(0, (), w)
        h[-1] = SMat.from_columns(self.dims[0], [{t.encode((u, x)): y for u, y in eta.items()}
                                                for x in range(self.mm.dims[self.M])])
        for n in range(self.top):
            cols = []
            for tw in self.towers[n]:
                arrow = tw.alpha
                for f in reversed(tw.fs):
                    arrow = m.act[(f, arrow)]
                b = [g for g in c.hom.get((tw.objs[0], top), ()) if m.act[(g, arrow)] == w]
                tgt = self.tower(n + 1, (b[0],) + tw.fs, tw.alpha)
                for k in range(tw.size):
                    e = tw.decode(tw.offset + k)
                    cols.append({tgt.encode((u,) + e): y for u, y in eta.items()})
            h[n] = SMat.from_columns(self.dims[n + 1], cols)
        return h


def h0_two_ways(bc: BarComplex) -> dict:
    """Image of the augmentation from bar ranks and from the span of all action values directly."""
    from .linalg import span
    mm, om = bc.mm, bc.om
    direct = span(mm.act(a, {x: 1}, {t: 1}) for a in om.mod.out[bc.M]
                  for x in range(mm.dims[om.fiber[a]]) for t in range(mm.operad.dims[om.mod.tgt[a]])).dim
    cx = bc.complex
    return {"coker_bar": cx.aug_dim - cx.rank_of(0), "coker_direct": mm.dims[bc.M] - direct,
            "H0": cx.homology(0, augmented=False) if cx.top >= 1 else None, "module_dim": mm.dims[bc.M]}


def induced_map(mor: ModuleMorphism, src: BarComplex, tgt: BarComplex) -> ChainMap:
    """Towers map componentwise; coordinates are unchanged since carriers are pulled back."""
    if tgt.M != mor.obj_map[src.M]:
        raise StructuralError("target bar complex is not at the image object")
    phi = mor.phi
    maps = {}
    top = min(src.top, tgt.top)
    for n in range(top + 1):
        cols = []
        for t in src.towers[n]:
            u = tgt.tower(n, tuple(phi.mor_map[f] for f in t.fs), mor.arr_map[t.alpha])
            for k in range(t.size):
                cols.append({u.encode(t.decode(t.offset + k)): 1})
        maps[n] = SMat.from_columns(tgt.dims[n], cols)
    return ChainMap(src.complex, tgt.complex, maps)


def estimate_bar_dims(mm: PModule, m: int, top: int) -> list[int]:
    """Dimensions of the bar complex without building it, by dynamic programming over towers."""
    om, p = mm.om, mm.operad
    c, mod = om.opcat.cat, om.mod
    cur: dict[int, int] = {}
    for a in mod.out[m]:
        cur[mod.tgt[a]] = cur.get(mod.tgt[a], 0) + mm.dims[om.fiber[a]]
    dims = []
    for n in range(top + 1):
        dims.append(sum(p.dims[t] * w for t, w in cur.items()))
        nxt: dict[int, int] = {}
        for t, w in cur.items():
            for f in c.out[t]:
                nxt[c.cod[f]] = nxt.get(c.cod[f], 0) + w * p.dims[om.opcat.fiber[f]]
        cur = nxt
    return dims


def vec_eq(a: dict, b: dict) -> bool:
    return vclean(a) == vclean(b)
