"""Linear modules over a linear operad along an operadic module; free modules and restriction."""
from __future__ import annotations

from itertools import product
from typing import Sequence

from .catmod import ModuleMorphism, OpModule, is_rigid, self_module, wbu_module_completion
from .linalg import Echelon, Quotient, SMat, rank, vadd, vclean
from .operad import LinOperad, restrict
from .report import Report, StructuralError


def _sign(a: int, b: int) -> int:
    return -1 if (a * b) % 2 else 1


class PModule:
    """`nu[alpha][(i, j)]`: M(G(alpha)) x P(tgt alpha) -> M(src alpha), sparse in M(src alpha)."""

    def __init__(self, operad: LinOperad, om: OpModule, dims: Sequence[int], nu: dict[int, dict],
                 degrees: Sequence[Sequence[int]] | None = None, names: Sequence[Sequence] | None = None):
        if om.opcat is not operad.base:
            raise StructuralError("module and operad live over different operadic categories")
        self.operad = operad
        self.om = om
        self.dims = tuple(dims)
        self.nu = {a: {k: vclean(v) for k, v in t.items()} for a, t in nu.items()}
        self.degrees = [tuple(d) for d in degrees] if degrees is not None else [(0,) * n for n in self.dims]
        self.names = [tuple(n) for n in names] if names is not None else [tuple(range(n)) for n in self.dims]
        if len(self.dims) != om.mod.n_obj:
            raise StructuralError("one dimension per module object required")

    def act(self, a: int, m: dict, p: dict) -> dict:
        out: dict = {}
        t = self.nu.get(a, {})
        for i, x in m.items():
            for j, y in p.items():
                v = t.get((i, j))
                if v:
                    out = vadd(out, v, x * y)
        return out


def validate_pmodule(mm: PModule) -> Report:
    p, om = mm.operad, mm.om
    m, o, c = om.mod, om.opcat, om.opcat.cat
    rep = Report("P-module")
    for a in range(m.n_arr):
        g, s, t = om.fiber[a], m.src[a], m.tgt[a]
        for (i, j), v in mm.nu.get(a, {}).items():
            rep.check(0 <= i < mm.dims[g] and 0 <= j < p.dims[t] and all(0 <= k < mm.dims[s] for k in v), "shape",
                      lambda: f"action of {m.arr[a]!r} out of range at {(i, j)}")
    if not rep.ok:
        return rep
    for a in range(m.n_arr):
        for g in c.out[m.tgt[a]]:
            ac, ga = om.fmor[(a, g)], m.act[(g, a)]
            for x, q, r in product(range(mm.dims[om.fiber[a]]), range(p.dims[o.fiber[g]]), range(p.dims[c.cod[g]])):
                lhs = mm.act(a, {x: 1}, p.gam(g, {q: 1}, {r: 1}))
                rhs = mm.act(ga, mm.act(ac, {x: 1}, {q: 1}), {r: 1})
                rep.check(vclean(lhs) == vclean(rhs), "associativity",
                          lambda: f"alpha={m.arr[a]!r} g={c.mor[g]!r} at ({x},{q},{r})")
    return rep


def check_unital_pmodule(mm: PModule, eta: dict[int, dict]) -> Report:
    """nu_(alpha_T)(m, eta_T) = m where alpha_T is the fiber arrow of (alpha, 1_T)."""
    om, c = mm.om, mm.om.opcat.cat
    rep = Report("unital P-module")
    for a in range(om.mod.n_arr):
        t = om.mod.tgt[a]
        at = om.fmor[(a, c.ident[t])]
        for x in range(mm.dims[om.fiber[a]]):
            rep.check(vclean(mm.act(at, {x: 1}, eta[t])) == {x: 1}, "unit", lambda: f"at {om.mod.arr[a]!r} {x}")
    return rep


def operad_as_module(p: LinOperad) -> PModule:
    return PModule(p, self_module(p.base), p.dims, p.gamma, p.degrees, p.names)


def restrict_pmodule(mm: PModule, mor: ModuleMorphism) -> PModule:
    """Pull back along (Phi, Psi): carriers M(Psi m), action nu_(Psi alpha)."""
    if mor.tgt is not mm.om:
        raise StructuralError("module morphism does not land in this module")
    q = restrict(mm.operad, mor.phi)
    src = mor.src
    nu = {a: mm.nu.get(mor.arr_map[a], {}) for a in range(src.mod.n_arr)}
    return PModule(q, src, [mm.dims[mor.obj_map[x]] for x in range(src.mod.n_obj)], nu,
                   [mm.degrees[mor.obj_map[x]] for x in range(src.mod.n_obj)],
                   [mm.names[mor.obj_map[x]] for x in range(src.mod.n_obj)])


class FreeModule:
    """The free module E(M) + sum over alpha: M -> T of P(T) x E(G alpha).

    `basis[M]` lists ("e", i) and ("t", alpha, s, h); `pos[M]` inverts it.
    """

    def __init__(self, p: LinOperad, om: OpModule, edims: Sequence[int], edeg: Sequence[Sequence[int]] | None = None):
        self.p, self.om = p, om
        m = om.mod
        self.edims = tuple(edims)
        self.edeg = [tuple(d) for d in edeg] if edeg is not None else [(0,) * n for n in self.edims]
        self.basis: list[list[tuple]] = []
        self.deg: list[list[int]] = []
        for x in range(m.n_obj):
            b = [("e", i) for i in range(self.edims[x])]
            d = list(self.edeg[x])
            for a in m.out[x]:
                g = om.fiber[a]
                for s in range(p.dims[m.tgt[a]]):
                    for h in range(self.edims[g]):
                        b.append(("t", a, s, h))
                        d.append(p.degrees[m.tgt[a]][s] + self.edeg[g][h])
            self.basis.append(b)
            self.deg.append(d)
        self.pos = [{b: i for i, b in enumerate(bs)} for bs in self.basis]
        self.module = self._build()

    def _build(self) -> PModule:
        p, om = self.p, self.om
        m = om.mod
        nu: dict[int, dict] = {}
        for a in range(m.n_arr):
            l, t, g = m.src[a], m.tgt[a], om.fiber[a]
            table = {}
            for i, b in enumerate(self.basis[g]):
                for tt in range(p.dims[t]):
                    dt = p.degrees[t][tt]
                    if b[0] == "e":
                        table[(i, tt)] = {self.pos[l][("t", a, tt, b[1])]: _sign(self.edeg[g][b[1]], dt)}
                        continue
                    _, beta, s, h = b
                    w, gg = wbu_module_completion(om, a, beta)
                    sg = _sign(self.edeg[om.fiber[beta]][h], dt)
                    v = p.gam(gg, {s: 1}, {tt: 1})
                    table[(i, tt)] = {self.pos[l][("t", w, k, h)]: sg * x for k, x in v.items()}
            nu[a] = table
        names = [[str(b) for b in bs] for bs in self.basis]
        return PModule(p, om, [len(b) for b in self.basis], nu, self.deg, names)

    def extension(self, target: PModule, omega: dict[int, SMat]) -> dict[int, SMat]:
        """The module map induced by a collection map omega_M: E(M) -> target(M)."""
        om = self.om
        out = {}
        for x in range(om.mod.n_obj):
            cols = []
            for b in self.basis[x]:
                if b[0] == "e":
                    cols.append(omega[x].apply({b[1]: 1}) if omega[x].ncols else {})
                    continue
                _, a, s, h = b
                g = om.fiber[a]
                sg = _sign(self.edeg[g][h], self.p.degrees[om.mod.tgt[a]][s])
                v = target.act(a, omega[g].apply({h: 1}), {s: 1})
                cols.append({k: sg * y for k, y in v.items()})
            out[x] = SMat.from_columns(target.dims[x], cols)
        return out


def check_module_map(src: PModule, tgt: PModule, maps: dict[int, SMat]) -> Report:
    """Omega_L nu'_alpha = nu''_alpha (Omega_G x 1)."""
    om = src.om
    rep = Report("module map")
    for a in range(om.mod.n_arr):
        l, t, g = om.mod.src[a], om.mod.tgt[a], om.fiber[a]
        for x in range(src.dims[g]):
            for s in range(src.operad.dims[t]):
                lhs = maps[l].apply(src.act(a, {x: 1}, {s: 1}))
                rhs = tgt.act(a, maps[g].apply({x: 1}), {s: 1})
                rep.check(vclean(lhs) == vclean(rhs), "equivariance", lambda: f"{om.mod.arr[a]!r} at ({x},{s})")
    return rep


def extension_is_unique(free: FreeModule, target: PModule, omega: dict[int, SMat]) -> bool:
    """Solve for all module maps extending omega; unique iff the homogeneous system has full rank."""
    src = free.module
    om = free.om
    var = {}
    for x in range(om.mod.n_obj):
        for r in range(target.dims[x]):
            for cidx in range(src.dims[x]):
                var[(x, r, cidx)] = len(var)
    rows = []
    for x in range(om.mod.n_obj):
        for cidx, b in enumerate(free.basis[x]):
            if b[0] == "e":
                for r in range(target.dims[x]):
                    rows.append({var[(x, r, cidx)]: 1})
    for a in range(om.mod.n_arr):
        l, t, g = om.mod.src[a], om.mod.tgt[a], om.fiber[a]
        for xi in range(src.dims[g]):
            for s in range(free.p.dims[t]):
                image = src.act(a, {xi: 1}, {s: 1})
                for r in range(target.dims[l]):
                    row: dict = {}
                    for k, y in image.items():
                        row = vadd(row, {var[(l, r, k)]: y})
                    for r2 in range(target.dims[g]):
                        coeff = target.act(a, {r2: 1}, {s: 1}).get(r, 0)
                        if coeff:
                            row = vadd(row, {var[(g, r2, xi)]: -coeff})
                    if row:
                        rows.append(row)
    return rank(rows) == len(var)


class UnitalFreeModule:
    """Quotient of the free module by e - eta_T (x) e over every alpha: X -> T with fiber M,
    closed under the action."""

    def __init__(self, free: FreeModule, eta: dict[int, dict]):
        self.free = free
        om, p = free.om, free.p
        m, c = om.mod, om.opcat.cat
        fm = free.module
        rel = [Echelon() for _ in range(m.n_obj)]
        for a in range(m.n_arr):
            t, x = m.tgt[a], om.fiber[a]
            at = om.fmor[(a, c.ident[t])]
            for e in range(free.edims[x]):
                v = {free.pos[x][("e", e)]: 1}
                for k, y in eta[t].items():
                    v = vadd(v, {free.pos[x][("t", at, k, e)]: 1}, -y)
                rel[x].add(v)
        changed = True
        while changed:
            changed = False
            for a in range(m.n_arr):
                l, t, g = m.src[a], m.tgt[a], om.fiber[a]
                for r in rel[g].basis():
                    for s in range(p.dims[t]):
                        if rel[l].add(fm.act(a, r, {s: 1})):
                            changed = True
        self.quot = [Quotient(fm.dims[x], rel[x].basis()) for x in range(m.n_obj)]
        nu = {}
        for a in range(m.n_arr):
            l, t, g = m.src[a], m.tgt[a], om.fiber[a]
            table = {}
            for i in range(self.quot[g].qdim):
                for s in range(p.dims[t]):
                    v = self.quot[l].project(fm.act(a, self.quot[g].lift(i), {s: 1}))
                    if v:
                        table[(i, s)] = v
            nu[a] = table
        self.module = PModule(p, om, [q.qdim for q in self.quot], nu)
        self.descends = all(not self.quot[m.src[a]].project(fm.act(a, r, {s: 1}))
                            for a in range(m.n_arr) for r in rel[om.fiber[a]].basis()
                            for s in range(p.dims[m.tgt[a]]))

    def structure_check(self, x: int) -> dict:
        """Compare the quotient at x with the sum over arrows out of x of P(T) x E(G alpha)."""
        om = self.free.om
        if not is_rigid(om, x):
            raise StructuralError(f"module object {om.mod.obj[x]!r} is not rigid")
        cols = [self.quot[x].project({self.free.pos[x][b]: 1}) for b in self.free.basis[x] if b[0] == "t"]
        rhs = len(cols)
        r = rank(SMat.from_columns(self.quot[x].qdim, cols).rows) if cols else 0
        return {"dim": self.quot[x].qdim, "rhs_dim": rhs, "iso": r == rhs == self.quot[x].qdim}

    def naive_compare(self, x: int) -> dict:
        """Dimensions of the quotient and of the arrow sum at x, without the rigidity precondition."""
        rhs = sum(1 for b in self.free.basis[x] if b[0] == "t")
        return {"dim": self.quot[x].qdim, "rhs_dim": rhs}
