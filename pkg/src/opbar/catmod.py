"""Left modules over categories and their operadic refinement (fibers of module arrows)."""
from __future__ import annotations

from typing import Hashable, Sequence

from .fincat import FinCategory, adjoin_terminal, validate_category
from .opcat import OperadicFunctor, UnaryOpCat, decollage, tautological, validate_opcat
from .report import Report, StructuralError


class CatModule:
    """Arrows alpha: L -> S from module objects to base objects; act[(g, alpha)] = g alpha."""

    def __init__(self, base: FinCategory, objects: Sequence[Hashable],
                 arrows: Sequence[tuple[Hashable, int, int]], act: dict[tuple[int, int], int]):
        self.base = base
        self.obj = tuple(objects)
        self.arr = tuple(a[0] for a in arrows)
        self.src = tuple(a[1] for a in arrows)
        self.tgt = tuple(a[2] for a in arrows)
        self.act = dict(act)
        self.oid = {x: i for i, x in enumerate(self.obj)}
        self.aid = {a: i for i, a in enumerate(self.arr)}
        for i in range(len(self.arr)):
            if not (0 <= self.src[i] < len(self.obj) and 0 <= self.tgt[i] < base.n_obj):
                raise StructuralError(f"module arrow {self.arr[i]!r} has endpoint out of range")
        self.out: list[list[int]] = [[] for _ in self.obj]
        self.inn: list[list[int]] = [[] for _ in range(base.n_obj)]
        self.hom: dict[tuple[int, int], list[int]] = {}
        for i in range(len(self.arr)):
            self.out[self.src[i]].append(i)
            self.inn[self.tgt[i]].append(i)
            self.hom.setdefault((self.src[i], self.tgt[i]), []).append(i)

    @classmethod
    def build(cls, base, objects, arrows, action) -> "CatModule":
        act = {}
        for a, (_, _, t) in enumerate(arrows):
            for g in base.out[t]:
                act[(g, a)] = action(g, a)
        return cls(base, objects, arrows, act)

    @property
    def n_obj(self) -> int:
        return len(self.obj)

    @property
    def n_arr(self) -> int:
        return len(self.arr)

    def pairs(self):
        for a in range(self.n_arr):
            for g in self.base.out[self.tgt[a]]:
                yield g, a

    def with_act(self, key, value) -> "CatModule":
        act = dict(self.act)
        act[key] = value
        return CatModule(self.base, self.obj, list(zip(self.arr, self.src, self.tgt)), act)

    def __repr__(self) -> str:
        return f"CatModule({self.n_obj} objects, {self.n_arr} arrows)"


def validate_catmodule(m: CatModule) -> Report:
    c = m.base
    rep = validate_category(c)
    rep.name = "categorical module"
    if not rep.ok:
        return rep
    expected = set(m.pairs())
    for key in m.act:
        rep.check(key in expected, "action-domain", lambda: f"action on non-composable pair {key}")
    for g, a in sorted(expected):
        if not rep.check((g, a) in m.act, "action-domain", lambda: f"missing {c.mor[g]!r} acting on {m.arr[a]!r}"):
            continue
        b = m.act[(g, a)]
        rep.check(0 <= b < m.n_arr and m.src[b] == m.src[a] and m.tgt[b] == c.cod[g], "action-endpoints",
                  lambda: f"{c.mor[g]!r} acting on {m.arr[a]!r}")
    if not rep.ok:
        return rep
    for a in range(m.n_arr):
        rep.check(m.act[(c.ident[m.tgt[a]], a)] == a, "unit", lambda: f"1 acting on {m.arr[a]!r}")
        for g in c.out[m.tgt[a]]:
            ga = m.act[(g, a)]
            for f in c.out[c.cod[g]]:
                rep.check(m.act[(c.comp[(f, g)], a)] == m.act[(f, ga)], "associativity",
                          lambda: f"({c.mor[f]!r} {c.mor[g]!r}) {m.arr[a]!r}")
    return rep


class OpModule:
    """An operadic left module: each arrow alpha has a fiber module object G(alpha) and
    `fmor[(alpha, g)]` is a module arrow G(g alpha) -> F(g)."""

    def __init__(self, opcat: UnaryOpCat, mod: CatModule, fiber: Sequence[int], fmor: dict[tuple[int, int], int]):
        if mod.base is not opcat.cat:
            raise StructuralError("module base differs from the operadic category")
        self.opcat = opcat
        self.mod = mod
        self.fiber = tuple(fiber)
        self.fmor = dict(fmor)
        self.tri: dict = {}

    def fm(self, a: int, g: int) -> int:
        return self.fmor[(a, g)]

    def replace(self, fiber=None, fmor=None) -> "OpModule":
        out = OpModule(self.opcat, self.mod, fiber if fiber is not None else self.fiber,
                       fmor if fmor is not None else self.fmor)
        out.tri = self.tri
        return out

    def __repr__(self) -> str:
        return f"OpModule({self.mod.n_obj} objects, {self.mod.n_arr} arrows)"


def validate_opmodule(om: OpModule) -> Report:
    m, o, c = om.mod, om.opcat, om.opcat.cat
    rep = validate_opcat(o)
    if rep.ok:
        rep.merge(validate_catmodule(m))
    rep.name = "operadic module"
    if not rep.ok:
        return rep
    if not rep.check(len(om.fiber) == m.n_arr and all(0 <= x < m.n_obj for x in om.fiber), "fiber-structure",
                     "fiber table has wrong size"):
        return rep
    expected = {(a, g) for g, a in m.pairs()}
    for key in om.fmor:
        rep.check(key in expected, "fiber-structure", lambda: f"fiber arrow on non-composable pair {key}")
    for a, g in sorted(expected):
        if not rep.check((a, g) in om.fmor, "fiber-structure",
                         lambda: f"missing fiber arrow for ({m.arr[a]!r}, {c.mor[g]!r})"):
            continue
        b = om.fmor[(a, g)]
        rep.check(0 <= b < m.n_arr and m.src[b] == om.fiber[m.act[(g, a)]] and m.tgt[b] == o.fiber[g],
                  "fiber-structure", lambda: f"fiber arrow of ({m.arr[a]!r}, {c.mor[g]!r}) has wrong endpoints")
    if not rep.ok:
        return rep
    for g2 in range(c.n_mor):
        for phi in c.inn[c.dom[g2]]:
            g = c.comp[(g2, phi)]
            for psi in m.inn[c.dom[phi]]:
                lhs = m.act[(o.fmor[(phi, g2)], om.fmor[(psi, g)])]
                rhs = om.fmor[(m.act[(phi, psi)], g2)]
                rep.check(lhs == rhs, "fiber-functor",
                          lambda: f"psi={m.arr[psi]!r} phi={c.mor[phi]!r} g={c.mor[g2]!r}")
    for b in range(m.n_arr):
        for cc in c.out[m.tgt[b]]:
            rep.check(om.fiber[om.fmor[(b, cc)]] == om.fiber[b], "fiber-of-fiber-object",
                      lambda: f"beta={m.arr[b]!r} c={c.mor[cc]!r}")
    if not rep.ok:
        return rep
    for g in range(c.n_mor):
        for cc in c.out[c.cod[g]]:
            cg, gc = c.comp[(cc, g)], o.fmor[(g, cc)]
            for psi in m.inn[c.dom[g]]:
                rep.check(om.fmor[(om.fmor[(psi, cg)], gc)] == om.fmor[(psi, g)], "fiber-of-fiber-arrow",
                          lambda: f"psi={m.arr[psi]!r} g={c.mor[g]!r} c={c.mor[cc]!r}")
    return rep


def self_module(o: UnaryOpCat) -> OpModule:
    """An operadic category as a module over itself."""
    c = o.cat
    mod = CatModule(c, c.obj, list(zip(c.mor, c.dom, c.cod)), dict(c.comp))
    return OpModule(o, mod, o.fiber, o.fmor)


def chaos(objects: Sequence[Hashable], base: FinCategory) -> CatModule:
    """Exactly one arrow from every module object to every base object."""
    n = base.n_obj
    arrows = [((x, base.obj[t]), i, t) for i, x in enumerate(objects) for t in range(n)]
    return CatModule.build(base, objects, arrows, lambda g, a: (a // n) * n + base.cod[g])


def overmodule(m: CatModule, c: int) -> tuple[CatModule, FinCategory]:
    """M/c over the slice C/c: objects are arrows into c; psi: L -> T is an arrow from g.psi to g."""
    from .fincat import slice_category
    base = m.base
    sl, _ = slice_category(base, c)
    objs = list(m.inn[c])
    pos = {a: i for i, a in enumerate(objs)}
    spos = {f: i for i, f in enumerate(base.inn[c])}
    arrows, key = [], {}
    for g in base.inn[c]:
        for psi in m.inn[base.dom[g]]:
            key[(psi, g)] = len(arrows)
            arrows.append((("tri", m.arr[psi], base.mor[g]), pos[m.act[(g, psi)]], spos[g]))
    inv = {v: k for k, v in key.items()}
    skey = {}
    for t in range(sl.n_mor):
        lab = sl.mor[t]
        skey[t] = (base.mid[lab[1]], base.mid[lab[2]])

    def action(t, a):
        phi, g2 = skey[t]
        psi, _ = inv[a]
        return key[(m.act[(phi, psi)], g2)]

    return CatModule.build(sl, [m.arr[a] for a in objs], arrows, action), sl


def decollage_module(a: FinCategory, b: CatModule, d: UnaryOpCat | None = None) -> OpModule:
    """Module over the decollage of A: objects are arrows of B; (psi, g) goes from g psi to g, fiber psi."""
    if d is None:
        d = decollage(a)
    arrows, key = [], {}
    for g in range(a.n_mor):
        for psi in b.inn[a.dom[g]]:
            key[(psi, g)] = len(arrows)
            arrows.append((("tri", b.arr[psi], a.mor[g]), b.act[(g, psi)], g))
    inv = {v: k for k, v in key.items()}
    dinv = {v: k for k, v in d.tri.items()}

    def action(t, x):
        phi, g2 = dinv[t]
        psi, _ = inv[x]
        return key[(b.act[(phi, psi)], g2)]

    mod = CatModule.build(d.cat, list(b.arr), arrows, action)
    fiber = [inv[x][0] for x in range(len(arrows))]
    fmor = {}
    for g, x in mod.pairs():
        phi, _ = dinv[g]
        fmor[(x, g)] = key[(inv[x][0], phi)]
    out = OpModule(d, mod, fiber, fmor)
    out.tri = key
    return out


def tautological_module(a: FinCategory, b: CatModule, t: UnaryOpCat | None = None) -> OpModule:
    """B disjoint union its decollage module, over the tautological category of A."""
    if t is None:
        t = tautological(a)
    d = decollage_module(a, b)
    n, m, nb, na = a.n_obj, a.n_mor, b.n_obj, b.n_arr
    objs = [("ob", x) for x in b.obj] + [("arr", x) for x in b.arr]
    arrows = [(("ob", b.arr[x]), b.src[x], b.tgt[x]) for x in range(na)]
    arrows += [(("arr", d.mod.arr[k]), nb + d.mod.src[k], n + d.mod.tgt[k]) for k in range(d.mod.n_arr)]
    act = {(g, x): y for (g, x), y in b.act.items()}
    act.update({(g + m, x + na): y + na for (g, x), y in d.mod.act.items()})
    mod = CatModule(t.cat, objs, arrows, act)
    fiber = [nb + x for x in range(na)] + [nb + x for x in d.fiber]
    fmor = {(x, g): na + d.tri[(x, g)] for g, x in b.pairs()}
    fmor.update({(x + na, g + m): y + na for (x, g), y in d.fmor.items()})
    out = OpModule(t, mod, fiber, fmor)
    out.tri = {k: v + na for k, v in d.tri.items()}
    return out


def adjoin_terminal_module(b: CatModule, at: FinCategory) -> CatModule:
    """Extend B to a module over A with a terminal adjoined: one new arrow L -> terminal per L."""
    top = at.n_obj - 1
    arrows = [(b.arr[x], b.src[x], b.tgt[x]) for x in range(b.n_arr)]
    bang = {}
    for x in range(b.n_obj):
        bang[x] = len(arrows)
        arrows.append((("!", b.obj[x]), x, top))
    nold = b.base.n_mor

    def action(g, x):
        if g < nold and x < b.n_arr:
            return b.act[(g, x)]
        return bang[arrows[x][1]]

    return CatModule.build(at, b.obj, arrows, action)


class ModuleMorphism:
    """A pair (Phi, Psi): Phi an operadic functor, Psi maps module objects and arrows compatibly."""

    def __init__(self, phi: OperadicFunctor, src: OpModule, tgt: OpModule, obj_map: Sequence[int],
                 arr_map: Sequence[int]):
        self.phi, self.src, self.tgt = phi, src, tgt
        self.obj_map = tuple(obj_map)
        self.arr_map = tuple(arr_map)

    def validate(self) -> Report:
        rep = self.phi.validate()
        rep.name = "module morphism"
        s, t = self.src, self.tgt
        for x in range(s.mod.n_arr):
            y = self.arr_map[x]
            rep.check(t.mod.src[y] == self.obj_map[s.mod.src[x]] and
                      t.mod.tgt[y] == self.phi.obj_map[s.mod.tgt[x]], "endpoints", lambda: f"arrow {s.mod.arr[x]!r}")
            rep.check(t.fiber[y] == self.obj_map[s.fiber[x]], "fibers", lambda: f"fiber of {s.mod.arr[x]!r}")
        if not rep.ok:
            return rep
        for g, x in s.mod.pairs():
            rep.check(self.arr_map[s.mod.act[(g, x)]] == t.mod.act[(self.phi.mor_map[g], self.arr_map[x])], "action",
                      lambda: f"{s.opcat.cat.mor[g]!r} on {s.mod.arr[x]!r}")
            rep.check(self.arr_map[s.fmor[(x, g)]] == t.fmor[(self.arr_map[x], self.phi.mor_map[g])],
                      "fiber-arrows", lambda: f"({s.mod.arr[x]!r}, {s.opcat.cat.mor[g]!r})")
        return rep


def tautological_module_embedding(a: FinCategory, b: CatModule, phi: OperadicFunctor,
                                  label: Hashable = "*") -> tuple[ModuleMorphism, OpModule]:
    """Embed the tautological module of B into the decollage module of B with terminal arrows."""
    t = phi.src
    src = tautological_module(a, b, t)
    dcat = phi.tgt
    at = adjoin_terminal(a, label)
    bt = adjoin_terminal_module(b, at)
    tgt = decollage_module(at, bt, dcat)
    n_b, n_a = b.n_obj, b.n_arr
    bang = {x: bt.hom[(x, at.n_obj - 1)][0] for x in range(n_b)}
    abang = {y: at.unique_mor(y, at.n_obj - 1) for y in range(at.n_obj)}
    obj_map = [bang[x] for x in range(n_b)] + list(range(n_a))
    arr_map = [tgt.tri[(x, abang[b.tgt[x]])] for x in range(n_a)]
    inv = {v - n_a: k for k, v in src.tri.items()}
    arr_map += [tgt.tri[inv[k]] for k in range(src.mod.n_arr - n_a)]
    return ModuleMorphism(phi, src, tgt, obj_map, arr_map), tgt


def check_wbu(o: UnaryOpCat) -> Report:
    """For f': X' -> S and phi out of F(f'), exactly one (phihat, f'') with f'' phihat = f' and fiber phi."""
    c = o.cat
    rep = Report("weak blow-up")
    for f1 in range(c.n_mor):
        x1, s = c.dom[f1], c.cod[f1]
        count: dict[int, int] = {}
        for hat in c.out[x1]:
            for f2 in c.hom.get((c.cod[hat], s), ()):
                if c.comp[(f2, hat)] == f1:
                    phi = o.fmor[(hat, f2)]
                    count[phi] = count.get(phi, 0) + 1
        for phi in c.out[o.fiber[f1]]:
            n = count.get(phi, 0)
            rep.check(n == 1, "wbu", lambda: f"{n} completions of ({c.mor[f1]!r}, {c.mor[phi]!r})")
    return rep


def wbu_module_completion(om: OpModule, f1: int, phi: int) -> tuple[int, int]:
    """The unique (phihat, f'') for a module arrow f1 and a module arrow phi out of G(f1)."""
    m, c = om.mod, om.opcat.cat
    found = [(hat, f2) for hat in m.out[m.src[f1]] for f2 in c.hom.get((m.tgt[hat], m.tgt[f1]), ())
             if m.act[(f2, hat)] == f1 and om.fmor[(hat, f2)] == phi]
    if len(found) != 1:
        raise StructuralError(f"{len(found)} completions of ({m.arr[f1]!r}, {m.arr[phi]!r})")
    return found[0]


def check_wbu_module(om: OpModule) -> Report:
    m, c = om.mod, om.opcat.cat
    rep = Report("weak blow-up (module)")
    for f1 in range(m.n_arr):
        count: dict[int, int] = {}
        for hat in m.out[m.src[f1]]:
            for f2 in c.hom.get((m.tgt[hat], m.tgt[f1]), ()):
                if m.act[(f2, hat)] == f1:
                    phi = om.fmor[(hat, f2)]
                    count[phi] = count.get(phi, 0) + 1
        for phi in m.out[om.fiber[f1]]:
            n = count.get(phi, 0)
            rep.check(n == 1, "wbu", lambda: f"{n} completions of ({m.arr[f1]!r}, {m.arr[phi]!r})")
    return rep


def is_rigid(om: OpModule, x: int) -> bool:
    """Exactly one arrow out of x has fiber x."""
    return sum(1 for a in om.mod.out[x] if om.fiber[a] == x) == 1


def p1p2(om: OpModule, y: int) -> dict:
    """(P1) the arrows out of y have a terminal one y -> top; (P2) its fiber is y and the fibers
    over top are domains."""
    m, o, c = om.mod, om.opcat, om.opcat.cat
    omega = None
    for w in m.out[y]:
        top = m.tgt[w]
        if all(sum(1 for g in c.hom.get((m.tgt[a], top), ()) if m.act[(g, a)] == w) == 1 for a in m.out[y]):
            omega = w
            break
    if omega is None:
        return {"P1": False, "P2": False, "omega": None, "top": None}
    top = m.tgt[omega]
    p2 = om.fiber[omega] == y
    for g in c.inn[top]:
        p2 &= o.fiber[g] == c.dom[g]
        for phi in c.inn[c.dom[g]]:
            p2 &= o.fmor[(phi, g)] == phi
    return {"P1": True, "P2": p2, "omega": omega, "top": top}
