"""Unary operadic categories: a category with a fiber object per morphism and fiber functors."""
from __future__ import annotations

from typing import Hashable, Sequence

from .fincat import FinCategory, FinFunctor, adjoin_terminal, validate_category
from .report import Report, StructuralError


class UnaryOpCat:
    """`fiber[f]` is the fiber object of f; `fmor[(phi, g)]` is the fiber morphism F(g.phi) -> F(g)."""

    def __init__(self, cat: FinCategory, fiber: Sequence[int], fmor: dict[tuple[int, int], int],
                 terminals: Sequence[int] | None = None):
        self.cat = cat
        self.fiber = tuple(fiber)
        self.fmor = dict(fmor)
        self.terminals: dict[int, int] | None = None
        if terminals is not None:
            comps = cat.components()
            self.terminals = {}
            for t in terminals:
                if comps[t] in self.terminals:
                    raise StructuralError(f"two chosen terminals in the component of {cat.obj[t]!r}")
                self.terminals[comps[t]] = t
        self.tri: dict = {}

    def fm(self, phi: int, g: int) -> int:
        return self.fmor[(phi, g)]

    def terminal_of(self, x: int) -> int | None:
        if self.terminals is None:
            return None
        return self.terminals.get(self.cat.components()[x])

    def unit_object(self, t: int) -> int:
        """U_T, the fiber of the identity of T."""
        return self.fiber[self.cat.ident[t]]

    def replace(self, fiber=None, fmor=None, terminals="keep") -> "UnaryOpCat":
        terms = (list(self.terminals.values()) if self.terminals is not None else None) \
            if terminals == "keep" else terminals
        out = UnaryOpCat(self.cat, fiber if fiber is not None else self.fiber,
                         fmor if fmor is not None else self.fmor, terms)
        out.tri = self.tri
        return out

    def __repr__(self) -> str:
        return f"UnaryOpCat({self.cat.n_obj} objects, {self.cat.n_mor} morphisms)"


def validate_opcat(o: UnaryOpCat) -> Report:
    c = o.cat
    rep = validate_category(c)
    rep.name = "operadic category"
    if not rep.ok:
        return rep
    if not rep.check(len(o.fiber) == c.n_mor and all(0 <= x < c.n_obj for x in o.fiber), "fiber-structure",
                     "fiber table has wrong size or out-of-range objects"):
        return rep
    expected = {(f, g) for g, f in c.composable()}
    for key in o.fmor:
        rep.check(key in expected, "fiber-structure", lambda: f"fiber morphism on non-composable pair {key}")
    for phi, g in sorted(expected):
        if not rep.check((phi, g) in o.fmor, "fiber-structure",
                         lambda: f"missing fiber morphism for ({c.mor[phi]!r}, {c.mor[g]!r})"):
            continue
        m = o.fmor[(phi, g)]
        rep.check(0 <= m < c.n_mor and c.dom[m] == o.fiber[c.comp[(g, phi)]] and c.cod[m] == o.fiber[g],
                  "fiber-structure", lambda: f"fiber morphism of ({c.mor[phi]!r}, {c.mor[g]!r}) has wrong endpoints")
    if not rep.ok:
        return rep
    for g in range(c.n_mor):
        rep.check(o.fmor[(c.ident[c.dom[g]], g)] == c.ident[o.fiber[g]], "fiber-functor-identity",
                  lambda: f"fiber of identity over {c.mor[g]!r}")
    for g in range(c.n_mor):
        for phi in c.inn[c.dom[g]]:
            gphi = c.comp[(g, phi)]
            for psi in c.inn[c.dom[phi]]:
                lhs = o.fmor[(c.comp[(phi, psi)], g)]
                rhs = c.comp[(o.fmor[(phi, g)], o.fmor[(psi, gphi)])]
                rep.check(lhs == rhs, "fiber-functor-composition",
                          lambda: f"({c.mor[phi]!r}.{c.mor[psi]!r}) over {c.mor[g]!r}")
    for a in range(c.n_mor):
        for cc in c.out[c.cod[a]]:
            ac = o.fmor[(a, cc)]
            rep.check(o.fiber[ac] == o.fiber[a], "fiber-of-fiber-object",
                      lambda: f"F(fm({c.mor[a]!r},{c.mor[cc]!r})) != F({c.mor[a]!r})")
    if not rep.ok:
        return rep
    for a in range(c.n_mor):
        for cc in c.out[c.cod[a]]:
            ca, ac = c.comp[(cc, a)], o.fmor[(a, cc)]
            for phi in c.inn[c.dom[a]]:
                rep.check(o.fmor[(o.fmor[(phi, ca)], ac)] == o.fmor[(phi, a)], "fiber-of-fiber-morphism",
                          lambda: f"phi={c.mor[phi]!r} a={c.mor[a]!r} c={c.mor[cc]!r}")
    if o.terminals is not None:
        comps = c.components()
        rep.check(set(o.terminals) == set(comps), "chosen-terminals", "not one chosen terminal per component")
        for t in o.terminals.values():
            rep.check(c.is_local_terminal(t), "chosen-terminals", lambda: f"{c.obj[t]!r} is not terminal")
    return rep


def unitality_report(o: UnaryOpCat) -> dict:
    c = o.cat
    left, right = Report("left unital"), Report("right unital")
    if o.terminals is None or set(o.terminals) != set(c.components()):
        left.fail("terminals", "no chosen local terminal objects")
        right.fail("terminals", "no chosen local terminal objects")
        return {"left": False, "right": False, "witnesses": left.witnesses}
    for s in range(c.n_obj):
        u = o.unit_object(s)
        left.check(o.terminal_of(u) == u, "left", lambda: f"F(1_{c.obj[s]!r})={c.obj[u]!r} not a chosen terminal")
    for u in o.terminals.values():
        for f in c.inn[u]:
            right.check(o.fiber[f] == c.dom[f], "right-objects", lambda: f"F({c.mor[f]!r}) is not its domain")
            for phi in c.inn[c.dom[f]]:
                right.check(o.fmor[(phi, f)] == phi, "right-morphisms",
                            lambda: f"fiber of ({c.mor[phi]!r}, {c.mor[f]!r}) is not {c.mor[phi]!r}")
    return {"left": left.ok, "right": right.ok, "witnesses": left.witnesses + right.witnesses}


def nerve_diagnostic(o: UnaryOpCat) -> dict[str, bool]:
    """Simplicial identities involving the extra face d3: N2 -> N1, (f, g) -> fm(f, g)."""
    c = o.cat
    out = {"d0d3=d2d0": True, "d1d3=d2d1": True, "d2d3=d2d2": True}
    for f in range(c.n_mor):
        for g in c.out[c.cod[f]]:
            m = o.fmor[(f, g)]
            out["d0d3=d2d0"] &= c.cod[m] == o.fiber[g]
            out["d1d3=d2d1"] &= c.dom[m] == o.fiber[c.comp[(g, f)]]
            out["d2d3=d2d2"] &= o.fiber[m] == o.fiber[f]
    return out


class OperadicFunctor:
    def __init__(self, src: UnaryOpCat, tgt: UnaryOpCat, obj_map: Sequence[int], mor_map: Sequence[int]):
        self.src, self.tgt = src, tgt
        self.obj_map = tuple(obj_map)
        self.mor_map = tuple(mor_map)

    @property
    def functor(self) -> FinFunctor:
        return FinFunctor(self.src.cat, self.tgt.cat, self.obj_map, self.mor_map)

    def validate(self) -> Report:
        rep = self.functor.validate()
        rep.name = "operadic functor"
        if not rep.ok:
            return rep
        s, t = self.src, self.tgt
        for f in range(s.cat.n_mor):
            rep.check(t.fiber[self.mor_map[f]] == self.obj_map[s.fiber[f]], "fibers",
                      lambda: f"fiber of image of {s.cat.mor[f]!r}")
        for (phi, g), m in s.fmor.items():
            rep.check(t.fmor[(self.mor_map[phi], self.mor_map[g])] == self.mor_map[m], "fiber-morphisms",
                      lambda: f"at ({s.cat.mor[phi]!r}, {s.cat.mor[g]!r})")
        return rep


def point() -> UnaryOpCat:
    """The terminal operadic category: one object, its identity, fiber itself."""
    cat = FinCategory(["*"], [(("id", "*"), 0, 0)], [0], {(0, 0): 0})
    return UnaryOpCat(cat, [0], {(0, 0): 0}, [0])


def decollage(a: FinCategory) -> UnaryOpCat:
    """Objects are the morphisms of A; (phi, g): g.phi -> g has fiber phi."""
    mors, key = [], {}
    for g in range(a.n_mor):
        for phi in a.inn[a.dom[g]]:
            key[(phi, g)] = len(mors)
            mors.append((("tri", a.mor[phi], a.mor[g]), a.comp[(g, phi)], g))
    inv = {v: k for k, v in key.items()}
    idents = [key[(a.ident[a.dom[f]], f)] for f in range(a.n_mor)]
    cat = FinCategory.build(list(a.mor), mors, idents,
                            lambda m2, m1: key[(a.comp[(inv[m2][0], inv[m1][0])], inv[m2][1])])
    fiber = [inv[m][0] for m in range(len(mors))]
    fmor = {}
    for m2 in range(len(mors)):
        phi, _ = inv[m2]
        for m1 in cat.inn[cat.dom[m2]]:
            fmor[(m1, m2)] = key[(inv[m1][0], phi)]
    out = UnaryOpCat(cat, fiber, fmor, [a.ident[x] for x in range(a.n_obj)])
    out.tri = key
    return out


def tautological(a: FinCategory) -> UnaryOpCat:
    """A disjoint union with its decollage; the fiber of g in A is g as an object of the decollage.

    Chosen terminals exist only when every component of A has a terminal object.
    """
    d = decollage(a)
    n, m = a.n_obj, a.n_mor
    objs = [("ob", x) for x in a.obj] + [("arr", f) for f in a.mor]
    mors = [(("ob", a.mor[g]), a.dom[g], a.cod[g]) for g in range(m)]
    mors += [(("arr", d.cat.mor[k]), n + d.cat.dom[k], n + d.cat.cod[k]) for k in range(d.cat.n_mor)]
    idents = list(a.ident) + [m + d.cat.ident[f] for f in range(m)]
    comp = {(g, f): h for (g, f), h in a.comp.items()}
    comp.update({(g + m, f + m): h + m for (g, f), h in d.cat.comp.items()})
    cat = FinCategory(objs, mors, idents, comp)
    fiber = [n + g for g in range(m)] + [n + x for x in d.fiber]
    fmor = {(phi, g): m + d.tri[(phi, g)] for g in range(m) for phi in a.inn[a.dom[g]]}
    fmor.update({(p + m, q + m): r + m for (p, q), r in d.fmor.items()})
    terms = None
    local = a.local_terminals()
    if a.n_obj == 0 or len(local) == a.n_components():
        terms = [ts[0] for _, ts in sorted(local.items())] + [n + a.ident[x] for x in range(n)]
    out = UnaryOpCat(cat, fiber, fmor, terms)
    out.tri = {k: v + m for k, v in d.tri.items()}
    return out


def tautological_embedding(a: FinCategory, label: Hashable = "*") -> tuple[OperadicFunctor, UnaryOpCat]:
    """The embedding of the tautological category into the decollage of A with a terminal adjoined."""
    t = tautological(a)
    at = adjoin_terminal(a, label)
    d = decollage(at)
    n, m = a.n_obj, a.n_mor
    bang = {x: at.unique_mor(x, n) for x in range(n + 1)}
    obj_map = [bang[x] for x in range(n)] + list(range(m))
    mor_map = [d.tri[(g, bang[a.cod[g]])] for g in range(m)]
    tri_a = {v - m: k for k, v in t.tri.items()}
    mor_map += [d.tri[tri_a[k]] for k in range(t.cat.n_mor - m)]
    return OperadicFunctor(t, d, obj_map, mor_map), d


def monoid_opcat(elements: Sequence[Hashable], table: dict, unit=None, pseudo: dict | None = None,
                 terminal=None) -> UnaryOpCat:
    """Operadic category of a monoid-like table: morphisms (x, a): xa -> a with fiber x.

    Either a two-sided `unit` or pseudo-units `pseudo[t]` satisfying
    z e_t = z, e_t t = t and e_(tb) t = t.
    """
    els = list(elements)
    if pseudo is None:
        if unit is None:
            raise StructuralError("need a unit or pseudo-units")
        pseudo = {t: unit for t in els}
    for x in els:
        for y in els:
            if (x, y) not in table or table[(x, y)] not in els:
                raise StructuralError(f"product {x!r}{y!r} missing or outside the set")
    for x in els:
        for y in els:
            for z in els:
                if table[(table[(x, y)], z)] != table[(x, table[(y, z)])]:
                    raise StructuralError(f"not associative at ({x!r},{y!r},{z!r})")
    for t in els:
        e = pseudo[t]
        for z in els:
            if table[(z, e)] != z:
                raise StructuralError(f"(u1) fails at (z,t)=({z!r},{t!r}): z e_t = {table[(z, e)]!r}")
        if table[(e, t)] != t:
            raise StructuralError(f"(u2) fails at t={t!r}: e_t t = {table[(e, t)]!r}")
        for b in els:
            if table[(pseudo[table[(t, b)]], t)] != t:
                raise StructuralError(f"(u2) fails at (t,b)=({t!r},{b!r}): e_(tb) t != t")
    pos = {x: i for i, x in enumerate(els)}
    key = {(pos[x], pos[a]): i for i, (x, a) in enumerate((x, a) for x in els for a in els)}
    mors = [(("m", x, a), pos[table[(x, a)]], pos[a]) for x in els for a in els]
    inv = {v: k for k, v in key.items()}
    mul = {(pos[x], pos[y]): pos[table[(x, y)]] for x in els for y in els}
    idents = [key[(pos[pseudo[a]], pos[a])] for a in els]

    def compose(g, f):
        (x, a), (y, _) = inv[g], inv[f]
        return key[(mul[(y, x)], a)]

    cat = FinCategory.build(els, mors, idents, compose)
    fiber = [inv[f][0] for f in range(len(mors))]
    fmor = {}
    for g in range(len(mors)):
        x2 = inv[g][0]
        for phi in cat.inn[cat.dom[g]]:
            fmor[(phi, g)] = key[(inv[phi][0], x2)]
    if terminal is None:
        terminal = unit if unit is not None else pseudo[els[0]]
    return UnaryOpCat(cat, fiber, fmor, [pos[terminal]])
