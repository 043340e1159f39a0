"""Finite categories as explicit tables, with slices, terminal adjunction and functors."""
from __future__ import annotations

from itertools import product
from typing import Callable, Hashable, Sequence

from .report import Report, StructuralError


class FinCategory:
    """Objects and morphisms are indexed 0..n-1; `comp[(g, f)]` is g after f."""

    def __init__(self, objects: Sequence[Hashable], morphisms: Sequence[tuple[Hashable, int, int]],
                 identities: Sequence[int], comp: dict[tuple[int, int], int]):
        self.obj = tuple(objects)
        self.mor = tuple(m[0] for m in morphisms)
        self.dom = tuple(m[1] for m in morphisms)
        self.cod = tuple(m[2] for m in morphisms)
        self.ident = tuple(identities)
        self.comp = dict(comp)
        self.oid = {x: i for i, x in enumerate(self.obj)}
        self.mid = {m: i for i, m in enumerate(self.mor)}
        if len(self.oid) != len(self.obj) or len(self.mid) != len(self.mor):
            raise StructuralError("duplicate object or morphism labels")
        for i, (d, c) in enumerate(zip(self.dom, self.cod)):
            if not (0 <= d < len(self.obj) and 0 <= c < len(self.obj)):
                raise StructuralError(f"morphism {self.mor[i]!r} has endpoint out of range")
        if len(self.ident) != len(self.obj):
            raise StructuralError("one identity per object required")
        self.out: list[list[int]] = [[] for _ in self.obj]
        self.inn: list[list[int]] = [[] for _ in self.obj]
        self.hom: dict[tuple[int, int], list[int]] = {}
        for i in range(len(self.mor)):
            self.out[self.dom[i]].append(i)
            self.inn[self.cod[i]].append(i)
            self.hom.setdefault((self.dom[i], self.cod[i]), []).append(i)
        self._comps: tuple[int, ...] | None = None

    @classmethod
    def build(cls, objects, morphisms, identities, compose: Callable[[int, int], int]) -> "FinCategory":
        """Fill the composition table by calling compose(g, f) on every composable pair."""
        dom = [m[1] for m in morphisms]
        cod = [m[2] for m in morphisms]
        by_dom: dict[int, list[int]] = {}
        for i, d in enumerate(dom):
            by_dom.setdefault(d, []).append(i)
        comp = {}
        for f in range(len(morphisms)):
            for g in by_dom.get(cod[f], ()):
                comp[(g, f)] = compose(g, f)
        return cls(objects, morphisms, identities, comp)

    @property
    def n_obj(self) -> int:
        return len(self.obj)

    @property
    def n_mor(self) -> int:
        return len(self.mor)

    def compose(self, g: int, f: int) -> int:
        if self.cod[f] != self.dom[g]:
            raise StructuralError(f"not composable: {self.mor[g]!r} after {self.mor[f]!r}")
        return self.comp[(g, f)]

    def composable(self):
        for f in range(self.n_mor):
            for g in self.out[self.cod[f]]:
                yield g, f

    def components(self) -> tuple[int, ...]:
        """Component id of each object, numbered by first appearance."""
        if self._comps is None:
            parent = list(range(self.n_obj))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for d, c in zip(self.dom, self.cod):
                a, b = find(d), find(c)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            roots: dict[int, int] = {}
            self._comps = tuple(roots.setdefault(find(x), len(roots)) for x in range(self.n_obj))
        return self._comps

    def n_components(self) -> int:
        return len(set(self.components())) if self.n_obj else 0

    def is_local_terminal(self, x: int) -> bool:
        """Exactly one morphism into x from every object of x's component."""
        comps = self.components()
        return all(len(self.hom.get((y, x), ())) == 1
                   for y in range(self.n_obj) if comps[y] == comps[x])

    def local_terminals(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        comps = self.components()
        for x in range(self.n_obj):
            if self.is_local_terminal(x):
                out.setdefault(comps[x], []).append(x)
        return out

    def unique_mor(self, x: int, y: int) -> int | None:
        h = self.hom.get((x, y), ())
        return h[0] if len(h) == 1 else None

    def with_comp(self, key: tuple[int, int], value: int) -> "FinCategory":
        comp = dict(self.comp)
        comp[key] = value
        return FinCategory(self.obj, list(zip(self.mor, self.dom, self.cod)), self.ident, comp)

    def __repr__(self) -> str:
        return f"FinCategory({self.n_obj} objects, {self.n_mor} morphisms)"


def validate_category(c: FinCategory) -> Report:
    rep = Report("category")
    for x in range(c.n_obj):
        i = c.ident[x]
        rep.check(0 <= i < c.n_mor and c.dom[i] == x and c.cod[i] == x,
                  "identity", lambda: f"identity of {c.obj[x]!r} has wrong endpoints")
    if not rep.ok:
        return rep
    expected = set(c.composable())
    for key in c.comp:
        rep.check(key in expected, "composition-domain",
                  lambda: f"composite defined on non-composable pair {c.mor[key[0]]!r},{c.mor[key[1]]!r}")
    for g, f in sorted(expected):
        if not rep.check((g, f) in c.comp, "composition-domain",
                         lambda: f"missing composite {c.mor[g]!r} after {c.mor[f]!r}"):
            continue
        h = c.comp[(g, f)]
        law = ("right-identity" if f == c.ident[c.dom[f]] else
               "left-identity" if g == c.ident[c.cod[g]] else "composition-endpoints")
        rep.check(0 <= h < c.n_mor and c.dom[h] == c.dom[f] and c.cod[h] == c.cod[g], law,
                  lambda: f"{c.mor[g]!r} after {c.mor[f]!r} has wrong endpoints")
    if not rep.ok:
        return rep
    for f in range(c.n_mor):
        rep.check(c.comp[(c.ident[c.cod[f]], f)] == f, "left-identity", lambda: f"1 after {c.mor[f]!r}")
        rep.check(c.comp[(f, c.ident[c.dom[f]])] == f, "right-identity", lambda: f"{c.mor[f]!r} after 1")
    for f in range(c.n_mor):
        for g in c.out[c.cod[f]]:
            gf = c.comp[(g, f)]
            for h in c.out[c.cod[g]]:
                rep.check(c.comp[(h, gf)] == c.comp[(c.comp[(h, g)], f)], "associativity",
                          lambda: f"({c.mor[h]!r} {c.mor[g]!r}) {c.mor[f]!r}")
    return rep


class FinFunctor:
    def __init__(self, src: FinCategory, tgt: FinCategory, obj_map: Sequence[int], mor_map: Sequence[int]):
        self.src, self.tgt = src, tgt
        self.obj_map = tuple(obj_map)
        self.mor_map = tuple(mor_map)

    def validate(self) -> Report:
        s, t = self.src, self.tgt
        rep = Report("functor")
        if not rep.check(len(self.obj_map) == s.n_obj and len(self.mor_map) == s.n_mor, "shape", "map sizes"):
            return rep
        for f in range(s.n_mor):
            g = self.mor_map[f]
            rep.check(t.dom[g] == self.obj_map[s.dom[f]] and t.cod[g] == self.obj_map[s.cod[f]], "endpoints",
                      lambda: f"image of {s.mor[f]!r}")
        if not rep.ok:
            return rep
        for x in range(s.n_obj):
            rep.check(self.mor_map[s.ident[x]] == t.ident[self.obj_map[x]], "identity", lambda: f"at {s.obj[x]!r}")
        for g, f in s.composable():
            rep.check(self.mor_map[s.comp[(g, f)]] == t.comp[(self.mor_map[g], self.mor_map[f])], "composition",
                      lambda: f"{s.mor[g]!r} after {s.mor[f]!r}")
        return rep


def slice_category(c: FinCategory, s: int) -> tuple[FinCategory, FinFunctor]:
    """C/s together with its domain functor to C.

    Objects are morphisms f: X -> s; a morphism (phi, g) goes from g.phi to g.
    """
    objs = list(c.inn[s])
    pos = {f: i for i, f in enumerate(objs)}
    mors, proj = [], []
    key = {}
    for g in objs:
        for phi in c.inn[c.dom[g]]:
            key[(phi, g)] = len(mors)
            mors.append((("tri", c.mor[phi], c.mor[g]), pos[c.comp[(g, phi)]], pos[g]))
            proj.append(phi)
    idents = [key[(c.ident[c.dom[f]], f)] for f in objs]
    inv = {v: k for k, v in key.items()}

    def compose(m2, m1):
        (phi, g), (psi, _) = inv[m2], inv[m1]
        return key[(c.comp[(phi, psi)], g)]

    sl = FinCategory.build([c.mor[f] for f in objs], mors, idents, compose)
    dom_fun = FinFunctor(sl, c, [c.dom[f] for f in objs], proj)
    return sl, dom_fun


def adjoin_terminal(c: FinCategory, label: Hashable = "*") -> FinCategory:
    """C with a new object that receives exactly one morphism from every object."""
    n, m = c.n_obj, c.n_mor
    objs = list(c.obj) + [label]
    mors = list(zip(c.mor, c.dom, c.cod))
    bang = {}
    for x in range(n + 1):
        bang[x] = len(mors)
        mors.append((("!", objs[x]), x, n))
    idents = list(c.ident) + [bang[n]]

    def compose(g, f):
        if g < m and f < m:
            return c.comp[(g, f)]
        return bang[mors[f][1]]

    return FinCategory.build(objs, mors, idents, compose)


def chaotic(objects: Sequence[Hashable]) -> FinCategory:
    """Exactly one morphism between every ordered pair of objects."""
    n = len(objects)
    idx = {(a, b): a * n + b for a, b in product(range(n), repeat=2)}
    mors = [((objects[a], objects[b]), a, b) for a, b in product(range(n), repeat=2)]
    return FinCategory.build(objects, mors, [idx[(a, a)] for a in range(n)],
                             lambda g, f: idx[(mors[f][1], mors[g][2])])


def poset_category(elements: Sequence[Hashable], leq: Callable) -> FinCategory:
    n = len(elements)
    pairs = [(a, b) for a in range(n) for b in range(n) if leq(elements[a], elements[b])]
    idx = {p: i for i, p in enumerate(pairs)}
    mors = [((elements[a], elements[b]), a, b) for a, b in pairs]
    return FinCategory.build(elements, mors, [idx[(a, a)] for a in range(n)],
                             lambda g, f: idx[(mors[f][1], mors[g][2])])
