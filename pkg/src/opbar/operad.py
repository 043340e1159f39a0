"""Set-valued, partial and linear operads over a unary operadic category, with unit checks."""
from __future__ import annotations

from itertools import product
from typing import Hashable, Sequence

from .linalg import vadd, vclean, vscale
from .opcat import OperadicFunctor, UnaryOpCat
from .report import Report, StructuralError


class SetOperad:
    """`gamma[f][(eps, t)] = s` with eps in S(F(f)), t in S(cod f), s in S(dom f), all as indices.

    With `partial=True` missing pairs are undefined; otherwise every pair must be present.
    """

    linear = False

    def __init__(self, base: UnaryOpCat, labels: Sequence[Sequence[Hashable]], gamma: dict[int, dict],
                 partial: bool = False):
        self.base = base
        self.labels = [tuple(x) for x in labels]
        self.gamma = {f: dict(g) for f, g in gamma.items()}
        self.partial = partial
        if len(self.labels) != base.cat.n_obj:
            raise StructuralError("one carrier set per object required")

    def size(self, x: int) -> int:
        return len(self.labels[x])

    def basis(self, x: int):
        return range(len(self.labels[x]))

    def gam(self, f: int, a, b):
        if a is None or b is None:
            return None
        return self.gamma.get(f, {}).get((a, b))

    @staticmethod
    def same(a, b) -> bool:
        return a == b

    def index(self, x: int, label) -> int:
        return self.labels[x].index(label)


class LinOperad:
    """`gamma[f][(i, j)]` is a sparse vector in P(dom f); missing pairs compose to zero."""

    linear = True

    def __init__(self, base: UnaryOpCat, dims: Sequence[int], gamma: dict[int, dict],
                 degrees: Sequence[Sequence[int]] | None = None, names: Sequence[Sequence] | None = None):
        self.base = base
        self.dims = tuple(dims)
        self.gamma = {f: {k: vclean(v) for k, v in g.items()} for f, g in gamma.items()}
        self.degrees = [tuple(d) for d in degrees] if degrees is not None else [(0,) * n for n in self.dims]
        self.names = [tuple(n) for n in names] if names is not None else [tuple(range(n)) for n in self.dims]
        if len(self.dims) != base.cat.n_obj:
            raise StructuralError("one dimension per object required")

    def size(self, x: int) -> int:
        return self.dims[x]

    def basis(self, x: int):
        return ({i: 1} for i in range(self.dims[x]))

    def gam_basis(self, f: int, i: int, j: int) -> dict:
        return self.gamma.get(f, {}).get((i, j), {})

    def gam(self, f: int, a: dict, b: dict) -> dict:
        out: dict = {}
        g = self.gamma.get(f, {})
        for i, x in a.items():
            for j, y in b.items():
                v = g.get((i, j))
                if v:
                    out = vadd(out, v, x * y)
        return out

    @staticmethod
    def same(a, b) -> bool:
        return vclean(a) == vclean(b)

    @property
    def graded(self) -> bool:
        return any(any(d) for d in self.degrees)


def validate_operad(p) -> Report:
    """Shape of the structure maps and associativity gamma_f(1 x gamma_g) = gamma_gf(gamma_fC x 1)."""
    o, c = p.base, p.base.cat
    rep = Report("operad")
    for f in range(c.n_mor):
        fib, s, t = o.fiber[f], c.dom[f], c.cod[f]
        table = p.gamma.get(f, {})
        for (a, b), v in table.items():
            ok = 0 <= a < p.size(fib) and 0 <= b < p.size(t)
            if p.linear:
                ok = ok and all(0 <= k < p.size(s) for k in v)
            else:
                ok = ok and 0 <= v < p.size(s)
            rep.check(ok, "shape", lambda: f"gamma of {c.mor[f]!r} at {(a, b)} out of range")
        if not p.linear and not p.partial:
            rep.check(len(table) == p.size(fib) * p.size(t), "totality",
                      lambda: f"gamma of {c.mor[f]!r} is not total")
    if not rep.ok:
        return rep
    for f in range(c.n_mor):
        for g in c.out[c.cod[f]]:
            gf, fc = c.comp[(g, f)], o.fmor[(f, g)]
            for a, b, r in product(p.basis(o.fiber[f]), p.basis(o.fiber[g]), p.basis(c.cod[g])):
                lhs = p.gam(f, a, p.gam(g, b, r))
                rhs = p.gam(gf, p.gam(fc, a, b), r)
                rep.check(p.same(lhs, rhs), "associativity",
                          lambda: f"f={c.mor[f]!r} g={c.mor[g]!r} at {_show(a)},{_show(b)},{_show(r)}: "
                                  f"{_show(lhs)} vs {_show(rhs)}")
    return rep


def _show(x) -> str:
    if isinstance(x, dict):
        return "{" + ",".join(f"{k}:{v}" for k, v in sorted(x.items())) + "}"
    return repr(x)


def _require_element(p, x: int, e):
    ok = all(0 <= k < p.size(x) for k in e) if p.linear else isinstance(e, int) and 0 <= e < p.size(x)
    if not ok:
        raise StructuralError(f"unit is not an element of the carrier at object {x}")


def find_set_units(p: SetOperad) -> dict:
    """Whether some choice of categorical units is left, right or two-sided unital (exhaustive)."""
    o = p.base
    if o.terminals is None:
        return {"left": False, "right": False, "two_sided": False}
    out = {"left": False, "right": False, "two_sided": False}
    comps = sorted(o.terminals)
    for choice in product(*(p.basis(o.terminals[k]) for k in comps)):
        r = check_unital_cat(p, dict(zip(comps, choice)))
        out["left"] |= r["left"]
        out["right"] |= r["right"]
        out["two_sided"] |= r["left"] and r["right"]
    return out


def search_units(p: SetOperad, limit: int = 100_000):
    """A unit family usable by the Grothendieck construction: ("cat", eta) if two-sided categorical
    units exist, else ("pseudo", e) found by exhaustive search, else None."""
    o, c = p.base, p.base.cat
    if o.terminals is not None:
        comps = sorted(o.terminals)
        for choice in product(*(p.basis(o.terminals[k]) for k in comps)):
            eta = dict(zip(comps, choice))
            r = check_unital_cat(p, eta)
            if r["left"] and r["right"]:
                return ("cat", eta)
    keys = [(t, x) for t in range(c.n_obj) for x in p.basis(t)]
    cands = [[u for u in p.basis(o.unit_object(t)) if p.gam(c.ident[t], u, x) == x] for t, x in keys]
    total = 1
    for cs in cands:
        total *= len(cs)
    if not total or total > limit:
        return None
    for choice in product(*cands):
        e = dict(zip(keys, choice))
        r = check_pseudo_unital(p, e)
        if r["left"] and r["right"]:
            return ("pseudo", e)
    return None


def check_unital_cat(p, eta: dict[int, object]) -> dict:
    """Units eta[c] in P(U_c) indexed by components (chosen terminals U_c)."""
    o, c = p.base, p.base.cat
    left, right = Report("left"), Report("right")
    if o.terminals is None:
        raise StructuralError("categorical units need chosen terminal objects")
    if set(eta) != set(o.terminals):
        raise StructuralError("unit family must be indexed by the components")
    comps = c.components()
    for k, u in o.terminals.items():
        _require_element(p, u, eta[k])
    for t in range(c.n_obj):
        u = o.unit_object(t)
        if not left.check(o.terminals[comps[u]] == u, "left", lambda: f"F(1_{c.obj[t]!r}) is not a chosen terminal"):
            continue
        e = eta[comps[u]]
        for x in p.basis(t):
            left.check(p.same(p.gam(c.ident[t], e, x), x), "left", lambda: f"at {c.obj[t]!r} {_show(x)}")
    for x in range(c.n_obj):
        k = comps[x]
        u = o.terminals[k]
        bang = c.unique_mor(x, u)
        if not right.check(bang is not None and o.fiber[bang] == x, "right",
                           lambda: f"the morphism {c.obj[x]!r} -> terminal does not have fiber {c.obj[x]!r}"):
            continue
        for phi in p.basis(x):
            right.check(p.same(p.gam(bang, phi, eta[k]), phi), "right", lambda: f"at {c.obj[x]!r} {_show(phi)}")
    return {"left": left.ok, "right": right.ok, "witnesses": left.witnesses + right.witnesses}


def check_unital_fiberwise(p, eta: dict[int, object]) -> dict:
    """Units eta[T] in P(U_T) for every object T."""
    o, c = p.base, p.base.cat
    if set(eta) != set(range(c.n_obj)):
        raise StructuralError("fiberwise units must be indexed by all objects")
    for t in range(c.n_obj):
        _require_element(p, o.unit_object(t), eta[t])
    left, right = Report("left"), Report("right")
    for t in range(c.n_obj):
        for x in p.basis(t):
            left.check(p.same(p.gam(c.ident[t], eta[t], x), x), "left", lambda: f"at {c.obj[t]!r} {_show(x)}")
    for f in range(c.n_mor):
        t = c.cod[f]
        ft = o.fmor[(f, c.ident[t])]
        for phi in p.basis(o.fiber[f]):
            right.check(p.same(p.gam(ft, phi, eta[t]), phi), "right", lambda: f"at {c.mor[f]!r} {_show(phi)}")
    consistent = all(p.same(eta[t], eta[o.unit_object(t)]) for t in range(c.n_obj))
    return {"left": left.ok, "right": right.ok, "consistent": consistent,
            "witnesses": left.witnesses + right.witnesses}


def check_pseudo_unital(p: SetOperad, e: dict[tuple[int, int], int]) -> dict:
    """Pseudo-units e[(T, t)] in S(U_T); partial operads require the products to be defined."""
    o, c = p.base, p.base.cat
    for t in range(c.n_obj):
        for x in p.basis(t):
            if (t, x) not in e or not 0 <= e[(t, x)] < p.size(o.unit_object(t)):
                raise StructuralError(f"pseudo-unit missing or invalid at {c.obj[t]!r}")
    left, right = Report("left"), Report("right")
    for t in range(c.n_obj):
        for x in p.basis(t):
            left.check(p.gam(c.ident[t], e[(t, x)], x) == x, "left-1", lambda: f"at {c.obj[t]!r} {x}")
    for xi in range(c.n_mor):
        t, r, cc = c.dom[xi], o.fiber[xi], c.cod[xi]
        rid = o.fmor[(c.ident[t], xi)]
        for rho in p.basis(r):
            for y in p.basis(cc):
                s = p.gam(xi, rho, y)
                if s is None:
                    continue
                left.check(p.gam(rid, e[(t, s)], rho) == rho, "left-2",
                           lambda: f"xi={c.mor[xi]!r} rho={rho} c={y}")
    for f in range(c.n_mor):
        t = c.cod[f]
        ft = o.fmor[(f, c.ident[t])]
        for phi in p.basis(o.fiber[f]):
            for y in p.basis(t):
                if p.partial and p.gam(f, phi, y) is None:
                    continue
                right.check(p.gam(ft, phi, e[(t, y)]) == phi, "right",
                            lambda: f"f={c.mor[f]!r} phi={phi} t={y}")
    return {"left": left.ok, "right": right.ok, "witnesses": left.witnesses + right.witnesses}


def fiberwise_from_cat(p, eta: dict[int, object]) -> dict[int, object]:
    comps = p.base.cat.components()
    return {t: eta[comps[p.base.unit_object(t)]] for t in range(p.base.cat.n_obj)}


def cat_from_fiberwise(p, eta: dict[int, object]) -> dict[int, object]:
    """Restrict a fiberwise family to the chosen terminals."""
    return {k: eta[u] for k, u in p.base.terminals.items()}


def pseudo_from_fiberwise(p: SetOperad, eta: dict[int, int]) -> dict[tuple[int, int], int]:
    return {(t, x): eta[t] for t in range(p.base.cat.n_obj) for x in p.basis(t)}


def restrict(p, phi: OperadicFunctor):
    """Pull an operad back along an operadic functor: carriers P(phi X), structure gamma_(phi f)."""
    if phi.tgt is not p.base:
        raise StructuralError("functor target is not the operad's base")
    src = phi.src
    gamma = {f: p.gamma.get(phi.mor_map[f], {}) for f in range(src.cat.n_mor)}
    if p.linear:
        return LinOperad(src, [p.dims[phi.obj_map[x]] for x in range(src.cat.n_obj)], gamma,
                         [p.degrees[phi.obj_map[x]] for x in range(src.cat.n_obj)],
                         [p.names[phi.obj_map[x]] for x in range(src.cat.n_obj)])
    return SetOperad(src, [p.labels[phi.obj_map[x]] for x in range(src.cat.n_obj)], gamma, p.partial)


def monoid_operad(point: UnaryOpCat, elements: Sequence[Hashable], table: dict) -> SetOperad:
    """Set operad over the one-object category: gamma(eps, t) = eps t."""
    els = list(elements)
    pos = {x: i for i, x in enumerate(els)}
    g = {(pos[a], pos[b]): pos[table[(a, b)]] for a in els for b in els}
    return SetOperad(point, [els], {0: g})


def algebra_operad(point: UnaryOpCat, names: Sequence, mult: dict, degrees: Sequence[int] | None = None) -> LinOperad:
    """Linear operad over the one-object category from structure constants mult[(i, j)] = {k: c}."""
    return LinOperad(point, [len(names)], {0: {k: dict(v) for k, v in mult.items()}},
                     [degrees] if degrees is not None else None, [names])


def linearize(s: SetOperad) -> LinOperad:
    gamma = {f: {k: {v: 1} for k, v in g.items()} for f, g in s.gamma.items()}
    return LinOperad(s.base, [len(x) for x in s.labels], gamma, names=s.labels)


def scale_structure(p: LinOperad, f: int, c) -> LinOperad:
    """Copy of p with gamma_f multiplied by c (used to build non-associative mutants)."""
    gamma = dict(p.gamma)
    gamma[f] = {k: vscale(v, c) for k, v in gamma.get(f, {}).items()}
    return LinOperad(p.base, p.dims, gamma, p.degrees, p.names)
