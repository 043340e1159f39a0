"""Grothendieck construction for Set operads and its inverse on discrete operadic fibrations."""
from __future__ import annotations

from dataclasses import dataclass

from .fincat import FinCategory
from .opcat import OperadicFunctor, UnaryOpCat, validate_opcat
from .operad import SetOperad
from .report import Report, StructuralError


@dataclass
class Grothendieck:
    total: UnaryOpCat
    proj: OperadicFunctor
    tags: list[tuple[int, int]]          # object index -> (T, t)
    lifts: dict[tuple[int, int, int], int]  # (f, eps, t) -> morphism index


def _unit_elements(s: SetOperad, units) -> dict[tuple[int, int], int]:
    """Per object element (T, t), the element of S(U_T) used for its identity."""
    o = s.base
    kind, data = units
    if kind == "pseudo":
        return dict(data)
    if kind == "cat":
        comps = o.cat.components()
        return {(t, x): data[comps[o.unit_object(t)]] for t in range(o.cat.n_obj) for x in s.basis(t)}
    raise StructuralError(f"unknown unit flavor {kind!r}")


def grothendieck(s: SetOperad, units) -> Grothendieck:
    """units is ("cat", {component: element}) or ("pseudo", {(T, t): element})."""
    o, c = s.base, s.base.cat
    e = _unit_elements(s, units)
    tags = [(t, x) for t in range(c.n_obj) for x in s.basis(t)]
    oid = {tag: i for i, tag in enumerate(tags)}
    mors, lifts, proj = [], {}, []
    for f in range(c.n_mor):
        fib, b = o.fiber[f], c.cod[f]
        for eps in s.basis(fib):
            for t in s.basis(b):
                r = s.gam(f, eps, t)
                if r is None:
                    continue
                lifts[(f, eps, t)] = len(mors)
                mors.append((("lift", c.mor[f], s.labels[fib][eps], s.labels[b][t]), oid[(c.dom[f], r)], oid[(b, t)]))
                proj.append(f)
    key = {v: k for k, v in lifts.items()}
    idents = []
    for t, x in tags:
        k = (c.ident[t], e[(t, x)], x)
        if k not in lifts or s.gam(*k) != x:
            raise StructuralError(f"unit at {c.obj[t]!r},{s.labels[t][x]!r} does not give an identity")
        idents.append(lifts[k])

    def compose(m2, m1):
        g, y, cc = key[m2]
        f, w, _ = key[m1]
        x = s.gam(o.fmor[(f, g)], w, y)
        if x is None or (c.comp[(g, f)], x, cc) not in lifts:
            raise StructuralError("composite lift undefined; domain condition fails")
        return lifts[(c.comp[(g, f)], x, cc)]

    cat = FinCategory.build([(c.obj[t], s.labels[t][x]) for t, x in tags], mors, idents, compose)
    fiber = [oid[(o.fiber[key[m][0]], key[m][1])] for m in range(len(mors))]
    fmor = {}
    for m2 in range(len(mors)):
        g, y, _ = key[m2]
        for m1 in cat.inn[cat.dom[m2]]:
            f, w, _ = key[m1]
            fmor[(m1, m2)] = lifts[(o.fmor[(f, g)], w, y)]
    terms = None
    if units[0] == "cat" and o.terminals is not None:
        cand = [oid[(u, units[1][k])] for k, u in sorted(o.terminals.items())]
        comps = cat.components()
        if sorted(comps[x] for x in cand) == sorted(set(comps)):
            terms = cand
    total = UnaryOpCat(cat, fiber, fmor, terms)
    p = OperadicFunctor(total, o, [t for t, _ in tags], proj)
    return Grothendieck(total, p, tags, lifts)


def _lift_table(p: OperadicFunctor):
    """(f, fiber object, codomain object) -> list of lifts in the total category."""
    q = p.src
    table: dict[tuple[int, int, int], list[int]] = {}
    for m in range(q.cat.n_mor):
        table.setdefault((p.mor_map[m], q.fiber[m], q.cat.cod[m]), []).append(m)
    return table


def check_discrete_fibration(p: OperadicFunctor, partial: bool = False, unital: bool = False,
                             domains: dict | None = None) -> Report:
    """Unique lifts (exactly one when total; at most one plus the composability condition when partial).

    `domains[f]`, when given, is the claimed set of (eps, s) pairs that have lifts.
    """
    rep = p.validate()
    rep.name = "discrete operadic fibration"
    if not rep.ok:
        return rep
    q, o = p.src, p.tgt
    over: dict[int, list[int]] = {t: [] for t in range(o.cat.n_obj)}
    for x in range(q.cat.n_obj):
        over[p.obj_map[x]].append(x)
    table = _lift_table(p)
    has = {}
    for f in range(o.cat.n_mor):
        for eps in over[o.fiber[f]]:
            for sx in over[o.cat.cod[f]]:
                n = len(table.get((f, eps, sx), ()))
                has[(f, eps, sx)] = n == 1
                if partial:
                    rep.check(n <= 1, "unique-lift", lambda: f"{n} lifts of {o.cat.mor[f]!r} at ({eps},{sx})")
                else:
                    rep.check(n == 1, "unique-lift", lambda: f"{n} lifts of {o.cat.mor[f]!r} at ({eps},{sx})")
                if domains is not None:
                    claimed = (eps, sx) in domains.get(f, set())
                    rep.check(claimed == (n >= 1), "lift-domain",
                              lambda: f"domain of {o.cat.mor[f]!r} at ({eps},{sx}) claimed {claimed}")
    if partial and rep.ok:
        dom_of = {k: q.cat.dom[v[0]] for k, v in table.items()}
        for f in range(o.cat.n_mor):
            for g in o.cat.out[o.cat.cod[f]]:
                gf, fc = o.cat.comp[(g, f)], o.fmor[(f, g)]
                for eps in over[o.fiber[f]]:
                    for y in over[o.fiber[g]]:
                        for cc in over[o.cat.cod[g]]:
                            a = (g, y, cc) in dom_of and (f, eps, dom_of[(g, y, cc)]) in dom_of
                            b = (fc, eps, y) in dom_of and (gf, dom_of[(fc, eps, y)], cc) in dom_of
                            rep.check(a == b, "composable-domains",
                                      lambda: f"f={o.cat.mor[f]!r} g={o.cat.mor[g]!r} at ({eps},{y},{cc})")
    if unital:
        hit = {o.cat.components()[p.obj_map[x]] for x in range(q.cat.n_obj)}
        rep.check(hit == set(o.cat.components()), "pi0-surjective", "some component has empty preimage")
    return rep


def fibration_to_operad(p: OperadicFunctor, partial: bool = False):
    """S(T) = objects over T; gamma_f(eps, s) = domain of the unique lift. Returns (operad, units)."""
    q, o = p.src, p.tgt
    over: dict[int, list[int]] = {t: [] for t in range(o.cat.n_obj)}
    for x in range(q.cat.n_obj):
        over[p.obj_map[x]].append(x)
    pos = {x: over[p.obj_map[x]].index(x) for x in range(q.cat.n_obj)}
    table = _lift_table(p)
    gamma: dict[int, dict] = {f: {} for f in range(o.cat.n_mor)}
    for (f, eps, sx), ms in table.items():
        if len(ms) > 1:
            raise StructuralError(f"lift of {o.cat.mor[f]!r} is not unique")
        gamma[f][(pos[eps], pos[sx])] = pos[q.cat.dom[ms[0]]]
    s = SetOperad(o, [over[t] for t in range(o.cat.n_obj)], gamma, partial)
    if not partial:
        for f in range(o.cat.n_mor):
            if len(gamma[f]) != s.size(o.fiber[f]) * s.size(o.cat.cod[f]):
                raise StructuralError(f"missing lifts over {o.cat.mor[f]!r}")
    pseudo = {(p.obj_map[x], pos[x]): pos[q.fiber[q.cat.ident[x]]] for x in range(q.cat.n_obj)}
    units = ("pseudo", pseudo)
    if o.terminals is not None:
        comps = o.cat.components()
        eta = {}
        for (t, x), u in pseudo.items():
            eta.setdefault(comps[o.unit_object(t)], set()).add(u)
        if set(eta) == set(o.terminals) and all(len(v) == 1 for v in eta.values()):
            units = ("cat", {k: v.pop() for k, v in eta.items()})
    return s, units


def check_iso(f: OperadicFunctor) -> Report:
    rep = f.validate()
    rep.name = "isomorphism"
    rep.check(sorted(f.obj_map) == list(range(f.tgt.cat.n_obj)), "bijective-objects", "object map not bijective")
    rep.check(sorted(f.mor_map) == list(range(f.tgt.cat.n_mor)), "bijective-morphisms", "morphism map not bijective")
    return rep


def roundtrip_operad(s: SetOperad, units) -> Report:
    """S -> its Grothendieck fibration -> operad of that fibration; compare with S through the object tags."""
    g = grothendieck(s, units)
    rep = Report("operad round trip")
    rep.merge(validate_opcat(g.total))
    rep.merge(check_discrete_fibration(g.proj, partial=s.partial))
    s2, units2 = fibration_to_operad(g.proj, partial=s.partial)
    tag = lambda t, i: g.tags[s2.labels[t][i]][1]
    for t in range(s.base.cat.n_obj):
        rep.check(sorted(tag(t, i) for i in s2.basis(t)) == list(s.basis(t)), "carrier", lambda: f"at object {t}")
    o = s.base
    for f in range(o.cat.n_mor):
        mine = s.gamma.get(f, {})
        theirs = {(tag(o.fiber[f], a), tag(o.cat.cod[f], b)): tag(o.cat.dom[f], v)
                  for (a, b), v in s2.gamma[f].items()}
        rep.check(mine == theirs, "structure", lambda: f"gamma over {o.cat.mor[f]!r} differs")
    e = _unit_elements(s, units)
    e2 = _unit_elements(s2, units2)
    for (t, i), u in e2.items():
        rep.check(e[(t, tag(t, i))] == tag(o.unit_object(t), u), "units", lambda: f"unit at object {t}")
    return rep


def roundtrip_fibration(p: OperadicFunctor, partial: bool = False) -> Report:
    """Fibration -> operad -> Grothendieck fibration; build the comparison functor by matching keys."""
    rep = check_discrete_fibration(p, partial=partial)
    rep.name = "fibration round trip"
    if not rep.ok:
        return rep
    s, units = fibration_to_operad(p, partial)
    g = grothendieck(s, units)
    q = p.src
    obj_map = [s.labels[t][i] for t, i in g.tags]
    table = _lift_table(p)
    mor_map = [0] * g.total.cat.n_mor
    for (f, eps, t), m in g.lifts.items():
        fib, cod = p.tgt.fiber[f], p.tgt.cat.cod[f]
        mor_map[m] = table[(f, s.labels[fib][eps], s.labels[cod][t])][0]
    iso = OperadicFunctor(g.total, q, obj_map, mor_map)
    rep.merge(check_iso(iso))
    rep.check(all(p.obj_map[obj_map[x]] == g.proj.obj_map[x] for x in range(len(obj_map))), "over-base",
              "comparison does not commute with the projections")
    return rep
