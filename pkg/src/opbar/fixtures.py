"""Extensional JSON fixtures, the built-in fixture corpus, validator dispatch and a mutation harness."""
from __future__ import annotations

import copy
import hashlib
import json
import random
from fractions import Fraction
from pathlib import Path

from .blob import BlobModel, BlobSystem, standard_models
from .catmod import (CatModule, OpModule, chaos, decollage_module, self_module, tautological_module,
                     validate_catmodule, validate_opmodule)
from .fincat import FinCategory, validate_category
from .opcat import UnaryOpCat, decollage, monoid_opcat, point, tautological, validate_opcat
from .operad import LinOperad, SetOperad, algebra_operad, monoid_operad, validate_operad
from .opmodule import PModule, validate_pmodule
from .report import Report, StructuralError


# labels and coefficients ----------------------------------------------------------------------

def _enc(x):
    if isinstance(x, tuple):
        return [_enc(y) for y in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def _dec(x):
    if isinstance(x, list):
        return tuple(_dec(y) for y in x)
    return x


def _coeff(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


def _vec(v: dict) -> list:
    return [[k, _enc(x) if isinstance(x, Fraction) and x.denominator != 1 else int(x)] for k, x in sorted(v.items())]


def _unvec(v: list) -> dict:
    return {k: _coeff(x) for k, x in v}


# encoders -------------------------------------------------------------------------------------------

def _cat(c: FinCategory) -> dict:
    return {"objects": [_enc(x) for x in c.obj],
            "morphisms": [[_enc(m), d, t] for m, d, t in zip(c.mor, c.dom, c.cod)],
            "identities": list(c.ident),
            "comp": [[g, f, h] for (g, f), h in sorted(c.comp.items())]}


def _uncat(d: dict) -> FinCategory:
    return FinCategory([_dec(x) for x in d["objects"]], [(_dec(m), a, b) for m, a, b in d["morphisms"]],
                       d["identities"], {(g, f): h for g, f, h in d["comp"]})


def _opcat(o: UnaryOpCat) -> dict:
    terms = None if o.terminals is None else sorted(o.terminals.values())
    return {"category": _cat(o.cat), "fiber": list(o.fiber),
            "fmor": [[p, g, h] for (p, g), h in sorted(o.fmor.items())], "terminals": terms}


def _unopcat(d: dict) -> UnaryOpCat:
    return UnaryOpCat(_uncat(d["category"]), d["fiber"], {(p, g): h for p, g, h in d["fmor"]}, d["terminals"])


def _catmod(m: CatModule) -> dict:
    return {"objects": [_enc(x) for x in m.obj],
            "arrows": [[_enc(a), s, t] for a, s, t in zip(m.arr, m.src, m.tgt)],
            "act": [[g, a, b] for (g, a), b in sorted(m.act.items())]}


def _uncatmod(d: dict, base: FinCategory) -> CatModule:
    return CatModule(base, [_dec(x) for x in d["objects"]], [(_dec(a), s, t) for a, s, t in d["arrows"]],
                     {(g, a): b for g, a, b in d["act"]})


def _opmod(om: OpModule) -> dict:
    return {"module": _catmod(om.mod), "fiber": list(om.fiber),
            "fmor": [[a, g, h] for (a, g), h in sorted(om.fmor.items())]}


def _unopmod(d: dict, o: UnaryOpCat) -> OpModule:
    return OpModule(o, _uncatmod(d["module"], o.cat), d["fiber"], {(a, g): h for a, g, h in d["fmor"]})


def _operad_body(p) -> dict:
    if p.linear:
        return {"linear": True, "dims": list(p.dims),
                "gamma": [[f, i, j, _vec(v)] for f in sorted(p.gamma) for (i, j), v in sorted(p.gamma[f].items())],
                "degrees": [list(x) for x in p.degrees]}
    return {"linear": False, "partial": p.partial, "labels": [[_enc(x) for x in ls] for ls in p.labels],
            "gamma": [[f, a, b, s] for f in sorted(p.gamma) for (a, b), s in sorted(p.gamma[f].items())]}


def _unoperad_body(d: dict, o: UnaryOpCat):
    gamma: dict = {f: {} for f in range(o.cat.n_mor)}
    if d["linear"]:
        for f, i, j, v in d["gamma"]:
            gamma.setdefault(f, {})[(i, j)] = _unvec(v)
        return LinOperad(o, d["dims"], gamma, d.get("degrees"))
    for f, a, b, s in d["gamma"]:
        gamma.setdefault(f, {})[(a, b)] = s
    return SetOperad(o, [[_dec(x) for x in ls] for ls in d["labels"]], gamma, d["partial"])


def to_json(obj) -> dict:
    if isinstance(obj, FinCategory):
        return {"kind": "category", **_cat(obj)}
    if isinstance(obj, UnaryOpCat):
        return {"kind": "opcat", **_opcat(obj)}
    if isinstance(obj, (SetOperad, LinOperad)):
        return {"kind": "operad", "opcat": _opcat(obj.base), **_operad_body(obj)}
    if isinstance(obj, CatModule):
        return {"kind": "catmodule", "base": _cat(obj.base), **_catmod(obj)}
    if isinstance(obj, OpModule):
        return {"kind": "opmodule", "opcat": _opcat(obj.opcat), **_opmod(obj)}
    if isinstance(obj, PModule):
        return {"kind": "pmodule", "opcat": _opcat(obj.om.opcat), "operad": _operad_body(obj.operad),
                "opmodule": _opmod(obj.om), "dims": list(obj.dims),
                "nu": [[a, i, j, _vec(v)] for a in sorted(obj.nu) for (i, j), v in sorted(obj.nu[a].items())]}
    if isinstance(obj, BlobModel):
        return obj.to_dict()
    raise StructuralError(f"cannot serialize {type(obj).__name__}")


def from_json(d: dict):
    kind = d.get("kind")
    if kind == "category":
        return _uncat(d)
    if kind == "opcat":
        return _unopcat(d)
    if kind == "operad":
        return _unoperad_body(d, _unopcat(d["opcat"]))
    if kind == "catmodule":
        return _uncatmod(d, _uncat(d["base"]))
    if kind == "opmodule":
        return _unopmod(d, _unopcat(d["opcat"]))
    if kind == "pmodule":
        o = _unopcat(d["opcat"])
        p = _unoperad_body(d["operad"], o)
        om = _unopmod(d["opmodule"], o)
        nu: dict = {a: {} for a in range(om.mod.n_arr)}
        for a, i, j, v in d["nu"]:
            nu.setdefault(a, {})[(i, j)] = _unvec(v)
        return PModule(p, om, d["dims"], nu)
    if kind == "blob_model":
        return BlobModel.from_dict(d)
    raise StructuralError(f"unknown fixture kind {kind!r}")


def dumps(obj) -> str:
    return json.dumps(to_json(obj), sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str):
    return from_json(json.loads(text))


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def load(path):
    return loads(Path(path).read_text())


def fixture_hash(obj) -> str:
    return hashlib.sha256(dumps(obj).encode()).hexdigest()[:16]


# validators ----------------------------------------------------------------------------------------

def validate(obj) -> Report:
    """The validator matching the fixture kind."""
    if isinstance(obj, FinCategory):
        return validate_category(obj)
    if isinstance(obj, UnaryOpCat):
        return validate_opcat(obj)
    if isinstance(obj, (SetOperad, LinOperad)):
        rep = validate_opcat(obj.base)
        return rep.merge(validate_operad(obj), "operad.") if rep.ok else rep
    if isinstance(obj, CatModule):
        return validate_catmodule(obj)
    if isinstance(obj, OpModule):
        rep = validate_opcat(obj.opcat)
        return rep.merge(validate_opmodule(obj), "module.") if rep.ok else rep
    if isinstance(obj, PModule):
        rep = validate_opmodule(obj.om)
        if rep.ok:
            rep.merge(validate_operad(obj.operad), "operad.")
        if rep.ok:
            rep.merge(validate_pmodule(obj), "pmodule.")
        return rep
    raise StructuralError(f"no validator for {type(obj).__name__}")


# the corpus -----------------------------------------------------------------------------------------

def a2() -> FinCategory:
    """The arrow category a -> b."""
    return FinCategory.build(["a", "b"], [("1a", 0, 0), ("1b", 1, 1), ("f", 0, 1)], [0, 1],
                             lambda g, f: g if f in (0, 1) else f)


def m2_table() -> dict:
    return {(a, b): (a + b) % 2 for a in (0, 1) for b in (0, 1)}


def left_zero(elements) -> dict:
    return {(a, b): a for a in elements for b in elements}


def dual_numbers() -> LinOperad:
    """Lambda = Q[x]/(x^2) over the point, basis (1, x)."""
    return algebra_operad(point(), ["1", "x"], {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}})


def classical_module(lam: LinOperad | None = None) -> PModule:
    """The trivial Lambda-module over the point: one module object, one arrow, x acting by zero."""
    lam = lam or dual_numbers()
    pt = lam.base
    mod = CatModule(pt.cat, ["m"], [("m->*", 0, 0)], {(0, 0): 0})
    om = OpModule(pt, mod, [0], {(0, 0): 0})
    return PModule(lam, om, [1], {0: {(0, 0): {0: 1}}})


def no_arrow_module(lam: LinOperad | None = None) -> OpModule:
    """One module object with no arrows at all."""
    lam = lam or dual_numbers()
    pt = lam.base
    return OpModule(pt, CatModule(pt.cat, ["lonely"], [], {}), [], {})


def small_blob_models() -> dict[str, BlobModel]:
    return {k: m for k, m in standard_models().items() if m.N <= 3 and len(m.vertices) <= 2}


def corpus(include_blob: bool = True) -> dict[str, object]:
    """Every constructive fixture, by name."""
    pt = point()
    A2 = a2()
    out: dict[str, object] = {
        "point": pt,
        "A2": A2,
        "D(A2)": decollage(A2),
        "T(A2)": tautological(A2),
        "M2": monoid_opcat([0, 1], m2_table(), unit=0),
        "PU2": monoid_opcat(["u", "v"], left_zero("uv"), pseudo={"u": "u", "v": "v"}, terminal="u"),
        "O_M2": monoid_operad(pt, [0, 1], m2_table()),
        "O_PU2": monoid_operad(pt, ["u", "v"], left_zero("uv")),
        "chaotic-3": monoid_operad(pt, ["p", "q", "r"], left_zero("pqr")),
        "Lambda": dual_numbers(),
        "Lambda-module": classical_module(),
        "Chaos(A2)": chaos(["L"], A2),
        "D-module(A2)": decollage_module(A2, chaos(["L"], A2)),
        "T-module(A2)": tautological_module(A2, chaos(["L"], A2)),
        "self(D(A2))": self_module(decollage(A2)),
    }
    if include_blob:
        for name, m in small_blob_models().items():
            out.update(blob_fixtures(name, m))
    return out


def blob_fixtures(name: str, m: BlobModel) -> dict[str, object]:
    s = BlobSystem(m)
    out: dict[str, object] = {f"{name}/{k}": v for k, v in s.categories().items() if k in ("blob", "blob(C)")}
    for k in ("Blob", "Blobbar", "Blob(C)", "Blobbar(C)"):
        out[f"{name}/{k}"] = s.categories()[k]
    out[f"{name}/M(C)"] = s.MC
    out[f"{name}/Mbar(C)"] = s.MbarC
    out[f"{name}/S"] = s.S
    out[f"{name}/Fbar"] = s.Fbar
    out[f"{name}/F"] = s.F
    out[f"{name}/Mbar"] = s.Mbar
    out[f"{name}/M"] = s.M
    return out


# mutations ------------------------------------------------------------------------------------------

def _tables(d: dict, path=()):
    """Mutable integer or vector tables inside a fixture dict: (path, key, arity)."""
    out = []
    for k, v in sorted(d.items()):
        if isinstance(v, dict):
            out.extend(_tables(v, path + (k,)))
        elif k in ("comp", "fmor", "act") and v:
            out.append((path + (k,), "int"))
        elif k == "fiber" and v:
            out.append((path + (k,), "fiber"))
        elif k in ("gamma", "nu") and v:
            out.append((path + (k,), "vec" if v and isinstance(v[0][-1], list) else "int"))
    return out


def _get(d: dict, path):
    for k in path:
        d = d[k]
    return d


def _range_for(d: dict, path, kind) -> int:
    """How many targets a mutated entry may take."""
    parent = _get(d, path[:-1])
    if kind == "fiber":
        if "category" in parent:
            return len(parent["category"]["objects"])
        return len(parent["module"]["objects"])
    key = path[-1]
    if key == "comp":
        return len(parent["morphisms"])
    if key == "fmor":
        if "category" in parent:
            return len(parent["category"]["morphisms"])
        return len(parent["module"]["arrows"])
    if key == "act":
        return len(parent["arrows"])
    if key == "gamma":
        return max(len(x) for x in parent["labels"])
    return 0


def mutate(d: dict, rng: random.Random) -> tuple[dict, str] | None:
    """Change one entry of one table; None when the fixture has nothing to mutate."""
    tables = [(p, k) for p, k in _tables(d) if k == "vec" or _range_for(d, p, k) > 1]
    if not tables:
        return None
    path, kind = rng.choice(tables)
    new = copy.deepcopy(d)
    table = _get(new, path)
    i = rng.randrange(len(table))
    entry = table[i]
    where = "/".join(map(str, path))
    if kind == "vec":
        vec = entry[-1]
        if vec:
            k = rng.randrange(len(vec))
            vec[k][1] = int(_coeff(vec[k][1]) * 2) if _coeff(vec[k][1]).denominator == 1 else str(_coeff(vec[k][1]) * 2)
            return new, f"{where}[{i}] coefficient doubled"
        entry[-1] = [[0, 1]]
        return new, f"{where}[{i}] set to basis vector 0"
    n = _range_for(d, path, kind)
    if kind == "fiber":
        old = table[i]
        table[i] = (old + 1 + rng.randrange(n - 1)) % n
        return new, f"{where}[{i}] {old} -> {table[i]}"
    old = entry[-1]
    entry[-1] = (old + 1 + rng.randrange(n - 1)) % n
    return new, f"{where}[{i}] {old} -> {entry[-1]}"


def table_semigroup_check(obj) -> bool | None:
    """Direct associativity of a total set operad over the point, read as a binary table; None otherwise."""
    if not isinstance(obj, SetOperad) or obj.partial or obj.base.cat.n_mor != 1:
        return None
    n = obj.size(0)
    mul = obj.gamma.get(0, {})
    if len(mul) != n * n:
        return False
    return all(mul[(mul[(a, b)], c)] == mul[(a, mul[(b, c)])] for a in range(n) for b in range(n) for c in range(n))


def _dense(table: dict, rows: int, cols: int, out: int) -> list:
    t = [[[0] * out for _ in range(cols)] for _ in range(rows)]
    for (i, j), v in table.items():
        for k, x in v.items():
            t[i][j][k] += x
    return t


def dense_associativity(obj) -> bool | None:
    """Associativity recomputed from dense structure-constant tensors; None for other kinds."""
    if isinstance(obj, LinOperad):
        p, o, c = obj, obj.base, obj.base.cat
        g = {f: _dense(p.gamma.get(f, {}), p.dims[o.fiber[f]], p.dims[c.cod[f]], p.dims[c.dom[f]])
             for f in range(c.n_mor)}
        for f in range(c.n_mor):
            for h in c.out[c.cod[f]]:
                hf, fc = c.comp[(h, f)], o.fmor[(f, h)]
                A, B = p.dims[o.fiber[f]], p.dims[o.fiber[h]]
                R, S, T = p.dims[c.cod[h]], p.dims[c.dom[h]], p.dims[c.dom[f]]
                for a in range(A):
                    for b in range(B):
                        for r in range(R):
                            lhs = [sum(g[h][b][r][s] * g[f][a][s][t] for s in range(S)) for t in range(T)]
                            mid = p.dims[o.fiber[hf]]
                            rhs = [sum(g[fc][a][b][q] * g[hf][q][r][t] for q in range(mid)) for t in range(T)]
                            if lhs != rhs:
                                return False
        return True
    if isinstance(obj, PModule):
        mm, om, p = obj, obj.om, obj.operad
        m, o, c = om.mod, om.opcat, om.opcat.cat
        if dense_associativity(p) is False:
            return False
        nu = {a: _dense(mm.nu.get(a, {}), mm.dims[om.fiber[a]], p.dims[m.tgt[a]], mm.dims[m.src[a]])
              for a in range(m.n_arr)}
        g = {f: _dense(p.gamma.get(f, {}), p.dims[o.fiber[f]], p.dims[c.cod[f]], p.dims[c.dom[f]])
             for f in range(c.n_mor)}
        for a in range(m.n_arr):
            for h in c.out[m.tgt[a]]:
                ac, ha = om.fmor[(a, h)], m.act[(h, a)]
                X, Q, R = mm.dims[om.fiber[a]], p.dims[o.fiber[h]], p.dims[c.cod[h]]
                S, L, mid = p.dims[m.tgt[a]], mm.dims[m.src[a]], mm.dims[om.fiber[ha]]
                for x in range(X):
                    for q in range(Q):
                        for r in range(R):
                            lhs = [sum(g[h][q][r][s] * nu[a][x][s][l] for s in range(S)) for l in range(L)]
                            rhs = [sum(nu[ac][x][q][y] * nu[ha][y][r][l] for y in range(mid)) for l in range(L)]
                            if lhs != rhs:
                                return False
        return True
    return None


def mutation_suite(fixtures: dict[str, object], count: int, seed: int = 0) -> list[dict]:
    """Single-entry mutations spread round-robin over the fixtures, each run through its validator."""
    rng = random.Random(seed)
    names = sorted(fixtures)
    encoded = {n: to_json(fixtures[n]) for n in names}
    rows = []
    k = 0
    while len(rows) < count and k < 50 * count:
        name = names[k % len(names)]
        k += 1
        res = mutate(encoded[name], rng)
        if res is None:
            continue
        new, what = res
        try:
            rep = validate(from_json(new))
            witness = rep.witnesses[0] if rep.witnesses else None
        except StructuralError as exc:
            witness = ("construction", str(exc))
        equivalent = None
        if witness is None:
            # a survivor must be a genuinely valid structure, confirmed independently
            mutant = from_json(new)
            equivalent = table_semigroup_check(mutant)
            if equivalent is None:
                equivalent = dense_associativity(mutant)
        rows.append({"fixture": name, "mutation": what, "caught": witness is not None, "equivalent": equivalent,
                     "witness": f"{witness[0]}: {witness[1]}" if witness else ""})
    return rows
