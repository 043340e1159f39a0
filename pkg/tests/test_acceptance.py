"""The ten acceptance criteria, each exact and timed, each printing one PASS/FAIL line."""
import time
from fractions import Fraction
from itertools import product

import pytest
import sympy

from opbar import fixtures as fx
from opbar.bar import BarComplex
from opbar.blob import BlobSystem, skein_dimension, standard_models
from opbar.catmod import validate_opmodule
from opbar.chain import verify_contraction
from opbar.colored import (ColoredSystem, ball_decomposition, compare_leveled, levelization_check,
                           self_bar_homology)
from opbar.groth import grothendieck, roundtrip_fibration, roundtrip_operad
from opbar.opcat import unitality_report, validate_opcat
from opbar.operad import (LinOperad, SetOperad, cat_from_fiberwise, check_pseudo_unital, check_unital_cat,
                          check_unital_fiberwise, fiberwise_from_cat, pseudo_from_fiberwise, validate_operad)
from opbar.opmodule import FreeModule, PModule, UnitalFreeModule, validate_pmodule

SMALL = fx.small_blob_models()
N2 = {k: m for k, m in SMALL.items() if m.N == 2}
N3 = {k: m for k, m in SMALL.items() if m.N == 3}


def report(capsys, number, title, ok, elapsed, limit, detail=""):
    line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title} ({elapsed:.2f}s, limit {limit}s)"
    with capsys.disabled():
        print("\n" + line + (f"  {detail}" if detail and not ok else ""))
    assert ok, detail
    assert elapsed < limit, f"took {elapsed:.1f}s"


def criterion_1():
    corpus = fx.corpus()
    constructive = {"point", "D(A2)", "T(A2)", "O_M2", "O_PU2"}
    assert constructive <= set(corpus)
    bad = []
    for name, obj in corpus.items():
        if isinstance(obj, (SetOperad, LinOperad)):
            rep = validate_opcat(obj.base).merge(validate_operad(obj))
        elif isinstance(obj, PModule):
            rep = validate_opmodule(obj.om).merge(validate_operad(obj.operad)).merge(validate_pmodule(obj))
        else:
            rep = fx.validate(obj)
        if not rep.ok:
            bad.append(name)
    rows = fx.mutation_suite(corpus, 40, seed=0)
    caught = [r for r in rows if r["caught"]]
    witnessed = all(r["witness"] for r in caught)
    survivors_valid = all(r["equivalent"] for r in rows if not r["caught"])
    ok = not bad and len(caught) >= 20 and witnessed and survivors_valid
    return ok, f"invalid={bad} caught={len(caught)}/{len(rows)} survivors_valid={survivors_valid}"


def criterion_2():
    c = fx.corpus(include_blob=False)
    s3 = BlobSystem(standard_models()["loop-x2-N3"])
    cases = {
        "M2": (c["O_M2"], ("cat", {0: 0})),
        "PU2": (c["O_PU2"], ("pseudo", {(0, 0): 0, (0, 1): 1})),
        "chaotic-3": (c["chaotic-3"], ("pseudo", {(0, i): i for i in range(3)})),
        "S(N=3)": (s3.S, ("pseudo", s3.S_units)),
    }
    failures = []
    for name, (s, units) in cases.items():
        if not roundtrip_operad(s, units).ok:
            failures.append(f"{name}: operad round trip")
        if not roundtrip_fibration(grothendieck(s, units).proj, s.partial).ok:
            failures.append(f"{name}: fibration round trip")
    total = grothendieck(c["O_PU2"], cases["PU2"][1]).total.cat
    chaotic = all(len(total.hom.get((x, y), ())) == 1 for x in range(total.n_obj) for y in range(total.n_obj))
    ok = not failures and (total.n_obj, total.n_mor) == (2, 4) and chaotic
    return ok, f"{failures} total=({total.n_obj},{total.n_mor}) chaotic={chaotic}"


def criterion_3():
    bc = BarComplex(fx.classical_module(), 0, 3, {0: {0: 1}})
    cx = bc.complex
    dims_ok = cx.dims == [2 ** (n + 1) for n in range(4)]
    betti = cx.betti()
    ok = dims_ok and cx.check_d2().ok and betti == {-1: 0, 0: 0, 1: 0, 2: 0}
    return ok, f"dims={cx.dims} betti={betti}"


def criterion_4():
    lam = fx.dual_numbers()
    classical = fx.classical_module(lam)
    u = UnitalFreeModule(FreeModule(lam, classical.om, [1]), {0: {0: 1}})
    free_ok = u.module.dims == (2,) and u.structure_check(0)["iso"]
    rigid = {}
    for name, m in N2.items():
        s = BlobSystem(m)
        e = [0] * s.MbarC.mod.n_obj
        e[s.upsilon] = 1
        rigid[name] = UnitalFreeModule(FreeModule(s.Fbar, s.MbarC, e), s.fbar_units).structure_check(s.upsilon)
    naive = UnitalFreeModule(FreeModule(lam, fx.no_arrow_module(lam), [1]), {0: {0: 1}}).naive_compare(0)
    ok = free_ok and all(r["iso"] for r in rigid.values()) and naive == {"dim": 1, "rhs_dim": 0}
    return ok, f"free={u.module.dims} rigid={rigid} naive={naive}"


def criterion_5():
    failures = []
    for name, m in SMALL.items():
        s = BlobSystem(m)
        bc = BarComplex(s.Mbar, s.upsilon, 4, s.fbar_units)
        cx = bc.complex
        if not verify_contraction(cx, bc.contraction(), 3).ok:
            failures.append(f"{name}: contraction")
        fields = len(m.paths(m.N, *m.b))
        if not (cx.aug_dim == fields and cx.homology(0, augmented=False) == fields):
            failures.append(f"{name}: H0 {cx.homology(0, augmented=False)} vs {fields}")
    return not failures, str(failures)


def skein_by_sympy(m) -> int:
    """Words of length N from b[0] to b[1] modulo all left/right multiples of the relations, by sympy rank."""
    src = {e[0]: e[1] for e in m.edges}
    tgt = {e[0]: e[2] for e in m.edges}

    def words(n, a, z):
        out = []
        for w in product([e[0] for e in m.edges], repeat=n):
            if n == 0:
                out.extend([()] if a == z else [])
            elif src[w[0]] == a and tgt[w[-1]] == z and all(tgt[w[i]] == src[w[i + 1]] for i in range(n - 1)):
                out.append(w)
        return out

    basis = words(m.N, *m.b)
    index = {w: i for i, w in enumerate(basis)}
    rows = []
    for rel in m.relations:
        r0 = rel[0][0]
        ell = len(r0)
        for k in range(m.N - ell + 1):
            for left in words(k, m.b[0], src[r0[0]]):
                for right in words(m.N - k - ell, tgt[r0[-1]], m.b[1]):
                    row = [Fraction(0)] * len(basis)
                    for path, coeff in rel:
                        row[index[left + tuple(path) + right]] += coeff
                    rows.append(row)
    if not rows:
        return len(basis)
    return len(basis) - sympy.Matrix(rows).rank()


def criterion_6():
    models = standard_models()
    expected = {"loop-x2-N3": 0, "loop-free-N3": 1}
    got = {}
    for name in ("loop-x2-N3", "loop-free-N3", "two-vertex-fe-N3", "commuting-xy-N3"):
        m = models[name]
        s = BlobSystem(m)
        cx = BarComplex(s.M, s.whole_object, 1, s.f_units).complex
        got[name] = (cx.homology(-1), skein_by_sympy(m), skein_dimension(m))
    ok = all(a == b == c for a, b, c in got.values()) and all(got[k][1] == v for k, v in expected.items())
    ok = ok and len({m.vertices for m in map(models.get, got)} - {("v",)}) >= 1
    return ok, str(got)


def criterion_7():
    failures = [f"{name}: {rep.summary()}" for name, m in SMALL.items()
                if not (rep := compare_leveled(ColoredSystem(m), 3)).ok]
    return not failures, str(failures)


def criterion_8():
    failures = []
    for name, m in {**N2, **N3}.items():
        r = levelization_check(ColoredSystem(m), 2)
        cone = r["cone_homology"]
        if not (r["chain_map"] and all(cone[k] == 0 for k in cone if k <= 2) and set(cone) >= {0, 1, 2}):
            failures.append(f"{name}: chain_map={r['chain_map']} cone={cone}")
    return not failures, str(failures)


def criterion_9():
    failures = []
    for name, m in SMALL.items():
        cs = ColoredSystem(m)
        for row in self_bar_homology(cs, 3, (1, 2)):
            if any(row["homology"].values()):
                failures.append(f"{name}: {row['out']} <- {row['inputs']}: {row['homology']}")
        for row in ball_decomposition(m, 2):
            if not row["positive_equal"]:
                failures.append(f"{name}: ball {row['boundary']} {row['module']} vs {row['operad']}")
    return not failures, str(failures)


def _families(p, objects, limit=4096):
    choices = [list(range(p.size(x))) if isinstance(p, SetOperad) else [{i: 1} for i in range(p.dims[x])]
               for x in objects]
    total = 1
    for ch in choices:
        total *= len(ch)
    if total > limit:
        return []
    return [dict(enumerate(c)) for c in product(*choices)]


def criterion_10():
    operads = {k: v for k, v in fx.corpus().items() if isinstance(v, (SetOperad, LinOperad))}
    violations, premises = [], 0
    for name, p in operads.items():
        o, c = p.base, p.base.cat
        if o.terminals is None:
            continue
        comps = sorted(o.terminals)
        for fam in _families(p, [o.terminals[k] for k in comps]):
            eta = {comps[i]: v for i, v in fam.items()}
            cat = check_unital_cat(p, eta)
            if not (cat["left"] and cat["right"]):
                continue
            premises += 1
            fw_eta = fiberwise_from_cat(p, eta)
            fw = check_unital_fiberwise(p, fw_eta)
            if not (fw["left"] and fw["right"]):
                violations.append(f"{name}: cat {eta} not fiberwise")
            elif isinstance(p, SetOperad):
                ps = check_pseudo_unital(p, pseudo_from_fiberwise(p, fw_eta))
                if not (ps["left"] and ps["right"]):
                    violations.append(f"{name}: fiberwise {fw_eta} not pseudo")
        unital = unitality_report(o)
        if not (unital["left"] and unital["right"]):
            continue
        units = [o.unit_object(t) for t in range(c.n_obj)]
        for fam in _families(p, units):
            fw = check_unital_fiberwise(p, fam)
            if not (fw["left"] and fw["right"]):
                continue
            premises += 1
            cat = check_unital_cat(p, cat_from_fiberwise(p, fam))
            if not (cat["left"] and cat["right"]):
                violations.append(f"{name}: fiberwise {fam} not cat")
    return not violations and premises > 0, f"premises={premises} violations={violations[:3]}"


CRITERIA = [
    (1, "axiom suite and mutations", criterion_1, 10),
    (2, "Grothendieck round trips", criterion_2, 5),
    (3, "classical bar resolution", criterion_3, 5),
    (4, "free module structure", criterion_4, 5),
    (5, "contraction of the completed bar resolution", criterion_5, 60),
    (6, "augmented homology equals the skein module", criterion_6, 120),
    (7, "leveled trees realize the bar resolutions", criterion_7, 120),
    (8, "levelization is a quasi-isomorphism", criterion_8, 180),
    (9, "ball acyclicity and decomposition", criterion_9, 60),
    (10, "unitality ladder", criterion_10, 5),
]


@pytest.mark.parametrize("number,title,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(capsys, number, title, fn, limit):
    t = time.perf_counter()
    ok, detail = fn()
    report(capsys, number, title, ok, time.perf_counter() - t, limit, detail)


if __name__ == "__main__":
    all_ok = True
    for number, title, fn, limit in CRITERIA:
        t = time.perf_counter()
        ok, detail = fn()
        dt = time.perf_counter() - t
        ok = ok and dt < limit
        all_ok &= ok
        print(f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title} ({dt:.2f}s, limit {limit}s)"
              + ("" if ok else f"  {detail}"))
    raise SystemExit(0 if all_ok else 1)
