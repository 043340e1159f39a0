"""One-dimensional blob models: fields are quiver paths on a grid interval [0, N].

A configuration is a tuple of disjoint grid intervals, each interior (0 < i < j < N) or the whole
interval. A decorated configuration carries a vertex label on both endpoints of every blob. Paths are
written in traversal order: (e1, e2) traverses e1 first.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product

from .catmod import (CatModule, ModuleMorphism, OpModule, adjoin_terminal_module, decollage_module,
                     tautological_module, tautological_module_embedding)
from .fincat import FinCategory, adjoin_terminal, poset_category
from .linalg import Echelon, rank, span, vadd
from .opcat import OperadicFunctor, UnaryOpCat, decollage, tautological, tautological_embedding
from .operad import LinOperad, SetOperad, restrict
from .opmodule import PModule, restrict_pmodule
from .report import StructuralError

EMPTY = ((), ())


@dataclass(frozen=True)
class BlobModel:
    N: int
    vertices: tuple
    edges: tuple          # (name, source, target)
    relations: tuple      # each a tuple of (path of edge names, coefficient)
    b: tuple

    def __post_init__(self):
        if self.N < 1:
            raise StructuralError("grid length must be at least 1")
        names = [e[0] for e in self.edges]
        if len(set(names)) != len(names):
            raise StructuralError("duplicate edge names")
        ends = {e[0]: (e[1], e[2]) for e in self.edges}
        for e in self.edges:
            if e[1] not in self.vertices or e[2] not in self.vertices:
                raise StructuralError(f"edge {e[0]!r} has an unknown endpoint")
        if len(self.b) != 2 or any(x not in self.vertices for x in self.b):
            raise StructuralError("boundary condition must be two vertices")
        for rel in self.relations:
            shapes = set()
            for path, _ in rel:
                if not path:
                    raise StructuralError("relations must consist of nonempty paths")
                for a, c in zip(path, path[1:]):
                    if a not in ends or c not in ends or ends[a][1] != ends[c][0]:
                        raise StructuralError(f"relation path {path} is not a path")
                if path[-1] not in ends:
                    raise StructuralError(f"relation path {path} uses an unknown edge")
                shapes.add((len(path), ends[path[0]][0], ends[path[-1]][1]))
            if len(shapes) != 1:
                raise StructuralError("relation is not homogeneous in length and endpoints")

    @classmethod
    def from_dict(cls, d: dict) -> "BlobModel":
        rels = tuple(tuple((tuple(p), Fraction(str(c))) for p, c in r) for r in d.get("relations", []))
        return cls(int(d["N"]), tuple(d["vertices"]), tuple(tuple(e) for e in d["edges"]), rels, tuple(d["b"]))

    @classmethod
    def load(cls, path) -> "BlobModel":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {"kind": "blob_model", "N": self.N, "vertices": list(self.vertices),
                "edges": [list(e) for e in self.edges],
                "relations": [[[list(p), str(c)] for p, c in r] for r in self.relations], "b": list(self.b)}

    def with_N(self, n: int, b=None) -> "BlobModel":
        return BlobModel(n, self.vertices, self.edges, self.relations, tuple(b) if b is not None else self.b)

    @cached_property
    def _edge_index(self) -> dict:
        return {e[0]: i for i, e in enumerate(self.edges)}

    def paths(self, length: int, a, z) -> list[tuple[int, ...]]:
        """Paths as tuples of edge indices, in lexicographic order."""
        return list(self._paths(length, a, z))

    def _paths(self, length, a, z):
        if length == 0:
            if a == z:
                yield ()
            return
        for i, (_, s, t) in enumerate(self.edges):
            if s == a:
                for rest in self._paths(length - 1, t, z):
                    yield (i,) + rest

    def relation_vectors(self):
        """(length, source, target, {path: coeff}) per relation."""
        out = []
        for rel in self.relations:
            v = {}
            for p, c in rel:
                key = tuple(self._edge_index[x] for x in p)
                v[key] = v.get(key, 0) + c
            p0 = rel[0][0]
            out.append((len(p0), self.edges[self._edge_index[p0[0]]][1], self.edges[self._edge_index[p0[-1]]][2], v))
        return out

    def local_relations(self, length: int, a, z) -> list[dict]:
        """Spanning set of U(D; a, z) for a blob of this length: p r q in path coordinates."""
        out = []
        for ell, s, t, v in self.relation_vectors():
            for k in range(length - ell + 1):
                for p in self.paths(k, a, s):
                    for q in self.paths(length - k - ell, t, z):
                        out.append({p + r + q: c for r, c in v.items()})
        return out


def skein_dimension(model: BlobModel) -> int:
    """dim C([0,N]; b) / U([0,N]; b), by direct elimination on path coordinates."""
    basis = model.paths(model.N, *model.b)
    pos = {p: i for i, p in enumerate(basis)}
    rows = [{pos[p]: c for p, c in v.items()} for v in model.local_relations(model.N, *model.b)]
    return len(basis) - rank(rows)


# configurations --------------------------------------------------------------------------------

def blobs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n) for j in range(i + 1, n)] + [(0, n)]


def configurations(n: int) -> list[tuple]:
    inner = [(i, j) for i in range(1, n) for j in range(i + 1, n)]
    out = [((0, n),)]
    for k in range(1, len(inner) + 1):
        for combo in combinations(inner, k):
            s = sorted(combo)
            if all(s[i][1] < s[i + 1][0] for i in range(len(s) - 1)):
                out.append(tuple(s))
    return sorted(out)


def _inside(inner: tuple[int, int], outer: tuple[int, int]) -> bool:
    return inner == outer or (outer[0] < inner[0] and inner[1] < outer[1])


def config_leq(outer: tuple, inner: tuple) -> bool:
    """A morphism outer -> inner: every blob of inner is strictly interior to or equal to a blob of outer."""
    return all(any(_inside(d, e) for e in outer) for d in inner)


def decorated_leq(x, y) -> bool:
    (d1, c1), (d2, c2) = x, y
    if not config_leq(d1, d2):
        return False
    lab1 = dict(zip(d1, c1))
    return all(lab1[d] == c for d, c in zip(d2, c2) if d in lab1)


def points(config: tuple) -> list[int]:
    return sorted({p for blob in config for p in blob})


def labeling(dc) -> dict[int, object]:
    d, c = dc
    out = {}
    for (i, j), (a, z) in zip(d, c):
        out[i] = a
        out[j] = z
    return out


# field spaces ------------------------------------------------------------------------------------

class TensorSpace:
    """Tensor product of factors, each a list of field vectors with pivot fields (reduced echelon form).

    A field maps unit steps [k, k+1] to quiver edges and is stored as a sorted tuple of (k, edge) pairs.
    With no factors this is the ground ring, spanned by the empty field.
    """

    def __init__(self, factors: list[tuple[list[dict], list[tuple]]]):
        self.factors = factors
        self.shape = [len(v) for v, _ in factors]
        self.basis = list(product(*(range(n) for n in self.shape)))
        self.keys = [tuple(sorted(x for (_, piv), i in zip(factors, idx) for x in piv[i])) for idx in self.basis]
        self.pos = {k: i for i, k in enumerate(self.keys)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_fields(self, v: dict) -> dict:
        out: dict = {}
        for k, x in v.items():
            acc = {(): x}
            for (vecs, _), idx in zip(self.factors, self.basis[k]):
                acc = _glue(acc, vecs[idx])
            out = vadd(out, acc)
        return out

    def from_fields(self, w: dict) -> dict:
        out = {}
        for f, x in w.items():
            k = self.pos.get(f)
            if k is not None and x:
                out[k] = x
        if vadd(self.to_fields(out), w, -1):
            raise StructuralError("glued field lies outside the target space")
        return out


def field_factor(model: BlobModel, segments) -> tuple[list[dict], list[tuple]]:
    per = []
    for i, j, a, z in sorted(segments):
        per.append([tuple(zip(range(i, j), p)) for p in model.paths(j - i, a, z)])
    fields = [tuple(x for part in combo for x in part) for combo in product(*per)]
    return [{f: 1} for f in fields], fields


def relation_factor(model: BlobModel, blob, labels) -> tuple[list[dict], list[tuple]]:
    i, j = blob
    paths = model.paths(j - i, *labels)
    pos = {p: k for k, p in enumerate(paths)}
    ech = span({pos[p]: c for p, c in v.items()} for v in model.local_relations(j - i, *labels))
    pivots = sorted(ech.pivots)
    vecs = [{tuple(zip(range(i, j), paths[k])): x for k, x in ech.pivots[pv].items()} for pv in pivots]
    return vecs, [tuple(zip(range(i, j), paths[pv])) for pv in pivots]


def fields_space(model: BlobModel, segments) -> TensorSpace:
    return TensorSpace([field_factor(model, segments)])


def relations_space(model: BlobModel, dc) -> TensorSpace:
    return TensorSpace([relation_factor(model, d, c) for d, c in zip(*dc)])


def operad_space(model: BlobModel, outer, inner) -> TensorSpace:
    """Per outer blob: fields on its complement of the inner blobs it contains, or local relations if none."""
    lab = labeling(outer)
    lab.update(labeling(inner))
    factors = []
    for blob, c in zip(*outer):
        kids = [d for d in inner[0] if _inside(d, blob)]
        if kids:
            factors.append(field_factor(model, region_segments(model, (blob,), tuple(kids), lab, lab)))
        else:
            factors.append(relation_factor(model, blob, c))
    return TensorSpace(factors)


def module_space(model: BlobModel, inner) -> TensorSpace:
    whole = ((0, model.N),)
    lab = {0: model.b[0], model.N: model.b[1]}
    lab.update(labeling(inner))
    return fields_space(model, region_segments(model, whole, inner[0], lab, lab))


def region_segments(model: BlobModel, outer, inner, outer_labels: dict, inner_labels: dict):
    """Segments of (union outer) minus the interiors of inner blobs, with endpoint labels."""
    segs = []
    lab = dict(outer_labels)
    lab.update(inner_labels)
    for blob in outer:
        if blob in inner:
            continue
        cuts = sorted(d for d in inner if _inside(d, blob))
        left = blob[0]
        for d in cuts:
            segs.append((left, d[0], lab[left], lab[d[0]]))
            left = d[1]
        segs.append((left, blob[1], lab[left], lab[blob[1]]))
    return segs


def _glue(u: dict, v: dict) -> dict:
    """Bilinear union of fields on disjoint regions."""
    out: dict = {}
    for f, x in u.items():
        for g, y in v.items():
            h = tuple(sorted(f + g))
            out[h] = out.get(h, 0) + x * y
    return {k: x for k, x in out.items() if x}


def glue(src_a, a: dict, src_b, b: dict, tgt) -> dict:
    return tgt.from_fields(_glue(src_a.to_fields(a), src_b.to_fields(b)))


# the full system -----------------------------------------------------------------------------------

def pair_of(label):
    """Outer and inner decorated configurations of a morphism label of the decorated category with terminal."""
    if label[0] == "!":
        return label[1], EMPTY
    return label[0], label[1]


class BlobSystem:
    """All categories, operads and modules attached to a model."""

    def __init__(self, model: BlobModel):
        self.model = model
        n = model.N
        self.configs = configurations(n)
        self.whole = ((0, n),)
        verts = model.vertices
        dec = []
        for d in self.configs:
            for c in product(product(verts, repeat=2), repeat=len(d)):
                dec.append((d, tuple(c)))
        self.decorated = dec

    # undecorated categories
    @cached_property
    def blob(self) -> FinCategory:
        return poset_category(self.configs, config_leq)

    @cached_property
    def ublob(self) -> FinCategory:
        return adjoin_terminal(self.blob, ())

    @cached_property
    def Blob(self) -> UnaryOpCat:
        return tautological(self.blob)

    @cached_property
    def Blobbar(self) -> UnaryOpCat:
        return decollage(self.ublob)

    # decorated categories
    @cached_property
    def blobC(self) -> FinCategory:
        return poset_category(self.decorated, decorated_leq)

    @cached_property
    def _embedding(self) -> tuple[OperadicFunctor, UnaryOpCat]:
        return tautological_embedding(self.blobC, EMPTY)

    @cached_property
    def ublobC(self) -> FinCategory:
        return adjoin_terminal(self.blobC, EMPTY)

    @cached_property
    def BlobC(self) -> UnaryOpCat:
        return self._embedding[0].src

    @cached_property
    def BlobbarC(self) -> UnaryOpCat:
        return self._embedding[1]

    @property
    def iota(self) -> OperadicFunctor:
        return self._embedding[0]

    def categories(self) -> dict:
        return {"blob": self.blob, "ublob": self.ublob, "Blob": self.Blob, "Blobbar": self.Blobbar,
                "blob(C)": self.blobC, "ublob(C)": self.ublobC, "Blob(C)": self.BlobC, "Blobbar(C)": self.BlobbarC}

    # modules of arrows from the whole interval
    def allowed(self, dc) -> bool:
        d, c = dc
        if d == self.whole:
            return c == (tuple(self.model.b),)
        return True

    @cached_property
    def mC(self) -> CatModule:
        base = self.blobC
        targets = [x for x in range(base.n_obj) if self.allowed(base.obj[x])]
        arr = {t: i for i, t in enumerate(targets)}
        arrows = [(("M", base.obj[t]), 0, t) for t in targets]
        return CatModule.build(base, [("M", tuple(self.model.b))], arrows, lambda g, a: arr[base.cod[g]])

    @cached_property
    def mbarC(self) -> CatModule:
        return adjoin_terminal_module(self.mC, self.ublobC)

    @cached_property
    def _module_embedding(self) -> tuple[ModuleMorphism, OpModule]:
        return tautological_module_embedding(self.blobC, self.mC, self.iota, EMPTY)

    @property
    def MC(self) -> OpModule:
        return self._module_embedding[0].src

    @property
    def MbarC(self) -> OpModule:
        return self._module_embedding[1]

    @property
    def iota_j(self) -> ModuleMorphism:
        return self._module_embedding[0]

    # geometry of objects
    def fbar_space(self, x: int):
        outer, inner = pair_of(self.BlobbarC.cat.obj[x])
        return operad_space(self.model, outer, inner)

    def mbar_target(self, x: int):
        lab = self.MbarC.mod.obj[x]
        return EMPTY if lab[0] == "!" else lab[1]

    def mbar_space(self, x: int) -> TensorSpace:
        return module_space(self.model, self.mbar_target(x))

    @cached_property
    def Fbar(self) -> LinOperad:
        o = self.BlobbarC
        c = o.cat
        spaces = [self.fbar_space(x) for x in range(c.n_obj)]
        gamma = {}
        for f in range(c.n_mor):
            a, b, t = spaces[o.fiber[f]], spaces[c.cod[f]], spaces[c.dom[f]]
            gamma[f] = {(i, j): glue(a, {i: 1}, b, {j: 1}, t) for i in range(a.dim) for j in range(b.dim)}
        self._fspaces = spaces
        names = [[str(k) for k in range(s.dim)] for s in spaces]
        return LinOperad(o, [s.dim for s in spaces], gamma, names=names)

    @cached_property
    def fbar_units(self) -> dict[int, dict]:
        """Fiberwise units: the degenerate field (or 1 in the ground ring) on every U_T."""
        o = self.BlobbarC
        out = {}
        for t in range(o.cat.n_obj):
            u = o.unit_object(t)
            if self.Fbar.dims[u] != 1:
                raise StructuralError("unit object does not have rank one")
            out[t] = {0: 1}
        return out

    @cached_property
    def Mbar(self) -> PModule:
        om = self.MbarC
        m = om.mod
        fb = self.Fbar
        fsp = self._fspaces
        msp = [self.mbar_space(x) for x in range(m.n_obj)]
        nu = {}
        for a in range(m.n_arr):
            g, t, s = msp[om.fiber[a]], fsp[m.tgt[a]], msp[m.src[a]]
            nu[a] = {(i, j): glue(g, {i: 1}, t, {j: 1}, s) for i in range(g.dim) for j in range(t.dim)}
        self._mspaces = msp
        return PModule(fb, om, [s.dim for s in msp], nu)

    @cached_property
    def F(self) -> LinOperad:
        return restrict(self.Fbar, self.iota)

    @cached_property
    def f_units(self) -> dict[int, dict]:
        return {t: self.fbar_units[self.iota.obj_map[t]] for t in range(self.BlobC.cat.n_obj)}

    @cached_property
    def M(self) -> PModule:
        self.Mbar
        return restrict_pmodule(self.Mbar, self.iota_j)

    @property
    def upsilon(self) -> int:
        """(whole; b) -> empty, as a module object of the decollage module."""
        m = self.MbarC.mod
        return m.oid[("!", ("M", tuple(self.model.b)))]

    @property
    def whole_object(self) -> int:
        return self.MC.mod.oid[("ob", ("M", tuple(self.model.b)))]

    # the partial Set operad of boundary labelings
    def _blob_pair(self, x: int):
        lab = self.Blob.cat.obj[x]
        if lab[0] == "ob":
            return lab[1], ()
        outer, inner = lab[1]
        return outer, inner

    @cached_property
    def S(self) -> SetOperad:
        o = self.Blob
        c = o.cat
        verts = self.model.vertices
        carriers = []
        for x in range(c.n_obj):
            outer, inner = self._blob_pair(x)
            pts = sorted(set(points(outer)) | set(points(inner)))
            carriers.append([tuple(zip(pts, v)) for v in product(verts, repeat=len(pts))])
        pos = [{lab: i for i, lab in enumerate(cs)} for cs in carriers]
        gamma = {}
        for f in range(c.n_mor):
            fib, src, tgt = o.fiber[f], c.dom[f], c.cod[f]
            mid = set(points(self._blob_pair(fib)[1]))
            outer_pts = set(points(self._blob_pair(src)[0]))
            inner_pts = set(points(self._blob_pair(src)[1]))
            table = {}
            for i, xl in enumerate(carriers[fib]):
                xd = dict(xl)
                for j, yl in enumerate(carriers[tgt]):
                    yd = dict(yl)
                    if all(xd[p] == yd[p] for p in mid):
                        z = {p: xd[p] for p in outer_pts}
                        z.update({p: yd[p] for p in inner_pts})
                        table[(i, j)] = pos[src][tuple(sorted(z.items()))]
            gamma[f] = table
        return SetOperad(o, carriers, gamma, partial=True)

    @cached_property
    def S_units(self) -> dict[tuple[int, int], int]:
        """e_t: the restriction of t to the outer boundary."""
        o, s = self.Blob, self.S
        out = {}
        for t in range(o.cat.n_obj):
            u = o.unit_object(t)
            for i, lab in enumerate(s.labels[t]):
                keep = set(points(self._blob_pair(u)[0]))
                out[(t, i)] = s.labels[u].index(tuple((p, v) for p, v in lab if p in keep))
        return out

    def S_domains(self) -> dict[int, set]:
        """The claimed lift domains: pairs agreeing on the middle boundary, as Blob(C) object indices."""
        return {f: {(a, b) for (a, b) in tab} for f, tab in self.S.gamma.items()}

    def decorate(self, x: int, lab: tuple) -> int:
        """Object of Blob(C) for an object of Blob and a boundary labeling."""
        d = dict(lab)
        outer, inner = self._blob_pair(x)
        dec = lambda conf: (conf, tuple((d[i], d[j]) for i, j in conf))
        tc = self.BlobC.cat
        if self.Blob.cat.obj[x][0] == "ob":
            return tc.oid[("ob", dec(outer))]
        return tc.oid[("arr", (dec(outer), dec(inner)))]

    @cached_property
    def forget(self) -> OperadicFunctor:
        """Blob(C) -> Blob forgetting the decorations."""
        tc, bc = self.BlobC.cat, self.Blob.cat
        obj_map = []
        for lab in tc.obj:
            if lab[0] == "ob":
                obj_map.append(bc.oid[("ob", lab[1][0])])
            else:
                (o1, _), (i1, _) = lab[1]
                obj_map.append(bc.oid[("arr", (o1, i1))])
        mor_map = []
        for m in range(tc.n_mor):
            cand = bc.hom[(obj_map[tc.dom[m]], obj_map[tc.cod[m]])]
            if len(cand) != 1:
                raise StructuralError("undecorated hom-set is not a singleton")
            mor_map.append(cand[0])
        return OperadicFunctor(self.BlobC, self.Blob, obj_map, mor_map)

    def grothendieck_comparison(self):
        """The functor from the Grothendieck construction of S to Blob(C), matched on (dom, cod)."""
        from .groth import grothendieck
        g = grothendieck(self.S, ("pseudo", self.S_units))
        tc = self.BlobC.cat
        obj_map = [self.decorate(t, self.S.labels[t][i]) for t, i in g.tags]
        mor_map = []
        for m in range(g.total.cat.n_mor):
            cand = tc.hom.get((obj_map[g.total.cat.dom[m]], obj_map[g.total.cat.cod[m]]), [])
            if len(cand) != 1:
                raise StructuralError("decorated hom-set is not a singleton")
            mor_map.append(cand[0])
        return g, OperadicFunctor(g.total, self.BlobC, obj_map, mor_map)

    def local_relation_dim(self, blob_dc) -> int:
        return relations_space(self.model, blob_dc).dim

    def check_ideal_property(self) -> bool:
        """Glueing a relation on an inner blob with any field around it lands in the relations of the outer blob."""
        m = self.model
        verts = m.vertices
        for outer in blobs(m.N):
            for inner in blobs(m.N):
                if inner == outer or not _inside(inner, outer):
                    continue
                for a, z, p, q in product(verts, repeat=4):
                    u = relations_space(m, ((inner,), ((p, q),)))
                    collar = fields_space(m, region_segments(m, (outer,), (inner,), {outer[0]: a, outer[1]: z},
                                                             {inner[0]: p, inner[1]: q}))
                    target = relations_space(m, ((outer,), ((a, z),)))
                    for i in range(collar.dim):
                        for j in range(u.dim):
                            glue(collar, {i: 1}, u, {j: 1}, target)
        return True


def standard_models() -> dict[str, BlobModel]:
    one = ("v",)
    loop = (("x", "v", "v"),)
    sq = ((((("x", "x"), Fraction(1)),),))
    two_v = ("u", "w")
    two_e = (("e", "u", "w"), ("f", "w", "u"))
    fe = ((((("e", "f"), Fraction(1)),),))
    xy = (("x", "v", "v"), ("y", "v", "v"))
    comm = ((((("x", "y"), Fraction(1)), (("y", "x"), Fraction(-1))),))
    return {
        "loop-x2-N2": BlobModel(2, one, loop, sq, ("v", "v")),
        "loop-x2-N3": BlobModel(3, one, loop, sq, ("v", "v")),
        "loop-free-N2": BlobModel(2, one, loop, (), ("v", "v")),
        "loop-free-N3": BlobModel(3, one, loop, (), ("v", "v")),
        "two-vertex-fe-N2": BlobModel(2, two_v, two_e, fe, ("u", "u")),
        "two-vertex-fe-N3": BlobModel(3, two_v, two_e, fe, ("u", "w")),
        "commuting-xy-N3": BlobModel(3, one, xy, comm, ("v", "v")),
    }
