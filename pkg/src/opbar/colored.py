"""Colored operad of fields and local relations, leveled trees, forest bar complexes and the blob complex.

A color is (blob, (a, z)): an interval of [0, N] with boundary labels.  The colored operad F_c has
F_c(K; D) = fields on D minus the blobs of K, or local relations on D when K is empty; the module M_c
has M_c(K) = fields on [0, N] minus K with the global boundary b.  Composition is gluing of fields.
"""
from __future__ import annotations

import random
from functools import cached_property
from itertools import product
from math import prod
from typing import Sequence

from .bar import BarComplex, induced_map
from .blob import (BlobModel, BlobSystem, TensorSpace, _glue, _inside, blobs, configurations, module_space,
                   operad_space)
from .chain import ChainComplex, ChainMap, mapping_cone
from .linalg import Quotient, SMat, span, vadd
from .report import Report, StructuralError

MAX_FOREST_DIM = 100_000


def dc_of(colors: Sequence) -> tuple:
    return tuple(c[0] for c in colors), tuple(c[1] for c in colors)


def glue_many(parts, tgt: TensorSpace) -> dict:
    acc = {(): 1}
    for sp, v in parts:
        acc = _glue(acc, sp.to_fields(v))
    return tgt.from_fields(acc)


def perm_sign(src: Sequence, tgt: Sequence) -> int:
    """Sign of the permutation taking the list src to the list tgt."""
    pos = {x: i for i, x in enumerate(tgt)}
    p = [pos[x] for x in src]
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, n = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            n += 1
        if n % 2 == 0:
            sign = -sign
    return sign


class ColoredSystem:
    def __init__(self, model: BlobModel):
        self.model = model
        self.N = model.N
        labs = list(product(model.vertices, repeat=2))
        self.colors = [(d, c) for d in blobs(self.N) for c in labs]
        self.whole = ((0, self.N), tuple(model.b))
        self._op: dict = {}
        self._mod: dict = {}
        inner_configs = [k for k in configurations(self.N) if k != ((0, self.N),)]
        self._dec_inner = [tuple(zip(k, c)) for k in inner_configs for c in product(labs, repeat=len(k))]

    # spaces
    def op_space(self, inputs: tuple, out) -> TensorSpace:
        key = (inputs, out)
        if key not in self._op:
            self._op[key] = operad_space(self.model, dc_of((out,)), dc_of(inputs))
        return self._op[key]

    def mod_space(self, inputs: tuple) -> TensorSpace:
        if inputs not in self._mod:
            self._mod[inputs] = module_space(self.model, dc_of(inputs))
        return self._mod[inputs]

    def unit(self, color) -> dict:
        return {0: 1}

    @cached_property
    def _strict(self) -> dict:
        out = {}
        for col in self.colors:
            d = col[0]
            out[col] = [()] + [k for k in self._dec_inner
                               if all(_inside(e[0], d) and e[0] != d for e in k)]
        return out

    def strict_children(self, color) -> list[tuple]:
        """Configurations strictly inside the color, the empty one included."""
        return self._strict[color]

    def inputs_of(self, color) -> list[tuple]:
        return self.strict_children(color) + [(color,)]

    def module_inputs(self) -> list[tuple]:
        return [()] + self._dec_inner + [(self.whole,)]

    def valid_inputs(self, inputs: tuple, out) -> bool:
        if inputs == (out,):
            return True
        return all(_inside(e[0], out[0]) and e[0] != out[0] for e in inputs)

    # validation
    def validate(self, samples: int = 300, seed: int = 0) -> Report:
        """Units exhaustively, closure of all partial compositions on basis elements, sampled associativity."""
        rep = Report("colored operad")
        for out in self.colors:
            for k in self.inputs_of(out):
                sp = self.op_space(k, out)
                for x in range(sp.dim):
                    e = {x: 1}
                    left = glue_many([(self.op_space((out,), out), self.unit(out)), (sp, e)], sp)
                    right = glue_many([(sp, e)] + [(self.op_space((c,), c), self.unit(c)) for c in k], sp)
                    rep.check(left == e and right == e, "unit", lambda: f"{out} {k} {x}")
        triples = []
        for out in self.colors:
            for k in self.strict_children(out):
                for j, col in enumerate(k):
                    for sub in self.strict_children(col):
                        triples.append((out, k, j, sub))
        for out, k, j, sub in triples:
            a, b = self.op_space(k, out), self.op_space(sub, k[j])
            new = k[:j] + sub + k[j + 1:]
            t = self.op_space(new, out)
            for x in range(a.dim):
                for y in range(b.dim):
                    try:
                        glue_many([(a, {x: 1}), (b, {y: 1})], t)
                        rep.check(True, "closure", "")
                    except StructuralError:
                        rep.fail("closure", f"{out} {k} o_{j} {sub}")
        rng = random.Random(seed)
        for _ in range(min(samples, len(triples))):
            out, k, j, sub = rng.choice(triples)
            joins = [(i, s) for i, s in enumerate(sub) if self.strict_children(s)[1:]]
            if not joins:
                continue
            i, s = rng.choice(joins)
            sub2 = rng.choice(self.strict_children(s)[1:])
            a, b, c = self.op_space(k, out), self.op_space(sub, k[j]), self.op_space(sub2, s)
            x, y, z = (rng.randrange(sp.dim) if sp.dim else None for sp in (a, b, c))
            if None in (x, y, z):
                continue
            mid = sub[:i] + sub2 + sub[i + 1:]
            bc = glue_many([(b, {y: 1}), (c, {z: 1})], self.op_space(mid, k[j]))
            first = self.op_space(k[:j] + sub + k[j + 1:], out)
            ab = glue_many([(a, {x: 1}), (b, {y: 1})], first)
            full = self.op_space(k[:j] + mid + k[j + 1:], out)
            lhs = glue_many([(first, ab), (c, {z: 1})], full)
            rhs = glue_many([(a, {x: 1}), (self.op_space(mid, k[j]), bc)], full)
            rep.check(lhs == rhs, "associativity", lambda: f"{out} {k} {sub} {sub2}")
        return rep


# leveled trees ----------------------------------------------------------------------------------------

class LeveledBar:
    """Constant leveled trees D^0 < D^1 < ... < D^n < [0, N] with vertices decorated by F_c and the root by M_c.

    Faces compose adjacent levels vertex by vertex (d_0 at the top), degeneracies insert a level of units.
    """

    def __init__(self, cs: ColoredSystem, top: int):
        self.cs, self.top = cs, top
        self.shapes: list[list[tuple]] = []
        self.offsets: list[dict] = []
        self.dims: list[int] = []
        roots = [k for k in cs.module_inputs() if k]
        level = [(k,) for k in roots]
        for n in range(top + 1):
            if n:
                level = [(below,) + s for s in level for below in self._below(s[0])]
            shapes = sorted(s for s in level if self.size(s))
            off, table = 0, {}
            for s in shapes:
                table[s] = off
                off += self.size(s)
            self.shapes.append(shapes)
            self.offsets.append(table)
            self.dims.append(off)
        self.complex = self._build()

    def _below(self, config: tuple) -> list[tuple]:
        choices = [self.cs.inputs_of(c) for c in config]
        out = []
        for combo in product(*choices):
            flat = tuple(x for part in combo for x in part)
            if flat:
                out.append(flat)
        return out

    def kids(self, upper_config, lower_config, i) -> tuple:
        d = upper_config[i][0]
        return tuple(c for c in lower_config if _inside(c[0], d))

    def vertex_spaces(self, shape: tuple) -> list[TensorSpace]:
        cs = self.cs
        sp = [cs.op_space((), c) for c in shape[0]]
        for k in range(1, len(shape)):
            for i, c in enumerate(shape[k]):
                sp.append(cs.op_space(self.kids(shape[k], shape[k - 1], i), c))
        sp.append(cs.mod_space(shape[-1]))
        return sp

    def size(self, shape) -> int:
        return prod(s.dim for s in self.vertex_spaces(shape))

    def encode(self, n: int, shape, elem: tuple) -> int:
        i = 0
        for x, sp in zip(elem, self.vertex_spaces(shape)):
            i = i * sp.dim + x
        return self.offsets[n][shape] + i

    def elements(self, n: int):
        for shape in self.shapes[n]:
            spaces = self.vertex_spaces(shape)
            for elem in product(*(range(s.dim) for s in spaces)):
                yield shape, elem

    def _split(self, shape, elem):
        """Per-level lists of decorations, the root last."""
        out, pos = [], 0
        for lvl in shape:
            out.append(list(elem[pos:pos + len(lvl)]))
            pos += len(lvl)
        out.append([elem[pos]])
        return out

    def _join(self, levels) -> tuple:
        return tuple(x for lvl in levels for x in lvl)

    def _expand(self, n, shape, parts) -> dict:
        """parts: per-vertex vectors; returns the vector in degree n."""
        out = {}
        for combo in product(*(list(v.items()) for v in parts)):
            coeff = 1
            for _, x in combo:
                coeff *= x
            k = self.encode(n, shape, tuple(i for i, _ in combo))
            out[k] = out.get(k, 0) + coeff
        return {k: x for k, x in out.items() if x}

    def face(self, n: int, i: int, shape, elem) -> dict:
        cs = self.cs
        lv = self._split(shape, elem)
        sp = self.vertex_spaces(shape)
        spl = self._split(shape, tuple(range(len(sp))))
        space = lambda k, j: sp[spl[k][j]]
        vec = lambda k, j: {lv[k][j]: 1}
        if n == 0:
            root = (space(1, 0), vec(1, 0))
            return glue_many([root] + [(space(0, j), vec(0, j)) for j in range(len(shape[0]))], cs.mod_space(()))
        if i < n:
            upper, lower = shape[i + 1], shape[i]
            new_shape = shape[:i] + shape[i + 1:]
            merged = []
            for j, c in enumerate(upper):
                kid_idx = [q for q, e in enumerate(lower) if _inside(e[0], c[0])]
                if i == 0:
                    tgt = cs.op_space((), c)
                else:
                    tgt = cs.op_space(self.kids(upper, shape[i - 1], j), c)
                merged.append(glue_many([(space(i + 1, j), vec(i + 1, j))] +
                                        [(space(i, q), vec(i, q)) for q in kid_idx], tgt))
            parts = [vec(k, j) for k in range(i) for j in range(len(shape[k]))] + merged
            parts += [vec(k, j) for k in range(i + 2, len(lv)) for j in range(len(lv[k]))]
            return self._expand(n - 1, new_shape, parts)
        new_shape = shape[:-1]
        root = glue_many([(space(n + 1, 0), vec(n + 1, 0))] + [(space(n, q), vec(n, q)) for q in range(len(shape[n]))],
                         cs.mod_space(shape[n - 1]))
        parts = [vec(k, j) for k in range(n) for j in range(len(shape[k]))] + [root]
        return self._expand(n - 1, new_shape, parts)

    def degeneracy_column(self, n: int, j: int, shape, elem) -> dict:
        lv = self._split(shape, elem)
        new_shape = shape[:j + 1] + (shape[j],) + shape[j + 1:]
        levels = lv[:j + 1] + [[0] * len(shape[j])] + lv[j + 1:]
        return {self.encode(n + 1, new_shape, self._join(levels)): 1}

    def degeneracy(self, n: int, j: int) -> SMat:
        return SMat.from_columns(self.dims[n + 1], [self.degeneracy_column(n, j, s, e) for s, e in self.elements(n)])

    def _build(self) -> ChainComplex:
        d = {}
        for n in range(1, self.top + 1):
            cols = []
            for shape, elem in self.elements(n):
                col: dict = {}
                for i in range(n + 1):
                    col = vadd(col, self.face(n, i, shape, elem), -1 if i % 2 else 1)
                cols.append(col)
            d[n] = SMat.from_columns(self.dims[n - 1], cols)
        aug = SMat.from_columns(self.cs.mod_space(()).dim, [self.face(0, 0, s, e) for s, e in self.elements(0)])
        return ChainComplex(self.dims, d, aug)

    def normalized(self) -> tuple[ChainComplex, list[Quotient]]:
        quots = []
        for n in range(self.top + 1):
            sub = []
            for j in range(n):
                sub.extend(self.degeneracy(n - 1, j).columns())
            quots.append(Quotient(self.dims[n], sub))
        d = {n: quots[n - 1].projection() @ self.complex.d[n] @ quots[n].section() for n in range(1, self.top + 1)}
        return ChainComplex([q.qdim for q in quots], d, self.complex.aug @ quots[0].section()), quots


def beta_bijection(lb: LeveledBar, s: BlobSystem, bc: BarComplex) -> dict[int, SMat]:
    """Match leveled trees with towers of the simplicial bar construction through the fields they carry."""
    model = lb.cs.model
    obj = {x: i for i, x in enumerate(s.blobC.obj)}
    cat, mc = s.blobC, s.mC
    to_arrow = {mc.tgt[a]: a for a in mc.out[0]}
    out = {}
    for n in range(lb.top + 1):
        cols = []
        for shape in lb.shapes[n]:
            xs = [obj[dc_of(lvl)] for lvl in shape]
            fs = [cat.hom[(xs[k], xs[k - 1])][0] for k in range(1, n + 1)]
            tw = bc.tower(n, fs, to_arrow[xs[-1]])
            bspaces = [operad_space(model, dc_of(shape[0]), ((), ()))]
            bspaces += [operad_space(model, dc_of(shape[k]), dc_of(shape[k - 1])) for k in range(1, n + 1)]
            bspaces.append(module_space(model, dc_of(shape[-1])))
            if tuple(b.dim for b in bspaces) != tw.factors:
                raise StructuralError(f"factor dimensions differ for {shape}")
            vs = lb.vertex_spaces(shape)
            for elem in product(*(range(v.dim) for v in vs)):
                lv = lb._split(shape, elem)
                sl = lb._split(shape, tuple(range(len(vs))))
                idx = []
                for k, b in enumerate(bspaces):
                    key = tuple(sorted(f for j, i in zip(sl[k], lv[k]) for f in vs[j].keys[i]))
                    idx.append(b.pos[key])
                cols.append({tw.encode(tuple(idx)): 1})
        out[n] = SMat.from_columns(bc.dims[n], cols)
    return out


def compare_leveled(cs: ColoredSystem, top: int = 3) -> Report:
    """Leveled trees against the simplicial bar construction: same dims, differentials, augmentation, degeneracies."""
    rep = Report("leveled trees vs simplicial bar")
    s = BlobSystem(cs.model)
    bc = BarComplex(s.M, s.whole_object, top, s.f_units)
    lb = LeveledBar(cs, top)
    rep.check(lb.dims == bc.dims, "dims", f"{lb.dims} vs {bc.dims}")
    if not rep.ok:
        return rep
    p = beta_bijection(lb, s, bc)
    for n in range(top + 1):
        rep.check(sorted(k for c in p[n].columns() for k in c) == list(range(bc.dims[n])), "bijection", f"degree {n}")
    for n in range(1, top + 1):
        rep.check(bc.complex.d[n] @ p[n] == p[n - 1] @ lb.complex.d[n], "differential", f"degree {n}")
    rep.check(bc.complex.aug @ p[0] == lb.complex.aug, "augmentation", "degree 0")
    _, qs = bc.normalized()
    lq = lb.normalized()[1]
    for n in range(1, top + 1):
        ours = [p[n].apply(v) for j in range(n) for v in lb.degeneracy(n - 1, j).columns()]
        theirs = span(v for j in range(n) for v in bc.degeneracy(n - 1, j).columns())
        ech = span(ours)
        rep.check(ech.dim == theirs.dim and all(v in theirs for v in ours), "degenerate span", f"degree {n}")
        rep.check(lq[n].qdim == qs[n].qdim, "normalized dims", f"degree {n}")
    return rep


# forests ---------------------------------------------------------------------------------------------

class ForestBar:
    """The two-sided bar construction B(L, F_c, R) at given global inputs, as a complex of decorated forests.

    L is "M" (the module M_c) or "F" (F_c with output color `out`); R is "F" (F_c) or "I" (identities).
    A forest is a soil vertex, a forest of forks (each of degree 1, decorated off the diagonal of F_c) and,
    for R = "F", twigs decorated by F_c holding the global inputs.  Nodes are (kind, color, children) with
    kind "S", "F", "R" or "I"; twig children are their global inputs.
    """

    def __init__(self, cs: ColoredSystem, L: str, R: str, inputs: tuple = (), out=None, top: int = 2,
                 min_r: bool = False, order: str = "preorder"):
        if L not in ("M", "F") or R not in ("F", "I"):
            raise StructuralError("L must be M or F and R must be F or I")
        if L == "F" and out is None:
            raise StructuralError("L = F needs an output color")
        self.cs, self.L, self.R, self.inputs, self.out, self.top = cs, L, R, tuple(inputs), out, top
        self.min_r, self.order = min_r, order
        self._memo: dict = {}
        shapes = [[] for _ in range(top + 1)]
        for tree, deg in self._roots():
            if min_r and not self.n_twigs(tree):
                continue
            if self.size(tree):
                shapes[deg].append(tree)
        self.shapes = [sorted(x) for x in shapes]
        self.offsets, self.dims = [], []
        for lvl in self.shapes:
            off, tab = 0, {}
            for t in lvl:
                tab[t] = off
                off += self.size(t)
            if off > MAX_FOREST_DIM:
                raise StructuralError(f"forest degree has dimension {off}, above the limit {MAX_FOREST_DIM}")
            self.offsets.append(tab)
            self.dims.append(off)
        self.complex = self._build()

    # enumeration
    def _assign(self, avail: tuple, kids: tuple):
        parts = [[] for _ in kids]
        for a in avail:
            hits = [i for i, k in enumerate(kids) if _inside(a[0], k[0])]
            if len(hits) != 1:
                return None
            parts[hits[0]].append(a)
        return [tuple(p) for p in parts]

    def _combine(self, kids: tuple, avail: tuple, budget: int):
        parts = self._assign(avail, kids)
        if parts is None:
            return []
        options = [self._sub(k, p, budget) for k, p in zip(kids, parts)]
        out = []
        for combo in product(*options):
            deg = sum(d for _, d in combo)
            if deg <= budget:
                out.append((tuple(t for t, _ in combo), deg))
        return out

    def _sub(self, color, avail: tuple, budget: int):
        key = (color, avail, budget)
        if key in self._memo:
            return self._memo[key]
        res = []
        if self.R == "F" and self.cs.valid_inputs(avail, color):
            res.append((("R", color, avail), 0))
        if self.R == "I" and avail == (color,):
            res.append((("I", color, ()), 0))
        if budget >= 1:
            for kids in self.cs.strict_children(color):
                if not kids and avail:
                    continue
                for ch, deg in self._combine(kids, avail, budget - 1):
                    res.append((("F", color, ch), deg + 1))
        self._memo[key] = res
        return res

    def _roots(self):
        cs = self.cs
        ks = cs.module_inputs() if self.L == "M" else cs.inputs_of(self.out)
        for kids in ks:
            if not kids and self.inputs:
                continue
            for ch, deg in self._combine(kids, self.inputs, self.top):
                yield ("S", self.out, ch), deg

    # structure
    @staticmethod
    def nodes(tree):
        """Decorated vertices in preorder."""
        out = []

        def walk(t):
            if t[0] != "I":
                out.append(t)
            if t[0] in ("S", "F"):
                for c in t[2]:
                    walk(c)

        walk(tree)
        return out

    def n_twigs(self, tree) -> int:
        return sum(1 for t in self.nodes(tree) if t[0] == "R")

    def space(self, node) -> TensorSpace:
        cs = self.cs
        if node[0] == "S":
            colors = tuple(c[1] for c in node[2])
            return cs.mod_space(colors) if self.L == "M" else cs.op_space(colors, self.out)
        if node[0] == "F":
            return cs.op_space(tuple(c[1] for c in node[2]), node[1])
        return cs.op_space(node[2], node[1])

    def size(self, tree) -> int:
        return prod(self.space(t).dim for t in self.nodes(tree))

    def encode(self, deg: int, tree, elem) -> int:
        i = 0
        for x, t in zip(elem, self.nodes(tree)):
            i = i * self.space(t).dim + x
        return self.offsets[deg][tree] + i

    def elements(self, deg: int):
        for tree in self.shapes[deg]:
            for elem in product(*(range(self.space(t).dim) for t in self.nodes(tree))):
                yield tree, elem

    # signs and contractions
    @staticmethod
    def annotate(tree):
        """Attach preorder ids to all nodes: (kind, color, children, id)."""
        counter = [0]

        def walk(t):
            i = counter[0]
            counter[0] += 1
            if t[0] in ("S", "F"):
                return (t[0], t[1], tuple(walk(c) for c in t[2]), i)
            return (t[0], t[1], t[2], i)

        return walk(tree)

    @staticmethod
    def strip(t):
        if t[0] in ("S", "F"):
            return (t[0], t[1], tuple(ForestBar.strip(c) for c in t[2]))
        return (t[0], t[1], t[2])

    def fork_order(self, atree) -> list[int]:
        if self.order == "preorder":
            out = []

            def walk(t):
                if t[0] == "F":
                    out.append(t[3])
                if t[0] in ("S", "F"):
                    for c in t[2]:
                        walk(c)

            walk(atree)
            return out
        if self.order == "bfs":
            out, layer = [], [atree]
            while layer:
                nxt = []
                for t in layer:
                    if t[0] == "F":
                        out.append(t[3])
                    if t[0] in ("S", "F"):
                        nxt.extend(t[2])
                layer = nxt
            return out
        raise StructuralError(f"unknown order {self.order}")

    def contractions(self, tree):
        """Yield (sign, new annotated tree, groups {new id: [old ids]}) for every term of the differential."""
        at = self.annotate(tree)
        order = self.fork_order(at)
        k = len(order)
        pos = {v: i + 1 for i, v in enumerate(order)}
        base = (-1) ** (k - 1)

        def replace(t, target_id, new):
            if t[3] == target_id:
                return new
            if t[0] in ("S", "F"):
                return (t[0], t[1], tuple(replace(c, target_id, new) for c in t[2]), t[3])
            return t

        def finish(sign, new_tree, groups, removed):
            derived = [v for v in order if v not in removed]
            sign *= perm_sign(derived, self.fork_order(new_tree))
            return base * sign, new_tree, groups

        def visit(t):
            if t[0] not in ("S", "F"):
                return
            for j, c in enumerate(t[2]):
                if c[0] == "F":
                    merged = (t[0], t[1], t[2][:j] + c[2] + t[2][j + 1:], t[3])
                    if t[0] == "S":
                        sign = -((-1) ** (pos[c[3]] - 1))
                    else:
                        sign = (-1) ** pos[c[3]]
                    yield finish(sign, replace(at, t[3], merged), {t[3]: [t[3], c[3]]}, {c[3]})
            if t[0] == "F" and self.R == "F" and all(c[0] == "R" for c in t[2]):
                ins = tuple(x for c in t[2] for x in c[2])
                twig = ("R", t[1], ins, t[3])
                sign = (-1) ** (pos[t[3]] - 1)
                yield finish(sign, replace(at, t[3], twig), {t[3]: [t[3]] + [c[3] for c in t[2]]}, {t[3]})
            for c in t[2]:
                yield from visit(c)

        yield from visit(at)

    def _differential_column(self, deg: int, tree, elem) -> dict:
        at = self.annotate(tree)
        old = {t[3]: (t, x) for t, x in zip(self.annotate_nodes(at), elem)}
        col: dict = {}
        for sign, new_at, groups in self.contractions(tree):
            new_tree = self.strip(new_at)
            if new_tree not in self.offsets[deg - 1]:
                continue
            parts = []
            for t in self.annotate_nodes(new_at):
                if t[3] in groups:
                    srcs = [(self.space(self.strip(old[i][0])), {old[i][1]: 1}) for i in groups[t[3]]]
                    parts.append(glue_many(srcs, self.space(self.strip(t))))
                else:
                    parts.append({old[t[3]][1]: 1})
            for combo in product(*(list(v.items()) for v in parts)):
                c = sign
                for _, x in combo:
                    c *= x
                idx = self.encode(deg - 1, new_tree, tuple(i for i, _ in combo))
                col[idx] = col.get(idx, 0) + c
        return {i: x for i, x in col.items() if x}

    @staticmethod
    def annotate_nodes(at):
        out = []

        def walk(t):
            if t[0] != "I":
                out.append(t)
            if t[0] in ("S", "F"):
                for c in t[2]:
                    walk(c)

        walk(at)
        return out

    def augmentation_column(self, tree, elem) -> dict | None:
        """Total composition of a degree-0 forest."""
        cs = self.cs
        nodes = self.nodes(tree)
        srcs = [(self.space(t), {x: 1}) for t, x in zip(nodes, elem)]
        if self.L == "M":
            tgt = cs.mod_space(self.inputs)
        else:
            tgt = cs.op_space(self.inputs, self.out)
        return glue_many(srcs, tgt)

    def _build(self) -> ChainComplex:
        d = {}
        for n in range(1, self.top + 1):
            cols = [self._differential_column(n, t, e) for t, e in self.elements(n)]
            d[n] = SMat.from_columns(self.dims[n - 1], cols)
        if self.R == "I":
            # total composition is not a chain map out of B(L, F_c, I), which resolves L o_F I instead
            return ChainComplex(self.dims, d)
        if self.L == "M":
            tdim = self.cs.mod_space(self.inputs).dim
        else:
            tdim = self.cs.op_space(self.inputs, self.out).dim
        aug = SMat.from_columns(tdim, [self.augmentation_column(t, e) for t, e in self.elements(0)])
        return ChainComplex(self.dims, d, aug)

    def order_signs(self, other_order: str) -> dict[int, SMat]:
        """Diagonal change of basis between two fork orders."""
        out = {}
        for n in range(self.top + 1):
            signs = []
            for tree in self.shapes[n]:
                at = self.annotate(tree)
                a = self.fork_order(at)
                self.order, saved = other_order, self.order
                b = self.fork_order(at)
                self.order = saved
                signs.extend([perm_sign(a, b)] * self.size(tree))
            out[n] = SMat(self.dims[n], self.dims[n], [{i: x} for i, x in enumerate(signs)])
        return out


# levelization ----------------------------------------------------------------------------------------

def linear_extensions(tree) -> list[list[int]]:
    """Orders of the forks of an annotated tree with parents before children."""
    parent = {}
    forks = []

    def walk(t, p):
        if t[0] == "F":
            forks.append(t[3])
            parent[t[3]] = p
            p = t[3]
        if t[0] in ("S", "F"):
            for c in t[2]:
                walk(c, p)

    walk(tree, None)
    out = []

    def rec(done, rest):
        if not rest:
            out.append(list(done))
            return
        for v in rest:
            if parent[v] is None or parent[v] in done:
                rec(done + [v], [w for w in rest if w != v])

    rec([], forks)
    return out


def level_tree(fb: ForestBar, tree, elem, sigma: list[int]):
    """The leveled tree (shape, element) of a forest with forks placed at levels given by sigma."""
    n = len(sigma)
    at = fb.annotate(tree)
    level = {v: i + 1 for i, v in enumerate(sigma)}
    deco = {t[3]: x for t, x in zip(fb.annotate_nodes(at), elem)}
    # edges: (color, parent level, child node)
    edges = []

    def walk(t, lvl):
        for c in t[2]:
            cl = level[c[3]] if c[0] == "F" else n + 1
            edges.append((c[1], lvl, cl, c))
            if c[0] == "F":
                walk(c, cl)

    walk(at, 0)
    levels = []
    for ell in range(n + 1, 0, -1):
        present = sorted((e for e in edges if e[1] < ell <= e[2]), key=lambda e: e[0][0])
        levels.append(present)
    shape = tuple(tuple(e[0] for e in lvl) for lvl in levels)
    elem_out = []
    for t_idx, lvl in enumerate(levels):
        ell = n + 1 - t_idx
        for e in lvl:
            elem_out.append(deco[e[3][3]] if e[2] == ell else 0)
    elem_out.append(deco[at[3]])
    return shape, tuple(elem_out)


def levelization(fb: ForestBar, lb: LeveledBar) -> dict[int, SMat]:
    """Forests to leveled trees: the signed sum over all ways to put one fork on each level."""
    out = {}
    for n in range(min(fb.top, lb.top) + 1):
        cols = []
        for tree, elem in fb.elements(n):
            at = fb.annotate(tree)
            canon = fb.fork_order(at)
            col: dict = {}
            for sigma in linear_extensions(at):
                shape, e = level_tree(fb, tree, elem, sigma)
                if shape not in lb.offsets[n]:
                    continue
                k = lb.encode(n, shape, e)
                col[k] = col.get(k, 0) + perm_sign(canon, sigma)
            cols.append({k: x for k, x in col.items() if x})
        out[n] = SMat.from_columns(lb.dims[n], cols)
    return out


def levelization_check(cs: ColoredSystem, top: int = 2) -> dict:
    """Levelization into the normalized leveled complex: chain map and acyclic mapping cone through degree top."""
    fb = ForestBar(cs, "M", "F", top=top, min_r=True)
    lb = LeveledBar(cs, top + 1)
    raw = levelization(fb, lb)
    norm, quots = lb.normalized()
    maps = {n: quots[n].projection() @ raw[n] for n in range(top + 1)}
    fm = ChainMap(fb.complex, norm, maps)
    chain = fm.validate()
    raw_chain = ChainMap(fb.complex, lb.complex, raw).validate()
    cone = mapping_cone(fm)
    cone_h = {k: cone.homology(k, augmented=False) for k in range(top + 1)}
    return {"forest_dims": fb.dims, "leveled_dims": norm.dims, "d2": fb.complex.check_d2().ok,
            "chain_map": chain.ok, "raw_chain_map": raw_chain.ok, "cone_homology": cone_h,
            "ok": chain.ok and fb.complex.check_d2().ok and all(v == 0 for v in cone_h.values())}


# blob complex ----------------------------------------------------------------------------------------

def blob_complex(cs: ColoredSystem, top: int = 3) -> ChainComplex:
    """B_0 = fields on [0, N] and B_k = forests with at least one twig in degree k - 1, d_1 the augmentation."""
    fb = ForestBar(cs, "M", "F", top=top - 1, min_r=True)
    c0 = cs.mod_space(()).dim
    dims = [c0] + fb.dims
    d = {1: fb.complex.aug}
    for n in range(2, top + 1):
        d[n] = fb.complex.d[n - 1]
    return ChainComplex(dims, d)


def self_bar_homology(cs: ColoredSystem, top: int = 3, degrees=(1, 2)) -> list[dict]:
    """Homology of B(F_c, F_c, F_c)(inputs; out) for every output color and input configuration."""
    rows = []
    for out in cs.colors:
        for ins in cs.inputs_of(out):
            if not cs.op_space(ins, out).dim and not cs.strict_children(out)[1:]:
                continue
            fb = ForestBar(cs, "F", "F", inputs=ins, out=out, top=top)
            h = {k: fb.complex.homology(k, augmented=False) for k in degrees}
            rows.append({"out": out, "inputs": ins, "dims": fb.dims, "homology": h})
    return rows


def ball_decomposition(model: BlobModel, top: int = 2) -> list[dict]:
    """Dimensions of B(M_c, F_c, I)(empty) against B(F_c, F_c, I)(empty; [0, N] with boundary c), per c."""
    rows = []
    for c in product(model.vertices, repeat=2):
        cs = ColoredSystem(model.with_N(model.N, c))
        left = ForestBar(cs, "M", "I", top=top)
        right = ForestBar(cs, "F", "I", out=cs.whole, top=top)
        rows.append({"boundary": c, "module": left.dims, "operad": right.dims,
                     "positive_equal": left.dims[1:] == right.dims[1:]})
    return rows


def summary_figure(cs: ColoredSystem, top: int = 3) -> dict[str, bool]:
    """Forests, leveled trees and both simplicial bar constructions, checked around the diagram."""
    s = BlobSystem(cs.model)
    bc = BarComplex(s.M, s.whole_object, top, s.f_units)
    bbar = BarComplex(s.Mbar, s.upsilon, top, s.fbar_units)
    lb = LeveledBar(cs, top)
    p = beta_bijection(lb, s, bc)
    fb = ForestBar(cs, "M", "F", top=top - 1, min_r=True)
    lev = levelization(fb, lb)
    nb, qb = bc.normalized()
    maps = {n: qb[n].projection() @ p[n] @ lev[n] for n in range(top)}
    return {
        "forest augmentation equals the composite": nb.aug @ maps[0] == fb.complex.aug,
        "forests to normalized bar is a chain map": ChainMap(fb.complex, nb, maps).validate().ok,
        "leveled trees to bar commutes with d": all(bc.complex.d[n] @ p[n] == p[n - 1] @ lb.complex.d[n]
                                                    for n in range(1, top + 1)),
        "inclusion into the completed bar is a chain map": induced_map(s.iota_j, bc, bbar).validate().ok,
    }
