"""Command-line driver: validate fixtures, construct structures, bar complexes, blob pipelines, comparisons."""
from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import click

from . import fixtures as fx
from .bar import MAX_DIM, BarComplex, estimate_bar_dims, h0_two_ways
from .blob import BlobModel, BlobSystem, skein_dimension, standard_models
from .chain import verify_contraction
from .colored import (MAX_FOREST_DIM, ColoredSystem, ForestBar, ball_decomposition, blob_complex,
                      compare_leveled, levelization_check, self_bar_homology, summary_figure)
from .groth import check_iso, grothendieck, roundtrip_fibration, roundtrip_operad
from .opcat import decollage, tautological, validate_opcat
from .operad import (LinOperad, SetOperad, check_pseudo_unital, check_unital_fiberwise, search_units,
                     validate_operad)
from .opmodule import PModule, check_unital_pmodule, validate_pmodule
from .report import StructuralError

EXIT_FAIL, EXIT_USAGE, EXIT_REFUSED = 1, 2, 3


class Output:
    """Checks and values in insertion order, printed as text or key=value lines."""

    def __init__(self, command: str):
        self.command = command
        self.rows: list[tuple[str, str, object]] = []
        self.refused = False

    def value(self, key: str, v):
        self.rows.append(("value", key, v))

    def check(self, key: str, ok: bool, detail: str = ""):
        self.rows.append(("check", key, (bool(ok), detail)))

    def report(self, key: str, rep):
        self.check(key, rep.ok, "" if rep.ok else "; ".join(f"{law}: {d}" for law, d in rep.witnesses[:3]))

    @property
    def status(self) -> str:
        return "refused" if self.refused else ("pass" if self.ok else "fail")

    @property
    def ok(self) -> bool:
        return all(v[0] for kind, _, v in self.rows if kind == "check")

    def render(self, fmt: str) -> str:
        lines = []
        if fmt == "machine":
            lines.append(f"command={self.command}")
            for kind, key, v in self.rows:
                k = _slug(key)
                if kind == "check":
                    lines.append(f"check.{k}={'pass' if v[0] else 'fail'}")
                    if v[1]:
                        lines.append(f"witness.{k}={v[1]}")
                else:
                    lines.append(f"{k}={_flat(v)}")
            lines.append(f"status={self.status}")
        else:
            lines.append(f"{self.command}")
            for kind, key, v in self.rows:
                if kind == "check":
                    lines.append(f"  [{'PASS' if v[0] else 'FAIL'}] {key}" + (f"  ({v[1]})" if v[1] else ""))
                else:
                    lines.append(f"  {key}: {_flat(v)}")
            lines.append(f"  status: {self.status}")
        return "\n".join(lines) + "\n"


def _slug(key: str) -> str:
    return re.sub(r"[^a-z0-9.-]+", "_", key.lower()).strip("_")


def _flat(v) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(_flat(x) for x in v)
    if isinstance(v, dict):
        return ",".join(f"{k}:{_flat(x)}" for k, x in v.items())
    return str(v)


def _finish(out: Output, fmt: str):
    click.echo(out.render(fmt), nl=False)
    sys.exit(0 if out.ok else EXIT_FAIL)


def _refuse(command: str, what: str, estimate, limit: int, fmt: str):
    out = Output(command)
    out.refused = True
    out.value("refused", what)
    out.value("estimate", estimate)
    out.value("limit", limit)
    click.echo(out.render(fmt), nl=False)
    sys.exit(EXIT_REFUSED)


def _load(source: str):
    """A fixture file, or the name of a built-in fixture or model."""
    p = Path(source)
    if p.exists():
        try:
            obj = fx.load(p)
        except (json.JSONDecodeError, KeyError, TypeError, StructuralError) as exc:
            raise click.UsageError(f"{source}: not a readable fixture ({exc})")
        return obj, fx.fixture_hash(obj)
    models = standard_models()
    if source in models:
        return models[source], fx.fixture_hash(models[source])
    c = fx.corpus(include_blob="/" in source)
    if source in c:
        return c[source], fx.fixture_hash(c[source])
    raise click.UsageError(f"{source}: no such file or built-in fixture")


def _model(source: str) -> tuple[BlobModel, str]:
    obj, h = _load(source)
    if not isinstance(obj, BlobModel):
        raise click.UsageError(f"{source}: expected a blob model")
    return obj, h


def infer_units(p) -> dict[int, dict] | None:
    """Fiberwise units found among basis vectors of a linear operad, if any."""
    o, c = p.base, p.base.cat
    eta = {}
    for t in range(c.n_obj):
        fib = o.fiber[c.ident[t]]
        found = None
        for i in range(p.dims[fib]):
            if all(p.same(p.gam(c.ident[t], {i: 1}, {r: 1}), {r: 1}) for r in range(p.dims[t])):
                found = {i: 1}
                break
        if found is None:
            return None
        eta[t] = found
    return eta if check_unital_fiberwise(p, eta)["left"] else None


def _blob_checks(out: Output, m: BlobModel):
    s = BlobSystem(m)
    for name, cat in s.categories().items():
        v = validate_opcat(cat) if hasattr(cat, "fiber") else fx.validate(cat)
        out.report(f"{name} valid", v)
    out.report("Fbar operad", validate_operad(s.Fbar))
    r = check_unital_fiberwise(s.Fbar, s.fbar_units)
    out.check("Fbar unital", r["left"] and r["right"])
    out.report("Mbar module", validate_pmodule(s.Mbar))
    out.report("Mbar unital", check_unital_pmodule(s.Mbar, s.fbar_units))
    out.report("S partial operad", validate_operad(s.S))
    r = check_pseudo_unital(s.S, s.S_units)
    out.check("S pseudo-unital", r["left"] and r["right"])
    out.report("Blob(C) is the Grothendieck construction of S", check_iso(s.grothendieck_comparison()[1]))
    out.check("local relations form an ideal", s.check_ideal_property())


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Operadic categories, bar resolutions and the one-dimensional blob complex."""


def common(f):
    f = click.option("--format", "fmt", type=click.Choice(["text", "machine"]), default="text",
                     help="Output style.")(f)
    f = click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized checks.")(f)
    f = click.option("--depth", type=int, default=3, show_default=True, help="Truncation degree.")(f)
    return f


@main.command()
@click.argument("source")
@click.option("--mutations", type=int, default=0, help="Also run this many single-entry mutations.")
@common
def validate(source, mutations, depth, seed, fmt):
    """Validate a fixture file, a built-in fixture, or the whole built-in corpus ("corpus")."""
    out = Output("validate")
    if source == "corpus":
        c = fx.corpus()
        out.value("fixtures", len(c))
        for name in sorted(c):
            out.report(name, fx.validate(c[name]))
        targets = c
    else:
        obj, h = _load(source)
        out.value("fixture", source)
        out.value("hash", h)
        if isinstance(obj, BlobModel):
            out.value("skein", skein_dimension(obj))
            _blob_checks(out, obj)
            targets = fx.blob_fixtures(source, obj)
        else:
            out.value("kind", type(obj).__name__)
            out.report("axioms", fx.validate(obj))
            targets = {source: obj}
    if mutations:
        rows = fx.mutation_suite(targets, mutations, seed)
        caught = sum(r["caught"] for r in rows)
        out.value("mutations", len(rows))
        out.value("mutations caught", caught)
        for i, r in enumerate(rows):
            if not r["caught"]:
                out.check(f"mutation {i} {r['fixture']} {r['mutation']} is a valid structure", bool(r["equivalent"]))
    _finish(out, fmt)


@main.command()
@click.argument("what", type=click.Choice(["decollage", "tautological", "grothendieck", "fibration", "blob"]))
@click.argument("source")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the constructed fixture here.")
@common
def construct(what, source, output, depth, seed, fmt):
    """Build a derived structure: decollage or tautological of a category, the Grothendieck
    construction of a set operad, the fibration round trip, or all blob structures of a model."""
    obj, h = _load(source)
    out = Output(f"construct {what}")
    out.value("source", source)
    out.value("hash", h)
    result = None
    if what in ("decollage", "tautological"):
        from .fincat import FinCategory
        if not isinstance(obj, FinCategory):
            raise click.UsageError("expected a category fixture")
        result = decollage(obj) if what == "decollage" else tautological(obj)
        out.value("objects", result.cat.n_obj)
        out.value("morphisms", result.cat.n_mor)
        out.report("operadic category", validate_opcat(result))
    elif what in ("grothendieck", "fibration"):
        if not isinstance(obj, SetOperad):
            raise click.UsageError("expected a set operad fixture")
        units = search_units(obj)
        if units is None:
            raise click.UsageError("no unit family found; the Grothendieck construction needs one")
        out.value("units", units[0])
        g = grothendieck(obj, units)
        result = g.total
        out.value("total objects", result.cat.n_obj)
        out.value("total morphisms", result.cat.n_mor)
        out.report("total category", validate_opcat(result))
        if what == "grothendieck":
            out.report("operad round trip", roundtrip_operad(obj, units))
        else:
            out.report("fibration round trip", roundtrip_fibration(g.proj, obj.partial))
    else:
        if not isinstance(obj, BlobModel):
            raise click.UsageError("expected a blob model")
        s = BlobSystem(obj)
        for name, cat in s.categories().items():
            c = cat.cat if hasattr(cat, "cat") else cat
            out.value(f"{name} objects", c.n_obj)
            out.value(f"{name} morphisms", c.n_mor)
        out.value("skein", skein_dimension(obj))
        _blob_checks(out, obj)
    if output and result is not None:
        fx.save(result, output)
        out.value("written", output)
    _finish(out, fmt)


@main.command()
@click.argument("source")
@click.option("--object", "obj_label", default=None, help="Module object label (default: the first).")
@click.option("--completed", is_flag=True, help="For a blob model, use the completed module at the empty blob.")
@click.option("--export", "export_path", type=click.Path(dir_okay=False), default=None,
              help="Write the complex as a labeled sparse-matrix text file.")
@common
def bar(source, obj_label, completed, export_path, depth, seed, fmt):
    """Bar complex of a module fixture, or of a blob model at the whole interval."""
    obj, h = _load(source)
    eta = None
    if isinstance(obj, BlobModel):
        s = BlobSystem(obj)
        if completed:
            mm, m, eta = s.Mbar, s.upsilon, s.fbar_units
        else:
            mm, m, eta = s.M, s.whole_object, s.f_units
    elif isinstance(obj, PModule):
        mm = obj
        m = 0 if obj_label is None else _object_index(obj, obj_label)
        if isinstance(obj.operad, LinOperad):
            eta = infer_units(obj.operad)
    else:
        raise click.UsageError("expected a module fixture or a blob model")
    est = estimate_bar_dims(mm, m, depth)
    if max(est) > MAX_DIM:
        _refuse("bar", f"depth {depth}", est, MAX_DIM, fmt)
    bc = BarComplex(mm, m, depth, eta)
    cx = bc.complex
    if export_path:
        Path(export_path).write_text(cx.to_text())
    out = Output("bar")
    out.value("source", source)
    out.value("hash", h)
    out.value("object", mm.om.mod.obj[m])
    out.value("depth", depth)
    out.value("dims", cx.dims)
    out.report("d^2 = 0", cx.check_d2())
    if depth >= 1:
        betti = cx.betti()
        for k, v in betti.items():
            out.value(f"H{k}", v)
    else:
        out.value("augmentation rank", cx.rank_of(0))
        out.value("H-1", cx.aug_dim - cx.rank_of(0))
    if eta is not None:
        out.report("simplicial identities", bc.simplicial_identities())
        norm, _ = bc.normalized()
        out.value("normalized dims", norm.dims)
        out.report("normalized d^2 = 0", norm.check_d2())
        if depth >= 1:
            h0 = h0_two_ways(bc)
            out.check("H-1 two ways agree", h0["coker_bar"] == h0["coker_direct"])
    if isinstance(obj, BlobModel):
        sk = skein_dimension(obj)
        out.value("skein", sk)
        if not completed:
            out.check("H-1 equals the skein dimension", cx.aug_dim - cx.rank_of(0) == sk)
    _finish(out, fmt)


def _object_index(mm: PModule, label: str) -> int:
    for i, x in enumerate(mm.om.mod.obj):
        if str(x) == label:
            return i
    raise click.UsageError(f"no module object {label!r}")


def _check_forest_size(cs: ColoredSystem, command: str, depth: int, fmt: str):
    s = BlobSystem(cs.model)
    est = estimate_bar_dims(s.M, s.whole_object, depth)
    if max(est) > MAX_DIM:
        _refuse(command, f"depth {depth}", est, MAX_DIM, fmt)
    return s


@main.command()
@click.argument("model")
@common
def blob(model, depth, seed, fmt):
    """Skein module through the bar resolution, the completed contraction and the blob complex."""
    m, h = _model(model)
    cs = ColoredSystem(m)
    s = _check_forest_size(cs, "blob", depth, fmt)
    sbar = BlobSystem(m)
    est = estimate_bar_dims(sbar.Mbar, sbar.upsilon, depth)
    if max(est) > MAX_DIM:
        _refuse("blob", f"depth {depth}", est, MAX_DIM, fmt)
    out = Output("blob")
    out.value("model", model)
    out.value("hash", h)
    out.value("depth", depth)
    sk = skein_dimension(m)
    out.value("skein", sk)
    bc = BarComplex(s.M, s.whole_object, max(depth, 1), s.f_units)
    h_1 = bc.complex.aug_dim - bc.complex.rank_of(0)
    out.value("H-1 of the bar resolution", h_1)
    out.check("skein through the bar resolution", h_1 == sk)
    cb = BarComplex(s.Mbar, s.upsilon, max(depth, 1), s.fbar_units)
    out.value("completed bar dims", cb.complex.dims)
    out.report("completed bar contraction", verify_contraction(cb.complex, cb.contraction(), max(depth, 1) - 1))
    try:
        bx = blob_complex(cs, max(depth, 1))
    except StructuralError as exc:
        _refuse("blob", str(exc), "forest enumeration", MAX_FOREST_DIM, fmt)
    out.value("blob complex dims", bx.dims)
    hs = {k: bx.homology(k, augmented=False) for k in range(bx.top)}
    for k, v in hs.items():
        out.value(f"blob H{k}", v)
    out.check("blob H0 equals the skein dimension", hs[0] == sk)
    _finish(out, fmt)


@main.command()
@click.argument("model")
@common
def compare(model, depth, seed, fmt):
    """Forests, leveled trees and bar resolutions compared; levelization; self-bar acyclicity; ball sums."""
    m, h = _model(model)
    cs = ColoredSystem(m)
    _check_forest_size(cs, "compare", depth, fmt)
    depth = max(depth, 2)
    out = Output("compare")
    out.value("model", model)
    out.value("hash", h)
    out.value("depth", depth)
    try:
        out.report("colored operad", cs.validate(seed=seed))
        out.report("leveled trees realize the bar resolution", compare_leveled(cs, depth))
        lev = levelization_check(cs, depth - 1)
        out.value("forest dims", lev["forest_dims"])
        out.check("forest d^2 = 0", lev["d2"])
        out.check("levelization is a chain map", lev["chain_map"])
        out.check("levelization cone acyclic", all(v == 0 for v in lev["cone_homology"].values()))
        fb = ForestBar(cs, "M", "F", top=depth - 1, min_r=True)
        alt = ForestBar(cs, "M", "F", top=depth - 1, min_r=True, order="bfs")
        sg = fb.order_signs("bfs")
        out.check("differential independent of the vertex order",
                  all(alt.complex.d[n] == sg[n - 1] @ fb.complex.d[n] @ sg[n] for n in range(1, depth)))
        for k, ok in summary_figure(cs, depth).items():
            out.check(k, ok)
        rows = self_bar_homology(cs, depth, tuple(range(1, depth)))
        out.value("self-bar complexes", len(rows))
        out.check("self-bar acyclic in positive degrees", all(not any(r["homology"].values()) for r in rows))
        for r in ball_decomposition(m, depth - 1):
            key = "".join(map(str, r["boundary"]))
            out.value(f"ball {key} module dims", r["module"])
            out.value(f"ball {key} operad dims", r["operad"])
            out.check(f"ball {key} decomposition in positive degrees", r["positive_equal"])
    except StructuralError as exc:
        _refuse("compare", str(exc), "forest enumeration", MAX_FOREST_DIM, fmt)
    _finish(out, fmt)


if __name__ == "__main__":
    main()
