"""Command line entry point ``qg``."""
from __future__ import annotations

import json
import os
import re
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import click

from . import __version__
from .qtorus import QuantumMatrix, SkewForm, Torus, TorusElement
from .tensor import CATALOG, Deadline, Inconclusive, Verdict, canonical_id, r_matrix, verify_identity

SCHEMA = "qg/1"
REPORT_SCHEMA = "qg-report/1"
DEFAULT_BUDGET = 600.0


def budget_seconds(flag: Optional[float] = None) -> float:
    if flag is not None:
        return flag
    env = os.environ.get("QG_BUDGET_SECS")
    return float(env) if env else DEFAULT_BUDGET


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True)


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


# ---------------------------------------------------------------------------
# reports


def _casimir_verdict(n: int) -> Verdict:
    from .anq import check_casimirs, kernel_dimensions

    t0 = time.perf_counter()
    checks = check_casimirs(n)
    dims = kernel_dimensions(n)
    return Verdict("CASIMIRS", n, all(checks.values()), None, "",
                   (time.perf_counter() - t0) * 1000, {"checks": checks, "kernel": dims})


def _braid_verdict(n: int) -> Verdict:
    from .braid import verify_braid

    word = [1, 2, 1] if n >= 3 else []
    v = verify_braid(n, word)
    return Verdict("BRAID", n, v.holds, v.counterexample, v.detail, v.millis, v.extra)


def _du_verdict(n: int) -> Verdict:
    from .semiclassical import check_du

    return check_du(n)


# (id, n-range predicate, runner); tensor identities first, in catalog order
EXTRA_CHECKS: Tuple[Tuple[str, Callable[[int], bool], Callable[[int], Verdict]], ...] = (
    ("CASIMIRS", lambda n: 3 <= n <= 6, _casimir_verdict),
    ("BRAID", lambda n: 3 <= n <= 6, _braid_verdict),
    ("POISSON_DU", lambda n: 3 <= n <= 5, _du_verdict),
)


def _budgeted(ident: str, n: int, fn: Callable[[int], Verdict], budget: float) -> Verdict:
    t0 = time.perf_counter()
    try:
        with Deadline(budget):
            return fn(n)
    except Inconclusive as e:
        return Verdict(ident, n, None, None, str(e), (time.perf_counter() - t0) * 1000)


@dataclass
class Report:
    config: Dict[str, object]
    verdicts: List[Verdict] = field(default_factory=list)
    version: str = __version__

    @property
    def partial(self) -> bool:
        return any(v.holds is None for v in self.verdicts)

    def exit_code(self) -> int:
        return exit_code(self.verdicts)

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "version": self.version,
            "config": self.config,
            "partial": self.partial,
            "verdicts": [v.to_json() for v in self.verdicts],
            "timings_ms": {f"{v.id}@{v.n}": round(v.millis, 3) for v in self.verdicts},
        }


def exit_code(verdicts: Sequence[Verdict]) -> int:
    if any(v.holds is False for v in verdicts):
        return 1
    if any(v.holds is None for v in verdicts):
        return 2
    return 0


def run_verify_all(ns: Sequence[int], budget: Optional[float] = None,
                   ids: Optional[Sequence[str]] = None) -> Report:
    """One verdict per (identity, n), ordered by n then catalog order."""
    budget = budget_seconds(budget)
    for n in ns:
        if not 2 <= n <= 6:
            raise ValueError("n-range must lie in 2..6")
    wanted = None if ids is None else {i.upper() for i in ids}
    rep = Report({"n": list(ns), "budget_secs": budget, "ids": sorted(wanted) if wanted else "all"})
    for n in ns:
        for ident in CATALOG:
            if wanted and ident.upper() not in wanted:
                continue
            rep.verdicts.append(verify_identity(ident, n, budget))
        for ident, ok, fn in EXTRA_CHECKS:
            if (wanted and ident not in wanted) or not ok(n):
                continue
            rep.verdicts.append(_budgeted(ident, n, fn, budget))
    return rep


def parse_range(text: str) -> List[int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", text)
    if not m:
        raise click.BadParameter(f"expected N or A..B, got {text!r}")
    a = int(m.group(1))
    b = int(m.group(2)) if m.group(2) else a
    return list(range(a, b + 1))


# ---------------------------------------------------------------------------
# export / import


def _int_matrix(m: List[List[int]]) -> dict:
    return {"rows": [[int(x) for x in r] for r in m]}


def build_object(object_id: str) -> Tuple[str, object]:
    """Object ids: R:k, toy-A:n, toy-M1:n, toy-M2:n, A:n, M1:n, M2:n, M3:n, net:n, form:n."""
    m = re.fullmatch(r"([A-Za-z0-9-]+):(\d+)", object_id)
    if not m:
        raise KeyError(f"bad object id {object_id!r}")
    kind, n = m.group(1), int(m.group(2))
    from . import anq, sln

    if kind == "R":
        return "matrix", r_matrix(n)
    if kind == "toy-A":
        return "int-matrix", anq.normalized_A(n).at_all_ones()
    if kind in ("toy-M1", "toy-M2"):
        mat = sln.normalized_transport(n)[0 if kind == "toy-M1" else 1]
        return "int-matrix", [[x.at_all_ones() for x in row] for row in mat.rows]
    if kind == "A":
        return "matrix", anq.normalized_A(n).A
    if kind in ("M1", "M2"):
        return "matrix", sln.normalized_transport(n)[0 if kind == "M1" else 1]
    if kind == "M3":
        return "matrix", sln.m3_transport(n)
    if kind == "net":
        return "network", sln.build_sln_network(n)[0]
    if kind == "form":
        return "form", sln.triangle_form(n)
    raise KeyError(f"unknown object kind {kind!r}")


def encode(kind: str, obj) -> dict:
    if kind == "int-matrix":
        data = _int_matrix(obj)
    elif kind in ("matrix", "network", "form", "element"):
        data = obj.to_json()
    else:
        raise KeyError(kind)
    return {"schema": SCHEMA, "kind": kind, "data": data}


def decode(doc: dict):
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    kind, data = doc["kind"], doc["data"]
    if kind == "int-matrix":
        return [list(r) for r in data["rows"]]
    if kind == "matrix":
        return QuantumMatrix.from_json(data)
    if kind == "network":
        from .network import Network

        return Network.from_json(data)
    if kind == "form":
        return SkewForm.from_json(data)
    if kind == "element":
        return element_from_json(data)
    raise ValueError(f"unknown kind {kind!r}")


def element_to_json(x: TorusElement) -> dict:
    return {"form": x.torus.form.to_json(), "terms": x.to_json()}


def element_from_json(data: dict) -> TorusElement:
    return TorusElement.from_json(Torus(SkewForm.from_json(data["form"])), data["terms"])


def export_object(object_id: str, path: Optional[str] = None) -> str:
    kind, obj = build_object(object_id)
    text = _dump(encode(kind, obj))
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


# ---------------------------------------------------------------------------
# commands


@click.group()
@click.version_option(__version__, prog_name="qg")
def main() -> None:
    """Quantum transport matrices, cluster mutations and identity checks."""


@main.group()
def sln() -> None:
    """SL_n triangle networks and their transports."""


@sln.command("build")
@click.option("-n", "n", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def sln_build(n: int, out: Optional[str]) -> None:
    from .sln import build_sln_network

    net, _ = build_sln_network(n)
    _write(net.dumps(), out)


@sln.command("transport")
@click.option("-n", "n", type=int, required=True)
@click.option("--which", type=click.Choice(["M1", "M2", "M3"]), default="M1")
@click.option("--raw/--normalized", default=False)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def sln_transport(n: int, which: str, raw: bool, out: Optional[str]) -> None:
    from . import sln as S

    if which == "M3":
        m = S.raw_m3(n) if raw else S.m3_transport(n)
    else:
        pair = S.raw_transport(n) if raw else S.normalized_transport(n)
        m = pair[0 if which == "M1" else 1]
    _write(_dump(encode("matrix", m)), out)


@main.group()
def net() -> None:
    """Planar networks read from JSON."""


def _load_net(path: str):
    from .network import Network

    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") == SCHEMA:
        return decode(doc)
    return Network.from_json(doc)


@net.command("form")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def net_form(file: str) -> None:
    from .network import skew_form_from_plabic

    form = skew_form_from_plabic(_load_net(file))
    click.echo(_dump(form.to_json()))


def _resolve_boundary(net, key: str) -> str:
    if key in net.vertices:
        return key
    for v in net.vertices.values():
        if v.boundary_pos is not None and str(v.boundary_pos) == key:
            return v.id
    raise click.BadParameter(f"no boundary vertex {key!r}")


@net.command("measure")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--src", required=True)
@click.option("--snk", required=True)
@click.option("--maxdeg", type=int, default=None)
def net_measure(file: str, src: str, snk: str, maxdeg: Optional[int]) -> None:
    from .network import TruncationPolicy, boundary_measurement

    network = _load_net(file)
    x = boundary_measurement(network, _resolve_boundary(network, src), _resolve_boundary(network, snk),
                             TruncationPolicy(maxdeg))
    click.echo(_dump({"measurement": repr(x), "terms": x.to_json()}))


@net.command("move")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--move", "move", type=click.Choice(["M1", "M2", "M3", "R1", "R2", "R3"]), required=True)
@click.option("--at", "at", required=True)
@click.option("--maxdeg", type=int, default=8)
@click.option("--check/--no-check", default=True, help="compare boundary measurements before and after")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def net_move(file: str, move: str, at: str, maxdeg: int, check: bool, out: Optional[str]) -> None:
    from .network import NetworkError, TruncationPolicy, apply_move, measurements_agree

    network = _load_net(file)
    policy = TruncationPolicy(maxdeg)
    try:
        moved = apply_move(network, move, at, policy)
    except NetworkError as e:
        raise click.ClickException(str(e))
    _write(moved.dumps(), out)
    if check:
        ok = measurements_agree(network, moved, policy)
        click.echo(f"measurements preserved: {ok}", err=True)
        if not ok:
            sys.exit(1)


@main.group()
def an() -> None:
    """The matrix A on the amalgamated torus."""


@an.command("build")
@click.option("-n", "n", type=int, required=True)
@click.option("--raw", is_flag=True, help="before unipotent normalization")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def an_build(n: int, raw: bool, out: Optional[str]) -> None:
    from .anq import build_A, normalized_A

    ra = build_A(n) if raw else normalized_A(n)
    _write(_dump(encode("matrix", ra.A)), out)


@an.command("casimirs")
@click.option("-n", "n", type=int, required=True)
@click.option("--check", is_flag=True)
def an_casimirs(n: int, check: bool) -> None:
    from .anq import check_casimirs, kernel_dimensions, named_casimirs

    out: Dict[str, object] = {"kernel": kernel_dimensions(n),
                              "casimirs": {k: repr(v) for k, v in named_casimirs(n).items()}}
    ok = True
    if check:
        res = check_casimirs(n)
        out["checks"] = res
        ok = all(res.values())
    click.echo(_dump(out))
    sys.exit(0 if ok else 1)


CHECK_NAMES = ("matrix-action", "quiver-iso", "braid-relation")


@main.command("braid")
@click.option("-n", "n", type=int, required=True)
@click.option("--word", default="", help="comma separated generators, e.g. 1,2,1")
@click.option("--check", "checks", multiple=True, type=click.Choice(CHECK_NAMES))
def braid_cmd(n: int, word: str, checks: Tuple[str, ...]) -> None:
    """Apply a braid word as cluster mutations and check it."""
    from .braid import verify_braid

    letters = [int(x) for x in word.split(",") if x.strip()]
    v = verify_braid(n, letters, checks or CHECK_NAMES)
    click.echo(_dump(v.to_json()))
    sys.exit(exit_code([v]))


@main.group()
def poisson() -> None:
    """Semiclassical brackets."""


@poisson.command("check-du")
@click.option("-n", "n", type=int, required=True)
def poisson_check_du(n: int) -> None:
    from .semiclassical import check_du

    v = check_du(n)
    click.echo(_dump(v.to_json()))
    sys.exit(exit_code([v]))


@main.command("verify")
@click.option("--id", "ident", required=True, help=f"one of {', '.join(CATALOG)}")
@click.option("-n", "n", type=int, required=True)
@click.option("--report", type=click.Choice(["json", "text"]), default="text")
@click.option("--budget", type=float, default=None, help="seconds; defaults to QG_BUDGET_SECS or 600")
def verify_cmd(ident: str, n: int, report: str, budget: Optional[float]) -> None:
    try:
        ident = canonical_id(ident)
    except KeyError as e:
        raise click.BadParameter(str(e))
    v = verify_identity(ident, n, budget_seconds(budget))
    if report == "json":
        click.echo(_dump(v.to_json()))
    else:
        click.echo(f"{v.id} n={v.n}: {v.status} ({v.millis:.0f} ms)")
        if v.detail:
            click.echo(f"  {v.detail}")
    sys.exit(exit_code([v]))


@main.command("report")
@click.option("--all", "run_all", is_flag=True, help="run every identity")
@click.option("--id", "ids", multiple=True)
@click.option("-n", "nrange", default="2..4", help="N or A..B")
@click.option("--json", "json_out", type=click.Path(dir_okay=False), default=None)
@click.option("--budget", type=float, default=None)
def report_cmd(run_all: bool, ids: Tuple[str, ...], nrange: str, json_out: Optional[str],
               budget: Optional[float]) -> None:
    """Run the catalog over a range of n and write a report."""
    if not run_all and not ids:
        raise click.UsageError("give --all or at least one --id")
    ns = parse_range(nrange)
    try:
        rep = run_verify_all(ns, budget, None if run_all else list(ids))
    except ValueError as e:
        raise click.BadParameter(str(e))
    for v in rep.verdicts:
        click.echo(f"{v.id:<16} n={v.n}  {v.status:<12} {v.millis:9.0f} ms")
    if json_out:
        with open(json_out, "w") as fh:
            fh.write(_dump(rep.to_json()) + "\n")
    sys.exit(rep.exit_code())


@main.command("export")
@click.argument("object_id")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def export_cmd(object_id: str, out: Optional[str]) -> None:
    """Write a built object (R:3, toy-A:4, A:3, M1:3, net:3, ...) as JSON."""
    try:
        text = export_object(object_id)
    except KeyError as e:
        raise click.BadParameter(str(e))
    _write(text, out)


@main.command("import")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def import_cmd(file: str) -> None:
    """Read an exported object and print it back in canonical form."""
    with open(file) as fh:
        doc = json.load(fh)
    obj = decode(doc)
    kind = doc["kind"]
    click.echo(_dump(encode(kind, obj)))


if __name__ == "__main__":  # pragma: no cover
    main()
