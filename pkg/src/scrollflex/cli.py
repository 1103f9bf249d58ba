"""Command-line front end.

Commands: ``rank``, ``class``, ``degree``, ``scan``, ``jet``, ``verify``.
Output is either a human-readable report (default) or a structured JSON
document (``--format structured``).  Exit status is 0 exactly when the
requested operation succeeded and, for ``verify``, every check passed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import jets, scans, verify
from .errors import ScrollflexError
from .scroll import (BASE_PRESETS, NumericalBaseData, ScrollSetup,
                     chern_wu_reduce, degree_class, degree_of_inflection,
                     expected_codim, inflection_class, max_rank,
                     rank_breakdown, scroll_ring, symbolic_degree)

DATA_DIR_ENV = "SCROLLFLEX_DATA_DIR"


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation; exactly one command per run."""

    command: str
    n: int | None = None
    m: int | None = None
    k: int | None = None
    N: int | None = None
    base: str | None = None
    data: str | None = None
    family: str | None = None
    ell: int | None = None
    e: int | None = None
    q: int | None = None
    spec: str | None = None
    minors: int | None = None
    format: str = "pretty"
    seed: int | None = None
    trials: int | None = None
    filter: str | None = None

    def to_payload(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_payload(cls, payload: dict) -> "RunConfig":
        return cls(**payload)


def _resolve_path(name: str) -> Path:
    path = Path(name)
    if path.exists():
        return path
    root = os.environ.get(DATA_DIR_ENV)
    if root and not path.is_absolute():
        candidate = Path(root) / name
        if candidate.exists():
            return candidate
    return path


def _emit(config: RunConfig, payload: dict, pretty_lines: list[str]) -> None:
    if config.format == "structured":
        print(json.dumps({"config": config.to_payload(), "result": payload},
                         indent=2, sort_keys=True))
    else:
        for line in pretty_lines:
            print(line)


def _cmd_rank(config: RunConfig) -> int:
    value = max_rank(config.n, config.m, config.k)
    breakdown = rank_breakdown(config.n, config.m, config.k)
    lines = [f"maximal generic jet rank: {value}"]
    lines += [f"  order {h}: {count} rows" for h, count in breakdown]
    _emit(config, {"rank": value, "breakdown": breakdown}, lines)
    return 0


def _cmd_class(config: RunConfig) -> int:
    setup = ScrollSetup(config.n, config.m, config.k, config.N)
    codim = expected_codim(setup)
    ring = scroll_ring(setup.n, setup.m)
    cls = inflection_class(setup, ring)
    reduced = chern_wu_reduce(cls, setup.fiber_rank)
    lines = []
    if not codim.in_range:
        lines.append(
            f"warning: N={setup.N} is outside [{codim.range_lo}, {codim.range_hi}]; "
            "the class formula is not asserted for this setup (formal result follows)"
        )
    lines += [
        f"codimension: {codim.codim} ({'in range' if codim.in_range else 'out of range'})",
        f"class:   {cls}",
        f"reduced: {reduced}",
    ]
    payload = {
        "codim": codim.codim,
        "in_range": codim.in_range,
        "range": [codim.range_lo, codim.range_hi],
        "class": cls.to_payload(),
        "reduced": reduced.to_payload(),
    }
    _emit(config, payload, lines)
    return 0


def _load_data(config: RunConfig) -> NumericalBaseData:
    path = _resolve_path(config.data)
    with open(path, "r", encoding="utf-8") as handle:
        return NumericalBaseData.from_payload(json.load(handle))


def _cmd_degree(config: RunConfig) -> int:
    setup = ScrollSetup(config.n, config.m, config.k, config.N)
    if config.data:
        data = _load_data(config)
        result = degree_of_inflection(setup, data)
        lines = [
            f"degree: {result.value}",
            f"symbolic: {result.symbolic}",
        ]
        if not result.asserted:
            lines.insert(0, "warning: setup out of range; value is formal")
        payload = {
            "degree": result.value,
            "symbolic": result.symbolic.to_payload(),
            "in_range": result.asserted,
        }
        _emit(config, payload, lines)
        return 0
    if config.base:
        preset = BASE_PRESETS[config.base]
        poly = symbolic_degree(setup, preset.assignments(), preset.slots)
        lines = [
            f"degree over {config.base}: {poly}",
            f"legend: {preset.legend}",
        ]
        payload = {"degree_polynomial": str(poly), "legend": preset.legend,
                   "slots": list(preset.slots)}
        _emit(config, payload, lines)
        return 0
    cls = degree_class(setup)
    lines = [f"degree in base intersection numbers: {cls}"]
    _emit(config, {"symbolic": cls.to_payload()}, lines)
    return 0


def _cmd_scan(config: RunConfig) -> int:
    params = {}
    if config.ell is not None:
        params["ell"] = config.ell
    if config.e is not None:
        params["e"] = config.e
    if config.q is not None:
        params["q"] = config.q
    report = scans.run_family(config.family, **params)
    lines = [f"family {report.family} {report.params}: {report.verdict}",
             f"candidates examined: {report.candidates}"]
    for name, bound in report.bounds.items():
        lines.append(f"  bound {name} in [{bound.lo}, {bound.hi}]: {bound.reason}")
    if report.survivors:
        lines.append("survivors:")
        for s in report.survivors:
            mark = f"  {s.point}"
            if s.annotation:
                mark += f"  -- {s.annotation}"
            lines.append(mark)
    if report.excluded:
        lines.append("excluded integer points:")
        for point, why in report.excluded:
            lines.append(f"  {point}  -- {why}")
    for note in report.notes:
        lines.append(f"note: {note}")
    _emit(config, report.to_payload(), lines)
    return 0


def _cmd_jet(config: RunConfig) -> int:
    path = _resolve_path(config.spec)
    spec = jets.JetProbeSpec.load(path)
    if config.seed is not None or config.trials is not None:
        spec = jets.JetProbeSpec(
            spec.variables, spec.coordinates, spec.order,
            config.trials if config.trials is not None else spec.trials,
            config.seed if config.seed is not None else spec.seed,
            spec.height,
        )
    scan_result = jets.probe_rank(spec)
    payload = scan_result.to_payload()
    lines = [
        f"generic jet rank (order {spec.order}): {scan_result.rank}",
        f"rows: {scan_result.rows}, trials: {spec.trials}, seed: {spec.seed}",
        scan_result.note,
    ]
    if config.minors:
        report = jets.inflection_equations(spec, config.minors)
        payload["minors"] = report.to_payload()
        lines.append(f"common content of {config.minors}x{config.minors} minors: "
                     f"{report.content}")
        lines.append(f"reduced locus: {report.reduced_locus}")
    _emit(config, payload, lines)
    return 0


def _cmd_verify(config: RunConfig) -> int:
    results = verify.run_checks(filter=config.filter)
    ok = all(r.ok for r in results)
    lines = [r.row() for r in results]
    lines.append(f"{sum(r.ok for r in results)}/{len(results)} checks passed")
    payload = {
        "results": [
            {"id": r.identifier, "ok": r.ok, "detail": r.detail} for r in results
        ],
        "passed": ok,
    }
    _emit(config, payload, lines)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scrollflex",
        description="Exact degeneracy classes, degrees, jet ranks and "
                    "integer-point scans for projective-bundle scrolls.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def dims(p, ambient=True):
        p.add_argument("--n", type=int, required=True, help="dimension of the scroll")
        p.add_argument("--m", type=int, required=True, help="dimension of the base")
        p.add_argument("--k", type=int, required=True, help="osculation order")
        if ambient:
            p.add_argument("--N", type=int, required=True,
                           help="ambient projective dimension")

    def fmt(p):
        p.add_argument("--format", choices=("pretty", "structured"),
                       default="pretty")

    p = sub.add_parser("rank", help="maximal generic jet rank and its breakdown")
    dims(p, ambient=False)
    fmt(p)

    p = sub.add_parser("class", help="degeneracy class, raw and reduced")
    dims(p)
    fmt(p)

    p = sub.add_parser("degree", help="degree of the degeneracy locus")
    dims(p)
    p.add_argument("--base", choices=sorted(BASE_PRESETS),
                   help="bundled base preset (symbolic slots)")
    p.add_argument("--data", help="JSON file of intersection numbers")
    fmt(p)

    p = sub.add_parser("scan", help="integer-point scan of a base family")
    p.add_argument("family", choices=scans.FAMILIES)
    p.add_argument("--l", dest="ell", type=int, help="codimension (P3/Q3)")
    p.add_argument("--e", type=int, help="Hirzebruch invariant (Fe)")
    p.add_argument("--q", type=int, help="base curve genus (ProductsBxP1)")
    fmt(p)

    p = sub.add_parser("jet", help="generic jet rank of a probe spec file")
    p.add_argument("spec", help="JSON probe specification")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--minors", type=int,
                   help="also report the common content of minors of this size")
    fmt(p)

    p = sub.add_parser("verify", help="run the full regression table")
    p.add_argument("--filter", help="only run checks whose id contains this")
    fmt(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if v is not None}
    if fields.get("base") and fields.get("data"):
        raise ScrollflexError("--base and --data conflict; give exactly one")
    return RunConfig(**fields)


_DISPATCH = {
    "rank": _cmd_rank,
    "class": _cmd_class,
    "degree": _cmd_degree,
    "scan": _cmd_scan,
    "jet": _cmd_jet,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        return _DISPATCH[config.command](config)
    except ScrollflexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
