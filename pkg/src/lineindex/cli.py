"""``line-index`` command: read a polynomial, run the pipeline, print a report."""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from .closed_forms import CLI_NAMES, WeightedHomogeneousSpec, catalog, tpqr_analysis, xii_analysis
from .errors import LineIndexError, ParseError, ValidationError
from .linedex import LineIndexReport, line_index, obvious_lines
from .newton import LatticePolynomial, compact_facets, load_polynomial
from .resolution import export_graph, summarize

SCHEMA = 1
log = logging.getLogger("lineindex")


@dataclass(frozen=True)
class RunConfig:
    polynomial: str | None = None
    input_file: str | None = None
    catalog: tuple[str, ...] | None = None
    format: str = "text"
    dot: str | None = None
    oracle: bool = False
    verbosity: int = 0

    def __post_init__(self):
        given = sum(x is not None for x in (self.polynomial, self.input_file, self.catalog))
        if given != 1:
            raise ParseError("give exactly one of: a polynomial, --input, --catalog")
        if self.format not in ("text", "json"):
            raise ParseError(f"unknown format {self.format!r}")


def _cov(v) -> list[int]:
    return [int(x) for x in v]


def _frac(c) -> str:
    return str(c)


def build_document(f: LatticePolynomial, report: LineIndexReport, source: dict, warnings: list[str]) -> dict:
    summary = summarize(report)
    faces = {F.normal: F for F in compact_facets(f)}
    facets = []
    for F in summary.facets:
        face = faces[F.normal]
        facets.append({
            "normal": _cov(F.normal),
            "value": face.value,
            "vertices": sorted(_cov(v) for v in face.vertices),
            "ns": F.ns,
            "rational": F.rational,
            "genus": F.genus,
            "arms": F.arms,
        })
    cones = []
    for c in report.cones:
        chain = c.chain.reversed()  # from P towards Q
        cones.append({
            "P": _cov(c.cone.P),
            "Q": _cov(c.cone.Q),
            "det": c.cone.d,
            "edge": [_cov(e) for e in c.cone.edge],
            "r": c.cone.r,
            "chain_from_P": [
                {"covector": _cov(v.covector), "alpha": v.alpha, "beta": v.beta, "m": m}
                for v, m in zip(chain.interior, chain.cf_entries)
            ],
            "cf_from_P": list(chain.cf_entries),
            "rho": c.rho,
            "ns": sorted(
                ({"covector": _cov(s.covector), "coord": s.coord + 1, "alpha": s.alpha, "beta": s.beta}
                 for s in c.ns),
                key=lambda d: (d["covector"], d["coord"]),
            ),
        })
    return {
        "schema": SCHEMA,
        "input": dict(source, polynomial=str(f), terms=sorted(
            ({"exp": list(e), "coef": _frac(c)} for e, c in f.terms), key=lambda d: d["exp"])),
        "facets": sorted(facets, key=lambda d: d["normal"]),
        "cones": sorted(cones, key=lambda d: (d["P"], d["Q"])),
        "rho": {
            "facet_ns": sorted(_cov(P) for P in report.facet_ns),
            "facet_term": len(report.facet_ns),
            "cone_terms": sorted(
                ({"P": _cov(c.cone.P), "Q": _cov(c.cone.Q), "weight": c.cone.r + 1, "rho": c.rho}
                 for c in report.cones),
                key=lambda d: (d["P"], d["Q"]),
            ),
            "total": report.total,
        },
        "normally_smooth": sorted(_cov(P) for P in report.ns_covectors()),
        "resolution": {
            "verdict": summary.verdict,
            "reason": summary.reason,
            "chains": sorted(
                ({"covector": _cov(ch.covector), "cone": [_cov(ch.cone[0]), _cov(ch.cone[1])],
                  "components": ch.components, "self_intersection": ch.self_intersection, "ns": ch.ns}
                 for ch in summary.chains),
                key=lambda d: (d["cone"], d["covector"]),
            ),
        },
        "obvious_lines": sorted(
            ({"kind": x.kind, "covector": _cov(x.covector), "detail": x.detail}
             for x in obvious_lines(f, [c.cone for c in report.cones])),
            key=lambda d: (d["kind"], d["covector"], d["detail"]),
        ),
        "line_leads": [
            {
                "covector": _cov(L.covector),
                "face_function": str(L.face_function),
                "roots": {k: [str(r) for r in v] for k, v in sorted(L.roots.items())},
            }
            for L in sorted(report.line_leads, key=lambda L: L.covector)
        ],
        "warnings": list(warnings),
    }


def render_text(doc: dict) -> str:
    def cv(v):
        return "(" + ",".join(map(str, v)) + ")"

    out = []
    inp = doc["input"]
    out.append(f"input: {inp['polynomial']}")
    if "catalog" in inp:
        out.append(f"catalog: {inp['catalog']['family']} {' '.join(map(str, inp['catalog']['params']))}")
    if "known_rho" in doc:
        out.append("")
        out.append(f"known line index: {doc['known_rho']} (Newton boundary has no compact 2-face)")
    else:
        out.append("")
        out.append("facets:")
        for F in doc["facets"]:
            out.append(
                f"  P={cv(F['normal'])} d(P;f)={F['value']} ns={F['ns']} rational={F['rational']} "
                f"genus={F['genus']} arms={F['arms']}"
            )
        out.append("")
        out.append("cones:")
        for c in doc["cones"]:
            out.append(f"  Cone({cv(c['P'])}, {cv(c['Q'])}) det={c['det']} r={c['r']} rho={c['rho']}")
            if c["chain_from_P"]:
                out.append("    chain from P: " + " ".join(cv(v["covector"]) for v in c["chain_from_P"]))
                out.append("    continued fraction: [" + ",".join(map(str, c["cf_from_P"])) + "]")
        out.append("")
        out.append("normally smooth covectors:")
        for c in doc["cones"]:
            for s in c["ns"]:
                out.append(
                    f"  {cv(s['covector'])} coord {s['coord']} (alpha,beta)=({s['alpha']},{s['beta']}) "
                    f"in Cone({cv(c['P'])}, {cv(c['Q'])})"
                )
        for P in doc["rho"]["facet_ns"]:
            out.append(f"  {cv(P)} facet")
        rho = doc["rho"]
        out.append("")
        out.append("line index:")
        out.append(f"  facets with a coordinate 1: {rho['facet_term']}")
        for t in rho["cone_terms"]:
            if t["rho"]:
                out.append(f"  Cone({cv(t['P'])}, {cv(t['Q'])}): {t['weight']} x {t['rho']}")
        out.append(f"  total: {rho['total']}")
        res = doc["resolution"]
        out.append("")
        out.append(f"resolution: {res['verdict']} ({res['reason']})")
        out.append("")
        out.append("obvious lines:")
        for x in doc["obvious_lines"]:
            out.append(f"  {x['kind']}: {cv(x['covector'])} {x['detail']}")
        if doc["line_leads"]:
            out.append("")
            out.append("line leading data:")
            for L in doc["line_leads"]:
                roots = "; ".join(f"{k}: {', '.join(v)}" for k, v in L["roots"].items())
                out.append(f"  {cv(L['covector'])} f_P = {L['face_function']}" + (f"  roots {roots}" if roots else ""))
    out.append("")
    out.append("warnings:")
    out.extend(f"  {w}" for w in doc["warnings"] or ["none"])
    return "\n".join(out) + "\n"


def _catalog_warnings(spec: WeightedHomogeneousSpec, entry, report: LineIndexReport) -> list[str]:
    warnings = []
    if tuple(report.facets) != tuple(sorted(entry.facets)):
        warnings.append(f"catalog facets {list(entry.facets)} differ from computed {list(report.facets)}")
    if len(entry.facets) == 1:
        nb = {x for c in report.cones for x in (c.cone.P, c.cone.Q)} - set(report.facets)
        if nb != set(entry.arms):
            warnings.append(f"catalog neighbours {sorted(entry.arms)} differ from computed {sorted(nb)}")
    analysis = None
    if spec.family == "II":
        analysis = xii_analysis(spec.a, spec.b, spec.c)
    elif spec.family == "tpqr":
        try:
            analysis = tpqr_analysis(spec.a, spec.b, spec.c)
        except ValidationError as exc:
            log.info("closed forms skipped: %s", exc)
    if analysis is not None:
        warnings.extend(analysis.warnings)
    return warnings


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one run; returns (exit status, rendered report)."""
    source: dict = {}
    warnings: list[str] = []
    if config.catalog is not None:
        family, *params = [a.strip() for a in config.catalog]
        spec = WeightedHomogeneousSpec.from_params(family, params)
        entry = catalog(spec)
        source = {"source": "catalog", "catalog": {"family": spec.family, "params": list(params)}}
        f = entry.polynomial
        if entry.known_rho is not None:
            doc = {
                "schema": SCHEMA,
                "input": dict(source, polynomial=str(f)),
                "known_rho": entry.known_rho,
                "warnings": ["Newton boundary has no 2-dimensional compact face; line index taken from the known A_(c-1) value"],
            }
            return 0, _emit(doc, config.format)
    elif config.input_file is not None:
        try:
            text = Path(config.input_file).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {config.input_file}: {exc}") from None
        stripped = text.strip()
        if stripped.startswith("[") or stripped.startswith("{"):
            try:
                data = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON in {config.input_file}: {exc}") from None
            if isinstance(data, dict):
                data = data.get("terms", data)
            f = load_polynomial(data)
        else:
            f = load_polynomial(stripped)
        source = {"source": "file"}
    else:
        f = load_polynomial(config.polynomial)
        source = {"source": "inline"}

    report = line_index(f, cross_check=not config.oracle)
    if config.catalog is not None:
        warnings.extend(_catalog_warnings(spec, entry, report))
    doc = build_document(f, report, source, warnings)
    if config.dot:
        Path(config.dot).write_text(export_graph(report, summarize(report)))
    return 0, _emit(doc, config.format)


def _emit(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    return render_text(doc)


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="line-index",
        description="Line index and toric resolution data of a surface singularity f(x,y,z)=0.",
    )
    p.add_argument("polynomial", nargs="?", help='e.g. "x^2 + y^3 + z^7 + x*y*z"')
    p.add_argument("--input", dest="input_file", metavar="FILE",
                   help="polynomial text or a JSON list of {exp, coef} records")
    p.add_argument("--catalog", nargs="+", metavar="ARG",
                   help=f"family ({' '.join(CLI_NAMES)}) followed by its parameters")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--dot", metavar="PATH", help="write the resolution graph in DOT format")
    p.add_argument("--oracle", action="store_true", help="chain scan only, no congruence cross-check")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


NEGATIVE_FRACTION = re.compile(r"-\d+/\d+")


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # argparse only treats -3 or -0.5 as values; a leading space keeps -1/2 a value too
    argv = [" " + a if NEGATIVE_FRACTION.fullmatch(a) else a for a in argv]
    args = parser().parse_args(argv)
    logging.basicConfig(
        level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.catalog is not None and args.catalog[0].lower() not in CLI_NAMES:
            raise ParseError(f"unknown catalog family {args.catalog[0]!r}")
        config = RunConfig(
            polynomial=args.polynomial,
            input_file=args.input_file,
            catalog=tuple(args.catalog) if args.catalog is not None else None,
            format=args.format,
            dot=args.dot,
            oracle=args.oracle,
            verbosity=args.verbose,
        )
        status, text = run(config)
    except LineIndexError as exc:
        print(f"line-index: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except AssertionError as exc:
        print(f"line-index: internal assertion failed: {exc}", file=sys.stderr)
        return 5
    except Exception as exc:  # anything else is a bug, not bad input
        log.debug("unexpected failure", exc_info=True)
        print(f"line-index: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 5
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
