"""Command-line entry point: build, export, analyze, verify and simulate."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .alist import AlistError, read_matrix, to_alist, to_json_rows
from .codewords import DimensionTooLarge, is_codeword, min_distance_exhaustive, min_weight_codeword
from .decoder import GallagerSpec, InvalidDivisibility, gallager_code, simulate_ber, snr_grid
from .ffield import GF, FieldError
from .gf2 import rank_gf2
from .incidence import cached_structure, kappa_samples
from .reference import PUBLISHED, block_size, expected_girth, kappa_published, n6_published, n_points
from .tanner import BipartiteGraph, count_6_cycles, count_8_cycles, girth

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 2, 3

ALL_CHECKS = (
    "counts",
    "girth",
    "cycles6",
    "cycles8",
    "rank",
    "mindist-construct",
    "mindist-exhaustive",
    "kappa",
)
VERIFY_CHECKS = ("counts", "girth", "cycles6", "rank", "mindist-construct")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    family: int | None = None
    q: int | None = None
    out: str | None = None
    format: str = "alist"
    seed: int = 0
    snr: list[float] = field(default_factory=list)
    min_trials: int = 1000
    max_trials: int = 10_000
    target_errors: int = 100
    max_iter: int = 50
    checks: list[str] = field(default_factory=list)
    alist: str | None = None
    gallager: dict | None = None

    def validate(self) -> None:
        needs_code = self.subcommand in ("build", "export", "analyze", "verify")
        if needs_code and (self.family is None or self.q is None):
            raise UsageError(f"{self.subcommand} needs --family and --q")
        if self.family is not None and self.family not in (1, 2, 3):
            raise UsageError("--family must be 1, 2 or 3")
        if self.subcommand == "simulate":
            sources = sum(x is not None for x in (self.q, self.alist, self.gallager))
            if sources != 1:
                raise UsageError("simulate needs exactly one of --family/--q, --alist, --gallager")
            if self.q is not None and self.family is None:
                raise UsageError("--q needs --family")
            if not self.snr:
                raise UsageError("empty SNR grid")
            if self.min_trials < 1 or self.max_trials < self.min_trials:
                raise UsageError("need 1 <= --min-trials <= --max-trials")
            if self.max_iter < 1:
                raise UsageError("--max-iter must be >= 1")
        unknown = [c for c in self.checks if c not in ALL_CHECKS]
        if unknown:
            raise UsageError(f"unknown check(s): {', '.join(unknown)}")


# --- helpers ----------------------------------------------------------------


def _field(q: int) -> GF:
    try:
        return GF(q)
    except FieldError as exc:
        raise UsageError(f"{type(exc).__name__}: {exc}") from exc


def _structure(cfg: RunConfig):
    _field(cfg.q)
    return cached_structure(cfg.family, cfg.q)


def _entry(value, expected=None, relation: str = "=") -> dict:
    out = {"value": value}
    if expected is not None:
        out["expected"] = expected if relation == "=" else f"{relation} {expected}"
        out["match"] = bool(value == expected) if relation == "=" else bool(value <= expected)
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --- build ------------------------------------------------------------------


def cmd_build(cfg: RunConfig) -> int:
    s = _structure(cfg)
    H = s.incidence_matrix()
    text = to_alist(H) if cfg.format == "alist" else to_json_rows(H)
    manifest = {
        "family": cfg.family,
        "q": cfg.q,
        "n": H.n_cols,
        "n_checks": H.n_rows,
        "row_weights": sorted(set(H.row_weights().tolist())),
        "col_weights": sorted(set(H.col_weights().tolist())),
        "format": cfg.format,
        "build_hash": hashlib.sha256(text.encode()).hexdigest(),
        "version": __version__,
    }
    if cfg.out:
        try:
            Path(cfg.out).write_text(text)
            Path(cfg.out + ".json").write_text(json.dumps(manifest, indent=2) + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write {cfg.out}: {exc}") from exc
        print(json.dumps(manifest))
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- analyze / verify -------------------------------------------------------


def _run_check(name: str, cfg: RunConfig, s, graph_cache: dict) -> dict:
    fam, q = cfg.family, cfg.q
    pub = PUBLISHED.get((fam, q))

    def graph():
        if "g" not in graph_cache:
            graph_cache["g"] = BipartiteGraph.from_structure(s)
        return graph_cache["g"]

    if name == "counts":
        H = s.incidence_matrix()
        k = block_size(fam, q)
        return {
            "n_conics": _entry(s.n_conic_blocks, q**3 - q**2),
            "n_points": _entry(s.n_points, n_points(fam, q)),
            "n_blocks": _entry(s.n_blocks, q**3),
            "point_degree": _entry(sorted(set(H.col_weights().tolist())), [q]),
            "block_size": _entry(sorted(set(H.row_weights().tolist())), [k]),
        }
    if name == "girth":
        return _entry(girth(graph()), expected_girth(fam, q))
    if name == "cycles6":
        rel, val = n6_published(fam, q)
        return _entry(count_6_cycles(graph()), val, "=" if rel == "=" else "<=")
    if name == "cycles8":
        if q > 9:
            raise UsageError("cycles8 is limited to q <= 9")
        return _entry(count_8_cycles(graph()))
    if name == "rank":
        H = s.incidence_matrix()
        r = rank_gf2(H)
        entry = _entry(H.n_cols - r, pub.dimension if pub else None)
        return {"rank": r, "dimension": entry.pop("value"), **entry}
    if name == "mindist-construct":
        w = min_weight_codeword(fam, GF(q))
        return {**_entry(w.weight, 2 * q), "is_codeword": is_codeword(w)}
    if name == "mindist-exhaustive":
        try:
            d = min_distance_exhaustive(s.incidence_matrix())
        except DimensionTooLarge as exc:
            raise UsageError(str(exc)) from exc
        return _entry(d, pub.min_distance if pub else 2 * q)
    if name == "kappa":
        hist = kappa_samples(s, 200, seed=cfg.seed)
        rel, val = kappa_published(fam, q)
        out = _entry(max(hist), val, rel)
        out["histogram"] = {str(k): v for k, v in sorted(hist.items())}
        return out
    raise UsageError(f"unknown check {name}")


def _matches(entry) -> list[bool]:
    if isinstance(entry, dict):
        own = [entry["match"]] if "match" in entry else []
        return own + [m for v in entry.values() if isinstance(v, dict) for m in _matches(v)]
    return []


def cmd_analyze(cfg: RunConfig) -> tuple[int, dict]:
    s = _structure(cfg)
    report = {"family": cfg.family, "q": cfg.q, "checks": {}}
    cache: dict = {}
    for name in cfg.checks or list(VERIFY_CHECKS):
        t0 = time.perf_counter()
        try:
            entry = _run_check(name, cfg, s, cache)
        except UsageError as exc:
            entry = {"error": str(exc)}
        entry["seconds"] = round(time.perf_counter() - t0, 3)
        report["checks"][name] = entry
    flags = _matches(report["checks"])
    report["matches"] = all(flags) if flags else None
    _emit(json.dumps(report, indent=2), cfg.out)
    return EXIT_OK, report


def cmd_verify(cfg: RunConfig) -> int:
    _, report = cmd_analyze(cfg)
    return EXIT_OK if report["matches"] is not False else EXIT_MISMATCH


# --- simulate ---------------------------------------------------------------


def _simulation_matrix(cfg: RunConfig):
    if cfg.alist is not None:
        try:
            return read_matrix(cfg.alist)
        except AlistError as exc:
            raise UsageError(f"{cfg.alist}: {exc}") from exc
        except OSError as exc:
            raise UsageError(f"cannot read {cfg.alist}: {exc}") from exc
    if cfg.gallager is not None:
        return gallager_code(GallagerSpec(**cfg.gallager))
    return _structure(cfg).incidence_matrix()


def cmd_simulate(cfg: RunConfig) -> int:
    H = _simulation_matrix(cfg)
    result = simulate_ber(
        H,
        cfg.snr,
        min_trials=cfg.min_trials,
        max_trials=cfg.max_trials,
        target_errors=cfg.target_errors,
        max_iter=cfg.max_iter,
        seed=cfg.seed,
    )
    result.config["run"] = asdict(cfg)
    if cfg.out:
        base = Path(cfg.out)
        stem = base.with_suffix("") if base.suffix in (".csv", ".json") else base
        try:
            if cfg.format in ("csv", "both"):
                stem.with_suffix(".csv").write_text(result.to_csv())
            if cfg.format in ("json", "both"):
                stem.with_suffix(".json").write_text(result.to_json() + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write {cfg.out}: {exc}") from exc
    else:
        sys.stdout.write(result.to_json() + "\n" if cfg.format == "json" else result.to_csv())
    return EXIT_OK


# --- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conicldpc", description="LDPC codes from conics over F_q.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def code_args(sp, required=True):
        sp.add_argument("--family", type=int, choices=(1, 2, 3), required=required)
        sp.add_argument("--q", type=int, required=required)

    for name in ("build", "export"):
        b = sub.add_parser(name, help="write the parity-check matrix")
        code_args(b)
        b.add_argument("--out", help="output file (a <out>.json manifest is written next to it)")
        b.add_argument("--format", choices=("alist", "json"), default="alist")

    for name, helptext in (("analyze", "report computed vs published values"), ("verify", "like analyze; exit 3 on mismatch")):
        a = sub.add_parser(name, help=helptext)
        code_args(a)
        a.add_argument("--checks", default=None, help="comma list from: " + ",".join(ALL_CHECKS))
        a.add_argument("--out", help="write the JSON report here instead of stdout")
        a.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("simulate", help="BER/FER curve over the AWGN channel")
    code_args(s, required=False)
    s.add_argument("--alist", help="parity-check matrix file (alist or JSON rows)")
    s.add_argument("--gallager", help="Gallager parameters, e.g. n=576,row=9,col=6,seed=1")
    s.add_argument("--snr", default="1:0.5:5", help="Eb/N0 grid in dB: start:step:stop or a comma list")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--min-trials", type=int, default=1000)
    s.add_argument("--max-trials", type=int, default=10_000)
    s.add_argument("--target-errors", type=int, default=100)
    s.add_argument("--max-iter", type=int, default=50)
    s.add_argument("--out", help="output path; .csv and/or .json are derived from it")
    s.add_argument("--format", choices=("csv", "json", "both"), default="both")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=ns.subcommand)
    for name in ("family", "q", "out", "format", "seed", "alist", "min_trials", "max_trials", "target_errors", "max_iter"):
        if getattr(ns, name, None) is not None:
            setattr(cfg, name, getattr(ns, name))
    if getattr(ns, "checks", None):
        cfg.checks = [c.strip() for c in ns.checks.split(",") if c.strip()]
    if ns.subcommand == "simulate":
        try:
            cfg.snr = snr_grid(ns.snr)
            if ns.gallager:
                cfg.gallager = GallagerSpec.parse(ns.gallager).as_dict()
        except (ValueError, InvalidDivisibility) as exc:
            raise UsageError(str(exc)) from exc
    cfg.validate()
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        if cfg.subcommand in ("build", "export"):
            return cmd_build(cfg)
        if cfg.subcommand == "analyze":
            return cmd_analyze(cfg)[0]
        if cfg.subcommand == "verify":
            return cmd_verify(cfg)
        return cmd_simulate(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
