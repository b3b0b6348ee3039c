"""Command-line front end: ``resonance <subcommand> [flags]``.

Every run resolves a :class:`RunConfig` (defaults, then an optional JSON
config file, then explicit flags), validates it in full before dispatch,
and writes a JSON report that embeds the resolved config.  The wall-clock
fields live under ``run`` so that two runs with the same config and cache
differ only there.  ``--csv`` writes the plot data; ``--figures``
additionally renders a PNG next to it.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from resonance.errors import ConfigError, ResonanceError

REPORT_FORMAT = "resonance-report"
REPORT_VERSION = 1

COMMANDS = (
    "sieve",
    "coeffs",
    "resonate",
    "appendix",
    "moments",
    "certify",
    "search-critical",
    "search-offline",
    "search-kronecker",
    "align",
    "verify",
)

# Defaults that differ from the RunConfig defaults for one subcommand.
COMMAND_DEFAULTS = {
    "search-offline": {"sigma": 0.75, "T": 1e5},
    "search-kronecker": {"sigma": 0.75, "T": 1e5},
    "certify": {"T": 1e5},
}


@dataclass
class RunConfig:
    """Everything a run depends on.  Field names double as flag and JSON keys."""

    command: str = "verify"
    specs: list = field(default_factory=lambda: ["zeta"])
    large: list = field(default_factory=list)
    small: list = field(default_factory=list)
    T: float = 1e4
    delta: float = 0.1
    lam: float = 1.2
    sigma: float = 0.5
    sigma0: float = 0.6
    alpha: float = 0.7
    A: float | None = None
    beta: float = 5.0
    C: float | None = None
    M: int = 1
    phis: list = field(default_factory=list)
    q: float = 1.0
    pi: list | None = None
    kind: str = "critical"
    ell: float | None = None
    support: list | None = None
    untruncated: bool = False
    eps_P: float = 0.1
    x_eps: float = 2.0
    grid_count: int | None = None
    grid_step: float | None = None
    K: int = 64
    seeds: list = field(default_factory=lambda: [0, 1, 2, 3, 4])
    limit: int = 1000
    n_max: int = 100
    cusp_n_max: int = 20000
    primes: list = field(default_factory=list)
    frequencies: list = field(default_factory=list)
    phases: list = field(default_factory=list)
    weights: list = field(default_factory=list)
    T1: float = 0.0
    T2: float | None = None
    checks: list | None = None
    certificate: str | None = None
    out: str | None = None
    csv: str | None = None
    figures: bool = False
    cache_dir: str | None = None


_FIELD_NAMES = {f.name for f in fields(RunConfig)}
_LIST_TYPES = {
    "specs": str,
    "large": str,
    "small": str,
    "phis": float,
    "pi": int,
    "support": float,
    "seeds": int,
    "primes": int,
    "frequencies": float,
    "phases": float,
    "weights": float,
    "checks": str,
}
_SCALAR_TYPES = {
    "T": float,
    "delta": float,
    "lam": float,
    "sigma": float,
    "sigma0": float,
    "alpha": float,
    "A": float,
    "beta": float,
    "C": float,
    "M": int,
    "q": float,
    "kind": str,
    "ell": float,
    "eps_P": float,
    "x_eps": float,
    "grid_count": int,
    "grid_step": float,
    "K": int,
    "limit": int,
    "n_max": int,
    "cusp_n_max": int,
    "T1": float,
    "T2": float,
    "certificate": str,
    "out": str,
    "csv": str,
    "cache_dir": str,
}
_FLAGS = {"untruncated", "figures"}


class _Parser(argparse.ArgumentParser):
    """Report usage errors as :class:`ConfigError` instead of exiting."""

    def error(self, message):
        raise ConfigError([message])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="resonance", description="Resonance-method experiments on L-functions.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON file with RunConfig fields; explicit flags override it")
    for name, typ in _SCALAR_TYPES.items():
        parser.add_argument(f"--{name.replace('_', '-')}", dest=name, type=typ, default=argparse.SUPPRESS)
    for name, typ in _LIST_TYPES.items():
        parser.add_argument(f"--{name.replace('_', '-')}", dest=name, type=typ, nargs="+", default=argparse.SUPPRESS)
    for name in _FLAGS:
        parser.add_argument(f"--{name}", dest=name, action="store_true", default=argparse.SUPPRESS)
    return parser


def resolve_config(argv) -> RunConfig:
    """Defaults, then ``--config``, then explicit flags."""
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    config_path = ns.pop("config", None)
    merged = dict(COMMAND_DEFAULTS.get(command, {}))
    if config_path:
        try:
            loaded = json.loads(Path(config_path).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError([f"cannot read config {config_path}: {exc}"]) from exc
        unknown = sorted(set(loaded) - _FIELD_NAMES)
        if unknown:
            raise ConfigError([f"unknown config key {k!r}" for k in unknown])
        loaded.pop("command", None)
        merged.update(loaded)
    merged.update(ns)
    return RunConfig(command=command, **merged)


# -- validation ---------------------------------------------------------------------


def _parse_specs(labels, cfg, errors, what):
    from resonance.lfunc import parse_spec

    out = []
    for text in labels:
        try:
            out.append(parse_spec(text, cusp_n_max=cfg.cusp_n_max, cache_dir=cfg.cache_dir))
        except (ResonanceError, ValueError) as exc:
            errors.append(f"{what}: cannot resolve {text!r} ({exc})")
    return out


def validate(cfg: RunConfig) -> dict:
    """Check every precondition of ``cfg.command``; return the resolved specs.

    Raises:
        ConfigError: listing all violations at once.
    """
    errs: list[str] = []
    cmd = cfg.command
    need = lambda cond, msg: cond or errs.append(msg)  # noqa: E731
    resolved = {}
    uses_specs = cmd in ("coeffs", "appendix", "moments", "certify", "search-critical", "search-kronecker") or (
        cmd == "resonate" and cfg.kind == "critical"
    )
    uses_lists = cmd == "search-offline" or (cmd == "resonate" and cfg.kind == "offline")
    if uses_specs:
        need(len(cfg.specs) > 0, "specs: at least one L-function is required")
        resolved["specs"] = _parse_specs(cfg.specs, cfg, errs, "specs")
    if uses_lists:
        need(len(cfg.large) + len(cfg.small) > 0, "large/small: at least one L-function is required")
        resolved["large"] = _parse_specs(cfg.large, cfg, errs, "large")
        resolved["small"] = _parse_specs(cfg.small, cfg, errs, "small")
    if cmd not in ("sieve", "coeffs", "align", "verify"):
        need(cfg.T > 16, "T: must exceed 16 so that log log T > 1")
    if cmd in ("appendix", "moments", "search-critical") or (cmd == "resonate" and cfg.kind == "critical"):
        need(0 < cfg.delta < 1, "delta: must lie in (0, 1)")
        need(cfg.lam > 1, "lam: must exceed 1")
        need(cfg.eps_P > 0, "eps_P: must be positive")
        if cfg.ell is not None:
            need(cfg.ell > 0, "ell: must be positive")
        if cfg.support is not None:
            need(len(cfg.support) == 2 and 2 <= cfg.support[0] < cfg.support[1], "support: need two bounds 2 <= lo < hi")
    if cmd == "resonate":
        need(cfg.kind in ("critical", "offline"), "kind: must be 'critical' or 'offline'")
    if uses_lists:
        need(cfg.beta > 0, "beta: must be positive")
        need(cfg.x_eps >= 2, "x_eps: must be at least 2")
    if cmd in ("search-critical", "search-offline"):
        need(cfg.K >= 1, "K: must be positive")
        need(len(cfg.seeds) > 0, "seeds: at least one seed is required")
    if cmd == "search-critical" and cfg.grid_count is not None:
        need(cfg.grid_count > 0, "grid_count: must be positive")
    if cmd in ("search-offline", "search-kronecker", "resonate") and cfg.C is not None:
        need(cfg.C > 0, "C: must be positive")
    if cmd in ("certify", "search-offline", "search-kronecker"):
        need(0 < cfg.alpha <= 1, "alpha: must lie in (0, 1]")
        need(0.5 < cfg.sigma0 < 3, "sigma0: must lie in (1/2, 3)")
        if cfg.A is not None:
            need(1.25 * cfg.T <= cfg.A <= 1.75 * cfg.T, "A: must lie in [5T/4, 7T/4]")
    if cmd in ("search-offline", "search-kronecker"):
        need(0.5 < cfg.sigma <= 1, "sigma: must lie in (1/2, 1]")
        if cfg.certificate is None:
            need(cfg.sigma > cfg.sigma0, "sigma: must exceed the certificate edge sigma0")
        else:
            need(Path(cfg.certificate).is_file(), f"certificate: no such file {cfg.certificate}")
    if cmd == "search-kronecker":
        need(cfg.sigma < 1, "sigma: must be below 1 for the alignment pipeline")
        need(len(cfg.phis) == len(cfg.specs), "phis: one phase per L-function is required")
        need(cfg.M >= 1, "M: must be a positive integer")
    if cmd == "moments":
        need(cfg.q > 0, "q: must be positive")
        need(-1 < cfg.sigma - 0.5 < 1, "sigma: must lie in (-1/2, 3/2)")
        if cfg.pi is not None:
            need(all(0 <= i < len(cfg.specs) for i in cfg.pi), "pi: indices must refer to specs")
    if cmd == "appendix":
        need(0.5 <= cfg.sigma < 1, "sigma: must lie in [1/2, 1)")
    if cmd == "sieve":
        need(cfg.limit >= 2, "limit: must be at least 2")
    if cmd == "coeffs":
        need(cfg.n_max >= 1, "n_max: must be positive")
    if cmd == "align":
        n = len(cfg.primes) or len(cfg.frequencies)
        need(n > 0, "primes/frequencies: one of them is required")
        need(not (cfg.primes and cfg.frequencies), "primes/frequencies: give one, not both")
        need(len(cfg.phases) == n and len(cfg.weights) == n, "phases/weights: one per frequency")
        need(all(w > 0 for w in cfg.weights), "weights: must be positive")
        need(cfg.T2 is not None and cfg.T2 > cfg.T1, "T2: must exceed T1")
        need(cfg.M >= 1, "M: must be a positive integer")
        if cfg.grid_step is not None:
            need(cfg.grid_step > 0, "grid_step: must be positive")
    if cmd == "verify" and cfg.checks:
        from resonance.verify import CHECKS

        known = {name for name, _ in CHECKS}
        need(set(cfg.checks) <= known, f"checks: unknown names {sorted(set(cfg.checks) - known)}")
    if cfg.figures:
        need(cfg.csv is not None or cfg.out is not None, "figures: needs --csv or --out to place the PNG")
    if errs:
        raise ConfigError(errs)
    return resolved


# -- subcommands ----------------------------------------------------------------------


def _write_rows(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _critical_resonator(cfg, specs, with_T=True):
    from resonance.resonator import build_resonator_critical

    return build_resonator_critical(
        specs,
        cfg.delta,
        cfg.lam,
        cfg.T if with_T else None,
        cfg.eps_P,
        ell=cfg.ell,
        support=tuple(cfg.support) if cfg.support else None,
        untruncated=cfg.untruncated,
    )


def _certificate(cfg, specs):
    from resonance.certify import GoodIntervalCertificate
    from resonance.search import certify_for_search

    if cfg.certificate is None:
        return certify_for_search(specs, cfg.sigma0, cfg.T, cfg.alpha, cfg.A)
    data = json.loads(Path(cfg.certificate).read_text())
    if "result" in data:  # a full report from ``resonance certify``
        data = data["result"]
    return GoodIntervalCertificate.from_dict(data)


def run_sieve(cfg, resolved):
    from resonance.arith import sieve_primes

    table = sieve_primes(cfg.limit)
    result = {"limit": cfg.limit, "count": len(table), "largest": int(table.primes[-1]) if len(table) else None}
    rows = [[i + 1, int(p)] for i, p in enumerate(table.primes)]
    return result, (["index", "prime"], rows), None


def run_coeffs(cfg, resolved):
    from resonance.arith.cache import cache_path, default_cache_dir

    out, rows = [], []
    n = np.arange(1, cfg.n_max + 1)
    for spec in resolved["specs"]:
        a = spec.coefficients(n)
        entry = {"label": spec.label, "kind": spec.kind, "degree": spec.degree, "n_max": cfg.n_max}
        if spec.kind == "cusp":
            directory = cfg.cache_dir or default_cache_dir()
            entry["cache_file"] = str(cache_path(directory, spec.label, spec.series.n_max))
        entry["head"] = [[float(v.real), float(v.imag)] for v in a[:20]]
        out.append(entry)
        rows += [[int(k), spec.label, float(v.real), float(v.imag)] for k, v in zip(n, a)]
    return {"functions": out}, (["n", "label", "re", "im"], rows), None


def run_resonate(cfg, resolved):
    from resonance.resonator import build_resonator_offline

    if cfg.kind == "critical":
        res = _critical_resonator(cfg, resolved["specs"])
    else:
        C = cfg.C if cfg.C is not None else 2.0 * (len(cfg.large) + len(cfg.small))
        res = build_resonator_offline(resolved["large"], resolved["small"], cfg.beta, cfg.T, C, cfg.x_eps)
    result = {"resonator": res.to_dict(), "prime_count": int(res.primes.size), "empty": res.empty}
    if res.kind == "critical" and not res.empty:
        result["mass"] = res.mass()
    rows = [[int(p), float(r.real), float(r.imag)] for p, r in zip(res.primes, res.r)]
    return result, (["p", "r_re", "r_im"], rows), None


def run_appendix(cfg, resolved):
    from resonance.plotting import plot_appendix
    from resonance.resonator import verify_appendix

    # A fixed ell defines log X on its own; T would contradict it.
    res = _critical_resonator(cfg, resolved["specs"], with_T=cfg.ell is None)
    report = verify_appendix(res, resolved["specs"], cfg.sigma)
    keys = ["id", "h", "computed", "predicted", "ratio"]
    rows = [[e.get(k, "") for k in keys] for e in report.entries]
    return report.to_dict(), (keys, rows), lambda path: plot_appendix(report.entries, path)


def run_moments(cfg, resolved):
    from resonance.moments import sd_diagnostics, twisted_moment
    from resonance.resonator import prime_products

    specs = resolved["specs"]
    res = _critical_resonator(cfg, specs)
    pi = cfg.pi
    est = twisted_moment(specs, res, pi, cfg.q, cfg.sigma, cfg.T, cfg.grid_step)
    prod = prime_products(res, specs, pi, cfg.q, cfg.sigma)
    result = {
        "I": est.to_dict(),
        "prime_products": prod.to_dict(),
        "ratio": est.value / prod.R_sigma,
        "ratio_error": est.error / prod.R_sigma,
    }
    rows = [["I", est.value, est.error]]
    if res.truncated and not res.empty:
        sd = sd_diagnostics(specs, res, pi, cfg.q, cfg.sigma, cfg.T, cfg.grid_step)
        result["diagnostics"] = {k: v.to_dict() for k, v in sd.items()}
        rows += [[k, v.value, v.error] for k, v in sd.items() if k != "I"]
    return result, (["quantity", "value", "error"], rows), None


def run_certify(cfg, resolved):
    from resonance.certify import certify_good_interval

    A = cfg.A if cfg.A is not None else 1.5 * cfg.T
    cert = certify_good_interval(resolved["specs"], cfg.sigma0, cfg.T, cfg.alpha, A)
    rows = [[label, count] for label, count in sorted(cert.counts.items())]
    return cert.to_dict(), (["label", "zeros"], rows), None


def _search_outputs(report):
    from resonance.plotting import plot_search

    return report.to_dict(), report.csv_rows(), lambda path: plot_search(report, path)


def run_search_critical(cfg, resolved):
    from resonance.search import search_critical

    report = search_critical(
        resolved["specs"],
        cfg.T,
        cfg.delta,
        cfg.lam,
        cfg.grid_count,
        K=cfg.K,
        seeds=tuple(cfg.seeds),
        ell=cfg.ell,
        support=tuple(cfg.support) if cfg.support else None,
        untruncated=cfg.untruncated,
    )
    return _search_outputs(report)


def run_search_offline(cfg, resolved):
    from resonance.search import search_offline

    cert = _certificate(cfg, resolved["large"] + resolved["small"])
    report = search_offline(
        resolved["large"], resolved["small"], cfg.sigma, cfg.T, cfg.beta, cfg.C, cert, K=cfg.K, seeds=tuple(cfg.seeds), x_eps=cfg.x_eps
    )
    return _search_outputs(report)


def run_search_kronecker(cfg, resolved):
    from resonance.search import search_kronecker

    cert = _certificate(cfg, resolved["specs"])
    C = cfg.C if cfg.C is not None else 1.0
    report = search_kronecker(resolved["specs"], cfg.sigma, cfg.T, cfg.phis, C, cfg.M, cert, grid_step=cfg.grid_step)
    return _search_outputs(report)


def run_align(cfg, resolved):
    from resonance.align import AlignmentProblem, align_search
    from resonance.plotting import plot_alignment

    if cfg.primes:
        problem = AlignmentProblem.from_primes(cfg.primes, cfg.phases, cfg.weights, cfg.T1, cfg.T2, cfg.M)
    else:
        problem = AlignmentProblem(tuple(cfg.frequencies), tuple(cfg.phases), tuple(cfg.weights), cfg.T1, cfg.T2, cfg.M)
    result = align_search(problem, cfg.grid_step)
    span = 50 * result.grid_step
    t = np.linspace(max(problem.T1, result.t_star - span), min(problem.T2, result.t_star + span), 2001)
    rows = [[float(a), float(b)] for a, b in zip(t, problem.objective(t))]
    return (
        {"problem": problem.to_dict(), "alignment": result.to_dict()},
        (["t", "objective"], rows),
        lambda path: plot_alignment(problem, result, path, span),
    )


def run_verify(cfg, resolved):
    from resonance.verify import run_checks

    checks = run_checks(cfg.checks)
    result = {"checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks], "all_passed": all(c.passed for c in checks)}
    rows = [[c.name, c.passed, c.detail] for c in checks]
    return result, (["check", "passed", "detail"], rows), None


DISPATCH = {
    "sieve": run_sieve,
    "coeffs": run_coeffs,
    "resonate": run_resonate,
    "appendix": run_appendix,
    "moments": run_moments,
    "certify": run_certify,
    "search-critical": run_search_critical,
    "search-offline": run_search_offline,
    "search-kronecker": run_search_kronecker,
    "align": run_align,
    "verify": run_verify,
}


# -- reporting --------------------------------------------------------------------------


def _plain(obj):
    """JSON-safe copy: numpy scalars unwrapped, complex split, non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(float(obj.real)), _plain(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Validate, dispatch and write the outputs; return ``(exit status, report)``."""
    from resonance import __version__

    t0 = time.perf_counter()
    resolved = validate(cfg)
    result, table, figure = DISPATCH[cfg.command](cfg, resolved)
    report = {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "package_version": __version__,
        "command": cfg.command,
        "config": asdict(cfg),
        "result": result,
        "run": {
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "elapsed_seconds": round(time.perf_counter() - t0, 3),
        },
    }
    if cfg.csv:
        _write_rows(cfg.csv, *table)
    if cfg.figures:
        base = Path(cfg.csv or cfg.out)
        if figure is None:
            report["run"]["figure"] = None
        else:
            report["run"]["figure"] = str(figure(base.with_suffix(".png")))
    status = 0
    if cfg.command == "verify" and not result["all_passed"]:
        status = 1
    return status, report


def _error_object(exc: BaseException) -> dict:
    if isinstance(exc, ResonanceError):
        d = exc.to_dict()
        messages = d.pop("messages", None) or [d.pop("message")]
        d.pop("message", None)
        return {"error": {"type": d["type"], "code": d["code"], "messages": messages}}
    return {"error": {"type": type(exc).__name__, "code": "internal", "messages": [str(exc)]}}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    out = None
    try:
        cfg = resolve_config(argv)
        out = cfg.out
        status, report = run(cfg)
        text = dumps(report)
    except ResonanceError as exc:
        status, text = 2, dumps(_error_object(exc))
    except Exception as exc:  # unexpected failures still yield an error object
        status, text = 1, dumps(_error_object(exc))
    if out:
        Path(out).write_text(text)
        print(f"wrote {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
