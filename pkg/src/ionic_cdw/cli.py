"""Command-line front end: ``scan``, ``verify`` and ``contours``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

SCHEMA = "# schema v1"
WORKERS_ENV = "IONIC_CDW_WORKERS"
PARAM_KEYS = ("t", "U", "V", "delta", "beta")
DEFAULTS = dict(t="0.1", U="0", V="1", delta="2", beta="20", L="1", seed="0", tol=None, out=None,
                only=None, side=None, max_length="10")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    L: int = 1
    t: str = "0.1"
    U: str = "0"
    V: str = "1"
    delta: str = "2"
    beta: str = "20"
    seed: int = 0
    tol: float | None = None
    out: str | None = None
    only: list = field(default_factory=list)
    side: int | None = None
    max_length: int = 10

    def to_dict(self) -> dict:
        return asdict(self)


def fmt(x) -> str:
    return f"{float(x):.12g}"


def parse_range(text: str) -> np.ndarray:
    """``x`` or ``start:stop:steps`` (linear) or ``start:stop:steps:log``."""
    parts = str(text).strip().split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) in (3, 4):
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 0:
                raise ConfigError(f"invalid range {text!r}: negative step count")
            if n == 0:
                return np.array([])
            if len(parts) == 4:
                if parts[3] != "log":
                    raise ConfigError(f"invalid range {text!r}: unknown spacing {parts[3]!r}")
                if a <= 0 or b <= 0:
                    raise ConfigError(f"invalid range {text!r}: log grid needs positive ends")
                return np.geomspace(a, b, n)
            return np.linspace(a, b, n)
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"invalid range {text!r}") from None
    raise ConfigError(f"invalid range {text!r}; use x or start:stop:steps[:log]")


def read_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{n}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            k = k.replace("-", "_")
            if k not in DEFAULTS:
                raise ConfigError(f"{path}:{n}: unknown key {k!r}")
            out[k] = v
    return out


def make_config(args) -> RunConfig:
    vals = dict(DEFAULTS)
    if args.config:
        vals.update(read_config_file(args.config))
    for k in DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            vals[k] = v
    only = vals["only"]
    if isinstance(only, str):
        only = [s for s in only.replace(",", " ").split() if s]
    try:
        return RunConfig(
            subcommand=args.command, L=int(vals["L"]), t=str(vals["t"]), U=str(vals["U"]), V=str(vals["V"]),
            delta=str(vals["delta"]), beta=str(vals["beta"]), seed=int(vals["seed"]),
            tol=None if vals["tol"] is None else float(vals["tol"]), out=vals["out"], only=list(only or []),
            side=None if vals["side"] is None else int(vals["side"]), max_length=int(vals["max_length"]))
    except ValueError as e:
        raise ConfigError(str(e)) from None


def workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer") from None


def _map(fn, items):
    n = workers()
    if n > 1 and len(items) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(n) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    try:
        return open(path, "w", newline=""), True
    except OSError as e:
        raise ConfigError(f"cannot write {path}: {e.strerror}") from None


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

def scan_grid(cfg: RunConfig):
    axes = [parse_range(getattr(cfg, k)) for k in PARAM_KEYS]
    if any(a.size == 0 for a in axes):
        raise ConfigError("empty grid")
    pts = sorted({tuple(float(x) for x in p) for p in np.array(np.meshgrid(*axes, indexing="ij")).reshape(5, -1).T})
    return pts


def scan_row(point):
    from .certify import small_lattice
    from .model import ModelParams, charge_projectors
    from .thermal import ModelState
    torus, fock = small_lattice()
    p = ModelParams(*point)
    st = ModelState(p, torus, fock)
    g = st.gibbs
    o = torus.origin
    qo = fock.charge_diag(o)
    row = list(point)
    row += [g.expect_diag(qo * fock.charge_diag(k)) for k in range(torus.n_sites)]
    row.append(g.expect_diag(qo ** 2))
    row.append(g.expect_diag(charge_projectors(o, torus, fock).zero))
    w = g.eig.eigenvalues
    row.append(w[0])
    row.append(w[1] - w[0])
    return row


def scan_header():
    from .certify import small_lattice
    torus, _ = small_lattice()
    stag = [f"stag_{j1}_{j2}" for j1, j2 in torus.sites]
    return list(PARAM_KEYS) + stag + ["q2_o", "P0_o", "ground_energy", "gap"]


def cmd_scan(cfg: RunConfig) -> int:
    if cfg.L != 1:
        raise ConfigError(f"scan uses full exact diagonalization and needs L = 1, got L = {cfg.L}")
    from .model import ModelParams
    pts = scan_grid(cfg)
    for p in pts:
        try:
            ModelParams(*p)
        except ValueError as e:
            raise ConfigError(str(e)) from None
    rows = _map(scan_row, pts)
    fh, close = _open_out(cfg.out)
    try:
        fh.write(SCHEMA + " scan\n")
        fh.write(",".join(scan_header()) + "\n")
        for r in rows:
            fh.write(",".join(fmt(x) for x in r) + "\n")
    finally:
        if close:
            fh.close()
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(cfg: RunConfig) -> int:
    from .certify import SUITE, run_suite, with_tolerance
    unknown = [n for n in cfg.only if n not in SUITE]
    if unknown:
        raise ConfigError(f"unknown theorem id(s) {', '.join(unknown)}; choose from {', '.join(SUITE)}")
    results = run_suite(cfg.only or None, cfg.seed, workers())
    out = cfg.out or "verify_report.txt"
    lines, records, failed = [], [], {}
    for name, reports in results.items():
        if cfg.tol is not None:
            reports = [with_tolerance(r, cfg.tol) for r in reports]
        bad = [r for r in reports if not r.passed]
        checked = sum(r.status == "checked" for r in reports)
        lines.append(f"{'PASS' if not bad else 'FAIL'} {name}: {len(reports)} checks, {checked} with hypotheses met, "
                     f"{len(bad)} failed")
        for r in bad:
            lines.append("    " + r.line())
            failed.setdefault(name, r)
        for r in reports:
            rec = r.record()
            rec["suite"] = name
            records.append(json.dumps(rec, sort_keys=True, default=str))
    try:
        with open(out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        with open(out + ".jsonl", "w") as fh:
            fh.write("\n".join(records) + "\n")
    except OSError as e:
        raise ConfigError(f"cannot write {out}: {e.strerror}") from None
    for line in lines:
        if not line.startswith("    "):
            print(line)
    if failed:
        for name, r in failed.items():
            print(f"failed: {name} first at {r.line()}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# contours
# ---------------------------------------------------------------------------

def cmd_contours(cfg: RunConfig) -> int:
    from .contours import MAX_COUNT_SIDE, count_contours_range
    from .lattice import geometric_torus
    side = cfg.side if cfg.side is not None else 2 * cfg.L
    if side % 2:
        raise ConfigError(f"side {side} is odd; geometric tori have even side 2L")
    if side < 2:
        raise ConfigError(f"side must be >= 2, got {side}")
    if side > MAX_COUNT_SIDE:
        raise ConfigError(f"side {side} exceeds the counting guard (side <= {MAX_COUNT_SIDE})")
    if cfg.max_length < 1:
        raise ConfigError("max-length must be >= 1")
    torus = geometric_torus(side)
    counts = count_contours_range(torus, range(1, cfg.max_length + 1))
    fh, close = _open_out(cfg.out)
    try:
        fh.write(SCHEMA + f" contours side={side}\n")
        fh.write("length,count,reference,ratio\n")
        for c in counts:
            fh.write(f"{c.length},{c.count},{fmt(c.reference)},{fmt(c.ratio)}\n")
    finally:
        if close:
            fh.close()
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ionic-cdw", description="Finite-volume checks for the extended ionic Hubbard model.")
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; command-line flags override it")
    common.add_argument("--L", type=int)
    for k in PARAM_KEYS:
        common.add_argument(f"--{k}", help="value or start:stop:steps[:log]")
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float, help="absolute tolerance applied to every check")
    common.add_argument("--out", help="output path ('-' for stdout)")
    sub.add_parser("scan", parents=[common], help="grid of thermal observables (CSV)")
    v = sub.add_parser("verify", parents=[common], help="run the verification suites")
    v.add_argument("--only", nargs="+", help="theorem ids to run")
    c = sub.add_parser("contours", parents=[common], help="contour counts on a geometric torus (CSV)")
    c.add_argument("--side", type=int)
    c.add_argument("--max-length", dest="max_length", type=int)
    return ap


COMMANDS = {"scan": cmd_scan, "verify": cmd_verify, "contours": cmd_contours}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.subcommand](cfg)
    except (ConfigError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
