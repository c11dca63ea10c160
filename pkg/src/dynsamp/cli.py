"""Command-line front end: ``dynsamp <subcommand> --config CFG.json --out DIR``.

Each subcommand reads one JSON object.  Unknown keys are rejected, every
default is written back into ``provenance.json``, and each output file carries
the config hash and seed.  Exit status: 0 success, 1 operation failure,
2 configuration or file error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from . import __version__
from . import io as dio
from .frames import (
    NoCertificateError,
    RegularityError,
    analytic_frame_bounds,
    density_certificate,
    empirical_frame_bounds,
    finite_set_decay,
    lemma_constants,
    regularity,
)
from .reconstruct import PRNG_ALGORITHM, NoiseSpec, add_noise, noise_sweep, recon_error, reconstruct
from .sampling import (
    InvalidPatternError,
    PeriodicPattern,
    SpaceTimeSamples,
    WindowCoverageError,
    banach_density,
    collect,
    explicit,
    sublattice,
)
from .signals import FrequencyGrid, Signal, evolve
from .spectral import completeness_check, diagnostics

SUBCOMMANDS = ("evolve", "sample", "reconstruct", "diagnose", "frame-bounds", "density", "noise-sweep", "decay")


class ConfigError(Exception):
    def __init__(self, field: str, msg: str):
        self.field = field
        super().__init__(f"config field '{field}': {msg}")


class OperationError(Exception):
    pass


# -- schema -----------------------------------------------------------------

_REQUIRED = object()

SCHEMA: dict[str, dict] = {
    "evolve": {"kernel": _REQUIRED, "signal": None, "signal_generator": None, "steps": 1},
    "sample": {
        "kernel": _REQUIRED,
        "signal": None,
        "signal_generator": None,
        "pattern": _REQUIRED,
        "N": _REQUIRED,
        "window": None,
        "noise": None,
    },
    "reconstruct": {
        "kernel": _REQUIRED,
        "pattern": _REQUIRED,
        "N": _REQUIRED,
        "samples": None,
        "signal_window": None,
        "signal": None,
        "signal_generator": None,
        "noise": None,
        "period": None,
    },
    "diagnose": {"kernel": _REQUIRED, "m": _REQUIRED, "L": 1, "N": _REQUIRED, "grid_M": 1024, "rank_tol": None},
    "frame-bounds": {
        "kernel": _REQUIRED,
        "pattern": _REQUIRED,
        "N": _REQUIRED,
        "window": _REQUIRED,
        "interior_margin": None,
        "grid_M": 1024,
        "method": "empirical",
    },
    "density": {
        "kernel": _REQUIRED,
        "pattern": _REQUIRED,
        "N": _REQUIRED,
        "window": _REQUIRED,
        "interior_margin": None,
        "grid_M": 1024,
        "l_values": [8, 16, 32, 64],
    },
    "noise-sweep": {
        "kernel": _REQUIRED,
        "pattern": _REQUIRED,
        "N": _REQUIRED,
        "signal": None,
        "signal_generator": None,
        "sigmas": _REQUIRED,
        "trials": 100,
        "seed": 0,
        "grid_M": 1024,
        "mode": "complex",
    },
    "decay": {"kernel": _REQUIRED, "locations": _REQUIRED, "dims": _REQUIRED, "N": None, "window": "centered"},
}

for _spec in SCHEMA.values():
    _spec.setdefault("out", None)


def resolve_config(sub: str, raw: dict, grid_override: int | None = None) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    schema = SCHEMA[sub]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(unknown[0], f"unknown field for '{sub}'")
    cfg = {}
    for key, default in schema.items():
        if key in raw:
            cfg[key] = raw[key]
        elif default is _REQUIRED:
            raise ConfigError(key, "missing required field")
        else:
            cfg[key] = default
    if grid_override is not None:
        if "grid_M" not in schema:
            raise ConfigError("grid_M", f"'{sub}' takes no frequency grid")
        cfg["grid_M"] = grid_override
    return cfg


def config_hash(sub: str, cfg: dict) -> str:
    blob = json.dumps({"subcommand": sub, "config": cfg}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _primary_seed(cfg: dict):
    for key in ("seed",):
        if cfg.get(key) is not None:
            return cfg[key]
    for key in ("noise", "signal_generator"):
        if isinstance(cfg.get(key), dict) and "seed" in cfg[key]:
            return cfg[key]["seed"]
    return None


# -- field parsing ------------------------------------------------------------


def _int(cfg, key, lo=None):
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(key, f"expected integer, got {v!r}")
    if lo is not None and v < lo:
        raise ConfigError(key, f"must be >= {lo}")
    return v


def _interval(cfg, key):
    v = cfg[key]
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in v)):
        raise ConfigError(key, "expected [lo, hi] integers")
    if v[1] < v[0]:
        raise ConfigError(key, "hi < lo")
    return int(v[0]), int(v[1])


def _path(base: Path, cfg, key) -> Path:
    v = cfg[key]
    if not isinstance(v, str):
        raise ConfigError(key, "expected a file path")
    p = Path(v)
    p = p if p.is_absolute() else base / p
    if not p.is_file():
        raise ConfigError(key, f"file not found: {p}")
    return p


def _kernel(r: "Run"):
    path = _path(r.base, r.cfg, "kernel")
    try:
        k = dio.read_kernel(path)
    except dio.FormatError as exc:
        raise ConfigError("kernel", str(exc)) from None
    r.extra["kernel_sha256"] = dio.kernel_hash(k)
    return k


def _signal(base, cfg) -> Signal:
    if cfg.get("signal") is not None and cfg.get("signal_generator") is not None:
        raise ConfigError("signal", "give either 'signal' or 'signal_generator', not both")
    if cfg.get("signal") is not None:
        try:
            return dio.read_signal(_path(base, cfg, "signal"))
        except dio.FormatError as exc:
            raise ConfigError("signal", str(exc)) from None
    gen = cfg.get("signal_generator")
    if gen is None:
        raise ConfigError("signal", "missing 'signal' or 'signal_generator'")
    if not isinstance(gen, dict) or set(gen) - {"seed", "support_width", "start", "mode"}:
        raise ConfigError("signal_generator", "allowed keys: seed, support_width, start, mode")
    try:
        seed, width = int(gen["seed"]), int(gen["support_width"])
    except (KeyError, TypeError, ValueError):
        raise ConfigError("signal_generator", "needs integer 'seed' and 'support_width'") from None
    start = int(gen.get("start", 0))
    mode = gen.get("mode", "complex")
    if width < 1 or mode not in ("real", "complex"):
        raise ConfigError("signal_generator", "support_width >= 1 and mode in {real, complex}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    vals = rng.standard_normal(width)
    if mode == "complex":
        vals = vals + 1j * rng.standard_normal(width)
    return Signal(start, vals)


def _pattern(base, cfg):
    v = cfg["pattern"]
    try:
        if isinstance(v, dict) and set(v) <= {"m", "L"} and {"m", "L"} <= set(v):
            return sublattice(int(v["m"]), int(v["L"]))
        if isinstance(v, dict) and set(v) == {"file"}:
            return dio.read_pattern(_path(base, {"pattern": v["file"]}, "pattern"))
        if isinstance(v, dict) and "explicit" in v and set(v) <= {"explicit", "window"}:
            win = tuple(v["window"]) if "window" in v else None
            return explicit(v["explicit"], win)
    except (InvalidPatternError, dio.FormatError, TypeError, ValueError) as exc:
        raise ConfigError("pattern", str(exc)) from None
    raise ConfigError("pattern", "expected {m, L}, {file} or {explicit, window}")


def _noise(cfg):
    v = cfg.get("noise")
    if v is None:
        return None
    if not isinstance(v, dict) or set(v) - {"sigma", "seed", "mode"} or "sigma" not in v:
        raise ConfigError("noise", "expected {sigma, seed, mode}")
    try:
        return NoiseSpec(float(v["sigma"]), int(v.get("seed", 0)), v.get("mode", "complex"))
    except ValueError as exc:
        raise ConfigError("noise", str(exc)) from None


def _hull(kernel, f, N):
    return f.start + min(0, (N - 1) * kernel.start), f.end + max(0, (N - 1) * kernel.end)


# -- subcommands --------------------------------------------------------------


class Run:
    def __init__(self, sub, cfg, base, out: Path, allow_partial=False):
        self.sub, self.cfg, self.base, self.out = sub, cfg, base, out
        self.allow_partial = allow_partial
        self.hash = config_hash(sub, cfg)
        self.seed = _primary_seed(cfg)
        self.extra: dict = {}

    @property
    def stamp(self) -> str:
        return f"config_sha256={self.hash} seed={'none' if self.seed is None else self.seed}"

    def provenance(self) -> dict:
        return {
            "subcommand": self.sub,
            "config": self.cfg,
            "config_sha256": self.hash,
            "seed": self.seed,
            "prng": PRNG_ALGORITHM,
            "version": __version__,
            **self.extra,
        }

    def json(self, name: str, payload: dict):
        dio.dump_json(self.out / name, {**payload, "provenance": self.provenance()})


def cmd_evolve(r: Run):
    k = _kernel(r)
    f = _signal(r.base, r.cfg)
    steps = _int(r.cfg, "steps", 0)
    dio.write_signal(r.out / "evolved.csv", evolve(k, f, steps), r.stamp)


def _collect(r: Run, k, f, pattern, N, window):
    try:
        return collect(k, f, pattern, N, window, dio.kernel_hash(k))
    except WindowCoverageError as exc:
        raise ConfigError("window", f"{exc}; need at least [{exc.required[0]}, {exc.required[1]}]") from None


def cmd_sample(r: Run):
    k = _kernel(r)
    f = _signal(r.base, r.cfg)
    pattern = _pattern(r.base, r.cfg)
    N = _int(r.cfg, "N", 1)
    window = _interval(r.cfg, "window") if r.cfg["window"] is not None else _hull(k, f, N)
    r.extra["resolved"] = {"window": list(window)}
    samples = _collect(r, k, f, pattern, N, window)
    spec = _noise(r.cfg)
    if spec is not None:
        samples = add_noise(samples, spec)
    dio.write_samples(r.out / "samples.csv", samples, r.stamp)
    (r.out / "pattern.txt").write_text(f"# {r.stamp}\n" + dio.pattern_to_text(pattern))


def cmd_reconstruct(r: Run):
    k = _kernel(r)
    pattern = _pattern(r.base, r.cfg)
    N = _int(r.cfg, "N", 1)
    if not isinstance(pattern, PeriodicPattern):
        raise ConfigError("pattern", "reconstruction needs a sub-lattice pattern")
    truth = None
    if r.cfg["samples"] is not None:
        if r.cfg["signal_window"] is None:
            raise ConfigError("signal_window", "required with 'samples'")
        sig_win = _interval(r.cfg, "signal_window")
        try:
            vals, pts = dio.read_samples(_path(r.base, r.cfg, "samples"))
        except dio.FormatError as exc:
            raise ConfigError("samples", str(exc)) from None
        if vals.shape[0] != N:
            raise ConfigError("N", f"samples file has {vals.shape[0]} time steps")
        if not np.all(pattern.contains(pts)):
            raise ConfigError("samples", "sample sites are not on the pattern")
        samples = SpaceTimeSamples(vals, pts, pattern, N, (int(pts[0]), int(pts[-1])), sig_win)
    else:
        truth = _signal(r.base, r.cfg)
        samples = _collect(r, k, truth, pattern, N, _hull(k, truth, N))
        spec = _noise(r.cfg)
        if spec is not None:
            samples = add_noise(samples, spec)
    period = None if r.cfg["period"] is None else _int(r.cfg, "period", 1)
    try:
        res = reconstruct(samples, k, period=period)
    except ValueError as exc:
        raise ConfigError("pattern", str(exc)) from None
    flags = res.flags()
    if truth is not None:
        flags["relative_error"] = recon_error(truth, res.f_rec)
    dio.write_signal(r.out / "reconstructed.csv", res.f_rec, r.stamp)
    r.json("reconstructed.json", flags)
    if res.status == "rank-deficient" and not r.allow_partial:
        raise OperationError(f"{len(res.deficient_bins)} rank-deficient bins (use --allow-partial)")


def cmd_diagnose(r: Run):
    k = _kernel(r)
    m, L, N = _int(r.cfg, "m", 1), _int(r.cfg, "L", 1), _int(r.cfg, "N", 1)
    if L > m:
        raise ConfigError("L", "must be <= m")
    grid = FrequencyGrid(_int(r.cfg, "grid_M", 1))
    rows = diagnostics(k, m, L, N, grid)
    dio.write_csv(
        r.out / "diagnostics.csv", ["omega", "sigma_min", "sigma_max", "gautschi_bound", "max_cluster"], rows, r.stamp
    )
    verdict = completeness_check(k, m, L, N, grid, rank_tol=r.cfg["rank_tol"])
    r.json("verdict.json", verdict.to_dict())


def _frame_bounds(r: Run, k, method):
    pattern = _pattern(r.base, r.cfg)
    N = _int(r.cfg, "N", 1)
    window = _interval(r.cfg, "window")
    margin = None if r.cfg["interior_margin"] is None else _int(r.cfg, "interior_margin", 0)
    grid = FrequencyGrid(_int(r.cfg, "grid_M", 1))
    out = {}
    if method in ("empirical", "both"):
        try:
            out["empirical"] = empirical_frame_bounds(k, pattern, N, window, margin)
        except ValueError as exc:
            raise ConfigError("window", str(exc)) from None
    if method in ("analytic", "both"):
        if not (isinstance(pattern, PeriodicPattern) and pattern.is_sublattice and pattern.L == 1 and N == pattern.m):
            raise ConfigError("method", "analytic bounds need pattern {m, L: 1} and N = m")
        out["analytic"] = analytic_frame_bounds(k, pattern.m, grid)
    if "empirical" in out:
        margin = out["empirical"].context["interior_margin"]
    r.extra["resolved"] = {"grid_M": grid.M, "window": list(window), "interior_margin": margin}
    return pattern, N, grid, out


def _fb_dict(fb):
    return {"c_min": fb.c_min, "c_max": fb.c_max, "method": fb.method, "is_frame": fb.is_frame, "context": fb.context}


def cmd_frame_bounds(r: Run):
    k = _kernel(r)
    method = r.cfg["method"]
    if method not in ("empirical", "analytic", "both"):
        raise ConfigError("method", "expected empirical, analytic or both")
    _, _, _, out = _frame_bounds(r, k, method)
    r.json("frame_bounds.json", {name: _fb_dict(fb) for name, fb in out.items()})


def cmd_density(r: Run):
    k = _kernel(r)
    pattern, N, grid, out = _frame_bounds(r, k, "empirical")
    fb = out["empirical"]
    try:
        env = regularity(k, grid)
        cert = density_certificate(lemma_constants(env, N), fb)
    except (RegularityError, NoCertificateError) as exc:
        raise OperationError(str(exc)) from None
    l_values = r.cfg["l_values"]
    if not (isinstance(l_values, list) and l_values and all(isinstance(x, int) and x > 0 for x in l_values)):
        raise ConfigError("l_values", "expected a list of positive integers")
    try:
        rep = banach_density(pattern, l_values)
    except ValueError as exc:
        raise ConfigError("l_values", str(exc)) from None
    r.json(
        "certificate.json",
        {
            "nu": env.nu,
            "mu": env.mu,
            "kappa": env.kappa,
            "N": N,
            "c_a": cert.c_a,
            "C_a": cert.C_a,
            "c_min": cert.c_min,
            "c_max": cert.c_max,
            "method": fb.method,
            "lower": cert.lower,
            "upper": cert.upper,
            "density_upper_estimate": rep.upper,
            "density_lower_estimate": rep.lower,
            "density_exact": rep.exact,
            "n_lambda": rep.n_lambda,
            "gap_radius": rep.gap_radius,
        },
    )


def cmd_noise_sweep(r: Run):
    k = _kernel(r)
    pattern = _pattern(r.base, r.cfg)
    if not (isinstance(pattern, PeriodicPattern) and pattern.is_sublattice):
        raise ConfigError("pattern", "noise sweep needs {m, L}")
    N = _int(r.cfg, "N", 1)
    f = _signal(r.base, r.cfg)
    sigmas = r.cfg["sigmas"]
    if not (isinstance(sigmas, list) and sigmas and all(isinstance(x, (int, float)) and x >= 0 for x in sigmas)):
        raise ConfigError("sigmas", "expected a list of nonnegative numbers")
    if r.cfg["mode"] not in ("real", "complex"):
        raise ConfigError("mode", "expected real or complex")
    try:
        rows = noise_sweep(
            k,
            pattern.m,
            pattern.L,
            N,
            f,
            sigmas,
            _int(r.cfg, "trials", 1),
            _int(r.cfg, "seed"),
            FrequencyGrid(_int(r.cfg, "grid_M", 1)),
            r.cfg["mode"],
        )
    except ValueError as exc:
        raise ConfigError("N", str(exc)) from None
    dio.write_csv(
        r.out / "noise_sweep.csv",
        ["sigma", "mean_rel_err", "std_rel_err", "trials", "sup_inverse_norm"],
        [(x.sigma, x.mean_rel_err, x.std_rel_err, x.trials, x.sup_inverse_norm) for x in rows],
        r.stamp,
    )


def cmd_decay(r: Run):
    k = _kernel(r)
    locs, dims = r.cfg["locations"], r.cfg["dims"]
    if not (isinstance(locs, list) and locs and all(isinstance(x, int) for x in locs)):
        raise ConfigError("locations", "expected a nonempty list of integers")
    if not (isinstance(dims, list) and dims and all(isinstance(x, int) and x > 0 for x in dims)):
        raise ConfigError("dims", "expected a list of positive integers")
    N = None if r.cfg["N"] is None else _int(r.cfg, "N", 1)
    win = r.cfg["window"]
    if win == "centered":
        start = None
    elif win == "upstream":
        # columns end at the last sensor
        start = lambda d: max(locs) - d + 1  # noqa: E731
    elif isinstance(win, int) and not isinstance(win, bool):
        start = win
    else:
        raise ConfigError("window", "expected 'centered', 'upstream' or an integer start")
    r.extra["resolved"] = {
        "N": "dim" if N is None else N,
        "window_start": {str(d): (start(d) if callable(start) else start) for d in dims}
        if start is not None
        else {str(d): (min(locs) + max(locs)) // 2 - d // 2 for d in dims},
    }
    curve = finite_set_decay(k, locs, dims, N, start)
    dio.write_csv(r.out / "decay.csv", ["dim", "sigma_min_sq"], list(zip(curve.dims, curve.sigma_min_sq)), r.stamp)


COMMANDS = {
    "evolve": cmd_evolve,
    "sample": cmd_sample,
    "reconstruct": cmd_reconstruct,
    "diagnose": cmd_diagnose,
    "frame-bounds": cmd_frame_bounds,
    "density": cmd_density,
    "noise-sweep": cmd_noise_sweep,
    "decay": cmd_decay,
}

_HELP = {
    "evolve": "apply the convolution operator `steps` times to a signal",
    "sample": "collect space-time samples on a pattern",
    "reconstruct": "recover the initial signal from sub-lattice samples",
    "diagnose": "per-frequency conditioning table and completeness verdict",
    "frame-bounds": "empirical and/or analytic frame constants",
    "density": "Banach-density certificate from frame bounds",
    "noise-sweep": "reconstruction error versus noise level",
    "decay": "lower frame constant of a finite sensor set versus window size",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dynsamp", description="Convolutional dynamical sampling experiments.")
    p.add_argument("--version", action="version", version=__version__)
    subs = p.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        keys = ", ".join(f"{k}" + ("" if v is _REQUIRED else f"={json.dumps(v)}") for k, v in SCHEMA[name].items())
        sp = subs.add_parser(name, help=_HELP[name], description=f"{_HELP[name]}. Config keys: {keys}")
        sp.add_argument("--config", required=True, metavar="PATH", help="JSON config (one object)")
        sp.add_argument("--out", metavar="DIR", default=None, help="output directory (default: config 'out' or '.')")
        sp.add_argument("--threads", type=int, default=None, metavar="K", help="cap BLAS/worker threads (default: unlimited)")
        sp.add_argument("--grid", type=int, default=None, metavar="M", help="override config grid_M (default: none)")
        if name == "reconstruct":
            sp.add_argument(
                "--allow-partial", action="store_true", help="exit 0 even if some bins are rank deficient (default: off)"
            )
    return p


def _thread_limit(k):
    if k is None:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=k)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    sub = args.subcommand
    try:
        cfg_path = Path(args.config)
        try:
            raw = json.loads(cfg_path.read_text())
        except FileNotFoundError:
            raise ConfigError("--config", f"file not found: {cfg_path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("--config", f"invalid JSON: {exc}") from None
        cfg = resolve_config(sub, raw, args.grid)
        out = Path(args.out or cfg.get("out") or ".")
        out.mkdir(parents=True, exist_ok=True)
        if args.threads is not None and args.threads < 1:
            raise ConfigError("--threads", "must be >= 1")
        run = Run(sub, cfg, cfg_path.parent, out, getattr(args, "allow_partial", False))
        with _thread_limit(args.threads):
            COMMANDS[sub](run)
        dio.dump_json(out / "provenance.json", run.provenance())
    except ConfigError as exc:
        print(f"dynsamp {sub}: {exc}", file=sys.stderr)
        return 2
    except OperationError as exc:
        print(f"dynsamp {sub}: {exc}", file=sys.stderr)
        return 1
    return 0


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
