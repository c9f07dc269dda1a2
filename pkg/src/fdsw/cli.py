"""
Command-line front end.

    python -m fdsw.cli <command> [--config file.json] [--key value ...]

Commands: dispersion, wave, index, diagram, spectrum, collisions, evolve.
Every key can come from the JSON config or a flag; flags win.  Exit code 0
on success, 2 on invalid input (the message names the key), 1 when a
numerical routine fails.
"""

import argparse
import json
import os
import sys

import numpy as np

from ._io import atomic_write
from .errors import FdswError


class ConfigError(ValueError):
    def __init__(self, key, msg):
        super().__init__(f"{key}: {msg}")
        self.key = key


def _pos(x):
    return x > 0


def _nonneg(x):
    return x >= 0


# key -> (type, default, check or None, help)
_COMMON = {
    "T": (float, 0.0, _nonneg, "surface tension"),
    "out": (str, None, None, "output file (stdout when omitted)"),
    "workers": (int, None, _pos, "worker count (default: FDSW_WORKERS or 1)"),
}

SCHEMA = {
    "dispersion": {
        "kmin": (float, 0.01, _pos, "smallest wave number"),
        "kmax": (float, 10.0, _pos, "largest wave number"),
        "points": (int, 200, _pos, "number of samples"),
    },
    "wave": {
        "kappa": (float, 1.0, _pos, "carrier wave number"),
        "a": (float, 0.01, _nonneg, "amplitude"),
        "b1": (float, 0.0, None, "first quadrature constant"),
        "b2": (float, 0.0, None, "second quadrature constant"),
        "modes": (int, 32, _pos, "retained harmonics"),
    },
    "index": {
        "kappa": (float, 1.0, _pos, "wave number"),
    },
    "diagram": {
        "kmin": (float, 0.05, _pos, "smallest kappa"),
        "kmax": (float, 4.0, _pos, "largest kappa"),
        "ktmin": (float, 0.0, _nonneg, "smallest kappa sqrt(T)"),
        "ktmax": (float, 2.0, _pos, "largest kappa sqrt(T)"),
        "res": (int, 64, lambda r: r >= 64, "grid points per axis (>= 64)"),
        "svg": (str, None, None, "SVG output"),
    },
    "spectrum": {
        "kappa": (float, 1.0, _pos, "carrier wave number"),
        "a": (float, 0.01, _nonneg, "amplitude"),
        "xi": (float, None, lambda x: -0.5 < x <= 0.5, "single Floquet exponent"),
        "xis": (int, 0, _nonneg, "number of exponents in (0, 1/2] when xi is omitted"),
        "N": (int, 64, _pos, "Fourier truncation"),
    },
    "collisions": {
        "kappa": (float, 1.0, _pos, "carrier wave number"),
        "nmax": (int, 16, _pos, "largest |n| scanned"),
    },
    "evolve": {
        "kappa": (float, 1.0, _pos, "carrier wave number"),
        "a": (float, 0.01, _nonneg, "amplitude"),
        "xi": (float, None, lambda x: 0 < x <= 0.5, "Floquet exponent of the seed"),
        "P": (int, None, _pos, "carrier periods in the domain"),
        "G": (int, 512, lambda g: g >= 8 and not g & (g - 1), "grid size (power of two)"),
        "horizon": (float, None, _pos, "final time"),
        "amplitude": (float, 1e-6, _pos, "seed amplitude"),
        "trajectory": (str, None, None, "CSV of perturbation size against time"),
    },
}


def _keys(command):
    s = dict(_COMMON)
    s.update(SCHEMA[command])
    return s


def parse(argv):
    """RunConfig as (command, params).  Raises ConfigError."""
    if not argv or argv[0] not in SCHEMA:
        raise ConfigError("command", f"expected one of {', '.join(SCHEMA)}")
    command, rest = argv[0], argv[1:]
    keys = _keys(command)
    ap = argparse.ArgumentParser(prog=f"fdsw {command}", add_help=False)
    ap.add_argument("--config")
    for key in keys:
        ap.add_argument(f"--{key}", dest=key, default=argparse.SUPPRESS)
    ns, unknown = ap.parse_known_args(rest)
    if unknown:
        raise ConfigError(unknown[0].lstrip("-").split("=")[0], "unknown option")
    params = {k: v[1] for k, v in keys.items()}
    raw = {}
    if getattr(ns, "config", None):
        try:
            with open(ns.config) as f:
                raw.update(json.load(f))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError("config", str(e))
        for k in raw:
            if k not in keys:
                raise ConfigError(k, "unknown key")
    raw.update({k: v for k, v in vars(ns).items() if k != "config"})
    for k, v in raw.items():
        typ, _, check, _ = keys[k]
        if v is None:
            params[k] = None
            continue
        try:
            if typ is int and isinstance(v, float) and not v.is_integer():
                raise ValueError
            val = typ(v) if typ is not int else int(float(v))
        except (TypeError, ValueError):
            raise ConfigError(k, f"expected {typ.__name__}, got {v!r}")
        if typ is float and not np.isfinite(val):
            raise ConfigError(k, "must be finite")
        if check is not None and not check(val):
            raise ConfigError(k, f"value {val!r} out of range")
        params[k] = val
    if params["workers"] is None:
        env = os.environ.get("FDSW_WORKERS")
        try:
            params["workers"] = int(env) if env else 1
        except ValueError:
            raise ConfigError("FDSW_WORKERS", f"expected int, got {env!r}")
        if params["workers"] < 1:
            raise ConfigError("FDSW_WORKERS", "must be positive")
    for lo, hi in (("kmin", "kmax"), ("ktmin", "ktmax")):
        if lo in params and params[lo] >= params[hi]:
            raise ConfigError(hi, f"must exceed {lo}")
    return command, params


def _cell(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _csv(header, rows):
    out = [",".join(header)]
    out += [",".join(_cell(x) for x in r) for r in rows]
    return "\n".join(out) + "\n"


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


def _dispersion(p):
    from .dispersion import group_velocity_jet, speed_jet
    k = np.geomspace(p["kmin"], p["kmax"], p["points"])
    j = speed_jet(k, p["T"])
    g1, g2 = group_velocity_jet(k, p["T"])
    rows = zip(k, j.c, j.c1, j.c2, g1, g2)
    _emit(_csv(["kappa", "c", "dc", "d2c", "group_velocity", "dgroup_velocity"], rows), p["out"])


def _wave(p):
    from .stokes import build_wave, refine_wave
    w = refine_wave(build_wave(p["kappa"], p["a"], p["b1"], p["b2"], p["T"], M=p["modes"]),
                    M=p["modes"])
    _emit(json.dumps(w.to_dict(), indent=2, sort_keys=True) + "\n", p["out"])


def _index(p):
    from .modindex import indices
    b = indices(p["kappa"], p["T"])
    _emit(_csv(["kappa", "T", "i1", "i2", "i3", "i4", "delta"],
               [(b.kappa, b.T, b.i1, b.i2, b.i3, b.i4, b.delta)]), p["out"])


def _diagram(p):
    from .modindex import diagram_csv, diagram_svg, stability_diagram
    d = stability_diagram((p["kmin"], p["kmax"]), (p["ktmin"], p["ktmax"]), p["res"],
                          workers=p["workers"])
    _emit(diagram_csv(d), p["out"])
    if p["svg"]:
        atomic_write(p["svg"], diagram_svg(d))


def _spectrum(p):
    from . import hill
    from .stokes import build_wave, refine_wave
    w = build_wave(p["kappa"], p["a"], 0.0, 0.0, p["T"])
    if p["a"] > 0:
        w = refine_wave(w)
    if p["xi"] is not None:
        xis = [p["xi"]]
    else:
        n = p["xis"] or 50
        xis = list(np.linspace(0, 0.5, n + 1)[1:])

    def one(xi):
        return hill.to_csv_rows(hill.assemble(w, xi, p["N"]))

    if p["workers"] > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(p["workers"]) as ex:
            parts = list(ex.map(one, xis))
    else:
        parts = [one(x) for x in xis]
    rows = [r for part in parts for r in part]
    _emit(_csv(["xi", "re", "im", "boundary"], rows), p["out"])


def _collisions(p):
    from .collisions import find_collisions
    recs = find_collisions(p["kappa"], p["T"], n_max=p["nmax"])
    rows = [(r.kappa, r.n1, r.n2, r.xi, r.omega0, r.sig1, r.sig2) for r in recs]
    _emit(_csv(["kappa", "n1", "n2", "xi", "omega0", "sig1", "sig2"], rows), p["out"])


def _evolve(p):
    from .evolve import mi_growth_experiment
    from .hill import max_growth
    xi, P = p["xi"], p["P"]
    if xi is None:
        _, best = max_growth(p["kappa"], p["a"], p["T"])
        P = P or max(2, round(1 / best))
        xi = 1.0 / P
    r = mi_growth_experiment(p["kappa"], p["a"], xi, p["T"], horizon=p["horizon"], P=P,
                             G=p["G"], amplitude=p["amplitude"])
    summary = {"kappa": p["kappa"], "a": p["a"], "xi": xi, "T": p["T"], "rate": r.rate,
               "rate_per_kappa": r.rate_per_kappa, "window": list(r.window), "r2": r.r2}
    _emit(json.dumps(summary, indent=2, sort_keys=True) + "\n", p["out"])
    if p["trajectory"]:
        atomic_write(p["trajectory"], _csv(["t", "perturbation"], zip(r.times, r.amplitude)))


_DISPATCH = {"dispersion": _dispersion, "wave": _wave, "index": _index, "diagram": _diagram,
             "spectrum": _spectrum, "collisions": _collisions, "evolve": _evolve}


def run(argv):
    try:
        command, params = parse(list(argv))
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        _DISPATCH[command](params)
    except FdswError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
