"""Command-line surface: classify, spectrum, scan, density, verify, export.

Exit codes: 0 success, 1 usage error (including asking for a state that
does not exist), 2 verification failure, 3 numerical non-convergence.

theta accepts exact rationals ("1/2") so the measure-zero time-reversal
comparisons are exact; angles accept radians and pi-literals ("3pi/4",
"-pi/2", "0.9pi").  Exports are deterministic: CSV at full double
precision, JSON mirroring the CSV plus a config echo whose hash names the
output files, written atomically (temp file, then rename).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import re
import sys
import tempfile
from dataclasses import dataclass
from typing import Sequence

from . import __version__, spectrum, verify
from .angular import AngularSector, Channel
from .extensions import (
    ExtensionError,
    PhysicalConfig,
    Theta0Params,
    ThetaGeneralParams,
    TimeReversalHalfParams,
    classify_channel,
    global_deficiency,
)
from .oracle import OracleError, verify_norm
from .specfun import SpecFunError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_NUMERIC = 3

SCAN_HEADER = "param,E_over_kappa,exists"
DENSITY_HEADER = "r,psi_re,psi_im,abs2,W2"


class UsageError(ValueError):
    pass


class NoBoundStateError(UsageError):
    pass


_PI_PATTERN = re.compile(
    r"^(?P<sign>[+-])?(?P<coef>\d+(?:\.\d*)?|\.\d+)?(?P<pi>pi)?(?:/(?P<den>\d+(?:\.\d*)?))?$"
)


def parse_angle(text: str) -> float:
    """Parse an angle in radians, allowing pi-literals like '3pi/4'."""
    cleaned = str(text).strip().replace(" ", "").lower()
    match = _PI_PATTERN.match(cleaned)
    if not match or (match.group("coef") is None and match.group("pi") is None):
        raise UsageError(f"cannot parse angle {text!r}")
    value = float(match.group("coef")) if match.group("coef") else 1.0
    if match.group("pi"):
        value *= math.pi
    if match.group("den"):
        den = float(match.group("den"))
        if den == 0:
            raise UsageError(f"zero denominator in angle {text!r}")
        value /= den
    if match.group("sign") == "-":
        value = -value
    return value


def parse_theta(text: str) -> AngularSector:
    try:
        sector = AngularSector.from_value(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse theta {text!r}: {exc}") from exc
    return sector


@dataclass
class OutputSpec:
    fmt: str
    out_dir: str


def _config_dict(args_dict: dict) -> dict:
    return {key: args_dict[key] for key in sorted(args_dict)}


def config_hash(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _fmt(value: float) -> str:
    """Full-precision, round-trippable float text."""
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(float(value))


def _json_safe(value):
    """Strict JSON has no nan/inf literals; ship them as strings."""
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, list):
        return [_json_safe(v) for v in value]
    return value


def _write_table(
    command: str,
    config: dict,
    columns: list[str],
    column_notes: dict[str, str],
    rows: list[list],
    spec: OutputSpec,
    footer: dict | None = None,
) -> str:
    digest = config_hash(config)
    base = os.path.join(spec.out_dir, f"{command}_{digest}")
    if spec.fmt == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt(v) if isinstance(v, (int, float)) else str(v) for v in row))
        if footer:
            for key, value in footer.items():
                lines.append(f"# {key}={_fmt(value)}")
        path = base + ".csv"
        _atomic_write(path, "\n".join(lines) + "\n")
    else:
        payload = {
            "version": __version__,
            "command": command,
            "config": config,
            "config_hash": digest,
            "columns": columns,
            "column_notes": column_notes,
            "rows": [_json_safe(row) for row in rows],
            "footer": footer or {},
        }
        path = base + ".json"
        _atomic_write(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return path


def _physical_config(args) -> PhysicalConfig:
    return PhysicalConfig(hbar=args.hbar, mass=args.mass, kappa=args.kappa)


def _build_params(args, sector: AngularSector):
    """Extension parameters from the flag combination, validated."""
    time_reversal = getattr(args, "time_reversal", False)
    eta = parse_angle(args.eta) if args.eta is not None else None
    rho = parse_angle(args.rho) if getattr(args, "rho", None) is not None else None
    if time_reversal:
        if not (sector.is_zero() or sector.is_half()):
            raise UsageError("--time-reversal requires theta = 0 or theta = 1/2")
        if sector.is_zero():
            if eta is None:
                raise UsageError("theta = 0 requires --eta")
            return Theta0Params(eta=eta)
        if eta is None and rho is not None:
            eta = rho
        if eta is None:
            raise UsageError("time-reversal family requires --eta")
        if rho is not None and rho != eta:
            raise UsageError("time reversal at theta = 1/2 requires rho = eta")
        return TimeReversalHalfParams(eta=eta)
    if sector.is_zero():
        if eta is None:
            raise UsageError("theta = 0 requires --eta")
        return Theta0Params(eta=eta)
    if eta is None or rho is None:
        raise UsageError("theta in (0, 1) requires both --rho and --eta")
    return ThetaGeneralParams(rho=rho, eta=eta)


def cmd_classify(args) -> int:
    sector = parse_theta(args.theta)
    config_echo = {"command": "classify", "theta": sector.theta, "m": args.m}
    if args.m is not None:
        index = classify_channel(Channel(sector, args.m))
        print(f"theta={args.theta} m={args.m}: deficiency index {index}")
        rows = [[args.m, index.n_plus, index.n_minus]]
    else:
        overall = global_deficiency(sector)
        print(f"theta={args.theta}: global deficiency index {overall}")
        rows = []
        for m in range(-3, 4):
            index = classify_channel(Channel(sector, m))
            rows.append([m, index.n_plus, index.n_minus])
            print(f"  m={m:+d}: {index}")
    if args.out is not None:
        path = _write_table(
            "classify",
            config_echo,
            ["m", "n_plus", "n_minus"],
            {
                "m": "angular-momentum channel label",
                "n_plus": "deficiency index (+i side)",
                "n_minus": "deficiency index (-i side)",
            },
            rows,
            OutputSpec(args.format, args.out),
        )
        print(f"wrote {path}")
    return EXIT_OK


def _spectrum_rows(sector, params, config):
    states = spectrum.bound_states(sector, params, config)
    rows = []
    for state in states:
        momenta = spectrum.angular_momenta(state, config)
        profile = spectrum.bound_wavefunction(state, config)
        rows.append(
            {
                "energy": state.energy,
                "energy_over_kappa": state.energy / config.kappa,
                "theta": sector.theta,
                "m": state.channel.m,
                "degeneracy": state.degeneracy,
                "angular_momenta": momenta,
                "norm_constant": profile.norm_constant,
                "match_constant_re": state.match_constant.real,
                "match_constant_im": state.match_constant.imag,
            }
        )
    return states, rows


def cmd_spectrum(args) -> int:
    sector = parse_theta(args.theta)
    config = _physical_config(args)
    try:
        params = _build_params(args, sector)
    except ExtensionError as exc:
        raise UsageError(str(exc)) from exc
    states, rows = _spectrum_rows(sector, params, config)
    count = sum(state.degeneracy for state in states)
    print(f"bound states: {count}")
    if (
        isinstance(params, Theta0Params)
        and count == 0
        and abs(params.eta + math.pi) < 1e-9
    ):
        print("  (eta = -pi is singular: no finite-energy bound state)")
    for row in rows:
        momenta = ", ".join(_fmt(v) for v in row["angular_momenta"])
        print(
            f"  E = {row['energy']:.15g}  E/kappa = {row['energy_over_kappa']:.15g}  "
            f"channel (theta={row['theta']:.15g}, m={row['m']})  "
            f"degeneracy {row['degeneracy']}  L in {{{momenta}}} hbar-units  "
            f"norm {row['norm_constant']:.15g}"
        )
    if count == 0:
        print("  (no negative-energy states for these parameters)")
    if args.out is not None:
        config_echo = {
            "command": "spectrum",
            "theta": sector.theta,
            "params": _params_echo(params),
            "kappa": config.kappa,
            "hbar": config.hbar,
            "mass": config.mass,
        }
        table_rows = [
            [
                row["energy"],
                row["energy_over_kappa"],
                row["m"],
                row["degeneracy"],
                row["norm_constant"],
            ]
            for row in rows
        ]
        path = _write_table(
            "spectrum",
            config_echo,
            ["energy", "E_over_kappa", "m", "degeneracy", "norm_constant"],
            {
                "energy": "bound-state energy in absolute units",
                "E_over_kappa": "bound-state energy in units of kappa",
                "m": "angular-momentum channel",
                "degeneracy": "level degeneracy",
                "norm_constant": "radial normalization constant",
            },
            table_rows,
            OutputSpec(args.format, args.out),
        )
        print(f"wrote {path}")
    return EXIT_OK


def _params_echo(params) -> dict:
    if isinstance(params, Theta0Params):
        return {"family": "theta0", "eta": params.eta}
    if isinstance(params, TimeReversalHalfParams):
        return {"family": "half_T", "eta": params.eta}
    return {"family": "general", "rho": params.rho, "eta": params.eta}


def _scan_energy(sector, family: str, value: float, config) -> float | None:
    if family == "theta0":
        try:
            state = spectrum.energy_theta0(value, config)
        except spectrum.NoFiniteBoundStateError:
            return None
        return state.energy
    if family == "m0":
        state = spectrum.energy_m0(sector.theta, value, config)
    elif family == "m_minus1":
        state = spectrum.energy_m_minus1(sector.theta, value, config)
    elif family == "half_T":
        state = spectrum.spectrum_half_T(value, config)
    else:
        raise UsageError(f"unknown scan family {family!r}")
    return None if state is None else state.energy


def _scan_family(args, sector) -> str:
    if getattr(args, "time_reversal", False):
        if not sector.is_half():
            raise UsageError("--time-reversal scans require theta = 1/2")
        return "half_T"
    if sector.is_zero():
        return "theta0"
    if args.vary == "rho":
        return "m0"
    return "m_minus1"


def cmd_scan(args) -> int:
    sector = parse_theta(args.theta)
    config = _physical_config(args)
    family = _scan_family(args, sector)
    lo = parse_angle(args.min)
    hi = parse_angle(args.max)
    if not (-math.pi <= lo < math.pi and -math.pi <= hi <= math.pi and lo < hi):
        raise UsageError("scan grid must satisfy -pi <= min < max <= pi")
    points = args.points
    if points < 2:
        raise UsageError("scan needs at least 2 points")
    rows = []
    for k in range(points):
        value = lo + (hi - lo) * k / (points - 1)
        if value >= math.pi:
            value = math.nextafter(math.pi, -math.pi)
        energy = _scan_energy(sector, family, value, config)
        exists = energy is not None
        rows.append([value, (energy / config.kappa) if exists else math.nan, exists])
    config_echo = {
        "command": "scan",
        "theta": sector.theta,
        "family": family,
        "min": lo,
        "max": hi,
        "points": points,
        "kappa": config.kappa,
        "hbar": config.hbar,
        "mass": config.mass,
    }
    path = _write_table(
        "scan",
        config_echo,
        ["param", "E_over_kappa", "exists"],
        {
            "param": "extension phase in radians",
            "E_over_kappa": "bound-state energy in units of kappa (nan if absent)",
            "exists": "whether a bound state exists at this phase",
        },
        rows,
        OutputSpec(args.format, args.out),
    )
    existing = sum(1 for row in rows if row[2])
    print(f"scan family {family}: {existing}/{points} grid points carry a bound state")
    print(f"wrote {path}")
    return EXIT_OK


def _pick_density_state(args, sector, params, config):
    states = spectrum.bound_states(sector, params, config)
    if not states:
        raise NoBoundStateError("no bound state exists for these parameters")
    if args.m is None:
        if len(states) > 1:
            raise UsageError(
                "two bound states here; select a channel with --m 0 or --m -1"
            )
        return states[0]
    for state in states:
        if state.channel.m == args.m:
            return state
        if state.partner_channel is not None and state.partner_channel.m == args.m:
            return state
    raise NoBoundStateError(f"no bound state in channel m={args.m}")


def cmd_density(args) -> int:
    sector = parse_theta(args.theta)
    config = _physical_config(args)
    try:
        params = _build_params(args, sector)
    except ExtensionError as exc:
        raise UsageError(str(exc)) from exc
    state = _pick_density_state(args, sector, params, config)
    profile = spectrum.bound_wavefunction(state, config)
    if args.r_min <= 0.0 or args.r_max <= args.r_min:
        raise UsageError("need 0 < r-min < r-max")
    if args.points < 2:
        raise UsageError("density needs at least 2 points")
    rows = []
    for k in range(args.points):
        r = args.r_min + (args.r_max - args.r_min) * k / (args.points - 1)
        psi = profile.evaluate(r)
        rows.append([r, psi.real, psi.imag, abs(psi) ** 2, r * abs(psi) ** 2])
    total = verify_norm(profile)
    config_echo = {
        "command": "density",
        "theta": sector.theta,
        "params": _params_echo(params),
        "m": state.channel.m,
        "r_min": args.r_min,
        "r_max": args.r_max,
        "points": args.points,
        "kappa": config.kappa,
        "hbar": config.hbar,
        "mass": config.mass,
    }
    path = _write_table(
        "density",
        config_echo,
        ["r", "psi_re", "psi_im", "abs2", "W2"],
        {
            "r": "radius in length units",
            "psi_re": "real part of the normalized radial wavefunction",
            "psi_im": "imaginary part of the normalized radial wavefunction",
            "abs2": "|psi(r)|^2",
            "W2": "probability density r |psi(r)|^2 with respect to dr",
        },
        rows,
        OutputSpec(args.format, args.out),
        footer={"integral_W2": total},
    )
    print(f"E = {state.energy:.15g} (E/kappa = {state.energy / config.kappa:.15g})")
    print(f"integral of W^2 over (0, inf): {total:.12f}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_scope(args.scope)
    failures = 0
    report_rows = []
    for suite_name, records in results.items():
        for record in records:
            flag = "PASS" if record.passed else "FAIL"
            if not record.passed:
                failures += 1
            print(
                f"[{flag}] {suite_name}/{record.name}: measured {record.measured:.3e} "
                f"(tolerance {record.tolerance:.1e}) {record.detail}"
            )
            report_rows.append({"suite": suite_name, **record.as_dict()})
    print(f"verification: {len(report_rows) - failures}/{len(report_rows)} checks passed")
    if args.out is not None:
        payload = {
            "version": __version__,
            "command": "verify",
            "scope": args.scope,
            "checks": report_rows,
            "failures": failures,
        }
        path = os.path.join(
            args.out, f"verify_{config_hash({'scope': args.scope})}.json"
        )
        _atomic_write(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")
        print(f"wrote {path}")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def _canonical_exports(args) -> int:
    """The four canonical datasets the figure scripts consume."""
    out = args.out
    fmt = args.format
    base_argv = ["--kappa", str(args.kappa), "--hbar", str(args.hbar), "--mass", str(args.mass)]
    jobs = [
        # vanishing-origin density of the theta = 0, eta = 0 state
        ["density", "--theta", "0", "--eta", "0", "--r-min", "1e-4", "--r-max", "12",
         "--points", "600"],
        # energy curve of the theta = 0 family
        ["scan", "--theta", "0", "--min=-0.995pi", "--max", "0.995pi", "--points", "401"],
        # energy curve of the time-reversal family at theta = 1/2
        ["scan", "--theta", "1/2", "--time-reversal", "--min=-0.995pi", "--max",
         "0.995pi", "--points", "401"],
        # exponential density of the time-reversal state at theta = 1/2
        ["density", "--theta", "1/2", "--time-reversal", "--eta", "0", "--m", "0",
         "--r-min", "1e-4", "--r-max", "12", "--points", "600"],
    ]
    for job in jobs:
        code = main(job + base_argv + ["--format", fmt, "--out", out])
        if code != EXIT_OK:
            return code
    return EXIT_OK


def _replay(args) -> int:
    with open(args.replay) as handle:
        payload = json.load(handle)
    config = payload["config"]
    command = config.get("command")
    argv: list[str] = [command]
    if command == "scan":
        argv += [f"--theta={config['theta']!r}"]
        if config["family"] == "half_T":
            argv += ["--time-reversal"]
        elif config["family"] == "m0":
            argv += ["--vary", "rho"]
        elif config["family"] == "m_minus1":
            argv += ["--vary", "eta"]
        argv += [
            f"--min={config['min']!r}",
            f"--max={config['max']!r}",
            f"--points={config['points']}",
        ]
    elif command == "density":
        argv += [f"--theta={config['theta']!r}"]
        params = config["params"]
        if params["family"] == "half_T":
            argv += ["--time-reversal", f"--eta={params['eta']!r}"]
        elif params["family"] == "theta0":
            argv += [f"--eta={params['eta']!r}"]
        else:
            argv += [f"--rho={params['rho']!r}", f"--eta={params['eta']!r}"]
        argv += [
            f"--m={config['m']}",
            f"--r-min={config['r_min']!r}",
            f"--r-max={config['r_max']!r}",
            f"--points={config['points']}",
        ]
    else:
        raise UsageError(f"replay supports scan and density exports, not {command!r}")
    argv += [
        "--kappa", repr(config["kappa"]), "--hbar", repr(config["hbar"]),
        "--mass", repr(config["mass"]),
        "--format", "json", "--out", args.out,
    ]
    return main(argv)


def cmd_export(args) -> int:
    if args.replay is not None:
        return _replay(args)
    if args.figures_data:
        return _canonical_exports(args)
    raise UsageError("export needs --figures-data or --replay FILE")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def _add_common(parser, with_output=True):
    parser.add_argument("--kappa", type=float, default=1.0, help="energy scale kappa")
    parser.add_argument("--hbar", type=float, default=1.0)
    parser.add_argument("--mass", type=float, default=0.5)
    if with_output:
        parser.add_argument("--format", choices=("csv", "json"), default="csv")
        parser.add_argument("--out", default="./out", help="output directory")


def build_parser() -> _Parser:
    parser = _Parser(prog="punctured-plane", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="deficiency-index table")
    p.add_argument("--theta", required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("spectrum", help="bound-state listing")
    p.add_argument("--theta", required=True)
    p.add_argument("--eta", default=None)
    p.add_argument("--rho", default=None)
    p.add_argument("--time-reversal", action="store_true")
    _add_common(p, with_output=False)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("scan", help="energy vs extension phase, exported")
    p.add_argument("--theta", required=True)
    p.add_argument("--vary", choices=("rho", "eta"), default="eta")
    p.add_argument("--time-reversal", action="store_true")
    p.add_argument("--min", default="-0.999pi")
    p.add_argument("--max", default="0.999pi")
    p.add_argument("--points", type=int, default=361)
    _add_common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("density", help="radial probability density table")
    p.add_argument("--theta", required=True)
    p.add_argument("--eta", default=None)
    p.add_argument("--rho", default=None)
    p.add_argument("--time-reversal", action="store_true")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--r-min", type=float, default=1e-4)
    p.add_argument("--r-max", type=float, default=12.0)
    p.add_argument("--points", type=int, default=400)
    _add_common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("verify", help="run the closed-form-vs-oracle suites")
    p.add_argument(
        "scope",
        nargs="?",
        default="all",
        choices=("specfun", "energies", "norms", "domains", "all"),
    )
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="canonical figure datasets / replay")
    p.add_argument("--figures-data", action="store_true")
    p.add_argument("--replay", default=None, help="re-run a previous JSON export")
    _add_common(p)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ExtensionError, spectrum.NoFiniteBoundStateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleError as exc:
        print(f"numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SpecFunError as exc:
        print(f"numerical domain error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
