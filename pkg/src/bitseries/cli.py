"""Command line workbench: series evaluation, path sampling, verification.

Subcommands: rademacher, fourier, brownian, normals, encode, oscillation,
verify.  Every run is reproducible: identical configuration gives byte
identical output files (no timestamps are written into data files).

Configuration may come from a flat key=value file (--config); explicit
flags override file values.  Data files are CSV with '#'-prefixed metadata
lines, a header row, and 17-significant-digit reals.  Relative output paths
land in --out-dir, the BITSERIES_OUT_DIR environment variable, or the
working directory, in that order.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import brownian as bw
from . import fourier as fr
from . import rademacher as rd
from .bitsource import SeededBitSource, load_bit_file
from .gaussian import NormalSequence, normal_sequence
from .verify import format_report_table, reports_to_json, run_suite

ENV_OUT_DIR = "BITSERIES_OUT_DIR"

# schema entry: (type tag, default); type tags drive both argparse and the
# key=value config format.  "int?"/"str?" admit an absent value.
_SCHEMAS: dict[str, dict[str, tuple[str, object]]] = {
    "rademacher": {
        "family": ("str", "geometric"),
        "family_param": ("float", 0.5),
        "coeffs_file": ("str?", None),
        "seed": ("int", 0),
        "n": ("int", 100),
        "out": ("str", "rademacher.csv"),
    },
    "fourier": {
        "family": ("str", "power"),
        "family_param": ("float", 1.0),
        "coeffs_file": ("str?", None),
        "phases": ("str", "zero"),
        "phase_grid": ("int", 8),
        "seed": ("int", 0),
        "terms": ("int", 256),
        "points": ("int", 1024),
        "interval": ("str", "0,0"),
        "emit": ("str", "sigma"),
        "levels": ("str", "16,64,256,1024,4096"),
        "out": ("str", "fourier.csv"),
    },
    "brownian": {
        "seed": ("int?", None),
        "bits_file": ("str?", None),
        "bits_format": ("str", "raw"),
        "precision": ("int", 53),
        "terms": ("int", 4096),
        "grid": ("int", 257),
        "out": ("str", "path.csv"),
    },
    "normals": {
        "seed": ("int?", None),
        "bits_file": ("str?", None),
        "bits_format": ("str", "raw"),
        "precision": ("int", 53),
        "count": ("int", 100),
        "out": ("str", "normals.csv"),
    },
    "encode": {
        "path_csv": ("str?", None),
        "segments": ("int", 16),
        "out": ("str", "code.txt"),
    },
    "oscillation": {
        "seed": ("int?", None),
        "bits_file": ("str?", None),
        "bits_format": ("str", "raw"),
        "precision": ("int", 53),
        "terms": ("int", 4096),
        "ns": ("str", "16,64,256"),
        "grid_factor": ("int", 16),
        "out": ("str", "oscillation.csv"),
    },
    "verify": {
        "suite": ("str", "all"),
        "trials": ("int?", None),
        "seed_base": ("int", 0),
        "out": ("str", "verify_report.json"),
    },
}

_CHOICES = {
    "family": ("geometric", "power", "harmonic-root", "constant", "file"),
    "phases": ("zero", "grid"),
    "bits_format": ("raw", "ascii"),
    "emit": ("sigma", "l1"),
    "suite": ("kolmogorov", "paley-zygmund", "supnorm", "brownian", "divergence", "fejer", "all"),
}


@dataclass
class ExperimentConfig:
    """One fully resolved run: subcommand plus its parameter block."""

    command: str
    params: dict = field(default_factory=dict)

    def serialize(self) -> str:
        lines = [f"command={self.command}"]
        for key in sorted(self.params):
            val = self.params[key]
            if val is None:
                continue
            lines.append(f"{key}={val}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        raw: dict[str, str] = {}
        for ln, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line {ln}: expected key=value, got {line!r}")
            key, val = line.split("=", 1)
            raw[key.strip()] = val.strip()
        command = raw.pop("command", None)
        if command not in _SCHEMAS:
            raise ValueError(f"config must name a known command, got {command!r}")
        params = dict(_defaults(command))
        for key, val in raw.items():
            if key not in _SCHEMAS[command]:
                raise ValueError(f"unknown key {key!r} for command {command!r}")
            params[key] = _convert(_SCHEMAS[command][key][0], val)
        return cls(command=command, params=params)


def _defaults(command: str) -> dict:
    return {k: v for k, (_t, v) in _SCHEMAS[command].items()}


def _convert(type_tag: str, text: str):
    if type_tag in ("int", "int?"):
        return int(text)
    if type_tag == "float":
        return float(text)
    return text


def _int_list(text: str) -> list[int]:
    return [int(part) for part in str(text).split(",") if part.strip() != ""]


def _format_real(x: float) -> str:
    return format(float(x), ".17g")


def _resolve_out(path: str, out_dir: Optional[str]) -> Path:
    p = Path(path)
    if p.is_absolute():
        return p
    base = out_dir or os.environ.get(ENV_OUT_DIR) or "."
    return Path(base) / p


def emit_plotdata(obj, path: Path, metadata: Optional[dict] = None) -> None:
    """Two-column (or report-table) CSV with '#' metadata and a header row."""
    lines = []
    for key in sorted(metadata or {}):
        lines.append(f"# {key}={metadata[key]}")
    if isinstance(obj, bw.PathSample):
        lines.append("t,W")
        for t, w in zip(obj.grid, obj.values):
            lines.append(f"{_format_real(t)},{_format_real(w)}")
    elif isinstance(obj, (list, tuple)) and obj and hasattr(obj[0], "verdict"):
        lines.append("name,statistic,bound,verdict")
        for r in obj:
            lines.append(
                f"{r.name},{_format_real(r.statistic)},{_format_real(r.theoretical_bound)},{r.verdict}"
            )
    else:
        raise TypeError("emit_plotdata expects a PathSample or a report list")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def _write_csv(path: Path, header: str, rows, metadata: dict) -> None:
    lines = [f"# {k}={metadata[k]}" for k in sorted(metadata)]
    lines.append(header)
    for row in rows:
        lines.append(",".join(_format_real(v) if isinstance(v, float) else str(v) for v in row))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def _read_path_csv(path: Path) -> bw.PathSample:
    ts, ws = [], []
    header_seen = False
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            header_seen = True
            continue
        parts = line.split(",")
        ts.append(float(parts[0]))
        ws.append(float(parts[1]))
    return bw.PathSample(grid=np.asarray(ts), values=np.asarray(ws), origin=f"file:{path}")


def _coefficients(params: dict, errors: list[str]) -> Optional[rd.CoefficientSequence]:
    family = params.get("family")
    if family == "geometric":
        return rd.geometric(params["family_param"])
    if family == "power":
        return rd.power(params["family_param"])
    if family == "harmonic-root":
        return rd.harmonic_root()
    if family == "constant":
        return rd.constant(params["family_param"])
    if family == "file":
        path = params.get("coeffs_file")
        if not path or not Path(path).is_file():
            errors.append("coeffs_file: required and must exist for family=file")
            return None
        return rd.from_values(np.loadtxt(path, ndmin=1), descriptor=f"file:{path}")
    errors.append(f"family: unknown {family!r}")
    return None


def _phase_sequence(params: dict) -> rd.CoefficientSequence:
    if params.get("phases") == "grid":
        g = int(params.get("phase_grid", 8))
        return rd.from_callable(
            lambda n: 2.0 * np.pi * ((n % g) / g),
            descriptor=f"phase-grid({g})",
            fn_array=lambda idx: 2.0 * np.pi * ((idx % g) / g),
        )
    return rd.constant(0.0)


def _bit_source(params: dict, errors: list[str]):
    seed = params.get("seed")
    bits_file = params.get("bits_file")
    if seed is not None and bits_file is not None:
        errors.append("seed/bits_file: give exactly one source, not both")
        return None
    if bits_file is not None:
        if not Path(bits_file).is_file():
            errors.append(f"bits_file: no such file {bits_file!r}")
            return None
        return load_bit_file(bits_file, mode=params.get("bits_format", "raw"))
    return SeededBitSource(seed if seed is not None else 0)


def _validate_choices(command: str, params: dict, errors: list[str]) -> None:
    for key, choices in _CHOICES.items():
        if key in _SCHEMAS[command] and params.get(key) is not None:
            if params[key] not in choices:
                errors.append(f"{key}: must be one of {choices}, got {params[key]!r}")


def _positive(params: dict, keys: tuple[str, ...], errors: list[str]) -> None:
    for key in keys:
        val = params.get(key)
        if val is not None and val < 1:
            errors.append(f"{key}: must be at least 1")


def run(config: ExperimentConfig, out_dir: Optional[str] = None) -> tuple[int, list[Path]]:
    """Execute one configured run; returns (exit status, emitted files).

    Exit status 0 on success, 1 when a verification verdict fails, 2 on
    validation errors.  Partially written outputs are removed on failure.
    """
    command = config.command
    params = dict(_defaults(command))
    params.update(config.params)
    errors: list[str] = []
    _validate_choices(command, params, errors)
    written: list[Path] = []
    try:
        code = _dispatch(command, params, errors, out_dir, written)
    except Exception as exc:  # noqa: BLE001 - boundary: report and clean up
        for p in written:
            try:
                p.unlink()
            except OSError:
                pass
        print(f"error: {exc}", file=sys.stderr)
        return 2, []
    if errors:
        for p in written:
            try:
                p.unlink()
            except OSError:
                pass
        for err in errors:
            print(f"error: {err}", file=sys.stderr)
        return 2, []
    return code, written


def _dispatch(
    command: str,
    params: dict,
    errors: list[str],
    out_dir: Optional[str],
    written: list[Path],
) -> int:
    meta_common = {"command": command}

    if command == "rademacher":
        _positive(params, ("n",), errors)
        coeffs = _coefficients(params, errors)
        if errors:
            return 2
        series = rd.RademacherSeries(coeffs=coeffs, eps=SeededBitSource(params["seed"]))
        n_max = params["n"]
        prods = coeffs.terms(1, n_max + 1) * series.epsilons(1, n_max + 1)
        running = np.cumsum(prods)
        out = _resolve_out(params["out"], out_dir)
        _write_csv(
            out,
            "N,partial_sum",
            [(n + 1, float(running[n])) for n in range(n_max)],
            {**meta_common, "coeffs": coeffs.descriptor, "seed": params["seed"]},
        )
        written.append(out)
        return 0

    if command == "fourier":
        _positive(params, ("terms", "points"), errors)
        coeffs = _coefficients(params, errors)
        try:
            j, pos = _int_list(params["interval"])
            fr.dyadic_interval_bounds(j, pos)
        except ValueError as exc:
            errors.append(f"interval: {exc}")
            j, pos = 0, 0
        if errors:
            return 2
        cfg = fr.TrigSeriesConfig(
            amps=coeffs, phases=_phase_sequence(params), eps=SeededBitSource(params["seed"])
        )
        out = _resolve_out(params["out"], out_dir)
        meta = {
            **meta_common,
            "amps": coeffs.descriptor,
            "phases": params["phases"],
            "seed": params["seed"],
            "interval": f"{j},{pos}",
        }
        if params["emit"] == "sigma":
            N, M = params["terms"], params["points"]
            lo, hi = fr.dyadic_interval_bounds(j, pos)
            t_vals = lo + (hi - lo) * np.arange(M + 1, dtype=np.float64) / M
            rows = [(float(t), fr.fejer_sum(cfg, float(t), N)) for t in t_vals]
            _write_csv(out, "t,sigma_N", rows, {**meta, "N": N})
        else:
            M = params["points"]
            rows = [
                (N, fr.fejer_l1_riemann(cfg, N, M, interval=(j, pos)))
                for N in _int_list(params["levels"])
            ]
            _write_csv(out, "N,l1_estimate", rows, {**meta, "points": M})
        written.append(out)
        return 0

    if command == "brownian":
        _positive(params, ("precision", "grid"), errors)
        if params["terms"] < 0:
            errors.append("terms: must be nonnegative")
        source = _bit_source(params, errors)
        if errors:
            return 2
        fw = bw.FourierWienerSeries(
            normals=NormalSequence(source, precision=params["precision"]),
            truncation=params["terms"],
        )
        grid = np.linspace(0.0, 1.0, params["grid"])
        sample = bw.fw_path(fw, grid)
        out = _resolve_out(params["out"], out_dir)
        meta = {
            **meta_common,
            "source": source.origin,
            "precision": params["precision"],
            "terms": params["terms"],
        }
        if sample.tail_bound_reported is not None:
            meta["tail_bound"] = _format_real(sample.tail_bound_reported)
        emit_plotdata(sample, out, metadata=meta)
        written.append(out)
        return 0

    if command == "normals":
        _positive(params, ("precision", "count"), errors)
        source = _bit_source(params, errors)
        if errors:
            return 2
        ns = normal_sequence(source, params["count"], precision=params["precision"])
        vals = ns.values(params["count"])
        out = _resolve_out(params["out"], out_dir)
        _write_csv(
            out,
            "index,xi",
            [(k, float(v)) for k, v in enumerate(vals)],
            {**meta_common, "source": source.origin, "precision": params["precision"]},
        )
        written.append(out)
        return 0

    if command == "encode":
        _positive(params, ("segments",), errors)
        src = params.get("path_csv")
        if not src or not Path(src).is_file():
            errors.append("path_csv: required and must exist")
        if errors:
            return 2
        sample = _read_path_csv(Path(src))
        code = bw.encode_slopes(sample, params["segments"])
        out = _resolve_out(params["out"], out_dir)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text("".join(f"{int(s):+d}\n" for s in code.signs))
        written.append(out)
        return 0

    if command == "oscillation":
        _positive(params, ("precision", "grid_factor"), errors)
        ns = _int_list(params["ns"])
        if not ns or any(n < 1 for n in ns):
            errors.append("ns: need a comma list of positive segment counts")
        source = _bit_source(params, errors)
        if errors:
            return 2
        fw = bw.FourierWienerSeries(
            normals=NormalSequence(source, precision=params["precision"]),
            truncation=params["terms"],
        )
        sample_grid = params["grid_factor"] * max(ns)
        grid = np.arange(sample_grid + 1, dtype=np.float64) / sample_grid
        path = bw.fw_path(fw, grid)
        rows = []
        for n in ns:
            if sample_grid % n:
                errors.append(f"ns: {n} must divide grid_factor*max(ns)={sample_grid}")
                return 2
            rows.append((n, bw.oscillation_distance(path, n)))
        out = _resolve_out(params["out"], out_dir)
        _write_csv(
            out,
            "n,distance",
            rows,
            {**meta_common, "source": source.origin, "terms": params["terms"]},
        )
        written.append(out)
        return 0

    if command == "verify":
        if params["trials"] is not None and params["trials"] < 1:
            errors.append("trials: must be at least 1")
        if errors:
            return 2
        reports = run_suite(params["suite"], trials=params["trials"], seed_base=params["seed_base"])
        out = _resolve_out(params["out"], out_dir)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(reports_to_json(reports) + "\n")
        written.append(out)
        print(format_report_table(reports))
        return 0 if all(r.passed for r in reports) else 1

    errors.append(f"command: unknown {command!r}")
    return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bitseries",
        description="bit-string-parametrised random series workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, schema in _SCHEMAS.items():
        sp = sub.add_parser(command)
        sp.add_argument("--config", default=None, help="key=value file; flags override")
        sp.add_argument("--out-dir", default=None, help=f"output directory (or ${ENV_OUT_DIR})")
        for key, (type_tag, default) in schema.items():
            flag = "--" + key.replace("_", "-")
            kwargs: dict = {"default": None}
            if type_tag in ("int", "int?"):
                kwargs["type"] = int
            elif type_tag == "float":
                kwargs["type"] = float
            if key in _CHOICES:
                kwargs["choices"] = _CHOICES[key]
            sp.add_argument(flag, **kwargs)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    command = args.command
    params = dict(_defaults(command))
    if args.config:
        cfg_path = Path(args.config)
        if not cfg_path.is_file():
            print(f"error: config: no such file {args.config!r}", file=sys.stderr)
            return 2
        try:
            text = cfg_path.read_text()
            raw = {}
            for line in text.splitlines():
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, val = line.partition("=")
                raw[key.strip()] = val.strip()
            file_cmd = raw.pop("command", command)
            if file_cmd != command:
                print(
                    f"error: config: file is for command {file_cmd!r}, not {command!r}",
                    file=sys.stderr,
                )
                return 2
            for key, val in raw.items():
                if key not in _SCHEMAS[command]:
                    print(f"error: config: unknown key {key!r}", file=sys.stderr)
                    return 2
                params[key] = _convert(_SCHEMAS[command][key][0], val)
        except ValueError as exc:
            print(f"error: config: {exc}", file=sys.stderr)
            return 2
    for key in _SCHEMAS[command]:
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    code, _files = run(ExperimentConfig(command=command, params=params), out_dir=args.out_dir)
    return code


if __name__ == "__main__":
    sys.exit(main())
