"""Parameter scans, finite-size series and deterministic table output.

Rows are produced in grid-major order: system size outermost, then the second
axis, then the first axis. Each row carries its full parameter tuple.
"""

from __future__ import annotations

import configparser
import csv
import dataclasses
import hashlib
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .eigen import SolverOptions, ground_state
from .kspace import KGrid, _sector_arrays, total_magic_density
from .magic import exact_magic
from .model import IsingParams, XXParams, build_hamiltonian
from .sampler import PAIR_FRACTION, SamplerConfig, estimate_m2

MODELS = ("nhti", "xx_real", "xx_kspace")
PARAM_NAMES = ("J", "h", "gamma", "g", "delta")
DEFAULTS = {"J": 1.0, "h": 0.0, "gamma": 0.0, "g": 0.0, "delta": 0.0}
COLUMNS = (
    "model", "L", "J", "h", "gamma", "g", "delta",
    "energy_re", "energy_im", "m2", "stderr", "tie_flag", "purity", "status",
)


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.name not in PARAM_NAMES:
            raise ValueError(f"unknown scan parameter {self.name!r}")
        if self.points < 2:
            raise ValueError("an axis needs at least two points")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """``"h 0.2 2.0 19"`` or ``"h:0.2:2.0:19"``."""
        parts = text.replace(":", " ").split()
        if len(parts) != 4:
            raise ValueError(f"axis must be 'name start stop points', got {text!r}")
        return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))


@dataclass(frozen=True)
class ScanSpec:
    model: str
    axes: tuple
    L: tuple = (8,)
    fixed: dict = field(default_factory=dict)
    method: str = "exact"
    sampler: SamplerConfig = SamplerConfig()
    solver: SolverOptions = SolverOptions()
    region: tuple | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("a scan has one or two axes")
        if self.method not in ("exact", "sample"):
            raise ValueError(f"method must be 'exact' or 'sample', got {self.method!r}")
        if self.model == "xx_real" and any(L % 2 for L in self.L):
            raise ValueError("xx_real scans need even chain lengths")

    def points(self):
        """``(L, {param: value})`` in emission order."""
        inner = self.axes[0]
        outer = self.axes[1] if len(self.axes) == 2 else None
        for L in self.L:
            for v2 in (outer.values if outer else [None]):
                for v1 in inner.values:
                    params = dict(self.fixed)
                    params[inner.name] = float(v1)
                    if outer:
                        params[outer.name] = float(v2)
                    yield int(L), params

    def layout(self) -> str:
        names = [a.name for a in self.axes]
        outer = names[1] if len(names) == 2 else "-"
        return f"grid-major order: outer=L, middle={outer}, inner={names[0]}"

    def fingerprint(self) -> str:
        blob = json.dumps(dataclasses.asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _model_params(model: str, L: int, params: dict):
    v = {**DEFAULTS, **params}
    if model == "nhti":
        return IsingParams(L=L, h=v["h"], gamma=v["gamma"], J=v["J"])
    return XXParams(L=L, g=v["g"], delta=v["delta"], J=v["J"])


def point_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1, np.uint64)[0])


def evaluate_point(spec: ScanSpec, L: int, params: dict, index: int = 0) -> dict:
    """One grid point end to end; failures land in the ``status`` column."""
    row = {"model": spec.model, "L": L}
    row.update({name: float(params.get(name, DEFAULTS[name])) for name in PARAM_NAMES})
    row.update(energy_re=math.nan, energy_im=math.nan, m2=math.nan, stderr=math.nan,
               tie_flag=False, purity=math.nan, status="ok")
    start = time.perf_counter()
    try:
        p = _model_params(spec.model, L, params)
        if spec.model == "xx_kspace":
            _, _, lam, _, tie = _sector_arrays(KGrid(L).points, p)
            energy = complex(lam.sum())
            row.update(m2=total_magic_density(p, KGrid(L)), stderr=0.0, purity=1.0, tie_flag=bool(tie.any()))
        else:
            gs = ground_state(build_hamiltonian(p), spec.solver)
            energy = gs.energy
            row["tie_flag"] = gs.tie_flag
            if spec.method == "exact":
                m2, pur = exact_magic(gs.vector, spec.region)
                row.update(m2=m2, stderr=0.0, purity=pur)
            else:
                cfg = dataclasses.replace(spec.sampler, seed=point_seed(spec.sampler.seed, index))
                est = estimate_m2(gs.vector, spec.region, cfg)
                row.update(m2=est.m2, stderr=est.stderr, purity=math.nan)
        row.update(energy_re=energy.real, energy_im=energy.imag)
    except Exception as err:  # recorded per row, scan continues
        row["status"] = f"error: {type(err).__name__}: {err}"
    row["wall_time"] = time.perf_counter() - start
    return row


def _evaluate_task(task):
    spec, L, params, index = task
    return index, evaluate_point(spec, L, params, index)


def default_jobs() -> int:
    env = os.environ.get("NH_MAGIC_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _load_checkpoint(path: Path, fingerprint: str) -> dict:
    done = {}
    if not path.exists():
        return done
    with path.open() as fh:
        lines = [line for line in fh if line.strip()]
    if not lines:
        return done
    header = json.loads(lines[0])
    if header.get("fingerprint") != fingerprint:
        raise ValueError(f"checkpoint {path} belongs to a different scan spec")
    for line in lines[1:]:
        try:
            entry = json.loads(line)
        except json.JSONDecodeError:
            break  # torn final write
        done[entry["index"]] = entry["row"]
    return done


def run_scan(spec: ScanSpec, jobs: int | None = None, checkpoint: str | os.PathLike | None = None) -> list[dict]:
    """Evaluate every grid point; rows come back in grid-major order.

    With ``checkpoint``, completed rows are appended to that file as JSON lines
    and skipped when the same spec is run again.
    """
    jobs = jobs or default_jobs()
    tasks = [(spec, L, params, i) for i, (L, params) in enumerate(spec.points())]
    done = {}
    log = None
    if checkpoint is not None:
        path = Path(checkpoint)
        done = _load_checkpoint(path, spec.fingerprint())
        fresh = not path.exists() or path.stat().st_size == 0
        log = path.open("a")
        if fresh:
            log.write(json.dumps({"fingerprint": spec.fingerprint()}) + "\n")
            log.flush()
    todo = [t for t in tasks if t[3] not in done]
    try:
        if jobs > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = pool.map(_evaluate_task, todo)
                for index, row in results:
                    done[index] = row
                    _log_row(log, index, row)
        else:
            for task in todo:
                index, row = _evaluate_task(task)
                done[index] = row
                _log_row(log, index, row)
    finally:
        if log is not None:
            log.close()
    return [done[i] for i in range(len(tasks))]


def _log_row(log, index, row):
    if log is None:
        return
    log.write(json.dumps({"index": index, "row": row}, allow_nan=True) + "\n")
    log.flush()


def peak_profile(values, m2):
    """Location, height and full width at half maximum of the largest peak.

    The half-maximum crossings are linearly interpolated. A side that never
    drops to half height inside the scan gives ``fwhm = nan``.
    """
    x = np.asarray(values, dtype=float)
    y = np.asarray(m2, dtype=float)
    i = int(np.nanargmax(y))
    height = float(y[i])
    half = height / 2

    def crossing(indices):
        prev = i
        for j in indices:
            if y[j] <= half:
                return x[j] + (half - y[j]) * (x[prev] - x[j]) / (y[prev] - y[j])
            prev = j
        return math.nan

    left = crossing(range(i - 1, -1, -1))
    right = crossing(range(i + 1, len(y)))
    return {"peak_location": float(x[i]), "peak_height": height, "fwhm": float(right - left)}


def finite_size_series(spec: ScanSpec, jobs: int | None = None, checkpoint=None) -> dict:
    """Per-size cut along the single axis of ``spec`` plus peak diagnostics."""
    if len(spec.axes) != 1:
        raise ValueError("finite-size series need a one-axis cut")
    if list(spec.L) != sorted(spec.L):
        raise ValueError("system sizes must be ascending")
    rows = run_scan(spec, jobs, checkpoint)
    name = spec.axes[0].name
    series = {}
    for L in spec.L:
        cut = [r for r in rows if r["L"] == L]
        values = [r[name] for r in cut]
        m2 = [r["m2"] for r in cut]
        series[L] = {"values": values, "m2": m2, "rows": cut, **peak_profile(values, m2)}
    return series


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render(rows: list[dict], fmt: str = "csv", layout: str | None = None, timing: bool = False) -> str:
    if not rows:
        raise ValueError("nothing to emit: table is empty")
    columns = [c for c in rows[0] if timing or c != "wall_time"]
    if fmt == "csv":
        buf = io.StringIO(newline="")
        if layout:
            buf.write(f"# {layout}\r\n")
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row[c]) for c in columns])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps([{c: _json_value(row[c]) for c in columns} for row in rows], indent=1) + "\n"
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    return text.encode("ascii", errors="backslashreplace").decode("ascii")


def emit(rows: list[dict], path, fmt: str = "csv", layout: str | None = None, timing: bool = False) -> Path:
    """Write the table; identical input gives byte-identical files."""
    path = Path(path)
    text = render(rows, fmt, layout, timing)
    try:
        with path.open("w", newline="", encoding="ascii") as fh:
            fh.write(text)
    except OSError as err:
        raise OSError(f"cannot write {path}: {err}") from err
    return path


# --- configuration -------------------------------------------------------

def load_config(path) -> dict:
    """Flat ``key = value`` file (``#`` comments) as a dict of strings."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.optionxform = str
    text = Path(path).read_text()
    parser.read_string("[config]\n" + text)
    return dict(parser["config"])


def parse_region(text: str | None):
    """``"a..b"`` (inclusive) to an ``(a, b)`` pair; empty means the full chain."""
    if not text:
        return None
    first, sep, last = text.partition("..")
    if not sep:
        raise ValueError(f"region must look like 'a..b', got {text!r}")
    return int(first), int(last)


def check_bc(bc: str | None, model: str):
    if bc is None:
        return
    bc = bc.lower()
    expected = ("periodic", "pbc") if model == "xx_kspace" else ("open", "obc")
    if bc not in expected:
        raise ValueError(f"model {model} supports only {expected[0]} boundaries, got {bc!r}")


def spec_from_config(cfg: dict) -> ScanSpec:
    cfg = {k: v for k, v in cfg.items() if v is not None and v != ""}
    model = cfg.get("model", "nhti")
    check_bc(cfg.get("bc"), model)
    axes = [Axis.parse(cfg["axis"])]
    if "axis2" in cfg:
        axes.append(Axis.parse(cfg["axis2"]))
    fixed = {name: float(cfg[name]) for name in PARAM_NAMES if name in cfg}
    sizes = tuple(int(v) for v in str(cfg.get("L", "8")).split(","))
    sampler = SamplerConfig(
        chains=int(cfg.get("chains", 4)),
        steps=int(cfg.get("steps", 10_000)),
        burn_in=int(cfg.get("burn", 1_000)),
        thin=int(cfg["thin"]) if "thin" in cfg else None,
        seed=int(cfg.get("seed", 0)),
        pair_fraction=float(cfg.get("pair_fraction", PAIR_FRACTION)),
    )
    solver = SolverOptions(
        dense_threshold=int(cfg.get("dense_threshold", 4096)),
        krylov_dim=int(cfg["krylov_dim"]) if "krylov_dim" in cfg else None,
        max_iter=int(cfg.get("max_iter", 10000)),
        tol=float(cfg.get("tol", 1e-12)),
    )
    return ScanSpec(
        model=model, axes=tuple(axes), L=sizes, fixed=fixed,
        method=cfg.get("method", "exact"), sampler=sampler, solver=solver,
        region=parse_region(cfg.get("region")),
    )
