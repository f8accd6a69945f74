"""Parameter sweeps over band experiments, CSV output and log-log fitting."""

from __future__ import annotations

import csv
import io
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from sieve_bands.bands import (
    BandParams,
    band_sum_decomposition,
    band_sum_direct,
    bound_ratios,
)
from sieve_bands.core_arith import DomainError
from sieve_bands.sieve_function import (
    SieveSpec,
    builder_const1,
    builder_random,
    builder_tau_Q,
    builder_zero,
    eval_f_range,
    load_spec,
)
from sieve_bands.spectra import DEFAULT_EPS_GRID, lemma31_residual, reduced_points

CSV_VERSION = "# sieve-bands v1"


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for integers n >= 0, k >= 1."""
    if n < 0 or k < 1:
        raise DomainError(f"iroot needs n >= 0, k >= 1, got {n}, {k}")
    if n < 2 or k == 1:
        return n
    x = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k + 1)
    # Newton from above, then fix up
    x = max(x, 1)
    while x**k > n:
        x = ((k - 1) * x + n // x ** (k - 1)) // k
    while (x + 1) ** k <= n:
        x += 1
    return x


def power_floor(N: int, exponent: Fraction) -> int:
    """floor(N ** exponent) computed exactly for rational exponents >= 0."""
    if exponent < 0:
        raise DomainError(f"exponent must be nonnegative, got {exponent}")
    return iroot(N**exponent.numerator, exponent.denominator)


# --- grids -------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """A list of values, a power of N (``N^a/b``), or ``all`` (r: units mod q, b: 0..q-1)."""

    values: tuple[int, ...] = ()
    power: Fraction | None = None
    everything: bool = False

    def resolve(self, N: int) -> list[int]:
        if self.power is not None:
            return [power_floor(N, self.power)]
        return list(self.values)


def geometric_grid(start: int, stop: int, steps: int) -> list[int]:
    if start < 1 or stop < start or steps < 1:
        raise DomainError(f"bad geometric grid {start}:{stop}:{steps}")
    if steps == 1:
        return [start]
    out = []
    for i in range(steps):
        v = int(round(start * (stop / start) ** (i / (steps - 1))))
        if not out or v != out[-1]:
            out.append(v)
    return out


def parse_grid(text: str, allow_all: bool = False) -> Grid:
    """``7``, ``1,2,5``, ``a:b:steps`` (geometric), ``N^1/3`` or ``all``."""
    text = text.strip()
    if text == "all":
        if not allow_all:
            raise ValueError("'all' is only allowed for --r and --b")
        return Grid(everything=True)
    if text.startswith("N^"):
        try:
            power = Fraction(text[2:])
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad exponent in {text!r}") from None
        return Grid(power=power)
    if text == "":
        return Grid(())
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            pieces = part.split(":")
            if len(pieces) != 3:
                raise ValueError(f"geometric grid must be a:b:steps, got {part!r}")
            values.extend(geometric_grid(*(int(p) for p in pieces)))
        else:
            values.append(int(part))
    return Grid(tuple(values))


def parse_eps(text: str) -> tuple[float, ...]:
    grid = tuple(float(x) for x in text.split(",") if x.strip())
    if any(e <= 0 for e in grid):
        raise ValueError("eps values must be positive")
    return grid


# --- spec sources ------------------------------------------------------------

BUILDERS = {
    "tau_Q": lambda Q, **kw: builder_tau_Q(Q),
    "const1": lambda Q=None, **kw: builder_const1(),
    "zero": lambda Q=1, **kw: builder_zero(Q),
    "random": lambda Q, seed=0, low=-3, high=3, **kw: builder_random(Q, seed, low, high),
}


@dataclass(frozen=True)
class SpecSource:
    """Either a builder with parameters or a loaded spec file."""

    builder: str | None = None
    params: tuple[tuple[str, int], ...] = ()
    spec: SieveSpec | None = None

    @property
    def needs_Q(self) -> bool:
        return self.spec is None and self.builder != "const1" and "Q" not in dict(self.params)

    def build(self, Q: int | None = None) -> SieveSpec:
        if self.spec is not None:
            return self.spec
        params = dict(self.params)
        if Q is not None and "Q" not in params:
            params["Q"] = Q
        try:
            return BUILDERS[self.builder](**params)
        except TypeError as exc:
            raise ValueError(f"builder {self.builder!r}: {exc}") from None


def parse_spec_source(text: str) -> SpecSource:
    """``builder[:k=v,...]`` or the path of a spec file."""
    name, _, rest = text.partition(":")
    if name in BUILDERS:
        params = []
        for item in filter(None, (p.strip() for p in rest.split(","))):
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"builder parameter must be key=value, got {item!r}")
            params.append((key.strip(), int(value)))
        return SpecSource(builder=name, params=tuple(params))
    path = Path(text)
    if not path.exists():
        raise ValueError(f"{text!r} is neither a builder ({', '.join(BUILDERS)}) nor an existing file")
    return SpecSource(spec=load_spec(path))


# --- formatting --------------------------------------------------------------


def fmt(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if value is None:
        return "NA"
    value = float(value)
    if math.isnan(value):
        return "nan"
    if value == 0:
        return "0"
    return f"{value:.12g}"


def _eps_tag(eps: float) -> str:
    return f"{eps:g}"


def band_header(eps_grid) -> list[str]:
    return (
        ["N", "q", "Q", "H", "r", "b", "T", "abs_T"]
        + [f"eq4_ratio_{_eps_tag(e)}" for e in eps_grid]
        + [f"trivial_ratio_{_eps_tag(e)}" for e in eps_grid]
        + ["theta", "level", "elapsed_ms", "method"]
    )


def residual_header(eps_grid) -> list[str]:
    return (
        ["N", "Q", "ell", "j", "fhat_re", "fhat_im", "R_ell", "residual"]
        + [f"normalized_{_eps_tag(e)}" for e in eps_grid]
    )


# --- sweeps ------------------------------------------------------------------


@dataclass
class SweepConfig:
    source: SpecSource
    N: Grid
    q: Grid = field(default_factory=lambda: Grid((2,)))
    Q: Grid = field(default_factory=lambda: Grid(()))
    H: Grid = field(default_factory=lambda: Grid((1,)))
    r: Grid = field(default_factory=lambda: Grid((1,)))
    b: Grid = field(default_factory=lambda: Grid((0,)))
    eps_grid: tuple[float, ...] = DEFAULT_EPS_GRID
    method: str = "direct"
    kind: str = "bands"
    ell_max: int = 50
    timing: bool = False
    jobs: int = 1


@dataclass
class SweepStats:
    rows: int = 0
    skipped_gcd: int = 0
    skipped_other: int = 0
    warnings: Counter = field(default_factory=Counter)


def _group_keys(cfg: SweepConfig) -> list[tuple[int, int | None]]:
    if cfg.N.power is not None or cfg.N.everything:
        raise ValueError("the N grid must list explicit values")
    keys = []
    for N in cfg.N.values:
        if cfg.source.needs_Q:
            for Q in cfg.Q.resolve(N):
                keys.append((N, Q))
        else:
            keys.append((N, None))
    return keys


def _band_group(cfg: SweepConfig, N: int, Q: int | None):
    """All rows for one (N, Q); the f-table is built once and shared."""
    spec = cfg.source.build(Q)
    table = eval_f_range(spec, N)
    rows: list[list[str]] = []
    stats = SweepStats()
    for q in cfg.q.resolve(N):
        rs = [r for r in range(1, q + 1) if math.gcd(r, q) == 1] if cfg.r.everything else cfg.r.resolve(N)
        bs = list(range(q)) if cfg.b.everything else cfg.b.resolve(N)
        for H in cfg.H.resolve(N):
            for r in rs:
                if math.gcd(r, q) != 1:
                    stats.skipped_gcd += len(bs)
                    continue
                for b in bs:
                    p = BandParams(q, r, b, N, H)
                    if cfg.method == "decomp" and q < 2:
                        stats.skipped_other += 1
                        continue
                    for w in p.warnings():
                        stats.warnings[w.split(":")[0]] += 1
                    start = time.perf_counter()
                    if cfg.method == "decomp":
                        res = band_sum_decomposition(spec, p, table)
                    else:
                        res = band_sum_direct(spec, p, table)
                    elapsed = (time.perf_counter() - start) * 1000 if cfg.timing else None
                    ratios = bound_ratios(res, spec, p, cfg.eps_grid)
                    theta = math.log(H) / math.log(N) if N > 1 else math.nan
                    level = math.log(spec.Q) / math.log(N) if N > 1 else math.nan
                    rows.append(
                        [fmt(N), fmt(q), fmt(spec.Q), fmt(H), fmt(r), fmt(b), fmt(res.T), fmt(abs(res.T))]
                        + [fmt(ratios[e].eq4_ratio) for e in cfg.eps_grid]
                        + [fmt(ratios[e].trivial_ratio) for e in cfg.eps_grid]
                        + [fmt(theta), fmt(level), fmt(elapsed), res.method]
                    )
    stats.rows = len(rows)
    return rows, stats


def _residual_group(cfg: SweepConfig, N: int, Q: int | None):
    spec = cfg.source.build(Q)
    table = eval_f_range(spec, N)
    rows = []
    for ell in range(2, cfg.ell_max + 1):
        for pt in reduced_points(ell):
            rep = lemma31_residual(spec, N, pt, cfg.eps_grid, table)
            rows.append(
                [fmt(N), fmt(spec.Q), fmt(ell), fmt(pt.j), fmt(rep.fhat.real), fmt(rep.fhat.imag), fmt(rep.R_ell), fmt(rep.residual)]
                + [fmt(rep.normalized[e]) for e in cfg.eps_grid]
            )
    return rows, SweepStats(rows=len(rows))


def _run_group(args):
    cfg, N, Q = args
    if cfg.kind == "residual":
        return _residual_group(cfg, N, Q)
    return _band_group(cfg, N, Q)


def run_sweep(cfg: SweepConfig, out) -> SweepStats:
    """Stream the sweep to the text stream ``out``; row order is independent of ``jobs``."""
    if cfg.kind not in ("bands", "residual"):
        raise ValueError(f"unknown sweep kind {cfg.kind!r}")
    if cfg.method not in ("direct", "decomp"):
        raise ValueError(f"sweep method must be direct or decomp, got {cfg.method!r}")
    writer = csv.writer(out, lineterminator="\n")
    if cfg.kind == "residual":
        out.write(CSV_VERSION + " residual\n")
        writer.writerow(residual_header(cfg.eps_grid))
    else:
        out.write(CSV_VERSION + "\n")
        writer.writerow(band_header(cfg.eps_grid))
    total = SweepStats()
    tasks = [(cfg, N, Q) for N, Q in _group_keys(cfg)]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            # map yields in submission order, which restores grid order
            results = pool.map(_run_group, tasks)
            _drain(results, writer, total)
    else:
        _drain(map(_run_group, tasks), writer, total)
    return total


def _drain(results, writer, total: SweepStats) -> None:
    for rows, stats in results:
        writer.writerows(rows)
        total.rows += stats.rows
        total.skipped_gcd += stats.skipped_gcd
        total.skipped_other += stats.skipped_other
        total.warnings.update(stats.warnings)


def run_sweep_to_string(cfg: SweepConfig) -> str:
    buf = io.StringIO()
    run_sweep(cfg, buf)
    return buf.getvalue()


# --- fitting -----------------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual: float
    used: int
    skipped: int


def read_csv_columns(path, x: str, y: str) -> tuple[list[float], list[float]]:
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    reader = csv.DictReader(lines)
    fields = reader.fieldnames or []
    for col in (x, y):
        if col not in fields:
            raise ValueError(f"column {col!r} not in CSV header {fields}")
    xs, ys = [], []
    for row in reader:
        xs.append(float(row[x]))
        ys.append(float(row[y]))
    return xs, ys


def fit_loglog(xs, ys) -> FitResult:
    """Least squares ln y = slope ln x + intercept; rows with x <= 0 or y <= 0 are skipped."""
    pairs = [(a, b) for a, b in zip(xs, ys) if a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)]
    skipped = len(xs) - len(pairs)
    if len(pairs) < 3:
        raise ValueError(f"need at least 3 positive rows to fit, got {len(pairs)}")
    lx = np.log([p[0] for p in pairs])
    ly = np.log([p[1] for p in pairs])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    return FitResult(float(slope), float(intercept), rms, len(pairs), skipped)
