"""Sieve functions f = g * 1 with the transform g supported on [1, Q]."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from sieve_bands.core_arith import (
    DomainError,
    ValueTable,
    check_table_length,
    delta_table,
    dirichlet_convolve,
    divisors,
    indicator_table,
    mobius_table,
)


class SpecParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None, source: str | None = None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.lineno = lineno


@dataclass(frozen=True)
class SieveSpec:
    """A sieve function of range ``Q`` given by its Eratosthenes transform ``g`` on ``[1, Q]``."""

    Q: int
    g: ValueTable
    label: str = "custom"
    sup_norm: float = field(init=False)

    def __post_init__(self):
        if self.Q < 1:
            raise DomainError(f"range Q must be >= 1, got {self.Q}")
        if self.g.lo != 1 or self.g.hi != self.Q:
            raise DomainError(f"g must cover [1, {self.Q}], got [{self.g.lo}, {self.g.hi}]")
        sup = float(np.max(np.abs(self.g.values))) if len(self.g) else 0.0
        object.__setattr__(self, "sup_norm", sup)

    @property
    def integer(self) -> bool:
        return self.g.integer

    def eps_norm(self, eps: float) -> float:
        """max_d |g(d)| / d**eps, the finite stand-in for essential boundedness."""
        d = np.arange(1, self.Q + 1, dtype=np.float64)
        return float(np.max(np.abs(self.g.values) / d**eps))

    @classmethod
    def from_g(cls, values, label: str = "custom") -> SieveSpec:
        values = np.asarray(values)
        return cls(len(values), ValueTable(1, len(values), values), label)


def builder_tau_Q(Q: int) -> SieveSpec:
    """tau_Q(n) = #{d | n : d <= Q}; its transform is the indicator of [1, Q]."""
    return SieveSpec(Q, indicator_table(Q), "tau_Q")


def builder_const1() -> SieveSpec:
    """f = 1, with g the Dirichlet identity."""
    return SieveSpec(1, delta_table(1), "const1")


def builder_zero(Q: int = 1) -> SieveSpec:
    return SieveSpec(Q, ValueTable(1, Q, np.zeros(Q, dtype=np.int64)), "zero")


def builder_random(Q: int, seed: int = 0, low: int = -3, high: int = 3) -> SieveSpec:
    """Integer g with independent uniform entries in [low, high]."""
    rng = np.random.default_rng(seed)
    values = rng.integers(low, high, endpoint=True, size=Q, dtype=np.int64)
    return SieveSpec(Q, ValueTable(1, Q, values), "random")


def eval_f(spec: SieveSpec, n: int):
    if n < 1:
        raise DomainError(f"eval_f needs n >= 1, got {n}")
    total = 0 if spec.integer else 0.0
    for d in divisors(n):
        if d > spec.Q:
            break
        total += spec.g.at(d)
    return total


def eval_f_range(spec: SieveSpec, N: int) -> ValueTable:
    """f on the window (N, 2N], sieving each g(d) onto the multiples of d."""
    if N < 1:
        raise DomainError(f"window needs N >= 1, got {N}")
    check_table_length(N)
    gv = spec.g.values
    out = np.zeros(N, dtype=gv.dtype)
    # out[i] holds f(N + 1 + i)
    for d in (np.flatnonzero(gv) + 1).tolist():
        first = (N // d + 1) * d
        if first > 2 * N:
            continue
        out[first - N - 1::d] += gv[d - 1]
    return ValueTable(N + 1, 2 * N, out)


def eratosthenes_transform(f_table: ValueTable) -> ValueTable:
    """g = f * mu on [1, X] for a table f on [1, X]."""
    if f_table.lo != 1:
        raise DomainError(f"f table must start at 1, got lo={f_table.lo}")
    X = f_table.hi
    return dirichlet_convolve(f_table, mobius_table(X), X)


def f_table_upto(spec: SieveSpec, X: int) -> ValueTable:
    """f on [1, X] as g * 1."""
    ones = ValueTable(1, X, np.ones(X, dtype=np.int64))
    return dirichlet_convolve(spec.g, ones, X)


def _parse_number(text: str):
    try:
        return int(text)
    except ValueError:
        value = float(text)
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {text!r}") from None
        return value


def loads_spec(text: str, source: str | None = None, label: str | None = None) -> SieveSpec:
    """Parse the text format: ``Q <Q>`` followed by ``<d> <g(d)>`` lines.

    Omitted d default to zero; blank lines and ``#`` comments are ignored.
    """
    Q = None
    entries: dict[int, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if Q is None:
            if len(parts) != 2 or parts[0] != "Q":
                raise SpecParseError(f"expected header 'Q <Q>', got {raw.strip()!r}", lineno, source)
            try:
                Q = int(parts[1])
            except ValueError:
                raise SpecParseError(f"range {parts[1]!r} is not an integer", lineno, source) from None
            if Q < 1:
                raise SpecParseError(f"range must be >= 1, got {Q}", lineno, source)
            continue
        if len(parts) != 2:
            raise SpecParseError(f"expected '<d> <g(d)>', got {raw.strip()!r}", lineno, source)
        try:
            d = int(parts[0])
        except ValueError:
            raise SpecParseError(f"index {parts[0]!r} is not an integer", lineno, source) from None
        if not 1 <= d <= Q:
            raise SpecParseError(f"index {d} outside [1, {Q}]", lineno, source)
        if d in entries:
            raise SpecParseError(f"duplicate index {d}", lineno, source)
        try:
            entries[d] = _parse_number(parts[1])
        except ValueError:
            raise SpecParseError(f"value {parts[1]!r} is not a number", lineno, source) from None
    if Q is None:
        raise SpecParseError("missing header 'Q <Q>'", None, source)
    integer = all(isinstance(v, int) for v in entries.values())
    values = np.zeros(Q, dtype=np.int64 if integer else np.float64)
    for d, v in entries.items():
        values[d - 1] = v
    return SieveSpec(Q, ValueTable(1, Q, values), label or "file")


def load_spec(path) -> SieveSpec:
    path = Path(path)
    return loads_spec(path.read_text(encoding="utf-8"), source=str(path), label=path.stem)


def dumps_spec(spec: SieveSpec) -> str:
    lines = [f"Q {spec.Q}"]
    for d in (np.flatnonzero(spec.g.values) + 1).tolist():
        value = spec.g.values[d - 1].item()
        lines.append(f"{d} {value if spec.integer else repr(float(value))}")
    return "\n".join(lines) + "\n"
