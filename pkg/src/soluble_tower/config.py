"""Tower configuration: the prime sequence, the number of levels and a seed.

Config files are plain text, one ``key = value`` per line, ``#`` starts a
comment::

    primes = 2 3 2 3 2
    max_level = 5      # optional, defaults to the number of primes
    seed = 0           # optional
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


class ConfigError(ValueError):
    """Raised for malformed or inadmissible tower configurations."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class TowerConfig:
    primes: tuple
    max_level: int = 0
    rng_seed: int = 0

    def __post_init__(self):
        primes = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", primes)
        if not primes:
            raise ConfigError("at least one prime is required")
        for i, p in enumerate(primes, start=1):
            if not is_prime(p):
                raise ConfigError(f"p_{i} = {p} is not prime")
        for i in range(len(primes) - 1):
            if primes[i] == primes[i + 1]:
                raise ConfigError(
                    f"consecutive primes must differ: p_{i + 1} = p_{i + 2} = {primes[i]}"
                )
        level = self.max_level or len(primes)
        if not 1 <= level <= len(primes):
            raise ConfigError(f"max_level must lie in [1, {len(primes)}], got {level}")
        object.__setattr__(self, "max_level", level)
        if not 0 <= self.rng_seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    def prime(self, level: int) -> int:
        return self.primes[level - 1]

    def to_text(self) -> str:
        return (
            f"primes = {' '.join(map(str, self.primes))}\n"
            f"max_level = {self.max_level}\n"
            f"seed = {self.rng_seed}\n"
        )


def parse_config(text: str) -> TowerConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value
    unknown = set(values) - {"primes", "max_level", "seed"}
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "primes" not in values:
        raise ConfigError("missing 'primes'")
    try:
        primes = tuple(int(tok) for tok in values["primes"].replace(",", " ").split())
        max_level = int(values.get("max_level", 0))
        seed = int(values.get("seed", 0))
    except ValueError as exc:
        raise ConfigError(f"non-integer value: {exc}") from None
    return TowerConfig(primes, max_level, seed)


def load_config(path) -> TowerConfig:
    return parse_config(Path(path).read_text())
