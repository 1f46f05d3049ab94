"""Shared oracles and the regression-baseline store.

Baselines: quantities with no hard tolerance (slow-converging ratios,
Monte Carlo outputs under a fixed seed) are recorded in _baselines.json on
first run and compared against on every later run, so silent numerical
drift fails loudly.
"""

from __future__ import annotations

import json
import math
import pathlib

import pytest

_BASELINE_PATH = pathlib.Path(__file__).with_name("_baselines.json")


class BaselineStore:
    def __init__(self, path: pathlib.Path):
        self.path = path
        self.data = json.loads(path.read_text()) if path.exists() else {}
        self.dirty = False

    def check(self, name: str, value, rel_tol: float = 1e-9) -> None:
        """Record value on first sight; afterwards require agreement."""
        if name not in self.data:
            self.data[name] = value
            self.dirty = True
            return
        stored = self.data[name]
        if isinstance(value, float) or isinstance(stored, float):
            assert value == pytest.approx(stored, rel=rel_tol, abs=1e-300), (
                f"baseline {name!r} drifted: stored {stored!r}, got {value!r}"
            )
        else:
            assert value == stored, (
                f"baseline {name!r} drifted: stored {stored!r}, got {value!r}"
            )

    def flush(self) -> None:
        if self.dirty:
            self.path.write_text(json.dumps(self.data, indent=2, sort_keys=True) + "\n")
            self.dirty = False


@pytest.fixture(scope="session")
def baseline():
    store = BaselineStore(_BASELINE_PATH)
    yield store
    store.flush()


# ---------------------------------------------------------------------------
# independent oracles (deliberately naive; never share code with the package)

def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def trial_division_primes(lo: int, hi: int) -> list[int]:
    return [n for n in range(lo, hi) if trial_division_is_prime(n)]


def naive_sieve_count(limit: int) -> int:
    """Unsegmented pure-Python sieve; counts primes <= limit."""
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = b"\x00" * len(range(p * p, limit + 1, p))
    return sum(flags)


def naive_factorize(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def simpson_log_integral(x: float, n_panels: int) -> float:
    """Fixed-step composite Simpson for the integral of 1/log t over [2, x].

    Uses the substitution u = log t (so the integrand e^u / u is smooth on
    the whole panel range); the raw integrand's curvature near t = 2 would
    otherwise dominate the error.
    """
    if x == 2:
        return 0.0
    lo, hi = math.log(2.0), math.log(x)
    h = (hi - lo) / (2 * n_panels)

    def f(u: float) -> float:
        return math.exp(u) / u

    total = f(lo) + f(hi)
    for i in range(1, 2 * n_panels):
        total += (4.0 if i % 2 else 2.0) * f(lo + i * h)
    return total * h / 3.0
