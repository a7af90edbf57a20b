"""Reduction of exact matrices to F_p for fast full-rank certificates.

Pick a prime p = 1 mod N so that F_p contains a primitive N-th root of unity
w; then zeta_N -> w extends to a ring map from the relevant localisation of
Z[zeta_N] onto F_p.  Ranks can only drop under such a map, so a full rank
mod p certifies full rank over Q(zeta_N).  The converse does not hold and
callers fall back to exact elimination.
"""

from functools import lru_cache

import gmpy2
import numpy as np

from . import _kernels
from .linalg import ExactMatrix

_P_CEIL = (1 << 31) - 1


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def primes_for_conductor(N: int, count: int = 4):
    """``count`` pairs (p, w) with p = 1 mod N and w of exact order N mod p."""
    out = []
    k = (_P_CEIL - 1) // N
    facs = _prime_factors(N)
    while len(out) < count:
        p = k * N + 1
        k -= 1
        if not gmpy2.is_prime(p):
            continue
        for x in range(2, 200):
            w = pow(x, (p - 1) // N, p)
            if all(pow(w, N // r, p) != 1 for r in facs):
                out.append((p, w))
                break
    return tuple(out)


class _BadPrime(Exception):
    pass


def _scalar_mod_p(s, p, wpows):
    acc = 0
    for k, c in enumerate(s._c):
        if c:
            den = int(c.denominator) % p
            if den == 0:
                raise _BadPrime
            acc += int(c.numerator) * pow(den, -1, p) * wpows[k]
    return acc % p


def to_mod_p(m: ExactMatrix, p: int, w: int) -> np.ndarray:
    N = m.conductor
    wpows = [pow(w, k, p) for k in range(N)]
    out = np.zeros((m.nrows, m.ncols), dtype=np.int64)
    for j, col in enumerate(m.cols):
        for i, x in col.items():
            out[i, j] = _scalar_mod_p(x, p, wpows)
    return out


def rank_lower_bound(m: ExactMatrix, backend=None) -> tuple:
    """(rank mod p, p) for the first usable prime; a lower bound on the rank."""
    for p, w in primes_for_conductor(m.conductor):
        try:
            arr = to_mod_p(m, p, w)
        except _BadPrime:
            continue
        # eliminate along the short side
        if arr.shape[0] > arr.shape[1]:
            arr = np.ascontiguousarray(arr.T)
        return _kernels.rank_mod_p(arr, p, backend=backend), p
    return 0, None


def certified_rank(m: ExactMatrix, target: int | None = None) -> tuple:
    """Exact rank plus the method used.

    If the modular rank already reaches ``target`` (default: the maximum
    possible) it is exact; otherwise exact elimination decides.
    """
    full = min(m.nrows, m.ncols)
    target = full if target is None else target
    r, p = rank_lower_bound(m)
    if p is not None and r >= target:
        return r, f"mod-p certificate (p={p})"
    return m.rank(), "exact elimination"
