"""Integer hot loops: PBW monomial product tables and rank modulo a prime.

Each kernel exists twice, a numba ``@njit`` loop and a vectorised numpy
version.  ``HFLAB_NUMBA=0`` in the environment (or a missing numba) selects
the numpy path.  Both paths must return identical arrays.
"""

import logging
import os

import numpy as np

logger = logging.getLogger(__name__)

_WANT_NUMBA = os.environ.get("HFLAB_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    import numba

    njit = numba.njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func
        return wrap(args[0]) if args and callable(args[0]) else wrap

BACKEND = "numba" if (HAVE_NUMBA and _WANT_NUMBA) else "numpy"


def monomial_digits(bounds):
    """All mixed-radix digit vectors for ``bounds``, lexicographic order."""
    bounds = np.asarray(bounds, dtype=np.int64)
    if bounds.size == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(b, dtype=np.int64) for b in bounds], indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1)


def _strides(bounds):
    bounds = np.asarray(bounds, dtype=np.int64)
    strides = np.ones(bounds.size, dtype=np.int64)
    for k in range(bounds.size - 2, -1, -1):
        strides[k] = strides[k + 1] * bounds[k + 1]
    return strides


# -- monomial product table ---------------------------------------------------

@njit(cache=True)
def _table_numba(digits, xb, gb, E, N, strides):
    D = digits.shape[0]
    th = xb.shape[0]
    target = np.empty((D, D), dtype=np.int64)
    zexp = np.empty((D, D), dtype=np.int64)
    xw = np.zeros((D, D, th), dtype=np.int64)
    gw = np.zeros((D, D, th), dtype=np.int64)
    for u in range(D):
        for v in range(D):
            e = 0
            idx = 0
            for i in range(th):
                bi = digits[u, th + i]
                ai = digits[u, i]
                for j in range(th):
                    cj = digits[v, j]
                    e += E[i, j] * bi * cj
                    if i > j:
                        e += E[i, j] * ai * cj
            for i in range(th):
                s = digits[u, i] + digits[v, i]
                if s >= xb[i]:
                    s -= xb[i]
                    xw[u, v, i] = 1
                idx += s * strides[i]
                t = digits[u, th + i] + digits[v, th + i]
                if t >= gb[i]:
                    t -= gb[i]
                    gw[u, v, i] = 1
                idx += t * strides[th + i]
            target[u, v] = idx
            zexp[u, v] = e % N
    return target, zexp, xw, gw


def _table_numpy(digits, xb, gb, E, N, strides):
    th = xb.shape[0]
    a = digits[:, :th]
    b = digits[:, th:]
    # e(u, v) = b_u E c_v + sum_{i>j} a_u,i E_ij c_v,j
    lower = np.tril(E, k=-1)
    zexp = (b @ E @ a.T + a @ lower @ a.T) % N
    xs = a[:, None, :] + a[None, :, :]
    gs = b[:, None, :] + b[None, :, :]
    xw = (xs >= xb).astype(np.int64)
    gw = (gs >= gb).astype(np.int64)
    xs = xs - xw * xb
    gs = gs - gw * gb
    target = xs @ strides[:th] + gs @ strides[th:]
    return target.astype(np.int64), zexp.astype(np.int64), xw, gw


def monomial_product_table(xbounds, gbounds, exponents, conductor, backend=None):
    """Products of PBW monomials x^a g^b in a fiber, as integer data.

    Returns ``(target, zexp, xwrap, gwrap)``: monomial u times monomial v is
    ``zeta^zexp * prod t_i^gwrap_i * prod s_i^xwrap_i`` times monomial
    ``target``.  Basis order is lexicographic in (a_1..a_n, b_1..b_n).
    """
    xb = np.asarray(xbounds, dtype=np.int64)
    gb = np.asarray(gbounds, dtype=np.int64)
    E = np.asarray(exponents, dtype=np.int64).reshape(xb.size, xb.size)
    bounds = np.concatenate([xb, gb])
    digits = monomial_digits(bounds)
    strides = _strides(bounds)
    backend = backend or BACKEND
    if backend == "numba":
        return _table_numba(digits, xb, gb, E, np.int64(conductor), strides)
    return _table_numpy(digits, xb, gb, E, int(conductor), strides)


# -- rank over F_p ------------------------------------------------------------

@njit(cache=True)
def _rank_mod_p_numba(M, p):
    A = M.copy()
    m, n = A.shape
    r = 0
    for c in range(n):
        piv = -1
        for i in range(r, m):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(n):
                tmp = A[r, k]
                A[r, k] = A[piv, k]
                A[piv, k] = tmp
        # modular inverse by Fermat
        inv = 1
        base = A[r, c]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for k in range(c, n):
            A[r, k] = (A[r, k] * inv) % p
        for i in range(r + 1, m):
            f = A[i, c]
            if f != 0:
                for k in range(c, n):
                    A[i, k] = (A[i, k] - f * A[r, k]) % p
        r += 1
        if r == m:
            break
    return r


def _rank_mod_p_numpy(M, p):
    A = np.array(M, dtype=np.int64, copy=True)
    m, n = A.shape
    r = 0
    for c in range(n):
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, c:] = (A[r, c:] * inv) % p
        f = A[r + 1:, c].copy()
        if f.any():
            A[r + 1:, c:] = (A[r + 1:, c:] - np.outer(f, A[r, c:]) % p) % p
        r += 1
        if r == m:
            break
    return r


def rank_mod_p(M, p, backend=None):
    """Rank of an integer matrix with entries in [0, p), p < 2**31."""
    M = np.ascontiguousarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    backend = backend or BACKEND
    if backend == "numba":
        return int(_rank_mod_p_numba(M, np.int64(p)))
    return _rank_mod_p_numpy(M, int(p))
