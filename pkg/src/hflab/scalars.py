"""Exact arithmetic in the cyclotomic fields Q(zeta_N).

A :class:`CycloScalar` stores a polynomial in ``z = zeta_N`` reduced modulo the
N-th cyclotomic polynomial, so two scalars are equal exactly when their
coefficient tuples are equal.  Rationals are :class:`gmpy2.mpq`.
"""

from __future__ import annotations

import re
from functools import lru_cache
from math import gcd

from gmpy2 import mpq

from .errors import ConductorMismatch, InvalidScalar

Q = mpq
_ZERO = mpq(0)
_ONE = mpq(1)


def _poly_divexact(num, den):
    # integer polynomials, lowest degree first; den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    if n < 1:
        raise InvalidScalar(f"conductor must be positive, got {n}")
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        num = _poly_divexact(num, cyclotomic_poly(d))
    return tuple(num)


class _Field:
    __slots__ = ("N", "phi", "red", "one_c", "zero_c")

    def __init__(self, N: int):
        self.N = N
        phi_poly = cyclotomic_poly(N)
        phi = len(phi_poly) - 1
        self.phi = phi
        # red[k] = z^k reduced mod Phi_N, for 0 <= k < N
        red = []
        cur = [_ONE] + [_ZERO] * (phi - 1)
        for _ in range(N):
            red.append(tuple(cur))
            top = cur[-1]
            cur = [_ZERO] + cur[:-1]
            if top:
                for j in range(phi):
                    cur[j] -= top * phi_poly[j]
        self.red = tuple(red)
        self.one_c = (_ONE,) + (_ZERO,) * (phi - 1)
        self.zero_c = (_ZERO,) * phi


@lru_cache(maxsize=None)
def _field(N: int) -> _Field:
    if N < 1:
        raise InvalidScalar(f"conductor must be positive, got {N}")
    return _Field(N)


def _as_rational(x):
    if isinstance(x, int):
        return mpq(x)
    try:
        return mpq(x)
    except (TypeError, ValueError) as exc:
        raise InvalidScalar(f"cannot interpret {x!r} as a rational") from exc


class CycloScalar:
    """Element of Q(zeta_N) in canonical reduced form.

    ``coeffs`` has length N; entries of degree >= deg Phi_N are always zero.
    Arithmetic with plain ints/rationals promotes them into the same field;
    mixing two different conductors raises :class:`ConductorMismatch`.
    """

    __slots__ = ("conductor", "_c", "_h")

    def __init__(self, conductor: int, coeffs=()):
        F = _field(conductor)
        acc = [_ZERO] * F.phi
        N = F.N
        for k, c in enumerate(coeffs):
            c = _as_rational(c)
            if not c:
                continue
            r = F.red[k % N]
            for j in range(F.phi):
                if r[j]:
                    acc[j] += c * r[j]
        self.conductor = conductor
        self._c = tuple(acc)
        self._h = None

    @classmethod
    def _raw(cls, N, c):
        obj = object.__new__(cls)
        obj.conductor = N
        obj._c = c
        obj._h = None
        return obj

    # constructors
    @classmethod
    def rational(cls, value, conductor: int = 1) -> "CycloScalar":
        F = _field(conductor)
        return cls._raw(conductor, (_as_rational(value),) + (_ZERO,) * (F.phi - 1))

    @classmethod
    def zero(cls, conductor: int = 1) -> "CycloScalar":
        return cls._raw(conductor, _field(conductor).zero_c)

    @classmethod
    def one(cls, conductor: int = 1) -> "CycloScalar":
        return cls._raw(conductor, _field(conductor).one_c)

    @classmethod
    def zeta(cls, conductor: int, power: int = 1) -> "CycloScalar":
        F = _field(conductor)
        return cls._raw(conductor, F.red[power % conductor])

    # views
    @property
    def coeffs(self) -> tuple:
        return self._c + (_ZERO,) * (self.conductor - len(self._c))

    @property
    def degree_bound(self) -> int:
        return len(self._c)

    def is_zero(self) -> bool:
        return not any(self._c)

    def __bool__(self):
        return any(self._c)

    def is_rational(self) -> bool:
        return not any(self._c[1:])

    def as_rational(self):
        if not self.is_rational():
            raise InvalidScalar(f"{self} is not rational")
        return self._c[0]

    # coercion
    def _coerce(self, other):
        if isinstance(other, CycloScalar):
            if other.conductor != self.conductor:
                raise ConductorMismatch(
                    f"conductors differ: {self.conductor} vs {other.conductor}")
            return other._c
        try:
            r = _as_rational(other)
        except InvalidScalar:
            return None
        return (r,) + (_ZERO,) * (len(self._c) - 1)

    # arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloScalar._raw(self.conductor, tuple(a + b for a, b in zip(self._c, o)))

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar._raw(self.conductor, tuple(-a for a in self._c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloScalar._raw(self.conductor, tuple(a - b for a, b in zip(self._c, o)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloScalar._raw(self.conductor, tuple(b - a for a, b in zip(self._c, o)))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a = self._c
        phi = len(a)
        if phi == 1:
            return CycloScalar._raw(self.conductor, (a[0] * o[0],))
        if not any(o[1:]):
            r = o[0]
            return CycloScalar._raw(self.conductor, tuple(x * r for x in a))
        if not any(a[1:]):
            r = a[0]
            return CycloScalar._raw(self.conductor, tuple(x * r for x in o))
        acc = [_ZERO] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(o):
                    if y:
                        acc[i + j] += x * y
        F = _field(self.conductor)
        N = F.N
        for k in range(2 * phi - 2, phi - 1, -1):
            c = acc[k]
            if c:
                r = F.red[k % N]
                for j in range(phi):
                    if r[j]:
                        acc[j] += c * r[j]
        return CycloScalar._raw(self.conductor, tuple(acc[:phi]))

    __rmul__ = __mul__

    def inverse(self) -> "CycloScalar":
        if self.is_zero():
            raise InvalidScalar("inverse of zero")
        a = self._c
        phi = len(a)
        if phi == 1 or not any(a[1:]):
            inv = _ONE / a[0]
            return CycloScalar._raw(self.conductor, (inv,) + (_ZERO,) * (phi - 1))
        # columns: a * z^j for j < phi; solve M y = e_0
        z = CycloScalar.zeta(self.conductor)
        cols = []
        cur = self
        for _ in range(phi):
            cols.append(cur._c)
            cur = cur * z
        rows = [[cols[j][i] for j in range(phi)] + [_ONE if i == 0 else _ZERO]
                for i in range(phi)]
        y = _solve_square(rows, phi)
        return CycloScalar._raw(self.conductor, tuple(y))

    def __truediv__(self, other):
        if isinstance(other, CycloScalar):
            return self * other.inverse()
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o[0]:
            raise InvalidScalar("division by zero")
        return CycloScalar._raw(self.conductor, tuple(x / o[0] for x in self._c))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloScalar._raw(self.conductor, o) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloScalar.one(self.conductor)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, CycloScalar):
            return self.conductor == other.conductor and self._c == other._c
        try:
            r = _as_rational(other)
        except InvalidScalar:
            return NotImplemented
        return self._c[0] == r and not any(self._c[1:])

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        if self._h is None:
            if not any(self._c[1:]):
                self._h = hash(self._c[0])
            else:
                self._h = hash((self.conductor, self._c))
        return self._h

    # text
    def to_string(self) -> str:
        parts = []
        for k, c in enumerate(self._c):
            if not c:
                continue
            mon = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if not mon:
                term = str(c)
            elif c == 1:
                term = mon
            elif c == -1:
                term = "-" + mon
            else:
                term = f"{c}*{mon}"
            parts.append(term)
        if not parts:
            return "0"
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    __str__ = to_string

    def __repr__(self):
        return f"CycloScalar({self.conductor}, {self.to_string()!r})"

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "poly": self.to_string()}

    @classmethod
    def from_json(cls, obj: dict) -> "CycloScalar":
        return parse_scalar(obj["poly"], int(obj["conductor"]))


def _solve_square(rows, n):
    """Gauss-Jordan on an augmented n x (n+1) rational matrix; returns solution."""
    rows = [list(r) for r in rows]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            raise InvalidScalar("singular system")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = _ONE / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


_TERM = re.compile(r"^([+-]?)(\d+(?:/\d+)?)?(\*)?(z(?:\^(\d+))?)?$")


def parse_scalar(text, conductor: int = 1) -> CycloScalar:
    """Parse ``"1/2 + 1/2*z"``-style strings (``z`` is zeta_conductor)."""
    if isinstance(text, CycloScalar):
        if text.conductor != conductor:
            return embed_conductor(text, conductor)
        return text
    if isinstance(text, (int,)) or type(text).__name__ == "mpq":
        return CycloScalar.rational(text, conductor)
    if not isinstance(text, str):
        raise InvalidScalar(f"cannot parse scalar from {text!r}")
    s = text.replace(" ", "")
    if not s:
        raise InvalidScalar("empty scalar string")
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise InvalidScalar(f"malformed scalar {text!r}")
    coeffs = {}
    for t in terms:
        m = _TERM.match(t)
        if not m or (m.group(2) is None and m.group(4) is None) or (
                m.group(3) and (m.group(2) is None or m.group(4) is None)):
            raise InvalidScalar(f"malformed term {t!r} in {text!r}")
        sign, num, _, mon, exp = m.groups()
        try:
            c = mpq(num) if num is not None else _ONE
        except ZeroDivisionError:
            raise InvalidScalar(f"zero denominator in {text!r}") from None
        if sign == "-":
            c = -c
        k = 0 if mon is None else (1 if exp is None else int(exp))
        coeffs[k] = coeffs.get(k, _ZERO) + c
    vec = [_ZERO] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        vec[k] = c
    return CycloScalar(conductor, vec)


def scalar_arith(a: CycloScalar, b: CycloScalar | None, op: str) -> CycloScalar:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown op {op!r}")


def embed_conductor(a: CycloScalar, M: int) -> CycloScalar:
    """Image of ``a`` under Q(zeta_N) -> Q(zeta_M), zeta_N -> zeta_M^(M/N)."""
    N = a.conductor
    if M < 1 or M % N:
        raise ConductorMismatch(f"{N} does not divide {M}")
    if M == N:
        return a
    step = M // N
    vec = [_ZERO] * M
    for k, c in enumerate(a._c):
        if c:
            vec[(k * step) % M] += c
    return CycloScalar(M, vec)


def restrict_conductor(a: CycloScalar, N: int) -> CycloScalar:
    """Inverse of :func:`embed_conductor`; raises if ``a`` is not in Q(zeta_N)."""
    M = a.conductor
    if N < 1 or M % N:
        raise ConductorMismatch(f"{N} does not divide {M}")
    phiN = _field(N).phi
    cols = [embed_conductor(CycloScalar.zeta(N, j), M)._c for j in range(phiN)]
    phiM = len(a._c)
    # least squares is meaningless here; do exact elimination on the tall system
    aug = [[cols[j][i] for j in range(phiN)] + [a._c[i]] for i in range(phiM)]
    pivots = []
    r = 0
    for col in range(phiN):
        piv = next((i for i in range(r, phiM) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = _ONE / aug[r][col]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(phiM):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    if any(aug[i][phiN] for i in range(r, phiM)):
        raise ConductorMismatch(f"{a} does not lie in Q(zeta_{N})")
    y = [_ZERO] * phiN
    for i, col in enumerate(pivots):
        y[col] = aug[i][phiN]
    return CycloScalar._raw(N, tuple(y))


def minimal_conductor(a: CycloScalar) -> int:
    for d in divisors(a.conductor):
        try:
            restrict_conductor(a, d)
            return d
        except ConductorMismatch:
            continue
    return a.conductor


def common_conductor(*ns: int) -> int:
    out = 1
    for n in ns:
        out = out * n // gcd(out, n)
    return out


def multiplicative_order(a: CycloScalar):
    """Least n >= 1 with a**n == 1, or None when ``a`` is not a root of unity."""
    if a.is_zero():
        raise InvalidScalar("order of zero is undefined")
    N = a.conductor
    # roots of unity in Q(zeta_N) have order dividing lcm(2, N)
    L = N if N % 2 == 0 else 2 * N
    for d in divisors(L):
        if a ** d == 1:
            return d
    return None
