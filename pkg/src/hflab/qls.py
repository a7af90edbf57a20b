"""Quantum linear spaces: data, characters, PBW normal forms and fiber Hopf algebras.

H is generated by x_1..x_n and invertible g_1..g_n with

    x_i x_j = q_ij x_j x_i,   g_i x_j = q_ij x_j g_i,   g_i g_j = g_j g_i,
    Delta(x_i) = x_i (x) 1 + g_i (x) x_i,   Delta(g_i) = g_i (x) g_i,

and q_ij = zeta_N^{e_ij}.  The elements g_i^{N_i}, x_i^{N_i} generate a
central Hopf subalgebra A whose characters are pairs (t, s) per generator.
The fiber H_kappa is H modulo g_i^{N_i} = t_i, x_i^{N_i} = s_i.
"""

from __future__ import annotations

import itertools
import math
import random
import threading
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import (DatumMismatch, InvalidCocycle, InvalidDatum, InvalidScalar,
                     NotInBasis, TheoremViolation)
from .hopf import CocycleData, HopfData, convolution_inverse, verify_cleaving_pair
from .linalg import ExactMatrix, vec_iadd
from .report import CheckReport
from .scalars import CycloScalar, parse_scalar


# -- datum ------------------------------------------------------------------------

@dataclass(frozen=True)
class QLSDatum:
    theta: int
    conductor: int
    exponents: tuple            # theta x theta, entries mod conductor
    mode: str = "qls"
    orders: tuple = ()          # group_only: torsion orders of the g_i

    def __post_init__(self):
        if self.mode not in ("qls", "group_only"):
            raise InvalidDatum(f"unknown mode {self.mode!r}")
        if self.theta < 0 or self.conductor < 1:
            raise InvalidDatum("theta must be >= 0 and conductor >= 1")
        ex = tuple(tuple(int(v) % self.conductor for v in row) for row in self.exponents)
        if len(ex) != self.theta or any(len(r) != self.theta for r in ex):
            raise InvalidDatum(f"exponents must be a {self.theta}x{self.theta} grid")
        object.__setattr__(self, "exponents", ex)
        if self.mode == "group_only":
            orders = tuple(int(m) for m in self.orders)
            if len(orders) != self.theta or any(m < 1 for m in orders):
                raise InvalidDatum(f"group_only needs {self.theta} orders >= 1, got {self.orders}")
            object.__setattr__(self, "orders", orders)

    @classmethod
    def from_json(cls, obj: dict) -> "QLSDatum":
        if not isinstance(obj, dict):
            raise InvalidDatum("datum must be a JSON object")
        mode = obj.get("mode", "qls")
        try:
            if mode == "group_only":
                orders = tuple(int(m) for m in obj["orders"])
                theta = int(obj.get("theta", len(orders)))
                N = int(obj.get("conductor", 1))
                ex = obj.get("exponents") or [[0] * theta for _ in range(theta)]
                return cls(theta, N, tuple(tuple(r) for r in ex), mode, orders)
            return cls(int(obj["theta"]), int(obj["conductor"]),
                       tuple(tuple(r) for r in obj["exponents"]), mode)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidDatum):
                raise
            raise InvalidDatum(f"malformed datum: {exc}") from exc

    def to_json(self) -> dict:
        out = {"theta": self.theta, "conductor": self.conductor,
               "exponents": [list(r) for r in self.exponents], "mode": self.mode}
        if self.mode == "group_only":
            out["orders"] = list(self.orders)
        return out

    @property
    def group_only(self) -> bool:
        return self.mode == "group_only"

    def q(self, i: int, j: int) -> CycloScalar:
        return CycloScalar.zeta(self.conductor, self.exponents[i][j])

    def _order(self, e: int) -> int:
        return self.conductor // math.gcd(e, self.conductor)

    @cached_property
    def N(self) -> tuple:
        """Orders N_i: of q_ii in qls mode, the given torsion orders otherwise."""
        if self.group_only:
            return self.orders
        return tuple(self._order(self.exponents[i][i]) for i in range(self.theta))

    @cached_property
    def M(self) -> tuple:
        if self.group_only:
            return self.orders
        return tuple(math.lcm(*[self._order(self.exponents[i][j]) for j in range(self.theta)])
                     if self.theta else 1 for i in range(self.theta))

    @property
    def xbounds(self) -> tuple:
        return (1,) * self.theta if self.group_only else self.N

    @property
    def gbounds(self) -> tuple:
        return self.N

    @property
    def fiber_dim(self) -> int:
        return math.prod(self.xbounds) * math.prod(self.gbounds)


def sweedler_datum() -> QLSDatum:
    return QLSDatum(1, 2, ((1,),))


def validate_datum(d: QLSDatum) -> CheckReport:
    rep = CheckReport("validate_datum")
    n = d.theta
    if d.group_only:
        rep.add("orders_positive", all(m >= 1 for m in d.orders), orders=list(d.orders))
        return rep
    bad = [[i + 1, j + 1] for i in range(n) for j in range(i + 1, n)
           if (d.exponents[i][j] + d.exponents[j][i]) % d.conductor]
    rep.add("q_ij_q_ji_is_one", not bad, **({"offending": bad} if bad else {}))
    bad = [i + 1 for i in range(n) if d.N[i] <= 1]
    rep.add("diagonal_order_above_one", not bad, N=list(d.N), **({"offending": bad} if bad else {}))
    bad = [{"i": i + 1, "N_i": d.N[i], "M_i": d.M[i]} for i in range(n) if d.N[i] != d.M[i]]
    rep.add("centrality_N_equals_M", not bad, N=list(d.N), M=list(d.M),
            **({"offending": bad} if bad else {}))
    return rep


def require_valid(d: QLSDatum) -> None:
    rep = validate_datum(d)
    if not rep.passed:
        raise InvalidDatum(f"invalid datum: {[e.to_dict() for e in rep.failures()]}")


# -- characters ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Character:
    """A point of the character group: per generator, t_i = kappa(g_i^{N_i}) and
    s_i = kappa(x_i^{N_i})."""

    datum: QLSDatum
    t: tuple
    s: tuple

    def __post_init__(self):
        N = self.datum.conductor
        th = self.datum.theta
        t = tuple(parse_scalar(x, N) for x in self.t)
        s = tuple(parse_scalar(x, N) for x in self.s) if self.s else (CycloScalar.zero(N),) * th
        if len(t) != th or len(s) != th:
            raise InvalidDatum(f"character needs {th} entries in t and s")
        if any(not x for x in t):
            raise InvalidScalar("character t-values must be nonzero")
        if self.datum.group_only and any(s):
            raise InvalidDatum("group_only characters have no s-part")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "s", s)

    @cached_property
    def key(self) -> tuple:
        return (tuple(x.to_string() for x in self.t), tuple(x.to_string() for x in self.s))

    def __eq__(self, other):
        return isinstance(other, Character) and self.datum == other.datum and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Character(t={list(self.key[0])}, s={list(self.key[1])})"

    @property
    def is_identity(self) -> bool:
        return all(x == 1 for x in self.t) and not any(self.s)

    def __mul__(self, other):
        return char_mul(self, other)

    def inverse(self):
        return char_inv(self)

    def to_json(self) -> dict:
        out = {"t": list(self.key[0])}
        if not self.datum.group_only:
            out["s"] = list(self.key[1])
        return out

    @classmethod
    def from_json(cls, datum: QLSDatum, obj) -> "Character":
        if isinstance(obj, str) and obj.strip() in ("eps", "epsilon", "e", "1"):
            return char_identity(datum)
        if not isinstance(obj, dict) or "t" not in obj:
            raise InvalidDatum(f"character must be an object with 't' (and 's'), got {obj!r}")
        t = [str(x) if not isinstance(x, str) else x for x in obj["t"]]
        s = [str(x) if not isinstance(x, str) else x for x in obj.get("s") or []]
        return cls(datum, tuple(t), tuple(s))

    def value(self, a_exp, b_exp) -> CycloScalar:
        """kappa(x^{N a} g^{N b}) = prod s_i^{a_i} t_i^{b_i}."""
        out = CycloScalar.one(self.datum.conductor)
        for si, ti, a, b in zip(self.s, self.t, a_exp, b_exp):
            out = out * si ** a * ti ** b
        return out


def char_identity(d: QLSDatum) -> Character:
    N = d.conductor
    return Character(d, (CycloScalar.one(N),) * d.theta, (CycloScalar.zero(N),) * d.theta)


def char_mul(a: Character, b: Character) -> Character:
    if a.datum != b.datum:
        raise DatumMismatch("characters belong to different data")
    return Character(a.datum, tuple(x * y for x, y in zip(a.t, b.t)),
                     tuple(s1 + t1 * s2 for s1, t1, s2 in zip(a.s, a.t, b.s)))


def char_inv(a: Character) -> Character:
    ti = tuple(x.inverse() for x in a.t)
    return Character(a.datum, ti, tuple(-x * y for x, y in zip(ti, a.s)))


def char_pow(a: Character, n: int) -> Character:
    base = a if n >= 0 else char_inv(a)
    out = char_identity(a.datum)
    for _ in range(abs(n)):
        out = char_mul(out, base)
    return out


def random_character(d: QLSDatum, rng: random.Random) -> Character:
    N = d.conductor

    def rat(nonzero):
        while True:
            num = rng.randint(-9, 9)
            if num or not nonzero:
                return CycloScalar(N, [num]) / rng.randint(1, 5)

    t = []
    for _ in range(d.theta):
        x = rat(True)
        if N > 1 and rng.random() < 0.3:
            x = x * CycloScalar.zeta(N, rng.randrange(N))
        t.append(x)
    s = [CycloScalar.zero(N) if d.group_only else rat(False) for _ in range(d.theta)]
    return Character(d, tuple(t), tuple(s))


# -- PBW normal forms ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PBWElement:
    """Sparse combination of monomials (a, b, z).

    ``a``: x-exponents in [0, N_i); ``b``: g-exponents (any integer in H,
    [0, N_i) in a fiber); ``z``: exponents of the central symbols
    x_i^{N_i} (always zero in a fiber, where they become s_i).
    """

    datum: QLSDatum
    terms: dict
    kappa: Character | None = None

    def __eq__(self, other):
        return (isinstance(other, PBWElement) and self.datum == other.datum
                and self.kappa == other.kappa and self.terms == other.terms)

    def __add__(self, other):
        out = dict(self.terms)
        vec_iadd(out, other.terms)
        return PBWElement(self.datum, out, self.kappa)

    def __mul__(self, other):
        if isinstance(other, PBWElement):
            return pbw_mul(self, other)
        return PBWElement(self.datum, {k: v * other for k, v in self.terms.items() if v * other},
                          self.kappa)

    def __repr__(self):
        return f"PBWElement({self.terms})"


def _mono_product(d: QLSDatum, u, v, kappa):
    """Product of two monomials: (coefficient, monomial)."""
    a, b, z = u
    c, e, w = v
    E = d.exponents
    n = d.theta
    zexp = 0
    for i in range(n):
        for j in range(n):
            zexp += E[i][j] * b[i] * c[j]
            if i > j:
                zexp += E[i][j] * a[i] * c[j]
    N = d.conductor
    coef = CycloScalar.zeta(N, zexp % N)
    xa, zz, gb = [], list(x + y for x, y in zip(z, w)), []
    for i in range(n):
        s = a[i] + c[i]
        if s >= d.xbounds[i]:
            s -= d.xbounds[i]
            zz[i] += 1
        xa.append(s)
        gb.append(b[i] + e[i])
    if kappa is not None:
        for i in range(n):
            if zz[i]:
                coef = coef * kappa.s[i] ** zz[i]
                zz[i] = 0
            q, r = divmod(gb[i], d.N[i])
            if q:
                coef = coef * kappa.t[i] ** q
            gb[i] = r
    return coef, (tuple(xa), tuple(gb), tuple(zz))


def pbw_mul(u: PBWElement, v: PBWElement) -> PBWElement:
    if u.datum != v.datum or u.kappa != v.kappa:
        raise DatumMismatch("PBW elements live in different algebras")
    out: dict = {}
    for m1, c1 in u.terms.items():
        for m2, c2 in v.terms.items():
            coef, mono = _mono_product(u.datum, m1, m2, u.kappa)
            if coef:
                vec_iadd(out, {mono: c1 * c2 * coef})
    return PBWElement(u.datum, out, u.kappa)


def _gen_monomial(d: QLSDatum, name: str, power: int):
    kind, idx = name[0], int(name[1:]) - 1
    if kind not in "xg" or not 0 <= idx < d.theta:
        raise InvalidDatum(f"unknown generator {name!r}")
    zeros = (0,) * d.theta
    if kind == "x":
        if d.group_only:
            raise InvalidDatum("group_only data have no x generators")
        if power < 0:
            raise NotInBasis(f"{name}^{power}: x generators are not invertible")
        a = list(zeros)
        a[idx] = power
        return tuple(a), zeros, zeros
    b = list(zeros)
    b[idx] = power
    return zeros, tuple(b), zeros


def pbw_normalize(word, d: QLSDatum, kappa: Character | None = None) -> PBWElement:
    """Normal form of a word ``[(generator, exponent), ...]`` or ``["x1", "g2", ...]``.

    Without ``kappa`` the product is taken in H, where x-exponents of the
    input must lie below N_i; with ``kappa`` it is taken in the fiber H_kappa.
    """
    N = d.conductor
    one = CycloScalar.one(N)
    zeros = (0,) * d.theta
    acc = PBWElement(d, {(zeros, zeros, zeros): one}, kappa)
    for item in word:
        name, power = (item, 1) if isinstance(item, str) else item
        power = int(power)
        if name[0] == "x" and power >= d.xbounds[int(name[1:]) - 1] and kappa is None:
            raise NotInBasis(f"{name}^{power} is outside the PBW basis of H; "
                             "reduce x_i^N_i to its central symbol first")
        if name[0] == "x":
            # x^p as repeated products, so wraps in fibers are handled
            for _ in range(power):
                acc = pbw_mul(acc, PBWElement(d, {_gen_monomial(d, name, 1): one}, kappa))
        elif kappa is not None:
            acc = pbw_mul(acc, PBWElement(d, {_gen_monomial(d, name, power): one}, kappa))
        else:
            acc = pbw_mul(acc, PBWElement(d, {_gen_monomial(d, name, power): one}, None))
    return acc


# -- fibers ----------------------------------------------------------------------

def monomials(d: QLSDatum) -> list:
    """Fiber basis as (a, b) pairs in lexicographic order of (a_1..a_n, b_1..b_n)."""
    digits = _kernels.monomial_digits(list(d.xbounds) + list(d.gbounds))
    n = d.theta
    return [(tuple(int(v) for v in row[:n]), tuple(int(v) for v in row[n:])) for row in digits]


def monomial_label(a, b) -> str:
    parts = []
    for i, e in enumerate(a):
        if e:
            parts.append(f"x{i + 1}" + (f"^{e}" if e > 1 else ""))
    for i, e in enumerate(b):
        if e:
            parts.append(f"g{i + 1}" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts) or "1"


@dataclass(frozen=True, eq=False)
class FiberHopf:
    kappa: Character
    hopf: HopfData
    monomials: tuple

    @property
    def dim(self) -> int:
        return self.hopf.dim

    def index(self, a, b) -> int:
        return self._index[(tuple(a), tuple(b))]

    @cached_property
    def _index(self) -> dict:
        return {m: i for i, m in enumerate(self.monomials)}

    def from_pbw(self, el: PBWElement) -> dict:
        out = {}
        for (a, b, z), c in el.terms.items():
            if any(z):
                raise NotInBasis("element still carries central symbols")
            out[self.index(a, b)] = c
        return out


def _fiber_mult(d: QLSDatum, kappa: Character) -> dict:
    target, zexp, xw, gw = _kernels.monomial_product_table(
        d.xbounds, d.gbounds, d.exponents, d.conductor)
    N = d.conductor
    zetas = [CycloScalar.zeta(N, k) for k in range(N)]
    one = CycloScalar.one(N)
    n = d.theta
    # precomputed wrap factors by (xwrap pattern, gwrap pattern)
    factors: dict = {}
    D = target.shape[0]
    mult = {}
    for u in range(D):
        for v in range(D):
            key = (tuple(xw[u, v]), tuple(gw[u, v]))
            f = factors.get(key)
            if f is None:
                f = one
                for i in range(n):
                    if key[0][i]:
                        f = f * kappa.s[i]
                    if key[1][i]:
                        f = f * kappa.t[i]
                factors[key] = f
            if not f:
                continue
            mult[(u, v)] = {int(target[u, v]): zetas[int(zexp[u, v])] * f}
    return mult


def build_fiber(d: QLSDatum, kappa: Character) -> FiberHopf:
    """H_kappa on the PBW monomial basis; at the identity character also the
    coalgebra structure and antipode."""
    require_valid(d)
    if kappa.datum != d:
        raise DatumMismatch("character belongs to another datum")
    mons = tuple(monomials(d))
    N = d.conductor
    one = CycloScalar.one(N)
    mult = _fiber_mult(d, kappa)
    labels = tuple(monomial_label(a, b) for a, b in mons)
    h = HopfData(len(mons), labels, N, mult, {0: one})
    fib = FiberHopf(kappa, h, mons)
    if kappa.is_identity:
        comult = delta_chain(d, [kappa, kappa])
        counit = {i: one for i, (a, b) in enumerate(mons) if not any(a)}
        S = _antipode_matrix(d, kappa, fib, build_fiber_algebra(d, char_inv(kappa)))
        h = HopfData(len(mons), labels, N, mult, {0: one},
                     {i: {(j, k): c for (j, k), c in col.items()} for i, col in enumerate(comult)},
                     counit, S)
        fib = FiberHopf(kappa, h, mons)
    return fib


def build_fiber_algebra(d: QLSDatum, kappa: Character) -> FiberHopf:
    mons = tuple(monomials(d))
    N = d.conductor
    labels = tuple(monomial_label(a, b) for a, b in mons)
    return FiberHopf(kappa, HopfData(len(mons), labels, N, _fiber_mult(d, kappa),
                                     {0: CycloScalar.one(N)}), mons)


# -- coproducts through tensor powers of fibers ----------------------------------

def _tensor_mul_n(algs, u: dict, v: dict) -> dict:
    """Product in the tensor product of algebras; keys are index tuples."""
    out: dict = {}
    n = len(algs)
    for p, x in u.items():
        for r, y in v.items():
            coef = x * y
            idx = []
            for leg in range(n):
                prod = algs[leg].mult.get((p[leg], r[leg]))
                if not prod:
                    coef = None
                    break
                (k, c), = prod.items()
                coef = coef * c
                idx.append(k)
            if coef is None or not coef:
                continue
            vec_iadd(out, {tuple(idx): coef})
    return out


def delta_chain(d: QLSDatum, chars) -> list:
    """Delta_{k_1,...,k_m}: H_{k_1...k_m} -> H_{k_1} (x) ... (x) H_{k_m}.

    Returned as a list over the source basis of dicts keyed by index tuples,
    built by multiplying the images of the generators.
    """
    fibers = [build_fiber_algebra(d, k) for k in chars]
    algs = [f.hopf for f in fibers]
    m = len(chars)
    n = d.theta
    N = d.conductor
    one = CycloScalar.one(N)
    zeros = (0,) * n
    idx0 = [f.index(zeros, zeros) for f in fibers]

    def unit_vec(i, kind):
        a = [0] * n
        if kind == "x":
            a[i] = 1
        return tuple(a)

    def gvec(i):
        b = [0] * n
        b[i] = 1
        return tuple(b)

    gimg, ximg = [], []
    for i in range(n):
        key = tuple(f.index(zeros, gvec(i)) for f in fibers)
        gimg.append({key: one})
        if d.group_only:
            ximg.append(None)
            continue
        terms = {}
        for pos in range(m):
            key = []
            for leg, f in enumerate(fibers):
                if leg < pos:
                    key.append(f.index(zeros, gvec(i)))
                elif leg == pos:
                    key.append(f.index(unit_vec(i, "x"), zeros))
                else:
                    key.append(idx0[leg])
            terms[tuple(key)] = one
        ximg.append(terms)
    unit = {tuple(idx0): one}
    out = []
    cache = {}
    for a, b in fibers[0].monomials:
        xa = cache.get(a)
        if xa is None:
            xa = unit
            for i in range(n):
                for _ in range(a[i]):
                    xa = _tensor_mul_n(algs, xa, ximg[i])
            cache[a] = xa
        img = xa
        for i in range(n):
            for _ in range(b[i]):
                img = _tensor_mul_n(algs, img, gimg[i])
        out.append(img)
    return out


def delta_fiber(d: QLSDatum, kappa: Character, gamma: Character) -> ExactMatrix:
    """Delta_{kappa,gamma} as a (D*D) x D matrix, row index i*D + j."""
    if kappa.datum != d or gamma.datum != d:
        raise DatumMismatch("characters belong to another datum")
    require_valid(d)
    D = d.fiber_dim
    cols = [{i * D + j: c for (i, j), c in img.items()} for img in delta_chain(d, [kappa, gamma])]
    return ExactMatrix(D * D, D, cols, d.conductor)


def _antipode_matrix(d: QLSDatum, kappa: Character, src: FiberHopf, dst: FiberHopf) -> ExactMatrix:
    """S(x^a g^b) = S(g)^b... S(x)^a reversed, evaluated in the target fiber."""
    n = d.theta
    N = d.conductor
    one = CycloScalar.one(N)
    zeros = (0,) * n
    alg = dst.hopf
    tgt = dst.kappa

    def gvec(i, e):
        b = [0] * n
        b[i] = e
        return tuple(b)

    ginv, sx = [], []
    for i in range(n):
        # g^{-1} = t^{-1} g^{N-1} in the target fiber
        Ni = d.N[i]
        gi = {dst.index(zeros, gvec(i, (Ni - 1) % Ni)): tgt.t[i].inverse()}
        ginv.append(gi)
        if not d.group_only:
            a = [0] * n
            a[i] = 1
            sx.append({k: -c for k, c in alg.mul(gi, {dst.index(tuple(a), zeros): one}).items()})
    cols = []
    for a, b in src.monomials:
        img = {0: one}
        # S is anti-multiplicative: S(x^a g^b) = S(g^b) S(x^a), each reversed
        for i in reversed(range(n)):
            for _ in range(b[i]):
                img = alg.mul(img, ginv[i])
        for i in reversed(range(n)):
            for _ in range(a[i]):
                img = alg.mul(img, sx[i])
        cols.append(img)
    return ExactMatrix(dst.dim, src.dim, cols, N)


def antipode_fiber(d: QLSDatum, kappa: Character) -> ExactMatrix:
    """S_kappa: H_kappa -> H_{kappa^-1}."""
    if kappa.datum != d:
        raise DatumMismatch("character belongs to another datum")
    require_valid(d)
    return _antipode_matrix(d, kappa, build_fiber_algebra(d, kappa),
                            build_fiber_algebra(d, char_inv(kappa)))


# -- cocycles pulled back from the group of grouplikes -----------------------------

def group_elements(d: QLSDatum) -> list:
    return [tuple(int(v) for v in row) for row in _kernels.monomial_digits(d.gbounds)]


def bicharacter_table(d: QLSDatum, values) -> dict:
    """beta(g^b, g^c) = prod beta_ij^{b_i c_j} on L = prod Z/N_i."""
    N = d.conductor
    n = d.theta
    B = [[parse_scalar(values[i][j], N) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if not B[i][j] or B[i][j] ** d.N[i] != 1 or B[i][j] ** d.N[j] != 1:
                raise InvalidCocycle(f"beta({i + 1},{j + 1}) = {B[i][j]} is not a bicharacter "
                                     f"value on Z/{d.N[i]} x Z/{d.N[j]}")
    table = {}
    for b in group_elements(d):
        for c in group_elements(d):
            v = CycloScalar.one(N)
            for i in range(n):
                for j in range(n):
                    if b[i] and c[j]:
                        v = v * B[i][j] ** (b[i] * c[j])
            table[(b, c)] = v
    return table


def group_function_table(d: QLSDatum, values) -> dict:
    elems = group_elements(d)
    if len(values) != len(elems) or any(len(r) != len(elems) for r in values):
        raise InvalidCocycle(f"group_function table must be {len(elems)}x{len(elems)}")
    N = d.conductor
    return {(b, c): parse_scalar(values[i][j], N)
            for i, b in enumerate(elems) for j, c in enumerate(elems)}


def pulled_back_cocycle(h_eps: HopfData, d: QLSDatum, table: dict) -> CocycleData:
    """sigma(u, v) = beta(pi u, pi v) along pi: H_eps -> kL (x -> 0, g -> g)."""
    mons = monomials(d)
    grp = [(i, b) for i, (a, b) in enumerate(mons) if not any(a)]
    vals, inv = {}, {}
    for i, b in grp:
        for j, c in grp:
            v = table[(b, c)]
            if not v:
                raise InvalidCocycle("cocycle values on grouplikes must be nonzero")
            vals[(i, j)] = v
            inv[(i, j)] = v.inverse()
    return CocycleData(h_eps, vals, inv)


def cocycle_from_json(h_eps: HopfData, d: QLSDatum, spec: dict) -> CocycleData:
    kind = spec.get("type", "bicharacter")
    if kind == "bicharacter":
        table = bicharacter_table(d, spec["values"])
    elif kind == "group_function":
        table = group_function_table(d, spec["values"])
    else:
        raise InvalidCocycle(f"unknown cocycle type {kind!r}")
    return pulled_back_cocycle(h_eps, d, table)


# -- Hopf system ------------------------------------------------------------------

class HopfSystem:
    """The family (H_kappa, Delta_{kappa,gamma}, S_kappa), optionally twisted by a
    cocycle sigma on H_eps.  Builds are cached per canonical character key;
    duplicate concurrent builds are harmless."""

    def __init__(self, datum: QLSDatum, sigma: CocycleData | None = None):
        require_valid(datum)
        self.datum = datum
        self.sigma = sigma
        self._lock = threading.Lock()
        self._fibers: dict = {}
        self._base: dict = {}
        self._delta: dict = {}
        self._chain: dict = {}
        self._antipode: dict = {}

    @cached_property
    def eps(self) -> Character:
        return char_identity(self.datum)

    @property
    def dim(self) -> int:
        return self.datum.fiber_dim

    def _get(self, cache, key, build):
        hit = cache.get(key)
        if hit is not None:
            return hit
        val = build()
        with self._lock:
            cache[key] = val
        return val

    def base_fiber(self, kappa: Character) -> FiberHopf:
        return self._get(self._base, kappa.key, lambda: build_fiber_algebra(self.datum, kappa))

    def hopf_eps(self) -> HopfData:
        """H_eps as a Hopf algebra (twisted when sigma is present)."""
        return self._get(self._fibers, ("hopf", self.eps.key), self._build_hopf_eps)

    def _build_hopf_eps(self) -> HopfData:
        base = build_fiber(self.datum, self.eps).hopf
        if self.sigma is None:
            return base
        from .hopf import cocycle_twist
        return cocycle_twist(base, self.sigma)

    def fiber(self, kappa: Character) -> HopfData:
        """Algebra H_kappa (twisted multiplication when sigma is present)."""
        def build():
            base = self.base_fiber(kappa).hopf
            if self.sigma is None:
                return base
            return HopfData(base.dim, base.basis_labels, base.conductor,
                            self._twisted_mult(kappa), dict(base.unit))
        return self._get(self._fibers, kappa.key, build)

    def chain(self, chars) -> list:
        key = tuple(k.key for k in chars)
        return self._get(self._chain, key, lambda: delta_chain(self.datum, list(chars)))

    def delta(self, kappa: Character, gamma: Character) -> ExactMatrix:
        if kappa.datum != self.datum or gamma.datum != self.datum:
            raise DatumMismatch("characters belong to another datum")
        D = self.dim

        def build():
            cols = [{i * D + j: c for (i, j), c in img.items()}
                    for img in self.chain([kappa, gamma])]
            return ExactMatrix(D * D, D, cols, self.datum.conductor)
        return self._get(self._delta, (kappa.key, gamma.key), build)

    def counit(self) -> dict:
        one = CycloScalar.one(self.datum.conductor)
        return {i: one for i, (a, b) in enumerate(monomials(self.datum)) if not any(a)}

    def untwisted_antipode(self, kappa: Character) -> ExactMatrix:
        return self._get(self._antipode, ("plain", kappa.key),
                         lambda: _antipode_matrix(self.datum, kappa, self.base_fiber(kappa),
                                                  self.base_fiber(char_inv(kappa))))

    def antipode(self, kappa: Character) -> ExactMatrix:
        if self.sigma is None:
            return self.untwisted_antipode(kappa)
        return self._get(self._antipode, ("twisted", kappa.key),
                         lambda: self._twisted_antipode(kappa))

    # twisted structure, leg by leg through the coproduct of the fiber
    def _twisted_mult(self, kappa: Character) -> dict:
        e = self.eps
        legs = self.chain([e, kappa, e])
        alg = self.base_fiber(kappa).hopf
        s, si = self.sigma.values, self.sigma.inverse_values
        D = self.dim
        mult = {}
        for u in range(D):
            for v in range(D):
                out: dict = {}
                for (p, m, r), x in legs[u].items():
                    for (p2, m2, r2), y in legs[v].items():
                        f = s.get((p, p2))
                        if f is None:
                            continue
                        g = si.get((r, r2))
                        if g is None:
                            continue
                        prod = alg.mult.get((m, m2))
                        if prod:
                            vec_iadd(out, prod, x * y * f * g)
                if out:
                    mult[(u, v)] = out
        return mult

    def _twisted_antipode(self, kappa: Character) -> ExactMatrix:
        """sigma(x1, S x2) S(x3) sigma^-1(S x4, x5) with x3 in H_kappa."""
        e = self.eps
        legs = self.chain([e, e, kappa, e, e])
        S_e = self.untwisted_antipode(e)
        S_k = self.untwisted_antipode(kappa)
        s, si = self.sigma.values, self.sigma.inverse_values
        N = self.datum.conductor
        D = self.dim

        def pair(table, u: dict, v: dict, left_fixed: bool):
            acc = CycloScalar.zero(N)
            for i, x in u.items():
                for j, y in v.items():
                    w = table.get((i, j))
                    if w is not None:
                        acc = acc + x * y * w
            return acc

        cols = []
        for src in range(D):
            out: dict = {}
            for (p1, p2, p3, p4, p5), c in legs[src].items():
                left = pair(s, {p1: CycloScalar.one(N)}, S_e.cols[p2], True)
                if not left:
                    continue
                right = pair(si, S_e.cols[p4], {p5: CycloScalar.one(N)}, False)
                if not right:
                    continue
                vec_iadd(out, S_k.cols[p3], c * left * right)
            cols.append(out)
        return ExactMatrix(D, D, cols, N)


# -- coherence checks --------------------------------------------------------------

def _kron_apply_left(delta: ExactMatrix, D1: int, D2: int, vec: dict) -> dict:
    """(delta (x) id) on vectors indexed i*D2 + j with delta acting on i."""
    out: dict = {}
    for key, c in vec.items():
        i, j = divmod(key, D2)
        for r, x in delta.cols[i].items():
            vec_iadd(out, {r * D2 + j: c * x})
    return out


def _kron_apply_right(delta: ExactMatrix, D1: int, D2: int, vec: dict) -> dict:
    """(id (x) delta) with delta: D2 -> D2' acting on j; output i*D2' + r."""
    out: dict = {}
    D2out = delta.nrows
    for key, c in vec.items():
        i, j = divmod(key, D2)
        for r, x in delta.cols[j].items():
            vec_iadd(out, {i * D2out + r: c * x})
    return out


def coassociativity_holds(sys: HopfSystem, k: Character, g: Character, n: Character) -> bool:
    """(Delta_{k,g} (x) id) Delta_{kg,n} == (id (x) Delta_{g,n}) Delta_{k,gn}."""
    D = sys.dim
    left_outer = sys.delta(char_mul(k, g), n)
    right_outer = sys.delta(k, char_mul(g, n))
    dkg = sys.delta(k, g)
    dgn = sys.delta(g, n)
    for col in range(D):
        lhs = _kron_apply_left(dkg, D, D, left_outer.cols[col])
        rhs = _kron_apply_right(dgn, D, D, right_outer.cols[col])
        if lhs != rhs:
            return False
    return True


def antipode_axiom_holds(sys: HopfSystem, kappa: Character) -> bool:
    """m_kappa (id (x) S_{kappa^-1}) Delta_{kappa,kappa^-1} = u_kappa eps,
    and the mirrored m_kappa (S_{kappa^-1} (x) id) Delta_{kappa^-1,kappa} = u_kappa eps."""
    ki = char_inv(kappa)
    D = sys.dim
    alg = sys.fiber(kappa)
    S = sys.antipode(ki)
    eps = sys.counit()
    unit = alg.unit
    for side in ("right", "left"):
        delta = sys.delta(kappa, ki) if side == "right" else sys.delta(ki, kappa)
        for col in range(D):
            out: dict = {}
            for key, c in delta.cols[col].items():
                i, j = divmod(key, D)
                if side == "right":
                    vec_iadd(out, alg.mul({i: CycloScalar.one(sys.datum.conductor)}, S.cols[j]), c)
                else:
                    vec_iadd(out, alg.mul(S.cols[i], {j: CycloScalar.one(sys.datum.conductor)}), c)
            e = eps.get(col)
            target = {k: v * e for k, v in unit.items()} if e else {}
            if out != target:
                return False
    return True


def delta_is_algebra_map(sys: HopfSystem, k: Character, g: Character) -> bool:
    D = sys.dim
    src = sys.fiber(char_mul(k, g))
    A, B = sys.fiber(k), sys.fiber(g)
    delta = sys.delta(k, g)

    def split(v):
        return {divmod(key, D): c for key, c in v.items()}

    from .hopf import tensor_mul
    for i in range(D):
        for j in range(D):
            lhs = split(delta.apply(src.mul_basis(i, j)))
            rhs = tensor_mul(A, B, split(delta.cols[i]), split(delta.cols[j]))
            if lhs != rhs:
                return False
    return True


def counit_identity_holds(sys: HopfSystem, kappa: Character) -> bool:
    """(id (x) eps) Delta_{kappa,eps} = id = (eps (x) id) Delta_{eps,kappa}."""
    D = sys.dim
    eps = sys.counit()
    d1 = sys.delta(kappa, sys.eps)
    d2 = sys.delta(sys.eps, kappa)
    for col in range(D):
        a: dict = {}
        b: dict = {}
        for key, c in d1.cols[col].items():
            i, j = divmod(key, D)
            if j in eps:
                vec_iadd(a, {i: c * eps[j]})
        for key, c in d2.cols[col].items():
            i, j = divmod(key, D)
            if i in eps:
                vec_iadd(b, {j: c * eps[i]})
        e = {col: CycloScalar.one(sys.datum.conductor)}
        if a != e or b != e:
            return False
    return True


def verify_coherence(sys: HopfSystem, chars) -> CheckReport:
    """Hopf-system identities on all triples / pairs drawn from ``chars``."""
    rep = CheckReport("hopf_system_coherence")
    chars = list(chars)
    bad = [[a.to_json(), b.to_json(), c.to_json()] for a, b, c in itertools.product(chars, repeat=3)
           if not coassociativity_holds(sys, a, b, c)]
    rep.add("coassociativity", not bad, triples=len(chars) ** 3, **({"witness": bad[0]} if bad else {}))
    bad = [k.to_json() for k in chars if not antipode_axiom_holds(sys, k)]
    rep.add("antipode_axiom", not bad, **({"witness": bad[0]} if bad else {}))
    bad = [k.to_json() for k in chars if not counit_identity_holds(sys, k)]
    rep.add("counit_identity", not bad, **({"witness": bad[0]} if bad else {}))
    return rep


# -- cleaving ------------------------------------------------------------------------

def cleaving_section(d: QLSDatum, kappa: Character):
    """(chi, xi, chi_inv): a convolution-invertible comodule map chi: H_eps -> H_kappa
    and xi: H_kappa -> k with r_0 chi^-1(r_1) = xi(r) 1.

    chi(x^a g^b) is the image of x^a g^c in H_kappa with
    c_i = ((a_i + b_i) mod N_i) - a_i, the lift that keeps chi colinear when
    g^{N_i} acts by t_i != 1.
    """
    require_valid(d)
    eps = char_identity(d)
    src = build_fiber(d, eps)
    dst = build_fiber_algebra(d, kappa)
    n = d.theta
    N = d.conductor
    cols = []
    for a, b in src.monomials:
        coef = CycloScalar.one(N)
        bb = []
        for i in range(n):
            c = (a[i] + b[i]) % d.N[i] - a[i]
            if c < 0:
                coef = coef * kappa.t[i].inverse()
                c += d.N[i]
            bb.append(c)
        cols.append({dst.index(a, tuple(bb)): coef})
    D = src.dim
    chi = ExactMatrix(D, D, cols, N)
    chi_inv = convolution_inverse(chi, src.hopf, dst.hopf)
    if chi_inv is None:
        raise TheoremViolation("section is not convolution invertible")
    rho = delta_fiber(d, kappa, eps)
    # xi(r) = r_0 chi^-1(r_1), a multiple of the unit
    xi_cols = []
    for col in range(D):
        out: dict = {}
        for key, c in rho.cols[col].items():
            i, j = divmod(key, D)
            vec_iadd(out, dst.hopf.mul({i: CycloScalar.one(N)}, chi_inv.cols[j]), c)
        if any(k != 0 for k in out):
            raise TheoremViolation("r_0 chi^-1(r_1) left the coinvariants")
        xi_cols.append({0: out[0]} if 0 in out else {})
    xi = ExactMatrix(1, D, xi_cols, N)
    return chi, xi, chi_inv


def verify_cleaving(d: QLSDatum, kappa: Character, chi=None, xi=None) -> CheckReport:
    """Run the cleaving-pair verifier on H_kappa as an H_eps-comodule algebra."""
    from .hopf import trivial_hopf
    eps = char_identity(d)
    if chi is None or xi is None:
        c, x, _ = cleaving_section(d, kappa)
        chi = c if chi is None else chi
        xi = x if xi is None else xi
    B = build_fiber(d, eps).hopf
    C = build_fiber_algebra(d, kappa).hopf
    A = trivial_hopf(d.conductor)
    iota = ExactMatrix(C.dim, 1, [dict(C.unit)], d.conductor)
    rho = delta_fiber(d, kappa, eps)
    return verify_cleaving_pair(xi, chi, A, C, B, iota=iota, rho=rho)


def monomial_delta_coefficients(d: QLSDatum, n: int) -> list:
    """Coefficients of x^{n-k} g^k (x) x^k in Delta(x_1^n) at the identity fiber."""
    eps = char_identity(d)
    fib = build_fiber_algebra(d, eps)
    D = fib.dim
    zeros = (0,) * d.theta

    def vec(i, e):
        a = [0] * d.theta
        a[i] = e
        return tuple(a)

    src = fib.index(vec(0, n), zeros)
    img = delta_fiber(d, eps, eps).cols[src]
    out = []
    for k in range(n + 1):
        key = fib.index(vec(0, n - k), vec(0, k)) * D + fib.index(vec(0, k), zeros)
        out.append(img.get(key, CycloScalar.zero(d.conductor)))
    return out
