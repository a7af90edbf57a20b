"""Finite-dimensional (co)algebras and Hopf algebras by structure constants.

Basis elements are integers ``0..dim-1``.  Multiplication ``mult[(i, j)]`` is
the sparse vector of ``b_i b_j``; comultiplication ``comult[i]`` maps
``(j, k)`` to the coefficient of ``b_j (x) b_k`` in ``Delta(b_i)``.  Either the
algebra or the coalgebra half may be absent (``None``), which is how plain
coalgebras such as the components of a graded system are represented.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

from .errors import (IncompleteDatum, InternalInconsistency, InvalidCocycle,
                     InvalidDatum, InvalidMorphism, InvalidSubobject, ShapeError,
                     TheoremViolation)
from .linalg import (ExactMatrix, ExactSubspace, kernel, solve_sparse_system,
                     trace_form_radical, vec_iadd)
from .report import CheckReport
from .scalars import CycloScalar, parse_scalar


@dataclass(frozen=True, eq=False)
class HopfData:
    dim: int
    basis_labels: tuple
    conductor: int = 1
    mult: dict | None = None
    unit: dict | None = None
    comult: dict | None = None
    counit: dict | None = None
    antipode: ExactMatrix | None = None

    @property
    def has_algebra(self) -> bool:
        return self.mult is not None and self.unit is not None

    @property
    def has_coalgebra(self) -> bool:
        return self.comult is not None and self.counit is not None

    # scalars
    def zero(self) -> CycloScalar:
        return CycloScalar.zero(self.conductor)

    def one_scalar(self) -> CycloScalar:
        return CycloScalar.one(self.conductor)

    def basis_vector(self, i: int) -> dict:
        return {i: self.one_scalar()}

    # algebra
    def mul_basis(self, i: int, j: int) -> dict:
        return self.mult.get((i, j), {})

    def mul(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                prod = self.mult.get((i, j))
                if prod:
                    vec_iadd(out, prod, a * b)
        return out

    # coalgebra
    def delta(self, v: dict) -> dict:
        out: dict = {}
        for i, a in v.items():
            vec_iadd(out, self.comult.get(i, {}), a)
        return out

    def eps(self, v: dict) -> CycloScalar:
        acc = self.zero()
        for i, a in v.items():
            c = self.counit.get(i)
            if c is not None:
                acc = acc + a * c
        return acc

    def apply_antipode(self, v: dict) -> dict:
        return self.antipode.apply(v)

    # matrices of structure maps
    def mult_matrix(self) -> ExactMatrix:
        D = self.dim
        return ExactMatrix(D, D * D, [dict(self.mul_basis(i, j)) for i in range(D) for j in range(D)],
                           self.conductor)

    def comult_matrix(self) -> ExactMatrix:
        D = self.dim
        return ExactMatrix(D * D, D, [{j * D + k: c for (j, k), c in self.comult.get(i, {}).items()}
                                      for i in range(D)], self.conductor)

    def __repr__(self):
        return f"HopfData(dim={self.dim}, conductor={self.conductor})"

    # serialization
    def to_json(self) -> dict:
        D = self.dim
        out = {"dim": D, "basis_labels": list(self.basis_labels), "conductor": self.conductor}
        if self.mult is not None:
            out["mult"] = [[i, j, k, str(c)] for (i, j) in sorted(self.mult)
                           for k, c in sorted(self.mult[(i, j)].items())]
            out["unit"] = [str(self.unit.get(i, self.zero())) for i in range(D)]
        else:
            out["mult"] = None
            out["unit"] = None
        if self.comult is not None:
            out["comult"] = [[i, j, k, str(c)] for i in sorted(self.comult)
                             for (j, k), c in sorted(self.comult[i].items())]
            out["counit"] = [str(self.counit.get(i, self.zero())) for i in range(D)]
        else:
            out["comult"] = None
            out["counit"] = None
        if self.antipode is not None:
            out["antipode"] = [[str(x) for x in row] for row in self.antipode.to_dense()]
        else:
            out["antipode"] = None
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "HopfData":
        D = int(obj["dim"])
        N = int(obj.get("conductor", 1))
        labels = tuple(obj.get("basis_labels") or [f"b{i}" for i in range(D)])
        mult = unit = comult = counit = antipode = None
        if obj.get("mult") is not None:
            mult = {}
            for i, j, k, c in obj["mult"]:
                c = parse_scalar(c, N)
                if c:
                    mult.setdefault((i, j), {})[k] = c
            unit = _dense_to_sparse(obj["unit"], N)
        if obj.get("comult") is not None:
            comult = {}
            for i, j, k, c in obj["comult"]:
                c = parse_scalar(c, N)
                if c:
                    comult.setdefault(i, {})[(j, k)] = c
            counit = _dense_to_sparse(obj["counit"], N)
        if obj.get("antipode") is not None:
            antipode = ExactMatrix.from_dense(obj["antipode"], N)
        return cls(D, labels, N, mult, unit, comult, counit, antipode)

    def same_structure(self, other: "HopfData") -> bool:
        """Equality of every structure constant (labels ignored)."""
        return (self.dim == other.dim and self.conductor == other.conductor
                and _norm(self.mult) == _norm(other.mult) and self.unit == other.unit
                and _norm(self.comult) == _norm(other.comult) and self.counit == other.counit
                and self.antipode == other.antipode)


def _norm(d):
    if d is None:
        return None
    return {k: v for k, v in d.items() if v}


def _dense_to_sparse(values, N) -> dict:
    out = {}
    for i, x in enumerate(values):
        x = parse_scalar(x, N)
        if x:
            out[i] = x
    return out


# -- tensor helpers -------------------------------------------------------------

def tensor_mul(h1: HopfData, h2: HopfData, u: dict, v: dict) -> dict:
    """Product in the algebra h1 (x) h2 of elements keyed by (i, j)."""
    out: dict = {}
    for (i, j), a in u.items():
        for (k, l), b in v.items():
            p1 = h1.mult.get((i, k))
            if not p1:
                continue
            p2 = h2.mult.get((j, l))
            if not p2:
                continue
            ab = a * b
            for r, x in p1.items():
                for s, y in p2.items():
                    key = (r, s)
                    val = ab * x * y
                    cur = out.get(key)
                    if cur is None:
                        out[key] = val
                    else:
                        val = cur + val
                        if val:
                            out[key] = val
                        else:
                            del out[key]
    return out


def _delta2(h: HopfData, i: int) -> dict:
    """(Delta (x) id) Delta(b_i) keyed by (a, b, c)."""
    out: dict = {}
    for (j, k), c in h.comult.get(i, {}).items():
        for (a, b), d in h.comult.get(j, {}).items():
            key = (a, b, k)
            val = c * d
            cur = out.get(key)
            if cur is None:
                out[key] = val
            else:
                val = cur + val
                if val:
                    out[key] = val
                else:
                    del out[key]
    return out


# -- verifiers ------------------------------------------------------------------



def verify_algebra(h: HopfData, report: CheckReport | None = None) -> CheckReport:
    rep = report or CheckReport("algebra")
    D = h.dim
    if not h.has_algebra:
        rep.add("associativity", False, reason="no multiplication")
        rep.add("unitality", False, reason="no unit")
        return rep
    bad = None
    for i, j, k in itertools.product(range(D), repeat=3):
        left = h.mul(h.mul_basis(i, j), h.basis_vector(k))
        right = h.mul(h.basis_vector(i), h.mul_basis(j, k))
        if left != right:
            bad = [i, j, k]
            break
    rep.add("associativity", bad is None, **({"witness": bad} if bad else {}))
    bad = None
    for i in range(D):
        e = h.basis_vector(i)
        if h.mul(h.unit, e) != e or h.mul(e, h.unit) != e:
            bad = i
            break
    rep.add("unitality", bad is None, **({"witness": bad} if bad is not None else {}))
    return rep


def verify_coalgebra(h: HopfData, report: CheckReport | None = None) -> CheckReport:
    rep = report or CheckReport("coalgebra")
    D = h.dim
    if not h.has_coalgebra:
        rep.add("coassociativity", False, reason="no comultiplication")
        rep.add("counitality", False, reason="no counit")
        return rep
    bad = None
    for i in range(D):
        left = _delta2(h, i)
        right: dict = {}
        for (j, k), c in h.comult.get(i, {}).items():
            for (b, cc), d in h.comult.get(k, {}).items():
                vec_iadd(right, {(j, b, cc): c * d})
        if left != right:
            bad = i
            break
    rep.add("coassociativity", bad is None, **({"witness": bad} if bad is not None else {}))
    bad = None
    for i in range(D):
        left: dict = {}
        right: dict = {}
        for (j, k), c in h.comult.get(i, {}).items():
            ek = h.counit.get(k)
            if ek is not None:
                vec_iadd(left, {j: c * ek})
            ej = h.counit.get(j)
            if ej is not None:
                vec_iadd(right, {k: c * ej})
        e = h.basis_vector(i)
        if left != e or right != e:
            bad = i
            break
    rep.add("counitality", bad is None, **({"witness": bad} if bad is not None else {}))
    return rep


def verify_hopf(h: HopfData) -> CheckReport:
    """Nine axiom checks: algebra, coalgebra, bialgebra compatibility, antipode."""
    rep = CheckReport("hopf_axioms")
    verify_algebra(h, rep)
    verify_coalgebra(h, rep)
    D = h.dim
    if not (h.has_algebra and h.has_coalgebra):
        for name in ("comultiplication_multiplicative", "counit_multiplicative",
                     "antipode_axiom", "antipode_antihomomorphism", "antipode_bijective"):
            rep.add(name, False, reason="incomplete structure")
        return rep
    # Delta is an algebra map
    bad = None
    if h.delta(h.unit) != tensor_unit(h, h):
        bad = "unit"
    else:
        for i, j in itertools.product(range(D), repeat=2):
            lhs = h.delta(h.mul_basis(i, j))
            rhs = tensor_mul(h, h, h.comult.get(i, {}), h.comult.get(j, {}))
            if lhs != rhs:
                bad = [i, j]
                break
    rep.add("comultiplication_multiplicative", bad is None,
            **({"witness": bad} if bad is not None else {}))
    bad = None
    if h.eps(h.unit) != 1:
        bad = "unit"
    else:
        for i, j in itertools.product(range(D), repeat=2):
            if h.eps(h.mul_basis(i, j)) != h.eps(h.basis_vector(i)) * h.eps(h.basis_vector(j)):
                bad = [i, j]
                break
    rep.add("counit_multiplicative", bad is None, **({"witness": bad} if bad is not None else {}))
    S = h.antipode
    if S is None:
        rep.add("antipode_axiom", False, reason="no antipode")
        rep.add("antipode_antihomomorphism", False, reason="no antipode")
        rep.add("antipode_bijective", False, reason="no antipode")
        return rep
    if S.shape != (D, D):
        raise ShapeError(f"antipode has shape {S.shape}, expected {(D, D)}")
    bad = None
    for i in range(D):
        left: dict = {}
        right: dict = {}
        for (j, k), c in h.comult.get(i, {}).items():
            vec_iadd(left, h.mul(S.cols[j], h.basis_vector(k)), c)
            vec_iadd(right, h.mul(h.basis_vector(j), S.cols[k]), c)
        target = {k: v * h.counit[i] for k, v in h.unit.items()} if h.counit.get(i) else {}
        if left != target or right != target:
            bad = i
            break
    rep.add("antipode_axiom", bad is None, **({"witness": bad} if bad is not None else {}))
    bad = None
    if S.apply(h.unit) != h.unit:
        bad = "unit"
    else:
        for i, j in itertools.product(range(D), repeat=2):
            if S.apply(h.mul_basis(i, j)) != h.mul(S.cols[j], S.cols[i]):
                bad = [i, j]
                break
    rep.add("antipode_antihomomorphism", bad is None,
            **({"witness": bad} if bad is not None else {}))
    r = S.rank()
    rep.add("antipode_bijective", r == D, rank=r)
    return rep


def tensor_unit(h1: HopfData, h2: HopfData) -> dict:
    out = {}
    for i, a in h1.unit.items():
        for j, b in h2.unit.items():
            out[(i, j)] = a * b
    return out


# -- constructors -----------------------------------------------------------------

def _group_label(exps, names=None):
    parts = []
    for i, e in enumerate(exps):
        if e:
            g = names[i] if names else f"g{i + 1}"
            parts.append(g if e == 1 else f"{g}^{e}")
    return "*".join(parts) or "1"


def group_algebra(orders, conductor: int | None = None) -> HopfData:
    """The group algebra of Z/M_1 x ... x Z/M_n, basis ordered lexicographically."""
    orders = list(orders)
    if not orders:
        raise InvalidDatum("orders must be nonempty")
    if any(int(m) < 1 for m in orders):
        raise InvalidDatum(f"orders must be >= 1, got {orders}")
    N = conductor or 1
    elems = list(itertools.product(*[range(m) for m in orders]))
    index = {e: i for i, e in enumerate(elems)}
    one = CycloScalar.one(N)
    mult, comult, counit = {}, {}, {}
    S_cols = []
    for i, e in enumerate(elems):
        comult[i] = {(i, i): one}
        counit[i] = one
        inv = tuple((-x) % m for x, m in zip(e, orders))
        S_cols.append({index[inv]: one})
        for j, f in enumerate(elems):
            prod = tuple((x + y) % m for x, y, m in zip(e, f, orders))
            mult[(i, j)] = {index[prod]: one}
    D = len(elems)
    return HopfData(D, tuple(_group_label(e) for e in elems), N, mult, {0: one}, comult,
                    counit, ExactMatrix(D, D, S_cols, N))


def dual_hopf(h: HopfData) -> HopfData:
    """Linear dual in the dual basis: products transpose Delta and vice versa."""
    if h.antipode is None and h.has_algebra and h.has_coalgebra:
        raise IncompleteDatum("dual_hopf needs an antipode")
    D = h.dim
    mult = comult = unit = counit = None
    if h.has_coalgebra:
        mult = {}
        for i, terms in h.comult.items():
            for (j, k), c in terms.items():
                vec_iadd(mult.setdefault((j, k), {}), {i: c})
        mult = {key: v for key, v in mult.items() if v}
        unit = dict(h.counit)
    if h.has_algebra:
        comult = {}
        for (i, j), prod in h.mult.items():
            for k, c in prod.items():
                vec_iadd(comult.setdefault(k, {}), {(i, j): c})
        counit = dict(h.unit)
    antipode = h.antipode.transpose() if h.antipode is not None else None
    labels = tuple(f"f[{l}]" for l in h.basis_labels)
    return HopfData(D, labels, h.conductor, mult, unit, comult, counit, antipode)


def algebra_of_dual(c: HopfData) -> HopfData:
    """The dual algebra C* of a coalgebra C."""
    if not c.has_coalgebra:
        raise InvalidDatum("not a coalgebra")
    return dual_hopf(replace(c, mult=None, unit=None, antipode=None))


def trivial_hopf(conductor: int = 1) -> HopfData:
    """The ground field k as a one-dimensional Hopf algebra."""
    return group_algebra([1], conductor)


# -- integrals and semisimplicity ------------------------------------------------

def integral_space(h: HopfData, side: str = "left") -> ExactSubspace:
    """Left integrals {L : x L = eps(x) L} (right: L x = eps(x) L)."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    D = h.dim
    rows = []
    for i in range(D):
        ei = h.counit.get(i, h.zero())
        # block of rows: (L_{b_i} - eps(b_i) I) applied to the unknown
        block = [{} for _ in range(D)]
        for j in range(D):
            prod = h.mul_basis(i, j) if side == "left" else h.mul_basis(j, i)
            for r, c in prod.items():
                block[r][j] = c
            if ei:
                cur = block[j].get(j)
                val = -ei if cur is None else cur - ei
                if val:
                    block[j][j] = val
                else:
                    block[j].pop(j, None)
        rows.extend(block)
    sub = kernel(ExactMatrix.from_rows(rows, D, h.conductor))
    if sub.dim != 1:
        raise TheoremViolation(f"space of {side} integrals has dimension {sub.dim}, expected 1")
    return sub


def semisimplicity_evidence(h: HopfData) -> dict:
    rad = trace_form_radical(h)
    lam = integral_space(h, "left").basis()[0]
    eps_lam = h.eps(lam)
    return {"radical_dim": rad.dim, "integral_counit": str(eps_lam),
            "semisimple_by_radical": rad.dim == 0, "semisimple_by_integral": bool(eps_lam)}


def is_semisimple(h: HopfData) -> bool:
    """Trace-form radical test, cross-checked against Maschke's eps(integral) test."""
    ev = semisimplicity_evidence(h)
    if ev["semisimple_by_radical"] != ev["semisimple_by_integral"]:
        raise InternalInconsistency(f"semisimplicity tests disagree: {ev}")
    return ev["semisimple_by_radical"]


# -- coradical filtration -----------------------------------------------------

def _wedge_step(c: HopfData, ann0: list, ann_prev: list) -> ExactSubspace:
    """Delta^{-1}(C (x) X + Y (x) C) given annihilator bases of Y and X."""
    D = c.dim
    nrow = len(ann0) * len(ann_prev)
    rows = [{} for _ in range(nrow)]
    U: dict = {}
    for a, u in enumerate(ann0):
        for j, x in u.items():
            U.setdefault(j, []).append((a, x))
    W: dict = {}
    for b, w in enumerate(ann_prev):
        for k, x in w.items():
            W.setdefault(k, []).append((b, x))
    nb = len(ann_prev)
    for i in range(D):
        for (j, k), coef in c.comult.get(i, {}).items():
            uj = U.get(j)
            wk = W.get(k)
            if not uj or not wk:
                continue
            for a, x in uj:
                cx = coef * x
                for b, y in wk:
                    vec_iadd(rows[a * nb + b], {i: cx * y})
    return kernel(ExactMatrix.from_rows(rows, D, c.conductor))


def coradical_filtration(c: HopfData) -> list:
    """corad_0 < corad_1 < ... ending at the first term equal to the whole space.

    corad_0 is the annihilator of the Jacobson radical of the dual algebra;
    corad_n = Delta^{-1}(C (x) corad_{n-1} + corad_0 (x) C).
    """
    if not c.has_coalgebra:
        raise InvalidDatum("coradical filtration needs a coalgebra")
    rad = trace_form_radical(algebra_of_dual(c))
    corad0 = rad.annihilator()
    chain = [corad0]
    ann0 = rad.basis()
    while not chain[-1].is_full():
        nxt = _wedge_step(c, ann0, chain[-1].annihilator().basis())
        if not nxt.contains_subspace(chain[-1]) or nxt.dim <= chain[-1].dim:
            raise TheoremViolation("coradical filtration failed to increase")
        chain.append(nxt)
    return chain


def filtration_dims(chain) -> list:
    return [s.dim for s in chain]


# -- cocycles and twists --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CocycleData:
    base: HopfData
    values: dict        # (i, j) -> sigma(b_i, b_j), zeros omitted
    inverse_values: dict

    def sigma(self, u: dict, v: dict, inverse: bool = False):
        table = self.inverse_values if inverse else self.values
        acc = self.base.zero()
        for i, a in u.items():
            for j, b in v.items():
                s = table.get((i, j))
                if s is not None:
                    acc = acc + a * b * s
        return acc

    def to_json(self) -> dict:
        D = self.base.dim
        z = self.base.zero()
        return {"values": [[str(self.values.get((i, j), z)) for j in range(D)] for i in range(D)],
                "inverse_values": [[str(self.inverse_values.get((i, j), z)) for j in range(D)]
                                   for i in range(D)]}


def trivial_cocycle(h: HopfData) -> CocycleData:
    vals = {}
    for i, a in h.counit.items():
        for j, b in h.counit.items():
            vals[(i, j)] = a * b
    return CocycleData(h, vals, dict(vals))


def verify_cocycle(h: HopfData, sigma: CocycleData) -> CheckReport:
    rep = CheckReport("cocycle")
    D = h.dim
    s, si = sigma.values, sigma.inverse_values
    zero = h.zero()
    # normalization
    bad = None
    for i in range(D):
        e = h.counit.get(i, zero)
        v1 = sigma.sigma(h.basis_vector(i), h.unit)
        v2 = sigma.sigma(h.unit, h.basis_vector(i))
        if v1 != e or v2 != e:
            bad = i
            break
    rep.add("normalized", bad is None, **({"witness": bad} if bad is not None else {}))
    # convolution inverse: sigma(x1,y1) sigma^-1(x2,y2) = eps(x) eps(y)
    bad = None
    for i, j in itertools.product(range(D), repeat=2):
        target = h.counit.get(i, zero) * h.counit.get(j, zero)
        acc1 = zero
        acc2 = zero
        for (a, b), c in h.comult.get(i, {}).items():
            for (a2, b2), d in h.comult.get(j, {}).items():
                acc1 = acc1 + c * d * s.get((a, a2), zero) * si.get((b, b2), zero)
                acc2 = acc2 + c * d * si.get((a, a2), zero) * s.get((b, b2), zero)
        if acc1 != target or acc2 != target:
            bad = [i, j]
            break
    rep.add("convolution_invertible", bad is None, **({"witness": bad} if bad is not None else {}))
    # cocycle identity on basis triples
    bad = None
    for x, y, z in itertools.product(range(D), repeat=3):
        lhs = zero
        for (x1, x2), c in h.comult.get(x, {}).items():
            for (y1, y2), d in h.comult.get(y, {}).items():
                a = s.get((x1, y1))
                if a is None:
                    continue
                prod = h.mul_basis(x2, y2)
                for p, e in prod.items():
                    b = s.get((p, z))
                    if b is not None:
                        lhs = lhs + c * d * e * a * b
        rhs = zero
        for (y1, y2), c in h.comult.get(y, {}).items():
            for (z1, z2), d in h.comult.get(z, {}).items():
                a = s.get((y1, z1))
                if a is None:
                    continue
                for p, e in h.mul_basis(y2, z2).items():
                    b = s.get((x, p))
                    if b is not None:
                        rhs = rhs + c * d * e * a * b
        if lhs != rhs:
            bad = [x, y, z]
            break
    rep.add("cocycle_identity", bad is None, **({"witness": bad} if bad is not None else {}))
    return rep


def twisted_multiplication(h: HopfData, sigma: CocycleData) -> dict:
    """Structure constants of x._s y = s(x1,y1) x2 y2 s^-1(x3,y3)."""
    D = h.dim
    d2 = [_delta2(h, i) for i in range(D)]
    s, si = sigma.values, sigma.inverse_values
    mult = {}
    for i in range(D):
        for j in range(D):
            out: dict = {}
            for (a, b, c), x in d2[i].items():
                for (a2, b2, c2), y in d2[j].items():
                    f = s.get((a, a2))
                    if f is None:
                        continue
                    g = si.get((c, c2))
                    if g is None:
                        continue
                    prod = h.mul_basis(b, b2)
                    if prod:
                        vec_iadd(out, prod, x * y * f * g)
            if out:
                mult[(i, j)] = out
    return mult


def convolution(f: ExactMatrix, g: ExactMatrix, coalg: HopfData, alg: HopfData) -> ExactMatrix:
    """(f * g)(c) = f(c1) g(c2) for linear maps coalg -> alg."""
    cols = []
    for i in range(coalg.dim):
        out: dict = {}
        for (j, k), c in coalg.comult.get(i, {}).items():
            vec_iadd(out, alg.mul(f.cols[j], g.cols[k]), c)
        cols.append(out)
    return ExactMatrix(alg.dim, coalg.dim, cols, alg.conductor)


def convolution_inverse(f: ExactMatrix, coalg: HopfData, alg: HopfData):
    """Solve f * g = u eps for g : coalg -> alg; None when no solution exists."""
    Dc, Da = coalg.dim, alg.dim
    # P[j][r] = f(b_j) . a_r
    basis_a = [alg.basis_vector(r) for r in range(Da)]
    P = [[alg.mul(f.cols[j], basis_a[r]) for r in range(Da)] for j in range(Dc)]
    eqs = []
    for i in range(Dc):
        rows = [{} for _ in range(Da)]
        for (j, k), c in coalg.comult.get(i, {}).items():
            for r in range(Da):
                for t, x in P[j][r].items():
                    vec_iadd(rows[t], {r * Dc + k: c * x})
        ei = coalg.counit.get(i)
        for t in range(Da):
            rhs = alg.unit.get(t) * ei if (ei and alg.unit.get(t)) else alg.zero()
            eqs.append((rows[t], rhs))
    sol = solve_sparse_system(eqs, Da * Dc, alg.conductor)
    if sol is None:
        return None
    cols = [{} for _ in range(Dc)]
    for var, x in sol.items():
        r, k = divmod(var, Dc)
        cols[k][r] = x
    return ExactMatrix(Da, Dc, cols, alg.conductor)


def cocycle_twist(h: HopfData, sigma: CocycleData) -> HopfData:
    """H_sigma: same coalgebra, multiplication conjugated by sigma.

    The antipode is recomputed as the convolution inverse of the identity.
    """
    rep = verify_cocycle(h, sigma)
    if not rep.passed:
        raise InvalidCocycle(f"invalid cocycle: {[e.name for e in rep.failures()]}")
    mult = twisted_multiplication(h, sigma)
    hs = replace(h, mult=mult, antipode=None)
    S = convolution_inverse(ExactMatrix.identity(h.dim, h.conductor), hs, hs)
    if S is None:
        raise TheoremViolation("twisted antipode system is unsolvable")
    return replace(hs, antipode=S)


def inverse_cocycle_for_twist(sigma: CocycleData, twisted: HopfData) -> CocycleData:
    """sigma^-1 viewed as a cocycle on H_sigma (undoes the twist)."""
    return CocycleData(twisted, dict(sigma.inverse_values), dict(sigma.values))


# -- sub-objects and morphisms -------------------------------------------------

def is_hopf_subalgebra(h: HopfData, sub: ExactSubspace) -> bool:
    if sub.ambient != h.dim:
        raise ShapeError("subspace ambient dim differs from algebra dim")
    if not sub.contains(h.unit):
        return False
    basis = sub.basis()
    for u in basis:
        for v in basis:
            if not sub.contains(h.mul(u, v)):
                return False
    ann = sub.annihilator().basis()
    for u in basis:
        d = h.delta(u)
        for a in ann:
            left: dict = {}
            right: dict = {}
            for (j, k), c in d.items():
                x = a.get(j)
                if x is not None:
                    vec_iadd(right, {k: c * x})
                y = a.get(k)
                if y is not None:
                    vec_iadd(left, {j: c * y})
            if left or right:
                return False
        if h.antipode is not None and not sub.contains(h.antipode.apply(u)):
            return False
    return True


def adjoint_left(h: HopfData, x: dict, y: dict) -> dict:
    """ad_l(x)(y) = x1 y S(x2)."""
    out: dict = {}
    for (j, k), c in h.delta(x).items():
        vec_iadd(out, h.mul(h.mul(h.basis_vector(j), y), h.antipode.cols[k]), c)
    return out


def is_normal_subalgebra(h: HopfData, sub: ExactSubspace) -> bool:
    if h.antipode is None:
        raise IncompleteDatum("normality needs an antipode")
    if not is_hopf_subalgebra(h, sub):
        raise InvalidSubobject("not a Hopf subalgebra")
    for i in range(h.dim):
        bi = h.basis_vector(i)
        for s in sub.basis():
            if not sub.contains(adjoint_left(h, bi, s)):
                return False
    return True


def verify_hopf_map(q: ExactMatrix, h: HopfData, k: HopfData) -> CheckReport:
    rep = CheckReport("hopf_map")
    if q.shape != (k.dim, h.dim):
        raise ShapeError(f"map has shape {q.shape}, expected {(k.dim, h.dim)}")
    ok = q.apply(h.unit) == k.unit and all(
        q.apply(h.mul_basis(i, j)) == k.mul(q.cols[i], q.cols[j])
        for i in range(h.dim) for j in range(h.dim))
    rep.add("multiplicative", ok)
    ok = True
    for i in range(h.dim):
        lhs = k.delta(q.cols[i])
        rhs: dict = {}
        for (a, b), c in h.comult.get(i, {}).items():
            for r, x in q.cols[a].items():
                for s, y in q.cols[b].items():
                    vec_iadd(rhs, {(r, s): c * x * y})
        if lhs != rhs or k.eps(q.cols[i]) != h.counit.get(i, h.zero()):
            ok = False
            break
    rep.add("comultiplicative", ok)
    return rep


def is_cocentral_map(q: ExactMatrix, h: HopfData, k: HopfData) -> bool:
    """(q (x) id) Delta = (q (x) id) Delta^op on every basis element."""
    if not verify_hopf_map(q, h, k).passed:
        raise InvalidMorphism("map is not a Hopf algebra map")
    for i in range(h.dim):
        left: dict = {}
        right: dict = {}
        for (a, b), c in h.comult.get(i, {}).items():
            for r, x in q.cols[a].items():
                vec_iadd(left, {(r, b): c * x})
            for r, x in q.cols[b].items():
                vec_iadd(right, {(r, a): c * x})
        if left != right:
            return False
    return True


def verify_cleaving_pair(xi: ExactMatrix, chi: ExactMatrix, A: HopfData, C: HopfData,
                         B: HopfData, iota: ExactMatrix | None = None,
                         rho=None) -> CheckReport:
    """Cleaving data for a B-comodule algebra C with coinvariants A.

    ``rho`` is the coaction C -> C (x) B as an ExactMatrix with rows flattened
    ``i * B.dim + j``; when omitted and B is one-dimensional the trivial
    coaction is used.  ``iota`` embeds A in C (defaults to the identity when
    A is C).
    """
    rep = CheckReport("cleaving_pair")
    if xi.shape != (A.dim, C.dim) or chi.shape != (C.dim, B.dim):
        raise ShapeError(f"xi {xi.shape} / chi {chi.shape} incompatible with dims "
                         f"A={A.dim}, C={C.dim}, B={B.dim}")
    N = C.conductor
    if iota is None:
        if A is not C and A.dim != C.dim:
            raise ShapeError("iota required when A is not C")
        iota = ExactMatrix.identity(C.dim, N)
    if rho is None:
        if B.dim != 1:
            raise ShapeError("coaction required for nontrivial B")
        rho = ExactMatrix.identity(C.dim, N)
    Db = B.dim
    # chi is a comodule map: rho chi = (chi (x) id) Delta_B
    ok = True
    for j in range(Db):
        lhs = rho.apply(chi.cols[j])
        rhs: dict = {}
        for (a, b), c in B.comult.get(j, {}).items():
            for r, x in chi.cols[a].items():
                vec_iadd(rhs, {r * Db + b: c * x})
        if lhs != rhs:
            ok = False
            break
    rep.add("chi_comodule_map", ok)
    # xi is A-linear: xi(iota(a) c) = a xi(c)
    ok = True
    for a in range(A.dim):
        ia = iota.cols[a]
        for c in range(C.dim):
            if xi.apply(C.mul(ia, C.basis_vector(c))) != A.mul(A.basis_vector(a), xi.cols[c]):
                ok = False
                break
        if not ok:
            break
    rep.add("xi_module_map", ok)
    # xi chi = eps_B 1_A
    ok = all(xi.apply(chi.cols[j]) == {k: v * B.counit[j] for k, v in A.unit.items()}
             if B.counit.get(j) else not xi.apply(chi.cols[j]) for j in range(Db))
    rep.add("xi_chi_is_counit", ok)
    # (iota xi) * (chi pi) = id, with the coaction standing in for (id (x) pi) Delta
    ok = True
    for c in range(C.dim):
        out: dict = {}
        for key, x in rho.cols[c].items():
            r, b = divmod(key, Db)
            vec_iadd(out, C.mul(iota.apply(xi.cols[r]), chi.cols[b]), x)
        if out != C.basis_vector(c):
            ok = False
            break
    rep.add("normal_basis_identity", ok)
    return rep
