"""Growth of finitely generated subgroups of B^n, B = {(t, s) : t != 0}.

Cayley balls are enumerated exactly by BFS; the growth type and the derived
GK / Noetherian / regularity verdicts are reported with their evidence.
"""

from __future__ import annotations

import itertools
import logging
import math
import os
from dataclasses import dataclass, field

import numpy as np
import sympy
from sympy.matrices.normalforms import smith_normal_form

from .errors import BudgetExceeded, InsufficientData, InvalidDatum
from .scalars import CycloScalar, parse_scalar

logger = logging.getLogger(__name__)

STABLE_WINDOW = 4
INTEGER_TOL = 0.25
RATIO_BOUND = 1 + 1 / 16
DEFAULT_N_MAX = 12
DEFAULT_BUDGET_MB = 512
# rough resident cost of one stored group element, per factor, in bytes
_BYTES_PER_FACTOR = 420


class BorelElement:
    """Element of B^n as a tuple of (t_i, s_i) pairs; hashable by canonical form."""

    __slots__ = ("pairs", "_h")

    def __init__(self, pairs):
        pairs = tuple((t, s) for t, s in pairs)
        if any(not t for t, _ in pairs):
            raise InvalidDatum("Borel elements need nonzero t")
        self.pairs = pairs
        self._h = None

    @classmethod
    def from_json(cls, obj, conductor: int = 1) -> "BorelElement":
        t = [parse_scalar(x if isinstance(x, str) else str(x), conductor) for x in obj["t"]]
        s = obj.get("s") or ["0"] * len(t)
        s = [parse_scalar(x if isinstance(x, str) else str(x), conductor) for x in s]
        if len(t) != len(s):
            raise InvalidDatum("t and s must have equal length")
        return cls(zip(t, s))

    @classmethod
    def from_character(cls, kappa) -> "BorelElement":
        return cls(zip(kappa.t, kappa.s))

    @classmethod
    def identity(cls, n: int, conductor: int = 1) -> "BorelElement":
        return cls([(CycloScalar.one(conductor), CycloScalar.zero(conductor))] * n)

    def __mul__(self, other: "BorelElement") -> "BorelElement":
        out = object.__new__(BorelElement)
        out.pairs = tuple((t1 * t2, s1 + t1 * s2)
                          for (t1, s1), (t2, s2) in zip(self.pairs, other.pairs))
        out._h = None
        return out

    def inverse(self) -> "BorelElement":
        out = []
        for t, s in self.pairs:
            ti = t.inverse()
            out.append((ti, -ti * s))
        return BorelElement(out)

    def __eq__(self, other):
        return isinstance(other, BorelElement) and self.pairs == other.pairs

    def __hash__(self):
        if self._h is None:
            self._h = hash(self.pairs)
        return self._h

    @property
    def is_identity(self) -> bool:
        return all(t == 1 and not s for t, s in self.pairs)

    def to_json(self) -> dict:
        return {"t": [t.to_string() for t, _ in self.pairs],
                "s": [s.to_string() for _, s in self.pairs]}

    def __repr__(self):
        return "B" + repr([(t.to_string(), s.to_string()) for t, s in self.pairs])


def budget_from_env(default: int = DEFAULT_BUDGET_MB) -> int:
    try:
        return int(os.environ.get("HFLAB_BUDGET_MB", default))
    except ValueError:
        return default


def ball_growth(gens, n_max: int, budget_mb: int | None = None) -> list:
    """|B_0|, ..., |B_{n_max}| for the word metric on gens and their inverses."""
    gens = list(gens)
    if not gens:
        raise InvalidDatum("need at least one generator")
    if n_max < 1:
        raise InvalidDatum("n_max must be >= 1")
    budget_mb = budget_from_env() if budget_mb is None else budget_mb
    per = _BYTES_PER_FACTOR * len(gens[0].pairs) + 200
    cap = max(1, int(budget_mb * 1024 * 1024 / per))
    moves = list(dict.fromkeys(gens + [g.inverse() for g in gens]))
    ident = BorelElement.identity(len(gens[0].pairs), gens[0].pairs[0][0].conductor)
    seen = {ident}
    frontier = [ident]
    sizes = [1]
    for n in range(1, n_max + 1):
        nxt = []
        for x in frontier:
            for g in moves:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
            if len(seen) > cap:
                raise BudgetExceeded(
                    f"ball of radius {n} exceeds the {budget_mb} MB budget "
                    f"(~{cap} elements)", partial=sizes)
        frontier = nxt
        sizes.append(len(seen))
        logger.debug("radius %d: %d elements", n, len(seen))
    return sizes


def naive_ball(gens, n: int) -> set:
    """Ball of radius n by enumerating every word; exponential, for cross-checks."""
    moves = list(gens) + [g.inverse() for g in gens]
    ident = BorelElement.identity(len(gens[0].pairs), gens[0].pairs[0][0].conductor)
    out = {ident}
    for length in range(1, n + 1):
        for word in itertools.product(moves, repeat=length):
            x = ident
            for g in word:
                x = x * g
            out.add(x)
    return out


# -- classification --------------------------------------------------------------

@dataclass
class Classification:
    kind: str                  # polynomial | exponential | inconclusive
    degree: int | None = None
    diagnostics: dict = field(default_factory=dict)

    def label(self) -> str:
        return f"polynomial({self.degree})" if self.kind == "polynomial" else self.kind

    def to_json(self) -> dict:
        out = {"kind": self.kind, "label": self.label(), "diagnostics": self.diagnostics}
        if self.degree is not None:
            out["degree"] = self.degree
        return out


def _round(x: float) -> float:
    return float(f"{x:.6g}")


def classify_growth(sizes) -> Classification:
    sizes = [int(x) for x in sizes]
    if len(sizes) < 6:
        raise InsufficientData(f"need at least 6 ball sizes, got {len(sizes)}")
    n_max = len(sizes) - 1
    degs = []
    for n in range(2, n_max + 1):
        degs.append(math.log(sizes[n] / sizes[n - 1]) / math.log(n / (n - 1)))
    ratios = [sizes[n] / sizes[n - 1] for n in range(1, n_max + 1)]
    tail = degs[-STABLE_WINDOW:]
    target = round(sum(tail) / len(tail))
    ns = np.arange(max(1, n_max // 2), n_max + 1)
    logs = np.log(np.array([sizes[n] for n in ns], dtype=float))
    poly_slope = float(np.polyfit(np.log(ns), logs, 1)[0])
    exp_slope = float(np.polyfit(ns.astype(float), logs, 1)[0])
    diag = {"degree_estimates": [_round(x) for x in tail],
            "ratios": [_round(x) for x in ratios[-STABLE_WINDOW:]],
            "loglog_slope": _round(poly_slope), "semilog_slope": _round(exp_slope)}
    if all(abs(x - target) <= INTEGER_TOL for x in tail) and target >= 0:
        return Classification("polynomial", int(target), diag)
    rtail = ratios[-STABLE_WINDOW:]
    if all(r >= RATIO_BOUND for r in rtail) and all(b >= a for a, b in zip(tail, tail[1:])):
        return Classification("exponential", None, diag)
    return Classification("inconclusive", None, diag)


# -- commutation certificate ---------------------------------------------------------

def _power(g: BorelElement, e: int) -> BorelElement:
    base = g if e >= 0 else g.inverse()
    out = BorelElement.identity(len(g.pairs), g.pairs[0][0].conductor)
    for _ in range(abs(e)):
        out = out * base
    return out


def _valuation_rows(gens) -> list:
    """Homomorphisms to Z / Q: prime valuations of rational t_i, and the s_i
    coordinate wherever every generator has t_i = 1."""
    n = len(gens[0].pairs)
    cols = []
    primes = set()
    for g in gens:
        for t, _ in g.pairs:
            if t.is_rational():
                q = t.as_rational()
                primes.update(sympy.factorint(abs(int(q.numerator))))
                primes.update(sympy.factorint(int(q.denominator)))
    primes.discard(1)
    for g in gens:
        row = []
        for i in range(n):
            t = g.pairs[i][0]
            if t.is_rational():
                q = t.as_rational()
                fn = sympy.factorint(abs(int(q.numerator)))
                fd = sympy.factorint(int(q.denominator))
                row.extend(fn.get(p, 0) - fd.get(p, 0) for p in sorted(primes))
            else:
                row.extend(0 for _ in primes)
        for i in range(n):
            if all(h.pairs[i][0] == 1 for h in gens):
                row.extend(sympy.Rational(int(c.numerator), int(c.denominator))
                           for c in g.pairs[i][1].coeffs)
        cols.append(row)
    return cols


def commutation_certificate(gens, L: int = 10) -> dict:
    gens = list(gens)
    for i, j in itertools.combinations(range(len(gens)), 2):
        a, b = gens[i] * gens[j], gens[j] * gens[i]
        if a != b:
            return {"type": "nonabelian", "witness": {"pair": [i, j], "gh": a.to_json(),
                                                      "hg": b.to_json()}}
    m = len(gens)
    # relation lattice from collisions among exponent vectors of l1-norm <= L
    while L > 1 and math.comb(L + m, m) * 2 ** min(m, L) > 200000:
        L -= 1
    first: dict = {}
    rels = []
    for vec in itertools.product(range(-L, L + 1), repeat=m):
        if sum(abs(v) for v in vec) > L:
            continue
        x = BorelElement.identity(len(gens[0].pairs), gens[0].pairs[0][0].conductor)
        for g, e in zip(gens, vec):
            if e:
                x = x * _power(g, e)
        prev = first.get(x)
        if prev is None:
            first[x] = vec
        else:
            rels.append([a - b for a, b in zip(vec, prev)])
    if rels:
        snf = smith_normal_form(sympy.Matrix(rels), domain=sympy.ZZ)
        diag = [abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0]
    else:
        diag = []
    upper = m - len(diag)
    torsion = sorted(d for d in diag if d > 1)
    rows = _valuation_rows(gens)
    lower = sympy.Matrix(rows).rank() if rows and rows[0] else 0
    finite = upper == 0
    return {"type": "abelian", "rank_upper": upper, "rank_lower": int(lower),
            "rank_certified": upper == lower, "torsion": torsion, "word_bound": L,
            "relations_found": len(rels),
            **({"order": math.prod(torsion) if torsion else 1} if finite else {})}


# -- verdicts -----------------------------------------------------------------------

@dataclass
class GrowthReport:
    gens: list
    ball_sizes: list
    classification: Classification
    verdicts: dict
    certificate: dict

    def to_json(self) -> dict:
        return {"generators": [g.to_json() for g in self.gens], "ball_sizes": self.ball_sizes,
                "classification": self.classification.to_json(), "verdicts": self.verdicts,
                "certificate": self.certificate}


def verdicts(gens, classification: Classification, h_epsilon_semisimple: bool,
             sizes=None, certificate: dict | None = None) -> dict:
    cert = certificate if certificate is not None else commutation_certificate(gens)
    if classification.kind == "polynomial":
        gk = classification.degree
    elif classification.kind == "exponential":
        gk = "infinite"
    else:
        gk = "inconclusive"
    stabilized = bool(sizes) and len(sizes) > 1 and sizes[-1] == sizes[-2]
    noeth, reason = "undetermined", "no polycyclic certificate"
    h = None
    if cert["type"] == "abelian":
        noeth = "yes"
        h = cert["rank_upper"]
        reason = (f"finitely generated abelian, rank {cert['rank_lower']}"
                  + ("" if cert["rank_certified"] else f"..{cert['rank_upper']}"))
    elif stabilized:
        noeth, reason, h = "yes", f"finite group of order {sizes[-1]}", 0
    out = {"gk": gk, "noetherian": noeth, "noetherian_reason": reason}
    if noeth == "yes":
        out["regular"] = "yes" if h_epsilon_semisimple else "no"
        out["regular_reason"] = ("identity fiber semisimple" if h_epsilon_semisimple
                                 else "identity fiber not semisimple")
        if h_epsilon_semisimple:
            out["gldim_bound"] = h
    else:
        out["regular"] = "n/a"
        out["regular_reason"] = "Noetherianity undetermined"
    return out


def growth_report(gens, n_max: int = DEFAULT_N_MAX, h_epsilon_semisimple: bool = False,
                  budget_mb: int | None = None) -> GrowthReport:
    gens = list(gens)
    sizes = ball_growth(gens, n_max, budget_mb)
    cls = classify_growth(sizes)
    cert = commutation_certificate(gens)
    return GrowthReport(gens, sizes, cls, verdicts(gens, cls, h_epsilon_semisimple, sizes, cert), cert)
