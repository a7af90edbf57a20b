"""The Gamma-graded Hopf algebra H(Gamma) = (+)_kappa C(kappa), built lazily.

C(kappa) is the dual coalgebra of the fiber H_kappa, in the basis dual to the
PBW monomials.  Products C(kappa) (x) C(gamma) -> C(kappa gamma) are transposes
of Delta_{kappa,gamma}; the antipode C(kappa) -> C(kappa^-1) is the transpose
of S_{kappa^-1}.  Only finite supports are ever touched.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from functools import cached_property

from .errors import InternalInconsistency, SupportError, TheoremViolation
from .hopf import (CocycleData, HopfData, coradical_filtration, is_hopf_subalgebra,
                   is_normal_subalgebra, semisimplicity_evidence, verify_hopf)
from .linalg import ExactMatrix, ExactSubspace, kernel, vec_iadd
from .modular import certified_rank
from .qls import (Character, HopfSystem, QLSDatum, char_identity, char_inv, char_mul,
                  monomials, pbw_normalize, build_fiber_algebra)
from .report import CheckReport
from .scalars import CycloScalar

MUTATIONS = ("wrong_antipode", "zeroed_block", "broken_cocycle")


@dataclass(frozen=True, eq=False)
class Component:
    kappa: Character
    coalgebra: HopfData

    @property
    def dim(self) -> int:
        return self.coalgebra.dim


def _dual_coalgebra(alg: HopfData, labels) -> HopfData:
    comult: dict = {}
    for (i, j), prod in alg.mult.items():
        for k, c in prod.items():
            vec_iadd(comult.setdefault(k, {}), {(i, j): c})
    counit = dict(alg.unit)
    return HopfData(alg.dim, labels, alg.conductor, None, None,
                    {k: v for k, v in comult.items() if v}, counit)


class GradedSystem:
    """H(Gamma) for Gamma generated by ``gamma_gens``.

    ``sigma`` (a cocycle on H_eps) twists every fiber; ``mutation`` corrupts a
    structure map on purpose so verifiers can be shown to notice.
    """

    def __init__(self, datum: QLSDatum, gamma_gens=(), sigma: CocycleData | None = None,
                 mutation: dict | None = None):
        self.datum = datum
        self.gamma_gens = list(gamma_gens)
        self.sigma = sigma
        self.mutation = dict(mutation or {})
        if self.mutation and self.mutation.get("kind") not in MUTATIONS:
            raise ValueError(f"unknown mutation {self.mutation.get('kind')!r}")
        self.fibers = HopfSystem(datum, sigma)
        self._lock = threading.Lock()
        self._components: dict = {}
        self._maps: dict = {}
        self._labels = tuple(f"f[{m}]" for m in self._mono_labels())

    def _mono_labels(self):
        from .qls import monomial_label
        return [monomial_label(a, b) for a, b in monomials(self.datum)]

    @cached_property
    def eps(self) -> Character:
        return char_identity(self.datum)

    @property
    def dim(self) -> int:
        return self.datum.fiber_dim

    @property
    def conductor(self) -> int:
        return self.datum.conductor

    def component(self, kappa: Character) -> Component:
        hit = self._components.get(kappa.key)
        if hit is None:
            hit = Component(kappa, _dual_coalgebra(self.fibers.fiber(kappa), self._labels))
            with self._lock:
                self._components[kappa.key] = hit
        return hit

    def graded_mul(self, kappa: Character, gamma: Character) -> ExactMatrix:
        """C(kappa) (x) C(gamma) -> C(kappa gamma); column index i*D + j."""
        if self.mutation.get("kind") == "zeroed_block" and self._mutated_pair(kappa, gamma):
            return ExactMatrix.zeros(self.dim, self.dim * self.dim, self.conductor)
        return self._cached(("mul", kappa.key, gamma.key),
                            lambda: self.fibers.delta(kappa, gamma).transpose())

    def _cached(self, key, build):
        hit = self._maps.get(key)
        if hit is None:
            hit = build()
            with self._lock:
                self._maps[key] = hit
        return hit

    def _mutated_pair(self, kappa, gamma) -> bool:
        pair = self.mutation.get("pair")
        if pair is None:
            g = self.gamma_gens[0] if self.gamma_gens else self.eps
            pair = (g, g)
        return (kappa, gamma) == tuple(pair)

    def graded_antipode(self, kappa: Character) -> ExactMatrix:
        """C(kappa) -> C(kappa^-1)."""
        if self.mutation.get("kind") == "wrong_antipode":
            return ExactMatrix.identity(self.dim, self.conductor)
        return self._cached(("S", kappa.key),
                            lambda: self.fibers.antipode(char_inv(kappa)).transpose())

    def mul(self, kappa, gamma, f: dict, g: dict) -> dict:
        """Product of f in C(kappa) and g in C(gamma)."""
        D = self.dim
        m = self.graded_mul(kappa, gamma)
        out: dict = {}
        for i, x in f.items():
            for j, y in g.items():
                vec_iadd(out, m.cols[i * D + j], x * y)
        return out

    def counit(self, f: dict) -> CycloScalar:
        """eps(f) = f(1)."""
        return f.get(0, CycloScalar.zero(self.conductor))

    def unit(self) -> dict:
        """The unit of H(Gamma): eps of H_eps as a vector in C(eps)."""
        return dict(self.fibers.counit())

    def varpi(self, kappa: Character, f: dict) -> dict:
        """Projection to k Gamma: f in C(kappa) -> eps(f) kappa."""
        c = self.counit(f)
        return {kappa: c} if c else {}

    def identity_component_hopf(self) -> HopfData:
        """C(eps) with all of its Hopf structure, read off the graded maps."""
        e = self.eps
        D = self.dim
        m = self.graded_mul(e, e)
        mult = {}
        for i in range(D):
            for j in range(D):
                col = m.cols[i * D + j]
                if col:
                    mult[(i, j)] = dict(col)
        coal = self.component(e).coalgebra
        return HopfData(D, self._labels, self.conductor, mult, self.unit(), coal.comult,
                        coal.counit, self.graded_antipode(e))


# -- verifiers ---------------------------------------------------------------------

def _j(k: Character):
    return k.to_json()


def verify_strong_grading(sys: GradedSystem, pairs) -> CheckReport:
    """rank of C(kappa) (x) C(gamma) -> C(kappa gamma) equals dim C(kappa gamma)."""
    rep = CheckReport("strong_grading")
    D = sys.dim
    for k, g in pairs:
        rank, method = certified_rank(sys.graded_mul(k, g), target=D)
        rep.add(f"pair[{k.key}|{g.key}]", rank == D, kappa=_j(k), gamma=_j(g), rank=rank,
                dim=D, method=method, tensor_dim=D * D, dim_product=D * D)
    return rep


def _require_eps(sys: GradedSystem, support) -> list:
    support = list(dict.fromkeys(support))
    if sys.eps not in support:
        raise SupportError("the support must contain the identity character")
    return support


def verify_exact_sequence(sys: GradedSystem, support) -> CheckReport:
    """Coinvariants of varpi, the counit formula for varpi, and ker varpi per component."""
    rep = CheckReport("exact_sequence")
    support = _require_eps(sys, support)
    D = sys.dim
    N = sys.conductor
    one = CycloScalar.one(N)
    pos = {k: n for n, k in enumerate(support)}
    S = len(support)
    total = D * S
    # (a) kernel of f -> (id (x) varpi) Delta(f) - f (x) eps on the truncation
    cols = []
    for k in support:
        coal = sys.component(k).coalgebra
        for i in range(D):
            out: dict = {}
            for (a, b), c in coal.comult.get(i, {}).items():
                e = coal.counit.get(b)
                if e:
                    vec_iadd(out, {(pos[k] * D + a) * S + pos[k]: c * e})
            vec_iadd(out, {(pos[k] * D + i) * S + pos[sys.eps]: -one})
            cols.append(out)
    coinv = kernel(ExactMatrix(total * S, total, cols, N))
    ceps = ExactSubspace.full(D, N).embed(pos[sys.eps] * D, total)
    rep.add("coinvariants_equal_identity_component", coinv == ceps, dim=coinv.dim,
            expected_dim=D, truncation_dim=total)
    # (b) f(p_kappa(a)) = eps(f) kappa(a) on monomials of A, through PBW normal forms
    bad = None
    checked = 0
    n = sys.datum.theta
    a_range = [0] if sys.datum.group_only else [0, 1]
    for k in support:
        fib = build_fiber_algebra(sys.datum, k)
        for ai in itertools.product(a_range, repeat=n):
            for bi in itertools.product([-1, 0, 1, 2], repeat=n):
                word = [(f"x{i + 1}", sys.datum.N[i]) for i in range(n) if ai[i]]
                word += [(f"g{i + 1}", bi[i] * sys.datum.N[i]) for i in range(n) if bi[i]]
                img = fib.from_pbw(pbw_normalize(word, sys.datum, k))
                expect = k.value(ai, bi)
                for f in range(D):
                    lhs = img.get(f, CycloScalar.zero(N))
                    checked += 1
                    if lhs != sys.counit({f: one}) * expect and bad is None:
                        bad = {"kappa": _j(k), "basis": f, "a": list(ai), "b": list(bi)}
    rep.add("varpi_is_counit_times_kappa", bad is None, basis_vectors=D * S, evaluations=checked,
            **({"witness": bad} if bad else {}))
    # (c) C(kappa) C(eps)^+ has codimension one and equals ker eps on C(kappa)
    eps_plus = [{i: one} for i in range(1, D)]
    ker_eps = ExactSubspace.span([{i: one} for i in range(1, D)], D, N)
    bad = []
    codims = {}
    for k in support:
        m = sys.graded_mul(k, sys.eps)
        vecs = []
        for i in range(D):
            for e in eps_plus:
                out: dict = {}
                for j, c in e.items():
                    vec_iadd(out, m.cols[i * D + j], c)
                vecs.append(out)
        span = ExactSubspace.span(vecs, D, N)
        codims[str(k.key)] = D - span.dim
        if span.dim != D - 1 or span != ker_eps:
            bad.append(_j(k))
    rep.add("ker_varpi_codimension_one", not bad, codimensions=sorted(codims.values()),
            **({"witness": bad[0]} if bad else {}))
    return rep


def direct_sum_coalgebra(sys: GradedSystem, support) -> HopfData:
    D = sys.dim
    comult, counit = {}, {}
    for n, k in enumerate(support):
        coal = sys.component(k).coalgebra
        off = n * D
        for i, terms in coal.comult.items():
            comult[off + i] = {(off + a, off + b): c for (a, b), c in terms.items()}
        for i, c in coal.counit.items():
            counit[off + i] = c
    total = D * len(support)
    return HopfData(total, tuple(f"{n}:{i}" for n in range(len(support)) for i in range(D)),
                    sys.conductor, None, None, comult, counit)


def verify_coradical_theorem(sys: GradedSystem, support) -> CheckReport:
    rep = CheckReport("coradical")
    support = list(dict.fromkeys(support))
    D = sys.dim
    total = D * len(support)
    chains = {k: coradical_filtration(sys.component(k).coalgebra) for k in support}
    dims = {str(k.key): [s.dim for s in ch] for k, ch in chains.items()}
    glob = coradical_filtration(direct_sum_coalgebra(sys, support))
    length = max(len(ch) for ch in chains.values())
    ok = len(glob) == length
    for n in range(max(length, len(glob))):
        expected = ExactSubspace.zero(total, sys.conductor)
        for m, k in enumerate(support):
            ch = chains[k]
            term = ch[min(n, len(ch) - 1)]
            expected = expected + term.embed(m * D, total)
        got = glob[min(n, len(glob) - 1)]
        if got != expected:
            ok = False
    rep.add("global_equals_componentwise", ok, global_dims=[s.dim for s in glob])
    rep.add("stabilizes_within_dim", all(len(ch) - 1 <= D for ch in chains.values()),
            lengths=sorted(len(ch) - 1 for ch in chains.values()), bound=D)
    rep.evidence["component_dims"] = [dims[str(k.key)] for k in support]
    rep.evidence["support"] = [_j(k) for k in support]
    return rep


def cosemisimplicity_verdict(sys: GradedSystem, support=None) -> tuple:
    """(verdict, evidence): H(Gamma) is cosemisimple iff H_eps is semisimple.

    The cross-check requires every component in ``support`` (which must contain
    eps) to be cosemisimple exactly when the verdict is true.
    """
    ev = semisimplicity_evidence(sys.fibers.hopf_eps())
    if ev["semisimple_by_radical"] != ev["semisimple_by_integral"]:
        raise InternalInconsistency(f"radical and integral tests disagree: {ev}")
    verdict = ev["semisimple_by_radical"]
    support = _require_eps(sys, support or [sys.eps])
    per = {}
    for k in support:
        corad0 = coradical_filtration(sys.component(k).coalgebra)[0]
        per[k] = corad0.is_full()
    if verdict != all(per.values()):
        raise TheoremViolation(f"cosemisimplicity verdict {verdict} contradicts components {per}")
    ev = dict(ev)
    ev["components_cosemisimple"] = [[_j(k), v] for k, v in per.items()]
    return verdict, ev


def cocentral_on_component(sys: GradedSystem, kappa: Character) -> bool:
    """(varpi (x) id) Delta = (varpi (x) id) Delta^op on C(kappa)."""
    coal = sys.component(kappa).coalgebra
    for i in range(sys.dim):
        left: dict = {}
        right: dict = {}
        for (a, b), c in coal.comult.get(i, {}).items():
            ea = coal.counit.get(a)
            if ea:
                vec_iadd(left, {b: c * ea})
            eb = coal.counit.get(b)
            if eb:
                vec_iadd(right, {a: c * eb})
        if left != right:
            return False
    return True


def _ad(sys: GradedSystem, kappa: Character, f: int, e: dict) -> dict:
    """ad_l(f)(e) = f_1 e S(f_2), landing in C(kappa kappa^-1) = C(eps)."""
    D = sys.dim
    ki = char_inv(kappa)
    coal = sys.component(kappa).coalgebra
    S = sys.graded_antipode(kappa)
    m1 = sys.graded_mul(kappa, sys.eps)
    m2 = sys.graded_mul(kappa, ki)
    out: dict = {}
    for (a, b), c in coal.comult.get(f, {}).items():
        fe: dict = {}
        for j, x in e.items():
            vec_iadd(fe, m1.cols[a * D + j], x)
        sf = S.cols[b]
        for i, x in fe.items():
            for j, y in sf.items():
                vec_iadd(out, m2.cols[i * D + j], c * x * y)
    return out


def _ad_table(sys: GradedSystem, kappa: Character) -> list:
    """table[f][j] = ad_l(f_f)(f_j) for basis vectors of C(kappa) and C(eps)."""
    one = CycloScalar.one(sys.conductor)
    return [[_ad(sys, kappa, f, {j: one}) for j in range(sys.dim)] for f in range(sys.dim)]


def _ad_apply(table, f: int, v: dict) -> dict:
    out: dict = {}
    for j, c in v.items():
        vec_iadd(out, table[f][j], c)
    return out


def normality_check(sys: GradedSystem, support, module_algebra: bool = True) -> CheckReport:
    """ad_l(C(kappa)) preserves C(eps) = H_eps^* inside H(Gamma).

    Containment holds by the grading once the structure maps are right, so the
    report also checks ad_l(f)(1) = eps(f) 1 and, optionally, that C(eps) is a
    module algebra under ad_l; both break when the antipode is corrupted.
    """
    rep = CheckReport("normality")
    D = sys.dim
    N = sys.conductor
    one = CycloScalar.one(N)
    unit = sys.unit()
    lands, unit_bad, alg_bad = [], [], []
    ee = sys.graded_mul(sys.eps, sys.eps)
    for k in dict.fromkeys(support):
        if char_mul(k, char_inv(k)) != sys.eps:
            lands.append(_j(k))
        table = _ad_table(sys, k)
        for f in range(D):
            ef = sys.counit({f: one})
            want = {i: ef * c for i, c in unit.items()} if ef else {}
            if _ad_apply(table, f, unit) != want:
                unit_bad.append({"kappa": _j(k), "basis": f})
                break
        if not module_algebra or unit_bad:
            continue
        coal = sys.component(k).coalgebra
        for f, e1, e2 in itertools.product(range(D), repeat=3):
            lhs = _ad_apply(table, f, ee.cols[e1 * D + e2])
            rhs: dict = {}
            for (a, b), c in coal.comult.get(f, {}).items():
                for i, x in table[a][e1].items():
                    for j, y in table[b][e2].items():
                        vec_iadd(rhs, ee.cols[i * D + j], c * x * y)
            if lhs != rhs:
                alg_bad.append({"kappa": _j(k), "basis": [f, e1, e2]})
                break
    rep.add("adjoint_lands_in_identity_component", not lands, **({"witness": lands[0]} if lands else {}))
    rep.add("adjoint_fixes_unit", not unit_bad, **({"witness": unit_bad[0]} if unit_bad else {}))
    if module_algebra:
        rep.add("adjoint_module_algebra", not alg_bad and not unit_bad,
                **({"witness": alg_bad[0]} if alg_bad else {}))
    return rep


def verify_graded_antipode(sys: GradedSystem, kappa: Character) -> bool:
    """S(f_1) f_2 = eps(f) 1 = f_1 S(f_2) for f in C(kappa)."""
    D = sys.dim
    ki = char_inv(kappa)
    coal = sys.component(kappa).coalgebra
    S = sys.graded_antipode(kappa)
    ml = sys.graded_mul(ki, kappa)
    mr = sys.graded_mul(kappa, ki)
    unit = sys.unit()
    one = CycloScalar.one(sys.conductor)
    for f in range(D):
        left: dict = {}
        right: dict = {}
        for (a, b), c in coal.comult.get(f, {}).items():
            for j, x in S.cols[a].items():
                vec_iadd(left, ml.cols[j * D + b], c * x)
            for j, x in S.cols[b].items():
                vec_iadd(right, mr.cols[a * D + j], c * x)
        ef = sys.counit({f: one})
        want = {i: ef * c for i, c in unit.items()} if ef else {}
        if left != want or right != want:
            return False
    return True


# -- twisting ------------------------------------------------------------------------

def _twist_component_comult(base: GradedSystem, kappa: Character, sigma: CocycleData) -> dict:
    """F Delta(f) F^-1 on C(kappa), with F = sigma read as an element of C(eps) (x) C(eps)."""
    D = base.dim
    e = base.eps
    ml = base.graded_mul(e, kappa)
    mr = base.graded_mul(kappa, e)
    lefts = sorted({u for u, _ in sigma.values} | {u for u, _ in sigma.inverse_values})
    # T[(u, i, w)] = f_u f_i f_w in C(kappa)
    T = {}
    for u in lefts:
        for i in range(D):
            fu_fi = ml.cols[u * D + i]
            for w in lefts:
                out: dict = {}
                for j, x in fu_fi.items():
                    vec_iadd(out, mr.cols[j * D + w], x)
                T[(u, i, w)] = out
    coal = base.component(kappa).coalgebra
    comult = {}
    for f in range(D):
        acc: dict = {}
        for (i, j), c in coal.comult.get(f, {}).items():
            for (u, v), s in sigma.values.items():
                for (w, z), si in sigma.inverse_values.items():
                    left = T[(u, i, w)]
                    if not left:
                        continue
                    right = T[(v, j, z)]
                    coef = c * s * si
                    for p, x in left.items():
                        for q, y in right.items():
                            vec_iadd(acc, {(p, q): coef * x * y})
        if acc:
            comult[f] = acc
    return comult


def _twist_component_antipode(base: GradedSystem, kappa: Character, sigma: CocycleData) -> ExactMatrix:
    """U S(f) U^-1 with U = F^1 S(F^2) and U^-1 = S(F^-1,1) F^-1,2."""
    D = base.dim
    e = base.eps
    N = base.conductor
    one = CycloScalar.one(N)
    S_e = base.graded_antipode(e)
    U: dict = {}
    for (u, v), s in sigma.values.items():
        vec_iadd(U, base.mul(e, e, {u: one}, S_e.cols[v]), s)
    Ui: dict = {}
    for (u, v), s in sigma.inverse_values.items():
        vec_iadd(Ui, base.mul(e, e, S_e.cols[u], {v: one}), s)
    ki = char_inv(kappa)
    S = base.graded_antipode(kappa)
    cols = []
    for f in range(D):
        mid = base.mul(e, ki, U, S.cols[f])
        cols.append(base.mul(ki, e, mid, Ui))
    return ExactMatrix(D, D, cols, N)


def twist_system(sys: GradedSystem, sigma: CocycleData, support) -> tuple:
    """Twisted system plus a report comparing the two constructions.

    Route B rebuilds every fiber with the twisted multiplication; route A
    conjugates the comultiplication (and antipode) of each C(kappa) by F.
    Any disagreement is a TheoremViolation.
    """
    from .hopf import verify_cocycle
    from .errors import InvalidCocycle
    crep = verify_cocycle(sys.fibers.hopf_eps(), sigma)
    if not crep.passed:
        raise InvalidCocycle(f"invalid cocycle: {[e.name for e in crep.failures()]}")
    twisted = GradedSystem(sys.datum, sys.gamma_gens, sigma, sys.mutation)
    rep = CheckReport("twist_routes")
    rep.extend(crep, "cocycle.")
    mismatches = []
    for k in dict.fromkeys(support):
        route_a = _twist_component_comult(sys, k, sigma)
        route_b = twisted.component(k).coalgebra.comult
        if {f: v for f, v in route_a.items() if v} != {f: v for f, v in route_b.items() if v}:
            mismatches.append({"kappa": _j(k), "map": "comultiplication"})
            continue
        if _twist_component_antipode(sys, k, sigma) != twisted.graded_antipode(k):
            mismatches.append({"kappa": _j(k), "map": "antipode"})
    rep.add("routes_agree", not mismatches, components=len(list(dict.fromkeys(support))),
            **({"witness": mismatches[0]} if mismatches else {}))
    if mismatches:
        raise TheoremViolation(f"twisted fibers and twisted components disagree: {mismatches[0]}")
    return twisted, rep


# -- finite Gamma ------------------------------------------------------------------

def enumerate_finite_group(gens, limit: int = 10000) -> list:
    """All elements of the group generated by ``gens``; identity first."""
    if not gens:
        raise SupportError("no generators")
    e = char_identity(gens[0].datum)
    seen = {e: None}
    frontier = [e]
    moves = list(gens) + [char_inv(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in moves:
                y = char_mul(x, g)
                if y not in seen:
                    seen[y] = None
                    nxt.append(y)
                    if len(seen) > limit:
                        raise SupportError(f"group generated by {gens} has more than {limit} elements")
        frontier = nxt
    return list(seen)


def materialize(sys: GradedSystem, elements) -> tuple:
    """H(Gamma) as a HopfData when Gamma = ``elements`` is finite, plus varpi and kGamma."""
    elements = list(elements)
    pos = {k: n for n, k in enumerate(elements)}
    for a in elements:
        for b in elements:
            if char_mul(a, b) not in pos:
                raise SupportError("elements are not closed under multiplication")
    D = sys.dim
    S = len(elements)
    N = sys.conductor
    one = CycloScalar.one(N)
    mult, comult, counit = {}, {}, {}
    S_cols = [None] * (D * S)
    for a in elements:
        oa = pos[a] * D
        coal = sys.component(a).coalgebra
        for i, terms in coal.comult.items():
            comult[oa + i] = {(oa + p, oa + q): c for (p, q), c in terms.items()}
        for i, c in coal.counit.items():
            counit[oa + i] = c
        ai = char_inv(a)
        Sa = sys.graded_antipode(a)
        for i in range(D):
            S_cols[oa + i] = {pos[ai] * D + r: c for r, c in Sa.cols[i].items()}
        for b in elements:
            ob = pos[b] * D
            oc = pos[char_mul(a, b)] * D
            m = sys.graded_mul(a, b)
            for i in range(D):
                for j in range(D):
                    col = m.cols[i * D + j]
                    if col:
                        mult[(oa + i, ob + j)] = {oc + r: c for r, c in col.items()}
    unit = {pos[sys.eps] * D + i: c for i, c in sys.unit().items()}
    labels = tuple(f"{a.key}:{l}" for a in elements for l in sys._labels)
    H = HopfData(D * S, labels, N, mult, unit, comult, counit, ExactMatrix(D * S, D * S, S_cols, N))
    # k Gamma and varpi
    kmult = {(pos[a], pos[b]): {pos[char_mul(a, b)]: one} for a in elements for b in elements}
    kG = HopfData(S, tuple(str(a.key) for a in elements), N, kmult, {pos[sys.eps]: one},
                  {n: {(n, n): one} for n in range(S)}, {n: one for n in range(S)},
                  ExactMatrix(S, S, [{pos[char_inv(a)]: one} for a in elements], N))
    varpi_cols = []
    for a in elements:
        for i in range(D):
            c = counit.get(pos[a] * D + i)
            varpi_cols.append({pos[a]: c} if c else {})
    varpi = ExactMatrix(S, D * S, varpi_cols, N)
    return H, kG, varpi


def verify_materialized(sys: GradedSystem, elements) -> CheckReport:
    from .hopf import is_cocentral_map
    H, kG, varpi = materialize(sys, elements)
    rep = CheckReport("materialized")
    rep.extend(verify_hopf(H), "hopf.")
    D = sys.dim
    e_pos = list(elements).index(sys.eps)
    sub = ExactSubspace.full(D, sys.conductor).embed(e_pos * D, H.dim)
    hopf_ok = rep.passed
    if hopf_ok and is_hopf_subalgebra(H, sub):
        rep.add("identity_component_normal", is_normal_subalgebra(H, sub), dim=H.dim)
        rep.add("varpi_cocentral", is_cocentral_map(varpi, H, kG))
    else:
        rep.add("identity_component_normal", False, dim=H.dim, reason="not a Hopf subalgebra")
    rep.evidence["dim"] = H.dim
    return rep
