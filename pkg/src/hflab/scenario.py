"""Scenario files: parsing, schema validation and check orchestration."""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .errors import HflabError, InvalidCocycle, SupportError
from .graded import (GradedSystem, cosemisimplicity_verdict, enumerate_finite_group,
                     normality_check, twist_system, verify_coradical_theorem,
                     verify_exact_sequence, verify_graded_antipode, verify_materialized,
                     verify_strong_grading, cocentral_on_component)
from .growth import BorelElement, budget_from_env, growth_report
from .hopf import is_semisimple, trivial_cocycle, verify_hopf
from .errors import BudgetExceeded
from .qls import (Character, QLSDatum, char_identity, char_inv, char_mul, cocycle_from_json,
                  validate_datum, verify_cleaving, verify_coherence, build_fiber)
from .report import CheckReport

logger = logging.getLogger(__name__)

GRADED_CHECKS = ("hopf_axioms", "strong_grading", "exact_sequence", "coradical", "cosemisimple",
                 "normality", "coherence", "cleaving", "materialize")
ALL_CHECKS = ("validate",) + GRADED_CHECKS + ("twist", "growth")

_CHAR = {"oneOf": [
    {"type": "string", "enum": ["eps", "epsilon", "e", "1"]},
    {"type": "object", "required": ["t"], "additionalProperties": False,
     "properties": {"t": {"type": "array", "items": {"type": ["string", "integer"]}},
                    "s": {"type": "array", "items": {"type": ["string", "integer"]}}}}]}

SCHEMA = {
    "type": "object",
    "required": ["datum"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "datum": {"type": "object", "properties": {
            "theta": {"type": "integer", "minimum": 0},
            "conductor": {"type": "integer", "minimum": 1},
            "exponents": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
            "mode": {"enum": ["qls", "group_only"]},
            "orders": {"type": "array", "items": {"type": "integer", "minimum": 1}}},
            "additionalProperties": False},
        "gamma_generators": {"type": "array", "items": _CHAR},
        "support": {"type": "array", "items": _CHAR},
        "checks": {"type": "array", "items": {"enum": list(ALL_CHECKS)}},
        "growth": {"type": "object", "additionalProperties": False, "properties": {
            "n_max": {"type": "integer", "minimum": 1},
            "budget_mb": {"type": "integer", "minimum": 1},
            "generators": {"type": "array", "items": _CHAR}}},
        "cocycle": {"type": "object", "required": ["values"], "additionalProperties": False,
                    "properties": {"type": {"enum": ["bicharacter", "group_function"]},
                                   "values": {"type": "array"}}},
        "mutation": {"type": "object", "required": ["kind"], "additionalProperties": False,
                     "properties": {"kind": {"enum": ["wrong_antipode", "zeroed_block",
                                                      "broken_cocycle"]},
                                    "pair": {"type": "array", "items": _CHAR,
                                             "minItems": 2, "maxItems": 2}}},
        "output": {"type": "string"},
    },
}


class ScenarioError(HflabError, ValueError):
    """Malformed or schema-invalid scenario."""


@dataclass
class Scenario:
    raw: dict
    name: str
    datum: QLSDatum
    gamma_generators: list
    support: list
    checks: list
    growth: dict = field(default_factory=dict)
    cocycle: dict | None = None
    mutation: dict | None = None
    output: str | None = None


def bundled_names() -> list:
    root = resources.files("hflab") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def read_scenario_text(ref: str) -> tuple:
    """(text, name) for a path or the name of a bundled scenario."""
    path = Path(ref)
    if path.exists():
        return path.read_text(), path.stem
    name = ref[:-5] if ref.endswith(".json") else ref
    res = resources.files("hflab") / "scenarios" / f"{name}.json"
    if res.is_file():
        return res.read_text(), name
    raise ScenarioError(f"no such scenario file or bundled scenario: {ref}")


def parse_scenario(obj, name: str = "scenario") -> Scenario:
    try:
        jsonschema.validate(obj, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise ScenarioError(f"schema violation at '{path}': {exc.message}") from None
    datum = QLSDatum.from_json(obj["datum"])
    gens = [Character.from_json(datum, c) for c in obj.get("gamma_generators", [])]
    eps = char_identity(datum)
    if "support" in obj:
        support = [Character.from_json(datum, c) for c in obj["support"]]
    else:
        support = [eps] + gens + [char_inv(g) for g in gens]
    support = list(dict.fromkeys(support))
    checks = list(obj.get("checks") or ALL_CHECKS)
    mutation = dict(obj["mutation"]) if obj.get("mutation") else None
    if mutation and "pair" in mutation:
        mutation["pair"] = tuple(Character.from_json(datum, c) for c in mutation["pair"])
    return Scenario(obj, obj.get("name", name), datum, gens, support, checks,
                    dict(obj.get("growth") or {}), obj.get("cocycle"), mutation, obj.get("output"))


def load_scenario(ref: str) -> Scenario:
    text, name = read_scenario_text(ref)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed JSON: {exc}") from None
    return parse_scenario(obj, name)


# -- running checks -------------------------------------------------------------------

class Runner:
    def __init__(self, sc: Scenario):
        self.sc = sc
        self.eps = char_identity(sc.datum)
        self._system = None
        self._twisted = None

    @property
    def system(self) -> GradedSystem:
        if self._system is None:
            mutation = self.sc.mutation
            if mutation and mutation["kind"] == "broken_cocycle":
                mutation = None
            self._system = GradedSystem(self.sc.datum, self.sc.gamma_generators, None, mutation)
        return self._system

    def cocycle(self):
        h_eps = self.system.fibers.hopf_eps()
        if self.sc.cocycle is None:
            sigma = trivial_cocycle(h_eps)
        else:
            sigma = cocycle_from_json(h_eps, self.sc.datum, self.sc.cocycle)
        if self.sc.mutation and self.sc.mutation["kind"] == "broken_cocycle":
            sigma = break_cocycle(sigma, self.sc.datum)
        return sigma

    def coherence_chars(self) -> list:
        out = [self.eps]
        for g in self.sc.gamma_generators:
            out += [g, char_inv(g)]
        return list(dict.fromkeys(out))

    # individual checks
    def check_validate(self, sys=None) -> CheckReport:
        return validate_datum(self.sc.datum)

    def check_hopf_axioms(self, sys) -> CheckReport:
        rep = CheckReport("hopf_axioms")
        rep.extend(verify_hopf(sys.fibers.hopf_eps()), "fiber.")
        rep.extend(verify_hopf(sys.identity_component_hopf()), "dual.")
        return rep

    def check_strong_grading(self, sys) -> CheckReport:
        sup = self.sc.support
        return verify_strong_grading(sys, [(a, b) for a in sup for b in sup])

    def check_exact_sequence(self, sys) -> CheckReport:
        rep = verify_exact_sequence(sys, self.sc.support)
        bad = [k.to_json() for k in self.sc.support if not cocentral_on_component(sys, k)]
        rep.add("varpi_cocentral", not bad, **({"witness": bad[0]} if bad else {}))
        return rep

    def check_coradical(self, sys) -> CheckReport:
        return verify_coradical_theorem(sys, self.sc.support)

    def check_cosemisimple(self, sys) -> CheckReport:
        rep = CheckReport("cosemisimple")
        verdict, ev = cosemisimplicity_verdict(sys, self.sc.support)
        rep.add("verdict_matches_components", True, verdict=verdict, **ev)
        return rep

    def check_normality(self, sys) -> CheckReport:
        return normality_check(sys, self.sc.support)

    def check_coherence(self, sys) -> CheckReport:
        rep = verify_coherence(sys.fibers, self.coherence_chars())
        bad = [k.to_json() for k in self.sc.support if not verify_graded_antipode(sys, k)]
        rep.add("graded_antipode_axiom", not bad, **({"witness": bad[0]} if bad else {}))
        return rep

    def check_cleaving(self, sys) -> CheckReport:
        rep = CheckReport("cleaving")
        for k in self.sc.support:
            sub = verify_cleaving(self.sc.datum, k)
            rep.add(f"kappa[{k.key}]", sub.passed, kappa=k.to_json(),
                    entries={e.name: e.passed for e in sub.entries})
        return rep

    def check_materialize(self, sys) -> CheckReport:
        gens = self.sc.gamma_generators or [self.eps]
        try:
            elements = enumerate_finite_group(gens, limit=64)
        except SupportError as exc:
            rep = CheckReport("materialize")
            rep.add("finite_gamma", False, reason=str(exc))
            return rep
        rep = verify_materialized(sys, elements)
        rep.name = "materialize"
        rep.evidence["gamma_order"] = len(elements)
        return rep

    def check_twist(self, sys=None) -> CheckReport:
        rep = CheckReport("twist")
        try:
            sigma = self.cocycle()
            twisted, routes = twist_system(self.system, sigma, self.sc.support)
        except InvalidCocycle as exc:
            rep.add("cocycle_valid", False, reason=str(exc))
            return rep
        rep.extend(routes)
        for name in ("strong_grading", "exact_sequence", "coherence"):
            sub = getattr(self, f"check_{name}")(twisted)
            rep.extend(sub, f"twisted.{name}.")
        return rep

    def twisted_system(self) -> GradedSystem:
        if self._twisted is None:
            twisted, _ = twist_system(self.system, self.cocycle(), self.sc.support)
            self._twisted = twisted
        return self._twisted

    def check_growth(self, sys=None) -> CheckReport:
        rep = CheckReport("growth")
        g = self.sc.growth
        N = self.sc.datum.conductor
        if "generators" in g:
            gens = [BorelElement.from_character(Character.from_json(self.sc.datum, c))
                    for c in g["generators"]]
        else:
            gens = [BorelElement.from_character(c) for c in self.sc.gamma_generators]
        if not gens:
            raise ScenarioError("growth needs gamma_generators")
        semisimple = is_semisimple(build_fiber(self.sc.datum, self.eps).hopf)
        budget = g.get("budget_mb", budget_from_env())
        try:
            gr = growth_report(gens, g.get("n_max", 12), semisimple, budget)
        except BudgetExceeded as exc:
            rep.add("ball_growth", False, reason=str(exc), partial_sizes=exc.partial)
            return rep
        sizes = gr.ball_sizes
        mono = sizes[0] == 1 and all(b >= a for a, b in zip(sizes, sizes[1:]))
        rep.add("ball_growth", mono, sizes=sizes)
        rep.add("classified", gr.classification.kind != "inconclusive",
                **gr.classification.to_json())
        rep.add("verdicts", True, **gr.verdicts)
        rep.evidence["certificate"] = gr.certificate
        rep.evidence["h_epsilon_semisimple"] = semisimple
        return rep

    def run(self, checks, jobs: int = 1, system: GradedSystem | None = None) -> list:
        """Reports in declared order; stops early if the datum is invalid."""
        checks = list(checks)
        out = []
        vrep = self.check_validate()
        if "validate" in checks:
            vrep.name = "validate"
            out.append(("validate", vrep, 0.0))
        if not vrep.passed:
            for c in checks:
                if c != "validate":
                    skipped = CheckReport(c)
                    skipped.add("skipped", False, reason="datum failed validation")
                    out.append((c, skipped, 0.0))
            return out
        rest = [c for c in checks if c != "validate"]
        sys = system

        def one(name):
            t0 = time.perf_counter()
            target = sys if sys is not None else (self.system if name not in ("twist", "growth")
                                                  else None)
            rep = getattr(self, f"check_{name}")(target)
            rep.name = name
            return name, rep, time.perf_counter() - t0

        if jobs > 1 and len(rest) > 1:
            # warm shared caches once, then fan out; merge stays in declared order
            _ = self.system.fibers.hopf_eps()
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                out += list(pool.map(one, rest))
        else:
            out += [one(c) for c in rest]
        return out


def break_cocycle(sigma, datum: QLSDatum):
    """Scale sigma(g_1, g_1) by 2 (and its inverse by 1/2): still normalized and
    convolution invertible, but no longer a cocycle."""
    from .hopf import CocycleData
    from .qls import monomials
    mons = monomials(datum)
    zeros = (0,) * datum.theta
    g1 = [1] + [0] * (datum.theta - 1)
    i = mons.index((zeros, tuple(g1)))
    vals = dict(sigma.values)
    inv = dict(sigma.inverse_values)
    vals[(i, i)] = vals[(i, i)] * 2
    inv[(i, i)] = inv[(i, i)] / 2
    return CocycleData(sigma.base, vals, inv)


def build_report(sc: Scenario, results) -> dict:
    """Assemble the report; identical inputs give identical JSON outside ``timing``."""
    checks = [rep.to_dict() for _, rep, _ in results]
    status = "pass" if all(rep.passed for _, rep, _ in results) else "fail"
    return {
        "scenario": sc.name,
        "input": sc.raw,
        "status": status,
        "checks": checks,
        "versions": {"hflab": __version__},
        "timing": {name: round(dt, 4) for name, _, dt in results},
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}
