import math

import pytest
from hypothesis import given, settings, strategies as st

from hflab.errors import BudgetExceeded, InsufficientData, InvalidDatum
from hflab.growth import (BorelElement, ball_growth, budget_from_env, classify_growth,
                          commutation_certificate, growth_report, naive_ball, verdicts)


def B(t, s=None, N=1):
    return BorelElement.from_json({"t": t, "s": s or ["0"] * len(t)}, N)


Z = [B(["2"])]
Z2 = [B(["2", "1"]), B(["1", "3"])]
EXPO = [B(["2"], ["0"]), B(["1"], ["1"])]


def test_group_law():
    a, b = B(["2"], ["1"]), B(["3"], ["5"])
    assert (a * b).to_json() == {"t": ["6"], "s": ["11"]}
    assert (a * a.inverse()).is_identity
    assert a * b != b * a


@pytest.mark.parametrize("gens,formula", [(Z, lambda n: 2 * n + 1),
                                          (Z2, lambda n: 2 * n * n + 2 * n + 1)],
                         ids=["Z", "Z2"])
def test_closed_forms_against_naive(gens, formula):
    # the closed forms are checked here against brute-force word enumeration
    for n in range(7):
        assert len(naive_ball(gens, n)) == formula(n)
    assert ball_growth(gens, 12) == [formula(n) for n in range(13)]


def test_exponential_ball_sizes_frozen():
    # frozen from the naive oracle up to radius 6, BFS beyond
    sizes = ball_growth(EXPO, 12)
    assert sizes[:7] == [len(naive_ball(EXPO, n)) for n in range(7)]
    assert sizes == [1, 5, 17, 43, 93, 191, 375, 711, 1317, 2403, 4317, 7667, 13513]


def test_classification():
    assert classify_growth([2 * n + 1 for n in range(13)]).label() == "polynomial(1)"
    assert classify_growth([2 * n * n + 2 * n + 1 for n in range(13)]).label() == "polynomial(2)"
    assert classify_growth([1] + [2] * 12).label() == "polynomial(0)"
    expo = classify_growth(ball_growth(EXPO, 12))
    assert expo.kind == "exponential"
    assert all(r >= 17 / 16 for r in expo.diagnostics["ratios"])
    assert classify_growth([3 ** n for n in range(13)]).kind == "exponential"


def test_classification_needs_data():
    with pytest.raises(InsufficientData):
        classify_growth([1, 3, 5])


def test_certificates():
    c = commutation_certificate(Z2)
    assert c["type"] == "abelian" and c["rank_upper"] == c["rank_lower"] == 2 and c["rank_certified"]
    c = commutation_certificate([B(["-1"]), B(["1"], ["0"])])
    assert c["rank_upper"] == 0 and c["torsion"] == [2] and c["order"] == 2
    assert commutation_certificate(EXPO)["type"] == "nonabelian"
    # 2 and 4 are dependent: rank 1
    c = commutation_certificate([B(["2"]), B(["4"])])
    assert c["rank_upper"] == 1 == c["rank_lower"]


def test_verdict_table():
    rz2 = growth_report(Z2, 12, h_epsilon_semisimple=True)
    assert rz2.verdicts["gk"] == 2
    assert (rz2.verdicts["noetherian"], rz2.verdicts["regular"], rz2.verdicts["gldim_bound"]) == ("yes", "yes", 2)
    rz = growth_report(Z, 12, h_epsilon_semisimple=False)
    assert (rz.verdicts["noetherian"], rz.verdicts["regular"]) == ("yes", "no")
    re = growth_report(EXPO, 12)
    assert (re.verdicts["gk"], re.verdicts["noetherian"]) == ("infinite", "undetermined")


def test_budget_exceeded_keeps_partial():
    with pytest.raises(BudgetExceeded) as exc:
        ball_growth(EXPO, 12, budget_mb=1)
    assert exc.value.partial[:3] == [1, 5, 17]


def test_budget_env(monkeypatch):
    monkeypatch.setenv("HFLAB_BUDGET_MB", "64")
    assert budget_from_env() == 64
    monkeypatch.delenv("HFLAB_BUDGET_MB")
    assert budget_from_env() == 512


def test_input_validation():
    with pytest.raises(InvalidDatum):
        ball_growth([], 3)
    with pytest.raises(InvalidDatum):
        B(["0"])


def test_cyclotomic_generators():
    # t = zeta_4 generates a cyclic group of order 4
    g = B(["z"], ["0"], N=4)
    assert ball_growth([g], 6) == [1, 3, 4, 4, 4, 4, 4]
    assert commutation_certificate([g])["order"] == 4


@st.composite
def borel_gens(draw):
    n = draw(st.integers(1, 2))
    k = draw(st.integers(1, 2))
    vals = st.sampled_from(["1", "-1", "2", "1/2", "3"])
    svals = st.sampled_from(["0", "1", "-1", "1/2"])
    return [B([draw(vals) for _ in range(n)], [draw(svals) for _ in range(n)]) for _ in range(k)]


@settings(max_examples=25)
@given(borel_gens(), st.integers(1, 4))
def test_bfs_matches_naive(gens, n):
    assert ball_growth(gens, n)[n] == len(naive_ball(gens, n))
