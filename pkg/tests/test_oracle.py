import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from polyspaces.errors import InvalidInputError
from polyspaces.homology import betti_Cj_F2
from polyspaces.oracle import (
    FNComplex,
    compositions,
    fox_neuwirth_betti,
    path_certified,
    path_discriminant,
    pi0_experiment_12,
    planted_root_fuzz,
    planted_trial,
    random_member,
    sympy_stratum,
)
from polyspaces.polyarith import Poly, Z
from polyspaces.spaces import Family, SpaceId, System, is_member, stratum_signature


# --- Fox-Neuwirth --------------------------------------------------------------


def test_compositions():
    assert compositions(3, 2) == [(1, 2), (2, 1)]
    assert len(compositions(8, 4)) == 35


@pytest.mark.parametrize(
    "j, dims",
    [(1, [1]), (2, [1, 1]), (3, [1, 1, 0])],
)
def test_fn_examples(j, dims):
    assert list(fox_neuwirth_betti(j).dims) == dims


def test_fn_matches_cj_up_to_8():
    for j in range(1, 9):
        cx = FNComplex.build(j)  # asserts d^2 = 0
        assert list(fox_neuwirth_betti(j, 2 * j).dims) == list(betti_Cj_F2(j, 2 * j).dims)
        assert sum(len(c) for c in cx.cells.values()) == 2 ** (j - 1)


def test_fn_rejects_large_j():
    with pytest.raises(InvalidInputError):
        FNComplex.build(9)
    with pytest.raises(InvalidInputError):
        FNComplex.build(0)


# --- stratum recheck --------------------------------------------------------------


@given(
    st.lists(st.integers(-3, 3), min_size=0, max_size=2),
    st.integers(1, 2),
    st.integers(0, 1),
)
def test_fast_and_sympy_strata_agree(real_roots, n, pairs):
    base = Poly([Fraction(1)])
    for r in set(real_roots):
        base = base * (Z - r)
    for k in range(pairs):
        base = base * (Z**2 + k + 1)
    plant = base**n
    polys = (plant * (Z - 7), plant * (Z + 5))
    d = polys[0].degree
    sys = System(SpaceId(Family.POLY_R, d, 2, n), polys)
    exact = sympy_stratum(sys)
    if is_member(sys):
        assert exact is None
    else:
        assert stratum_signature(sys).as_tuple() == exact == (len(set(real_roots)), pairs)


def test_random_member_rejections():
    rng = random.Random(0)
    sys, rej = random_member(Family.POLY_R, 4, 2, 2, rng)
    assert is_member(sys) and rej >= 0


# --- fuzzing -------------------------------------------------------------------


def test_planted_fuzz_small():
    rep = planted_root_fuzz(6, 2, 2, 200, seed=7)
    assert rep.ok and rep.member_count == 0
    assert sum(rep.stratum_histogram.values()) == 200
    obj = json.loads(json.dumps(rep.to_json()))
    assert obj["trials"] == 200 and obj["seed"] == 7


def test_unplanted_fuzz_small():
    rep = planted_root_fuzz(6, 1, 2, 300, seed=8, plant=False)
    assert rep.ok
    assert rep.member_count + rep.exceptions_genuine == 300


def test_planted_trial_replays():
    a = planted_trial(6, 1, 3, seed=11, trial=42)
    b = planted_trial(6, 1, 3, seed=11, trial=42)
    assert a[0].polys == b[0].polys and a[1] == b[1]
    rep = planted_root_fuzz(6, 1, 3, 50, seed=11)
    assert rep.to_json() == planted_root_fuzz(6, 1, 3, 50, seed=11).to_json()


def test_fuzz_rejects_n_above_d():
    with pytest.raises(InvalidInputError):
        planted_root_fuzz(1, 1, 2, 10, seed=0)


# --- components of squarefree real polynomials --------------------------------------


def test_path_discriminant_matches_sympy():
    s, z = sympy.symbols("s z")
    f = (Z - 1) * (Z - 2) * (Z + 3)
    g = Z**3 + 2 * Z - 5
    got = path_discriminant(f, g)
    expr = sympy.discriminant((1 - s) * (z**3 - 7 * z + 6) + s * (z**3 + 2 * z - 5), z)
    want = sympy.Poly(expr, s).all_coeffs()[::-1]
    assert [sympy.Rational(c.numerator, c.denominator) for c in got.coeffs] == want


def test_path_certification_examples():
    f = (Z - 1) * (Z - 2)
    assert path_certified(f, Z**2 - 2 * Z)  # disc = (s + 1)^2
    assert not path_certified(f, (Z - 2) * (Z - 3))  # double root at s = 1/2
    assert path_certified(Z**2 + 1, Z**2 + 4)
    assert not path_certified(f, Z**2 + 1)


@pytest.mark.parametrize("d", [1, 2, 5])
def test_pi0_examples(d):
    rep = pi0_experiment_12(d, 500, seed=d, paths=20)
    assert rep.ok, rep.to_json()
    assert sorted(rep.histogram) == list(range(d // 2 + 1))
    assert "not a proof" in rep.to_json()["note"]


def test_pi0_rejects_bad_degree():
    with pytest.raises(InvalidInputError):
        pi0_experiment_12(0, 10, seed=0)
