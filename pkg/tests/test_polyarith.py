import json
import random
import time
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyspaces.errors import ContractViolationError, InvalidInputError, NumericalFailure
from polyspaces.polyarith import (
    GaussRational,
    Poly,
    Z,
    discriminant,
    format_rational,
    gcd_subresultant,
    parse_rational,
    poly_from_json,
    poly_to_json,
    resultant,
    roots_numeric,
    squarefree_part,
    sturm_chain,
    sturm_count,
)

I = Poly([GaussRational(0, 1)])


def P(*cs):
    return Poly.exact(cs)


def rand_poly(rng, deg, bound=5, monic=False):
    cs = [Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) for _ in range(deg)]
    lead = Fraction(1) if monic else Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
    return Poly(cs + [lead])


# --- Rational / GaussRational -------------------------------------------------


def test_rational_is_reduced():
    c = Fraction(6, -4)
    assert (c.numerator, c.denominator) == (-3, 2)
    assert format_rational(c) == "-3/2"
    assert parse_rational("-3/2") == c
    assert format_rational(5) == "5/1"


def test_bad_rational_literal():
    with pytest.raises(InvalidInputError):
        parse_rational("x")
    with pytest.raises(InvalidInputError):
        parse_rational("1/0")


def test_gauss_arithmetic():
    a = GaussRational(1, 2)
    b = GaussRational(Fraction(1, 2), -1)
    assert a * b == GaussRational(Fraction(5, 2), 0)
    assert (a / a) == 1
    assert a.conjugate() == GaussRational(1, -2)
    assert complex(a) == 1 + 2j
    assert a - a == 0


@given(st.fractions(), st.fractions(), st.fractions(), st.fractions())
def test_gauss_field_axioms(a, b, c, d):
    x, y = GaussRational(a, b), GaussRational(c, d)
    assert x * y == y * x
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    if y:
        assert (x / y) * y == x


# --- Poly ---------------------------------------------------------------------


def test_poly_basics():
    f = P(-1, 0, 1)
    assert f.degree == 2 and f.is_monic() and f.is_real()
    assert Poly().degree == -1 and Poly().is_zero()
    assert P(1, 2, 0, 0).degree == 1
    assert (Z - 1) * (Z + 1) == f
    assert f.derivative() == 2 * Z
    assert f(Fraction(3)) == 8
    q, r = divmod(Z**3 - Z, Z**2 - 1)
    assert q == Z and r.is_zero()
    assert str(Z**2 - 2 * Z + 1) == "z^2 - 2*z + 1"


def test_complex_poly_conj():
    f = Z**2 + I * Z + 1
    assert not f.is_real()
    assert f.conj() == Z**2 - I * Z + 1


# --- gcd ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "f, g, expected",
    [
        (Z**2 - 1, Z**3 - Z, Z**2 - 1),
        (Z**2 + 1, Z**2 - 1, P(1)),
        (Z**4 - 2 * Z**2 + 1, Z**3 - Z, Z**2 - 1),
    ],
)
def test_gcd_examples(f, g, expected):
    assert gcd_subresultant(f, g) == expected


def test_gcd_zero_inputs():
    with pytest.raises(InvalidInputError):
        gcd_subresultant(Poly(), Poly())
    assert gcd_subresultant(Poly(), 2 * Z + 2) == Z + 1


def test_gcd_gaussian():
    f = (Z - I) * (Z + 2)
    g = (Z - I) * (Z - 3)
    assert gcd_subresultant(f, g) == Z - I
    assert gcd_subresultant(Z**2 + 1, Z - I) == Z - I


def test_gcd_planted_factor_1000():
    rng = random.Random(1)
    for _ in range(1000):
        h = rand_poly(rng, rng.randint(1, 4))
        f = rand_poly(rng, rng.randint(0, 8))
        g = rand_poly(rng, rng.randint(0, 8))
        gg = gcd_subresultant(f * h, g * h)
        assert (gg % squarefree_part(h)).is_zero()
        assert (gg % h.monic()).is_zero()
        # order and scaling independence
        assert gg == gcd_subresultant(g * h, f * h)
        assert gg == gcd_subresultant(f * h * Fraction(-7, 3), g * h * 5)


def test_gcd_degree_30_is_fast():
    rng = random.Random(3)
    h = rand_poly(rng, 10, monic=True)
    f, g = rand_poly(rng, 20) * h, rand_poly(rng, 20) * h
    t0 = time.perf_counter()
    gg = gcd_subresultant(f, g)
    assert time.perf_counter() - t0 < 0.5
    assert (gg % h).is_zero()


# --- squarefree / Sturm -------------------------------------------------------


@pytest.mark.parametrize(
    "f, expected",
    [
        ((Z - 1) ** 2 * (Z + 2), (Z - 1) * (Z + 2)),
        (Z**2 + 1, Z**2 + 1),
        ((Z**2 + 4) ** 2, Z**2 + 4),
    ],
)
def test_squarefree_examples(f, expected):
    assert squarefree_part(f) == expected


def test_squarefree_zero():
    with pytest.raises(InvalidInputError):
        squarefree_part(Poly())


def test_sturm_examples():
    assert sturm_count(Z**3 - Z, (-2, 2)) == 3
    assert sturm_count(Z**2 + 1) == 0
    assert sturm_count(Z**3 - 3 * Z + 1) == 3


def test_sturm_half_open_interval():
    f = Z**3 - Z
    assert sturm_count(f, (-1, 1)) == 2  # (-1, 1] contains 0 and 1
    assert sturm_count(f, (0, 1)) == 1
    with pytest.raises(InvalidInputError):
        sturm_count(f, (1, 1))


def test_sturm_errors():
    with pytest.raises(InvalidInputError):
        sturm_count(Poly())
    with pytest.raises(ContractViolationError):
        sturm_count((Z - 1) ** 2)


def test_sturm_chain_shape():
    f = Z**3 - 3 * Z + 1
    chain = sturm_chain(f)
    assert chain[0] == f
    assert chain[1].degree == 2
    assert chain[-1].degree == 0


def _conjugate_pairs(roots, tol=1e-6):
    nonreal = [r for r in roots if abs(r.imag) > tol]
    return len(nonreal) // 2, len(roots) - len(nonreal)


def test_sturm_plus_pairs_equals_degree():
    rng = random.Random(11)
    done = 0
    while done < 1000:
        f = Poly.exact([rng.randint(-6, 6) for _ in range(rng.randint(1, 7))] + [1])
        if squarefree_part(f).degree != f.degree:
            continue
        roots = roots_numeric(f, tol=1e-8)
        pairs, _ = _conjugate_pairs(roots)
        assert sturm_count(f) + 2 * pairs == f.degree
        done += 1


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6, unique=True))
def test_sturm_counts_planted_roots(roots):
    f = Poly([Fraction(1)])
    for r in roots:
        f = f * (Z - r)
    assert sturm_count(f) == len(roots)
    assert sturm_count(f * (Z**2 + 1)) == len(roots)
    lo = min(roots)
    assert sturm_count(f, (lo, max(roots) + 1)) == len(roots) - 1


# --- resultant / discriminant -------------------------------------------------


def test_resultant_and_discriminant():
    assert resultant(Z - 1, Z - 3) == -2
    assert resultant(Z**2 - 1, Z - 2) == 3
    assert resultant(Z**2 - 1, Z - 1) == 0
    assert discriminant(Z**2 + Z * 3 + 1) == 5
    assert discriminant(Z**3 - 3 * Z + 1) == 81
    assert discriminant((Z - 1) ** 2) == 0


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=5))
def test_discriminant_matches_root_product(roots):
    f = Poly([Fraction(1)])
    for r in roots:
        f = f * (Z - r)
    expected = 1
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            expected *= (roots[i] - roots[j]) ** 2
    assert discriminant(f) == expected


# --- numeric roots ------------------------------------------------------------


def test_roots_examples():
    r = roots_numeric(Z**2 + 1, tol=1e-10)
    assert sorted(r, key=lambda z: z.imag) == pytest.approx([-1j, 1j], abs=1e-10)
    r = roots_numeric((Z - 1) * (Z - 2) * (Z - 3), tol=1e-10)
    assert sorted(x.real for x in r) == pytest.approx([1, 2, 3], abs=1e-10)


def test_roots_multiplicity_kept():
    r = roots_numeric((Z - 1) ** 3 * (Z + 2), tol=1e-8)
    assert len(r) == 4
    assert sum(abs(x - 1) < 1e-4 for x in r) == 3


def test_roots_pm1_degree_10():
    rng = random.Random(5)
    for _ in range(50):
        cs = [rng.choice([-1, 1]) for _ in range(10)] + [1]
        f = Poly.exact(cs)
        roots = roots_numeric(f, tol=1e-8)
        assert len(roots) == 10
        c = np.array(cs[::-1], dtype=float)
        for z in roots:
            assert abs(np.polyval(c, z)) / (1 + abs(z)) ** 10 <= 1e-8


def test_roots_conjugation_equivariance():
    rng = random.Random(9)
    for _ in range(100):
        cs = [GaussRational(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(5)]
        f = Poly(cs + [Fraction(1)])
        a = roots_numeric(f, tol=1e-8)
        b = roots_numeric(f.conj(), tol=1e-8)
        for z in a:
            assert min(abs(z.conjugate() - w) for w in b) < 1e-6


def test_roots_reject_constant():
    with pytest.raises(InvalidInputError):
        roots_numeric(P(1))


def test_roots_failure_reports_residual():
    # an absurd tolerance cannot be met
    with pytest.raises(NumericalFailure) as exc:
        roots_numeric(Z**7 - Fraction(1, 3) * Z + Fraction(2, 7), tol=1e-300)
    assert exc.value.achieved is not None


# --- JSON ---------------------------------------------------------------------


def test_json_round_trip():
    f = Z**2 * Fraction(1) - Fraction(3, 2) * Z + I
    obj = poly_to_json(f)
    assert obj["coeffs"][0] == {"re": "0/1", "im": "1/1"}
    assert obj["coeffs"][1] == "-3/2"
    assert poly_from_json(json.loads(json.dumps(obj))) == f


def test_json_rejects_floats():
    with pytest.raises(InvalidInputError):
        poly_from_json({"coeffs": [0.5, 1]})
