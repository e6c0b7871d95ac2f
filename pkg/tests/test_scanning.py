import io
import random
from fractions import Fraction

import numpy as np
import pytest

from polyspaces.errors import InvalidInputError, NumericalFailure, RefineFirstError
from polyspaces.oracle import random_member
from polyspaces.polyarith import GaussRational, Poly, Z
from polyspaces.scanning import (
    LoopSample,
    chordal,
    component_index_12,
    electric_field_samples,
    eval_real_loop,
    hyperplane_pullback,
    loop_class_mod2,
    normalize_point,
)
from polyspaces.spaces import Family, SpaceId, System, jet_family, loop_product, make_system, rationalize


def qr(polys, n=1):
    return make_system(Family.Q_R, polys, n)


def test_normalize_point():
    v = normalize_point([0, -1, -2])
    assert np.allclose(v, np.array([0, 1, 2]) / np.sqrt(5))
    assert np.isclose(np.linalg.norm(normalize_point([3, 4, 0])), 1)
    with pytest.raises(InvalidInputError):
        normalize_point([0, 0])


def test_loop_examples():
    loop = eval_real_loop(qr([Z, Z - 1, Z - 2]))
    i = int(np.argmin(np.abs(loop.t)))
    assert loop.t[i] == 0.0
    assert np.allclose(loop.points[i], normalize_point([0, -1, -2]))
    assert np.allclose(loop.points[0], normalize_point([1, 1, 1]))
    assert np.allclose(loop.points[-1], loop.basepoint)
    assert loop.alpha[0] == -np.inf and loop.alpha[-1] == np.inf
    assert loop.max_step() < 0.5
    assert loop_class_mod2(loop) == 1
    assert loop_class_mod2(eval_real_loop(qr([Z**2 - 1, Z**2 - 2, Z**2 - 3]))) == 0


def test_loop_preconditions():
    with pytest.raises(InvalidInputError):
        eval_real_loop(make_system(Family.Q_R, [Z, Z - 1], 1))  # mn = 2
    with pytest.raises(InvalidInputError):
        eval_real_loop(qr([Z, Z, Z]))  # common real root


def test_loop_accepts_complex_common_roots():
    f = Z**2 + 1
    loop = eval_real_loop(qr([f, f, f]))
    assert loop_class_mod2(loop) == 0


def test_refinement_cap():
    # near-common real root: the raw vector turns over within ~eps of 0
    eps = Fraction(1, 10**9)
    sys = qr([Z, Z - eps, Z + eps])
    with pytest.raises(NumericalFailure) as exc:
        eval_real_loop(sys, max_points=80)
    assert exc.value.achieved > 80
    loop = eval_real_loop(sys)
    assert len(loop.t) < 2**20
    assert loop_class_mod2(loop) == 1


def test_refine_first_error():
    bad = LoopSample(
        t=np.array([-1.0, 0.0, 1.0]),
        alpha=np.array([-np.inf, 0.0, np.inf]),
        points=np.array([[1.0, 0, 0], [0, 1.0, 0], [1.0, 0, 0]]),
        basepoint=np.array([1.0, 0, 0]),
    )
    with pytest.raises(RefineFirstError):
        loop_class_mod2(bad)


def test_csv_export():
    loop = eval_real_loop(qr([Z, Z - 1, Z - 2]))
    text = loop.to_csv()
    lines = text.strip().splitlines()
    assert lines[0] == "t,alpha,x0,x1,x2"
    assert len(lines) == len(loop.t) + 1
    buf = io.StringIO()
    loop.to_csv(buf)
    assert buf.getvalue() == text


def test_conjugation_symmetry_of_jets():
    rng = random.Random(3)
    for _ in range(50):
        sys, _ = random_member(Family.Q_R, 4, 1, 3, rng)
        a = GaussRational(rng.randint(-5, 5), rng.randint(1, 5))
        for p in jet_family(sys):
            assert p(a.conjugate()) == GaussRational._coerce(p(a)).conjugate()


@pytest.mark.parametrize("m, n", [(1, 3), (3, 1), (2, 2), (1, 4)])
def test_loop_class_is_parity(m, n):
    rng = random.Random(m * 10 + n)
    for d in range(n, 7):
        for _ in range(10):
            sys, _ = random_member(Family.Q_R, d, m, n, rng)
            assert loop_class_mod2(eval_real_loop(sys)) == d % 2


def test_loop_class_additive_under_product():
    rng = random.Random(12)
    for _ in range(20):
        d1, d2 = rng.randint(1, 3), rng.randint(1, 3)
        s1, _ = random_member(Family.POLY_R, d1, 3, 1, rng, max_tries=100)
        s2, _ = random_member(Family.POLY_R, d2, 3, 1, rng, max_tries=100)
        prod = rationalize(loop_product(s1, s2)).as_family(Family.Q_R)
        c = loop_class_mod2(eval_real_loop(prod))
        c1 = loop_class_mod2(eval_real_loop(s1.as_family(Family.Q_R)))
        c2 = loop_class_mod2(eval_real_loop(s2.as_family(Family.Q_R)))
        assert c == (c1 + c2) % 2


def test_chordal_is_projective():
    u = normalize_point([1, 2, 3])
    assert chordal(u, -u) == 0
    assert chordal(u, u) == 0


# --- component index -------------------------------------------------------------


def test_component_index_examples():
    assert component_index_12(Z**2 + 1) == 1
    assert component_index_12(Z**2 - 1) == 0
    assert component_index_12((Z**2 + 1) * (Z**2 + 4) * (Z - 1)) == 2
    assert component_index_12(Z - 5) == 0


def test_component_index_rejects_nonmembers():
    with pytest.raises(InvalidInputError):
        component_index_12((Z - 1) ** 2)
    with pytest.raises(InvalidInputError):
        component_index_12(Z**2 + Poly([GaussRational(0, 1)]))


def test_component_index_range():
    rng = random.Random(5)
    for _ in range(500):
        d = rng.randint(1, 8)
        f = Poly.exact([rng.randint(-10, 10) for _ in range(d)] + [1])
        try:
            j = component_index_12(f)
        except InvalidInputError:
            continue
        assert 0 <= j <= d // 2


# --- hyperplane pullback -------------------------------------------------------


def test_hyperplane_examples():
    sys = make_system(Family.POLY_R, [Z, Z - 1], 1)
    assert hyperplane_pullback(sys, [1, 1]) == 2 * Z - 1
    assert hyperplane_pullback(sys, [1, -1]) == Poly.exact([1])
    with pytest.raises(InvalidInputError):
        hyperplane_pullback(sys, [0, 0])
    with pytest.raises(InvalidInputError):
        hyperplane_pullback(sys, [1])


def test_hyperplane_degree_witness():
    rng = random.Random(6)
    for _ in range(10_000):
        d, m, n = rng.randint(1, 5), rng.randint(1, 3), rng.randint(1, 2)
        if (m, n) == (1, 1):
            m = 2
        polys = tuple(Poly.exact([rng.randint(-5, 5) for _ in range(d)] + [1]) for _ in range(m))
        sys = System(SpaceId(Family.POLY_R, d, m, n), polys)
        ws = [Fraction(rng.randint(-3, 3)) for _ in range(m * n)]
        if not any(ws):
            continue
        out = hyperplane_pullback(sys, ws)
        if sum(ws) != 0:
            assert out.degree == d
        else:
            assert out.degree < d


# --- electric field -------------------------------------------------------------


def test_electric_field_examples():
    vals, flagged = electric_field_samples([0], [1])
    assert vals == [2] and flagged == []
    vals, _ = electric_field_samples([1j, -1j], [0])
    assert vals[0] == pytest.approx(1)
    vals, _ = electric_field_samples([1, 2], [0])
    assert vals[0] == pytest.approx(-0.5)


def test_electric_field_flags_roots():
    vals, flagged = electric_field_samples([1, 2], [0, 1, 3, 2])
    assert flagged == [1, 3]
    assert len(vals) == 2
    with pytest.raises(InvalidInputError):
        electric_field_samples([1, 1], [0])
