import numpy as np
import pytest

from ionic_cdw.certify import model_state
from ionic_cdw.lattice import HORIZONTAL, VERTICAL
from ionic_cdw.model import ModelParams, build_T_W
from ionic_cdw.rp import (Reflection, antiunitary_horizontal, antiunitary_vertical, check_dls, check_rp,
                          chessboard_modified, chessboard_standard, cone_element, ising_ring,
                          ising_ring_bruteforce, lattice_row_functional, lemma_trace_residual, random_antiunitary,
                          reflection_positive_cone_check, split_ising_bruteforce, split_ising_ring)
from ionic_cdw.thermal import Gibbs

P = ModelParams(1.0, 0.5, 1.0, 2.0, 2.0)


@pytest.fixture(scope="module")
def refls(torus1, fock1):
    return {k: Reflection(torus1, k, fock1) for k in (VERTICAL, HORIZONTAL)}


def cplx(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


@pytest.mark.parametrize("kind", [VERTICAL, HORIZONTAL])
def test_defining_relations(refls, kind):
    r = refls[kind]
    assert r.residual <= 1e-10
    assert np.array_equal(r.theta(r.left.vacuum()), r.right.vacuum())


def test_public_constructors(torus1, fock1):
    assert antiunitary_vertical(torus1, fock1).U.shape == (16, 16)
    assert antiunitary_horizontal(torus1, fock1).U.shape == (16, 16)


@pytest.mark.parametrize("kind", [VERTICAL, HORIZONTAL])
def test_antiunitarity(refls, kind, rng):
    th = refls[kind].theta
    for _ in range(10):
        phi, psi = rng.normal(size=(2, 16)) + 1j * rng.normal(size=(2, 16))
        assert abs(np.vdot(th(phi), th(psi)) - np.conj(np.vdot(phi, psi))) <= 1e-12
        assert np.allclose(th.inverse(th(psi)), psi, atol=1e-12)


@pytest.mark.parametrize("kind", [VERTICAL, HORIZONTAL])
def test_half_terms_reflect(refls, kind):
    r = refls[kind]
    d = r.decomposition(P)
    assert np.abs(d["T_R"] - r.theta.conjugate(d["T_L"])).max() <= 1e-10
    assert np.abs(d["W_R"] - r.theta.conjugate(d["W_L"])).max() <= 1e-10


@pytest.mark.parametrize("kind", [VERTICAL, HORIZONTAL])
def test_decomposition_reassembles(refls, kind):
    r = refls[kind]
    d = r.decomposition(P)
    T, W = build_T_W(P, r.torus, r.fock)
    IL, IR = np.eye(r.left.dim), np.eye(r.right.dim)
    assert np.abs(r.from_product(np.kron(d["T_L"], IR) + np.kron(IL, d["T_R"])) + d["T_LR"] - T).max() <= 1e-10
    assert np.abs(r.from_product(np.kron(d["W_L"], IR) + np.kron(IL, d["W_R"])) + d["W_LR"] - W).max() <= 1e-10


@pytest.mark.parametrize("kind", [VERTICAL, HORIZONTAL])
def test_crossing_terms_from_reflected_operators(refls, kind):
    r = refls[kind]
    d = r.decomposition(P)
    T_u, W_u = r.reflected_crossing(P, signed=False)
    T_s, _ = r.reflected_crossing(P, signed=True)
    assert np.abs(W_u - d["W_LR"]).max() <= 1e-10
    assert np.abs(T_s - d["T_LR"]).max() <= 1e-10
    # a uniform sign does not reproduce the crossing pairing: bonds whose even
    # end is in the first half come with the opposite sign
    assert np.abs(T_u - d["T_LR"]).max() > 1.0


def test_check_rp_trivial_cases(refls, rng):
    r = refls[VERTICAL]
    rho4 = r.product_density(model_state(P).gibbs.rho)
    one = check_rp(np.eye(16), np.eye(16), r, rho4)
    assert abs(one.aa - 1) < 1e-12
    A = cplx(rng, 16)
    same = check_rp(A, A, r, rho4)
    assert abs(same.schwarz_slack) <= 1e-12 * same.scale
    with pytest.raises(ValueError):
        check_rp(np.eye(4), np.eye(4), r, rho4)


def test_pair_expectation_matches_full_trace(refls, rng):
    r = refls[HORIZONTAL]
    rho = model_state(P).gibbs.rho
    rho4 = r.product_density(rho)
    A, B = cplx(rng, 16), cplx(rng, 16)
    assert abs(r.pair_expectation(A, B, rho4) - np.trace(r.pair(A, B) @ rho)) < 1e-12
    G = r.positivity_form(rho4)
    assert abs(A.ravel() @ G @ B.conj().ravel() - r.pair_expectation(A, B, rho4)) < 1e-12


@pytest.mark.parametrize("kind", [VERTICAL, HORIZONTAL])
def test_flipped_crossing_control_is_positive(refls, kind):
    r = refls[kind]
    rho = Gibbs(r.flipped_crossing_hamiltonian(P), P.beta).rho
    G = r.positivity_form(r.product_density(rho))
    assert np.linalg.eigvalsh(G)[0] >= -1e-10


@pytest.mark.parametrize("kind", [VERTICAL, HORIZONTAL])
def test_transformed_hamiltonian_state_is_not_positive(refls, kind):
    # the thermal state of T + W itself has a negative direction for both reflections
    r = refls[kind]
    G = r.positivity_form(r.product_density(model_state(P).gibbs.rho))
    assert np.linalg.eigvalsh(G)[0] < -0.1


def test_dls_basic(rng):
    th = random_antiunitary(3, rng)
    A = cplx(rng, 3)
    A = A + A.conj().T
    rep = check_dls(A, [cplx(rng, 3)], np.eye(3), cplx(rng, 3), th)
    assert abs(rep.cc - 1) < 1e-12 and rep.passed
    with pytest.raises(ValueError):
        check_dls(cplx(rng, 3), [], np.eye(3), np.eye(3), th)


def test_dls_random_trials(rng):
    for _ in range(100):
        d = int(rng.integers(2, 5))
        th = random_antiunitary(d, rng)
        A = cplx(rng, d)
        A = (A + A.conj().T) / 2
        rep = check_dls(A, [cplx(rng, d) for _ in range(int(rng.integers(0, 4)))], cplx(rng, d), cplx(rng, d), th)
        assert rep.passed


def test_trace_lemma(rng):
    for _ in range(20):
        th = random_antiunitary(3, rng)
        assert lemma_trace_residual(cplx(rng, 3), cplx(rng, 3), th) <= 1e-12


def test_cone_checks(rng):
    th = random_antiunitary(2, rng)
    Es = [cplx(rng, 2) for _ in range(3)]
    X = cone_element([1.0, 0.0, 2.0], Es, th)
    assert np.trace(X).real >= 0
    with pytest.raises(ValueError):
        cone_element([1.0, -0.1], Es[:2], th)
    rep = reflection_positive_cone_check([1.0, 0.5, 2.0], Es, th, [([0.3, 0.7], Es[1:])],
                                         Bs=[0.3 * cplx(rng, 2)], rng=rng)
    assert rep.passed
    r = rep.trotter_residuals
    assert r[-1] < r[0] / 8


def test_ising_rings_match_brute_force(rng):
    om = ising_ring(4, 0.6, 0.2)
    cells = [om.sample(rng) for _ in range(4)]
    assert abs(om(*cells) - ising_ring_bruteforce(cells, 0.6, 0.2)) < 1e-12
    sm = split_ising_ring(5, 0.6, 0.2)
    cells = [sm.sample(rng) for _ in range(5)]
    assert abs(sm(*cells) - split_ising_bruteforce(cells, 0.6, 0.2)) < 1e-12
    assert om.self_test(rng) == [] and sm.self_test(rng) == []
    with pytest.raises(ValueError):
        ising_ring(4, -0.1)
    with pytest.raises(ValueError):
        om(*cells[:3])


def test_standard_chessboard_ring(rng):
    om = ising_ring(4, 0.6, 0.2)
    for _ in range(50):
        rep = chessboard_standard(om, [om.sample(rng) for _ in range(4)], rng)
        assert rep.passed
    a = np.array([1.0, 2.0])
    rep = chessboard_standard(om, [a] * 4, rng)
    assert abs(rep.slack) < 1e-12


def test_standard_chessboard_lattice_rows(torus1, fock1, rng):
    om = lattice_row_functional(model_state(P).gibbs.rho_diag, torus1, fock1)
    assert om.self_test(rng) == []
    for _ in range(10):
        rep = chessboard_standard(om, [om.sample(rng) for _ in range(2)], rng)
        assert rep.passed


def test_modified_chessboard_hypotheses_and_equality(rng):
    om = split_ising_ring(5, 0.6, 0.2)
    J, Tp, Tm = om.J, om.T_plus, om.T_minus
    for _ in range(30):
        A = [om.sample(rng) for _ in range(5)]
        b = om(*A[:2], Tp(A[2]), J(A[1]), J(A[0]))
        c = om(J(A[4]), J(A[3]), Tm(A[2]), A[3], A[4])
        assert b.real >= 0 and c.real >= 0
        assert abs(om(*A)) <= np.sqrt(b.real * c.real) * (1 + 1e-10)
        assert chessboard_modified(om, A, rng).chess2_residual <= 1e-10
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    inv = (a, np.conj(a))
    rep = chessboard_modified(om, [inv] * 5, rng)
    assert abs(rep.relative_slack) < 1e-10


def test_modified_chessboard_fails_for_unbalanced_cells(rng):
    # hypotheses (cyclicity, idempotence, positivity, Schwarz) hold, yet the
    # product bound fails: scaling the left half of every cell by lam
    # multiplies the left side by lam^5 and the bound by lam^4
    om = split_ising_ring(5, 0.6, 0.2)
    lam = 2.0
    A = (np.full(2, lam + 0j), np.ones(2, dtype=complex))
    rep = chessboard_modified(om, [A] * 5, rng)
    assert rep.assumptions == []
    assert abs(rep.lhs - lam ** 5) < 1e-9 and abs(rep.rhs - lam ** 4) < 1e-9
    assert not rep.passed


def test_modified_chessboard_argument_checks(rng):
    om = ising_ring(4)
    with pytest.raises(ValueError):
        chessboard_modified(om, [om.sample(rng) for _ in range(4)])
    three = split_ising_ring(3)
    with pytest.raises(ValueError):
        chessboard_modified(three, [three.sample(rng) for _ in range(3)])
