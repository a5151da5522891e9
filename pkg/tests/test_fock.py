import numpy as np
import pytest

from thermofock import fock


def test_layout_validation():
    layout = fock.ModeLayout(8)
    assert layout.dim == 8
    assert layout.doubled().dim == 64
    assert layout.doubled().single() == layout
    with pytest.raises(fock.LayoutError):
        fock.ModeLayout(1)
    with pytest.raises(fock.LayoutError):
        fock.ModeLayout(8, modes=3)
    with pytest.raises(fock.LayoutError):
        fock.ModeLayout(8.0)


def test_ladder_matrix_elements():
    layout = fock.ModeLayout(6)
    a = fock.annihilation(layout).mat
    # a|n> = sqrt(n)|n-1>
    for n in range(1, 6):
        assert a[n - 1, n] == pytest.approx(np.sqrt(n))
    assert np.count_nonzero(a) == 5
    np.testing.assert_array_equal(fock.creation(layout).mat, a.conj().T)


def test_number_operator_diagonal():
    layout = fock.ModeLayout(7)
    np.testing.assert_array_equal(
        fock.number(layout).mat, np.diag(np.arange(7, dtype=complex))
    )


def test_commutator_is_identity_on_interior():
    layout = fock.ModeLayout(12)
    a = fock.annihilation(layout)
    ad = fock.creation(layout)
    comm = fock.multiply(a, ad).mat - fock.multiply(ad, a).mat
    np.testing.assert_allclose(comm[:11, :11], np.eye(11), atol=1e-13)
    # the top level absorbs the truncation: [a, a+] there is -(N-1), not 1
    assert comm[11, 11] == pytest.approx(-11.0)


def test_number_equals_ladder_product():
    layout = fock.ModeLayout(30)
    a = fock.annihilation(layout)
    np.testing.assert_allclose(
        fock.multiply(fock.dagger(a), a).mat, fock.number(layout).mat, atol=1e-12
    )


def test_fock_state_indexing():
    layout = fock.ModeLayout(5)
    assert fock.fock_state(layout, 3).vec[3] == 1.0
    two = layout.doubled()
    vec = fock.fock_state(two, (2, 4)).vec
    assert vec[2 * 5 + 4] == 1.0
    assert np.count_nonzero(vec) == 1
    with pytest.raises(fock.LayoutError):
        fock.fock_state(layout, 5)
    with pytest.raises(fock.LayoutError):
        fock.fock_state(layout, (1, 2))
    with pytest.raises(fock.LayoutError):
        fock.fock_state(two, 3)
    with pytest.raises(fock.LayoutError):
        fock.fock_state(two, (1, 5))


def test_tensor_is_system_major():
    layout = fock.ModeLayout(3)
    num = fock.number(layout)
    eye = fock.identity(layout)
    left = fock.tensor(num, eye).mat
    # system-major ordering: index = n_sys * cutoff + n_tilde
    np.testing.assert_array_equal(
        np.diag(left).real, np.repeat(np.arange(3.0), 3)
    )
    right = fock.tensor(eye, num).mat
    np.testing.assert_array_equal(np.diag(right).real, np.tile(np.arange(3.0), 3))


def test_embedded_single_mode_operators_match_tensor():
    layout = fock.ModeLayout(4)
    two = layout.doubled()
    a = fock.annihilation(layout)
    eye = fock.identity(layout)
    np.testing.assert_array_equal(
        fock.annihilation(two, fock.SYSTEM).mat, fock.tensor(a, eye).mat
    )
    np.testing.assert_array_equal(
        fock.annihilation(two, fock.TILDE).mat, fock.tensor(eye, a).mat
    )


def test_operator_shape_and_finite_checks():
    layout = fock.ModeLayout(4)
    with pytest.raises(fock.LayoutError):
        fock.Operator(layout, np.eye(3))
    with pytest.raises(fock.StateError):
        fock.Operator(layout, np.full((4, 4), np.nan))


def test_density_matrix_validation():
    layout = fock.ModeLayout(4)
    good = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    rho = fock.DensityMatrix(layout, good)
    assert rho.trace_tol == fock.DEFAULT_TRACE_TOL

    bad_trace = np.diag([0.4, 0.3, 0.2, 0.2]).astype(complex)
    with pytest.raises(fock.StateError, match="trace"):
        fock.DensityMatrix(layout, bad_trace)
    # the same matrix is accepted once the tolerance admits the deficit
    fock.DensityMatrix(layout, bad_trace, trace_tol=0.2)

    skew = good.copy()
    skew[0, 1] = 0.1j
    with pytest.raises(fock.StateError, match="hermitian"):
        fock.DensityMatrix(layout, skew)


def test_density_matrix_positivity_check():
    layout = fock.ModeLayout(3)
    rho = fock.DensityMatrix(layout, np.diag([1.5, -0.5, 0.0]).astype(complex))
    assert rho.min_eigenvalue() == pytest.approx(-0.5)
    with pytest.raises(fock.StateError, match="positive"):
        rho.check_positive()


def test_pure_state_norm_validation():
    layout = fock.ModeLayout(4)
    vec = np.zeros(4, dtype=complex)
    vec[0] = 0.9
    with pytest.raises(fock.StateError, match="norm"):
        fock.PureState(layout, vec)
    fock.PureState(layout, vec, norm_tol=0.2)


def test_outer_builds_projector():
    layout = fock.ModeLayout(4)
    vec = np.array([0.6, 0.8j, 0.0, 0.0], dtype=complex)
    psi = fock.PureState(layout, vec)
    rho = fock.outer(psi)
    np.testing.assert_allclose(rho.mat, np.outer(vec, vec.conj()), atol=1e-15)
    assert fock.purity(rho) == pytest.approx(1.0)


def test_partial_trace_of_product_state():
    layout = fock.ModeLayout(6)
    rng = np.random.default_rng(11)

    def random_density(n):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = m @ m.conj().T
        return m / m.trace()

    rho_a = random_density(6)
    rho_b = random_density(6)
    joint = fock.DensityMatrix(layout.doubled(), np.kron(rho_a, rho_b))
    np.testing.assert_allclose(
        fock.partial_trace(joint, over=fock.TILDE).mat, rho_a, atol=1e-13
    )
    np.testing.assert_allclose(
        fock.partial_trace(joint, over=fock.SYSTEM).mat, rho_b, atol=1e-13
    )


def test_partial_trace_requires_two_modes():
    layout = fock.ModeLayout(4)
    rho = fock.DensityMatrix(layout, np.eye(4, dtype=complex) / 4)
    with pytest.raises(fock.LayoutError):
        fock.partial_trace(rho, over=fock.TILDE)


def test_expectation_and_trace():
    layout = fock.ModeLayout(5)
    pops = np.array([0.5, 0.25, 0.15, 0.07, 0.03])
    rho = fock.DensityMatrix(layout, np.diag(pops).astype(complex))
    val = fock.expectation(rho, fock.number(layout))
    assert val.real == pytest.approx(np.dot(pops, np.arange(5)))
    assert abs(val.imag) < 1e-15
    assert fock.trace(rho).real == pytest.approx(1.0)


def test_matrix_exponential_of_nilpotent_is_polynomial():
    layout = fock.ModeLayout(4)
    ad = fock.creation(layout).mat
    lam = 0.3
    series = np.eye(4, dtype=complex)
    term = np.eye(4, dtype=complex)
    for k in range(1, 4):
        term = term @ (lam * ad) / k
        series = series + term
    got = fock.matrix_exponential(fock.Operator(layout, lam * ad)).mat
    np.testing.assert_allclose(got, series, atol=1e-14)


def test_trace_distance_of_basis_projectors():
    layout = fock.ModeLayout(4)
    p0 = fock.outer(fock.fock_state(layout, 0))
    p1 = fock.outer(fock.fock_state(layout, 1))
    assert fock.trace_distance(p0, p1) == pytest.approx(1.0)
    assert fock.trace_distance(p0, p0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize(
    "theta, expected",
    [
        (0.0, fock.CUTOFF_MIN),
        (0.703414556873647626, 33),   # tau0 = 1
        (1.243608860526965691, 97),   # tau0 = 3
        (0.191170919069292431, 10),   # tau0 = 0.3
        (5.0, fock.CUTOFF_MAX),
    ],
)
def test_default_cutoff(theta, expected):
    assert fock.default_cutoff(theta) == expected
