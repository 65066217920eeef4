"""Exact matrix algebra and Perron eigendata against independent oracles."""

from fractions import Fraction

import numpy as np
import pytest
import sympy

from endperiodic import (
    ConvergenceError,
    IntMatrix,
    InvalidInputError,
    PreconditionError,
    block_lift,
    char_poly,
    determinant,
    graph_period,
    is_irreducible,
    is_primitive,
    largest_real_root,
    parse_matrix_text,
    perron_eigendata,
    spectral_radius_exact,
)
from endperiodic.spectral import is_block_lift_of, wielandt_bound

from conftest import RUNNING_ROWS, random_irreducible_matrices


def _sympy_charpoly_coeffs(M: IntMatrix) -> list[int]:
    """Monic characteristic polynomial coefficients, ascending, via sympy."""
    x = sympy.symbols("x")
    poly = sympy.Matrix(M.to_lists()).charpoly(x)
    coeffs = [int(c) for c in poly.all_coeffs()]  # descending, monic
    return coeffs[::-1]


def _fraction_determinant(M: IntMatrix) -> int:
    """Gaussian elimination over Fractions."""
    n = M.n
    a = [[Fraction(M[i, j]) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] * inv
            for c in range(col, n):
                a[r][c] -= factor * a[col][c]
    assert det.denominator == 1
    return int(det)


class TestIntMatrix:
    def test_validation(self):
        with pytest.raises(InvalidInputError):
            IntMatrix.from_rows([[1, 2], [3]])
        with pytest.raises(InvalidInputError):
            IntMatrix.from_rows([[-1]])
        with pytest.raises(InvalidInputError):
            IntMatrix.from_rows([])

    def test_parse_text_rows(self):
        M = parse_matrix_text("0 1\n2 0\n")
        assert M.to_lists() == [[0, 1], [2, 0]]

    def test_parse_text_json(self):
        M = parse_matrix_text("[[0, 1], [2, 0]]")
        assert M.to_lists() == [[0, 1], [2, 0]]

    def test_digraph_arcs(self):
        M = IntMatrix.from_rows([[0, 2], [1, 0]])
        g = M.digraph()
        # arc v_j -> v_i with multiplicity m_ij
        assert g.multiplicity[0][1] == 2
        assert g.multiplicity[1][0] == 1


class TestIrreducibility:
    def _oracle_irreducible(self, M: IntMatrix) -> bool:
        # irreducible iff A + A^2 + ... + A^n is positive elementwise
        a = np.array(M.to_lists(), dtype=bool)
        power = a.copy()
        total = a.copy()
        for _ in range(M.n - 1):
            power = power @ a
            total |= power
        return bool(total.all())

    def test_against_boolean_power_oracle(self):
        for M in random_irreducible_matrices(40, seed=7):
            assert self._oracle_irreducible(M)
        rng = np.random.default_rng(8)
        seen_reducible = 0
        for _ in range(300):
            n = int(rng.integers(1, 5))
            M = IntMatrix.from_rows(rng.integers(0, 2, size=(n, n)).tolist())
            assert is_irreducible(M) == self._oracle_irreducible(M)
            seen_reducible += not is_irreducible(M)
        assert seen_reducible > 0

    def test_primitivity_wielandt_oracle(self):
        rng = np.random.default_rng(9)
        checked = 0
        for M in random_irreducible_matrices(60, seed=9):
            a = np.array(M.to_lists(), dtype=object)
            power = np.linalg.matrix_power(a, wielandt_bound(M.n))
            assert is_primitive(M) == bool((power > 0).all())
            checked += 1
        assert checked == 60

    def test_graph_period_cycle(self):
        # 3-cycle has period 3 and is imprimitive
        M = IntMatrix.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
        assert is_irreducible(M)
        assert graph_period(M) == 3
        assert not is_primitive(M)

    def test_graph_period_requires_irreducible(self):
        M = IntMatrix.from_rows([[1, 1], [0, 1]])
        with pytest.raises(PreconditionError):
            graph_period(M)


class TestCharPoly:
    def test_running_example(self, running_matrix):
        poly = char_poly(running_matrix)
        # ascending: -2 - x - 2x^2 + 0x^3 + x^4
        assert list(poly.coefficients) == [-2, -1, -2, 0, 1]
        assert determinant(running_matrix) == -2

    def test_against_sympy(self):
        for M in random_irreducible_matrices(40, seed=11):
            assert list(char_poly(M).coefficients) == _sympy_charpoly_coeffs(M)

    def test_determinant_against_fraction_elimination(self):
        rng = np.random.default_rng(12)
        for _ in range(60):
            n = int(rng.integers(1, 5))
            M = IntMatrix.from_rows(rng.integers(0, 4, size=(n, n)).tolist())
            assert determinant(M) == _fraction_determinant(M)


class TestLargestRealRoot:
    def test_against_numpy_roots(self):
        for M in random_irreducible_matrices(40, seed=13):
            coeffs = list(char_poly(M).coefficients)
            roots = np.roots(coeffs[::-1])
            real = [r.real for r in roots if abs(r.imag) < 1e-9]
            assert largest_real_root(coeffs) == pytest.approx(max(real), abs=1e-8)

    def test_non_squarefree(self, running_matrix):
        # blockdiag(M, M) squares the characteristic polynomial
        n = running_matrix.n
        rows = [list(r) + [0] * n for r in running_matrix.entries]
        rows += [[0] * n + list(r) for r in running_matrix.entries]
        big = IntMatrix.from_rows(rows)
        assert spectral_radius_exact(big) == pytest.approx(
            spectral_radius_exact(running_matrix), abs=1e-11
        )


class TestPerronEigendata:
    def test_running_example_values(self, running_matrix):
        eigen = perron_eigendata(running_matrix)
        assert eigen.lam == pytest.approx(1.785370843671, abs=1e-9)
        assert eigen.residual <= 1e-9
        for got, want in zip(eigen.eta, (0.31, 0.74, 0.56, 1.0)):
            assert got == pytest.approx(want, abs=0.01)
        for got, want in zip(eigen.omega, (1.19, 1.12, 0.67, 1.0)):
            assert got == pytest.approx(want, abs=0.01)

    def test_normalization_and_equations(self):
        for M in random_irreducible_matrices(50, seed=14):
            eigen = perron_eigendata(M)
            a = np.array(M.to_lists(), dtype=float)
            eta = np.array(eigen.eta)
            omega = np.array(eigen.omega)
            assert eta[-1] == pytest.approx(1.0, abs=1e-12)
            assert omega[-1] == pytest.approx(1.0, abs=1e-12)
            assert np.max(np.abs(a @ eta - eigen.lam * eta)) <= 1e-8
            assert np.max(np.abs(omega @ a - eigen.lam * omega)) <= 1e-8

    def test_against_numpy_eig(self):
        for M in random_irreducible_matrices(30, seed=15):
            eigen = perron_eigendata(M)
            lam_np = max(abs(v) for v in np.linalg.eigvals(
                np.array(M.to_lists(), dtype=float)))
            assert eigen.lam == pytest.approx(lam_np, abs=1e-8)

    def test_reducible_rejected(self):
        M = IntMatrix.from_rows([[1, 1], [0, 1]])
        with pytest.raises(PreconditionError):
            perron_eigendata(M)

    def test_imprimitive_converges(self):
        # pure cycle times 2 on one arc: lambda = 2^(1/3), period-3 graph
        M = IntMatrix.from_rows([[0, 0, 2], [1, 0, 0], [0, 1, 0]])
        eigen = perron_eigendata(M)
        assert eigen.lam == pytest.approx(2 ** (1 / 3), abs=1e-9)

    def test_json_round_trip(self, running_matrix):
        from endperiodic import PerronData

        eigen = perron_eigendata(running_matrix)
        back = PerronData.from_json_dict(eigen.to_json_dict())
        assert back.lam == pytest.approx(eigen.lam, abs=1e-14)
        assert back.eta == pytest.approx(eigen.eta, abs=1e-14)

    def test_unreasonable_tolerance_raises(self):
        M = IntMatrix.from_rows([[0, 1], [1, 1]])
        with pytest.raises(ConvergenceError):
            perron_eigendata(M, tol=1e-300)


class TestBlockLift:
    def test_structure(self):
        M = IntMatrix.from_rows([[2]])
        L = block_lift(M, 3)
        assert L.to_lists() == [[0, 0, 2], [1, 0, 0], [0, 1, 0]]
        assert is_block_lift_of(L, 3)

    def test_root_relation(self):
        for k in (2, 3, 4):
            L = block_lift(IntMatrix.from_rows([[2]]), k)
            rho = spectral_radius_exact(L)
            assert rho**k == pytest.approx(2.0, abs=1e-9)
            assert is_irreducible(L)
            assert not is_primitive(L)

    def test_invalid_k(self):
        with pytest.raises(InvalidInputError):
            block_lift(IntMatrix.from_rows([[2]]), 0)
