"""Bound formulas against hand arithmetic; proof machinery against itself."""

import math

import numpy as np
import pytest

from alab.bounds import (
    grover_lower_bound,
    h_star,
    lemma1_experiment,
    lemma2_check,
    s_diagnostic,
    theorem1_lower_bound,
    theorem1_report,
    theorem2_experiment,
    theorem2_lower_bound,
)
from alab.errors import BudgetExceeded, NotCanonical
from alab.problems import CostFunction, grover_cost, hamming_cost, random_permutation, scramble
from alab.qstate import TimeDependentHamiltonian
from alab.hamiltonians import transverse_field_beginning

RNG = np.random.default_rng(43)


def linear_driver(n, T):
    """Bare (1-t/T) transverse-field driver for the algorithm form."""
    return TimeDependentHamiltonian(
        terms=((transverse_field_beginning(n), lambda t: 1.0 - t / T),),
        total_time=T,
    )


class TestTheorem1Formula:
    def test_hand_arithmetic(self):
        expected = (0.2 / 5.0) * math.sqrt(1024.0) - 2.0 * math.sqrt(0.2) / 5.0
        assert abs(theorem1_lower_bound(0.2, 5.0, 1024, 1) - expected) < 1e-12
        assert abs(expected - 1.101115) < 1e-6

    def test_vacuous_at_zero_success(self):
        assert theorem1_lower_bound(0.0, 2.0, 64, 1) == 0.0

    def test_vacuous_when_everything_is_ground(self):
        assert theorem1_lower_bound(1.0, 1.0, 16, 16) == -1.0

    def test_rejects_bad_ranges(self):
        with pytest.raises(ValueError):
            theorem1_lower_bound(1.5, 1.0, 4, 1)
        with pytest.raises(ValueError):
            theorem1_lower_bound(0.5, 0.0, 4, 1)
        with pytest.raises(ValueError):
            theorem1_lower_bound(0.5, 1.0, 4, 5)

    def test_report_comparison(self):
        rep = theorem1_report(0.2, 5.0, 1024, 1, measured_T=2.0)
        assert rep.satisfied is True
        rep2 = theorem1_report(0.2, 5.0, 1024, 1, measured_T=1.0)
        assert rep2.satisfied is False


class TestGroverFormula:
    def test_values(self):
        assert grover_lower_bound(4, 1.0) == 1.0
        assert grover_lower_bound(1024, 1.0) == 16.0

    def test_doubling_E_halves(self):
        assert grover_lower_bound(256, 2.0) == grover_lower_bound(256, 1.0) / 2


class TestHStar:
    def test_hamming_n2(self):
        # enumerate {0,1,1,2}: sum of squares 6, h* = sqrt(6/3) = sqrt(2)
        assert abs(h_star(hamming_cost(2)) - math.sqrt(2.0)) < 1e-12

    def test_grover_type(self):
        assert abs(h_star(grover_cost(3, 0)) - 1.0) < 1e-12

    def test_single_nonzero_value(self):
        vals = np.zeros(8)
        vals[5] = 3.0
        assert abs(h_star(CostFunction(3, vals)) - 3.0 / math.sqrt(7.0)) < 1e-12

    def test_not_canonical(self):
        with pytest.raises(NotCanonical):
            h_star(grover_cost(3, 2))  # minimum sits at z=2, not z=0

    def test_scramble_invariance_after_canonicalization(self):
        from alab.problems import canonicalize_for_theorem2

        cost = hamming_cost(3)
        perm = random_permutation(8, seed=3)
        scrambled = canonicalize_for_theorem2(scramble(cost, perm))
        assert abs(h_star(scrambled) - h_star(cost)) < 1e-12


class TestTheorem2Formula:
    def test_hand_arithmetic_n4(self):
        expected = math.sqrt(3.0) / (16.0 * math.sqrt(2.0)) - math.sqrt(0.5) / (
            4.0 * math.sqrt(2.0)
        )
        got = theorem2_lower_bound(1.0, 1.0, math.sqrt(2.0), 4)
        assert abs(got - expected) < 1e-12
        assert abs(got - (-0.048453)) < 1e-6

    def test_hand_arithmetic_large_N(self):
        got = theorem2_lower_bound(1.0, 1.0, 1.0, 10001)
        expected = 100.0 / 16.0 - math.sqrt(0.5) / 4.0
        assert abs(got - expected) < 1e-12
        assert abs(got - 6.073) < 1e-3

    def test_small_eps_vacuous(self):
        val = theorem2_lower_bound(1e-6, 1.0, 1.0, 1024)
        assert val < 0
        assert abs(val) < 1e-9

    def test_rejects_bad_ranges(self):
        with pytest.raises(ValueError):
            theorem2_lower_bound(0.0, 1.0, 1.0, 4)
        with pytest.raises(ValueError):
            theorem2_lower_bound(0.5, 1.0, 0.0, 4)


class TestSDiagnostic:
    def test_checks_pass_at_T2(self):
        diag = s_diagnostic(hamming_cost(3), E=1.5, total_time=2.0)
        assert diag.S[-1] < 1e-8
        checks = diag.checks()
        assert all(checks.values()), checks

    def test_near_saturation_regime(self):
        diag = s_diagnostic(hamming_cost(3), E=1.5, total_time=40.0, t_samples=17)
        assert diag.b > 0.99
        n_scaled_lhs = diag.S[0] / diag.N
        n_scaled_rhs = 2.0 * (1.0 - math.sqrt(1.0 - diag.b)) - 2.0 * math.sqrt(
            diag.b * diag.k / diag.N
        )
        assert n_scaled_lhs >= n_scaled_rhs - 1e-9
        assert diag.all_pass()

    def test_budget_guard(self):
        with pytest.raises(BudgetExceeded):
            s_diagnostic(hamming_cost(6), E=1.0, total_time=1.0)


class TestLemma2:
    def test_basis_states_example(self):
        e0 = np.array([1.0, 0.0])
        e1 = np.array([0.0, 1.0])
        holds, margin = lemma2_check([e0, e1], e0, b=1.0)
        assert holds
        # LHS = 2, RHS = 2 - 2*sqrt(2)
        assert abs(margin - (2.0 - (2.0 - 2.0 * math.sqrt(2.0)))) < 1e-12

    def test_hundred_random_ensembles(self):
        L, dim, b = 8, 16, 0.4
        for _ in range(100):
            states = []
            for i in range(L):
                v = RNG.standard_normal(dim) + 1j * RNG.standard_normal(dim)
                v = 0.2 * v / np.linalg.norm(v)
                v[i] += 1.0  # guarantee a large |<psi_i|i>|
                states.append(v / np.linalg.norm(v))
            phi = RNG.standard_normal(dim) + 1j * RNG.standard_normal(dim)
            phi /= np.linalg.norm(phi)
            holds, _ = lemma2_check(states, phi, b=b)
            assert holds

    def test_b_zero_always_holds(self):
        states = [np.array([0.0, 1.0]), np.array([1.0, 0.0])]
        holds, margin = lemma2_check(states, np.array([1.0, 0.0]), b=0.0)
        assert holds
        assert margin >= 2.0 * math.sqrt(2.0) - 2.0 - 1e-12

    def test_precondition_enforced(self):
        states = [np.array([0.0, 1.0]), np.array([0.0, 1.0])]
        with pytest.raises(ValueError):
            lemma2_check(states, np.array([1.0, 0.0]), b=0.9)


class TestLemma1:
    def test_zero_time(self):
        cost = CostFunction(2, [0.0, 1.0, 1.0, 2.0])
        driver = TimeDependentHamiltonian(
            terms=((transverse_field_beginning(2), lambda t: 1.0),), total_time=0.0
        )
        out = lemma1_experiment(cost, driver, lambda t: 0.0, 0.0)
        assert out.pair_sum == 0.0
        assert out.pair_sum <= out.bound

    @pytest.mark.parametrize("T", [0.5, 1.0, 2.0])
    def test_adiabatic_runs_below_bound(self, T):
        cost = CostFunction(2, [0.0, 1.0, 1.0, 2.0])
        out = lemma1_experiment(cost, linear_driver(2, T), lambda t, T=T: t / T, T)
        assert out.pair_sum <= out.bound
        assert abs(out.bound - 4.0 * out.h_star * T * 24.0 * math.sqrt(3.0)) < 1e-9

    def test_constant_zero_problem_term(self):
        cost = CostFunction(2, np.zeros(4))
        T = 1.0
        out = lemma1_experiment(cost, linear_driver(2, T), lambda t: t / T, T)
        assert out.pair_sum < 1e-20
        assert out.bound == 0.0

    def test_budget_guard(self):
        with pytest.raises(BudgetExceeded):
            lemma1_experiment(
                hamming_cost(3), linear_driver(3, 1.0), lambda t: t, 1.0
            )


class TestTheorem2Experiment:
    def test_adiabatic_N4(self):
        cost = hamming_cost(2)  # already canonical
        T = 1.0
        out = theorem2_experiment(cost, linear_driver(2, T), lambda t: t / T, T, b=0.2)
        assert out.report.satisfied is True
        assert 0.0 <= out.eps <= 1.0
        assert out.num_permutations == 24

    def test_deterministic_rerun(self):
        cost = hamming_cost(2)
        T = 0.5
        a = theorem2_experiment(cost, linear_driver(2, T), lambda t: t / T, T, b=0.2)
        b = theorem2_experiment(cost, linear_driver(2, T), lambda t: t / T, T, b=0.2)
        assert a.eps == b.eps
        assert a.per_permutation_success == b.per_permutation_success

    def test_eps_order_independent(self):
        cost = hamming_cost(2)
        T = 0.5
        out = theorem2_experiment(cost, linear_driver(2, T), lambda t: t / T, T, b=0.2)
        items = list(out.per_permutation_success.values())
        RNG.shuffle(items)
        assert sum(items) / len(items) == out.eps
