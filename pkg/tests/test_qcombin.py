import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlattice import (
    BoundReport,
    DomainError,
    ResourceLimitError,
    UnsupportedParametersError,
    ZsigmondyException,
    alt_sum,
    capital_N,
    ceil_log,
    g_of,
    h_of,
    is_prime,
    multiplicative_order,
    prime_power,
    primorial_prime_set,
    qbinom,
    qbinom_product,
    require_zsigmondy_prime,
    trial_factor,
    zsigmondy_exception,
    zsigmondy_prime,
)


class TestQbinom:
    def test_known_values(self):
        assert qbinom(4, 2, 2) == 35
        assert qbinom(3, 1, 2) == 7
        assert qbinom(4, 2, 3) == 130

    def test_rows(self):
        assert [qbinom(5, k, 2) for k in range(6)] == [1, 31, 155, 155, 31, 1]
        assert [qbinom(4, k, 3) for k in range(5)] == [1, 40, 130, 40, 1]
        assert [qbinom(3, k, 4) for k in range(4)] == [1, 21, 21, 1]
        assert [qbinom(3, k, 3) for k in range(4)] == [1, 13, 13, 1]

    def test_out_of_range_is_zero(self):
        assert qbinom(3, -1, 2) == 0
        assert qbinom(3, 4, 2) == 0

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            qbinom(-1, 0, 2)
        with pytest.raises(DomainError):
            qbinom(3, 1, 1)

    @given(st.integers(0, 12), st.integers(0, 12), st.sampled_from([2, 3, 4, 5, 7]))
    def test_symmetry(self, n, k, q):
        assert qbinom(n, k, q) == qbinom(n, n - k, q)

    @given(st.integers(0, 10), st.integers(0, 10), st.sampled_from([2, 3, 4, 5]))
    def test_recurrence_agrees_with_product_form(self, n, k, q):
        assert qbinom(n, k, q) == qbinom_product(n, k, q)

    @given(st.integers(1, 10), st.integers(1, 10), st.sampled_from([2, 3]))
    def test_pascal_recurrence(self, n, k, q):
        assert qbinom(n, k, q) == qbinom(n - 1, k - 1, q) + q ** k * qbinom(n - 1, k, q)


class TestAltSum:
    def test_zero_for_positive_n(self):
        for q in (2, 3, 4, 5):
            for n in range(1, 9):
                assert alt_sum(n, q) == 0

    def test_one_at_zero(self):
        for q in (2, 3, 4, 5):
            assert alt_sum(0, q) == 1


class TestCapitalN:
    def test_values(self):
        assert capital_N(3, 1, 1, 2) == 7
        assert capital_N(4, 3, 2, 2) == 15 + 35
        assert capital_N(2, 4, 1, 2) == 0

    @given(
        st.integers(0, 8), st.integers(0, 8), st.integers(1, 4), st.sampled_from([2, 3])
    )
    def test_matches_direct_sum(self, n, s, r, q):
        assert capital_N(n, s, r, q) == sum(qbinom(n, s - i, q) for i in range(r))

    def test_requires_positive_r(self):
        with pytest.raises(DomainError):
            capital_N(3, 1, 0, 2)


class TestPrimes:
    def test_is_prime_small(self):
        assert [p for p in range(2, 30) if is_prime(p)] == [
            2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
        ]
        assert not is_prime(1) and not is_prime(0) and not is_prime(-7)

    def test_is_prime_large(self):
        assert is_prime(2 ** 61 - 1)
        assert not is_prime(561)
        assert not is_prime(3215031751)

    def test_trial_factor(self):
        assert trial_factor(360) == ([2, 3, 5], 1)
        primes, cofactor = trial_factor(2 ** 4 * (10 ** 7 + 19), ceiling=10 ** 3)
        assert primes == [2] and cofactor == 10 ** 7 + 19

    def test_multiplicative_order(self):
        assert multiplicative_order(2, 7) == 3
        assert multiplicative_order(2, 5) == 4
        assert multiplicative_order(2, 11) == 10


ZSIGMONDY_TABLE = {
    2: {2: 3, 3: 7, 4: 5, 5: 31, 7: 127, 8: 17, 9: 73, 10: 11},
    3: {3: 13, 4: 5, 5: 11, 6: 7, 7: 1093, 8: 41, 9: 757, 10: 61},
    4: {2: 5, 3: 7, 4: 17, 5: 11, 6: 13, 7: 43, 8: 257, 9: 19, 10: 41},
    5: {2: 3, 3: 31, 4: 13, 5: 11, 6: 7, 7: 19531, 8: 313, 9: 19, 10: 521},
    7: {3: 19, 4: 5, 5: 2801, 6: 43, 7: 29, 8: 1201, 9: 37, 10: 11},
    8: {2: 3, 3: 73, 4: 5, 5: 31, 6: 19, 7: 127, 8: 17, 9: 262657, 10: 11},
    9: {2: 5, 3: 7, 4: 41, 5: 11, 6: 73, 7: 547, 8: 17, 9: 19, 10: 1181},
}


class TestZsigmondy:
    def test_exception_markers(self):
        assert zsigmondy_exception(2, 6) is not None
        assert zsigmondy_exception(2, 6).clause == "q_2_b_6"
        for q in (3, 7, 15, 31):
            marker = zsigmondy_exception(q, 2)
            assert marker is not None
            assert marker.clause == "q_plus_one_power_of_two"
        assert zsigmondy_exception(2, 2) is None
        assert zsigmondy_exception(5, 2) is None
        assert zsigmondy_exception(2, 5) is None

    def test_table(self):
        for q, row in ZSIGMONDY_TABLE.items():
            for b, expected in row.items():
                assert zsigmondy_prime(q, b) == expected, (q, b)

    def test_found_prime_has_exact_order(self):
        for q, row in ZSIGMONDY_TABLE.items():
            for b, p in row.items():
                assert multiplicative_order(q, p) == b

    def test_exceptional_pairs_return_marker(self):
        marker = zsigmondy_prime(2, 6)
        assert isinstance(marker, ZsigmondyException)
        marker = zsigmondy_prime(3, 2)
        assert isinstance(marker, ZsigmondyException)

    def test_require_raises_on_exception(self):
        with pytest.raises(UnsupportedParametersError):
            require_zsigmondy_prime(2, 6)
        with pytest.raises(UnsupportedParametersError) as info:
            require_zsigmondy_prime(7, 2)
        assert info.value.clause == "q_plus_one_power_of_two"
        assert require_zsigmondy_prime(2, 3) == 7

    def test_unfactorable_cofactor_reports_resource_limit(self):
        # q^b - 1 with two huge prime factors and a tiny ceiling cannot complete
        with pytest.raises(ResourceLimitError):
            zsigmondy_prime(2, 101, ceiling=10 ** 3)


class TestAuxiliaries:
    def test_primorial_prime_set(self):
        assert primorial_prime_set(2, 8) == [3, 5]
        assert primorial_prime_set(2, 2) == [3]
        assert primorial_prime_set(3, 100) == [5, 7, 11]

    def test_growth_functions(self):
        assert math.isclose(g_of(2, 8), 6.736548609705517, rel_tol=1e-12)
        assert h_of(2, 4) == 2.0
        # h is capped by g
        assert h_of(2, 10 ** 6) == g_of(2, 10 ** 6)

    def test_ceil_log(self):
        assert ceil_log(2, 4) == 2
        assert ceil_log(2, 5) == 3
        assert ceil_log(3, 27) == 3
        assert ceil_log(3, 28) == 4
        assert ceil_log(5, 1) == 0

    def test_prime_power(self):
        assert prime_power(9) == (3, 2)
        assert prime_power(8) == (2, 3)
        assert prime_power(7) == (7, 1)
        assert prime_power(12) is None
        assert prime_power(1) is None


class TestBoundReport:
    def test_validation(self):
        report = BoundReport("theorem_main", {"n": 3}, "both-disjuncts", 7, {})
        data = report.to_json_dict()
        assert data["bound"] == 7 and data["theorem_id"] == "theorem_main"
        with pytest.raises(DomainError):
            BoundReport("mystery", {}, "x", 1, {})
        with pytest.raises(DomainError):
            BoundReport("theorem_main", {}, "x", -1, {})
