import random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from sadic import (ContinuedFraction, DirectiveSequence, OstrowskiDigits, accepts_lasso, ostrowski_decode,
                   ostrowski_encode, partial_quotients, sturmian_directive, sturmian_prefix, theta,
                   weak_primitivity_automaton)
from sadic.adic import is_weakly_primitive
from sadic.errors import BoundaryError, BudgetExceeded, DigitRuleError
from sadic.sturmian import (Rational, Slope, _Affine, agreement_sweep, ar_generators, ar_names,
                            characteristic_prefix, check_digit_rules, directed_prefix,
                            directive_digits, directive_from_expansions, random_digits,
                            slope_from_directive_digits, word_intercept)
from sadic import library
from oracles import window_factors

GOLDEN = ContinuedFraction((), (1,))


def test_convergents_example():
    cf = ContinuedFraction((2, 1, 1), ())
    assert cf.convergents(3) == [(0, 1), (1, 2), (1, 3), (2, 5)]
    assert cf.value_fraction() == pytest.approx(0.4)


def test_parse_forms():
    assert ContinuedFraction.parse("2,1,3") == ContinuedFraction((2, 1, 3), ())
    assert ContinuedFraction.parse("2; 1") == ContinuedFraction((2,), (1,))
    assert ContinuedFraction.parse("2,1,1,...") == ContinuedFraction((2, 1), (1,))
    with pytest.raises(ValueError):
        ContinuedFraction((0,), (1,))


def test_theta_recurrence_and_signs():
    cf = ContinuedFraction((2, 3), (1, 4))
    th = [theta(cf, n) for n in range(-1, 12)]
    with mpmath.workdps(60):
        for n in range(1, 12):
            # θ_n = a_n θ_{n-1} + θ_{n-2}, alternating sign, shrinking
            assert abs(th[n + 1] - (cf.digit(n) * th[n] + th[n - 1])) < mpmath.mpf(10) ** -40
    for n in range(0, 12):
        assert (th[n + 1] > 0) == (n % 2 == 0)
        if n:
            assert abs(th[n + 1]) < abs(th[n])


def test_digit_rules():
    cf = ContinuedFraction((3, 2), (1,))
    check_digit_rules(cf, [2, 0, 1, 0])
    check_digit_rules(cf, [0, 2, 0, 1])
    with pytest.raises(DigitRuleError):
        check_digit_rules(cf, [3])  # b_1 < a_1
    with pytest.raises(DigitRuleError):
        check_digit_rules(cf, [0, 3])  # b_2 <= a_2
    with pytest.raises(DigitRuleError):
        check_digit_rules(cf, [1, 2])  # b_1 must be 0 before b_2 = a_2
    with pytest.raises(DigitRuleError):
        ostrowski_decode([1, 2], cf)


def test_decode_of_finite_digits_matches_sum():
    cf = ContinuedFraction((3, 2), (1,))
    b = [2, 0, 1, 0, 1]
    with mpmath.workdps(60):
        want = sum(bk * theta(cf, k - 1) for k, bk in enumerate(b, start=1))
        assert abs(ostrowski_decode(b, cf) - want) < mpmath.mpf(10) ** -40


def test_golden_ratio_round_trip_is_bounded_by_truncation_tail():
    rng = random.Random(3)
    with mpmath.workdps(60):
        eta = GOLDEN.mp()
        tail = abs(theta(GOLDEN, 39))
        worst = 0
        for _ in range(30):
            chi = -eta + mpmath.mpf(rng.random())
            b = ostrowski_encode(GOLDEN, chi, 40)
            worst = max(worst, abs(ostrowski_decode(b, GOLDEN) - chi))
        for chi in (-eta + mpmath.mpf(x) / 7 for x in (1, 3, 6)):
            # with enough digits the error falls with the tail
            assert abs(ostrowski_decode(ostrowski_encode(GOLDEN, chi, 150), GOLDEN) - chi) < 1e-25
    assert worst <= 2 * tail
    assert tail < 1e-8


def test_encode_rejects_out_of_range():
    with pytest.raises(ValueError):
        ostrowski_encode(GOLDEN, 0.9, 10)
    with pytest.raises(ValueError):
        ostrowski_encode(ContinuedFraction((2,), ()), 0.1, 10)


@settings(max_examples=30)
@given(st.lists(st.integers(1, 4), max_size=3), st.lists(st.integers(1, 4), min_size=1, max_size=2),
       st.integers(0, 10 ** 6))
def test_round_trip_of_valid_digits(pre, per, seed):
    """Encoding the value of valid periodic digits returns digits with the same value."""
    cf = ContinuedFraction(tuple(pre), tuple(per))
    digits = random_digits(cf, random.Random(seed))
    with mpmath.workdps(60):
        chi = ostrowski_decode(digits)
        b = ostrowski_encode(cf, chi, 60)
        check_digit_rules(cf, b)
        assert abs(ostrowski_decode(b, cf) - chi) <= 2 * abs(theta(cf, 59)) + mpmath.mpf(10) ** -30


def test_characteristic_word_matches_floor_formula():
    for cf in (GOLDEN, ContinuedFraction((2, 3), (1, 2)), ContinuedFraction((), (4,))):
        eta = oracles.cf_value(cf.prefix, cf.period)
        want = oracles.floor_characteristic(eta, 500)
        assert characteristic_prefix(cf, 500) == want
        assert sturmian_prefix(cf, 0, 500) == want
        assert sturmian_prefix(cf, 0, 500, variant="ceiling") == want
        assert directed_prefix(sturmian_directive(cf), 500) == want


def _floor_word(eta, chi, n):
    with mpmath.workdps(120):
        return tuple(int(mpmath.floor((i + 2) * eta + chi) - mpmath.floor((i + 1) * eta + chi))
                     for i in range(n))


def test_intercept_of_directed_word():
    rng = random.Random(7)
    for _ in range(15):
        cf = ContinuedFraction(tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 3))),
                               tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 2))))
        digits = random_digits(cf, rng)
        w = directed_prefix(sturmian_directive(cf, digits), 300)
        assert sturmian_prefix(cf, word_intercept(digits), 300) == w
        with mpmath.workdps(120):
            eta = oracles.cf_value(cf.prefix, cf.period)
            chi = ostrowski_decode(digits, prec=400)
            assert _floor_word(eta, -chi - 2 * eta, 300) == w


def test_boundary_is_reported():
    # η + (−η) = 0 is an integer that no bracket separates
    chi = _Affine(Rational(0), 1, Slope(GOLDEN), -1)
    with pytest.raises(BoundaryError):
        sturmian_prefix(GOLDEN, chi, 3)
    assert sturmian_prefix(Rational(0.5), 0, 4) == (1, 0, 1, 0)


def test_directive_digit_shift():
    cf = ContinuedFraction((3, 1), (2,))
    assert directive_digits(cf) == ((2, 1), (2,))
    assert slope_from_directive_digits(*directive_digits(cf)) == cf
    assert directive_digits(GOLDEN) == ((0,), (1,))


def test_directive_from_expansions():
    a = ((1, 2), (1,))
    seq = directive_from_expansions(a)
    assert list(seq.pre[:3]) == ["lambda0", "lambda1", "lambda1"]
    cf = slope_from_directive_digits(*a)
    assert directed_prefix(seq, 400) == characteristic_prefix(cf, 400)
    with pytest.raises(DigitRuleError):
        directive_from_expansions(a, ((2,), (0,)))
    # b_1 = 1 followed by b_2 = a_2 breaks the Ostrowski rules only when asked to check
    directive_from_expansions(a, ((1, 2), (0,)))
    with pytest.raises(DigitRuleError):
        directive_from_expansions(a, ((1, 2), (0,)), strict=True)


def test_weak_primitivity_automaton():
    W = weak_primitivity_automaton(2)
    names = ar_names(2)
    gens = ar_generators(2)
    rng = random.Random(2)
    for _ in range(60):
        pre = [rng.choice(names) for _ in range(rng.randint(0, 2))]
        per = [rng.choice(names) for _ in range(rng.randint(1, 4))]
        indices = {n[-1] for n in per}
        want = indices == {"0", "1"} and any(n.startswith("lambda") for n in per)
        assert accepts_lasso(W, pre, per) == want
        assert is_weakly_primitive(DirectiveSequence(pre, per, gens)) == (indices == {"0", "1"})


def test_arnoux_rauzy_complexity():
    gens = ar_generators(3)
    for period in (["lambda0", "lambda1", "lambda2"], ["lambda0", "rho1", "rho2", "lambda1"]):
        w = directed_prefix(DirectiveSequence([], period, gens), 3000)
        for n in range(1, 9):
            assert len(window_factors(w, n)) == 2 * n + 1


def test_partial_quotient_examples():
    subs = library.substitutions(2)
    blocks = partial_quotients(DirectiveSequence([], ["lambda0", "lambda1"], subs), 3)
    lam = subs["lambda0"].images, subs["lambda1"].images
    assert [(b.start, b.stop) for b in blocks] == [(0, 1), (2, 3), (4, 5)]
    assert blocks[0].substitution.images == ((0, 1, 0), (0, 1))
    assert lam[0] != lam[1]
    fib = partial_quotients(DirectiveSequence([], ["sigma_fib"], subs, letters=([], [0])), 2)
    assert fib[0].substitution.images == subs["sigma_fib"].power(2).images
    assert fib[0].letter == 0 and fib[1].start == 2
    with pytest.raises(BudgetExceeded):
        partial_quotients(DirectiveSequence([], ["lambda0"], subs), 1)


def test_agreement_sweep_detects_early_disagreement():
    reports, least = agreement_sweep(library.automaton("first-0"), 2, trials=8, seed=3)
    assert [r.N for r in reports] == [0, 1, 2]
    assert reports[0].disagreements
    assert least is not None and least >= 1
    assert all(r.rate == 1.0 for r in reports[least:])


def test_digits_validate():
    with pytest.raises(DigitRuleError):
        OstrowskiDigits(GOLDEN, (1,)).validate()
    OstrowskiDigits(ContinuedFraction((3,), (2,)), (2, 0), (1, 0)).validate()
