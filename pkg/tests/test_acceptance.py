"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` (the lines are printed even
without ``-s``) or directly with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from sadic import (AdicContext, ContinuedFraction, DirectiveSequence, Substitution,  # noqa: E402
                   build_ar_acceptance_automaton, build_semigroup, compose, congenial_augmentations,
                   decide_up, library, morphic_language_dfa, ostrowski_decode, ostrowski_encode)
from sadic.adic import generated_word, has_recurring_left_proper, is_weakly_primitive  # noqa: E402
from sadic.algebra import SubstitutionAlgebra, compose_classes  # noqa: E402
from sadic.crosscheck import random_automaton, random_buchi, run_suite  # noqa: E402
from sadic.omega import accepts_lasso  # noqa: E402
from sadic.sturmian import (agreement_experiment, ar_generators, ar_names, check_digit_rules,  # noqa: E402
                            directed_prefix, sturmian_directive)
from sadic.words import INFINITE, LazyWord, factors, recurrence  # noqa: E402


@pytest.fixture
def report(request):
    """Yield a callable that prints one line outside pytest's capture."""
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def emit(line):
        if capman is not None:
            with capman.global_and_fixture_disabled():
                print("\n" + line)
        else:
            print(line)
    return emit


@contextmanager
def criterion(emit, number: int, title: str, limit: float):
    """Time the block, print the verdict line, re-raise failures."""
    state = {"detail": ""}
    start = time.perf_counter()
    try:
        yield state
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        emit(f"[FAIL] criterion {number} {title}: {exc!s:.200} ({elapsed:.1f}s)")
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed <= limit
    emit(f"[{'PASS' if ok else 'FAIL'}] criterion {number} {title}: {state['detail']} "
         f"({elapsed:.1f}s, limit {limit:.0f}s)")
    assert ok, f"criterion {number} took {elapsed:.1f}s > {limit}s"


def _random_substitution(rng, d, max_len=3):
    return Substitution(tuple(tuple(rng.randrange(d) for _ in range(rng.randint(1, max_len)))
                              for _ in range(d)))


# -- 1 -----------------------------------------------------------------------------------

def test_cross_pipeline_equivalence(report):
    with criterion(report, 1, "cross-pipeline equivalence", 300) as st:
        summary = run_suite(200, seed=2024)
        counts = ", ".join(f"{k}={v}" for k, v in sorted(summary.pipeline_counts.items()))
        st["detail"] = f"{summary.passed}/{summary.cases} cases agree ({counts})"
        assert summary.cases == 200
        assert not summary.failures, summary.lines()
        # every pipeline has to be exercised
        assert {"generated", "directed", "morphic", "lasso"} <= set(summary.pipeline_counts)


# -- 2 -----------------------------------------------------------------------------------

def test_homomorphism_law(report):
    with criterion(report, 2, "homomorphism law", 120) as st:
        rng = random.Random(7)
        automata = [library.automaton(n) for n in ("inf-1s", "no-11", "contains-11", "eventually-0s", "first-1")]
        automata += [random_buchi(rng, 3) for _ in range(2)]
        pairs = 0
        for A in automata:
            alg = SubstitutionAlgebra(build_semigroup(A))
            for _ in range(72):
                s, m = _random_substitution(rng, 2), _random_substitution(rng, 2)
                assert alg.class_of(compose(s, m)) == compose_classes(alg.class_of(s), alg.class_of(m)), (s, m)
                pairs += 1
        st["detail"] = f"{pairs} pairs x {len(automata)} automata, 0 failures"
        assert pairs >= 500


# -- 3 -----------------------------------------------------------------------------------

def test_fibonacci_ground_truths(report):
    with criterion(report, 3, "Fibonacci ground truths", 10) as st:
        subs = library.substitutions(2)
        fib = DirectiveSequence([], ["sigma_fib"], subs, letters=([], [0]))
        verdicts = {name: decide_up(fib, library.automaton(name)) for name in ("no-11", "inf-1s", "eventually-0s")}
        assert verdicts == {"no-11": True, "inf-1s": True, "eventually-0s": False}

        w = oracles.fibonacci_prefix(10_000)
        assert tuple(map(int, w[:2000])) == tuple(generated_word(fib).prefix(2000))
        assert "11" not in w  # factor scan
        R = oracles.window_recurrence(w, 1)
        # every window of length R holds a 1, so 1s recur and 0s never take over
        assert all("1" in w[i:i + R] for i in range(len(w) - R + 1))
        assert recurrence(LazyWord(lambda n: tuple(map(int, oracles.fibonacci_prefix(n))), INFINITE),
                          lambda n: n + 1, 1) == R
        st["detail"] = f"verdicts {verdicts}; 10^4 prefix has no 11, R(1)={R}"


# -- 4 -----------------------------------------------------------------------------------

def test_congenial_cardinality(report):
    with criterion(report, 4, "congenial cardinality", 30) as st:
        rng = random.Random(11)
        sizes = []
        for _ in range(100):
            d = rng.randint(1, 3)
            pool = {f"s{i}": _random_substitution(rng, d) for i in range(4)}
            names = sorted(pool)
            seq = DirectiveSequence([rng.choice(names) for _ in range(rng.randint(0, 3))],
                                    [rng.choice(names) for _ in range(rng.randint(1, 4))], pool)
            augs = congenial_augmentations(seq)
            assert 1 <= len(augs) <= d, (seq, len(augs))
            sizes.append(len(augs))
        st["detail"] = f"100 sequences, sizes {min(sizes)}..{max(sizes)}"


# -- 5 -----------------------------------------------------------------------------------

def test_sturmian_consistency(report):
    with criterion(report, 5, "Sturmian consistency", 120) as st:
        rng = random.Random(5)
        for _ in range(50):
            digits = [rng.randint(1, 5) for _ in range(12)]
            cf = ContinuedFraction(tuple(digits[:10]), tuple(digits[10:]))
            w = directed_prefix(sturmian_directive(cf), 1000)
            assert w == oracles.floor_characteristic(oracles.cf_value(digits[:10], digits[10:]), 1000), cf
            for n in range(1, 9):
                assert len(factors(w, n)) == n + 1, (cf, n)
        st["detail"] = "50 slopes, 1000 letters each, complexity n+1 for n<=8"


# -- 6 -----------------------------------------------------------------------------------

def test_ostrowski_round_trip(report):
    with criterion(report, 6, "Ostrowski round-trip", 30) as st:
        rng = random.Random(6)
        worst = 0.0
        for _ in range(100):
            # i.i.d. digits over all encoded positions; see test_sturmian for short periods
            cf = ContinuedFraction(tuple(rng.randint(1, 5) for _ in range(42)),
                                   tuple(rng.randint(1, 5) for _ in range(rng.randint(1, 3))))
            eta = float(cf.mp())
            chi = Fraction(rng.random()) - Fraction(eta)
            b = ostrowski_encode(cf, chi, 40)
            check_digit_rules(cf, b)
            err = abs(float(ostrowski_decode(b, cf)) - float(chi))
            worst = max(worst, err)
        st["detail"] = f"100 round-trips, worst error {worst:.2e}"
        assert worst <= 1e-9


# -- 7 -----------------------------------------------------------------------------------

def test_arnoux_rauzy_automaton(report):
    with criterion(report, 7, "Arnoux-Rauzy automaton", 120) as st:
        rng = random.Random(8)
        names = ar_names(2)
        fixed = [([], ["lambda0"]), ([], ["rho0", "rho1"]), (["lambda1"], ["lambda0", "rho0"]),
                 ([], ["lambda1", "rho1"]), (["rho0", "lambda1"], ["lambda0", "lambda1"])]
        seqs = fixed + [([rng.choice(names) for _ in range(rng.randint(0, 2))],
                         [rng.choice(names) for _ in range(rng.randint(1, 4))]) for _ in range(20)]
        rejected_nonwp = 0
        checked = 0
        for name in ("inf-1s", "no-11", "first-0"):
            A = library.automaton(name)
            ctx = AdicContext(A, ar_generators(2))
            E = build_ar_acceptance_automaton(A, 2, ctx)
            for pre, per in seqs:
                seq = DirectiveSequence(pre, per, ar_generators(2))
                got = accepts_lasso(E, pre, per)
                if is_weakly_primitive(seq) and has_recurring_left_proper(seq):
                    want = decide_up(seq, mode="directed", context=ctx)
                else:
                    want = False
                    rejected_nonwp += not is_weakly_primitive(seq)
                assert got == want, (name, pre, per, got, want)
                checked += 1
        st["detail"] = f"{checked} verdicts over {len(seqs)} sequences, {rejected_nonwp} non-WP rejections"
        assert len(seqs) >= 25 and rejected_nonwp > 0


# -- 8 -----------------------------------------------------------------------------------

def test_partial_quotient_reflection(report):
    with criterion(report, 8, "partial-quotient reflection", 120) as st:
        rates = {}
        for name in ("first-0", "no-11", "inf-1s", "contains-11"):
            r = agreement_experiment(library.automaton(name), N=4, trials=25, seed=1)
            rates[name] = r.rate
            assert r.rate == 1.0, r.lines()
        zero = agreement_experiment(library.automaton("first-0"), N=0, trials=25, seed=1)
        assert zero.disagreements, zero.lines()
        a, b, va, vb = zero.disagreements[0]
        first_a, first_b = directed_prefix(a, 1)[0], directed_prefix(b, 1)[0]
        # the explicit pair really differs on the first letter
        assert va != vb and (first_a == 0) == va and (first_b == 0) == vb
        st["detail"] = f"N=4 rates {rates}; N=0 first-0 rate {zero.rate:.2f} with explicit disagreement"


# -- 9 -----------------------------------------------------------------------------------

def test_morphic_dfa_correctness(report):
    with criterion(report, 9, "morphic DFA correctness", 120) as st:
        rng = random.Random(9)
        checked = accepted = 0
        for t in range(10):
            d = 2 if t < 7 else 3
            A = random_automaton(rng, 3) if d == 2 else random_buchi(rng, 3, d=3)
            sigma, pi = _random_substitution(rng, d), _random_substitution(rng, d)
            sg = build_semigroup(A)
            alg = SubstitutionAlgebra(sg, [sigma, pi])
            dfa = morphic_language_dfa(alg.class_of(sigma), alg.class_of(pi))
            for k in range(5):
                for u in itertools.product(range(d), repeat=k):
                    want = oracles.morphic_accepts(sg, sigma.images, pi.images, u)
                    assert dfa.accepts(u) == want, (A, sigma, pi, u)
                    checked += 1
                    accepted += want
        st["detail"] = f"10 triples, {checked} words, {accepted} accepted, 0 failures"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
