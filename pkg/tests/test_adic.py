import random

import pytest

import oracles
from sadic import (AdicContext, BuchiAutomaton, DirectiveSequence, Substitution, accepts_lasso,
                   congenial_augmentations, decide_up, generated_prefix, generated_word, h_sigma_omega,
                   is_congenial, is_weakly_primitive, library)
from sadic.adic import (build_Bx, generated_lasso, generating_sets,
                        has_recurring_left_proper, relabel_for_finite_S, value_universe)
from sadic.crosscheck import BASIS, random_automaton, random_sequence
from sadic.errors import NotCongenialError
from sadic.omega import finite_key, omega_key

SUBS = library.substitutions(2)
EMPTY = BuchiAutomaton(range(2), 1, [0], [(0, 0, 0), (0, 1, 0)], [])


def fib(letter=0):
    return DirectiveSequence([], ["sigma_fib"], SUBS, letters=([], [letter]))


def test_congeniality_examples():
    assert is_congenial(fib(0))
    assert not is_congenial(fib(1))
    assert not is_congenial(DirectiveSequence([], ["lambda0", "lambda1"], SUBS, letters=([], [0, 1])))
    assert is_congenial(DirectiveSequence([], ["lambda0", "lambda1"], SUBS, letters=([], [1, 0])))


def test_congenial_augmentation_examples():
    augs = congenial_augmentations(DirectiveSequence([], ["sigma_fib"], SUBS))
    assert len(augs) == 1 and set(augs[0].letters[1]) == {0}
    ident = congenial_augmentations(DirectiveSequence([], ["id"], SUBS))
    assert sorted(a.letters[1][0] for a in ident) == [0, 1]
    both = {"ll": Substitution.from_strings("010", "01")}
    assert len(congenial_augmentations(DirectiveSequence([], ["ll"], both))) == 1


def test_generated_prefix_examples():
    w = oracles.fibonacci_prefix(2000)
    prev = ()
    for n in range(11):
        p = generated_prefix(fib(), n)
        assert "".join(map(str, p)) == w[:len(p)]
        assert p[:len(prev)] == prev
        prev = p
    assert generated_prefix(fib(), 0) == SUBS["sigma_fib"].images[0]
    with pytest.raises(NotCongenialError):
        generated_prefix(fib(1), 3)


def test_sturmian_pair_matches_floor_formula():
    seq = DirectiveSequence([], ["lambda0", "lambda1"], SUBS, letters=([], [1, 0]))
    eta = oracles.cf_value((2,), (1,))
    assert tuple(generated_word(seq).prefix(1000)) == oracles.floor_characteristic(eta, 1000)


def test_bx_examples():
    ctx = AdicContext(library.infinitely_many(), SUBS)
    fib_class = ctx.classes[ctx.class_index["sigma_fib"]]
    x = omega_key(h_sigma_omega(fib_class, ctx.algebra.index_L, 0).value)
    pre, per = ctx.class_trace(fib(), with_letters=True)
    assert accepts_lasso(build_Bx(ctx.algebra, ctx.classes, x), pre, per)
    for y in value_universe(ctx.semigroup):
        if y != x:
            assert not accepts_lasso(build_Bx(ctx.algebra, ctx.classes, y), pre, per)
    bad = ctx.class_trace(fib(1), with_letters=True)
    for y in value_universe(ctx.semigroup):
        assert not accepts_lasso(build_Bx(ctx.algebra, ctx.classes, y), *bad)


def test_generated_automaton_on_fibonacci_trace():
    rng = random.Random(21)
    for _ in range(20):
        A = random_automaton(rng, 3)
        ctx = AdicContext(A, SUBS)
        fib_class = ctx.classes[ctx.class_index["sigma_fib"]]
        v = h_sigma_omega(fib_class, ctx.algebra.index_L, 0)
        want = v.value in ctx.semigroup.accepting_omega
        trace = ctx.class_trace(fib(), with_letters=True)
        assert accepts_lasso(ctx.generated_automaton, *trace) == want


def test_generated_automaton_for_trivial_languages():
    seqs = [fib(0), fib(1), DirectiveSequence([], ["lambda0", "lambda1"], SUBS, letters=([], [1, 0]))]
    full = AdicContext(library.all_words(), SUBS)
    none = AdicContext(EMPTY, SUBS)
    for s in seqs:
        assert accepts_lasso(full.generated_automaton, *full.class_trace(s, True)) == is_congenial(s)
        assert not accepts_lasso(none.generated_automaton, *none.class_trace(s, True))
        assert not decide_up(s.without_letters(), mode="directed", context=none)


def test_generating_set_examples():
    A = library.infinitely_many()
    ctx = AdicContext(A, SUBS)
    sg = ctx.semigroup
    family = generating_sets(sg)
    for w in sg.accepting_omega:
        assert frozenset([omega_key(w)]) in family
    one = sg.word_value((1,))
    zero = sg.word_value((0,))
    assert sg.omega_power(one) in sg.accepting_omega
    assert frozenset([finite_key(one)]) in family
    assert frozenset([finite_key(zero)]) not in family


def test_directed_examples():
    A = library.infinitely_many()
    ctx = AdicContext(A, SUBS)
    ll = DirectiveSequence([], ["lambda0", "lambda1"], SUBS)
    gen = any(decide_up(aug, context=ctx) for aug in congenial_augmentations(ll))
    assert decide_up(ll, mode="directed", context=ctx) == gen is True
    assert decide_up(DirectiveSequence([], ["id"], SUBS), mode="directed", context=ctx)


def test_relabeling():
    A = library.no_factor()
    ctx = AdicContext(A, {"sigma_fib": SUBS["sigma_fib"]})
    aut = relabel_for_finite_S(ctx.generated_automaton, ["sigma_fib"], ctx.class_index, letters=2)
    assert accepts_lasso(aut, [], [("sigma_fib", 0)]) == decide_up(fib(), A)

    ar = {k: SUBS[k] for k in ("lambda0", "lambda1", "rho0", "rho1")}
    ctx = AdicContext(A, ar)
    rel = relabel_for_finite_S(ctx.directed_automaton(), sorted(ar), ctx.class_index)
    rng = random.Random(5)
    for _ in range(10):
        pre = [rng.choice(sorted(ar)) for _ in range(rng.randint(0, 2))]
        per = [rng.choice(sorted(ar)) for _ in range(rng.randint(1, 3))]
        seq = DirectiveSequence(pre, per, ar)
        direct = accepts_lasso(ctx.directed_automaton(), *ctx.class_trace(seq, False))
        assert accepts_lasso(rel, pre, per) == direct

    # two names bound to one class are interchangeable
    twin = {"a": SUBS["lambda0"], "b": Substitution.from_strings("0", "01"), "c": SUBS["lambda1"]}
    ctx = AdicContext(A, twin)
    assert ctx.class_index["a"] == ctx.class_index["b"]
    rel = relabel_for_finite_S(ctx.directed_automaton(), sorted(twin), ctx.class_index)
    assert accepts_lasso(rel, [], ["a", "c"]) == accepts_lasso(rel, [], ["b", "c"])


def test_decide_up_fibonacci():
    assert decide_up(fib(), library.no_factor())
    assert decide_up(fib(), library.infinitely_many())
    assert not decide_up(fib(), library.eventually_only())
    with pytest.raises(NotCongenialError):
        decide_up(fib(1), library.no_factor())


def test_generated_lasso():
    seq = DirectiveSequence([], ["rho0"], BASIS, letters=([], [1]))
    kind, (u, v) = generated_lasso(seq)
    assert kind == "lasso"
    w = (u + v * 50)[:50]
    assert w == tuple(generated_word(seq).prefix(50))


def test_weak_primitivity_and_left_proper():
    assert is_weakly_primitive(DirectiveSequence([], ["sigma_fib"], SUBS))
    assert not is_weakly_primitive(DirectiveSequence([], ["lambda0"], SUBS))
    assert has_recurring_left_proper(DirectiveSequence(["rho0"], ["lambda1", "rho0"], SUBS))
    assert not has_recurring_left_proper(DirectiveSequence(["lambda0"], ["rho0", "rho1"], SUBS))


def test_exactly_one_value_per_congenial_sequence():
    rng = random.Random(8)
    for _ in range(6):
        A = random_automaton(rng, 2)
        ctx = AdicContext(A, BASIS)
        for _ in range(3):
            seq = random_sequence(rng)
            for aug in congenial_augmentations(seq):
                trace = ctx.class_trace(aug, True)
                hits = [x for x in value_universe(ctx.semigroup)
                        if accepts_lasso(build_Bx(ctx.algebra, ctx.classes, x), *trace)]
                assert hits == [ctx.generated_value(aug)]


def test_generated_verdicts_match_lasso_oracle():
    rng = random.Random(9)
    checked = 0
    for _ in range(15):
        A = random_automaton(rng, 3)
        ctx = AdicContext(A, BASIS)
        for _ in range(4):
            for aug in congenial_augmentations(random_sequence(rng)):
                lz = generated_lasso(aug)
                if lz is None or lz[0] != "lasso":
                    continue
                u, v = lz[1]
                assert decide_up(aug, context=ctx) == oracles.lasso_accepts(A, u, v)
                checked += 1
    assert checked > 10


def test_directed_builder_matches_values_path():
    rng = random.Random(10)
    A = library.contains_factor()
    ctx = AdicContext(A, BASIS)
    for _ in range(10):
        seq = random_sequence(rng)
        assert decide_up(seq, mode="directed", context=ctx) == decide_up(seq, mode="directed", context=ctx,
                                                                        via="automaton")
