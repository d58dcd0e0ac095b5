"""Randomised agreement checks between the independent decision pipelines.

For an ultimately periodic directive sequence and an automaton the verdicts of
the generated-word automaton, the directed-word automata, the morphic
evaluator (single repeated substitution) and a plain lasso run on the
explicitly computed generated word must coincide.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .adic import (AdicContext, DirectiveSequence, congenial_augmentations, decide_up,
                   generated_lasso, is_weakly_primitive)
from .algebra import class_power
from .morphic import h_sigma_omega
from .omega import BuchiAutomaton, ParityAutomaton, accepts_lasso
from .words import Substitution

BASIS = {
    "sigma_fib": Substitution([(0, 1), (0,)], name="sigma_fib"),
    "lambda0": Substitution([(0,), (0, 1)], name="lambda0"),
    "lambda1": Substitution([(1, 0), (1,)], name="lambda1"),
    "rho0": Substitution([(0,), (1, 0)], name="rho0"),
    "rho1": Substitution([(0, 1), (1,)], name="rho1"),
}


def random_buchi(rng: random.Random, max_states: int = 4, d: int = 2) -> BuchiAutomaton:
    n = rng.randint(1, max_states)
    tr = [(p, a, q) for p in range(n) for a in range(d) for q in range(n) if rng.random() < 0.45]
    acc = [q for q in range(n) if rng.random() < 0.5]
    return BuchiAutomaton(range(d), n, [0], tr, acc)


def random_parity(rng: random.Random, max_states: int = 4, d: int = 2) -> ParityAutomaton:
    n = rng.randint(1, max_states)
    delta = {(p, a): rng.randrange(n) for p in range(n) for a in range(d)}
    return ParityAutomaton(range(d), n, 0, delta, [rng.randint(0, 3) for _ in range(n)])


def random_automaton(rng: random.Random, max_states: int = 4):
    return random_parity(rng, max_states) if rng.random() < 0.3 else random_buchi(rng, max_states)


def random_sequence(rng: random.Random, bindings=BASIS, max_pre: int = 2, max_period: int = 4) -> DirectiveSequence:
    names = sorted(bindings)
    if rng.random() < 0.25:
        # a single repeated substitution exercises the morphic evaluator
        return DirectiveSequence([], [rng.choice(names)] * rng.randint(1, 2), bindings)
    pre = [rng.choice(names) for _ in range(rng.randint(0, max_pre))]
    period = [rng.choice(names) for _ in range(rng.randint(1, max_period))]
    return DirectiveSequence(pre, period, bindings)


@dataclass
class CaseResult:
    sequence: DirectiveSequence
    verdicts: dict = field(default_factory=dict)  # pipeline -> verdict (per augmentation for generated ones)
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def morphic_verdict(aug: DirectiveSequence, context: AdicContext) -> bool | None:
    """Verdict through ``h_L ∘ σ^ω(a)`` when the period is one repeated substitution."""
    if aug.pre or len(set(aug.period)) != 1:
        return None
    alg = context.algebra
    xi = class_power(alg.class_of(aug.bindings[aug.period[0]]), len(aug.period))
    v = h_sigma_omega(xi, alg.index_L, aug.letter(len(aug.period) - 1))
    return v.is_infinite and v.value in context.semigroup.accepting_omega


def check_case(automaton, seq: DirectiveSequence, context: AdicContext | None = None,
               max_prefix: int = 100_000) -> CaseResult:
    context = context or AdicContext(automaton, seq.bindings)
    res = CaseResult(seq)
    generated = []
    for i, aug in enumerate(congenial_augmentations(seq)):
        g = decide_up(aug, context=context)
        generated.append(g)
        res.verdicts[f"generated[{i}]"] = g
        m = morphic_verdict(aug, context)
        if m is not None:
            res.verdicts[f"morphic[{i}]"] = m
            if m != g:
                res.mismatches.append(("morphic", aug, g, m))
        lz = generated_lasso(aug, max_prefix=max_prefix)
        if lz is not None:
            kind, data = lz
            d = accepts_lasso(context.automaton, *data) if kind == "lasso" else False
            res.verdicts[f"lasso[{i}]"] = d
            if d != g:
                res.mismatches.append(("lasso", aug, g, d))
    if is_weakly_primitive(seq):
        dv = decide_up(seq, context=context, mode="directed")
        res.verdicts["directed"] = dv
        if dv != any(generated):
            res.mismatches.append(("directed", seq, any(generated), dv))
    return res


@dataclass
class Summary:
    cases: int = 0
    passed: int = 0
    pipeline_counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def lines(self) -> list:
        out = [f"cases={self.cases} passed={self.passed} failed={self.cases - self.passed}"]
        for k in sorted(self.pipeline_counts):
            out.append(f"  {k}: {self.pipeline_counts[k]} verdicts compared")
        for f in self.failures[:5]:
            out.append(f"  mismatch: {f}")
        return out


def run_suite(cases: int, seed: int = 0, sequences_per_automaton: int = 4, max_states: int = 4) -> Summary:
    summary = Summary()
    rng = random.Random(seed)
    while summary.cases < cases:
        automaton = random_automaton(rng, max_states)
        context = AdicContext(automaton, BASIS)
        for _ in range(sequences_per_automaton):
            if summary.cases >= cases:
                break
            res = check_case(automaton, random_sequence(rng), context)
            summary.cases += 1
            summary.passed += res.ok
            for k in res.verdicts:
                kind = k.split("[")[0]
                summary.pipeline_counts[kind] = summary.pipeline_counts.get(kind, 0) + 1
            summary.failures.extend(res.mismatches)
    return summary
