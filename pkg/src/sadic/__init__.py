"""Decide ω-regular properties of morphic and S-adic words.

The usual entry points::

    from sadic import DirectiveSequence, decide_up, library

    A = library.infinitely_many(1)
    subs = library.substitutions(2)
    seq = DirectiveSequence([], ["sigma_fib"], subs, letters=([], [0]))
    decide_up(seq, A)  # True: the Fibonacci word has infinitely many 1s
"""
from .adic import (AdicContext, DirectiveSequence, congenial_augmentations, decide_up, generated_lasso,
                   generated_prefix, generated_word, is_congenial, is_weakly_primitive)
from .algebra import SubstClass, SubstitutionAlgebra, class_of, compose_classes, enumerate_classes
from .config import Config, get_config, override, set_config
from .dfa import Dfa
from .errors import (AlphabetError, BoundaryError, BudgetExceeded, DigitRuleError, DivergentWordError,
                     GuardExceeded, NotCongenialError, ParseError, SadicError)
from .morphic import (BOTTOM, Finite, Infinite, OmegaValue, fixed_point_images, h_pi_sigma_omega,
                      h_sigma_omega, morphic_language_dfa, sigma_omega_prefix, word_omega_value)
from .omega import (BuchiAutomaton, OmegaSemigroup, ParityAutomaton, accepts_lasso, accepts_up,
                    build_semigroup, up_value)
from .sturmian import (ContinuedFraction, OstrowskiDigits, agreement_experiment, ar_generators,
                       build_ar_acceptance_automaton, convergents, directive_from_expansions,
                       ostrowski_decode, ostrowski_encode, partial_quotients, sturmian_directive,
                       sturmian_letter, sturmian_prefix, theta, weak_primitivity_automaton)
from .words import Alphabet, LazyWord, Substitution, compose

__all__ = [
    "AdicContext", "DirectiveSequence", "congenial_augmentations", "decide_up", "generated_lasso",
    "generated_prefix", "generated_word", "is_congenial", "is_weakly_primitive",
    "SubstClass", "SubstitutionAlgebra", "class_of", "compose_classes", "enumerate_classes",
    "Config", "get_config", "override", "set_config", "Dfa",
    "AlphabetError", "BoundaryError", "BudgetExceeded", "DigitRuleError", "DivergentWordError",
    "GuardExceeded", "NotCongenialError", "ParseError", "SadicError",
    "BOTTOM", "Finite", "Infinite", "OmegaValue", "fixed_point_images", "h_pi_sigma_omega",
    "h_sigma_omega", "morphic_language_dfa", "sigma_omega_prefix", "word_omega_value",
    "BuchiAutomaton", "OmegaSemigroup", "ParityAutomaton", "accepts_lasso", "accepts_up",
    "build_semigroup", "up_value",
    "ContinuedFraction", "OstrowskiDigits", "agreement_experiment", "ar_generators",
    "build_ar_acceptance_automaton", "convergents", "directive_from_expansions",
    "ostrowski_decode", "ostrowski_encode", "partial_quotients", "sturmian_directive",
    "sturmian_letter", "sturmian_prefix", "theta", "weak_primitivity_automaton",
    "Alphabet", "LazyWord", "Substitution", "compose",
]
