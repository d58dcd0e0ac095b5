"""An automaton over lambda0, lambda1, rho0, rho1 recognising the directive
sequences whose Sturmian word avoids 11.

The automaton is built once and then queried on a handful of ultimately
periodic sequences; each answer is compared with a direct evaluation.
"""
from sadic import AdicContext, DirectiveSequence, accepts_lasso, build_ar_acceptance_automaton, library
from sadic.sturmian import ar_generators, ar_reference_verdict

A = library.no_factor()
ctx = AdicContext(A, ar_generators(2))
E = build_ar_acceptance_automaton(A, 2, ctx).materialize()
print(f"automaton: {E.n_states} states, {len(E.accepting)} accepting")

cases = [
    ([], ["lambda0", "lambda1"]),
    ([], ["lambda1", "lambda0"]),
    (["rho0"], ["lambda0", "rho1"]),
    ([], ["lambda0", "lambda0", "lambda1"]),
    ([], ["lambda0"]),  # not weakly primitive
]
for pre, per in cases:
    seq = DirectiveSequence(pre, per, ar_generators(2))
    got = accepts_lasso(E, pre, per)
    ref = ar_reference_verdict(seq, A, ctx)
    print(f"{' '.join(pre) or '-':8s}; {' '.join(per):26s} {got!s:5s} (direct: {ref})")
