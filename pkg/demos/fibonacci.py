"""The Fibonacci word against a few Büchi automata.

The word is the fixed point of 0 -> 01, 1 -> 0.  We decide membership three
ways: as a morphic word, as the word generated by the constant directive
sequence, and by looking at which seeds u make sigma^omega(u) accepted.
"""
from sadic import (DirectiveSequence, build_semigroup, decide_up, h_sigma_omega, library,
                   morphic_language_dfa)
from sadic.algebra import SubstitutionAlgebra
from sadic.morphic import sigma_omega_prefix

FIB = library.substitutions(2)["sigma_fib"]

print("prefix:", "".join(map(str, sigma_omega_prefix(FIB, (0,), 34).word)))
print()

seq = DirectiveSequence([], ["sigma_fib"], library.substitutions(2), letters=([], [0]))
for name in ("inf-1s", "no-11", "contains-11", "eventually-0s", "first-0"):
    A = library.automaton(name)
    sg = build_semigroup(A)
    alg = SubstitutionAlgebra(sg, [FIB])
    xi = alg.class_of(FIB)
    value = h_sigma_omega(xi, alg.index_L, 0)
    morphic = value.value in sg.accepting_omega
    generated = decide_up(seq, A)
    print(f"{name:14s} |M| = {sg.size:2d}   morphic: {morphic!s:5s}  generated: {generated}")

# seeds whose iterates converge to an accepted word
A = library.no_factor()
alg = SubstitutionAlgebra(build_semigroup(A), [FIB])
dfa = morphic_language_dfa(alg.class_of(FIB), alg.class_of(FIB))
print()
print("seeds u with sigma^omega(u) free of 11, up to length 3:")
print(" ", " ".join("".join(map(str, u)) or "ε" for u in dfa.words_upto(3)))
