"""Small named automata and substitutions used by the CLI, demos and tests."""
from __future__ import annotations

from .omega import BuchiAutomaton
from .sturmian import ar_generators
from .words import Substitution


def infinitely_many(letter: int = 1, d: int = 2) -> BuchiAutomaton:
    """Infinitely many occurrences of ``letter``; state 1 is entered on reading it."""
    tr = [(p, a, 1 if a == letter else 0) for p in (0, 1) for a in range(d)]
    return BuchiAutomaton(range(d), 2, [0], tr, [1], state_labels=("other", f"saw {letter}"))


def no_factor(factor=(1, 1), d: int = 2) -> BuchiAutomaton:
    """Words avoiding ``factor`` (KMP automaton without the dead state; all states accept)."""
    factor = tuple(factor)
    k = len(factor)
    tr = []
    for q in range(k):
        for a in range(d):
            w = factor[:q] + (a,)
            # longest suffix of w that is a prefix of factor
            r = next(j for j in range(len(w), -1, -1) if w[len(w) - j:] == factor[:j])
            if r < k:
                tr.append((q, a, r))
    labels = tuple("".join(map(str, factor[:q])) or "ε" for q in range(k))
    return BuchiAutomaton(range(d), k, [0], tr, range(k), state_labels=labels)


def contains_factor(factor=(1, 1), d: int = 2) -> BuchiAutomaton:
    """Words containing ``factor``; the last state is a sink."""
    factor = tuple(factor)
    k = len(factor)
    tr = []
    for q in range(k + 1):
        for a in range(d):
            if q == k:
                tr.append((q, a, k))
                continue
            w = factor[:q] + (a,)
            r = next(j for j in range(len(w), -1, -1) if w[len(w) - j:] == factor[:j])
            tr.append((q, a, r))
    labels = tuple("".join(map(str, factor[:q])) or "ε" for q in range(k + 1))
    return BuchiAutomaton(range(d), k + 1, [0], tr, [k], state_labels=labels)


def eventually_only(letter: int = 0, d: int = 2) -> BuchiAutomaton:
    """Nondeterministically guess the point after which only ``letter`` occurs."""
    tr = [(0, a, 0) for a in range(d)] + [(0, letter, 1), (1, letter, 1)]
    return BuchiAutomaton(range(d), 2, [0], tr, [1], state_labels=("guess", "only"))


def first_letter(letter: int = 0, d: int = 2) -> BuchiAutomaton:
    """Words starting with ``letter``."""
    tr = [(0, letter, 1)] + [(1, a, 1) for a in range(d)]
    return BuchiAutomaton(range(d), 2, [0], tr, [1], state_labels=("start", "ok"))


def all_words(d: int = 2) -> BuchiAutomaton:
    return BuchiAutomaton(range(d), 1, [0], [(0, a, 0) for a in range(d)], [0])


AUTOMATA = {
    "inf-1s": infinitely_many,
    "no-11": no_factor,
    "contains-11": contains_factor,
    "eventually-0s": eventually_only,
    "first-0": first_letter,
    "first-1": lambda: first_letter(1),
    "all": all_words,
}


def automaton(name: str) -> BuchiAutomaton:
    try:
        return AUTOMATA[name]()
    except KeyError:
        raise KeyError(f"unknown automaton {name!r}; known: {', '.join(sorted(AUTOMATA))}") from None


def substitutions(d: int = 2) -> dict:
    """Built-in substitutions over ``0..d-1``: the AR generators, ``id`` and, for two letters,
    ``sigma_fib`` (0→01, 1→0), ``swap`` and ``thue_morse``."""
    out = dict(ar_generators(d))
    out["id"] = Substitution.identity(d)
    if d == 2:
        out["sigma_fib"] = Substitution([(0, 1), (0,)], name="sigma_fib")
        out["swap"] = Substitution([(1,), (0,)], name="swap")
        out["thue_morse"] = Substitution([(0, 1), (1, 0)], name="thue_morse")
    return out
