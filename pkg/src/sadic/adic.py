"""Directive sequences, congenial expansions, and the automata over substitution
classes recognising which generated / directed words lie in an ω-regular language."""
from __future__ import annotations

import itertools
import math
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import SubstClass, SubstitutionAlgebra
from .config import get_config
from .errors import BudgetExceeded, GuardExceeded, NotCongenialError
from .omega import (ONE, IntersectionAutomaton, OmegaAutomaton, OmegaSemigroup, ProductAutomaton,
                    RelabeledAutomaton, UnionAutomaton, accepts_lasso, as_buchi, finite_key,
                    infinite_product_value, omega_key)
from .words import INFINITE, LazyWord, Substitution, apply, compose_all


# -- directive sequences ------------------------------------------------------

class DirectiveSequence:
    """Ultimately periodic ``pre · period^ω`` over named substitutions, optionally with letters."""

    def __init__(self, pre: Sequence[str], period: Sequence[str], bindings: Mapping[str, Substitution],
                 letters: tuple | None = None):
        pre, period = tuple(pre), tuple(period)
        if not period:
            raise ValueError("directive sequence needs a non-empty period")
        for n in pre + period:
            if n not in bindings:
                raise KeyError(f"unbound substitution name {n!r}")
        sizes = {bindings[n].size for n in pre + period}
        if len(sizes) > 1:
            raise ValueError("substitutions over different alphabets")
        self.bindings = dict(bindings)
        if letters is not None:
            lp, lq = tuple(letters[0]), tuple(letters[1])
            if not lq:
                raise ValueError("letter sequence needs a non-empty period")
            P = max(len(pre), len(lp))
            Q = math.lcm(len(period), len(lq))
            pre, period = _reshape(pre, period, P, Q)
            lp, lq = _reshape(lp, lq, P, Q)
            d = self.bindings[pre[0] if pre else period[0]].size
            if any(not 0 <= a < d for a in lp + lq):
                raise ValueError(f"augmentation letters must lie in 0..{d - 1}")
            letters = (lp, lq)
        self.pre, self.period, self.letters = pre, period, letters

    @property
    def alphabet_size(self) -> int:
        return self.bindings[self.period[0]].size

    @property
    def augmented(self) -> bool:
        return self.letters is not None

    def _idx(self, n: int) -> tuple:
        if n < len(self.pre):
            return ("p", n)
        return ("q", (n - len(self.pre)) % len(self.period))

    def name(self, n: int) -> str:
        kind, i = self._idx(n)
        return self.pre[i] if kind == "p" else self.period[i]

    def sub(self, n: int) -> Substitution:
        return self.bindings[self.name(n)]

    def letter(self, n: int) -> int:
        if self.letters is None:
            raise ValueError("sequence is not augmented")
        kind, i = self._idx(n)
        return self.letters[0][i] if kind == "p" else self.letters[1][i]

    def with_letters(self, pre, period) -> "DirectiveSequence":
        return DirectiveSequence(self.pre, self.period, self.bindings, (tuple(pre), tuple(period)))

    def without_letters(self) -> "DirectiveSequence":
        return DirectiveSequence(self.pre, self.period, self.bindings)

    def reshaped(self, P: int, Q: int) -> "DirectiveSequence":
        """Same sequence written with a preperiod of length ``P`` and period length ``Q``."""
        pre, period = _reshape(self.pre, self.period, P, Q)
        letters = None
        if self.letters is not None:
            letters = _reshape(self.letters[0], self.letters[1], P, Q)
        out = DirectiveSequence.__new__(DirectiveSequence)
        out.bindings, out.pre, out.period, out.letters = self.bindings, pre, period, letters
        return out

    def names(self, n: int) -> list:
        return [self.name(i) for i in range(n)]

    def __eq__(self, other):
        if not isinstance(other, DirectiveSequence):
            return NotImplemented
        P = max(len(self.pre), len(other.pre))
        Q = math.lcm(len(self.period), len(other.period))
        a, b = self.reshaped(P, Q), other.reshaped(P, Q)
        return (a.pre, a.period, a.letters) == (b.pre, b.period, b.letters) and \
            all(self.bindings[n] == other.bindings[n] for n in set(a.pre + a.period))

    def __repr__(self):
        body = f"{' '.join(self.pre)}; {' '.join(self.period)}"
        if self.letters:
            body += f" | {''.join(map(str, self.letters[0]))}; {''.join(map(str, self.letters[1]))}"
        return f"DirectiveSequence({body})"


def _reshape(pre: tuple, period: tuple, P: int, Q: int):
    if P < len(pre) or Q % len(period):
        raise ValueError("reshape can only lengthen the preperiod and multiply the period")
    full = lambda n: pre[n] if n < len(pre) else period[(n - len(pre)) % len(period)]
    return tuple(full(n) for n in range(P)), tuple(full(n) for n in range(P, P + Q))


# -- congeniality -------------------------------------------------------------

def is_congenial(seq: DirectiveSequence, horizon: int | None = None) -> bool:
    """``σ_{n+1}(a_{n+1})`` begins with ``a_n`` for every ``n`` (one period wrap suffices)."""
    if not seq.augmented:
        raise ValueError("congeniality needs a letter augmentation")
    n_max = len(seq.pre) + len(seq.period)
    if horizon is not None:
        n_max = max(n_max, horizon)
    return all(seq.sub(n + 1).head(seq.letter(n + 1)) == seq.letter(n) for n in range(n_max))


def congenial_augmentations(seq: DirectiveSequence) -> list:
    """Every congenial letter augmentation, each returned as an augmented sequence.

    Letters in the periodic part are periodic points of the composed head map
    over one period; there is one augmentation per periodic point.
    """
    base = seq.without_letters()
    P, Q = len(base.pre), len(base.period)
    heads = [tuple(base.sub(n).head(a) for a in range(base.alphabet_size)) for n in range(P + Q)]
    d = base.alphabet_size

    def back(n, a):
        # a_{n-1} = head_{σ_n}(a_n); positions ≥ P are read modulo the period
        idx = n if n < P + Q else P + (n - P) % Q
        return heads[idx][a]

    def F(a):
        # a_P from a_{P+Q}
        for n in range(P + Q, P, -1):
            a = back(n, a)
        return a

    periodic = []
    for a in range(d):
        x = a
        for _ in range(d):
            x = F(x)
        # x is now in the eventual image; collect its cycle
        if x not in periodic:
            cyc = [x]
            y = F(x)
            while y != x:
                cyc.append(y)
                y = F(y)
            periodic.extend(c for c in cyc if c not in periodic)
    out = []
    for x in sorted(periodic):
        r = 1
        y = F(x)
        while y != x:
            y = F(y)
            r += 1
        # a_{P + rQ} = x, walk back to position 0
        letters = [0] * (P + r * Q + 1)
        letters[P + r * Q] = x
        for n in range(P + r * Q, 0, -1):
            letters[n - 1] = back(n, letters[n])
        assert letters[P] == x
        shaped = base.reshaped(P, r * Q)
        out.append(shaped.with_letters(letters[:P], letters[P:P + r * Q]))
    return out


def generated_prefix(seq: DirectiveSequence, n: int) -> tuple:
    """``σ_0⋯σ_n(a_n)`` via the telescoping product ``σ_0(a_0)·σ_0(v_1)·σ_0σ_1(v_2)⋯``."""
    if not is_congenial(seq):
        raise NotCongenialError("augmentation is not congenial")
    out = list(seq.sub(0).images[seq.letter(0)])
    for k in range(1, n + 1):
        img = seq.sub(k).images[seq.letter(k)]
        piece = img[1:]
        for j in range(k - 1, -1, -1):
            if not piece:
                break
            piece = apply(seq.sub(j), piece)
        out.extend(piece)
    return tuple(out)


def generated_word(seq: DirectiveSequence) -> LazyWord:
    """The word generated by a congenial sequence, as a lazily extended prefix."""
    if not is_congenial(seq):
        raise NotCongenialError("augmentation is not congenial")
    P, Q = len(seq.pre), len(seq.period)
    stalls = all(len(seq.sub(n).images[seq.letter(n)]) == 1 for n in range(P, P + Q))
    if stalls:
        return LazyWord.finite(generated_prefix(seq, P + Q))
    state = {"n": 0, "word": list(seq.sub(0).images[seq.letter(0)])}
    budget = get_config().prefix_budget

    def oracle(m):
        while len(state["word"]) < m:
            k = state["n"] + 1
            if k > budget:
                raise BudgetExceeded("generated word grows too slowly")
            piece = seq.sub(k).images[seq.letter(k)][1:]
            for j in range(k - 1, -1, -1):
                if not piece:
                    break
                piece = apply(seq.sub(j), piece)
            state["word"].extend(piece)
            state["n"] = k
        return tuple(state["word"][:m])

    return LazyWord(oracle, INFINITE)


# -- weak primitivity ---------------------------------------------------------

def is_weakly_primitive(seq: DirectiveSequence) -> bool:
    """Every tail admits a positive finite composition (checked per period position)."""
    P, Q = len(seq.pre), len(seq.period)
    d = seq.alphabet_size
    for n in range(P + Q):
        mat = np.eye(d, dtype=bool)
        seen = set()
        m = n
        while True:
            inc = seq.sub(m).incidence().astype(np.uint8)
            mat = (inc @ mat.astype(np.uint8)) > 0
            if mat.all():
                break
            key = (mat.tobytes(), (m - P) % Q if m >= P else ("p", m))
            if key in seen:
                return False
            seen.add(key)
            m += 1
    return True


def has_recurring_left_proper(seq: DirectiveSequence) -> bool:
    return any(seq.bindings[n].is_left_proper() for n in seq.period)


# -- automata over classes ----------------------------------------------------

class GeneratedAutomaton(OmegaAutomaton):
    """``B_x`` for a set of targets: reads ``(class index, letter)`` pairs.

    A state ``(a_{n-1}, h_n, q)`` keeps the previous letter for the congeniality
    check, the morphism ``h_L ∘ σ_0 ⋯ σ_{n-1}`` (which is what the class product
    ``ξ_0⋯ξ_{n-1}`` is used for) and a state of the product automaton fed with
    ``h_L(u_n)``.  With ``project=True`` letters are guessed and the alphabet is
    the class indices alone (the automaton ``C_x``).
    """

    def __init__(self, algebra: SubstitutionAlgebra, classes: Sequence[SubstClass], targets,
                 project: bool = False, class_names: Sequence[str] | None = None):
        self.algebra = algebra
        self.classes = tuple(classes)
        self.inner = ProductAutomaton(algebra.semigroup, targets)
        self.project = project
        d = algebra.d
        if project:
            self.alphabet = tuple(range(len(self.classes)))
        else:
            self.alphabet = tuple((i, a) for i in range(len(self.classes)) for a in range(d))
        self.class_names = tuple(class_names) if class_names else tuple(f"xi{i}" for i in range(len(self.classes)))

    def initial_states(self):
        return [(None, self.algebra.index_L, q) for q in self.inner.initial_states()]

    def _step(self, state, i, a):
        prev, h, q = state
        xi = self.classes[i]
        if prev is None:
            m = int(self.algebra.morphisms[xi.compose(h), a])
        else:
            if xi.head(a) != prev:
                return []
            m = xi.tail(a, h)
        h2 = xi.compose(h)
        return [(a, h2, q2) for q2 in self.inner.successors(q, m)]

    def successors(self, state, letter):
        if self.project:
            out = []
            for a in range(self.algebra.d):
                out.extend(self._step(state, letter, a))
            return out
        i, a = letter
        return self._step(state, i, a)

    def is_accepting(self, state):
        return self.inner.is_accepting(state[2])

    def letter_label(self, letter):
        if self.project:
            return self.class_names[letter]
        return f"{self.class_names[letter[0]]}/{letter[1]}"


def build_Bx(algebra: SubstitutionAlgebra, classes, x) -> GeneratedAutomaton:
    return GeneratedAutomaton(algebra, classes, [x])


def build_generated_automaton(algebra: SubstitutionAlgebra, classes) -> GeneratedAutomaton:
    """Union of ``B_x`` over ``x ∈ H``."""
    H = algebra.semigroup.accepting_omega
    return GeneratedAutomaton(algebra, classes, [omega_key(w) for w in sorted(H)])


def value_universe(semigroup: OmegaSemigroup) -> list:
    """Keys of every value a non-empty word can take."""
    return [finite_key(x) for x in range(1, semigroup.size)] + \
        [omega_key(w) for w in range(semigroup.omega_size)]


def generated_closure_meets(semigroup: OmegaSemigroup, X: Iterable, H=None) -> bool:
    """Does the sub-ω-semigroup generated by ``X`` contain an element of ``H``?"""
    H = semigroup.accepting_omega if H is None else H
    fin = sorted({x for kind, x in X if kind == "f" and x != ONE})
    omg = sorted({w for kind, w in X if kind == "w"})
    closure = set(fin)
    frontier = list(fin)
    mul = semigroup.mul
    while frontier:
        x = frontier.pop()
        for y in fin:
            z = int(mul[x, y])
            if z not in closure:
                closure.add(z)
                frontier.append(z)
    prefixes = np.array(sorted(closure | {ONE}), dtype=np.int64)
    targets = list(omg)
    if closure:
        targets.extend(int(semigroup.omega[m]) for m in closure)
    if not targets:
        return False
    targets = np.array(sorted(set(targets)), dtype=np.int64)
    vals = semigroup.mixed[np.ix_(prefixes, targets)]
    return bool(np.isin(vals, list(H)).any())


def generating_sets(semigroup: OmegaSemigroup, universe: Sequence | None = None, max_size: int | None = None) -> list:
    """Minimal sets ``X`` (``|X| ≤ |Σ|``) whose generated sub-ω-semigroup meets ``H``.

    At most ``|Σ|`` congenial words exist, so larger sets never occur as ``X_s``.
    """
    universe = list(universe) if universe is not None else value_universe(semigroup)
    max_size = max_size or semigroup.alphabet_size
    guard = get_config().max_candidates
    found: list = []
    checked = 0
    for size in range(1, max_size + 1):
        for X in itertools.combinations(universe, size):
            fx = frozenset(X)
            if any(m <= fx for m in found):
                continue
            checked += 1
            if checked > guard:
                raise GuardExceeded(f"more than {guard} candidate generating sets")
            if generated_closure_meets(semigroup, fx):
                found.append(fx)
    return found


def build_directed_automaton(algebra: SubstitutionAlgebra, classes, family: list | None = None,
                             class_names=None) -> OmegaAutomaton:
    """``⋁_{X ∈ 𝒳} ⋀_{x ∈ X} C_x`` over class indices."""
    sg = algebra.semigroup
    family = generating_sets(sg) if family is None else family
    branches = []
    for X in family:
        parts = [GeneratedAutomaton(algebra, classes, [x], project=True, class_names=class_names)
                 for x in sorted(X)]
        branches.append(parts[0] if len(parts) == 1 else IntersectionAutomaton(parts))
    alphabet = tuple(range(len(classes)))
    return UnionAutomaton(branches, alphabet=alphabet)


def relabel_for_finite_S(automaton: OmegaAutomaton, names: Sequence[str], class_index: Mapping[str, int],
                         letters: int | None = None) -> RelabeledAutomaton:
    """Automaton over substitution names (or ``(name, letter)`` pairs) from one over class indices."""
    for n in names:
        if n not in class_index:
            raise KeyError(f"unbound substitution name {n!r}")
    if letters is None:
        mapping = {n: class_index[n] for n in names}
        labels = {n: n for n in names}
    else:
        mapping = {(n, a): (class_index[n], a) for n in names for a in range(letters)}
        labels = {(n, a): f"{n}/{a}" for n in names for a in range(letters)}
    return RelabeledAutomaton(automaton, mapping, labels)


# -- driver -------------------------------------------------------------------

class AdicContext:
    """Semigroup, algebra and classes for one automaton and one named substitution set."""

    def __init__(self, automaton, bindings: Mapping[str, Substitution], full_algebra: bool = False):
        self.automaton = as_buchi(automaton)
        self.semigroup = OmegaSemigroup(self.automaton)
        self.bindings = dict(bindings)
        gens = None if full_algebra else list(self.bindings.values())
        self.algebra = SubstitutionAlgebra(self.semigroup, generators=gens)
        self.names = tuple(sorted(self.bindings))
        self.classes = []
        self.class_index = {}
        for n in self.names:
            xi = self.algebra.class_of(self.bindings[n])
            if xi not in self.classes:
                self.classes.append(xi)
            self.class_index[n] = self.classes.index(xi)
        self._generated = None
        self._family = None

    @property
    def generated_automaton(self) -> GeneratedAutomaton:
        if self._generated is None:
            self._generated = build_generated_automaton(self.algebra, self.classes)
        return self._generated

    @property
    def family(self) -> list:
        if self._family is None:
            self._family = generating_sets(self.semigroup)
        return self._family

    def directed_automaton(self) -> OmegaAutomaton:
        return build_directed_automaton(self.algebra, self.classes, self.family)

    def class_trace(self, seq: DirectiveSequence, with_letters: bool):
        def conv(names, letters):
            idx = [self.class_index[n] for n in names]
            return list(zip(idx, letters)) if with_letters else idx

        if with_letters:
            return conv(seq.pre, seq.letters[0]), conv(seq.period, seq.letters[1])
        return conv(seq.pre, None), conv(seq.period, None)

    def generated_value(self, seq: DirectiveSequence):
        """``h_L`` of the generated word, by running the ``h_L(u_n)`` stream to its lasso."""
        alg = self.algebra
        P, Q = len(seq.pre), len(seq.period)
        h = alg.index_L
        stream = []
        seen = {}
        n = 0
        while True:
            if n >= P and (n - P) % Q == 0:
                key = (h, seq.letter(n - 1) if n else None)
                if key in seen:
                    start = seen[key]
                    return infinite_product_value(self.semigroup, stream[:start], stream[start:])
                seen[key] = len(stream)
            xi = alg.class_of(seq.sub(n))
            a = seq.letter(n)
            stream.append(int(alg.morphisms[xi.compose(h), a]) if n == 0 else xi.tail(a, h))
            h = xi.compose(h)
            n += 1

    def directed_values(self, seq: DirectiveSequence) -> set:
        """``{x : C_x accepts the trace}``, found by splitting target sets (group testing)."""
        trace = self.class_trace(seq, with_letters=False)
        found = set()

        def probe(keys):
            aut = GeneratedAutomaton(self.algebra, self.classes, keys, project=True)
            if not accepts_lasso(aut, trace[0], trace[1]):
                return
            if len(keys) == 1:
                found.add(keys[0])
                return
            mid = len(keys) // 2
            probe(keys[:mid])
            probe(keys[mid:])

        probe(value_universe(self.semigroup))
        return found


def decide_up(seq: DirectiveSequence, automaton=None, mode: str = "generated",
              context: AdicContext | None = None, via: str = "values") -> bool:
    """Membership of the word generated (or some word directed) by ``seq`` in ``L(A)``.

    ``mode="generated"`` needs a congenial augmentation and runs the lasso
    through ``B``.  ``mode="directed"`` evaluates ``⋁_X ⋀_{x∈X} C_x`` on the
    trace, either through the set of accepting ``C_x`` (``via="values"``) or
    by lasso search on the explicit combination (``via="automaton"``).
    """
    if context is None:
        if automaton is None:
            raise ValueError("need an automaton or a context")
        context = AdicContext(automaton, seq.bindings)
    if mode == "generated":
        if not seq.augmented:
            raise ValueError("generated mode needs a letter augmentation")
        if not is_congenial(seq):
            raise NotCongenialError("augmentation is not congenial")
        pre, period = context.class_trace(seq, with_letters=True)
        return accepts_lasso(context.generated_automaton, pre, period)
    if mode == "directed":
        if via == "automaton":
            pre, period = context.class_trace(seq, with_letters=False)
            return accepts_lasso(context.directed_automaton(), pre, period)
        values = context.directed_values(seq)
        return generated_closure_meets(context.semigroup, values)
    raise ValueError(f"unknown mode {mode!r}")


# -- explicit lasso of a generated word -------------------------------------

def _prefix_function(y) -> list:
    """``pi[i]`` = length of the longest proper border of ``y[:i+1]``."""
    pi = [0] * len(y)
    k = 0
    for i in range(1, len(y)):
        while k and y[i] != y[k]:
            k = pi[k - 1]
        if y[i] == y[k]:
            k += 1
        pi[i] = k
    return pi


def canonical_up(u, v) -> tuple:
    """Shortest ``(u, v)`` presentation of ``u v^ω`` (primitive period, shortest preperiod)."""
    u, v = tuple(u), tuple(v)
    n = len(v)
    for p in range(1, n + 1):
        if n % p == 0 and v[:p] * (n // p) == v:
            v = v[:p]
            break
    while u and u[-1] == v[-1]:
        u = u[:-1]
        v = v[-1:] + v[:-1]
    return u, v


def _compare_up(u1, v1, u2, v2) -> bool:
    return canonical_up(u1, v1) == canonical_up(u2, v2)


def _candidate_periods(x: Sequence[int], limit: int = 50):
    """Pairs ``(s, p)`` with ``x[s:]`` of period ``p`` (repeated at least three times), by ``s + p``.

    Uses the prefix function of the reversed word: the suffix ``x[s:]`` of
    length ``m`` has smallest period ``m - border(m)``.
    """
    y = x[::-1]
    n = len(y)
    pi = _prefix_function(y)
    cands = []
    for m in range(n // 2, n + 1):
        p = m - pi[m - 1]
        if 3 * p <= m:
            cands.append((n - m + p, n - m, p))
    cands.sort()
    return [(s, p) for _, s, p in cands[:limit]]


def _is_fixed_up(tau: Substitution, u: tuple, v: tuple) -> bool:
    """Exact test of ``τ(u v^ω) = u v^ω`` with cheap necessary conditions first."""
    u, v = canonical_up(u, v)
    p = len(v)
    if sum(len(tau.images[b]) for b in v) % p:
        return False
    tv = apply(tau, v)
    if any(tv[i] != tv[i + p] for i in range(len(tv) - p)):
        return False
    return _compare_up(apply(tau, u), tv, u, v)


def _fixed_point_prefix(tau: Substitution, c: int, n: int) -> tuple:
    """First ``n`` letters of ``τ^ω(c)`` when ``τ(c)`` starts with ``c`` and is longer than ``c``.

    ``τ^m(c)`` is then a prefix of ``τ^{m+1}(c)``; images truncated to ``n``
    letters are squared until the image of ``c`` is long enough.
    """
    images = [w[:n] for w in tau.images]
    while len(images[c]) < n:
        images = [_apply_truncated(images, w, n) for w in images]
    return images[c]


def _apply_truncated(images, w, n: int) -> tuple:
    out = []
    for b in w:
        out.extend(images[b])
        if len(out) >= n:
            break
    return tuple(out[:n])


def generated_lasso(seq: DirectiveSequence, max_prefix: int = 100_000):
    """``("finite", w)``, ``("lasso", (u, v))`` when the generated word is found to be
    ultimately periodic (verified exactly), or ``None`` if no lasso was detected."""
    if not is_congenial(seq):
        raise NotCongenialError("augmentation is not congenial")
    P, Q = len(seq.pre), len(seq.period)
    tau = compose_all([seq.sub(n) for n in range(P, P + Q)])
    c = seq.letter(P + Q - 1)
    pre_map = compose_all([seq.sub(n) for n in range(P)]) if P else None
    if tau.images[c] == (c,):
        gamma = (c,)
        return ("finite", pre_map(gamma) if pre_map else gamma)
    n = 1024
    while n <= max_prefix:
        t = _fixed_point_prefix(tau, c, n)
        for s, p in _candidate_periods(t):
            u, v = t[:s], t[s:s + p]
            if (u + v)[0] == c and _is_fixed_up(tau, u, v):
                if pre_map is None:
                    return ("lasso", (u, v))
                return ("lasso", (pre_map(u), pre_map(v)))
        n *= 4
    return None
