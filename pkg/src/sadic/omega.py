"""Büchi and parity automata, transition ω-semigroups and lasso membership.

The finite ω-semigroup recognising ``L(A)`` is the transition ω-semigroup of
the Büchi automaton ``A``: a finite word is summarised by its *profile*, the
``Q × Q`` matrix over ``{NONE < PATH < ACC}`` recording whether a run from
``q`` to ``r`` exists and whether it can enter an accepting state.  An
infinite word is summarised by the set of states from which it has an
accepting run (a bitmask).

Element ids: ``0`` is the adjoined neutral element ``1_M``; ``1..K-1`` are
profiles of non-empty words.  ω-sort elements have their own id space.
"""
from __future__ import annotations

import itertools
from collections import deque
from typing import Hashable, Iterable, Sequence

import numpy as np

from .config import get_config
from .errors import AlphabetError, GuardExceeded

NONE, PATH, ACC = 0, 1, 2
ONE = 0  # id of the adjoined neutral element 1_M


class OmegaAutomaton:
    """Protocol for (possibly implicit) nondeterministic Büchi automata."""

    alphabet: Sequence

    def initial_states(self) -> Iterable[Hashable]:
        raise NotImplementedError

    def successors(self, state, letter) -> Iterable[Hashable]:
        raise NotImplementedError

    def is_accepting(self, state) -> bool:
        raise NotImplementedError

    def letter_label(self, letter) -> str:
        return str(letter)

    def materialize(self, max_states: int | None = None) -> "BuchiAutomaton":
        """Explicit copy restricted to states reachable from the initial states."""
        max_states = max_states or get_config().max_automaton_states
        ids = {}
        labels = []
        queue = deque()
        for s in self.initial_states():
            if s not in ids:
                ids[s] = len(labels)
                labels.append(s)
                queue.append(s)
        transitions = []
        while queue:
            s = queue.popleft()
            for a in self.alphabet:
                for t in self.successors(s, a):
                    if t not in ids:
                        if len(labels) >= max_states:
                            raise GuardExceeded(f"automaton exceeds {max_states} states")
                        ids[t] = len(labels)
                        labels.append(t)
                        queue.append(t)
                    transitions.append((ids[s], a, ids[t]))
        initial = {ids[s] for s in self.initial_states()}
        accepting = {i for i, s in enumerate(labels) if self.is_accepting(s)}
        return BuchiAutomaton(tuple(self.alphabet), len(labels), initial, transitions, accepting,
                              letter_names=tuple(self.letter_label(a) for a in self.alphabet),
                              state_labels=tuple(labels))


class BuchiAutomaton(OmegaAutomaton):
    """Explicit Büchi automaton ``(Σ, Q, I, Δ, F)`` with states ``0..n-1``."""

    def __init__(self, alphabet, n_states: int, initial, transitions, accepting,
                 letter_names=None, state_labels=None):
        self.alphabet = tuple(alphabet)
        self.n_states = int(n_states)
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)
        letters = set(self.alphabet)
        delta: dict = {}
        for p, a, q in transitions:
            if a not in letters:
                raise AlphabetError(f"transition letter {a!r} not in alphabet")
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise ValueError(f"transition ({p}, {a!r}, {q}) uses an undeclared state")
            delta.setdefault((p, a), set()).add(q)
        self.delta = {k: tuple(sorted(v)) for k, v in delta.items()}
        if not self.initial <= set(range(self.n_states)) or not self.accepting <= set(range(self.n_states)):
            raise ValueError("initial/accepting states must be declared states")
        self.letter_names = tuple(letter_names) if letter_names else tuple(str(a) for a in self.alphabet)
        self.state_labels = state_labels

    def initial_states(self):
        return sorted(self.initial)

    def successors(self, state, letter):
        return self.delta.get((state, letter), ())

    def is_accepting(self, state):
        return state in self.accepting

    def letter_label(self, letter):
        return self.letter_names[self.alphabet.index(letter)]

    def transitions(self):
        for (p, a), qs in sorted(self.delta.items(), key=lambda kv: (kv[0][0], self.alphabet.index(kv[0][1]))):
            for q in qs:
                yield p, a, q

    def _key(self):
        return (self.alphabet, self.n_states, self.initial, self.accepting, tuple(self.transitions()))

    def __eq__(self, other):
        return isinstance(other, BuchiAutomaton) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"BuchiAutomaton(|Σ|={len(self.alphabet)}, |Q|={self.n_states}, "
                f"I={sorted(self.initial)}, F={sorted(self.accepting)}, |Δ|={sum(map(len, self.delta.values()))})")


class ParityAutomaton(OmegaAutomaton):
    """Deterministic parity automaton; accepts when the lim sup of indices is even."""

    def __init__(self, alphabet, n_states: int, initial: int, delta: dict, index: Sequence[int], letter_names=None):
        self.alphabet = tuple(alphabet)
        self.n_states = n_states
        self.initial = initial
        self.delta = dict(delta)
        self.index = tuple(index)
        for q in range(n_states):
            for a in self.alphabet:
                if (q, a) not in self.delta:
                    raise ValueError(f"parity automaton transition function undefined on ({q}, {a!r})")
        if len(self.index) != n_states:
            raise ValueError("index must cover every state")
        self.letter_names = tuple(letter_names) if letter_names else tuple(str(a) for a in self.alphabet)

    def run_lasso(self, u, v) -> bool:
        """Direct evaluation of the unique run on ``u v^ω``."""
        q = self.initial
        for a in u:
            q = self.delta[(q, a)]
        seen = {}
        visits = []
        while q not in seen:
            seen[q] = len(visits)
            block = []
            for a in v:
                q2 = self.delta[(q, a)]
                block.append(self.index[q2])
                q = q2
            visits.append((q, block))
        start = seen[q]
        loop_max = max(max(b) for _, b in visits[start:])
        return loop_max % 2 == 0

    def to_buchi(self) -> BuchiAutomaton:
        """Guess the point after which the maximal index seen infinitely often is an even ``k``."""
        n = self.n_states
        evens = sorted({k for k in self.index if k % 2 == 0})
        ids = {(q, None): q for q in range(n)}
        for k in evens:
            for q in range(n):
                if self.index[q] <= k:
                    ids[(q, k)] = len(ids)
        transitions = []
        for q in range(n):
            for a in self.alphabet:
                r = self.delta[(q, a)]
                transitions.append((q, a, r))
                for k in evens:
                    if self.index[r] <= k:
                        transitions.append((q, a, ids[(r, k)]))
        for k in evens:
            for q in range(n):
                if (q, k) not in ids:
                    continue
                for a in self.alphabet:
                    r = self.delta[(q, a)]
                    if (r, k) in ids:
                        transitions.append((ids[(q, k)], a, ids[(r, k)]))
        accepting = {i for (q, k), i in ids.items() if k is not None and self.index[q] == k}
        labels = [None] * len(ids)
        for key, i in ids.items():
            labels[i] = key
        return BuchiAutomaton(self.alphabet, len(ids), {self.initial}, transitions, accepting,
                              letter_names=self.letter_names, state_labels=tuple(labels))

    def initial_states(self):
        return self.to_buchi().initial_states()

    def successors(self, state, letter):
        raise TypeError("convert with to_buchi() first")

    def is_accepting(self, state):
        raise TypeError("convert with to_buchi() first")


def as_buchi(automaton) -> BuchiAutomaton:
    if isinstance(automaton, ParityAutomaton):
        return automaton.to_buchi()
    return automaton


# -- lasso membership -------------------------------------------------------

def has_accepting_cycle(roots, successors, accepting, max_nodes: int | None = None) -> bool:
    """On-the-fly Tarjan search for a reachable non-trivial SCC with an accepting node."""
    max_nodes = max_nodes or get_config().max_automaton_states
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    succ_cache: dict = {}

    def succ(node):
        s = succ_cache.get(node)
        if s is None:
            s = succ_cache[node] = tuple(dict.fromkeys(successors(node)))
        return s

    counter = 0
    for root in roots:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(succ(root)))]
        while work:
            node, it = work[-1]
            pushed = False
            for nxt in it:
                if nxt not in index:
                    if counter >= max_nodes:
                        raise GuardExceeded(f"lasso product exceeds {max_nodes} nodes")
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(succ(nxt))))
                    pushed = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if pushed:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                if any(accepting(w) for w in comp):
                    if len(comp) > 1 or node in succ(node):
                        return True
    return False


def accepts_lasso(automaton: OmegaAutomaton, u: Sequence, v: Sequence) -> bool:
    """Does the (possibly implicit) automaton accept ``u v^ω``?  Direct run search."""
    u, v = tuple(u), tuple(v)
    if not v:
        raise ValueError("period must be non-empty")
    if isinstance(automaton, ParityAutomaton):
        return automaton.run_lasso(u, v)
    word = u + v
    n, loop = len(word), len(u)

    def successors(node):
        q, pos = node
        nxt = pos + 1 if pos + 1 < n else loop
        return ((r, nxt) for r in automaton.successors(q, word[pos]))

    def accepting(node):
        return node[1] >= loop and automaton.is_accepting(node[0])

    roots = [(q, 0) for q in automaton.initial_states()]
    return has_accepting_cycle(roots, successors, accepting)


# -- transition ω-semigroup -------------------------------------------------

def profile_product(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    both = (x[:, :, None] > 0) & (y[None, :, :] > 0)
    comb = np.where(both, np.maximum(x[:, :, None], y[None, :, :]), 0)
    return comb.max(axis=1).astype(np.uint8)


def letter_profile(automaton: BuchiAutomaton, letter) -> np.ndarray:
    n = automaton.n_states
    m = np.zeros((n, n), dtype=np.uint8)
    for p in range(n):
        for q in automaton.successors(p, letter):
            m[p, q] = ACC if q in automaton.accepting else PATH
    return m


class OmegaSemigroup:
    """Transition ω-semigroup ``M_L`` of a Büchi automaton with ``h_L`` and ``H``.

    Attributes
    ----------
    profiles : list of ``Q × Q`` uint8 matrices, index = element id (entry 0 is the identity matrix).
    mul : ``K × K`` product table on ``M_f' = M_f ∪ {1_M}``.
    letter : element id of each letter's profile.
    omega : ω-id of ``m^ω`` for each finite id (``-1`` for ``1_M``).
    mixed : ``K × |M_ω|`` mixed-product table.
    vectors : bitmask of each ω-id (states with an accepting run).
    accepting_omega : the set ``H`` of ω-ids meeting the initial states.
    """

    def __init__(self, automaton, max_size: int | None = None):
        automaton = as_buchi(automaton)
        self.automaton = automaton
        self.alphabet_size = len(automaton.alphabet)
        max_size = max_size or get_config().max_semigroup
        n = automaton.n_states
        self.n_states = n
        ident = np.zeros((n, n), dtype=np.uint8)
        np.fill_diagonal(ident, PATH)
        profiles = [ident]
        words: list = [()]
        keys: dict = {}
        letter_ids = []
        rmul: list = [None]
        letter_mats = [letter_profile(automaton, a) for a in automaton.alphabet]
        queue = deque()
        for a, m in enumerate(letter_mats):
            k = m.tobytes()
            if k not in keys:
                keys[k] = len(profiles)
                profiles.append(m)
                words.append((a,))
                rmul.append(None)
                queue.append(keys[k])
            letter_ids.append(keys[k])
        while queue:
            x = queue.popleft()
            row = []
            for a, m in enumerate(letter_mats):
                y = profile_product(profiles[x], m)
                k = y.tobytes()
                if k not in keys:
                    if len(profiles) >= max_size:
                        raise GuardExceeded(f"semigroup exceeds {max_size} elements")
                    keys[k] = len(profiles)
                    profiles.append(y)
                    words.append(words[x] + (a,))
                    rmul.append(None)
                    queue.append(keys[k])
                row.append(keys[k])
            rmul[x] = row
        rmul[ONE] = list(letter_ids)
        self.profiles = profiles
        self.words = words
        self.letter = tuple(letter_ids)
        self._keys = keys
        K = len(profiles)
        self.size = K
        rm = np.array(rmul, dtype=np.int32)
        mul = np.zeros((K, K), dtype=np.int32)
        for y in range(K):
            col = np.arange(K, dtype=np.int32)
            for a in words[y]:
                col = rm[col, a]
            mul[:, y] = col
        self.mul = mul
        self._build_omega()

    # -- ω-sort --------------------------------------------------------------
    def _omega_vector(self, m: int) -> int:
        seen = []
        x = m
        while x not in seen:
            seen.append(x)
            x = int(self.mul[x, m])
        c = np.maximum.reduce([self.profiles[p] for p in seen])
        good = [q for q in range(self.n_states) if c[q, q] == ACC]
        mask = 0
        for q in range(self.n_states):
            if q in good or any(c[q, p] > 0 for p in good):
                mask |= 1 << q
        return mask

    def _build_omega(self):
        n, K = self.n_states, self.size
        rowmask = np.zeros((K, n), dtype=np.int64)
        for s in range(K):
            prof = self.profiles[s]
            for q in range(n):
                rowmask[s, q] = sum(1 << p for p in range(n) if prof[q, p] > 0)
        self._rowmask = rowmask
        vec_ids: dict = {}
        vectors: list = []

        def intern(mask):
            if mask not in vec_ids:
                vec_ids[mask] = len(vectors)
                vectors.append(mask)
            return vec_ids[mask]

        omega = [-1] * K
        for m in range(1, K):
            omega[m] = intern(self._omega_vector(m))
        base = list(vectors)
        for s in range(K):
            for mask in base:
                intern(self._mixed_mask(s, mask))
        self.vectors = vectors
        self._vec_ids = vec_ids
        self.omega = np.array(omega, dtype=np.int32)
        mixed = np.zeros((K, len(vectors)), dtype=np.int32)
        for s in range(K):
            for w, mask in enumerate(vectors):
                mixed[s, w] = intern(self._mixed_mask(s, mask))
        if len(vectors) != mixed.shape[1]:
            raise AssertionError("ω-sort not closed under mixed product")
        self.mixed = mixed
        init = sum(1 << q for q in self.automaton.initial)
        self.initial_mask = init
        self.accepting_omega = frozenset(w for w, mask in enumerate(vectors) if mask & init)
        self.idempotents = tuple(e for e in range(1, K) if self.mul[e, e] == e)

    def _mixed_mask(self, s: int, mask: int) -> int:
        out = 0
        row = self._rowmask[s]
        for q in range(self.n_states):
            if int(row[q]) & mask:
                out |= 1 << q
        return out

    # -- queries --------------------------------------------------------------
    @property
    def omega_size(self) -> int:
        return len(self.vectors)

    def product(self, *elements: int) -> int:
        x = ONE
        for e in elements:
            x = int(self.mul[x, e])
        return x

    def word_value(self, w: Sequence[int]) -> int:
        """``h_L(w)`` for a finite word (``1_M`` for the empty word)."""
        x = ONE
        letter = self.letter
        mul = self.mul
        for a in w:
            x = int(mul[x, letter[a]])
        return x

    def omega_power(self, m: int) -> int:
        if m == ONE:
            raise ValueError("the ω-power of the adjoined identity is undefined")
        return int(self.omega[m])

    def mixed_product(self, s: int, w: int) -> int:
        return int(self.mixed[s, w])

    def up_value(self, u: Sequence[int], v: Sequence[int]) -> int:
        """``h_L(u v^ω) = h_L(u) · h_L(v)^ω``."""
        if not v:
            raise ValueError("period must be non-empty")
        return self.mixed_product(self.word_value(u), self.omega_power(self.word_value(v)))

    def is_accepting(self, w: int) -> bool:
        return w in self.accepting_omega

    def vector_states(self, w: int) -> frozenset:
        mask = self.vectors[w]
        return frozenset(q for q in range(self.n_states) if mask >> q & 1)

    def profile_of(self, w: Sequence[int]) -> np.ndarray:
        return self.profiles[self.word_value(w)]

    def id_of_profile(self, profile: np.ndarray) -> int:
        return self._keys[np.asarray(profile, dtype=np.uint8).tobytes()]

    def __repr__(self):
        return f"OmegaSemigroup(|M_f'|={self.size}, |M_ω|={self.omega_size}, |H|={len(self.accepting_omega)})"


def build_semigroup(automaton, max_size: int | None = None) -> OmegaSemigroup:
    return OmegaSemigroup(automaton, max_size=max_size)


def up_value(u, v, semigroup: OmegaSemigroup) -> int:
    return semigroup.up_value(u, v)


def accepts_up(automaton, u, v, semigroup: OmegaSemigroup | None = None) -> bool:
    """Acceptance of ``u v^ω`` decided through the ω-semigroup."""
    semigroup = semigroup or OmegaSemigroup(automaton)
    return semigroup.up_value(tuple(u), tuple(v)) in semigroup.accepting_omega


# -- A_x: infinite products in M_f' -----------------------------------------

def finite_key(x: int):
    return ("f", int(x))


def omega_key(w: int):
    return ("w", int(w))


class ProductAutomaton(OmegaAutomaton):
    """Büchi automaton over ``M_f'`` accepting sequences whose product lies in ``targets``.

    ``1_M`` letters are discarded.  For ω-sort targets the automaton guesses a
    factorisation ``s · e · e · e ...`` with ``e`` idempotent; for finite-sort
    targets it guesses the point after which only ``1_M`` is read.  Targets are
    keys ``("f", id)`` or ``("w", ω-id)``; a single target gives the automaton
    ``A_x``, a set gives the union of the ``A_x``.
    """

    def __init__(self, semigroup: OmegaSemigroup, targets):
        self.semigroup = semigroup
        self.targets = frozenset(targets)
        for kind, x in self.targets:
            limit = semigroup.size if kind == "f" else semigroup.omega_size
            if kind not in ("f", "w") or not 0 <= x < limit:
                raise ValueError(f"target {(kind, x)!r} is not an element of the semigroup")
        self.alphabet = tuple(range(semigroup.size))
        mul, mixed, omega = semigroup.mul, semigroup.mixed, semigroup.omega
        self._switch = []
        for y in range(semigroup.size):
            self._switch.append(tuple(e for e in semigroup.idempotents
                                      if ("w", int(mixed[y, omega[e]])) in self.targets))
        self._finite = frozenset(x for kind, x in self.targets if kind == "f")
        self._mul = mul

    def initial_states(self):
        out = [("p", ONE)]
        out.extend(("b", e, ONE) for e in self._switch[ONE])
        if ONE in self._finite:
            out.append(("d",))
        return out

    def successors(self, state, m):
        tag = state[0]
        mul = self._mul
        if tag == "p":
            y = int(mul[state[1], m])
            out = [("p", y)]
            out.extend(("b", e, ONE) for e in self._switch[y])
            if y in self._finite:
                out.append(("d",))
            return out
        if tag == "d":
            return [("d",)] if m == ONE else []
        e = state[1]
        c = ONE if tag == "a" else state[2]
        c2 = int(mul[c, m])
        if c2 == e:
            return [("a", e), ("b", e, c2)]
        return [("b", e, c2)]

    def is_accepting(self, state):
        return state[0] in ("a", "d")

    def letter_label(self, letter):
        return f"m{letter}"


def build_Ax(semigroup: OmegaSemigroup, x) -> ProductAutomaton:
    """``A_x`` for a single element key (see :func:`finite_key` / :func:`omega_key`)."""
    return ProductAutomaton(semigroup, [x])


def infinite_product_value(semigroup: OmegaSemigroup, prefix: Sequence[int], period: Sequence[int]):
    """Product of the ultimately periodic sequence ``prefix period^ω`` over ``M_f'`` (1_M discarded)."""
    p = semigroup.product(*prefix)
    q = semigroup.product(*period)
    if q == ONE:
        return finite_key(p)
    return omega_key(semigroup.mixed_product(p, semigroup.omega_power(q)))


# -- combinators on implicit automata ----------------------------------------

class IntersectionAutomaton(OmegaAutomaton):
    """Synchronous product with the generalised Büchi condition compiled to Büchi.

    The counter ``j`` waits for component ``j`` to visit an accepting state;
    ``j == k`` marks a completed round and is the only accepting value.
    """

    def __init__(self, components: Sequence[OmegaAutomaton]):
        if not components:
            raise ValueError("empty intersection")
        self.components = tuple(as_buchi(c) for c in components)
        self.alphabet = tuple(components[0].alphabet)
        self.k = len(self.components)

    def initial_states(self):
        return [(qs, 0) for qs in itertools.product(*(c.initial_states() for c in self.components))]

    def successors(self, state, letter):
        qs, j = state
        base = 0 if j == self.k else j
        out = []
        for nxt in itertools.product(*(c.successors(q, letter) for c, q in zip(self.components, qs))):
            jj = base + 1 if self.components[base].is_accepting(nxt[base]) else base
            out.append((nxt, jj))
        return out

    def is_accepting(self, state):
        return state[1] == self.k

    def letter_label(self, letter):
        return self.components[0].letter_label(letter)


class UnionAutomaton(OmegaAutomaton):
    def __init__(self, components: Sequence[OmegaAutomaton], alphabet=None):
        self.components = tuple(as_buchi(c) for c in components)
        if alphabet is None:
            if not self.components:
                raise ValueError("empty union needs an explicit alphabet")
            alphabet = self.components[0].alphabet
        self.alphabet = tuple(alphabet)

    def initial_states(self):
        return [(i, q) for i, c in enumerate(self.components) for q in c.initial_states()]

    def successors(self, state, letter):
        i, q = state
        return [(i, r) for r in self.components[i].successors(q, letter)]

    def is_accepting(self, state):
        i, q = state
        return self.components[i].is_accepting(q)

    def letter_label(self, letter):
        return self.components[0].letter_label(letter) if self.components else str(letter)


class RelabeledAutomaton(OmegaAutomaton):
    """Reads ``letter`` as ``mapping[letter]`` in the underlying automaton."""

    def __init__(self, inner: OmegaAutomaton, mapping: dict, labels: dict | None = None):
        self.inner = inner
        self.mapping = dict(mapping)
        self.alphabet = tuple(self.mapping)
        self.labels = labels or {}

    def initial_states(self):
        return self.inner.initial_states()

    def successors(self, state, letter):
        return self.inner.successors(state, self.mapping[letter])

    def is_accepting(self, state):
        return self.inner.is_accepting(state)

    def letter_label(self, letter):
        return self.labels.get(letter, str(letter))
