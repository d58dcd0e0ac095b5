"""Deterministic finite-word automata: preimages of monoid morphisms, marked
concatenation, products, emptiness and shortest witnesses."""
from __future__ import annotations

import itertools
from collections import deque
from typing import Sequence

import numpy as np

from .config import get_config
from .errors import AlphabetError, GuardExceeded


class Dfa:
    """Complete DFA over letters ``0..k-1`` with states ``0..n-1``."""

    def __init__(self, alphabet_size: int, delta, initial: int, accepting, state_labels=None,
                 letter_names=None):
        self.delta = np.asarray(delta, dtype=np.int64).reshape(-1, alphabet_size)
        self.alphabet_size = int(alphabet_size)
        self.n_states = self.delta.shape[0]
        self.initial = int(initial)
        self.accepting = frozenset(int(q) for q in accepting)
        if self.n_states == 0:
            raise ValueError("a DFA needs at least one state")
        if self.delta.size and (self.delta.min() < 0 or self.delta.max() >= self.n_states):
            raise ValueError("transition targets must be declared states")
        if not 0 <= self.initial < self.n_states or not self.accepting <= set(range(self.n_states)):
            raise ValueError("initial/accepting states must be declared states")
        self.state_labels = state_labels
        self.letter_names = tuple(letter_names) if letter_names else tuple(str(a) for a in range(alphabet_size))

    def step(self, q: int, a: int) -> int:
        if not 0 <= a < self.alphabet_size:
            raise AlphabetError(f"letter {a} outside 0..{self.alphabet_size - 1}")
        return int(self.delta[q, a])

    def run(self, w: Sequence[int]) -> int:
        q = self.initial
        for a in w:
            q = self.step(q, a)
        return q

    def accepts(self, w: Sequence[int]) -> bool:
        return self.run(w) in self.accepting

    def words_upto(self, n: int):
        """All accepted words of length ≤ n (exhaustive; for testing)."""
        out = []
        for k in range(n + 1):
            for w in itertools.product(range(self.alphabet_size), repeat=k):
                if self.accepts(w):
                    out.append(w)
        return out

    def _key(self):
        return (self.alphabet_size, self.initial, self.accepting, self.delta.tobytes(), self.delta.shape)

    def __eq__(self, other):
        return isinstance(other, Dfa) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Dfa(|Σ|={self.alphabet_size}, |Q|={self.n_states}, F={sorted(self.accepting)})"


def _explore(alphabet_size, start, step, accepting, labels_out=False, letter_names=None):
    """Reachable-state exploration of a deterministic transition function on hashable states."""
    guard = get_config().max_dfa_states
    ids = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        s = order[i]
        row = []
        for a in range(alphabet_size):
            t = step(s, a)
            if t not in ids:
                if len(order) >= guard:
                    raise GuardExceeded(f"DFA exceeds {guard} states")
                ids[t] = len(order)
                order.append(t)
            row.append(ids[t])
        rows.append(row)
        i += 1
    acc = [ids[s] for s in order if accepting(s)]
    delta = np.array(rows, dtype=np.int64).reshape(len(order), alphabet_size)
    return Dfa(alphabet_size, delta, 0, acc, state_labels=tuple(order) if labels_out else None,
               letter_names=letter_names)


SINK = "sink"


def preimage_dfa(semigroup, h: Sequence[int], x: int, allowed) -> Dfa:
    """Words ``w`` over ``allowed`` with ``h(w) = x``; ``h`` maps letters to element ids, ``h(ε) = 1_M``."""
    if not 0 <= x < semigroup.size:
        raise ValueError(f"element {x} is not in the monoid")
    allowed = frozenset(allowed)
    mul = semigroup.mul
    k = len(h)

    def step(s, a):
        if s == SINK or a not in allowed:
            return SINK
        return int(mul[s, h[a]])

    return _explore(k, 0, step, lambda s: s == x, labels_out=True)


def concat_with_markers(parts: Sequence[tuple]) -> Dfa:
    """DFA for ``b1 L1 b2 L2 ... bk Lk`` from parts ``[(b_i, Dfa_i)]`` (subset construction)."""
    parts = list(parts)
    if not parts:
        raise ValueError("concat_with_markers needs at least one part")
    k = parts[0][1].alphabet_size
    if any(d.alphabet_size != k for _, d in parts):
        raise AlphabetError("parts use different alphabets")
    last = len(parts) - 1

    def step(subset, a):
        out = set()
        for node in subset:
            if node == "start":
                if a == parts[0][0]:
                    out.add((0, parts[0][1].initial))
                continue
            i, q = node
            dfa = parts[i][1]
            out.add((i, int(dfa.delta[q, a])))
            if i < last and q in dfa.accepting and a == parts[i + 1][0]:
                out.add((i + 1, parts[i + 1][1].initial))
        return frozenset(out)

    def accepting(subset):
        return any(node != "start" and node[0] == last and node[1] in parts[last][1].accepting for node in subset)

    return _explore(k, frozenset({"start"}), step, accepting)


def intersect(a: Dfa, b: Dfa) -> Dfa:
    if a.alphabet_size != b.alphabet_size:
        raise AlphabetError("intersecting DFAs over different alphabets")
    return _explore(a.alphabet_size, (a.initial, b.initial),
                    lambda s, c: (int(a.delta[s[0], c]), int(b.delta[s[1], c])),
                    lambda s: s[0] in a.accepting and s[1] in b.accepting)


def complement(a: Dfa) -> Dfa:
    return Dfa(a.alphabet_size, a.delta, a.initial, set(range(a.n_states)) - a.accepting,
               letter_names=a.letter_names)


def reachable(a: Dfa) -> set:
    seen = {a.initial}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        for t in a.delta[q]:
            t = int(t)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def is_empty(a: Dfa) -> bool:
    return not (reachable(a) & a.accepting)


def witness(a: Dfa):
    """Shortest accepted word, lexicographically least among the shortest; ``None`` if empty."""
    parent = {a.initial: None}
    frontier = [a.initial]
    while frontier:
        hits = [q for q in frontier if q in a.accepting]
        if hits:
            return min(_path(parent, q) for q in hits)
        nxt = []
        for q in frontier:
            for c in range(a.alphabet_size):
                t = int(a.delta[q, c])
                if t not in parent:
                    parent[t] = (q, c)
                    nxt.append(t)
        frontier = nxt
    return None


def _path(parent, q):
    out = []
    while parent[q] is not None:
        q, c = parent[q]
        out.append(c)
    return tuple(reversed(out))


def trim(a: Dfa) -> Dfa:
    """Restrict to reachable states (renumbered in BFS order)."""
    return _explore(a.alphabet_size, a.initial, lambda q, c: int(a.delta[q, c]),
                    lambda q: q in a.accepting, letter_names=a.letter_names)


def equivalent(a: Dfa, b: Dfa) -> bool:
    """Language equality via the symmetric-difference product."""
    prod = _explore(a.alphabet_size, (a.initial, b.initial),
                    lambda s, c: (int(a.delta[s[0], c]), int(b.delta[s[1], c])),
                    lambda s: (s[0] in a.accepting) != (s[1] in b.accepting))
    return is_empty(prod)
