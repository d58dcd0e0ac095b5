"""Substitutions modulo an ω-regular language: segments tables and the monoid Ξ_L.

A morphism ``h`` is a table letter → element of ``M_f'``.  For a substitution
``σ`` and letter ``a`` with ``σ(a) = b1 v1 ... bk vk`` (first-occurrence
factorisation), the segments list at ``h`` is ``[(b1, h(v1)), ..., (bk, h(vk))]``.

Segment values are stored for *all* morphisms at once: a value is a vector
indexed by morphism, interned to an integer id (``0`` = the all-``1_M``
vector).  A :class:`SubstClass` is then one tuple ``((b1, id1), ...)`` per
letter, and two substitutions are equivalent iff these tuples coincide.
"""
from __future__ import annotations

import itertools
import threading
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .config import get_config
from .errors import AlphabetError, GuardExceeded
from .omega import ONE, OmegaSemigroup
from .words import Substitution, first_occurrence_factorization


class SubstitutionAlgebra:
    """The morphism space of a semigroup and the interned segment-value vectors.

    ``generators=None`` uses every map ``Σ → M_f'``.  Otherwise the space is the
    closure of ``h_L`` under ``h ↦ h∘σ`` for the given substitutions, which is
    enough for any pipeline whose substitutions come from that set.
    """

    def __init__(self, semigroup: OmegaSemigroup, generators: Iterable[Substitution] | None = None,
                 max_morphisms: int | None = None):
        self.semigroup = semigroup
        self.d = semigroup.alphabet_size
        K = self.K = semigroup.size
        self.mul = semigroup.mul
        max_morphisms = max_morphisms or get_config().max_morphisms
        self.h_L = tuple(int(x) for x in semigroup.letter)
        self._radix = np.array([K ** a for a in range(self.d)], dtype=np.int64)
        if K ** self.d >= 2 ** 62:
            raise GuardExceeded("morphism codes overflow; semigroup too large")
        if generators is None:
            total = K ** self.d
            if total > max_morphisms:
                raise GuardExceeded(f"full morphism space has {total} > {max_morphisms} elements; "
                                    "pass generators to restrict it")
            codes = np.arange(total, dtype=np.int64)
            self.full = True
        else:
            gens = [g for g in generators]
            for g in gens:
                if g.size != self.d:
                    raise AlphabetError("generator over a different alphabet")
            seen = {self.h_L}
            queue = deque([self.h_L])
            while queue:
                h = queue.popleft()
                for g in gens:
                    h2 = tuple(self.eval_word(h, g.images[a]) for a in range(self.d))
                    if h2 not in seen:
                        if len(seen) >= max_morphisms:
                            raise GuardExceeded(f"reachable morphism space exceeds {max_morphisms}")
                        seen.add(h2)
                        queue.append(h2)
            codes = np.array(sorted(self._code(h) for h in seen), dtype=np.int64)
            self.full = False
        self.codes = codes
        self.n_morphisms = len(codes)
        self.morphisms = ((codes[:, None] // self._radix[None, :]) % K).astype(np.int32)
        self.index_L = self.index_of(self.h_L)
        self._lock = threading.Lock()
        self._vectors: list = []
        self._vector_ids: dict = {}
        self.intern(np.zeros(self.n_morphisms, dtype=np.int32))
        self.letter_vectors = tuple(self.intern(self.morphisms[:, a].copy()) for a in range(self.d))
        self._classes: dict = {}
        self._word_cache: dict = {}
        self._submonoids: dict = {}
        self.identity = self.class_of(Substitution.identity(self.d))

    # -- morphisms --------------------------------------------------------
    def _code(self, h) -> int:
        return int(sum(int(x) * self.K ** a for a, x in enumerate(h)))

    def eval_word(self, h: Sequence[int], w: Sequence[int]) -> int:
        x = ONE
        for c in w:
            x = int(self.mul[x, h[c]])
        return x

    def index_of(self, h: Sequence[int]) -> int:
        code = self._code(h)
        if self.full:
            return code
        i = int(np.searchsorted(self.codes, code))
        if i >= len(self.codes) or self.codes[i] != code:
            raise ValueError(f"morphism {tuple(h)} is outside the morphism space")
        return i

    def indices_of_codes(self, codes: np.ndarray) -> np.ndarray:
        if self.full:
            return codes
        idx = np.searchsorted(self.codes, codes)
        idx = np.minimum(idx, len(self.codes) - 1)
        if not np.array_equal(self.codes[idx], codes):
            raise ValueError("substitution leaves the restricted morphism space")
        return idx

    def morphism(self, i: int) -> tuple:
        return tuple(int(x) for x in self.morphisms[i])

    # -- value vectors ------------------------------------------------------
    def intern(self, vec: np.ndarray) -> int:
        key = vec.astype(np.int32, copy=False).tobytes()
        wid = self._vector_ids.get(key)
        if wid is not None:
            return wid
        with self._lock:
            wid = self._vector_ids.get(key)
            if wid is None:
                wid = len(self._vectors)
                self._vectors.append(vec.astype(np.int32, copy=True))
                self._vector_ids[key] = wid
        return wid

    def vector(self, wid: int) -> np.ndarray:
        return self._vectors[wid]

    def vmul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.mul[x, y]

    def word_vector(self, w: Sequence[int]) -> int:
        """Id of the vector ``h ↦ h(w)``."""
        w = tuple(w)
        wid = self._word_cache.get(w)
        if wid is None:
            vec = np.zeros(self.n_morphisms, dtype=np.int32)
            for c in w:
                vec = self.mul[vec, self.morphisms[:, c]]
            wid = self._word_cache[w] = self.intern(vec)
        return wid

    # -- classes ------------------------------------------------------------
    def make_class(self, segments) -> "SubstClass":
        segments = tuple(tuple((int(b), int(x)) for b, x in seg) for seg in segments)
        cls = self._classes.get(segments)
        if cls is None:
            cls = SubstClass(self, segments)
            cls.compose_indices  # validates closure of the morphism space
            cls = self._classes.setdefault(segments, cls)
        return cls

    def class_of(self, sigma: Substitution) -> "SubstClass":
        if sigma.size != self.d:
            raise AlphabetError(f"substitution over {sigma.size} letters, semigroup over {self.d}")
        segs = []
        for a in range(self.d):
            segs.append(tuple((b, self.word_vector(v)) for b, v in first_occurrence_factorization(sigma.images[a])))
        return self.make_class(segs)

    def segments_of(self, sigma: Substitution, a: int, h: Sequence[int]) -> list:
        """``[(b_i, h(v_i))]`` computed straight from the substitution."""
        return [(b, self.eval_word(h, v)) for b, v in first_occurrence_factorization(sigma.images[a])]

    def compose(self, xi: "SubstClass", zeta: "SubstClass") -> "SubstClass":
        return compose_classes(xi, zeta)

    def submonoid(self, letters: frozenset) -> dict:
        """Vectors ``h(w)`` for ``w`` over ``letters``, each with a shortlex-least witness word."""
        letters = frozenset(letters)
        found = self._submonoids.get(letters)
        if found is not None:
            return found
        guard = get_config().max_candidates
        out = {0: ()}
        queue = deque([0])
        order = sorted(letters)
        while queue:
            wid = queue.popleft()
            for c in order:
                nxt = self.intern(self.mul[self._vectors[wid], self.morphisms[:, c]])
                if nxt not in out:
                    if len(out) >= guard:
                        raise GuardExceeded(f"submonoid exceeds {guard} elements")
                    out[nxt] = out[wid] + (c,)
                    queue.append(nxt)
        self._submonoids[letters] = out
        return out

    def __repr__(self):
        kind = "full" if self.full else "reachable"
        return f"SubstitutionAlgebra({kind}, |morphisms|={self.n_morphisms}, |M_f'|={self.K})"


class SubstClass:
    """An element of Ξ_L: per letter, the segments as ``(letter, vector id)`` pairs."""

    __slots__ = ("algebra", "segments", "_compose", "_tails", "_hash", "__weakref__")

    def __init__(self, algebra: SubstitutionAlgebra, segments: tuple):
        self.algebra = algebra
        self.segments = segments
        self._compose = None
        self._tails = None
        self._hash = hash(segments)
        for seg in segments:
            bs = [b for b, _ in seg]
            if not seg or len(set(bs)) != len(bs):
                raise ValueError(f"malformed segments list {seg!r}")

    def __eq__(self, other):
        return (isinstance(other, SubstClass) and other.algebra is self.algebra
                and other.segments == self.segments)

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "SubstClass") -> "SubstClass":
        return compose_classes(self, other)

    def __repr__(self):
        parts = []
        for a, seg in enumerate(self.segments):
            parts.append(f"{a}:" + "".join(f"{b}{'+' if x else ''}" for b, x in seg))
        return f"SubstClass({' '.join(parts)})"

    # (a)-(e)
    def expanding(self, a: int) -> bool:
        seg = self.segments[a]
        return not (len(seg) == 1 and seg[0][1] == 0)

    def introduces(self, a: int) -> tuple:
        return tuple((b, x != 0) for b, x in self.segments[a])

    def head(self, a: int) -> int:
        return self.segments[a][0][0]

    @property
    def heads(self) -> tuple:
        return tuple(seg[0][0] for seg in self.segments)

    def tail_vector(self, a: int) -> int:
        if self._tails is None:
            alg = self.algebra
            tails = []
            for seg in self.segments:
                vec = alg.vector(seg[0][1])
                for b, x in seg[1:]:
                    vec = alg.mul[vec, alg.morphisms[:, b]]
                    vec = alg.mul[vec, alg.vector(x)]
                tails.append(alg.intern(vec))
            self._tails = tuple(tails)
        return self._tails[a]

    def tail(self, a: int, h_index: int) -> int:
        return int(self.algebra.vector(self.tail_vector(a))[h_index])

    def segments_at(self, a: int, h_index: int) -> list:
        alg = self.algebra
        return [(b, int(alg.vector(x)[h_index])) for b, x in self.segments[a]]

    @property
    def compose_indices(self) -> np.ndarray:
        """``compose_indices[i]`` = index of ``h_i ∘ σ``."""
        if self._compose is None:
            alg = self.algebra
            codes = np.zeros(alg.n_morphisms, dtype=np.int64)
            for a, seg in enumerate(self.segments):
                vec = np.zeros(alg.n_morphisms, dtype=np.int32)
                for b, x in seg:
                    vec = alg.mul[vec, alg.morphisms[:, b]]
                    vec = alg.mul[vec, alg.vector(x)]
                codes += vec.astype(np.int64) * alg._radix[a]
            self._compose = alg.indices_of_codes(codes)
        return self._compose

    def compose(self, h_index: int) -> int:
        return int(self.compose_indices[h_index])

    def is_expanding_somewhere(self) -> bool:
        return any(self.expanding(a) for a in range(self.algebra.d))


def class_of(sigma: Substitution, algebra: SubstitutionAlgebra) -> SubstClass:
    return algebra.class_of(sigma)


def segments_of(sigma: Substitution, a: int, h: Sequence[int], algebra: SubstitutionAlgebra | None = None) -> list:
    """Segments of ``σ(a)`` at a morphism given as an explicit letter table."""
    if algebra is not None:
        return algebra.segments_of(sigma, a, h)
    raise ValueError("segments_of needs the algebra to evaluate h")


def compose_classes(xi: SubstClass, zeta: SubstClass) -> SubstClass:
    """``[σ]·[μ] = [σ∘μ]`` computed from the two segments tables alone."""
    if xi.algebra is not zeta.algebra:
        raise ValueError("classes over different algebras")
    alg = xi.algebra
    comp = xi.compose_indices
    g = alg.morphisms
    out = []
    for a in range(alg.d):
        seq = []
        for b, v in zeta.segments[a]:
            inner = xi.segments[b]
            seq.extend((c, alg.vector(w)) for c, w in inner[:-1])
            c, w = inner[-1]
            seq.append((c, alg.mul[alg.vector(w), alg.vector(v)[comp]]))
        while True:
            seen = set()
            j = None
            for idx, (c, _) in enumerate(seq):
                if c in seen:
                    j = idx
                    break
                seen.add(c)
            if j is None:
                break
            c_prev, x_prev = seq[j - 1]
            c_j, x_j = seq[j]
            merged = alg.mul[alg.mul[x_prev, g[:, c_j]], x_j]
            seq[j - 1:j + 1] = [(c_prev, merged)]
        out.append(tuple((c, alg.intern(x)) for c, x in seq))
    return alg.make_class(out)


def class_power(xi: SubstClass, n: int) -> SubstClass:
    out = xi.algebra.identity
    for _ in range(n):
        out = compose_classes(out, xi)
    return out


# -- enumeration ------------------------------------------------------------

def _orderings(d: int):
    letters = range(d)
    for k in range(1, d + 1):
        for combo in itertools.permutations(letters, k):
            yield combo


def _letter_options_monoid(alg: SubstitutionAlgebra) -> dict:
    """Realisable per-letter segment lists with a witness image each."""
    options = {}
    guard = get_config().max_candidates
    for order in _orderings(alg.d):
        pools = [sorted(alg.submonoid(frozenset(order[:i + 1])).items()) for i in range(len(order))]
        for choice in itertools.product(*pools):
            seg = tuple((b, wid) for b, (wid, _) in zip(order, choice))
            word = tuple(itertools.chain.from_iterable((b,) + w for b, (_, w) in zip(order, choice)))
            if seg not in options or (len(word), word) < (len(options[seg]), options[seg]):
                options[seg] = word
            if len(options) > guard:
                raise GuardExceeded(f"more than {guard} per-letter segment lists")
    return options


def _letter_options_automata(alg: SubstitutionAlgebra) -> dict:
    """Same as the monoid route, but by checking every syntactic candidate with DFAs."""
    from .dfa import concat_with_markers, intersect, preimage_dfa, witness

    sg = alg.semigroup
    guard = get_config().max_candidates
    n = alg.n_morphisms
    all_vectors = list(itertools.product(range(alg.K), repeat=n))
    options = {}
    checked = 0
    for order in _orderings(alg.d):
        for xs in itertools.product(all_vectors, repeat=len(order)):
            checked += 1
            if checked > guard:
                raise GuardExceeded(f"more than {guard} syntactic candidates")
            lang = None
            for hi in range(n):
                h = alg.morphism(hi)
                parts = [(b, preimage_dfa(sg, h, xs[i][hi], set(order[:i + 1]))) for i, b in enumerate(order)]
                dfa = concat_with_markers(parts)
                lang = dfa if lang is None else intersect(lang, dfa)
            w = witness(lang)
            if w is None:
                continue
            seg = tuple((b, alg.intern(np.array(x, dtype=np.int32))) for b, x in zip(order, xs))
            options[seg] = w
    return options


def enumerate_classes(algebra: SubstitutionAlgebra, method: str = "monoid") -> list:
    """All classes of Ξ_L with a concrete witness substitution each.

    Exponential in ``|Σ|`` and the semigroup size; meant for tiny inputs.
    ``method="automata"`` checks each syntactic candidate through preimage
    DFAs and is usable only for the very smallest semigroups.
    """
    if method == "monoid":
        options = _letter_options_monoid(algebra)
    elif method == "automata":
        options = _letter_options_automata(algebra)
    else:
        raise ValueError(f"unknown method {method!r}")
    items = sorted(options.items())
    total = len(items) ** algebra.d
    if total > get_config().max_candidates:
        raise GuardExceeded(f"{total} candidate classes exceed the guard")
    out = []
    for combo in itertools.product(items, repeat=algebra.d):
        segs = tuple(seg for seg, _ in combo)
        sigma = Substitution(tuple(w for _, w in combo))
        out.append((algebra.make_class(segs), sigma))
    return out


# -- traces and Φ -------------------------------------------------------------

def trace_of(seq, algebra: SubstitutionAlgebra):
    """Pointwise classes of a directive sequence; letters are kept when augmented.

    Returns ``(prefix, period)`` lists of classes, or of ``(class, letter)`` pairs.
    """
    def conv(names, letters):
        classes = [algebra.class_of(seq.bindings[n]) for n in names]
        if letters is None:
            return classes
        return list(zip(classes, letters))

    letters = getattr(seq, "letters", None)
    lp, lq = (letters if letters is not None else (None, None))
    return conv(seq.pre, lp), conv(seq.period, lq)


def up_alpha_values(algebra: SubstitutionAlgebra, u: Sequence[int], v: Sequence[int]):
    """``h ↦ h(u v^ω)`` as a function on morphism indices (``None`` when ``h(v) = 1_M``)."""
    sg = algebra.semigroup

    def value(hi: int):
        h = algebra.morphisms[hi]
        x = algebra.eval_word(h, u)
        y = algebra.eval_word(h, v)
        if y == ONE:
            return None
        return sg.mixed_product(x, sg.omega_power(y))

    return value


def phi_classes(alpha_values, algebra: SubstitutionAlgebra, classes: Iterable[SubstClass]) -> list:
    """Classes ``ξ`` with ``compose_ξ(h_L)(α) ∈ H``.

    ``alpha_values`` maps a morphism index to the ω-id of ``h(α)``; it may be a
    mapping or a callable.
    """
    H = algebra.semigroup.accepting_omega
    get = alpha_values if callable(alpha_values) else alpha_values.__getitem__
    out = []
    for xi in classes:
        hi = xi.compose(algebra.index_L)
        try:
            value = get(hi)
        except KeyError:
            raise KeyError(f"missing value of α under morphism {algebra.morphism(hi)}") from None
        if value is not None and value in H:
            out.append(xi)
    return out
