"""Finite words, substitutions, lazily evaluated infinite words and factor statistics.

Letters are small integers ``0..d-1``; a finite word is a tuple of letters.
Symbolic names only appear at the I/O boundary (:class:`Alphabet`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .config import get_config
from .errors import AlphabetError, BudgetExceeded, DivergentWordError

Word = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class Alphabet:
    letters: tuple

    def __post_init__(self):
        if not self.letters:
            raise AlphabetError("alphabet must be non-empty")
        if len(set(self.letters)) != len(self.letters):
            raise AlphabetError(f"duplicate letters in {self.letters!r}")

    @classmethod
    def of_size(cls, d: int) -> "Alphabet":
        return cls(tuple(str(i) for i in range(d)))

    def __len__(self):
        return len(self.letters)

    def index(self, name) -> int:
        try:
            return self.letters.index(name)
        except ValueError:
            raise AlphabetError(f"letter {name!r} not in alphabet {self.letters!r}") from None

    def encode(self, names: Iterable) -> Word:
        return tuple(self.index(x) for x in names)

    def decode(self, word: Sequence[int]) -> list:
        return [self.letters[i] for i in word]

    def render(self, word: Sequence[int]) -> str:
        sep = "" if all(len(str(x)) == 1 for x in self.letters) else " "
        return sep.join(str(self.letters[i]) for i in word)


def as_word(w) -> Word:
    """Accept a tuple/list of ints or a string of digits."""
    if isinstance(w, str):
        return tuple(int(c) for c in w)
    return tuple(int(c) for c in w)


@dataclass(frozen=True)
class Substitution:
    """A non-erasing morphism given by the images of the letters ``0..d-1``."""

    images: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        images = tuple(as_word(w) for w in self.images)
        object.__setattr__(self, "images", images)
        if not images:
            raise AlphabetError("substitution over an empty alphabet")
        d = len(images)
        for a, w in enumerate(images):
            if not w:
                raise AlphabetError(f"image of letter {a} is empty (substitutions are non-erasing)")
            if any(c < 0 or c >= d for c in w):
                raise AlphabetError(f"image of letter {a} leaves the alphabet 0..{d - 1}")

    @classmethod
    def from_strings(cls, *images: str, name: str = "") -> "Substitution":
        return cls(tuple(as_word(w) for w in images), name=name)

    @classmethod
    def identity(cls, d: int) -> "Substitution":
        return cls(tuple((a,) for a in range(d)), name="id")

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, w) -> Word:
        return apply(self, w)

    def __matmul__(self, other: "Substitution") -> "Substitution":
        return compose(self, other)

    def __repr__(self):
        body = ", ".join(f"{a}->{''.join(map(str, w))}" for a, w in enumerate(self.images))
        return f"Substitution({self.name + ': ' if self.name else ''}{body})"

    def head(self, a: int) -> int:
        return self.images[a][0]

    def is_positive(self) -> bool:
        return bool(self.incidence().all())

    def is_left_proper(self) -> bool:
        return len({w[0] for w in self.images}) == 1

    def incidence(self) -> np.ndarray:
        """Boolean matrix ``M[a, b]`` = letter ``b`` occurs in the image of ``a``."""
        d = self.size
        m = np.zeros((d, d), dtype=bool)
        for a, w in enumerate(self.images):
            m[a, list(w)] = True
        return m

    def power(self, n: int) -> "Substitution":
        result = Substitution.identity(self.size)
        for _ in range(n):
            result = compose(result, self)
        return result


def apply(sigma: Substitution, w) -> Word:
    """Image of a finite word, letter by letter."""
    images = sigma.images
    out = []
    try:
        for c in w:
            if c < 0:
                raise IndexError
            out.extend(images[c])
    except (IndexError, TypeError):
        raise AlphabetError(f"word {w!r} has letters outside 0..{sigma.size - 1}") from None
    return tuple(out)


def compose(sigma: Substitution, mu: Substitution) -> Substitution:
    """``sigma ∘ mu``: apply ``mu`` first, then ``sigma``."""
    if sigma.size != mu.size:
        raise AlphabetError("composing substitutions over different alphabets")
    name = f"{sigma.name}.{mu.name}" if sigma.name and mu.name else ""
    return Substitution(tuple(apply(sigma, mu.images[a]) for a in range(mu.size)), name=name)


def then(first: Substitution, second: Substitution) -> Substitution:
    """``second ∘ first`` (apply ``first``, then ``second``)."""
    return compose(second, first)


def compose_all(subs: Sequence[Substitution]) -> Substitution:
    """``subs[0] ∘ subs[1] ∘ ... ∘ subs[-1]``."""
    if not subs:
        raise ValueError("empty composition")
    out = subs[-1]
    for s in reversed(subs[:-1]):
        out = compose(s, out)
    return out


def first_occurrence_factorization(w) -> list:
    """Split ``w = b1 v1 ... bd vd`` at the first occurrence of each letter."""
    w = as_word(w)
    if not w:
        raise ValueError("cannot factorize the empty word")
    parts = []
    seen = set()
    for c in w:
        if c in seen:
            parts[-1][1].append(c)
        else:
            seen.add(c)
            parts.append((c, []))
    return [(b, tuple(v)) for b, v in parts]


def factors(prefix, n: int) -> set:
    prefix = as_word(prefix)
    if n > len(prefix):
        raise ValueError(f"factor length {n} exceeds prefix length {len(prefix)}")
    return {prefix[i:i + n] for i in range(len(prefix) - n + 1)}


# -- lazily evaluated words -------------------------------------------------

INFINITE, FINITE, DIVERGENT = "infinite", "finite", "divergent"


class LazyWord:
    """A finite, infinite or divergent word given by a prefix oracle.

    ``oracle(n)`` must return the first ``min(n, length)`` letters.
    """

    def __init__(self, oracle: Callable[[int], Word] | None, kind: str, length: int | None = None):
        if kind not in (INFINITE, FINITE, DIVERGENT):
            raise ValueError(kind)
        if kind == FINITE and length is None:
            raise ValueError("finite lazy words need a length")
        self._oracle = oracle
        self.kind = kind
        self.length = length

    @classmethod
    def finite(cls, w) -> "LazyWord":
        w = tuple(w)
        return cls(lambda n: w[:n], FINITE, len(w))

    @classmethod
    def periodic(cls, u, v) -> "LazyWord":
        u, v = tuple(u), tuple(v)
        if not v:
            raise ValueError("period must be non-empty")

        def oracle(n):
            if n <= len(u):
                return u[:n]
            k = n - len(u)
            reps = -(-k // len(v))
            return u + (v * reps)[:k]

        return cls(oracle, INFINITE)

    @classmethod
    def divergent(cls) -> "LazyWord":
        return cls(None, DIVERGENT)

    @property
    def is_infinite(self):
        return self.kind == INFINITE

    def prefix(self, n: int) -> Word:
        if self.kind == DIVERGENT:
            raise DivergentWordError("the divergent word has no letters")
        budget = get_config().prefix_budget
        if n > budget:
            raise BudgetExceeded(f"prefix of length {n} exceeds budget {budget}")
        return tuple(self._oracle(n))

    def __getitem__(self, i: int) -> int:
        p = self.prefix(i + 1)
        if len(p) <= i:
            raise IndexError(i)
        return p[i]

    def __add__(self, other: "LazyWord") -> "LazyWord":
        return concat(self, other)

    def __repr__(self):
        if self.kind == DIVERGENT:
            return "LazyWord(⊥)"
        shown = "".join(map(str, self.prefix(min(self.length or 20, 20))))
        return f"LazyWord({self.kind}, {shown}{'...' if self.kind == INFINITE else ''})"


def concat(u: LazyWord, v: LazyWord) -> LazyWord:
    """Concatenation with ``⊥u = ⊥``, ``u⊥ = ⊥`` for finite ``u`` and ``uβ = u`` for infinite ``u``."""
    if u.kind == DIVERGENT:
        return u
    if u.kind == INFINITE:
        return u
    if v.kind == DIVERGENT:
        return v
    head = u.prefix(u.length)

    def oracle(n):
        if n <= len(head):
            return head[:n]
        return head + v.prefix(n - len(head))

    if v.kind == INFINITE:
        return LazyWord(oracle, INFINITE)
    return LazyWord(oracle, FINITE, len(head) + v.length)


def recurrence(word: LazyWord, complexity: Callable[[int], int], l: int, budget: int | None = None) -> int:
    """Smallest ``M`` such that every length-``M`` factor contains every length-``l`` factor.

    Requires a uniformly recurrent word whose factor complexity is exactly
    ``complexity``.  Prefixes are enlarged until ``complexity(M)`` distinct
    length-``M`` factors have been seen; an overstated complexity therefore
    shows up as :class:`BudgetExceeded` instead of a hang.
    """
    if word.kind == DIVERGENT:
        raise DivergentWordError("recurrence of the divergent word")
    if word.kind != INFINITE:
        raise ValueError("recurrence is defined for infinite words")
    if l == 0:
        return 0
    budget = budget or get_config().prefix_budget
    target_l = complexity(l)
    length = max(64, 4 * l)
    prefix = word.prefix(length)

    def grow(need_m):
        nonlocal length, prefix
        while True:
            fm = factors(prefix, need_m) if need_m <= len(prefix) else set()
            if len(fm) >= complexity(need_m):
                return fm
            if length >= budget:
                raise BudgetExceeded(
                    f"only {len(fm)} of {complexity(need_m)} length-{need_m} factors within {budget} letters")
            length = min(2 * length, budget)
            prefix = word.prefix(length)

    m = l
    while True:
        fm = grow(m)
        if len(fm) > complexity(m):
            raise ValueError(f"complexity oracle understates p({m}): saw {len(fm)} factors")
        if all(len(factors(f, l)) == target_l for f in fm):
            return m
        m += 1
