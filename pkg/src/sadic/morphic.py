"""Limits ``σ^ω(u)``, their images in the ω-semigroup computed from classes alone,
the regular language of good seeds ``u`` for morphic words, and fixed-point images."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import SubstClass, SubstitutionAlgebra
from .config import get_config
from .dfa import Dfa, _explore
from .errors import BudgetExceeded
from .omega import ONE, OmegaSemigroup
from .words import Substitution, apply


# -- values in M_f' ∪ M_ω ∪ {⊥} -------------------------------------------

@dataclass(frozen=True)
class OmegaValue:
    kind: str  # "finite" | "infinite" | "bottom"
    value: int = -1

    @property
    def is_finite(self):
        return self.kind == "finite"

    @property
    def is_infinite(self):
        return self.kind == "infinite"

    @property
    def is_bottom(self):
        return self.kind == "bottom"

    def __repr__(self):
        if self.kind == "bottom":
            return "Bottom"
        return f"{self.kind.capitalize()}({self.value})"


def Finite(x: int) -> OmegaValue:
    return OmegaValue("finite", int(x))


def Infinite(w: int) -> OmegaValue:
    return OmegaValue("infinite", int(w))


BOTTOM = OmegaValue("bottom")


def concat_values(sg: OmegaSemigroup, p: OmegaValue, q: OmegaValue) -> OmegaValue:
    """``⊥q = ⊥``, ``p⊥ = ⊥`` for finite ``p``, ``pq = p`` for infinite ``p``."""
    if p.kind != "finite":
        return p
    if q.kind == "bottom":
        return q
    if q.kind == "finite":
        return Finite(sg.mul[p.value, q.value])
    return Infinite(sg.mixed_product(p.value, q.value))


def omega_of_finite(sg: OmegaSemigroup, m: int) -> OmegaValue:
    if m == ONE:
        raise ValueError("infinite product of 1_M: the morphism erases an infinite word")
    return Infinite(sg.omega_power(m))


# -- semantic ground truth by iteration -------------------------------------

def terminal_letters(sigma: Substitution) -> dict:
    """Letters whose limit is a finite word, mapped to that word (``σ^{|Σ|}(a)``)."""
    d = sigma.size
    level = {a for a in range(d) if sigma.images[a] == (a,)}
    while True:
        nxt = level | {a for a in range(d) if all(c in level for c in sigma.images[a])}
        if nxt == level:
            break
        level = nxt
    p = sigma.power(d)
    return {a: p.images[a] for a in sorted(level)}


def letter_kinds(sigma: Substitution) -> dict:
    """Classify each letter's limit as ``finite``, ``infinite`` or ``bottom``."""
    term = terminal_letters(sigma)
    kinds = {a: "finite" for a in term}

    def split(w):
        # (terminal prefix non-empty?, first non-terminal letter)
        for i, c in enumerate(w):
            if c not in term:
                return i > 0, c
        return None

    for a in range(sigma.size):
        if a in kinds:
            continue
        chain = []
        seen = {}
        c = a
        while c not in seen:
            seen[c] = len(chain)
            nonempty, nxt = split(sigma.images[c])
            chain.append(nonempty)
            c = nxt
        cycle = chain[seen[c]:]
        cycle_len = len(cycle)
        if any(cycle) or cycle_len == 1:
            kinds[a] = "infinite"
        else:
            kinds[a] = "bottom"
    return kinds


@dataclass(frozen=True)
class LimitResult:
    kind: str  # "finite" | "infinite" | "bottom"
    word: tuple = ()  # the finite word, or the requested prefix

    def __repr__(self):
        if self.kind == "bottom":
            return "LimitResult(⊥)"
        return f"LimitResult({self.kind}, {''.join(map(str, self.word))})"


def sigma_omega_prefix(sigma: Substitution, u: Sequence[int], k: int) -> LimitResult:
    """``σ^ω(u)``: its first ``k`` letters, the finite limit, or ⊥."""
    u = tuple(u)
    budget = get_config().prefix_budget
    if k > budget:
        raise BudgetExceeded(f"prefix length {k} exceeds budget {budget}")
    term = terminal_letters(sigma)
    kinds = letter_kinds(sigma)
    finite_part = []
    first = None
    for c in u:
        if kinds[c] == "finite":
            finite_part.extend(term[c])
        else:
            first = c
            break
    if first is None:
        return LimitResult("finite", tuple(finite_part))
    if kinds[first] == "bottom":
        return LimitResult("bottom")
    t = u[:k] if k else ()
    if k == 0:
        return LimitResult("infinite", ())
    steps = 0
    while True:
        nxt = apply(sigma, t)[:k]
        if nxt == t:
            return LimitResult("infinite", t)
        t = nxt
        steps += 1
        if steps > budget:
            raise BudgetExceeded("prefix iteration did not stabilise within budget")


# -- class-level evaluation -------------------------------------------------

class MorphicEvaluator:
    """Memoised ``h ∘ σ^ω(a)`` for one class ``ξ = [σ]_L``."""

    def __init__(self, xi: SubstClass):
        self.xi = xi
        self.algebra: SubstitutionAlgebra = xi.algebra
        self.sg: OmegaSemigroup = xi.algebra.semigroup
        self.d = xi.algebra.d
        self._memo: dict = {}

    def _power_compose(self, h: int, n: int) -> int:
        for _ in range(n):
            h = self.xi.compose(h)
        return h

    def _head_reaches(self, c: int, b: int) -> bool:
        x = c
        for _ in range(self.d):
            x = self.xi.head(x)
            if x == b:
                return True
        return False

    def _right_expansion(self, h: int, b: int) -> OmegaValue:
        """``h(b)·h(u)·h∘σ(u)·...`` for ``σ(b) = b u`` via the ultimately periodic ``h∘σ^n``."""
        sg, xi = self.sg, self.xi
        seen = {}
        tails = []
        hn = h
        while hn not in seen:
            seen[hn] = len(tails)
            tails.append(xi.tail(b, hn))
            hn = xi.compose(hn)
        start = seen[hn]
        p = sg.product(int(self.algebra.morphisms[h, b]), *tails[:start])
        q = sg.product(*tails[start:])
        if xi.tail_vector(b) == 0:
            return Finite(p)
        if q == ONE:
            raise ValueError("infinite product of 1_M: the morphism erases an infinite word")
        return Infinite(sg.mixed_product(p, sg.omega_power(q)))

    def value(self, h: int, a: int) -> OmegaValue:
        key = (h, a)
        if key in self._memo:
            return self._memo[key]
        g = self._power_compose(h, self.d)
        self._eval(h, g, a, [])
        return self._memo[key]

    def _eval(self, h: int, g: int, b: int, stack: list):
        """Depth-first evaluation; ``stack`` holds ``[letter, partial product]`` frames in progress."""
        sg, xi = self.sg, self.xi
        segs = xi.segments_at(b, g)
        c1 = segs[0][0]
        if c1 == b:
            self._memo[(h, b)] = self._right_expansion(h, b)
            return
        if self._head_reaches(c1, b):
            self._memo[(h, b)] = BOTTOM
            return
        frame = [b, ONE]
        stack.append(frame)
        result = None
        for c, gv in segs:
            if c == b:
                # σ^ω(b) = m · σ^ω(b) · ...
                result = omega_of_finite(sg, frame[1])
                break
            depth = next((i for i, f in enumerate(stack) if f[0] == c), None)
            if depth is not None:
                # σ^ω(c) = m_c ⋯ m_b · σ^ω(c) · ...  with c still being evaluated further up
                loop = sg.product(*(f[1] for f in stack[depth:]))
                val = concat_values(sg, Finite(frame[1]), omega_of_finite(sg, loop))
                result = val
                break
            if (h, c) not in self._memo:
                self._eval(h, g, c, stack)
            val = self._memo[(h, c)]
            if not val.is_finite:
                result = concat_values(sg, Finite(frame[1]), val)
                break
            frame[1] = int(sg.mul[sg.mul[frame[1], val.value], gv])
        stack.pop()
        self._memo[(h, b)] = result if result is not None else Finite(frame[1])


def h_sigma_omega(xi: SubstClass, h: int, a: int, evaluator: MorphicEvaluator | None = None) -> OmegaValue:
    """``h ∘ σ^ω(a)`` from the class ``ξ = [σ]_L``; ``h`` is a morphism index."""
    evaluator = evaluator or MorphicEvaluator(xi)
    return evaluator.value(h, a)


def h_pi_sigma_omega(xi: SubstClass, zeta: SubstClass, h: int, a: int) -> OmegaValue:
    """``h ∘ π ∘ σ^ω(a)`` with ``ξ = [σ]_L``, ``ζ = [π]_L``."""
    return h_sigma_omega(xi, zeta.compose(h), a)


def word_omega_value(xi: SubstClass, h: int, u: Sequence[int]) -> OmegaValue:
    """``h ∘ σ^ω(u)`` by distributivity over the letters of ``u``."""
    ev = MorphicEvaluator(xi)
    sg = xi.algebra.semigroup
    out = Finite(ONE)
    for c in u:
        out = concat_values(sg, out, ev.value(h, c))
    return out


def morphic_language_dfa(xi: SubstClass, zeta: SubstClass) -> Dfa:
    """DFA over Σ accepting exactly the ``u`` with ``π(σ^ω(u)) ∈ L``.

    States are values in ``M_f' ∪ M_ω ∪ {⊥}`` reachable from ``1_M``; state
    labels are kept on the returned DFA.
    """
    alg = xi.algebra
    sg = alg.semigroup
    h = zeta.compose(alg.index_L)
    ev = MorphicEvaluator(xi)
    contrib = [ev.value(h, a) for a in range(alg.d)]
    H = sg.accepting_omega
    return _explore(alg.d, Finite(ONE), lambda s, a: concat_values(sg, s, contrib[a]),
                    lambda s: s.is_infinite and s.value in H, labels_out=True)


def fixed_point_images(xi: SubstClass, h: int) -> frozenset:
    """``{h(α) : σ(α) = α, α infinite}`` as a set of :class:`OmegaValue`."""
    alg = xi.algebra
    sg = alg.semigroup
    ev = MorphicEvaluator(xi)
    letters = [a for a in range(alg.d) if xi.head(a) == a]
    gens = [ev.value(h, a) for a in letters]
    finite = {v.value for v in gens if v.is_finite}
    omega = {v.value for v in gens if v.is_infinite}
    # subsemigroup generated by the finite generators
    closure = set(finite)
    frontier = list(finite)
    while frontier:
        x = frontier.pop()
        for y in list(finite):
            for z in (int(sg.mul[x, y]), int(sg.mul[y, x])):
                if z not in closure:
                    closure.add(z)
                    frontier.append(z)
    prefixes = closure | {ONE}
    out = set()
    for s in prefixes:
        for w in omega:
            out.add(sg.mixed_product(s, w))
        for m in closure:
            if m != ONE:
                out.add(sg.mixed_product(s, sg.omega_power(m)))
    return frozenset(Infinite(w) for w in out)
