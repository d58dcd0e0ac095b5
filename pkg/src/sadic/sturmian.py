"""Continued fractions, Ostrowski numeration, exact Sturmian letters, and
directive sequences for Sturmian and Arnoux-Rauzy words."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath

from .config import get_config
from .errors import BoundaryError, BudgetExceeded, DigitRuleError
from .omega import BuchiAutomaton, IntersectionAutomaton, OmegaAutomaton
from .words import Substitution, compose


# -- continued fractions ------------------------------------------------------

@dataclass(frozen=True)
class ContinuedFraction:
    """``η = [0; a_1, a_2, ...]`` with digits ``prefix · period^ω``.

    An empty ``period`` means the expansion stops after ``prefix`` (a rational);
    most operations here want an irrational slope and so need a period.
    """

    prefix: tuple = ()
    period: tuple = (1,)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(a) for a in self.prefix))
        object.__setattr__(self, "period", tuple(int(a) for a in self.period))
        if any(a < 1 for a in self.prefix + self.period):
            raise ValueError("continued fraction digits must be positive")
        if not self.prefix and not self.period:
            raise ValueError("empty continued fraction")

    @classmethod
    def parse(cls, text: str) -> "ContinuedFraction":
        """``"2,1,3"`` (finite), ``"2; 1"`` (prefix; period) or ``"2,1,1,..."`` (last digit repeats)."""
        text = text.strip()
        if ";" in text:
            pre, per = text.split(";", 1)
            return cls(_ints(pre), _ints(per))
        if text.endswith("..."):
            digits = _ints(text[:-3])
            if not digits:
                raise ValueError("no digits before '...'")
            return cls(digits[:-1], digits[-1:])
        return cls(_ints(text), ())

    @property
    def irrational(self) -> bool:
        return bool(self.period)

    def digit(self, n: int) -> int:
        """``a_n`` for ``n ≥ 1``."""
        if n < 1:
            raise IndexError("continued fraction digits start at index 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        if not self.period:
            raise IndexError(f"finite expansion has only {len(self.prefix)} digits")
        return self.period[(n - 1 - len(self.prefix)) % len(self.period)]

    def digits(self, n: int) -> list:
        return [self.digit(k) for k in range(1, n + 1)]

    def __iter__(self) -> Iterator[int]:
        for n in itertools.count(1):
            if not self.period and n > len(self.prefix):
                return
            yield self.digit(n)

    def convergents(self, n: int) -> list:
        return convergents(self, n)

    def bounds(self, k: int) -> tuple:
        """Exact rational bracket of ``η`` from the convergents of index ``k`` and ``k+1``."""
        if not self.period and k + 1 > len(self.prefix):
            v = self.value_fraction()
            return v, v
        (p0, q0), (p1, q1) = convergents(self, k + 1)[-2:]
        a, b = Fraction(p0, q0), Fraction(p1, q1)
        return (a, b) if a <= b else (b, a)

    def value_fraction(self) -> Fraction:
        if self.period:
            raise ValueError("irrational slope has no exact rational value")
        p, q = convergents(self, len(self.prefix))[-1]
        return Fraction(p, q)

    def mp(self, prec: int | None = None):
        """``η`` as an ``mpmath.mpf`` accurate to about ``prec`` bits."""
        prec = prec or get_config().precision
        if not self.period:
            v = self.value_fraction()
            return mpmath.mpf(v.numerator) / v.denominator
        # |η − p_k/q_k| < 1/q_k²
        k = 1
        while True:
            p, q = convergents(self, k)[-1]
            if q.bit_length() * 2 > prec + 8:
                break
            k *= 2
        with mpmath.workprec(prec + 16):
            return mpmath.mpf(p) / q

    def __str__(self):
        head = ",".join(map(str, self.prefix))
        if not self.period:
            return head
        return f"{head}; {','.join(map(str, self.period))}"


def _ints(text: str) -> tuple:
    return tuple(int(t) for t in text.replace(" ", "").split(",") if t)


def convergents(cf: ContinuedFraction, n: int) -> list:
    """``[(p_0, q_0), ..., (p_n, q_n)]`` with ``p_0=0, q_0=1, p_1=1, q_1=a_1``."""
    out = [(0, 1)]
    if n >= 1:
        out.append((1, cf.digit(1)))
    for k in range(2, n + 1):
        a = cf.digit(k)
        (p0, q0), (p1, q1) = out[-2], out[-1]
        out.append((a * p1 + p0, a * q1 + q0))
    return out


def theta(cf: ContinuedFraction, n: int, prec: int | None = None):
    """``θ_n = q_n η − p_n`` (``θ_{-1} = -1``)."""
    if n == -1:
        return mpmath.mpf(-1)
    prec = prec or get_config().precision
    p, q = convergents(cf, n)[-1]
    # q_n η loses about log2(q_n) bits of the absolute accuracy
    with mpmath.workprec(prec + 2 * q.bit_length() + 16):
        eta = cf.mp(prec + 2 * q.bit_length() + 16)
        return q * eta - p


def thetas(cf: ContinuedFraction, n: int, prec: int | None = None) -> list:
    """``[θ_{-1}, θ_0, ..., θ_n]``."""
    return [theta(cf, k, prec) for k in range(-1, n + 1)]


# -- exact reals as shrinking rational brackets --------------------------------

class Real:
    """A real number known through rational brackets ``bounds(k)`` that shrink as ``k`` grows."""

    def bounds(self, k: int) -> tuple:
        raise NotImplementedError


class Rational(Real):
    def __init__(self, value):
        self.value = Fraction(value)

    def bounds(self, k):
        return self.value, self.value


class Slope(Real):
    def __init__(self, cf: ContinuedFraction):
        self.cf = cf

    def bounds(self, k):
        return self.cf.bounds(k)


class OstrowskiValue(Real):
    """``Σ b_n θ_{n-1}`` for digits on a periodic continued fraction."""

    def __init__(self, cf: ContinuedFraction, digits: "OstrowskiDigits"):
        self.cf = cf
        self.digits = digits

    def bounds(self, k):
        n = max(k, 2)
        conv = convergents(self.cf, n + 2)
        Q = sum(self.digits.digit(j) * conv[j - 1][1] for j in range(1, n + 1))
        P = sum(self.digits.digit(j) * conv[j - 1][0] for j in range(1, n + 1))
        lo, hi = self.cf.bounds(n + 1)
        # tail Σ_{j>n} b_j θ_{j-1} is bounded by Σ_{m≥n} 1/q_m ≤ 4/q_n
        err = Fraction(4, conv[n][1])
        a, b = Q * lo - P, Q * hi - P
        return min(a, b) - err, max(a, b) + err


def as_real(x) -> Real:
    if isinstance(x, Real):
        return x
    if isinstance(x, ContinuedFraction):
        return Slope(x)
    if isinstance(x, float):
        return Rational(Fraction(x))
    if isinstance(x, (int, Fraction)):
        return Rational(x)
    if isinstance(x, str):
        return Rational(Fraction(x))
    raise TypeError(f"cannot interpret {x!r} as a real")


def sturmian_letter(eta, chi, n: int, variant: str = "floor") -> int:
    """``α(n) = ⌊(n+2)η + χ⌋ − ⌊(n+1)η + χ⌋`` (or with ceilings), decided exactly.

    Raises :class:`BoundaryError` when ``(n+1)η + χ`` or ``(n+2)η + χ`` cannot be
    separated from an integer at the configured precision.
    """
    if variant not in ("floor", "ceiling"):
        raise ValueError("variant must be 'floor' or 'ceiling'")
    rnd = math.floor if variant == "floor" else math.ceil
    eta, chi = as_real(eta), as_real(chi)
    limit = Fraction(1, 2 ** get_config().precision)
    k = 4
    while True:
        (el, eh), (cl, ch) = eta.bounds(k), chi.bounds(k)
        vals = []
        for m in (n + 1, n + 2):
            lo, hi = m * el + cl, m * eh + ch
            a, b = rnd(lo), rnd(hi)
            # an exact integer endpoint is still ambiguous unless the bracket is a point
            if a == b and (lo == hi or (lo.denominator != 1 and hi.denominator != 1)):
                vals.append(a)
            else:
                vals.append(None)
        if None not in vals:
            return vals[1] - vals[0]
        if max(eh - el, ch - cl) < limit:
            raise BoundaryError(f"letter {n} sits on a boundary at {get_config().precision} bits")
        k *= 2


def sturmian_prefix(eta, chi, n: int, variant: str = "floor") -> tuple:
    """First ``n`` letters; one shared bracket, refined until every letter is decided."""
    if variant not in ("floor", "ceiling"):
        raise ValueError("variant must be 'floor' or 'ceiling'")
    rnd = math.floor if variant == "floor" else math.ceil
    eta, chi = as_real(eta), as_real(chi)
    limit = Fraction(1, 2 ** get_config().precision)
    k = 8
    while True:
        (el, eh), (cl, ch) = eta.bounds(k), chi.bounds(k)
        point = el == eh and cl == ch
        vals = []
        for m in range(1, n + 2):
            lo, hi = m * el + cl, m * eh + ch
            a = rnd(lo)
            if a != rnd(hi) or (not point and (lo.denominator == 1 or hi.denominator == 1)):
                break
            vals.append(a)
        if len(vals) == n + 1:
            return tuple(vals[i + 1] - vals[i] for i in range(n))
        if max(eh - el, ch - cl) < limit:
            raise BoundaryError(f"letter {len(vals) - 1} sits on a boundary at {get_config().precision} bits")
        k *= 2


def characteristic_prefix(cf: ContinuedFraction, n: int) -> tuple:
    """First ``n`` letters of ``α_η(i) = ⌊(i+2)η⌋ − ⌊(i+1)η⌋`` using one bracket for all of them."""
    k = 4
    while True:
        lo, hi = cf.bounds(k)
        fl = [math.floor(m * lo) for m in range(1, n + 2)]
        fh = [math.floor(m * hi) for m in range(1, n + 2)]
        if fl == fh and lo != hi:
            return tuple(fl[i + 1] - fl[i] for i in range(n))
        if lo == hi:
            return tuple(math.floor((i + 2) * lo) - math.floor((i + 1) * lo) for i in range(n))
        k *= 2
        if k > 64 * (n + 8):
            raise BoundaryError("could not separate multiples of the slope from integers")


# -- Ostrowski numeration -----------------------------------------------------

@dataclass(frozen=True)
class OstrowskiDigits:
    """Digits ``b_1, b_2, ...`` (``prefix · period^ω``, default tail all zero) in base ``cf``."""

    cf: ContinuedFraction
    prefix: tuple = ()
    period: tuple = (0,)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(b) for b in self.prefix))
        object.__setattr__(self, "period", tuple(int(b) for b in self.period) or (0,))

    def digit(self, n: int) -> int:
        if n < 1:
            raise IndexError("Ostrowski digits start at index 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.period[(n - 1 - len(self.prefix)) % len(self.period)]

    def digits(self, n: int) -> list:
        return [self.digit(k) for k in range(1, n + 1)]

    def horizon(self) -> int:
        """An index after which both digit sequences are jointly periodic."""
        P = max(len(self.prefix), len(self.cf.prefix)) + 1
        return P + 2 * math.lcm(len(self.period), len(self.cf.period) or 1)

    def validate(self, n: int | None = None):
        check_digit_rules(self.cf, self.digits(n or self.horizon() + 1), tail_checked=True)
        return self


def check_digit_rules(cf: ContinuedFraction, b: Sequence[int], tail_checked: bool = False):
    """Rules (i) ``0 ≤ b_1 < a_1``, (ii) ``0 ≤ b_n ≤ a_n``, (iii) ``b_n = 0`` if ``b_{n+1} = a_{n+1}``."""
    for n, bn in enumerate(b, start=1):
        a = cf.digit(n)
        if n == 1 and not 0 <= bn < a:
            raise DigitRuleError(f"b_1 = {bn} must satisfy 0 <= b_1 < a_1 = {a}")
        if n > 1 and not 0 <= bn <= a:
            raise DigitRuleError(f"b_{n} = {bn} must satisfy 0 <= b_{n} <= a_{n} = {a}")
        if n > 1 and bn == a and b[n - 2] != 0:
            raise DigitRuleError(f"b_{n - 1} = {b[n - 2]} must be 0 because b_{n} = a_{n} = {a}")


def ostrowski_decode(digits, cf: ContinuedFraction | None = None, n: int | None = None, prec: int | None = None):
    """``χ = Σ_{k≥1} b_k θ_{k-1}``.

    ``digits`` is an :class:`OstrowskiDigits` (summed until the tail is below the
    working precision) or a finite list together with ``cf``.
    """
    prec = prec or get_config().precision
    if isinstance(digits, OstrowskiDigits):
        cf = digits.cf
        if n is None:
            n = 2
            while convergents(cf, n)[-1][1].bit_length() < prec // 2 + 8:
                n += 2
        b = digits.digits(n)
    else:
        if cf is None:
            raise ValueError("a finite digit list needs its continued fraction")
        b = [int(x) for x in digits]
    check_digit_rules(cf, b)
    th = thetas(cf, len(b), prec)
    with mpmath.workprec(prec):
        return mpmath.fsum(bk * th[k] for k, bk in enumerate(b, start=1))


def ostrowski_encode(cf: ContinuedFraction, chi, n: int = 40, prec: int | None = None) -> list:
    """Greedy Ostrowski digits ``b_1..b_n`` of ``χ ∈ [-η, 1-η]``.

    At each position the smallest digit that keeps the remainder inside the
    range of admissible tails is taken; when ``χ`` has two expansions this picks
    the one with the smaller ``b_1``.
    """
    if not cf.irrational:
        raise ValueError("Ostrowski encoding needs an irrational slope")
    prec = prec or get_config().precision
    th = thetas(cf, n + 1, prec)  # th[k + 1] = θ_k

    def T(k):
        return th[k + 1]

    with mpmath.workprec(prec):
        r = mpmath.mpf(chi) if not isinstance(chi, Fraction) else mpmath.mpf(chi.numerator) / chi.denominator
        eta = T(0)
        eps = mpmath.mpf(2) ** (-(prec * 3 // 4))
        if r < -eta - eps or r > 1 - eta + eps:
            raise ValueError(f"χ = {mpmath.nstr(r, 12)} lies outside [-η, 1-η]")

        def tail_range(k, capped):
            # values of Σ_{j≥k} b_j θ_{j-1}, with b_k < a_k when capped
            ends = (-T(k - 1), -T(k - 2) - T(k - 1)) if capped else (-T(k - 1), -T(k - 2))
            return min(ends) - eps, max(ends) + eps

        out = []
        prev = None
        for k in range(1, n + 1):
            a = cf.digit(k)
            cap = a - 1 if k == 1 or prev else a
            chosen = None
            for b in range(cap + 1):
                rest = r - b * T(k - 1)
                lo, hi = tail_range(k + 1, capped=b > 0 or False)
                # the next digit may reach a_{k+1} only after a zero
                if lo <= rest <= hi:
                    chosen = b
                    break
            if chosen is None:
                # numerical drift at a boundary: take the digit leaving the smallest excursion
                chosen = min(range(cap + 1), key=lambda b: _excursion(r - b * T(k - 1), tail_range(k + 1, b > 0)))
            out.append(chosen)
            r -= chosen * T(k - 1)
            prev = chosen
    check_digit_rules(cf, out)
    return out


def _excursion(x, rng):
    lo, hi = rng
    return max(lo - x, x - hi, 0)


# -- Arnoux-Rauzy generators and directive sequences ------------------------------

def ar_generators(d: int) -> dict:
    """``λ_i`` (``j ↦ ij``) and ``ρ_i`` (``j ↦ ji``), both fixing ``i``, keyed ``lambda{i}``/``rho{i}``."""
    if d < 2:
        raise ValueError("Arnoux-Rauzy generators need at least two letters")
    out = {}
    for i in range(d):
        out[f"lambda{i}"] = Substitution([(i,) if j == i else (i, j) for j in range(d)], name=f"lambda{i}")
        out[f"rho{i}"] = Substitution([(i,) if j == i else (j, i) for j in range(d)], name=f"rho{i}")
    return out


def directive_digits(cf: ContinuedFraction) -> tuple:
    """Digits ``(a_n)`` with ``η = [0; a_1+1, a_2, ...]``, as ``(prefix, period)``.

    This is the only place the off-by-one between the slope's expansion and the
    block lengths of the directive sequence is applied.
    """
    if not cf.irrational:
        raise ValueError("Sturmian slopes are irrational")
    pre = list(cf.prefix)
    per = list(cf.period)
    if not pre:
        # unroll one period so that the first digit can be shifted
        pre = per[:]
    pre[0] -= 1
    return tuple(pre), tuple(per)


def slope_from_directive_digits(a_pre: Sequence[int], a_per: Sequence[int]) -> ContinuedFraction:
    """Inverse of :func:`directive_digits`."""
    pre = [int(x) for x in a_pre]
    per = [int(x) for x in a_per]
    if not pre:
        pre = per[:]
    pre[0] += 1
    return ContinuedFraction(tuple(pre), tuple(per))


def _lasso(pre, per, n):
    return pre[n] if n < len(pre) else per[(n - len(pre)) % len(per)]


def directive_from_expansions(a, b=None, strict: bool = False):
    """Flat directive sequence ``λ0^{b_1} ρ0^{a_1-b_1} λ1^{b_2} ρ1^{a_2-b_2} ...`` over ``ar_generators(2)``.

    ``a`` and ``b`` are ``(prefix, period)`` pairs of digit tuples indexed from 1;
    ``b`` defaults to ``a`` (the characteristic word).  Only ``0 ≤ b_n ≤ a_n`` is
    required; ``strict=True`` also enforces the Ostrowski rules for the slope
    ``[0; a_1+1, a_2, ...]``.
    """
    from .adic import DirectiveSequence

    a_pre, a_per = tuple(a[0]), tuple(a[1])
    if not a_per or any(x < 1 for x in a_per) or any(x < 0 for x in a_pre) or any(x < 1 for x in a_pre[1:]):
        raise ValueError("directive digits: a_1 ≥ 0, a_n ≥ 1 afterwards, non-empty period")
    b_pre, b_per = (a_pre, a_per) if b is None else (tuple(b[0]), tuple(b[1]) or (0,))
    P = max(len(a_pre), len(b_pre))
    Q = math.lcm(len(a_per), len(b_per))
    if Q % 2:
        Q *= 2
    if P % 2:
        P += 1
    A = [_lasso(a_pre, a_per, n) for n in range(P + Q)]
    B = [_lasso(b_pre, b_per, n) for n in range(P + Q)]
    for n, (x, y) in enumerate(zip(A, B), start=1):
        if not 0 <= y <= x:
            raise DigitRuleError(f"b_{n} = {y} must satisfy 0 <= b_{n} <= a_{n} = {x}")
    if strict:
        cf = slope_from_directive_digits(a_pre, a_per)
        check_digit_rules(cf, B + [_lasso(b_pre, b_per, P + Q)])

    def block(n):
        i = n % 2
        return [f"lambda{i}"] * B[n] + [f"rho{i}"] * (A[n] - B[n])

    pre = [s for n in range(P) for s in block(n)]
    period = [s for n in range(P, P + Q) for s in block(n)]
    return DirectiveSequence(pre, period, ar_generators(2))


def sturmian_directive(cf: ContinuedFraction, digits: OstrowskiDigits | None = None, strict: bool = True):
    """Directive sequence for slope ``cf`` and intercept digits (``None``: the characteristic word)."""
    a = directive_digits(cf)
    if digits is None:
        return directive_from_expansions(a)
    if digits.cf != cf:
        raise ValueError("Ostrowski digits belong to a different slope")
    H = digits.horizon()
    b_pre = tuple(digits.digits(H))
    b_per = tuple(digits.digit(H + 1 + k) for k in range(math.lcm(len(digits.period), len(cf.period))))
    return directive_from_expansions(a, (b_pre, b_per), strict=strict)


def directed_prefix(seq, n: int) -> tuple:
    """First ``n`` letters of the word generated by ``seq`` (any congenial augmentation)."""
    from .adic import congenial_augmentations, generated_word

    aug = congenial_augmentations(seq)[0]
    return tuple(generated_word(aug).prefix(n))


class _Affine(Real):
    """``s·x + m·η + c`` for a real ``x``, integer ``s``, ``m`` and rational ``c``."""

    def __init__(self, x: Real, s: int, eta: Real, m: int, c=0):
        self.x, self.s, self.eta, self.m, self.c = x, s, eta, m, Fraction(c)

    def bounds(self, k):
        xl, xh = self.x.bounds(k)
        el, eh = self.eta.bounds(k)
        a = sorted((self.s * xl, self.s * xh))
        b = sorted((self.m * el, self.m * eh))
        return a[0] + b[0] + self.c, a[1] + b[1] + self.c


def word_intercept(digits: OstrowskiDigits) -> Real:
    """Intercept (for the floor formula) of the word directed by :func:`sturmian_directive`.

    Observed and checked by the test-suite: digits decoding to ``χ`` direct the
    word with intercept ``−χ − 2η`` modulo 1.
    """
    return _Affine(OstrowskiValue(digits.cf, digits), -1, Slope(digits.cf), -2)


def random_digits(cf: ContinuedFraction, rng, extra: int = 2, repeats: int = 1,
                  nonzero_tail: bool = True) -> OstrowskiDigits:
    """Random valid ultimately periodic digits aligned with the period of ``cf``."""
    P = len(cf.prefix) + extra
    Q = len(cf.period) * max(1, repeats)
    if Q == 1:
        Q = 2
    for _ in range(1000):
        out = []
        for n in range(1, P + Q + 1):
            a = cf.digit(n)
            cap = a - 1 if n == 1 or (out and out[-1]) else a
            out.append(rng.randint(0, cap))
        # rule (iii) across the wrap-around: b_{P+Q} precedes b_{P+1}
        if P + 1 > 1 and out[P] == cf.digit(P + 1):
            out[-1] = 0
        if nonzero_tail and not any(out[P:]):
            continue
        return OstrowskiDigits(cf, tuple(out[:P]), tuple(out[P:])).validate()
    raise RuntimeError("could not sample digits with a non-zero tail")


# -- the Arnoux-Rauzy acceptance automaton ------------------------------------------

def ar_names(d: int) -> tuple:
    return tuple(f"lambda{i}" for i in range(d)) + tuple(f"rho{i}" for i in range(d))


def weak_primitivity_automaton(d: int) -> BuchiAutomaton:
    """Deterministic Büchi automaton over ``ar_names(d)``: every index ``i`` occurs
    infinitely often (as ``λ_i`` or ``ρ_i``) and some ``λ`` occurs infinitely often.

    State ``c < d+1`` waits for condition ``c``; state ``d+1`` marks a completed round.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    names = ar_names(d)
    k = d + 1

    def meets(c, name):
        if c == d:
            return name.startswith("lambda")
        return int(name.removeprefix("lambda").removeprefix("rho")) == c

    transitions = []
    for q in range(k + 1):
        c = 0 if q == k else q
        for name in names:
            transitions.append((q, name, c + 1 if meets(c, name) else c))
    labels = tuple(f"wait {'lambda' if c == d else c}" for c in range(k)) + ("round",)
    return BuchiAutomaton(names, k + 1, [0], transitions, [k], state_labels=labels)


def build_ar_acceptance_automaton(automaton, d: int, context=None) -> OmegaAutomaton:
    """Automaton over ``ar_names(d)`` accepting exactly the weakly primitive sequences
    with infinitely many ``λ`` whose (unique) directed word is accepted by ``automaton``."""
    from .adic import AdicContext, relabel_for_finite_S

    context = context or AdicContext(automaton, ar_generators(d))
    directed = relabel_for_finite_S(context.directed_automaton(), ar_names(d), context.class_index)
    return IntersectionAutomaton([weak_primitivity_automaton(d), directed])


def ar_reference_verdict(seq, automaton, context=None) -> bool:
    """Direct evaluation of the acceptance condition for one ultimately periodic sequence."""
    from .adic import decide_up, has_recurring_left_proper, is_weakly_primitive

    if not (is_weakly_primitive(seq) and has_recurring_left_proper(seq)):
        return False
    return decide_up(seq, automaton, mode="directed", context=context)


# -- partial quotients ----------------------------------------------------------------

@dataclass(frozen=True)
class PartialQuotient:
    substitution: Substitution
    letter: int | None  # b_n = a_{l_n}, or None for a sequence without letters
    start: int  # k_n
    stop: int  # l_n (inclusive)


def partial_quotients(seq, count: int, budget: int | None = None) -> list:
    """Greedy segmentation of ``seq`` into minimal positive blocks ``σ_{k_n}⋯σ_{l_n}``.

    Returns the first ``count`` blocks.  ``budget`` bounds the number of terms a
    single block may use; running out raises :class:`BudgetExceeded`, which for
    an ultimately periodic sequence means it is not weakly primitive from there on.
    """
    if budget is None:
        budget = 4 * (len(seq.pre) + len(seq.period)) * seq.alphabet_size + 16
    out = []
    k = 0
    for _ in range(count):
        tau = seq.sub(k)
        l = k
        while not tau.is_positive():
            if l - k + 1 >= budget:
                raise BudgetExceeded(f"no positive block starting at term {k} within {budget} terms")
            l += 1
            tau = compose(tau, seq.sub(l))
        letter = seq.letter(l) if seq.augmented else None
        out.append(PartialQuotient(tau, letter, k, l))
        k = l + 1
    return out


def random_sturmian(rng: random.Random, max_digit: int = 4):
    """A random ultimately periodic Sturmian directive sequence (weakly primitive, infinitely many ``λ``)."""
    cf = ContinuedFraction(tuple(rng.randint(1, max_digit) for _ in range(rng.randint(0, 3))),
                           tuple(rng.randint(1, max_digit) for _ in range(rng.randint(1, 2))))
    digits = random_digits(cf, rng, extra=rng.randint(0, 2), repeats=rng.randint(1, 2))
    return sturmian_directive(cf, digits)


@dataclass
class AgreementReport:
    N: int
    trials: int
    agreements: int = 0
    disagreements: list = field(default_factory=list)  # (seq, seq', verdict, verdict')

    @property
    def rate(self) -> float:
        return self.agreements / self.trials if self.trials else 1.0

    def lines(self) -> list:
        out = [f"N={self.N} trials={self.trials} agree={self.agreements} rate={self.rate:.4f}"]
        for a, b, va, vb in self.disagreements[:3]:
            out.append(f"  disagree: {a!r} -> {va}  vs  {b!r} -> {vb}")
        return out

    def to_dict(self) -> dict:
        return {"N": self.N, "trials": self.trials, "agreements": self.agreements, "rate": self.rate,
                "disagreements": [[repr(a), repr(b), va, vb] for a, b, va, vb in self.disagreements]}


def sample_agreeing_pair(rng: random.Random, N: int, max_tries: int = 100):
    """Two congenially augmented Sturmian sequences whose first ``N`` partial quotients
    (substitutions and letters) coincide; the second continues with a random tail."""
    from .adic import DirectiveSequence, congenial_augmentations

    for _ in range(max_tries):
        first = rng.choice(congenial_augmentations(random_sturmian(rng)))
        blocks = partial_quotients(first, N) if N else []
        cut = blocks[-1].stop + 1 if blocks else 0
        tail = random_sturmian(rng)
        names = first.names(cut)
        second = DirectiveSequence(names + list(tail.pre), tail.period, first.bindings)
        letters = [first.letter(n) for n in range(cut)]
        options = [aug for aug in congenial_augmentations(second)
                   if all(aug.letter(n) == letters[n] for n in range(cut))]
        if options:
            return first, rng.choice(options)
    raise RuntimeError("could not extend the shared prefix congenially")


def agreement_experiment(automaton, N: int, trials: int, seed: int = 0, context=None) -> AgreementReport:
    """Compare verdicts on pairs of Sturmian words sharing their first ``N`` partial quotients."""
    from .adic import AdicContext, decide_up

    report = AgreementReport(N, trials)
    if trials == 0:
        return report
    context = context or AdicContext(automaton, ar_generators(2))
    for i in range(trials):
        rng = random.Random(f"{seed}:{N}:{i}")  # one stream per trial
        a, b = sample_agreeing_pair(rng, N)
        va = decide_up(a, mode="generated", context=context)
        vb = decide_up(b, mode="generated", context=context)
        if va == vb:
            report.agreements += 1
        else:
            report.disagreements.append((a, b, va, vb))
    return report


def agreement_sweep(automaton, N_max: int, trials: int, seed: int = 0) -> tuple:
    """Reports for ``N = 0..N_max`` and the least ``N`` from which no disagreement was seen."""
    from .adic import AdicContext

    context = AdicContext(automaton, ar_generators(2))
    reports = [agreement_experiment(automaton, N, trials, seed, context) for N in range(N_max + 1)]
    least = None
    for r in reversed(reports):
        if r.disagreements:
            break
        least = r.N
    return reports, least
