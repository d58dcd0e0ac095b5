"""Reference implementations used only by the tests.

Each oracle works on concrete words or explicit runs and shares no decision
code with the package, so agreement with it is real evidence.
"""
from __future__ import annotations

import itertools

import mpmath

from sadic.omega import BuchiAutomaton, ParityAutomaton


# -- automata on explicit words ------------------------------------------------------

def _buchi_edges(aut: BuchiAutomaton):
    edges = {}
    for p, a, q in aut.transitions():
        edges.setdefault((p, a), []).append(q)
    return edges


def lasso_accepts(aut, u, v) -> bool:
    """Accept ``u v^ω`` by searching the run graph on positions of ``u v``.

    Büchi: some reachable accepting node lies on a cycle.  Parity: simulate the
    unique run until a (state, period position) pair repeats.
    """
    u, v = tuple(u), tuple(v)
    assert v
    if isinstance(aut, ParityAutomaton):
        q = aut.initial
        for a in u:
            q = aut.delta[(q, a)]
        seen = {}
        trace = []
        i = 0
        while (q, i % len(v)) not in seen:
            seen[(q, i % len(v))] = len(trace)
            trace.append(q)
            q = aut.delta[(q, v[i % len(v)])]
            i += 1
        loop = trace[seen[(q, i % len(v))]:]
        return max(aut.index[s] for s in loop) % 2 == 0
    edges = _buchi_edges(aut)
    w = u + v
    n = len(w)

    def succ(node):
        q, i = node
        j = i + 1 if i + 1 < n else len(u)
        return [(r, j) for r in edges.get((q, w[i]), ())]

    def reach(starts):
        seen = set()
        stack = list(starts)
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(succ(x))
        return seen

    reachable = reach((q, 0) for q in aut.initial) if n else set()
    for node in reachable:
        if node[0] in aut.accepting and node in reach(succ(node)):
            return True
    return False


def dfa_language(accepts, d: int, n: int) -> set:
    """All words of length ≤ n over ``range(d)`` satisfying ``accepts``."""
    return {w for k in range(n + 1) for w in itertools.product(range(d), repeat=k) if accepts(w)}


# -- words -------------------------------------------------------------------------------

def fibonacci_prefix(n: int) -> str:
    """Iterate ``0 → 01, 1 → 0`` on strings."""
    w = "0"
    while len(w) < n:
        w = "".join("01" if c == "0" else "0" for c in w)
    return w[:n]


def window_factors(w, n: int) -> set:
    return {tuple(w[i:i + n]) for i in range(len(w) - n + 1)}


def window_recurrence(w, l: int) -> int:
    """Smallest M such that every length-M window of ``w`` contains every length-l factor of ``w``."""
    if l == 0:
        return 0
    target = window_factors(w, l)
    for M in range(l, len(w) + 1):
        if all(window_factors(w[i:i + M], l) == target for i in range(len(w) - M + 1)):
            return M
    raise AssertionError("prefix too short")


def cf_value(digits_prefix, digits_period, prec: int = 400):
    """``[0; a_1, a_2, ...]`` at ``prec`` bits from a deep truncation."""
    with mpmath.workprec(prec):
        ds = list(digits_prefix) + list(digits_period) * (prec // max(1, len(digits_period)) + 2)
        x = mpmath.mpf(0)
        for a in reversed(ds):
            x = 1 / (a + x)
        return x


def floor_characteristic(eta, n: int, prec: int = 400) -> tuple:
    with mpmath.workprec(prec):
        return tuple(int(mpmath.floor((i + 2) * eta) - mpmath.floor((i + 1) * eta)) for i in range(n))


# -- morphic words through concrete substitutions ----------------------------------------

def _apply(images, w):
    return tuple(c for a in w for c in images[a])


def _power(images, n):
    out = tuple((a,) for a in range(len(images)))
    for _ in range(n):
        out = tuple(_apply(images, w) for w in out)
    return out


def _terminal(images):
    """Letters whose iterates stop changing, with their limit words."""
    d = len(images)
    out = {}
    for a in range(d):
        w = (a,)
        for _ in range(2 * d + 2):
            nxt = _apply(images, w)
            if nxt == w:
                out[a] = w
                break
            w = nxt
    return out


def morphic_value(sg, images, pi_images, u):
    """``h_L(π(σ^ω(u)))`` as ``("finite", id)``, ``("bottom",)`` or ``("omega", id)``.

    The kind of the limit comes from ``sigma_omega_prefix``.  The value is
    computed on concrete powers ``τ = σ^L`` with an idempotent head map: a letter
    with a growing head ``x`` (``τ(x) = x v``) has ``τ^ω = x v τ(v) τ²(v) ⋯``, whose
    value is read off the eventually periodic sequence ``h ∘ τ^n``; any other
    letter reduces to the first non-terminal letter of its image.
    """
    from sadic.morphic import sigma_omega_prefix
    from sadic.words import Substitution

    kind = sigma_omega_prefix(Substitution(images), u, 1).kind
    d = len(images)
    h0 = tuple(sg.word_value(pi_images[a]) for a in range(d))

    def hval(w):
        return sg.product(*(h0[a] for a in w))

    if kind == "bottom":
        return ("bottom",)
    if kind == "finite":
        return ("finite", hval(sigma_omega_prefix(Substitution(images), u, 0).word))

    head = [images[a][0] for a in range(d)]
    f = list(range(d))
    L = 0
    while True:
        f = [head[x] for x in f]
        L += 1
        if all(f[f[a]] == f[a] for a in range(d)):
            break
    tau = _power(images, L)
    term = _terminal(tau)

    def growing(x):
        v = tau[x][1:]
        h = h0
        seen = {}
        terms = []
        while h not in seen:
            seen[h] = len(terms)
            terms.append(sg.product(*(h[a] for a in v)))
            h = tuple(sg.product(*(h[b] for b in tau[a])) for a in range(d))
        start = seen[h]
        prefix = sg.product(h0[x], *terms[:start])
        return sg.mixed_product(prefix, sg.omega_power(sg.product(*terms[start:])))

    def resolve(c, stack):
        # ("omega", id) or ("back", c0, p) meaning α_c = p α_{c0}
        x = tau[c][0]
        if x not in term:
            return ("omega", growing(x))
        if c in stack:
            return ("back", c, ())
        pre = term[x]
        for b in tau[c][1:]:
            if b in term:
                pre += term[b]
                continue
            r = resolve(b, stack + [c])
            if r[0] == "omega":
                return ("omega", sg.mixed_product(hval(pre), r[1]))
            c0, p = r[1], pre + r[2]
            if c0 == c:
                return ("omega", sg.omega_power(hval(p)))
            return ("back", c0, p)
        raise AssertionError(f"letter {c} has a finite limit")

    acc = ()
    for c in u:
        if c in term:
            acc += term[c]
            continue
        r = resolve(c, [])
        assert r[0] == "omega"
        return ("omega", sg.mixed_product(hval(acc), r[1]))
    raise AssertionError("infinite limit without a growing letter")


def morphic_accepts(sg, images, pi_images, u) -> bool:
    r = morphic_value(sg, images, pi_images, u)
    return r[0] == "omega" and r[1] in sg.accepting_omega
