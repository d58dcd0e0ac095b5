"""Text formats: JSON automata, the substitution DSL, ``pre; period`` sequences and DOT."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping, Sequence

from .dfa import Dfa
from .errors import ParseError
from .omega import BuchiAutomaton, ParityAutomaton
from .words import Substitution


# -- automata -----------------------------------------------------------------------

def _letter_map(alphabet):
    if not isinstance(alphabet, list) or not alphabet:
        raise ParseError("'alphabet' must be a non-empty list")
    names = [str(a) for a in alphabet]
    if len(set(names)) != len(names):
        raise ParseError(f"duplicate letters in alphabet {names}")
    return {n: i for i, n in enumerate(names)}, names


def automaton_from_dict(data: Mapping):
    """Build a Büchi, parity or finite-word automaton from the JSON structure.

    Letters become indices ``0..k-1`` in the order of ``alphabet``; the names are
    kept as ``letter_names``.  For such automata ``loads(dumps(A)) == A``; for
    automata over symbolic letters the canonical JSON text is the fixpoint.
    """
    for key in ("alphabet", "states", "initial", "transitions", "acceptance"):
        if key not in data:
            raise ParseError(f"automaton is missing {key!r}")
    index, names = _letter_map(data["alphabet"])
    n = data["states"]
    if not isinstance(n, int) or n < 1:
        raise ParseError("'states' must be a positive integer")
    initial = data["initial"]
    if isinstance(initial, int):
        initial = [initial]
    transitions = []
    for t in data["transitions"]:
        if not isinstance(t, list) or len(t) != 3:
            raise ParseError(f"transition {t!r} must be [from, letter, to]")
        p, a, q = t
        if str(a) not in index:
            raise ParseError(f"transition {t!r} uses letter {a!r} outside the alphabet")
        if not (isinstance(p, int) and isinstance(q, int) and 0 <= p < n and 0 <= q < n):
            raise ParseError(f"transition {t!r} uses an undeclared state")
        transitions.append((p, index[str(a)], q))
    if any(not isinstance(q, int) or not 0 <= q < n for q in initial):
        raise ParseError("initial states must be declared states")
    acc = data["acceptance"]
    if not isinstance(acc, dict) or len(acc) != 1:
        raise ParseError("'acceptance' must have exactly one of 'buchi', 'parity', 'finite'")
    kind, spec = next(iter(acc.items()))
    labels = data.get("state_labels")
    alphabet = range(len(names))
    if kind == "buchi":
        return BuchiAutomaton(alphabet, n, initial, transitions, spec, letter_names=names, state_labels=labels)
    if kind == "parity":
        if len(initial) != 1:
            raise ParseError("a parity automaton needs exactly one initial state")
        delta = {}
        for p, a, q in transitions:
            if (p, a) in delta:
                raise ParseError(f"parity automaton is not deterministic on ({p}, {names[a]})")
            delta[(p, a)] = q
        try:
            prio = [int(spec[str(q)]) for q in range(n)]
        except KeyError as e:
            raise ParseError(f"parity index missing for state {e.args[0]}") from None
        try:
            return ParityAutomaton(alphabet, n, initial[0], delta, prio, letter_names=names)
        except ValueError as e:
            raise ParseError(str(e)) from None
    if kind == "finite":
        if len(initial) != 1:
            raise ParseError("a DFA needs exactly one initial state")
        rows = [[None] * len(names) for _ in range(n)]
        for p, a, q in transitions:
            if rows[p][a] is not None:
                raise ParseError(f"DFA is not deterministic on ({p}, {names[a]})")
            rows[p][a] = q
        if any(x is None for row in rows for x in row):
            raise ParseError("DFA transition function must be total")
        return Dfa(len(names), rows, initial[0], spec, state_labels=labels, letter_names=names)
    raise ParseError(f"unknown acceptance kind {kind!r}")


def _label(x):
    return x if isinstance(x, (str, int)) else repr(x)


def automaton_to_dict(aut) -> dict:
    if isinstance(aut, Dfa):
        names = list(aut.letter_names)
        trans = [[q, names[a], int(aut.delta[q, a])] for q in range(aut.n_states) for a in range(aut.alphabet_size)]
        out = {"alphabet": names, "states": aut.n_states, "initial": [aut.initial], "transitions": trans,
               "acceptance": {"finite": sorted(aut.accepting)}}
        labels = aut.state_labels
    elif isinstance(aut, ParityAutomaton):
        names = list(aut.letter_names)
        trans = [[p, names[aut.alphabet.index(a)], q] for (p, a), q in sorted(aut.delta.items(), key=lambda kv: (kv[0][0], aut.alphabet.index(kv[0][1])))]
        out = {"alphabet": names, "states": aut.n_states, "initial": [aut.initial], "transitions": trans,
               "acceptance": {"parity": {str(q): aut.index[q] for q in range(aut.n_states)}}}
        labels = None
    else:
        if not isinstance(aut, BuchiAutomaton):
            aut = aut.materialize()
        names = list(aut.letter_names)
        trans = [[p, names[aut.alphabet.index(a)], q] for p, a, q in aut.transitions()]
        out = {"alphabet": names, "states": aut.n_states, "initial": sorted(aut.initial), "transitions": trans,
               "acceptance": {"buchi": sorted(aut.accepting)}}
        labels = aut.state_labels
    if labels is not None:
        out["state_labels"] = [_label(x) for x in labels]
    return out


def loads_automaton(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("automaton file must contain a JSON object")
    return automaton_from_dict(data)


def dumps_automaton(aut) -> str:
    return json.dumps(automaton_to_dict(aut), indent=1, sort_keys=True) + "\n"


def load_automaton(path):
    return loads_automaton(Path(path).read_text())


# -- substitution DSL ----------------------------------------------------------------
#
#   # Fibonacci
#   [sigma_fib]
#   0 -> 01
#   1 -> 0
#
# Images are written letter by letter when every letter name is one character,
# otherwise as space-separated names.  Images must be non-empty and every
# section must define every letter once.

def parse_substitutions(text: str, alphabet: Sequence[str] | None = None) -> dict:
    """Parse the DSL into ``{name: Substitution}`` (a file without sections yields ``{"sigma": ...}``)."""
    sections: list = []  # [name, [(line_no, lhs, rhs)]]
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]") or not line[1:-1].strip():
                raise ParseError(f"malformed section header {raw.strip()!r}", no)
            name = line[1:-1].strip()
            if any(s[0] == name for s in sections):
                raise ParseError(f"duplicate section {name!r}", no)
            sections.append([name, [], no])
            continue
        if "->" not in line:
            raise ParseError(f"expected 'letter -> image', got {raw.strip()!r}", no)
        lhs, rhs = (x.strip() for x in line.split("->", 1))
        if not lhs or " " in lhs:
            raise ParseError(f"left-hand side must be a single letter, got {lhs!r}", no)
        if not sections:
            sections.append(["sigma", [], no])
        sections[-1][1].append((no, lhs, rhs))
    if not sections:
        raise ParseError("no substitutions found")
    if alphabet is None:
        alphabet = [lhs for _, lhs, _ in sections[0][1]]
    alphabet = [str(a) for a in alphabet]
    index = {a: i for i, a in enumerate(alphabet)}
    single = all(len(a) == 1 for a in alphabet)
    out = {}
    for name, rules, header_line in sections:
        images: list = [None] * len(alphabet)
        for no, lhs, rhs in rules:
            if lhs not in index:
                raise ParseError(f"letter {lhs!r} is not in the alphabet {alphabet}", no)
            if images[index[lhs]] is not None:
                raise ParseError(f"letter {lhs!r} is defined twice in [{name}]", no)
            tokens = list(rhs.replace(" ", "")) if single else rhs.split()
            bad = [t for t in tokens if t not in index]
            if bad:
                raise ParseError(f"image uses unknown letter {bad[0]!r}", no)
            images[index[lhs]] = tuple(index[t] for t in tokens)
        missing = [alphabet[i] for i, im in enumerate(images) if im is None]
        if missing:
            raise ParseError(f"[{name}] does not define letter(s) {', '.join(missing)}", header_line)
        try:
            out[name] = Substitution(tuple(images), name=name)
        except ValueError as e:
            raise ParseError(f"[{name}]: {e}", header_line) from None
    return out


def format_substitution(sigma: Substitution, name: str | None = None, alphabet: Sequence[str] | None = None) -> str:
    alphabet = [str(a) for a in (alphabet or range(sigma.size))]
    sep = "" if all(len(a) == 1 for a in alphabet) else " "
    lines = [f"[{name}]"] if name else []
    for a, img in enumerate(sigma.images):
        lines.append(f"{alphabet[a]} -> {sep.join(alphabet[c] for c in img)}")
    return "\n".join(lines) + "\n"


def format_substitutions(subs: Mapping[str, Substitution], alphabet=None) -> str:
    return "\n".join(format_substitution(s, n, alphabet) for n, s in subs.items())


def load_substitutions(path, alphabet=None) -> dict:
    return parse_substitutions(Path(path).read_text(), alphabet)


# -- "pre; period" sequences --------------------------------------------------------

def parse_lasso(text: str, letters: bool = False) -> tuple:
    """``"a b; c d"`` → ``(("a", "b"), ("c", "d"))``.  With ``letters=True`` tokens are
    digits and may be written without spaces (``"01; 0"``)."""
    if ";" not in text:
        raise ParseError(f"expected 'prefix; period', got {text!r}")
    pre, period = text.split(";", 1)

    def toks(s):
        s = s.replace(",", " ")
        if letters:
            try:
                return tuple(int(c) for c in s if not c.isspace())
            except ValueError:
                raise ParseError(f"letters must be digits, got {s.strip()!r}") from None
        return tuple(s.split())

    pre, period = toks(pre), toks(period)
    if not period:
        raise ParseError("the period must be non-empty")
    return pre, period


def format_lasso(pre, period) -> str:
    return f"{' '.join(map(str, pre))}; {' '.join(map(str, period))}".strip()


# -- DOT ------------------------------------------------------------------------------

def _dot_escape(s) -> str:
    return str(s).replace("\\", "\\\\").replace('"', '\\"')


def to_dot(aut, name: str = "A") -> str:
    """Graphviz rendering; parallel edges are merged into one comma-separated label."""
    d = automaton_to_dict(aut)
    (kind, spec), = d["acceptance"].items()
    lines = [f'digraph "{_dot_escape(name)}" {{', "  rankdir=LR;", '  init [shape=point, label=""];']
    labels = d.get("state_labels")
    for q in range(d["states"]):
        shape = "doublecircle" if kind in ("buchi", "finite") and q in spec else "circle"
        text = str(q) if labels is None else f"{q}: {labels[q]}"
        if kind == "parity":
            text += f" [{spec[str(q)]}]"
        lines.append(f'  {q} [shape={shape}, label="{_dot_escape(text)}"];')
    for q in d["initial"]:
        lines.append(f"  init -> {q};")
    edges: dict = {}
    for p, a, q in d["transitions"]:
        edges.setdefault((p, q), []).append(str(a))
    for (p, q), letters in edges.items():
        lines.append(f'  {p} -> {q} [label="{_dot_escape(",".join(letters))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit(aut, path, name: str = "A"):
    """Write ``aut`` as DOT when ``path`` ends in ``.dot``, JSON otherwise."""
    path = Path(path)
    text = to_dot(aut, name) if path.suffix == ".dot" else dumps_automaton(aut)
    path.write_text(text)
    return path
