"""Verdicts stabilise once enough partial quotients agree.

Two Sturmian directive sequences sharing their first N partial quotients are
sampled many times.  For "starts with 0" a single quotient already decides
the verdict; with N = 0 the answers differ.
"""
from sadic import library
from sadic.sturmian import agreement_sweep

for name in ("first-0", "no-11", "contains-11"):
    reports, least = agreement_sweep(library.automaton(name), 3, trials=20, seed=1)
    rates = "  ".join(f"N={r.N}: {r.rate:.2f}" for r in reports)
    print(f"{name:12s} {rates}   agree from N = {least}")
