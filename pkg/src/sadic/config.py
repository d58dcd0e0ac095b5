"""Guards and defaults.

Every size guard lives here so that long-running constructions fail with a
typed error instead of exhausting memory.  Defaults can be overridden through
environment variables (``SADIC_MAX_SEMIGROUP`` etc.), a JSON/YAML file, or
temporarily with :func:`override`.
"""
from __future__ import annotations

import contextlib
import dataclasses
import json
import os
import threading
from dataclasses import dataclass

_ENV = {
    "max_semigroup": "SADIC_MAX_SEMIGROUP",
    "max_dfa_states": "SADIC_MAX_DFA_STATES",
    "max_morphisms": "SADIC_MAX_MORPHISMS",
    "max_automaton_states": "SADIC_MAX_AUTOMATON_STATES",
    "max_candidates": "SADIC_MAX_CANDIDATES",
    "prefix_budget": "SADIC_PREFIX_BUDGET",
    "precision": "SADIC_PRECISION",
    "seed": "SADIC_SEED",
}


@dataclass(frozen=True)
class Config:
    max_semigroup: int = 20_000
    max_dfa_states: int = 100_000
    max_morphisms: int = 200_000
    max_automaton_states: int = 2_000_000
    max_candidates: int = 1_000_000
    prefix_budget: int = 1_000_000
    precision: int = 200  # bits, for interval refinement and mpmath work
    seed: int = 0

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if f.name != "seed" and getattr(self, f.name) <= 0:
                raise ValueError(f"guard {f.name} must be positive")

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_env(cls, base: "Config | None" = None) -> "Config":
        base = base or cls()
        changes = {k: int(os.environ[v]) for k, v in _ENV.items() if v in os.environ}
        return base.replace(**changes)

    @classmethod
    def from_file(cls, path, base: "Config | None" = None) -> "Config":
        with open(path) as fh:
            text = fh.read()
        if str(path).endswith((".yaml", ".yml")):
            import yaml

            data = yaml.safe_load(text) or {}
        else:
            data = json.loads(text)
        base = base or cls()
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return base.replace(**data)


_local = threading.local()
_default = Config.from_env()


def get_config() -> Config:
    return getattr(_local, "config", None) or _default


def set_config(config: Config) -> None:
    global _default
    _default = config


@contextlib.contextmanager
def override(**changes):
    """Temporarily change guards for the current thread."""
    previous = getattr(_local, "config", None)
    _local.config = get_config().replace(**changes)
    try:
        yield _local.config
    finally:
        _local.config = previous
