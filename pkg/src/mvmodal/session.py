"""Session = algebra + functor + proposition signature + registry + budgets."""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .algebra import ResiduatedLattice, builtin_lattice, load_algebra
from .functors import Functor, ValuationSet, make_functor
from .lifting import LiftingRegistry, standard_liftings
from .parsing import parse_formula
from .report import InputError
from .syntax import Const, Formula, Modal, Prop, pretty, subformulas

__all__ = ["Session", "algebra_from_spec"]

_BUILTIN = re.compile(r"^(boolean|lukasiewicz|goedel)(?::(\d+))?$")
_CPAT = re.compile(r"^c\d+$")
DEFAULT_BUDGET = 10**6


def algebra_from_spec(spec) -> ResiduatedLattice:
    """Accepts 'boolean', 'lukasiewicz:3', 'goedel:4', a JSON path, or a dict."""
    if isinstance(spec, dict):
        return load_algebra(spec)
    if isinstance(spec, ResiduatedLattice):
        return spec
    m = _BUILTIN.match(str(spec))
    if m:
        return builtin_lattice(m.group(1), int(m.group(2) or 2))
    if Path(spec).exists():
        return load_algebra(spec)
    raise InputError(f"algebra spec {spec!r} is neither a builtin name nor an existing file")


@dataclass(eq=False)
class Session:
    lat: ResiduatedLattice
    functor: Functor
    propositions: tuple[str, ...]
    budget: int = DEFAULT_BUDGET
    threshold: Fraction = Fraction(1, 2)
    iota0: int | None = None  # id in T(stage 0) overriding the canonical section
    cache_dir: Path | None = None
    registry: LiftingRegistry = field(init=False)
    valuations: ValuationSet = field(init=False)

    def __post_init__(self):
        self.propositions = tuple(self.propositions)
        for p in self.propositions:
            if _CPAT.match(p):
                raise InputError(f"proposition name {p!r} collides with constant syntax")
        if len(set(self.propositions)) != len(self.propositions):
            raise InputError("duplicate proposition names")
        self.registry = standard_liftings(self.lat, self.functor, self.threshold)
        for p in self.propositions:
            if p in self.registry.liftings:
                raise InputError(f"proposition name {p!r} collides with a modality")
        self.valuations = ValuationSet(self.propositions, self.lat.size)
        if self.budget < 1:
            raise InputError("budget must be positive")
        env_cache = os.environ.get("MVMODAL_CACHE")
        if self.cache_dir is None and env_cache:
            self.cache_dir = Path(env_cache)

    # -- formulas -------------------------------------------------------------

    def parse(self, text: str) -> Formula:
        return parse_formula(text, self.lat, self.propositions, self.registry.arities())

    def pretty(self, phi: Formula) -> str:
        return pretty(phi, self.lat)

    def validate_formula(self, phi: Formula) -> Formula:
        for sub in subformulas(phi):
            if isinstance(sub, Prop) and sub.name not in self.propositions:
                raise InputError(f"formula uses undeclared proposition {sub.name!r}")
            if isinstance(sub, Const) and not 0 <= sub.value < self.lat.size:
                raise InputError(f"constant index {sub.value} outside carrier")
            if isinstance(sub, Modal):
                lf = self.registry.get(sub.name)
                if len(sub.args) != lf.arity:
                    raise InputError(f"modality {sub.name!r} expects {lf.arity} argument(s)")
        return phi

    # -- config ---------------------------------------------------------------

    @classmethod
    def from_config(cls, source) -> "Session":
        if isinstance(source, (str, Path)):
            with open(source) as fh:
                data = json.load(fh)
        else:
            data = dict(source)
        if not isinstance(data, dict):
            raise InputError("session config must be a JSON object")
        known = {"algebra", "functor", "propositions", "budget", "threshold", "iota0", "cache_dir"}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown session config keys: {sorted(unknown)}")
        lat = algebra_from_spec(data.get("algebra", "boolean"))
        functor = make_functor(data.get("functor", "powerset"), lat)
        try:
            threshold = Fraction(str(data.get("threshold", "1/2")))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad threshold {data.get('threshold')!r}") from None
        return cls(
            lat=lat,
            functor=functor,
            propositions=tuple(data.get("propositions", ())),
            budget=int(data.get("budget", DEFAULT_BUDGET)),
            threshold=threshold,
            iota0=None if data.get("iota0") is None else int(data["iota0"]),
            cache_dir=Path(data["cache_dir"]) if data.get("cache_dir") else None,
        )

    def fingerprint(self) -> str:
        import hashlib

        payload = json.dumps(
            {
                "algebra": self.lat.to_dict(),
                "functor": self.functor.config(),
                "propositions": list(self.propositions),
                "iota0": self.iota0,
                "threshold": str(self.threshold),
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:20]
