"""Finite commutative integral residuated lattices over canonical index carriers.

Carrier elements are the indices 0..size-1. All four operation tables are dense
integer matrices; the lattice order is derived from the meet table
(a <= b iff meet(a, b) == a, equivalently join(a, b) == b).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .report import InputError, ValidationReport

__all__ = [
    "ResiduatedLattice",
    "FuzzySubset",
    "builtin_lattice",
    "load_algebra",
    "validate_lattice",
    "alpha_cut",
    "family_leq_alpha",
    "label_for_fraction",
]


def label_for_fraction(fr: Fraction) -> str:
    """Shortest exact numeral for a rational: decimal when finite, else n/d."""
    if fr.denominator == 1:
        return str(fr.numerator)
    d = fr.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{fr.numerator}/{fr.denominator}"
    digits = max(twos, fives)
    scaled = fr.numerator * 10**digits // fr.denominator
    text = str(scaled).rjust(digits + 1, "0")
    return f"{text[:-digits]}.{text[-digits:]}" if digits else text


@dataclass(frozen=True, eq=False)
class ResiduatedLattice:
    """Operation tables plus the designated bounds.

    ``values`` optionally embeds the carrier into the rationals (builtin chains
    use i/(k-1)); the distribution modalities require it. ``labels`` drive
    constant printing; they default to the value numerals or c{i}.
    """

    name: str
    size: int
    join: np.ndarray
    meet: np.ndarray
    mono: np.ndarray
    impl: np.ndarray
    bot: int
    top: int
    labels: tuple[str, ...] = ()
    values: tuple[Fraction, ...] | None = None
    _leq: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for attr in ("join", "meet", "mono", "impl"):
            table = np.asarray(getattr(self, attr), dtype=np.int64)
            if table.shape != (self.size, self.size):
                raise InputError(f"{attr} table must be {self.size}x{self.size}, got {table.shape}")
            if table.min() < 0 or table.max() >= self.size:
                raise InputError(f"{attr} table has entries outside 0..{self.size - 1}")
            object.__setattr__(self, attr, table)
        if not (0 <= self.bot < self.size and 0 <= self.top < self.size):
            raise InputError("bot/top outside carrier")
        if not self.labels:
            if self.values is not None:
                object.__setattr__(self, "labels", tuple(label_for_fraction(v) for v in self.values))
            else:
                object.__setattr__(self, "labels", tuple(f"c{i}" for i in range(self.size)))
        if len(self.labels) != self.size:
            raise InputError("label list length != size")
        if self.values is not None and len(self.values) != self.size:
            raise InputError("values list length != size")
        object.__setattr__(self, "_leq", self.meet == np.arange(self.size)[:, None])

    # -- order ---------------------------------------------------------------

    def leq(self, a: int, b: int) -> bool:
        return bool(self._leq[a, b])

    def is_chain(self) -> bool:
        return bool((self._leq | self._leq.T).all())

    def meet_many(self, xs: Iterable[int]) -> int:
        out = self.top
        for x in xs:
            out = int(self.meet[out, x])
        return out

    def join_many(self, xs: Iterable[int]) -> int:
        out = self.bot
        for x in xs:
            out = int(self.join[out, x])
        return out

    def fuse(self, a: int, b: int) -> int:
        return int(self.mono[a, b])

    def residuum(self, a: int, b: int) -> int:
        return int(self.impl[a, b])

    # -- naming --------------------------------------------------------------

    def label(self, a: int) -> str:
        return self.labels[a]

    def index_of_label(self, text: str) -> int | None:
        """Resolve a numeral to a carrier index via label or exact value match."""
        if text in self.labels:
            return self.labels.index(text)
        try:
            fr = Fraction(text)
        except (ValueError, ZeroDivisionError):
            return None
        if self.values is not None and fr in self.values:
            return self.values.index(fr)
        return None

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "size": self.size,
            "join": self.join.tolist(),
            "meet": self.meet.tolist(),
            "mono": self.mono.tolist(),
            "impl": self.impl.tolist(),
            "bot": self.bot,
            "top": self.top,
            "labels": list(self.labels),
        }
        if self.values is not None:
            out["values"] = [str(v) for v in self.values]
        return out

    def fingerprint(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()[:16]


def builtin_lattice(kind: str, k: int = 2) -> ResiduatedLattice:
    """Standard chains on {0, 1/(k-1), ..., 1} encoded as indices 0..k-1."""
    if k < 2:
        raise InputError("chain length must be >= 2")
    if kind == "boolean":
        if k != 2:
            raise InputError("boolean algebra is the 2-chain; use lukasiewicz/goedel for longer chains")
        name = "boolean"
    elif kind in ("lukasiewicz", "goedel"):
        name = f"{kind}-{k}"
    else:
        raise InputError(f"unknown builtin algebra kind {kind!r}")
    rng = np.arange(k)
    join = np.maximum.outer(rng, rng)
    meet = np.minimum.outer(rng, rng)
    if kind == "goedel":
        mono = meet.copy()
        impl = np.where(rng[:, None] <= rng[None, :], k - 1, rng[None, :] * np.ones((k, 1), dtype=int))
    else:
        mono = np.maximum(rng[:, None] + rng[None, :] - (k - 1), 0)
        impl = np.minimum(k - 1 - rng[:, None] + rng[None, :], k - 1)
    values = tuple(Fraction(i, k - 1) for i in range(k))
    return ResiduatedLattice(name, k, join, meet, mono, impl, 0, k - 1, values=values)


def load_algebra(source: str | Path | dict) -> ResiduatedLattice:
    """Read an algebra from a JSON file or an already-parsed object."""
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            data = json.load(fh)
    else:
        data = source
    if not isinstance(data, dict):
        raise InputError("algebra file must hold a JSON object")
    missing = [key for key in ("name", "size", "join", "meet", "mono", "impl", "bot", "top") if key not in data]
    if missing:
        raise InputError(f"algebra file missing keys: {', '.join(missing)}")
    values = None
    if "values" in data:
        try:
            values = tuple(Fraction(str(v)) for v in data["values"])
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad values entry: {exc}") from None
    try:
        return ResiduatedLattice(
            name=str(data["name"]),
            size=int(data["size"]),
            join=np.asarray(data["join"]),
            meet=np.asarray(data["meet"]),
            mono=np.asarray(data["mono"]),
            impl=np.asarray(data["impl"]),
            bot=int(data["bot"]),
            top=int(data["top"]),
            labels=tuple(data.get("labels", ())),
            values=values,
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed algebra tables: {exc}") from None


# -- validation ---------------------------------------------------------------


def _first_bad(report: ValidationReport, law: str, mismatch: np.ndarray, detail: str = "") -> None:
    """Record the lexicographically first differing index tuple, if any."""
    bad = np.argwhere(mismatch)
    if len(bad):
        report.fail(law, tuple(int(i) for i in bad[0]), detail)


def validate_lattice(lat: ResiduatedLattice) -> ValidationReport:
    """Exhaustively check every bounded-residuated-lattice law; list each
    violated law with its first witness tuple (carrier indices)."""
    report = ValidationReport(subject=f"algebra {lat.name}")
    k = lat.size
    J, M, T, I = lat.join, lat.meet, lat.mono, lat.impl
    idx = np.arange(k)
    leq = lat._leq

    _first_bad(report, "join-commutative", J != J.T)
    _first_bad(report, "meet-commutative", M != M.T)
    _first_bad(report, "mono-commutative", T != T.T)
    _first_bad(report, "join-idempotent", J[idx, idx] != idx)
    _first_bad(report, "meet-idempotent", M[idx, idx] != idx)
    # X[X] composes tables: X[X][a,b,c] == X[X[a,b],c]
    _first_bad(report, "join-associative", J[J] != J[:, J])
    _first_bad(report, "meet-associative", M[M] != M[:, M])
    _first_bad(report, "mono-associative", T[T] != T[:, T])
    _first_bad(report, "absorption-join", J[idx[:, None], M] != idx[:, None] * np.ones((1, k), dtype=int))
    _first_bad(report, "absorption-meet", M[idx[:, None], J] != idx[:, None] * np.ones((1, k), dtype=int))
    _first_bad(report, "order-consistency", (M == idx[:, None]) != (J == idx[None, :]))
    _first_bad(report, "bot-join-identity", J[:, lat.bot] != idx)
    _first_bad(report, "top-meet-identity", M[:, lat.top] != idx)
    _first_bad(report, "bot-least", M[:, lat.bot] != lat.bot)
    _first_bad(report, "integrality", J[:, lat.top] != lat.top)
    _first_bad(report, "mono-unit-top", T[:, lat.top] != idx)
    # residuation: mono(a,b) <= c  iff  b <= impl(a,c)
    lhs = leq[T]  # [a,b,c] -> leq(mono(a,b), c)
    rhs = leq[idx[None, :, None], I[:, None, :]]  # [a,b,c] -> leq(b, impl(a,c))
    _first_bad(report, "residuation", lhs != rhs, "mono(a,b)<=c iff b<=impl(a,c) fails at (a,b,c)")

    report.checked = 3 * k**3 + 12 * k * k + 2 * k
    return report


# -- fuzzy subsets and cut families -------------------------------------------


@dataclass(frozen=True)
class FuzzySubset:
    """A map from a finite domain (indices 0..n-1) into the carrier."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @property
    def domain_size(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __iter__(self):
        return iter(self.values)


def _values_of(f) -> Sequence[int]:
    return f.values if isinstance(f, FuzzySubset) else f


def alpha_cut(lat: ResiduatedLattice, f, alpha: int) -> frozenset[int]:
    """{x : f(x) >= alpha}."""
    vals = _values_of(f)
    return frozenset(x for x, v in enumerate(vals) if lat.leq(alpha, v))


def family_leq_alpha(lat: ResiduatedLattice, fs, gs, alpha: int, domain_size: int) -> bool:
    """Cut-family order: intersection of F-cuts inside union of G-cuts.

    An empty F yields the full domain on the left; an empty G yields the
    empty set on the right.
    """
    inter = set(range(domain_size))
    for f in fs:
        inter &= alpha_cut(lat, f, alpha)
    union: set[int] = set()
    for g in gs:
        union |= alpha_cut(lat, g, alpha)
    return inter <= union
