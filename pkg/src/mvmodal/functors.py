"""Finite set endofunctors with canonical element ids and decoded forms.

Every functor assigns each finite carrier size n a canonically enumerated set
T(n) (ids 0..|T(n)|-1) together with decode/encode between ids and structured
"delta forms". Delta forms are small hashable trees whose leaves are base-set
elements; crucially they also represent elements of T(X) for *non-enumerable*
X (pushforwards keep the structure small), which is what lets stage maps be
computed without materializing astronomically large carriers:

    frozenset({...})                powerset: the subset itself
    ("fz", ((elem, value), ...))    fuzzy subset, sparse, default bot
    ("nb", base, mapping)           neighborhood: N(g) = base[enc(g on mapping)]
    ("sel", table, m, mapping)      selection: table over Hom(m, A), relabelled
    ("ds", ((elem, count), ...), q) distribution on the 1/q grid

Enumeration conventions (stable, documented for the file formats): functions
into the carrier are numerals with element 0 as the most significant digit;
subsets are bitmasks with bit i = element i; grid distributions enumerate in
descending-lex count order, e.g. q=2, n=2 gives (2,0), (1,1), (0,2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

from .algebra import ResiduatedLattice
from .report import BudgetError, InputError, ValidationReport

__all__ = [
    "FiniteSet",
    "FiniteMap",
    "ValuationSet",
    "Functor",
    "Powerset",
    "FuzzyHom",
    "Neighborhood",
    "Selection",
    "Distribution",
    "make_functor",
    "push_delta",
    "sort_key",
    "digits_of",
    "undigits",
    "t_object",
    "t_morphism",
    "check_functor_laws",
]


# -- positional numeral helpers (element 0 = most significant digit) -----------


def digits_of(base: int, length: int, x: int) -> tuple[int, ...]:
    out = [0] * length
    for i in range(length - 1, -1, -1):
        x, d = divmod(x, base)
        out[i] = d
    return tuple(out)


def undigits(base: int, seq: Sequence[int]) -> int:
    x = 0
    for v in seq:
        x = x * base + v
    return x


def sort_key(e):
    """Total deterministic order on delta-form trees (for canonical sparse forms)."""
    if isinstance(e, bool) or e is None:
        return (0, repr(e))
    if isinstance(e, int):
        return (1, e)
    if isinstance(e, str):
        return (2, e)
    if isinstance(e, tuple):
        return (3, tuple(sort_key(x) for x in e))
    if isinstance(e, frozenset):
        return (4, tuple(sorted((sort_key(x) for x in e))))
    return (5, repr(e))


def _canon_pairs(acc: dict) -> tuple:
    return tuple(sorted(acc.items(), key=lambda kv: sort_key(kv[0])))


def push_delta(lat: ResiduatedLattice, delta, f: Callable):
    """Apply the functorial action along an arbitrary base-element map f.

    Works uniformly on all delta forms; f maps base elements to base elements
    of the codomain (ids or decoded stage elements alike).
    """
    if isinstance(delta, frozenset):
        return frozenset(f(e) for e in delta)
    tag = delta[0]
    if tag == "fz":
        # direct image with joins: (Hf g)(y) = join of g over the fibre of y
        acc: dict = {}
        for e, v in delta[1]:
            k = f(e)
            acc[k] = int(lat.join[acc[k], v]) if k in acc else v
        return ("fz", _canon_pairs(acc))
    if tag == "nb":
        _, base, mapping = delta
        return ("nb", base, tuple(f(e) for e in mapping))
    if tag == "sel":
        _, table, m, mapping = delta
        return ("sel", table, m, tuple(f(e) for e in mapping))
    if tag == "ds":
        _, pairs, q = delta
        acc = {}
        for e, c in pairs:
            k = f(e)
            acc[k] = acc.get(k, 0) + c
        return ("ds", _canon_pairs(acc), q)
    raise InputError(f"unknown delta form {delta!r}")


# -- carriers -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteSet:
    size: int
    describe: Callable[[int], str] = str


@dataclass(frozen=True, eq=False)
class FiniteMap:
    dom: FiniteSet
    cod: FiniteSet
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if len(self.table) != self.dom.size:
            raise InputError("map table length != domain size")
        if any(not 0 <= v < self.cod.size for v in self.table):
            raise InputError("map table value outside codomain")

    def __call__(self, x: int) -> int:
        return self.table[x]


@dataclass(frozen=True, eq=False)
class ValuationSet:
    """Hom(P, A): all assignments of carrier values to the proposition list,
    enumerated lexicographically with the first proposition most significant."""

    props: tuple[str, ...]
    asize: int

    @property
    def size(self) -> int:
        return self.asize ** len(self.props)

    def decode(self, v: int) -> tuple[int, ...]:
        return digits_of(self.asize, len(self.props), v)

    def encode(self, vals: Sequence[int]) -> int:
        return undigits(self.asize, vals)

    def value(self, v: int, prop_index: int) -> int:
        return (v // self.asize ** (len(self.props) - 1 - prop_index)) % self.asize

    def describe(self, v: int, lat: ResiduatedLattice) -> str:
        if not self.props:
            return "-"
        vals = self.decode(v)
        return ",".join(f"{p}={lat.label(x)}" for p, x in zip(self.props, vals))


# -- the functors ---------------------------------------------------------------


class Functor:
    """Object action on canonical finite carriers plus decoded-form codecs."""

    name: str = "?"
    finite = True

    def __init__(self, lat: ResiduatedLattice):
        self.lat = lat

    # exact |T(n)|; may be astronomically large for some functors, so callers
    # gate on fits() before enumerating
    def size(self, n: int) -> int:
        raise NotImplementedError

    def log2_size(self, n: int) -> float:
        return math.log2(max(self.size(n), 1))

    def size_text(self, n: int) -> str:
        return str(self.size(n))

    def fits(self, n: int, cap: int) -> int | None:
        """|T(n)| when it is <= cap, else None; never builds huge powers."""
        if self.log2_size(n) > cap.bit_length() + 1:
            return None
        v = self.size(n)
        return v if v <= cap else None

    def decode(self, n: int, x: int):
        raise NotImplementedError

    def encode(self, n: int, delta) -> int:
        raise NotImplementedError

    def base_elem(self, n: int):
        """Canonical element of T(n) used as the default section choice."""
        raise NotImplementedError

    def describe(self, delta, elem_text: Callable[[object], str]) -> str:
        raise NotImplementedError

    def config(self) -> dict:
        return {"functor": self.name}

    # id-level morphism action T(f); requires both carriers enumerable
    def map_table(self, f_table: Sequence[int], dom_n: int, cod_n: int) -> list[int]:
        lookup = list(f_table).__getitem__
        return [self.encode(cod_n, push_delta(self.lat, self.decode(dom_n, x), lookup))
                for x in range(self.size(dom_n))]


class Powerset(Functor):
    name = "powerset"

    def size(self, n: int) -> int:
        return 1 << n

    def log2_size(self, n: int) -> float:
        return float(n)

    def size_text(self, n: int) -> str:
        return f"2^{n}"

    def decode(self, n: int, x: int):
        return frozenset(i for i in range(n) if (x >> i) & 1)

    def encode(self, n: int, delta) -> int:
        return sum(1 << e for e in delta)

    def base_elem(self, n: int):
        return frozenset()

    def describe(self, delta, elem_text) -> str:
        inner = ", ".join(elem_text(e) for e in sorted(delta, key=sort_key))
        return "{" + inner + "}"


class FuzzyHom(Functor):
    """T(S) = Hom(S, A); covariant action = join-based direct image."""

    name = "fuzzyhom"

    def size(self, n: int) -> int:
        return self.lat.size ** n

    def log2_size(self, n: int) -> float:
        return n * math.log2(self.lat.size)

    def size_text(self, n: int) -> str:
        return f"{self.lat.size}^{n}"

    def decode(self, n: int, x: int):
        vals = digits_of(self.lat.size, n, x)
        return ("fz", tuple((i, v) for i, v in enumerate(vals) if v != self.lat.bot))

    def encode(self, n: int, delta) -> int:
        vals = [self.lat.bot] * n
        for e, v in delta[1]:
            vals[e] = v
        return undigits(self.lat.size, vals)

    def base_elem(self, n: int):
        return ("fz", ())

    def describe(self, delta, elem_text) -> str:
        inner = ", ".join(f"{elem_text(e)}:{self.lat.label(v)}" for e, v in delta[1])
        return "fz{" + inner + "}"


class Neighborhood(Functor):
    """T(S) = Hom(Hom(S, A), A); doubly contravariant, hence covariant."""

    name = "neighborhood"

    def _homsize(self, n: int) -> int:
        return self.lat.size ** n

    def size(self, n: int) -> int:
        return self.lat.size ** self._homsize(n)

    def log2_size(self, n: int) -> float:
        return self._homsize(n) * math.log2(self.lat.size)

    def size_text(self, n: int) -> str:
        return f"{self.lat.size}^({self.lat.size}^{n})"

    def decode(self, n: int, x: int):
        base = digits_of(self.lat.size, self._homsize(n), x)
        return ("nb", base, tuple(range(n)))

    def encode(self, n: int, delta) -> int:
        _, base, mapping = delta
        a, m = self.lat.size, len(mapping)
        out = []
        for g in range(self._homsize(n)):
            vals = digits_of(a, n, g)
            out.append(base[undigits(a, tuple(vals[e] for e in mapping))])
        return undigits(a, out)

    def base_elem(self, n: int):
        return ("nb", (self.lat.bot,) * self._homsize(n), tuple(range(n)))

    def describe(self, delta, elem_text) -> str:
        _, base, mapping = delta
        labels = ",".join(self.lat.label(v) for v in base)
        over = ",".join(elem_text(e) for e in mapping)
        return f"nb[{labels} over ({over})]"


class Selection(Functor):
    """T(S) = Hom(Hom(S, A), Hom(S, A)) with join-direct-image relabelling."""

    name = "selection"

    def _homsize(self, n: int) -> int:
        return self.lat.size ** n

    def size(self, n: int) -> int:
        h = self._homsize(n)
        return h ** h

    def log2_size(self, n: int) -> float:
        h = self._homsize(n)
        return h * math.log2(max(h, 1)) if h else 0.0

    def size_text(self, n: int) -> str:
        return f"({self.lat.size}^{n})^({self.lat.size}^{n})"

    def decode(self, n: int, x: int):
        h = self._homsize(n)
        return ("sel", digits_of(h, h, x), n, tuple(range(n)))

    def row_at(self, delta, arg_vals: Sequence[int]):
        """s(f) as sparse codomain values, where f is given on the mapping."""
        _, table, m, mapping = delta
        a = self.lat.size
        row = digits_of(a, m, table[undigits(a, arg_vals)])
        acc: dict = {}
        for x, y in enumerate(mapping):
            v = row[x]
            acc[y] = int(self.lat.join[acc[y], v]) if y in acc else v
        return acc

    def encode(self, n: int, delta) -> int:
        _, table, m, mapping = delta
        a, h = self.lat.size, self._homsize(n)
        out = []
        for g in range(h):
            gvals = digits_of(a, n, g)
            acc = self.row_at(delta, tuple(gvals[e] for e in mapping))
            vals = [self.lat.bot] * n
            for y, v in acc.items():
                vals[y] = v
            out.append(undigits(a, vals))
        return undigits(h, out)

    def base_elem(self, n: int):
        h = self._homsize(n)
        return ("sel", tuple(range(h)), n, tuple(range(n)))

    def describe(self, delta, elem_text) -> str:
        _, table, m, mapping = delta
        over = ",".join(elem_text(e) for e in mapping)
        return f"sel[{','.join(map(str, table))} over ({over})]"


class Distribution(Functor):
    """Probability distributions restricted to the 1/q grid."""

    name = "distribution"

    def __init__(self, lat: ResiduatedLattice, q: int):
        super().__init__(lat)
        if q < 1:
            raise InputError("distribution grid denominator q must be >= 1")
        self.q = q

    def config(self) -> dict:
        return {"functor": {"distribution": {"q": self.q}}}

    def _count(self, q: int, n: int) -> int:
        if n == 0:
            return 1 if q == 0 else 0
        return math.comb(q + n - 1, n - 1)

    def size(self, n: int) -> int:
        return self._count(self.q, n)

    def log2_size(self, n: int) -> float:
        return math.log2(max(self.size(n), 1))

    def decode(self, n: int, x: int):
        q, counts = self.q, []
        left = self.q
        for i in range(n):
            for c in range(left, -1, -1):
                block = self._count(left - c, n - i - 1)
                if x < block:
                    counts.append(c)
                    left -= c
                    break
                x -= block
        return ("ds", tuple((i, c) for i, c in enumerate(counts) if c), q)

    def encode(self, n: int, delta) -> int:
        _, pairs, q = delta
        counts = [0] * n
        for e, c in pairs:
            counts[e] = c
        x, left = 0, q
        for i, c in enumerate(counts):
            for d in range(left, c, -1):
                x += self._count(left - d, n - i - 1)
            left -= c
        return x

    def base_elem(self, n: int):
        if n < 1:
            raise InputError("no distributions on the empty carrier")
        return ("ds", ((0, self.q),), self.q)

    def describe(self, delta, elem_text) -> str:
        _, pairs, q = delta
        inner = ", ".join(f"{elem_text(e)}:{c}/{q}" for e, c in pairs)
        return "ds{" + inner + "}"


_KINDS = {f.name: f for f in (Powerset, FuzzyHom, Neighborhood, Selection)}


def make_functor(spec, lat: ResiduatedLattice) -> Functor:
    """Build from a config value: a name string, "distribution:N", or
    {"distribution": {"q": N}}."""
    if isinstance(spec, str):
        if spec in _KINDS:
            return _KINDS[spec](lat)
        if spec.startswith("distribution:"):
            try:
                return Distribution(lat, int(spec.split(":", 1)[1]))
            except ValueError:
                raise InputError(f"bad distribution size in {spec!r}") from None
        raise InputError(f"unknown functor {spec!r}")
    if isinstance(spec, dict) and set(spec) == {"distribution"}:
        try:
            return Distribution(lat, int(spec["distribution"]["q"]))
        except (KeyError, TypeError, ValueError):
            raise InputError('distribution functor config must be {"distribution": {"q": N}}') from None
    raise InputError(f"bad functor config {spec!r}")


# -- categorical wrappers and the law checker ------------------------------------


def t_object(F: Functor, S: FiniteSet) -> FiniteSet:
    size = F.size(S.size)

    def describe(x: int) -> str:
        return F.describe(F.decode(S.size, x), lambda e: S.describe(e))

    return FiniteSet(size, describe)


def t_morphism(F: Functor, f: FiniteMap) -> FiniteMap:
    table = F.map_table(f.table, f.dom.size, f.cod.size)
    return FiniteMap(t_object(F, f.dom), t_object(F, f.cod), tuple(table))


def check_functor_laws(F: Functor, bound: int = 2, budget: int = 10**6) -> ValidationReport:
    """Exhaustive identity/composition checks for all carriers of size <= bound.

    Carrier sizes whose T-image exceeds the budget are listed as skipped, so
    the result is a bounded certificate over the in-budget fragment.
    """
    report = ValidationReport(subject=f"functor laws: {F.name}")
    tsize: dict[int, int | None] = {n: F.fits(n, budget) for n in range(bound + 1)}

    for n in range(bound + 1):
        if tsize[n] is None:
            report.skip(f"identity at |S|={n}: |T(S)|={F.size_text(n)} exceeds budget {budget}")
            continue
        table = F.map_table(tuple(range(n)), n, n)
        report.checked += len(table)
        if table != list(range(tsize[n])):
            bad = next(x for x, y in enumerate(table) if x != y)
            report.fail("identity", (n, bad), f"T(id) moves element {bad} at |S|={n}")

    for a, b, c in product(range(bound + 1), repeat=3):
        if tsize[a] is None or tsize[b] is None:
            report.skip(f"composition at sizes ({a},{b},{c}): T-carrier over budget {budget}")
            continue
        for f in product(range(b), repeat=a):
            tf = F.map_table(f, a, b)
            for g in product(range(c), repeat=b):
                gf = tuple(g[f[x]] for x in range(a))
                tg_of_tf = [F.encode(c, push_delta(F.lat, F.decode(b, y), lambda e: g[e])) for y in tf]
                tgf = F.map_table(gf, a, c)
                report.checked += len(tgf)
                if tgf != tg_of_tf:
                    bad = next(x for x in range(len(tgf)) if tgf[x] != tg_of_tf[x])
                    report.fail("composition", (a, b, c, f, g, bad),
                                "T(g.f) != T(g).T(f) at the named element")
                    return report
    return report
