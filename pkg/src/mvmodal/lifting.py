"""Predicate liftings: modal operator semantics as natural transformations.

Each lifting turns argument predicates (carrier-valued maps on a base set)
into one predicate on the functor image. Evaluators work pointwise on delta
forms with the arguments supplied as callables, so the same code serves tiny
concrete models and lazily represented elements of huge stage carriers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Sequence

from .algebra import FuzzySubset, ResiduatedLattice
from .functors import Distribution, Functor, Selection, ValuationSet, push_delta
from .report import BudgetError, InputError, ValidationReport

__all__ = [
    "PredicateLifting",
    "LiftingRegistry",
    "LiftedModality",
    "PropModality",
    "standard_liftings",
    "apply_lifting",
    "expected_truth",
    "floor_to_chain",
    "check_naturality",
    "check_alpha_preservation",
]


@dataclass(frozen=True, eq=False)
class PredicateLifting:
    name: str
    arity: int
    functor: Functor
    lat: ResiduatedLattice
    formula: str
    fn: Callable  # (lat, functor, delta, args) -> carrier value

    def value_at(self, delta, args: Sequence[Callable]) -> int:
        return self.fn(self.lat, self.functor, delta, args)


class LiftedModality:
    """The stage-level reading of a lifting: acts on (valuation, delta) pairs
    and ignores the valuation component by construction."""

    def __init__(self, lifting: PredicateLifting):
        self.lifting = lifting

    def value_at_pair(self, pair, args) -> int:
        _nu, delta = pair[0], pair[1]
        return self.lifting.value_at(delta, args)


class PropModality:
    """The nullary modal reading of a proposition: value read off the
    valuation component of a (valuation, delta) pair."""

    def __init__(self, valuations: ValuationSet, prop: str):
        self.valuations = valuations
        self.index = valuations.props.index(prop)

    def value_at_pair(self, pair, args=()) -> int:
        return self.valuations.value(pair[0], self.index)


# -- evaluators -----------------------------------------------------------------


def _box_powerset(lat, F, delta, args):
    return lat.meet_many(args[0](e) for e in delta)


def _diamond_powerset(lat, F, delta, args):
    return lat.join_many(args[0](e) for e in delta)


def _box_fuzzyhom(lat, F, delta, args):
    # meet over the whole base of delta(y) -> f(y); absent points give top
    return lat.meet_many(int(lat.impl[v, args[0](e)]) for e, v in delta[1])


def _diamond_fuzzyhom(lat, F, delta, args):
    return lat.join_many(int(lat.mono[v, args[0](e)]) for e, v in delta[1])


def _box_neighborhood(lat, F, delta, args):
    _, base, mapping = delta
    code = 0
    for e in mapping:
        code = code * lat.size + args[0](e)
    return base[code]


def _cond_selection(lat, F: Selection, delta, args):
    # s(f) included in g, inclusion graded by meet of pointwise residua
    mapping = delta[3]
    row = F.row_at(delta, tuple(args[0](e) for e in mapping))
    return lat.meet_many(int(lat.impl[v, args[1](y)]) for y, v in row.items())


def expected_truth(lat: ResiduatedLattice, delta, argfn: Callable) -> Fraction:
    """Exact expected truth value of the argument under a grid distribution."""
    _, pairs, q = delta
    total = Fraction(0)
    for e, c in pairs:
        total += lat.values[argfn(e)] * Fraction(c, q)
    return total


def floor_to_chain(lat: ResiduatedLattice, fr: Fraction) -> int:
    """Largest carrier element whose value is <= fr."""
    best = lat.bot
    for i, v in enumerate(lat.values):
        if v <= fr and v >= lat.values[best]:
            best = i
    return best


def _prob_distribution(lat, F, delta, args):
    return floor_to_chain(lat, expected_truth(lat, delta, args[0]))


def _make_over(threshold: Fraction):
    def _over(lat, F, delta, args):
        _, pairs, q = delta
        out = lat.bot
        for alpha in range(lat.size):
            mass = Fraction(0)
            for e, c in pairs:
                if lat.leq(alpha, args[0](e)):
                    mass += Fraction(c, q)
            if mass > threshold:
                out = int(lat.join[out, alpha])
        return out

    return _over


def _require_chain_values(lat: ResiduatedLattice, what: str):
    if lat.values is None:
        raise InputError(f"{what} needs a rational embedding: algebra {lat.name} has no values table")
    if any(lat.values[i] >= lat.values[i + 1] for i in range(lat.size - 1)):
        raise InputError(f"{what} needs a chain with increasing values; {lat.name} is not")


# -- registry ---------------------------------------------------------------------


@dataclass
class LiftingRegistry:
    liftings: dict[str, PredicateLifting] = field(default_factory=dict)

    def add(self, lifting: PredicateLifting) -> None:
        if lifting.name in self.liftings:
            raise InputError(f"duplicate modality name {lifting.name!r}")
        self.liftings[lifting.name] = lifting

    def get(self, name: str) -> PredicateLifting:
        if name not in self.liftings:
            raise InputError(f"unknown modality {name!r}; have {sorted(self.liftings)}")
        return self.liftings[name]

    def arities(self) -> dict[str, int]:
        return {name: lf.arity for name, lf in self.liftings.items()}

    def rows(self) -> list[dict]:
        return [
            {"name": lf.name, "arity": lf.arity, "functor": lf.functor.name, "formula": lf.formula}
            for lf in self.liftings.values()
        ]


def standard_liftings(lat: ResiduatedLattice, functor: Functor,
                      threshold: Fraction = Fraction(1, 2)) -> LiftingRegistry:
    reg = LiftingRegistry()
    mk = lambda name, arity, formula, fn: reg.add(PredicateLifting(name, arity, functor, lat, formula, fn))
    if functor.name == "powerset":
        mk("box", 1, "box(f)(X) = meet of f(x) over x in X", _box_powerset)
        mk("diamond", 1, "diamond(f)(X) = join of f(x) over x in X", _diamond_powerset)
    elif functor.name == "fuzzyhom":
        mk("box", 1, "box(f)(g) = meet over x of g(x) -> f(x)", _box_fuzzyhom)
        mk("diamond", 1, "diamond(f)(g) = join over x of g(x) * f(x)", _diamond_fuzzyhom)
    elif functor.name == "neighborhood":
        mk("box", 1, "box(f)(N) = N(f)", _box_neighborhood)
    elif functor.name == "selection":
        mk("cond", 2, "cond(f,g)(s) = meet over x of s(f)(x) -> g(x)", _cond_selection)
    elif functor.name == "distribution":
        _require_chain_values(lat, "distribution modalities")
        mk("prob", 1, "prob(f)(mu) = sum of f(x)*mu(x), floored onto the chain", _prob_distribution)
        mk("over", 1, f"over(f)(mu) = join of alpha with mu(f_alpha) > {threshold}", _make_over(threshold))
    else:
        raise InputError(f"no standard liftings for functor {functor.name!r}")
    return reg


def apply_lifting(lifting: PredicateLifting, n: int, args: Sequence, budget: int = 10**6) -> FuzzySubset:
    """Tabulate the lifted predicate over all of T(S) for |S| = n."""
    if len(args) != lifting.arity:
        raise InputError(f"{lifting.name} takes {lifting.arity} argument(s), got {len(args)}")
    F = lifting.functor
    size = F.fits(n, budget)
    if size is None:
        raise BudgetError(f"T-carrier for {lifting.name} over a {n}-element set", F.size_text(n), budget)
    arg_fns = [tuple(int(v) for v in (a.values if isinstance(a, FuzzySubset) else a)).__getitem__ for a in args]
    return FuzzySubset(tuple(lifting.value_at(F.decode(n, x), arg_fns) for x in range(size)))


# -- mechanical checks ------------------------------------------------------------


def check_naturality(lifting: PredicateLifting, bound: int = 2, budget: int = 10**6) -> ValidationReport:
    """Exhaustively compare both naturality routes for every map between
    carriers of size <= bound and every tuple of codomain predicates.

    Size pairs whose T-carrier exceeds the budget are reported as skipped.
    """
    lat, F = lifting.lat, lifting.functor
    report = ValidationReport(subject=f"naturality: {lifting.name} over {F.name}/{lat.name}")
    for a in range(bound + 1):
        ta = F.fits(a, budget)
        if ta is None:
            report.skip(f"domains of size {a}: |T(S)|={F.size_text(a)} exceeds budget {budget}")
            continue
        deltas = [F.decode(a, x) for x in range(ta)]
        for b in range(bound + 1):
            for f in product(range(b), repeat=a):
                pushed = [push_delta(lat, d, lambda e: f[e]) for d in deltas]
                for hs in product(product(range(lat.size), repeat=b), repeat=lifting.arity):
                    through_args = [lifting.value_at(d, [(lambda e, h=h: h[f[e]]) for h in hs])
                                    for d in deltas]
                    through_map = [lifting.value_at(p, [(lambda e, h=h: h[e]) for h in hs])
                                   for p in pushed]
                    report.checked += ta
                    if through_args != through_map:
                        x = next(i for i in range(ta) if through_args[i] != through_map[i])
                        report.fail(
                            "naturality",
                            (a, b, f, hs, x),
                            f"lift-then-map {lat.label(through_map[x])} != "
                            f"map-args-then-lift {lat.label(through_args[x])} at element {x} of T({a})",
                        )
                        return report
    return report


def check_alpha_preservation(lifting: PredicateLifting, alpha: int, set_bound: int = 2,
                             family_bound: int = 2, g_family_bound: int | None = None,
                             include_empty_g: bool = False, budget: int = 10**6) -> ValidationReport:
    """Bounded certificate that the lifting maps alpha-cut-ordered families to
    alpha-cut-ordered families (unary liftings only).

    F ranges over families of size 0..family_bound (the empty intersection is
    the full domain); G starts at size 1 unless include_empty_g is set.
    """
    if lifting.arity != 1:
        raise InputError(f"alpha-preservation is defined for unary liftings; {lifting.name} is {lifting.arity}-ary")
    lat, F = lifting.lat, lifting.functor
    g_low = 0 if include_empty_g else 1
    g_high = family_bound if g_family_bound is None else g_family_bound
    report = ValidationReport(
        subject=f"alpha-preservation: {lifting.name} over {F.name}/{lat.name} at alpha={lat.label(alpha)}")

    for n in range(set_bound + 1):
        tn = F.fits(n, budget)
        if tn is None:
            report.skip(f"base size {n}: |T(S)|={F.size_text(n)} exceeds budget {budget}")
            continue
        subsets = list(product(range(lat.size), repeat=n))
        dom_full, lift_full = (1 << n) - 1, (1 << tn) - 1
        dom_cut, lift_cut = {}, {}
        for fv in subsets:
            dom_cut[fv] = sum(1 << i for i, v in enumerate(fv) if lat.leq(alpha, v))
            table = apply_lifting(lifting, n, [fv], budget)
            lift_cut[fv] = sum(1 << t for t, v in enumerate(table) if lat.leq(alpha, v))

        def inter(family):
            out = dom_full
            for fv in family:
                out &= dom_cut[fv]
            return out

        def inter_l(family):
            out = lift_full
            for fv in family:
                out &= lift_cut[fv]
            return out

        for fsize in range(family_bound + 1):
            for fam_f in combinations(subsets, fsize):
                fi, li = inter(fam_f), inter_l(fam_f)
                for gsize in range(g_low, g_high + 1):
                    for fam_g in combinations(subsets, gsize):
                        gu = gl = 0
                        for gv in fam_g:
                            gu |= dom_cut[gv]
                            gl |= lift_cut[gv]
                        report.checked += 1
                        if fi & ~gu == 0 and li & ~gl != 0:
                            report.fail(
                                "alpha-preservation",
                                (n, fam_f, fam_g),
                                f"input families are cut-ordered at {lat.label(alpha)} but lifted families are not",
                            )
                            return report
    return report
