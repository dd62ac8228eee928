"""Consecutions, stratified derivation checking, and soundness certification.

The base oracle decides propositional-surrogate consequence by brute force
over the finite algebra, which soundness and completeness of the underlying
propositional calculus make extensionally correct. Derivations are finite
trees whose nodes cite that oracle, a rank-1 modal axiom under substitution,
or a one-premise-set modal lifting step; the checker replays every node,
optionally enforcing the stratum discipline. Step-n soundness of an axiom set
is certified semantically by sweeping all assignments of stage-(n-1) truth
functions to the axiom's propositions.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

from .lifting import check_alpha_preservation
from .report import BudgetError, InputError, ValidationReport
from .semantics import StageTower, StepEvaluator
from .session import Session
from .syntax import Bin, Const, Formula, Modal, Prop, propositions_of, rank, substitute

__all__ = [
    "Consecution",
    "ModalAxiomSet",
    "load_axiom_set",
    "DerivationNode",
    "load_derivation",
    "decide_ax_a",
    "check_derivation",
    "check_step_n_soundness",
    "one_step_soundness_report",
]


@dataclass(frozen=True)
class Consecution:
    premises: tuple[Formula, ...]
    conclusion: Formula

    def formulas(self) -> tuple[Formula, ...]:
        return (*self.premises, self.conclusion)

    def pretty(self, session: Session) -> str:
        left = ", ".join(session.pretty(g) for g in self.premises)
        return f"{left} |- {session.pretty(self.conclusion)}"


@dataclass(frozen=True)
class ModalAxiomSet:
    """Named rank-1 consecutions acting as modal axiom schemes."""

    axioms: tuple[tuple[str, Consecution], ...]

    def __post_init__(self):
        names = [name for name, _ in self.axioms]
        if len(set(names)) != len(names):
            raise InputError("duplicate axiom names")
        for name, c in self.axioms:
            bad = [f for f in c.formulas() if rank(f) > 1]
            if bad:
                raise InputError(f"axiom {name!r} leaves the rank-1 fragment")

    def get(self, name: str) -> Consecution:
        for key, c in self.axioms:
            if key == name:
                return c
        raise InputError(f"unknown axiom {name!r}")


def load_axiom_set(session: Session, source) -> ModalAxiomSet:
    """JSON list of {"name", "premises": [formula], "conclusion": formula}."""
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            data = json.load(fh)
    else:
        data = source
    if not isinstance(data, list):
        raise InputError("axiom set must be a JSON list")
    axioms = []
    for i, entry in enumerate(data):
        try:
            name = str(entry["name"])
            premises = tuple(session.parse(t) for t in entry.get("premises", []))
            conclusion = session.parse(entry["conclusion"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"axiom #{i}: {exc}") from None
        axioms.append((name, Consecution(premises, conclusion)))
    return ModalAxiomSet(tuple(axioms))


# -- the propositional-surrogate oracle ----------------------------------------------


def _surrogates(formulas) -> list[Formula]:
    """Propositions and maximal modal subformulas, in first-occurrence order."""
    out: list[Formula] = []
    seen: set[Formula] = set()

    def walk(f: Formula) -> None:
        if isinstance(f, (Prop, Modal)):
            if f not in seen:
                seen.add(f)
                out.append(f)
        elif isinstance(f, Bin):
            walk(f.left)
            walk(f.right)

    for f in formulas:
        walk(f)
    return out


_BIN_TABLE = {"or": "join", "and": "meet", "fuse": "mono", "imp": "impl"}


def _surrogate_value(session: Session, f: Formula, env: dict[Formula, int]) -> int:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Bin):
        table = getattr(session.lat, _BIN_TABLE[f.op])
        return int(table[_surrogate_value(session, f.left, env),
                         _surrogate_value(session, f.right, env)])
    return env[f]


def decide_ax_a(session: Session, premises, conclusion: Formula) -> bool:
    """Brute-force consequence with modal subformulas frozen into variables."""
    premises = tuple(premises)
    for f in (*premises, conclusion):
        session.validate_formula(f)
    atoms = _surrogates((*premises, conclusion))
    size = session.lat.size
    if len(atoms) and size ** len(atoms) > session.budget:
        raise BudgetError("surrogate assignment space", f"{size}^{len(atoms)}", session.budget)
    top = session.lat.top
    for combo in itertools.product(range(size), repeat=len(atoms)):
        env = dict(zip(atoms, combo))
        if all(_surrogate_value(session, g, env) == top for g in premises):
            if _surrogate_value(session, conclusion, env) != top:
                return False
    return True


# -- derivation trees -----------------------------------------------------------------


@dataclass(frozen=True)
class DerivationNode:
    rule: str  # "axa" | "axlambda" | "modal"
    consecution: Consecution
    axiom: str | None = None
    substitution: tuple[tuple[str, Formula], ...] = ()
    lifting: str | None = None
    child: "DerivationNode | None" = None


def load_derivation(session: Session, source) -> DerivationNode:
    """Nested JSON nodes: every node carries premises/conclusion plus its rule
    fields (axlambda: axiom + substitution; modal: lifting + child)."""
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            data = json.load(fh)
    else:
        data = source

    def build(node, path: str) -> DerivationNode:
        if not isinstance(node, dict):
            raise InputError(f"{path}: derivation node must be a JSON object")
        rule = node.get("rule")
        if rule not in ("axa", "axlambda", "modal"):
            raise InputError(f"{path}: unknown rule {rule!r}")
        try:
            premises = tuple(session.parse(t) for t in node.get("premises", []))
            conclusion = session.parse(node["conclusion"])
        except KeyError:
            raise InputError(f"{path}: node needs a conclusion") from None
        cons = Consecution(premises, conclusion)
        if rule == "axa":
            return DerivationNode("axa", cons)
        if rule == "axlambda":
            subst = tuple(sorted(
                (str(p), session.parse(t)) for p, t in node.get("substitution", {}).items()
            ))
            if "axiom" not in node:
                raise InputError(f"{path}: axlambda node needs an axiom name")
            return DerivationNode("axlambda", cons, axiom=str(node["axiom"]), substitution=subst)
        if "lifting" not in node or "child" not in node:
            raise InputError(f"{path}: modal node needs lifting and child")
        return DerivationNode("modal", cons, lifting=str(node["lifting"]),
                              child=build(node["child"], path + ".child"))

    return build(data, "root")


def check_derivation(session: Session, tree: DerivationNode,
                     axioms: ModalAxiomSet | None = None,
                     n: int | None = None) -> ValidationReport:
    """Replay a derivation tree; with n given, enforce the stratum discipline
    (stratum 0 admits only base-oracle nodes, substitutions at stratum n are
    (n-1)-substitutions, lifting steps descend one stratum)."""
    report = ValidationReport(subject="derivation" if n is None else f"derivation at stratum {n}")

    def visit(node: DerivationNode, path: str, stratum: int | None) -> None:
        report.checked += 1
        cons = node.consecution
        if stratum is not None:
            if stratum < 0:
                report.fail("stratum", path, "lifting step descends below stratum 0")
                return
            deep = [f for f in cons.formulas() if rank(f) > stratum]
            if deep:
                report.fail("stratum", path,
                            f"formula {session.pretty(deep[0])} has rank {rank(deep[0])} > {stratum}")
        if node.rule == "axa":
            if not decide_ax_a(session, cons.premises, cons.conclusion):
                report.fail("base-oracle", path,
                            f"not a surrogate-level consequence: {cons.pretty(session)}")
            return
        if stratum == 0:
            report.fail("stratum", path, f"rule {node.rule!r} is not available at stratum 0")
            return
        if node.rule == "axlambda":
            if axioms is None:
                report.fail("axiom-citation", path, "no axiom set supplied")
                return
            try:
                scheme = axioms.get(node.axiom)
            except InputError as exc:
                report.fail("axiom-citation", path, str(exc))
                return
            used = propositions_of(scheme.conclusion)
            for g in scheme.premises:
                used |= propositions_of(g)
            rho = {p: f for p, f in node.substitution if p in used}
            if stratum is not None:
                limit = stratum - 1
                deep = [(p, f) for p, f in sorted(rho.items(), key=lambda kv: kv[0])
                        if rank(f) > limit]
                if deep:
                    p, f = deep[0]
                    report.fail("substitution-rank", path,
                                f"image of {p} has rank {rank(f)} > {limit}")
            want = Consecution(tuple(substitute(g, rho) for g in scheme.premises),
                               substitute(scheme.conclusion, rho))
            if frozenset(want.premises) != frozenset(cons.premises) \
                    or want.conclusion != cons.conclusion:
                report.fail("instance-shape", path,
                            f"conclusion is not the {node.axiom!r} instance "
                            f"{want.pretty(session)}")
            return
        # modal lifting step
        try:
            lf = session.registry.get(node.lifting)
        except InputError as exc:
            report.fail("lifting-citation", path, str(exc))
            return
        if lf.arity != 1:
            report.fail("lifting-arity", path,
                        f"lifting step needs a unary lifting, {node.lifting!r} has arity {lf.arity}")
            return
        child = node.child
        want_prem = frozenset(Modal(node.lifting, (g,)) for g in child.consecution.premises)
        want_conc = Modal(node.lifting, (child.consecution.conclusion,))
        if frozenset(cons.premises) != want_prem or cons.conclusion != want_conc:
            report.fail("rule-shape", path,
                        "conclusion is not the lifted image of the child consecution")
        visit(child, path + ".child", None if stratum is None else stratum - 1)

    visit(tree, "root", n)
    return report


# -- step-n soundness --------------------------------------------------------------------


def _prop_occurrence_levels(phi: Formula, at: int) -> dict[str, set[int]]:
    """Stage levels at which each proposition is consulted when phi sits at `at`."""
    out: dict[str, set[int]] = {}

    def walk(f: Formula, k: int) -> None:
        if isinstance(f, Prop):
            out.setdefault(f.name, set()).add(k)
        elif isinstance(f, Bin):
            walk(f.left, k)
            walk(f.right, k)
        elif isinstance(f, Modal):
            for a in f.args:
                walk(a, k - 1)

    walk(phi, at)
    return out


def _catalog(session: Session, level: int, tower: StageTower, cap: int) -> dict | None:
    """All truth functions on stage `level` denotable by formulas, as a map
    table -> formula; None when the table space exceeds the cap. The closure
    saturates, so absence from the catalog is absence of a realizer."""
    size = tower.size(level)
    if session.lat.size ** size > cap:
        return None
    ev = StepEvaluator(session)
    elems = [tower.decode_full(level, t) for t in range(size)]

    def table_of(phi: Formula) -> tuple[int, ...]:
        return tuple(ev.value(phi, level, e) for e in elems)

    catalog: dict[tuple[int, ...], Formula] = {}

    def add(phi: Formula) -> None:
        tab = table_of(phi)
        if tab not in catalog:
            catalog[tab] = phi

    for i in range(session.lat.size):
        add(Const(i))
    for p in session.propositions:
        add(Prop(p))
    if level >= 1:
        below = _catalog(session, level - 1, tower, cap)
        if below is None:
            return None
        for name, arity in session.registry.arities().items():
            for combo in itertools.product(below.values(), repeat=arity):
                add(Modal(name, tuple(combo)))
    while True:
        snapshot = list(catalog.values())
        before = len(catalog)
        for fa in snapshot:
            for fb in snapshot:
                for op in _BIN_TABLE:
                    add(Bin(op, fa, fb))
        if len(catalog) == before:
            return catalog


def check_step_n_soundness(session: Session, axioms: ModalAxiomSet, n: int,
                           tower: StageTower | None = None,
                           realize_cap: int = 4096) -> ValidationReport:
    """Sweep every assignment of stage-(n-1) truth functions to each axiom's
    propositions and check the stage-n consequence. Passing certifies step-n
    soundness, since semantic assignments subsume denotations of syntactic
    substitutions; a failing assignment is reported as refuted when every
    assigned truth function is realized by an actual formula, and as
    inconclusive otherwise.
    """
    if n < 1:
        raise InputError("step-n soundness needs n >= 1")
    tower = tower or StageTower(session)
    report = ValidationReport(subject=f"step-{n} soundness")
    prev_size = tower.size(n - 1)
    stage_size = tower.size(n)
    gamma = None
    catalog: dict | None | bool = False  # False = not yet computed
    top = session.lat.top

    for name, cons in axioms.axioms:
        levels: dict[str, set[int]] = {}
        for f in cons.formulas():
            for p, ks in _prop_occurrence_levels(f, n).items():
                levels.setdefault(p, set()).update(ks)
        props = sorted(levels)
        if any(k not in (n - 1, n) for ks in levels.values() for k in ks):
            raise InputError(f"axiom {name!r} leaves the rank-1 fragment")
        if any(n in ks for ks in levels.values()) and gamma is None:
            gamma = tower.gamma_table(n - 1)
        space = (session.lat.size ** prev_size) ** len(props)
        if space * stage_size > session.budget:
            raise BudgetError(f"assignment sweep for axiom {name!r}",
                              f"({session.lat.size}^{prev_size})^{len(props)}*{stage_size}",
                              session.budget)
        tables = list(itertools.product(range(session.lat.size), repeat=prev_size))
        for combo in itertools.product(tables, repeat=len(props)):
            assigned = dict(zip(props, combo))

            def prop_sem(pname: str, k: int, elem) -> int | None:
                if pname not in assigned:
                    return None
                t = tower.encode_full(k, elem)
                if k == n:
                    t = gamma[t]
                return assigned[pname][t]

            ev = StepEvaluator(session, prop_semantics=prop_sem)
            for t in range(stage_size):
                elem = tower.decode_full(n, t)
                if all(ev.value(g, n, elem) == top for g in cons.premises) \
                        and ev.value(cons.conclusion, n, elem) != top:
                    if catalog is False:
                        catalog = _catalog(session, n - 1, tower, realize_cap)
                    if catalog is None:
                        status = "inconclusive (realization search skipped: table space over cap)"
                        realizers = {}
                    else:
                        realizers = {p: catalog.get(tab) for p, tab in assigned.items()}
                        if all(f is not None for f in realizers.values()):
                            status = "refuted"
                        else:
                            status = "inconclusive (counterexample assignment is not formula-denotable)"
                    shown = {p: (session.pretty(f) if f is not None
                                 else "/".join(session.lat.label(v) for v in assigned[p]))
                             for p, f in realizers.items()} if catalog else \
                            {p: "/".join(session.lat.label(v) for v in tab)
                             for p, tab in assigned.items()}
                    report.fail(
                        "step-n-consequence",
                        (name, tuple(sorted(shown.items())), t),
                        f"{status}; axiom {name!r} fails at {tower.describe(n, t)}"
                        + (f" under {shown}" if shown else ""),
                    )
                    break
            else:
                report.checked += 1
                continue
            break  # first failing assignment per axiom is enough
    if report.ok:
        report.notes.append(
            f"all stage-{n - 1} truth-function assignments checked; semantic assignments "
            f"subsume syntactic substitutions, so the axiom set is step-{n} sound"
        )
    return report


def one_step_soundness_report(session: Session, axioms: ModalAxiomSet,
                              liftings_used, n: int,
                              tower: StageTower | None = None,
                              set_bound: int = 2, family_bound: int = 2) -> ValidationReport:
    """Premise check for transferring soundness up one stage: the axiom set is
    step-n sound and every used lifting preserves the top cut on singleton
    right-hand families."""
    report = ValidationReport(subject=f"one-step soundness premises at n={n}")
    report.merge(check_step_n_soundness(session, axioms, n, tower))
    for name in liftings_used:
        lf = session.registry.get(name)
        sub = check_alpha_preservation(lf, session.lat.top, set_bound=set_bound,
                                       family_bound=family_bound, g_family_bound=1,
                                       budget=session.budget)
        report.merge(sub)
    if report.ok:
        report.notes.append(
            "step-n soundness plus top-cut preservation of the used liftings "
            "transfers soundness from stage n-1 to stage n at the checked bounds"
        )
    return report
