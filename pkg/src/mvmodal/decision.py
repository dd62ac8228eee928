"""Validity, satisfiability, and finite consequence by stage exhaustion.

Rank-n formulas are decided on stage n of the terminal sequence: validity and
consequence sweep the whole carrier, and satisfiability additionally realizes
its witness inside the canonical model living on that carrier, so every "yes"
comes with a concrete finite model.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .functors import push_delta
from .report import InputError
from .semantics import StageTower, StepEvaluator, TModel, eval_model
from .session import Session
from .syntax import Formula, rank, subformulas

__all__ = ["Verdict", "validity", "consequence", "satisfiable", "lemma2_model"]


@dataclass
class Verdict:
    """Decision outcome; the witness decodes the refuting/satisfying element."""

    answer: bool
    mode: str
    stage: int
    witness: dict | None = None
    budget_note: str | None = None

    def to_dict(self) -> dict:
        return {
            "answer": self.answer,
            "mode": self.mode,
            "stage": self.stage,
            "witness": self.witness,
            "budget_note": self.budget_note,
        }


def _witness(session: Session, tower: StageTower, ev: StepEvaluator, n: int, t: int,
             formulas: Sequence[Formula]) -> dict:
    elem = tower.decode_full(n, t)
    values: dict[str, str] = {}
    for f in formulas:
        for sub in subformulas(f):
            values[session.pretty(sub)] = session.lat.label(ev.value(sub, n, elem))
    return {
        "stage": n,
        "element": t,
        "description": tower.describe(n, t),
        "values": dict(sorted(values.items())),
    }


def _resolve_stage(formulas: Sequence[Formula], n: int | None) -> int:
    need = max((rank(f) for f in formulas), default=0)
    if n is None:
        return need
    if n < need:
        raise InputError(f"stage {n} is below the required rank {need}")
    return n


def validity(session: Session, phi: Formula, n: int | None = None,
             tower: StageTower | None = None) -> Verdict:
    """Top everywhere on stage rank(phi)."""
    session.validate_formula(phi)
    n = _resolve_stage([phi], n)
    tower = tower or StageTower(session)
    ev = StepEvaluator(session)
    top = session.lat.top
    for t in range(tower.size(n)):
        if ev.value(phi, n, tower.decode_full(n, t)) != top:
            return Verdict(False, "valid", n, _witness(session, tower, ev, n, t, [phi]))
    return Verdict(True, "valid", n)


def consequence(session: Session, premises: Sequence[Formula], phi: Formula,
                n: int | None = None, tower: StageTower | None = None) -> Verdict:
    """Every stage element making all premises top makes the conclusion top."""
    premises = list(premises)
    for f in (*premises, phi):
        session.validate_formula(f)
    n = _resolve_stage([*premises, phi], n)
    tower = tower or StageTower(session)
    ev = StepEvaluator(session)
    top = session.lat.top
    for t in range(tower.size(n)):
        elem = tower.decode_full(n, t)
        if all(ev.value(g, n, elem) == top for g in premises) and ev.value(phi, n, elem) != top:
            return Verdict(False, "consequence", n,
                           _witness(session, tower, ev, n, t, [*premises, phi]))
    return Verdict(True, "consequence", n)


def lemma2_model(session: Session, n: int, tower: StageTower | None = None) -> TModel:
    """The canonical model on stage n: valuation reads the first component,
    transitions are the section into stage n+1 with leaves renamed to state ids.

    Function-table transitions keep their stage-level index domain, so these
    models evaluate fine but do not serialize through model_to_dict.
    """
    tower = tower or StageTower(session)
    size = tower.size(n)
    valuation = tuple(session.valuations.decode(tower.decode1(n, t)[0]) for t in range(size))
    if n == 0:
        form0 = session.functor.decode(size, tower.iota0_id())
        sigma = tuple(form0 for _ in range(size))
    else:
        up = tower.iota_table(n - 1)
        sigma = tuple(
            push_delta(session.lat, tower.decode1(n, t)[1], up.__getitem__)
            for t in range(size)
        )
    return TModel(valuation, sigma)


def satisfiable(session: Session, phi: Formula, n: int | None = None,
                tower: StageTower | None = None) -> Verdict:
    """Some element of stage rank(phi) gives top; the witness is a state of the
    canonical model, cross-checked through the model evaluator."""
    session.validate_formula(phi)
    if not session.functor.finite:
        raise InputError(f"functor {session.functor.name!r} is not finite; no finite-model decision")
    n = _resolve_stage([phi], n)
    tower = tower or StageTower(session)
    ev = StepEvaluator(session)
    top = session.lat.top
    for t in range(tower.size(n)):
        if ev.value(phi, n, tower.decode_full(n, t)) == top:
            model = lemma2_model(session, n, tower)
            model_val = eval_model(session, model, phi)[t]
            if model_val != top:
                raise RuntimeError(
                    f"internal coherence failure: stage witness {t} evaluates to "
                    f"{session.lat.label(model_val)} on the canonical model"
                )
            return Verdict(True, "satisfiable", n, _witness(session, tower, ev, n, t, [phi]))
    return Verdict(False, "satisfiable", n)
