"""Coalgebraic models, the terminal sequence, and the two evaluators.

The model evaluator recurses over formula structure with the coalgebra map
supplying successors. The step evaluator computes stage semantics on decoded
stage elements; it is lazy, so stage-n values at the image of a model's
approximation maps are computable even when the stage carrier itself is far
beyond any enumeration budget. Their pointwise agreement along the
approximation tower is the content of the truth-lemma checker.
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .algebra import FuzzySubset
from .functors import FiniteSet, push_delta
from .lifting import LiftedModality
from .report import BudgetError, InputError, ValidationReport
from .session import Session
from .syntax import Bin, Const, Formula, Modal, Prop, rank

__all__ = [
    "TModel",
    "load_model",
    "model_to_dict",
    "eval_model",
    "model_consequence",
    "StageTower",
    "Stage",
    "terminal_stage",
    "StepEvaluator",
    "eval_step",
    "step_consequence",
    "sigma_states",
    "sigma_k",
    "check_truth_lemma",
    "check_lemma1",
    "check_stage_coherence",
]


# -- models ----------------------------------------------------------------------


@dataclass(eq=False)
class TModel:
    """Finite coalgebra with a valuation; sigma holds canonical delta forms
    whose base elements are state ids."""

    valuation: tuple[tuple[int, ...], ...]
    sigma: tuple

    @property
    def n_states(self) -> int:
        return len(self.valuation)

    def nu(self, session: Session, s: int) -> int:
        return session.valuations.encode(self.valuation[s])


def _sigma_from_json(session: Session, n: int, entry, state: int):
    lat, F = session.lat, session.functor
    name = F.name
    try:
        if name == "powerset":
            ids = [int(x) for x in entry]
            if any(not 0 <= x < n for x in ids):
                raise InputError(f"sigma[{state}]: state id outside 0..{n - 1}")
            return frozenset(ids)
        if name == "fuzzyhom":
            vals = [int(v) for v in entry]
            if len(vals) != n:
                raise InputError(f"sigma[{state}]: expected {n} values")
            return ("fz", tuple((i, v) for i, v in enumerate(vals) if v != lat.bot))
        if name == "neighborhood":
            vals = [int(v) for v in entry]
            if len(vals) != lat.size**n:
                raise InputError(f"sigma[{state}]: expected {lat.size**n} table entries")
            return ("nb", tuple(vals), tuple(range(n)))
        if name == "selection":
            h = lat.size**n
            vals = [int(v) for v in entry]
            if len(vals) != h or any(not 0 <= v < h for v in vals):
                raise InputError(f"sigma[{state}]: expected {h} function ids below {h}")
            return ("sel", tuple(vals), n, tuple(range(n)))
        if name == "distribution":
            counts = [int(c) for c in entry]
            if len(counts) != n or sum(counts) != F.q or any(c < 0 for c in counts):
                raise InputError(f"sigma[{state}]: expected {n} nonnegative counts summing to {F.q}")
            return ("ds", tuple((i, c) for i, c in enumerate(counts) if c), F.q)
    except (TypeError, ValueError) as exc:
        raise InputError(f"sigma[{state}]: {exc}") from None
    raise InputError(f"no model format for functor {name!r}")


def _values_in_range(session: Session, vals, what: str) -> tuple[int, ...]:
    out = tuple(int(v) for v in vals)
    if any(not 0 <= v < session.lat.size for v in out):
        raise InputError(f"{what}: carrier index outside 0..{session.lat.size - 1}")
    return out


def load_model(session: Session, source) -> TModel:
    """states/valuation/sigma JSON layout; sigma entries are functor-shaped
    (state-id lists, value rows, tables over Hom(S,A) ids, count vectors)."""
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            data = json.load(fh)
    else:
        data = source
    try:
        n = int(data["states"])
        valuation_rows = data["valuation"]
        sigma_rows = data["sigma"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"model file needs states/valuation/sigma: {exc}") from None
    if n < 1:
        raise InputError("model needs at least one state")
    if len(valuation_rows) != n or len(sigma_rows) != n:
        raise InputError("valuation/sigma length != states")
    valuation = []
    for s, row in enumerate(valuation_rows):
        if len(row) != len(session.propositions):
            raise InputError(f"valuation[{s}] must list {len(session.propositions)} values")
        valuation.append(_values_in_range(session, row, f"valuation[{s}]"))
    sigma = tuple(_sigma_from_json(session, n, entry, s) for s, entry in enumerate(sigma_rows))
    return TModel(tuple(valuation), sigma)


def model_to_dict(session: Session, model: TModel) -> dict:
    F = session.functor
    n = model.n_states
    rows = []
    for delta in model.sigma:
        if F.name == "powerset":
            rows.append(sorted(delta))
        elif F.name == "fuzzyhom":
            vals = [session.lat.bot] * n
            for e, v in delta[1]:
                vals[e] = v
            rows.append(vals)
        elif F.name in ("neighborhood", "selection"):
            mapping = delta[2] if F.name == "neighborhood" else delta[3]
            if tuple(mapping) != tuple(range(n)):
                raise InputError("transition tables are indexed off the state set; "
                                 "this model evaluates but does not serialize")
            rows.append(list(delta[1]))
        else:
            counts = [0] * n
            for e, c in delta[1]:
                counts[e] = c
            rows.append(counts)
    return {
        "states": n,
        "valuation": [list(r) for r in model.valuation],
        "sigma": rows,
    }


_BIN_TABLE = {"or": "join", "and": "meet", "fuse": "mono", "imp": "impl"}


def eval_model(session: Session, model: TModel, phi: Formula) -> FuzzySubset:
    """Structural-recursion semantics on a concrete model."""
    session.validate_formula(phi)
    lat = session.lat
    n = model.n_states
    nus = [model.nu(session, s) for s in range(n)]
    pidx = {p: i for i, p in enumerate(session.propositions)}
    memo: dict[Formula, tuple[int, ...]] = {}

    def go(f: Formula) -> tuple[int, ...]:
        if f in memo:
            return memo[f]
        if isinstance(f, Const):
            vals = (f.value,) * n
        elif isinstance(f, Prop):
            i = pidx[f.name]
            vals = tuple(model.valuation[s][i] for s in range(n))
        elif isinstance(f, Bin):
            table = getattr(lat, _BIN_TABLE[f.op])
            left, right = go(f.left), go(f.right)
            vals = tuple(int(table[a, b]) for a, b in zip(left, right))
        else:
            lifted = LiftedModality(session.registry.get(f.name))
            arg_fns = [go(a).__getitem__ for a in f.args]
            vals = tuple(lifted.value_at_pair((nus[s], model.sigma[s]), arg_fns) for s in range(n))
        memo[f] = vals
        return vals

    return FuzzySubset(go(phi))


def model_consequence(session: Session, model: TModel, premises: Sequence[Formula],
                      phi: Formula) -> tuple[bool, int | None]:
    """Local consequence on one model; returns the first refuting state if any."""
    top = session.lat.top
    prem_vals = [eval_model(session, model, g) for g in premises]
    concl = eval_model(session, model, phi)
    for s in range(model.n_states):
        if all(v[s] == top for v in prem_vals) and concl[s] != top:
            return False, s
    return True, None


# -- the terminal sequence ---------------------------------------------------------


class StageTower:
    """Enumerated stage carriers with the section/projection tables.

    Stage 0 is the valuation set; stage k+1 pairs a valuation with a T-image
    of stage k (valuation-major ids). Tables are cached on disk per session
    fingerprint when a cache directory is configured.
    """

    # encode() for table-valued functors walks Hom(stage, A); refuse beyond this
    ENC_CAP = 1 << 16

    def __init__(self, session: Session):
        self.s = session
        self._sizes: list[int] = [session.valuations.size]
        self._decode_full: dict[tuple[int, int], tuple] = {}
        self._encode_full: dict[tuple[int, object], int] = {}
        self._iota: dict[int, list[int]] = {}
        self._gamma: dict[int, list[int]] = {}
        self._describe: dict[tuple[int, int], str] = {}

    # sizes -----------------------------------------------------------------

    def size(self, k: int) -> int:
        while len(self._sizes) <= k:
            m = len(self._sizes) - 1
            t = self.s.functor.fits(self._sizes[m], self.s.budget)
            if t is None or t * self.s.valuations.size > self.s.budget:
                text = f"{self.s.valuations.size}*{self.s.functor.size_text(self._sizes[m])}"
                raise BudgetError(f"stage {m + 1} carrier", text, self.s.budget)
            self._sizes.append(self.s.valuations.size * t)
        return self._sizes[k]

    def tsize(self, k: int) -> int:
        """|T(stage k)| (stage k+1 ids are nu * tsize(k) + delta)."""
        return self.size(k + 1) // self.s.valuations.size

    # codecs ------------------------------------------------------------------

    def decode1(self, k: int, t: int) -> tuple:
        """One-level decode: delta form over stage-(k-1) ids."""
        if k == 0:
            return (t, None)
        nu, d = divmod(t, self.tsize(k - 1))
        return (nu, self.s.functor.decode(self.size(k - 1), d))

    def decode_full(self, k: int, t: int) -> tuple:
        """Recursive decode: delta leaves are decoded lower-stage elements."""
        key = (k, t)
        if key not in self._decode_full:
            if k == 0:
                self._decode_full[key] = (t, None)
            else:
                nu, form = self.decode1(k, t)
                self._decode_full[key] = (nu, push_delta(self.s.lat, form, lambda e: self.decode_full(k - 1, e)))
        return self._decode_full[key]

    def _guard_encode(self, k: int) -> None:
        if self.s.functor.name in ("neighborhood", "selection"):
            h = self.s.lat.size ** self.size(k)
            if h > self.ENC_CAP:
                raise BudgetError(f"encoding into T(stage {k}) (function table domain)",
                                  f"{self.s.lat.size}^{self.size(k)}", self.ENC_CAP)

    def encode_full(self, k: int, elem: tuple) -> int:
        key = (k, elem)
        if key not in self._encode_full:
            if k == 0:
                self._encode_full[key] = elem[0]
            else:
                self._guard_encode(k - 1)
                nu, form = elem
                ids = push_delta(self.s.lat, form, lambda e: self.encode_full(k - 1, e))
                self._encode_full[key] = nu * self.tsize(k - 1) + self.s.functor.encode(self.size(k - 1), ids)
        return self._encode_full[key]

    def describe(self, k: int, t: int) -> str:
        key = (k, t)
        if key not in self._describe:
            nu, form = self.decode1(k, t)
            head = self.s.valuations.describe(nu, self.s.lat)
            if k == 0:
                self._describe[key] = f"<{head}>"
            else:
                body = self.s.functor.describe(form, lambda e: self.describe(k - 1, e))
                self._describe[key] = f"<{head}; {body}>"
        return self._describe[key]

    # cache -------------------------------------------------------------------

    def _cache_path(self, name: str) -> Path | None:
        if self.s.cache_dir is None:
            return None
        return Path(self.s.cache_dir) / f"{self.s.fingerprint()}-{name}.json"

    def _cache_get(self, name: str):
        path = self._cache_path(name)
        if path is None or not path.exists():
            return None
        try:
            with open(path) as fh:
                return json.load(fh)
        except (OSError, ValueError):
            return None

    def _cache_put(self, name: str, obj) -> None:
        path = self._cache_path(name)
        if path is None:
            return
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(obj, fh)
            os.replace(tmp, path)
        except OSError:
            pass

    # section / projection tables ----------------------------------------------

    def iota0_id(self) -> int:
        base = self.s.functor.encode(self.size(0), self.s.functor.base_elem(self.size(0)))
        if self.s.iota0 is None:
            return base
        if not 0 <= self.s.iota0 < self.tsize(0):
            raise InputError(f"iota0 override {self.s.iota0} outside T(stage 0)")
        return self.s.iota0

    def iota_table(self, k: int) -> list[int]:
        """Section stage k -> stage k+1 as ids (codomain ids may be bigints)."""
        if k not in self._iota:
            cached = self._cache_get(f"iota{k}")
            if cached is not None and len(cached) == self.size(k):
                self._iota[k] = [int(v) for v in cached]
                return self._iota[k]
            if k == 0:
                t0 = self.tsize(0)
                base = self.iota0_id()
                self._iota[k] = [nu * t0 + base for nu in range(self.size(0))]
            else:
                self._guard_encode(k)
                prev = self.iota_table(k - 1)
                out = []
                for t in range(self.size(k)):
                    nu, form = self.decode1(k, t)
                    pushed = push_delta(self.s.lat, form, prev.__getitem__)
                    out.append(nu * self.s.functor.size(self.size(k)) + self.s.functor.encode(self.size(k), pushed))
                self._iota[k] = out
            self._cache_put(f"iota{k}", self._iota[k])
        return self._iota[k]

    def gamma_table(self, k: int) -> list[int]:
        """Projection stage k+1 -> stage k as ids (stage k+1 must be in budget)."""
        if k not in self._gamma:
            cached = self._cache_get(f"gamma{k}")
            if cached is not None and len(cached) == self.size(k + 1):
                self._gamma[k] = [int(v) for v in cached]
                return self._gamma[k]
            if k == 0:
                self._gamma[k] = [u // self.tsize(0) for u in range(self.size(1))]
            else:
                self._guard_encode(k - 1)
                prev = self.gamma_table(k - 1)
                out = []
                for u in range(self.size(k + 1)):
                    nu, form = self.decode1(k + 1, u)
                    pushed = push_delta(self.s.lat, form, prev.__getitem__)
                    out.append(nu * self.tsize(k - 1) + self.s.functor.encode(self.size(k - 1), pushed))
                self._gamma[k] = out
            self._cache_put(f"gamma{k}", self._gamma[k])
        return self._gamma[k]

    # decoded-level maps (no enumeration of the codomain stage) -----------------

    def bang(self, elem: tuple) -> tuple:
        return (elem[0], None)

    def iota_dec(self, k: int) -> Callable[[tuple], tuple]:
        if k == 0:
            base = self.s.functor.decode(self.size(0), self.iota0_id())
            base_dec = push_delta(self.s.lat, base, lambda e: (e, None))
            return lambda elem: (elem[0], base_dec)
        inner = self.iota_dec(k - 1)
        return lambda elem: (elem[0], push_delta(self.s.lat, elem[1], inner))

    def gamma_dec(self, k: int) -> Callable[[tuple], tuple]:
        if k == 0:
            return self.bang
        inner = self.gamma_dec(k - 1)
        return lambda elem: (elem[0], push_delta(self.s.lat, elem[1], inner))


@dataclass(eq=False)
class Stage:
    level: int
    carrier: FiniteSet
    tower: StageTower


def terminal_stage(session: Session, n: int, tower: StageTower | None = None) -> Stage:
    tower = tower or StageTower(session)
    size = tower.size(n)
    return Stage(n, FiniteSet(size, lambda t: tower.describe(n, t)), tower)


# -- step semantics ------------------------------------------------------------------


class StepEvaluator:
    """Stage-indexed semantics on decoded stage elements, evaluated lazily.

    prop_semantics optionally overrides proposition values (used by the
    soundness checker to substitute arbitrary stage truth functions); it is
    called as prop_semantics(name, level, elem) and may return None to fall
    back to the valuation component.
    """

    def __init__(self, session: Session, prop_semantics: Callable | None = None):
        self.s = session
        self.prop_semantics = prop_semantics
        self._pidx = {p: i for i, p in enumerate(session.propositions)}
        self._memo: dict = {}

    def value(self, phi: Formula, k: int, elem: tuple) -> int:
        key = (phi, k, elem)
        if key in self._memo:
            return self._memo[key]
        lat = self.s.lat
        if isinstance(phi, Const):
            out = phi.value
        elif isinstance(phi, Prop):
            out = None
            if self.prop_semantics is not None:
                out = self.prop_semantics(phi.name, k, elem)
            if out is None:
                out = self.s.valuations.value(elem[0], self._pidx[phi.name])
        elif isinstance(phi, Bin):
            table = getattr(lat, _BIN_TABLE[phi.op])
            out = int(table[self.value(phi.left, k, elem), self.value(phi.right, k, elem)])
        else:
            if k == 0:
                raise InputError("modal formula needs stage >= 1 (rank exceeds stage 0)")
            lifted = LiftedModality(self.s.registry.get(phi.name))
            args = [lambda e, a=a: self.value(a, k - 1, e) for a in phi.args]
            out = lifted.value_at_pair(elem, args)
        self._memo[key] = out
        return out


def eval_step(session: Session, phi: Formula, n: int, tower: StageTower | None = None,
              evaluator: StepEvaluator | None = None) -> FuzzySubset:
    """Tabulate stage-n semantics over the whole stage carrier."""
    session.validate_formula(phi)
    if rank(phi) > n:
        raise InputError(f"formula has rank {rank(phi)} > stage {n}")
    tower = tower or StageTower(session)
    ev = evaluator or StepEvaluator(session)
    size = tower.size(n)
    return FuzzySubset(tuple(ev.value(phi, n, tower.decode_full(n, t)) for t in range(size)))


def step_consequence(session: Session, premises: Sequence[Formula], phi: Formula,
                     n: int, tower: StageTower | None = None) -> tuple[bool, int | None]:
    """Stage-n consequence; returns the first refuting stage element id."""
    for f in (*premises, phi):
        session.validate_formula(f)
        if rank(f) > n:
            raise InputError(f"formula has rank {rank(f)} > stage {n}")
    tower = tower or StageTower(session)
    ev = StepEvaluator(session)
    top = session.lat.top
    for t in range(tower.size(n)):
        elem = tower.decode_full(n, t)
        if all(ev.value(g, n, elem) == top for g in premises) and ev.value(phi, n, elem) != top:
            return False, t
    return True, None


# -- approximation maps out of a model -------------------------------------------------


def sigma_states(session: Session, model: TModel, k: int) -> list[tuple]:
    """Decoded stage-k images of the model states under the approximation tower."""
    out = [(model.nu(session, s), None) for s in range(model.n_states)]
    for _ in range(k):
        prev = out
        out = [(model.nu(session, s), push_delta(session.lat, model.sigma[s], lambda e: prev[e]))
               for s in range(model.n_states)]
    return out


def sigma_k(session: Session, model: TModel, k: int, tower: StageTower | None = None) -> list[int]:
    """Stage-k approximation map as ids (stage k must be encodable)."""
    tower = tower or StageTower(session)
    return [tower.encode_full(k, e) for e in sigma_states(session, model, k)]


# -- meta-theoretic checkers -----------------------------------------------------------


def check_truth_lemma(session: Session, model: TModel, phi: Formula) -> ValidationReport:
    """Model semantics == stage-rank semantics composed with the approximation map,
    state by state, exactly."""
    session.validate_formula(phi)
    n = rank(phi)
    report = ValidationReport(subject=f"truth lemma at rank {n}")
    model_vals = eval_model(session, model, phi)
    ev = StepEvaluator(session)
    images = sigma_states(session, model, n)
    for s in range(model.n_states):
        step_val = ev.value(phi, n, images[s])
        report.checked += 1
        if step_val != model_vals[s]:
            report.fail(
                "truth-lemma",
                (s,),
                f"model value {session.lat.label(model_vals[s])} != stage value {session.lat.label(step_val)}",
            )
    return report


def check_lemma1(session: Session, n: int, tower: StageTower | None = None) -> ValidationReport:
    """Inductive tower sections agree with their closed form, the top section is
    the identity, and the projection retracts the section. Exact, all elements."""
    tower = tower or StageTower(session)
    report = ValidationReport(subject=f"tower sections at n={n}")
    size_n = tower.size(n)
    iota_n = tower.iota_dec(n)
    gamma_n = tower.gamma_dec(n)

    def pair_push(f: Callable) -> Callable:
        return lambda elem: (elem[0], push_delta(session.lat, elem[1], f))

    # inductive family: level-k composite out of stage n
    inductive: list[Callable] = [tower.bang]
    for k in range(1, n + 1):
        inner = inductive[k - 1]
        inductive.append(lambda elem, inner=inner: pair_push(inner)(iota_n(elem)))

    # closed form: k-fold functor image of the terminal map from stage n-k
    closed: list[Callable] = []
    for k in range(n + 1):
        f: Callable = tower.bang
        for _ in range(k):
            f = pair_push(f)
        closed.append(f)

    for t in range(size_n):
        elem = tower.decode_full(n, t)
        for k in range(n + 1):
            a = tower.encode_full(k, inductive[k](elem))
            b = tower.encode_full(k, closed[k](elem))
            report.checked += 1
            if a != b:
                report.fail("closed-form", (n, k, t),
                            f"inductive composite lands at {a}, closed form at {b}")
        report.checked += 2
        if tower.encode_full(n, inductive[n](elem)) != t:
            report.fail("top-is-identity", (n, t), "level-n composite is not the identity")
        if tower.encode_full(n, gamma_n(iota_n(elem))) != t:
            report.fail("projection-retracts-section", (n, t), "gamma after iota moved the element")
    return report


def check_stage_coherence(session: Session, phi: Formula, n: int, m: int,
                          tower: StageTower | None = None) -> ValidationReport:
    """Stage-n values of a rank<=m formula factor through the projections."""
    if not 0 <= m <= n:
        raise InputError("need 0 <= m <= n")
    if rank(phi) > m:
        raise InputError(f"formula has rank {rank(phi)} > {m}")
    tower = tower or StageTower(session)
    report = ValidationReport(subject=f"stage coherence {n}->{m}")
    vals_n = eval_step(session, phi, n, tower)
    vals_m = eval_step(session, phi, m, tower)
    down = list(range(tower.size(n)))
    for k in range(n - 1, m - 1, -1):
        g = tower.gamma_table(k)
        down = [g[t] for t in down]
    for t in range(tower.size(n)):
        report.checked += 1
        if vals_n[t] != vals_m[down[t]]:
            report.fail("stage-coherence", (t,),
                        f"stage-{n} value {session.lat.label(vals_n[t])} != "
                        f"projected stage-{m} value {session.lat.label(vals_m[down[t]])}")
            break
    return report
