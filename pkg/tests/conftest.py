import random

import pytest

from mvmodal import Session, TModel


def make_session(algebra="boolean", functor="powerset", propositions=("p", "q"), **kw):
    return Session.from_config({"algebra": algebra, "functor": functor,
                                "propositions": list(propositions), **kw})


@pytest.fixture
def boolean_ps():
    return make_session()


@pytest.fixture
def boolean_ps1():
    return make_session(propositions=("p",))


@pytest.fixture
def luk3_ps():
    return make_session(algebra="lukasiewicz:3")


def random_model(session: Session, n_states: int, rng: random.Random) -> TModel:
    """Uniform-ish random model in the session's functor, via the JSON loader."""
    from mvmodal import load_model

    F = session.functor
    k = session.lat.size
    valuation = [[rng.randrange(k) for _ in session.propositions] for _ in range(n_states)]
    sigma = []
    for _ in range(n_states):
        if F.name == "powerset":
            sigma.append([i for i in range(n_states) if rng.random() < 0.5])
        elif F.name == "fuzzyhom":
            sigma.append([rng.randrange(k) for _ in range(n_states)])
        elif F.name == "neighborhood":
            sigma.append([rng.randrange(k) for _ in range(k**n_states)])
        elif F.name == "selection":
            h = k**n_states
            sigma.append([rng.randrange(h) for _ in range(h)])
        else:
            counts = [0] * n_states
            for _ in range(F.q):
                counts[rng.randrange(n_states)] += 1
            sigma.append(counts)
    return load_model(session, {"states": n_states, "valuation": valuation, "sigma": sigma})


def random_formula(session: Session, rng: random.Random, max_rank: int = 2,
                   size: int = 6):
    """Random formula of rank <= max_rank over the session's signature."""
    from mvmodal.syntax import Bin, Const, Modal, Prop

    names = [(name, lf.arity) for name, lf in
             ((n, session.registry.get(n)) for n in session.registry.arities())]

    def go(budget: int, depth: int):
        pick = rng.random()
        if budget <= 1 or pick < 0.25:
            if rng.random() < 0.5 and session.propositions:
                return Prop(rng.choice(session.propositions))
            return Const(rng.randrange(session.lat.size))
        if depth > 0 and pick < 0.55:
            name, arity = rng.choice(names)
            share = max(1, (budget - 1) // arity)
            return Modal(name, tuple(go(share, depth - 1) for _ in range(arity)))
        op = rng.choice(("or", "and", "fuse", "imp"))
        return Bin(op, go(budget // 2, depth), go(budget // 2, depth))

    return go(size, max_rank)
