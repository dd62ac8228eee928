"""
Coalgebraic models and formula evaluation
=========================================

Evaluates modal formulas on explicit finite models for two transition
types: relational (powerset) and probabilistic (distribution).
"""
from mvmodal import Session, eval_model, load_model, model_consequence

# a 3-valued relational model: two states, state 0 sees both, state 1 sees none
session = Session.from_config({
    "algebra": "lukasiewicz:3",
    "functor": "powerset",
    "propositions": ["p", "q"],
})
model = load_model(session, {
    "states": 2,
    "valuation": [[2, 0], [1, 2]],   # carrier indices: 0, 1/2, 1
    "sigma": [[0, 1], []],
})

for text in ["p", "box(p)", "diamond(q)", "box(p) -> p", "p & p"]:
    phi = session.parse(text)
    labels = [session.lat.label(v) for v in eval_model(session, model, phi)]
    print(f"{session.pretty(phi):18} -> {labels}")

# local consequence on this model, with the first refuting state on failure
holds, state = model_consequence(session, model,
                                 [session.parse("box(p)")], session.parse("p"))
print(f"\nbox(p) entails p here: {holds} (refuted at state {state})")

# a probabilistic model: transitions are 2-step distributions over states
psession = Session.from_config({
    "algebra": "lukasiewicz:3",
    "functor": {"distribution": {"q": 2}},
    "propositions": ["p"],
})
pmodel = load_model(psession, {
    "states": 2,
    "valuation": [[2], [0]],
    "sigma": [[1, 1], [0, 2]],      # counts out of q=2: half/half and all-on-1
})

# "prob" floors the expected truth of its argument onto the chain; "over"
# joins the cut levels whose probability clears the session threshold
for text in ["prob(p)", "over(p)", "prob(prob(p))"]:
    phi = psession.parse(text)
    labels = [psession.lat.label(v) for v in eval_model(psession, pmodel, phi)]
    print(f"{psession.pretty(phi):18} -> {labels}")
