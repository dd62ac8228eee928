"""
Axioms, derivations, and one-step soundness
===========================================

The proof side of the workbench: a surrogate oracle for the base logic,
replayable derivation trees, and the two premises that transfer soundness
up one stage of the tower.
"""
from mvmodal import (Session, check_derivation, check_step_n_soundness,
                     decide_ax_a, load_axiom_set, load_derivation,
                     one_step_soundness_report)

luk3 = Session.from_config({"algebra": "lukasiewicz:3", "functor": "powerset",
                            "propositions": ["p", "q"]})

# the base oracle treats maximal modal subformulas as opaque atoms
for prem, conc in [(["p", "p -> q"], "q"),
                   ([], "p | (p -> c0)"),
                   (["box(p /\\ q)"], "box(p)")]:
    answer = decide_ax_a(luk3, [luk3.parse(t) for t in prem], luk3.parse(conc))
    print(f"{prem} |- {conc}: {answer}")

boolean = Session.from_config({"algebra": "boolean", "functor": "powerset",
                               "propositions": ["p", "q"]})
axioms = load_axiom_set(boolean, [
    {"name": "K", "premises": ["box(p)", "box(p -> q)"], "conclusion": "box(q)"},
])

# a two-level tree: instantiate K, then pass a base step through the box
tree = load_derivation(boolean, {
    "rule": "axlambda", "axiom": "K",
    "substitution": {"p": "p /\\ q", "q": "q"},
    "premises": ["box(p /\\ q)", "box((p /\\ q) -> q)"],
    "conclusion": "box(q)",
})
print("\nreplay K instance:", check_derivation(boolean, tree, axioms).summary())

# stratified checking rejects the same tree at stratum 0 (no modal steps there)
print("at stratum 0:", check_derivation(boolean, tree, axioms, n=0).summary())

# step-n soundness quantifies over all stage-(n-1) truth functions for the
# axiom's propositions; box(c1) survives, box(c0) is refuted concretely
good = load_axiom_set(boolean, [{"name": "boxtop", "premises": [],
                                 "conclusion": "box(c1)"}])
bad = load_axiom_set(boolean, [{"name": "boxbot", "premises": [],
                                "conclusion": "box(c0)"}])
print()
print(check_step_n_soundness(boolean, good, 1).summary())
print(check_step_n_soundness(boolean, bad, 1).summary())

# the full transfer report: sound axioms + top-cut preserving liftings
report = one_step_soundness_report(boolean, good, ["box"], 1)
print()
print(report.summary())
for note in report.notes:
    print(f"  note: {note}")
