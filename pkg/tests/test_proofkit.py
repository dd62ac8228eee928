import itertools
from fractions import Fraction

import pytest

from mvmodal import (BudgetError, InputError, check_derivation,
                     check_step_n_soundness, decide_ax_a, load_axiom_set,
                     load_derivation, one_step_soundness_report)
from mvmodal.syntax import Bin, Const, Modal, Prop
from conftest import make_session


# -- an independent Lukasiewicz oracle for the surrogate consequence ---------------------


def fraction_oracle(session, premises, conclusion):
    """Re-decides the surrogate consequence with Fraction arithmetic."""
    k = session.lat.size
    vals = [Fraction(i, k - 1) for i in range(k)]

    def atoms_of(f, acc):
        if isinstance(f, (Prop, Modal)):
            acc.setdefault(f, len(acc))
        elif isinstance(f, Bin):
            atoms_of(f.left, acc)
            atoms_of(f.right, acc)
        return acc

    atoms = {}
    for f in (*premises, conclusion):
        atoms_of(f, atoms)

    def ev(f, env):
        if isinstance(f, Const):
            return vals[f.value]
        if isinstance(f, (Prop, Modal)):
            return env[f]
        a, b = ev(f.left, env), ev(f.right, env)
        if f.op == "or":
            return max(a, b)
        if f.op == "and":
            return min(a, b)
        if f.op == "fuse":
            return max(Fraction(0), a + b - 1)
        return min(Fraction(1), 1 - a + b)

    for combo in itertools.product(vals, repeat=len(atoms)):
        env = dict(zip(atoms, combo))
        if all(ev(g, env) == 1 for g in premises) and ev(conclusion, env) != 1:
            return False
    return True


L3_FACTS = [
    # (premises, conclusion, expected)
    ((), "p -> p", True),
    ((), "p | (p -> c0)", False),                      # excluded middle fails at 1/2
    ((), "(p -> c0) | ((p -> c0) -> c0)", False),
    ((), "p -> (q -> p)", True),
    ((), "(p -> q) -> ((q -> r) -> (p -> r))", True),
    ((), "((p -> q) -> q) -> ((q -> p) -> p)", True),  # Lukasiewicz axiom
    ((), "(p -> q) | (q -> p)", True),                 # prelinearity on a chain
    ((), "p -> (p & p)", False),                       # contraction fails at 1/2
    ((), "(p & q) -> p", True),                        # integrality
    ((), "(p & q) -> (q & p)", True),
    ((), "(p /\\ q) -> (p & q)", False),               # 1/2 /\ 1/2 = 1/2 > 1/2 & 1/2 = 0
    ((), "(p & q) -> (p /\\ q)", True),
    (("p",), "p | q", True),
    (("p", "p -> q"), "q", True),
    (("p -> q", "q -> r"), "p -> r", True),
    (("p | q",), "p", False),
    (("p & p",), "p", True),
    (("p /\\ (p -> c0)",), "c0", True),                # premise can never be top
    (("box(p)",), "box(p)", True),                     # surrogate identity
    (("box(p)",), "box(q)", False),                    # distinct surrogates
]


def test_twenty_l3_facts_against_fraction_oracle():
    s = make_session(algebra="lukasiewicz:3", propositions=("p", "q", "r"))
    assert len(L3_FACTS) == 20
    for prem_texts, conc_text, expected in L3_FACTS:
        premises = [s.parse(t) for t in prem_texts]
        conclusion = s.parse(conc_text)
        got = decide_ax_a(s, premises, conclusion)
        assert got == expected, (prem_texts, conc_text)
        assert fraction_oracle(s, premises, conclusion) == expected, (prem_texts, conc_text)


def test_decide_ax_a_budget_guard():
    s = make_session(algebra="lukasiewicz:3", propositions=("p", "q", "r"), budget=10)
    with pytest.raises(BudgetError):
        decide_ax_a(s, [], s.parse("p | q | r"))


def test_modal_arguments_are_opaque(boolean_ps):
    s = boolean_ps
    # box(p /\ q) -> box(p) is semantically fine for powerset-box but the
    # surrogate oracle must not look inside the boxes
    assert not decide_ax_a(s, [s.parse("box(p /\\ q)")], s.parse("box(p)"))


# -- axiom sets ----------------------------------------------------------------------


def test_axiom_set_rank_guard(boolean_ps):
    with pytest.raises(InputError):
        load_axiom_set(boolean_ps, [{"name": "deep", "premises": [],
                                     "conclusion": "box(box(p))"}])
    with pytest.raises(InputError):
        load_axiom_set(boolean_ps, [{"name": "a", "premises": [], "conclusion": "p"},
                                    {"name": "a", "premises": [], "conclusion": "q"}])


AXIOMS = [
    {"name": "boxtop", "premises": [], "conclusion": "box(c1)"},
    {"name": "K", "premises": ["box(p)", "box(p -> q)"], "conclusion": "box(q)"},
    {"name": "meetbox", "premises": ["box(p)", "box(q)"], "conclusion": "box(p /\\ q)"},
]


def valid_trees():
    return [
        {"rule": "axa", "premises": ["p"], "conclusion": "p"},
        {"rule": "axa", "premises": [], "conclusion": "p -> (q -> p)"},
        {"rule": "modal", "lifting": "box", "premises": ["box(p)"],
         "conclusion": "box(p)",
         "child": {"rule": "axa", "premises": ["p"], "conclusion": "p"}},
        {"rule": "axlambda", "axiom": "K",
         "substitution": {"p": "p /\\ q", "q": "q"},
         "premises": ["box(p /\\ q)", "box((p /\\ q) -> q)"], "conclusion": "box(q)"},
        {"rule": "modal", "lifting": "diamond", "premises": ["diamond(p & q)"],
         "conclusion": "diamond(q & p)",
         "child": {"rule": "axa", "premises": ["p & q"], "conclusion": "q & p"}},
    ]


# fifth planted violation: a binary lifting cannot drive the lifting rule
COND_TREE = {
    "rule": "modal", "lifting": "cond", "premises": ["cond(p, p)"],
    "conclusion": "cond(p, p)",
    "child": {"rule": "axa", "premises": ["p"], "conclusion": "p"},
}


def invalid_trees():
    return [
        # not a surrogate consequence
        {"rule": "axa", "premises": ["p | q"], "conclusion": "p"},
        # conclusion is not the cited instance
        {"rule": "axlambda", "axiom": "K", "substitution": {"p": "q", "q": "q"},
         "premises": ["box(q)", "box(q -> q)"], "conclusion": "box(p)"},
        # unknown axiom name
        {"rule": "axlambda", "axiom": "T", "substitution": {},
         "premises": ["box(p)"], "conclusion": "p"},
        # lifted premises do not match the child
        {"rule": "modal", "lifting": "box", "premises": ["box(q)"],
         "conclusion": "box(p)",
         "child": {"rule": "axa", "premises": ["p"], "conclusion": "p"}},
    ]


def test_five_valid_trees(boolean_ps):
    s = boolean_ps
    ax = load_axiom_set(s, AXIOMS)
    for tree in valid_trees():
        report = check_derivation(s, load_derivation(s, tree), ax)
        assert report.ok, report.summary()


def test_five_invalid_trees(boolean_ps):
    s = boolean_ps
    ax = load_axiom_set(s, AXIOMS)
    trees = invalid_trees()
    for tree in trees:
        report = check_derivation(s, load_derivation(s, tree), ax)
        assert not report.ok, tree
    sel = make_session(functor="selection", propositions=("p", "q"))
    tree = load_derivation(sel, COND_TREE)
    report = check_derivation(sel, tree, load_axiom_set(sel, []))
    assert not report.ok
    assert any(v.law == "lifting-arity" for v in report.violations)


def test_stratum_discipline(boolean_ps):
    s = boolean_ps
    ax = load_axiom_set(s, AXIOMS)
    lift = {"rule": "modal", "lifting": "box", "premises": ["box(p)"],
            "conclusion": "box(p)",
            "child": {"rule": "axa", "premises": ["p"], "conclusion": "p"}}
    tree = load_derivation(s, lift)
    assert check_derivation(s, tree, ax, n=1).ok
    assert check_derivation(s, tree, ax, n=2).ok      # monotone in the stratum
    assert check_derivation(s, tree, ax).ok           # unstratified
    report = check_derivation(s, tree, ax, n=0)
    assert not report.ok
    assert any(v.law == "stratum" for v in report.violations)


def test_substitution_stratum_bound(boolean_ps):
    s = boolean_ps
    ax = load_axiom_set(s, AXIOMS)
    inst = {"rule": "axlambda", "axiom": "K",
            "substitution": {"p": "box(p)", "q": "q"},
            "premises": ["box(box(p))", "box(box(p) -> q)"], "conclusion": "box(q)"}
    tree = load_derivation(s, inst)
    assert check_derivation(s, tree, ax).ok           # fine unstratified
    assert check_derivation(s, tree, ax, n=2).ok      # 1-substitution at stratum 2
    report = check_derivation(s, tree, ax, n=1)
    assert not report.ok


def test_derivation_without_axiom_set_fails_citations(boolean_ps):
    s = boolean_ps
    tree = load_derivation(s, valid_trees()[3])
    report = check_derivation(s, tree, axioms=None)
    assert not report.ok
    assert any(v.law == "axiom-citation" for v in report.violations)


# -- step-n soundness ------------------------------------------------------------------


def test_box_top_axiom_step1_sound(boolean_ps1):
    ax = load_axiom_set(boolean_ps1, [{"name": "boxtop", "premises": [],
                                       "conclusion": "box(c1)"}])
    report = check_step_n_soundness(boolean_ps1, ax, 1)
    assert report.ok and report.notes


def test_box_bot_axiom_refuted(boolean_ps1):
    ax = load_axiom_set(boolean_ps1, [{"name": "boxbot", "premises": [],
                                       "conclusion": "box(c0)"}])
    report = check_step_n_soundness(boolean_ps1, ax, 1)
    assert not report.ok
    assert "refuted" in report.violations[0].detail


def test_meet_box_axiom_step1_sound(boolean_ps):
    ax = load_axiom_set(boolean_ps, [AXIOMS[2]])
    report = check_step_n_soundness(boolean_ps, ax, 1)
    assert report.ok
    assert report.checked == (2 ** 4) ** 2


def test_unsound_axiom_with_props_refuted_by_realizer(boolean_ps1):
    s = boolean_ps1
    ax = load_axiom_set(s, [{"name": "collapse", "premises": ["diamond(p)"],
                             "conclusion": "box(p)"}])
    report = check_step_n_soundness(s, ax, 1)
    assert not report.ok
    v = report.violations[0]
    assert "refuted" in v.detail and "p" in dict(v.witness[1])


def test_step_soundness_needs_positive_stage(boolean_ps1):
    ax = load_axiom_set(boolean_ps1, [{"name": "t", "premises": [], "conclusion": "c1"}])
    with pytest.raises(InputError):
        check_step_n_soundness(boolean_ps1, ax, 0)


def test_one_step_report_combines(boolean_ps1):
    good = load_axiom_set(boolean_ps1, [{"name": "boxtop", "premises": [],
                                         "conclusion": "box(c1)"}])
    report = one_step_soundness_report(boolean_ps1, good, ["box"], 1)
    assert report.ok
    assert any("transfers soundness" in n for n in report.notes)
    bad = load_axiom_set(boolean_ps1, [{"name": "boxbot", "premises": [],
                                        "conclusion": "box(c0)"}])
    report = one_step_soundness_report(boolean_ps1, bad, ["box"], 1)
    assert not report.ok


def test_one_step_report_empty_axioms_reduces_to_preservation(boolean_ps1):
    from mvmodal import ModalAxiomSet

    empty = ModalAxiomSet(())
    report = one_step_soundness_report(boolean_ps1, empty, ["box"], 1)
    assert report.ok
    # no axioms means nothing to refute; all checks are preservation checks
    assert not report.violations

    # diamond is honestly not top-cut preserving: an empty premise family
    # covers the whole domain while diamond of the empty structure is bottom
    report = one_step_soundness_report(boolean_ps1, empty, ["diamond"], 1)
    assert not report.ok
    assert all(v.law == "alpha-preservation" for v in report.violations)
    n, fam_f, fam_g = report.violations[0].witness
    assert fam_f == ()
