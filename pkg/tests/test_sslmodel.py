"""Subset-space semantics, updates, persistence."""

from random import Random

import pytest

from geopal.formula import Announce, UnsupportedOperator, parse, random_formula
from geopal.sslmodel import (
    SSLModel,
    Situation,
    SslEvaluator,
    is_persistent,
    persistence_immunity_check,
    random_ssl_model,
    satisfies_ssl,
    situations,
    update_ssl,
)


def pair_model(p_at=("s",)):
    return SSLModel.from_sets(["s", "t"], [["s"], ["s", "t"]], {"p": p_at})


def sit(point, *members):
    return Situation(point, frozenset(members))


def test_situations_enumeration_and_order():
    model = pair_model()
    assert situations(model) == [
        sit("s", "s"),
        sit("s", "s", "t"),
        sit("t", "s", "t"),
    ]
    assert situations(SSLModel.from_sets(["s"], [["s"]])) == [sit("s", "s")]
    assert situations(SSLModel.from_sets(["s"], [])) == []


def test_satisfies_knowledge_and_effort():
    model = pair_model()
    assert satisfies_ssl(model, sit("s", "s", "t"), parse("K p")) is False
    assert satisfies_ssl(model, sit("s", "s"), parse("K p")) is True
    assert satisfies_ssl(model, sit("s", "s", "t"), parse("D K p")) is True
    assert satisfies_ssl(model, sit("s", "s", "t"), parse("E K p")) is False
    assert satisfies_ssl(model, sit("s", "s", "t"), parse("true")) is True


def test_announcement_agrees_with_knowledge_reduction_here():
    model = pair_model()
    here = sit("s", "s", "t")
    assert satisfies_ssl(model, here, parse("[!p] K p")) is True
    assert satisfies_ssl(model, here, parse("p -> K [!p] p")) is True


def test_update_shrinks_each_neighbourhood():
    model = pair_model()
    updated = update_ssl(model, parse("p"))
    assert updated.points == ("s",)
    assert set(updated.sigma) == {frozenset({"s"})}
    assert updated.valuation["p"] == frozenset({"s"})


def test_update_by_truth_is_identity():
    model = pair_model()
    assert update_ssl(model, parse("true")) == model


def test_update_by_unsatisfied_atom_empties():
    model = pair_model()
    updated = update_ssl(model, parse("q"))
    assert updated.is_empty
    assert situations(updated) == []


def test_update_monotone():
    rng = Random(3)
    for seed in range(200):
        model = random_ssl_model(seed)
        f = random_formula(rng, max_depth=4, modal="KLED", announce_depth=1)
        updated = update_ssl(model, f)
        assert set(updated.points) <= set(model.points)
        for member in updated.sigma:
            assert any(member <= original for original in model.sigma)


def test_stray_points_drop_on_any_update():
    # A point in no observation set can never occur in a situation.
    model = SSLModel.from_sets(["s", "t", "u"], [["s", "t"]], {"p": ["s", "t", "u"]})
    updated = update_ssl(model, parse("p"))
    assert updated.points == ("s", "t")


def test_persistence_boolean_confirmed():
    for seed in range(60):
        model = random_ssl_model(seed)
        rng = Random(seed)
        boolean = random_formula(rng, max_depth=4)
        assert is_persistent(model, boolean) is None
    assert is_persistent(pair_model(), parse("true")) is None


def test_persistence_witness_found_automatically():
    model = pair_model(p_at=("t",))
    witness = is_persistent(model, parse("L p"))
    assert witness is not None
    assert witness.point == "s"
    assert witness.larger == frozenset({"s", "t"})
    assert witness.smaller == frozenset({"s"})


def test_immunity_requires_persistence():
    model = pair_model(p_at=("t",))
    with pytest.raises(ValueError):
        persistence_immunity_check(model, parse("L p"), [parse("q")])


def test_persistent_truths_survive_announcements():
    rng = Random(14)
    checked = 0
    for seed in range(100):
        model = random_ssl_model(seed)
        f = random_formula(rng, max_depth=3)  # boolean, hence persistent
        chi = random_formula(rng, max_depth=3, modal="KLED")
        report = persistence_immunity_check(model, f, [chi])
        assert report.immune, (seed, str(f), str(chi))
        checked += report.checks
    assert checked > 0


def test_ssl_axiom_schemas_valid():
    # Atomic stability under effort, S5 shape for K, S4 shape for E, and the
    # cross law K E f -> E K f.
    rng = Random(21)
    for seed in range(300):
        model = random_ssl_model(seed)
        evaluator = SslEvaluator(model)
        everything = frozenset(situations(model))
        phi = random_formula(rng, max_depth=2, modal="KLED")
        psi = random_formula(rng, max_depth=2, modal="KLED")
        schemas = [
            parse(f"(p -> E p) & (~p -> E ~p)"),
            parse(f"K (({phi}) -> ({psi})) -> (K ({phi}) -> K ({psi}))"),
            parse(f"K ({phi}) -> (({phi}) & K K ({phi}))"),
            parse(f"L ({phi}) -> K L ({phi})"),
            parse(f"E (({phi}) -> ({psi})) -> (E ({phi}) -> E ({psi}))"),
            parse(f"E ({phi}) -> (({phi}) & E E ({phi}))"),
            parse(f"K E ({phi}) -> E K ({phi})"),
        ]
        for schema in schemas:
            assert evaluator.table(schema) == everything, (seed, str(schema))


def test_dualities_hold_extensionally():
    rng = Random(22)
    for seed in range(200):
        model = random_ssl_model(seed)
        evaluator = SslEvaluator(model)
        f = random_formula(rng, max_depth=3, modal="KLED")
        assert evaluator.table(parse(f"L ({f})")) == evaluator.table(parse(f"~K ~({f})"))
        assert evaluator.table(parse(f"D ({f})")) == evaluator.table(parse(f"~E ~({f})"))


def test_interior_rejected():
    with pytest.raises(UnsupportedOperator):
        satisfies_ssl(pair_model(), sit("s", "s"), parse("I p"))


def test_invalid_situation_rejected():
    model = pair_model()
    with pytest.raises(ValueError):
        satisfies_ssl(model, sit("t", "s"), parse("p"))
    with pytest.raises(ValueError):
        satisfies_ssl(model, sit("t", "t"), parse("p"))


def test_merging_neighbourhoods_collapse():
    # Two sets that shrink to the same point set merge in the update.
    model = SSLModel.from_sets(
        ["s", "t", "u"], [["s", "t"], ["s", "u"]], {"p": ["s"]}
    )
    updated = update_ssl(model, parse("p"))
    assert updated.sigma == (frozenset({"s"}),)


def test_announcements_inside_announcements():
    model = pair_model()
    nested = Announce(parse("[!p] p"), parse("K p"))
    for situation in situations(model):
        satisfies_ssl(model, situation, nested)  # must simply not blow up
