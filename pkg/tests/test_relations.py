import json
import random

import pytest

from oracles import accepting_lassos, pair_from_walk, pair_graph, random_2ba

from omegamb.corpus import get
from omegamb.degrees import DegreeLabel
from omegamb.relations import (
    CardinalityClass,
    Computation,
    ComputationCoding,
    RelTransition,
    TwoTapeBa,
    accepting_computation,
    accepts_pair,
    classify_computations,
    degree_scan,
    encode_computation_prefix,
    simple_2ba,
)
from omegamb.words import FormatError, LassoWord, parse_lasso

T_ID = get("T_id").obj
T_ALL = get("T_all").obj
T_DOUBLE = get("T_double").obj


def test_corpus_relations():
    ab = parse_lasso("(ab)")
    assert classify_computations(T_ID, ab, ab) == CardinalityClass("Finite", 1)
    assert classify_computations(T_ID, ab, parse_lasso("(ba)")) == CardinalityClass("Finite", 0)
    assert classify_computations(T_ALL, ab, parse_lasso("b(a)")) == CardinalityClass("Finite", 1)
    assert classify_computations(T_DOUBLE, parse_lasso("(a)"), parse_lasso("(a)")).kind == "Uncountable"


def test_countable_case():
    # a free λ/λ-free detour before locking into the accepting loop
    t = simple_2ba(["p", "f"], "a", "a", [("p", "a", "a", "p"), ("p", "a", "a", "f"), ("f", "a", "a", "f")], "p", ["f"])
    assert classify_computations(t, LassoWord("", "a"), LassoWord("", "a")).kind == "CountablyInfinite"


def test_lambda_cycles_do_not_accept():
    t = simple_2ba(["q"], "a", "a", [("q", "", "", "q")], "q", ["q"])
    assert not accepts_pair(t, LassoWord("", "a"), LassoWord("", "a"))
    t = simple_2ba(["q"], "a", "a", [("q", "a", "", "q")], "q", ["q"])
    assert not accepts_pair(t, LassoWord("", "a"), LassoWord("", "a"))


def test_membership_witness_is_a_computation():
    t = simple_2ba(["p", "q"], "ab", "ab", [("p", "ab", "b", "q"), ("q", "", "a", "p")], "p", ["q"])
    stem, cycle = accepting_computation(t, LassoWord("", "ab"), LassoWord("", "ba"))
    assert cycle
    assert accepting_computation(t, LassoWord("", "ab"), LassoWord("", "ab")) is None


def test_json_roundtrip_and_validation():
    assert TwoTapeBa.loads(json.dumps(T_DOUBLE.to_json())) == T_DOUBLE
    with pytest.raises(FormatError):
        TwoTapeBa.loads("nope")
    with pytest.raises(ValueError):
        simple_2ba(["q"], "a", "a", [("q", "b", "a", "q")], "q", ["q"])


def test_degree_scan():
    a = parse_lasso("(a)")
    assert degree_scan(T_DOUBLE, [(a, a)]).label == DegreeLabel.continuum()
    assert str(degree_scan(T_ID, [(parse_lasso("(ab)"), parse_lasso("(ab)"))])) == "AtLeast(1)"
    with pytest.raises(ValueError):
        degree_scan(T_ID, [])


def test_computation_coding():
    t = simple_2ba(["e", "a"], "ab", "ab", [("e", "a", "b", "a"), ("a", "", "ab", "e")], "e", ["e"])
    c = Computation("e", t.transitions)
    coding = ComputationCoding(t)
    assert coding.decode(coding.encode(c)) == c
    assert encode_computation_prefix(Computation("q", (RelTransition("q", "a", "b", "q"),))) == "qaebq"
    with pytest.raises(ValueError):
        Computation("a", t.transitions)


@pytest.mark.parametrize("seed", range(40))
def test_finite_classes_match_enumeration(seed):
    rng = random.Random(seed)
    t = random_2ba(rng)
    for _ in range(4):
        pair = pair_from_walk(rng, t)
        if pair is None:
            continue
        cls = classify_computations(t, *pair)
        if cls.kind == "Finite":
            small, _ = accepting_lassos(pair_graph(t, *pair), (t.initial_state, 0, 0), 3, 3)
            assert len(small) <= cls.k
            assert cls.k >= 1
