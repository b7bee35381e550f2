import random

import pytest

from oracles import gw_words, random_grammar, random_lasso

from omegamb.cfl import accepts, grammar, words_up_to
from omegamb.corpus import get
from omegamb.ops import (
    FactorLasso,
    adherence_member,
    count_decompositions,
    delta_limit_member,
    distinct_cuts,
    omega_power_bpda,
    substitute,
    suffix_bpda,
)
from omegamb.pda import accepts_lasso
from omegamb.words import LassoWord, parse_lasso

L1 = get("L1").obj
V = get("V").obj


def test_delta_limit_examples():
    assert delta_limit_member(L1, parse_lasso("abbcc(d)")).verdict
    assert delta_limit_member(L1, parse_lasso("aabc(d)")).verdict
    assert not delta_limit_member(L1, parse_lasso("aabbc(c)")).verdict
    assert delta_limit_member(V, parse_lasso("aabb(c)")).verdict
    assert not delta_limit_member(V, parse_lasso("aab(c)")).verdict


def test_adherence_examples():
    assert adherence_member(L1, parse_lasso("aab(b)")).verdict
    assert adherence_member(L1, parse_lasso("(a)")).verdict
    res = adherence_member(L1, parse_lasso("b(a)"))
    assert not res.verdict and res.refutation == "b"
    res = adherence_member(L1, parse_lasso("abb(c)"))
    assert not res.verdict and res.refutation == "abbccc"


@pytest.mark.parametrize("seed", range(30))
def test_delta_limit_against_prefix_hits(seed):
    rng = random.Random(seed)
    g = random_grammar(rng)
    for _ in range(8):
        w = random_lasso(rng, "ab", 3, 3)
        res = delta_limit_member(g, w)
        if res.verdict:
            for k in range(4):
                x = res.pump.word(k)
                assert x == w.factor(0, len(x)) and accepts(g, x)
        else:
            hits = [w.factor(0, n) for n in range(30) if accepts(g, w.factor(0, n))]
            assert sorted(res.prefixes, key=len) == hits


@pytest.mark.parametrize("seed", range(30))
def test_adherence_against_enumeration(seed):
    rng = random.Random(1000 + seed)
    g = random_grammar(rng)
    words = words_up_to(g, 10)
    for _ in range(8):
        w = random_lasso(rng, "ab", 3, 3)
        res = adherence_member(g, w)
        if res.verdict:
            # every prefix extends to a word of the language
            for k in range(4):
                x = res.pump.word(k)
                assert x == w.factor(0, len(x))
        else:
            r = res.refutation
            assert r == w.factor(0, len(r))
            assert not any(x.startswith(r) for x in words)
            if r:
                assert any(x.startswith(r[:-1]) for x in words) or not words


def _omega_power_oracle(finite_lang: set, w: LassoWord, horizon: int = 80) -> bool:
    reach = {0}
    for i in range(horizon):
        if i in reach:
            for x in finite_lang:
                if x and w.factor(i, len(x)) == x:
                    reach.add(i + len(x))
    return any(p >= horizon for p in reach)


@pytest.mark.parametrize("lang", [("a", "ab"), ("ab", "ba"), ("aba", "b"), ("ab", "abb", "ba")])
def test_omega_power_of_finite_languages(lang):
    g = grammar("ab", "S", {"S": [" ".join(x) for x in lang]})
    a = omega_power_bpda(g)
    rng = random.Random(len(lang))
    for _ in range(40):
        w = random_lasso(rng, "ab", 3, 4)
        assert accepts_lasso(a, w) == _omega_power_oracle(set(lang), w), w


def test_omega_power_excludes_empty_factors():
    g = grammar("ab", "S", {"S": ["", "a"]})
    a = omega_power_bpda(g)
    assert accepts_lasso(a, LassoWord("", "a"))
    assert not accepts_lasso(a, LassoWord("", "b"))


def test_gw_omega_examples():
    a = get("gW_omega").obj
    assert accepts_lasso(a, parse_lasso("(1d)"))
    assert not accepts_lasso(a, parse_lasso("(1)"))
    assert accepts_lasso(a, parse_lasso("0d(1d)"))


def test_suffix_bpda_matches_grammar():
    a = suffix_bpda(V, "d")
    for x in words_up_to(V, 6):
        assert accepts_lasso(a, LassoWord(x, "d"))
    assert not accepts_lasso(a, parse_lasso("abbc(d)"))


def test_substitution_builds_gw():
    gw = get("gW").obj
    assert words_up_to(gw, 8) == set(gw_words(8))
    with pytest.raises(ValueError):
        substitute(get("W").obj, {"0": gw})


def test_decomposition_counts():
    g = grammar("ab", "S", {"S": ["a b"]})
    r = count_decompositions(g, LassoWord("", "ab"), 8)
    assert (r.lower_bound, r.exhaustive_within_bounds) == (1, True)
    g = grammar("ab", "S", {"S": ["a", "a b", "b a"]})
    r = count_decompositions(g, LassoWord("", "ab"), 8)
    assert r.uncountable_certificate is None and not r.exhaustive_within_bounds
    assert r.lower_bound >= 2
    g = grammar("a", "S", {"S": ["a", "a a"]})
    r = count_decompositions(g, LassoWord("", "a"), 4)
    assert r.uncountable_certificate is not None and r.uncountable_certificate.verify(g, LassoWord("", "a"))


def test_gw_decompositions_are_distinct():
    gw = get("gW").obj
    w = parse_lasso("0d(01d0)")
    r = count_decompositions(gw, w, 16)
    assert r.lower_bound == 2
    f1, f2 = r.factorizations
    assert distinct_cuts(f1, f2, w)
    for f in (f1, f2):
        assert all(accepts(gw, x) for x in f.factors(w, 6))


def test_factor_lasso_cuts():
    f = FactorLasso((2,), (3,))
    assert f.cuts(11) == [2, 5, 8, 11]
    assert not distinct_cuts(FactorLasso((), (1,)), FactorLasso((1,), (1, 1)), LassoWord("", "a"))
