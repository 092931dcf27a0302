import functools
import itertools
import math
import random
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from operadkit import partial as PM, sigma as S
from operadkit.partial import complete_monoid, n_vee_n


def strongly_associative_tables(size):
    """Oracle: brute-force every symmetric partial table on ``size`` elements
    with unit "0" and keep the strongly associative ones."""
    els = [str(i) for i in range(size)]
    pairs = list(itertools.combinations_with_replacement(els[1:], 2))
    found = 0
    for values in itertools.product([None] + els, repeat=len(pairs)):
        table = {}
        for (a, b), v in zip(pairs, values):
            if v is not None:
                table[(a, b)] = table[(b, a)] = v
        for a in els:
            table[(a, "0")] = table[("0", a)] = a

        def add(x, y):
            return None if x is None or y is None else table.get((x, y))

        if all(add(add(a, b), c) == add(a, add(b, c)) for a, b, c in itertools.product(els, repeat=3)):
            found += 1
    return found


def branch_vector(word):
    p = sum(int(a[1:]) for a in word if a[0] == "x")
    q = sum(int(a[1:]) for a in word if a[0] == "y")
    return p, q


# ---------------------------------------------------------------- axioms

def test_examples_validate():
    assert n_vee_n(4).validate() == []
    assert PM.pointed_set(["a", "b"]).validate() == []
    assert PM.cyclic_monoid(4).validate() == []
    assert n_vee_n(3, abelian=False).validate() == []


def test_strong_associativity_fault():
    A = PM.PartialMonoid.build(["0", "a", "b", "c", "ab", "abc"], "0",
                               {("a", "b"): "ab", ("ab", "c"): "abc"})
    bad = A.validate()
    assert any(v.axiom == "strong associativity" and v.witness == ("a", "b", "c") for v in bad)


def test_other_faults():
    A = PM.PartialMonoid.build(["0", "a"], "0", {("a", "a"): "z"})
    assert [v.axiom for v in A.validate()][0] == "closure"
    B = PM.PartialMonoid(("0", "a", "b"), "0", {("a", "b"): "a", ("0", "a"): "a", ("a", "0"): "a",
                                                ("0", "b"): "b", ("b", "0"): "b", ("0", "0"): "0"}, True)
    assert "commutativity" in {v.axiom for v in B.validate()}
    C = PM.PartialMonoid(("0", "a"), "0", {}, True)
    assert "unit" in {v.axiom for v in C.validate()}


@pytest.mark.parametrize("size", [2, 3])
def test_enumeration_matches_bruteforce(size):
    got = PM.all_partial_abelian_monoids(size)
    assert len(got) == strongly_associative_tables(size)
    assert all(A.validate() == [] for A in got)


def test_json_roundtrip():
    A = n_vee_n(3)
    B = PM.PartialMonoid.from_json(A.to_json())
    assert B.sums == A.sums and B.weights == A.weights and B.abelian
    with pytest.raises(PM.PartialMonoidError):
        PM.PartialMonoid.from_json({"zero": "0"})
    with pytest.raises(PM.PartialMonoidError):
        PM.PartialMonoid.from_json({"elements": ["0"], "zero": "0", "sums": [["0", "0"]]})


# ---------------------------------------------------------------- completion

def test_n_vee_n_completion_is_pairs():
    C = complete_monoid(n_vee_n(6), 6)
    vectors = [branch_vector(w) for w in C.normal_forms]
    expected = {(p, q) for p in range(7) for q in range(7) if 1 <= p + q <= 6} | {(0, 0)}
    assert len(C) == 28 == len(expected)
    assert len(set(vectors)) == len(vectors)
    assert set(vectors) == expected
    assert C.violations == []


def test_non_abelian_n_vee_n():
    C = complete_monoid(n_vee_n(6, abelian=False), 6)
    # alternating x/y blocks: compositions of each total into at least one part
    assert len(C) == 127


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_total_monoid_completes_to_itself(n):
    A = PM.cyclic_monoid(n)
    C = complete_monoid(A, 4)
    assert sorted(C.normal_forms) == sorted([()] + [(a,) for a in A.letters])
    for a, b in itertools.product(A.letters, repeat=2):
        assert C.multiply((a,), (b,)) == PM._canon_word(A, (A.add(a, b),))


@pytest.mark.parametrize("L", [0, 1, 2, 3, 4])
def test_pointed_set_is_free(L):
    A = PM.pointed_set(["a", "b"])
    assert len(complete_monoid(A, L)) == math.comb(L + 2, 2)
    W = replace(A, abelian=False)
    assert len(complete_monoid(W, L)) == 2 ** (L + 1) - 1


def test_filtration_monotone():
    A = n_vee_n(4)
    prev = set()
    for L in range(6):
        forms = set(complete_monoid(A, L, strict=False).normal_forms)
        assert prev <= forms
        prev = forms


def test_truncation_breaks_confluence():
    A = n_vee_n(3)
    with pytest.raises(PM.NonConfluentError):
        complete_monoid(A, 6)
    C = complete_monoid(A, 6, strict=False)
    assert C.violations


def test_bound_checks():
    C = complete_monoid(n_vee_n(2), 2)
    with pytest.raises(PM.PartialMonoidError):
        C.normal_form(("x1", "x1", "y1"))
    with pytest.raises(PM.PartialMonoidError):
        complete_monoid(n_vee_n(2), -1)


@functools.cache
def nvn_completion():
    return complete_monoid(n_vee_n(12), 12)


@given(st.lists(st.sampled_from(["x1", "x2", "y1", "y3", "0"]), max_size=4))
def test_rewriting_conserves_the_class(word):
    C = nvn_completion()
    A = C.monoid
    w = PM._canon_word(A, word)
    cls = C.grothendieck_class(w)
    for step in PM.rewrite_steps(A, w):
        assert C.grothendieck_class(step) == cls
    assert branch_vector(cls) == branch_vector(w)


# ---------------------------------------------------------------- modules

def test_free_right_module_laws():
    G = S.SigmaSet({1: ["u"], 2: ["m", "n"]}, act={("m", (1, 0)): "n", ("n", (1, 0)): "m"})
    for F in (S.AssociativeOperad(3), S.CommutativeOperad(3)):
        M = PM.FreeRightModule(G, F, 3)
        assert PM.check_right_module(M, F) == []


def test_operad_is_a_module_over_itself():
    F = S.AssociativeOperad(3)
    assert PM.check_right_module(PM.OperadModule(F), F) == []


def test_partial_algebra_action():
    A = n_vee_n(4)
    X = PM.PartialAlgebra(A, S.CommutativeOperad(3, nullary=True))
    assert X.left_action(3, ["x1", "x2", "0"]) == "x3"
    assert X.left_action(2, ["x1", "y1"]) is None
    assert X.left_action(0, []) == "0"
    with pytest.raises(S.OperadError):
        PM.PartialAlgebra(n_vee_n(2, abelian=False), S.CommutativeOperad(2))


def test_ass_algebra_follows_the_word():
    A = PM.PartialMonoid.build(["0", "a", "b", "ab"], "0", {("a", "b"): "ab"})
    X = PM.PartialAlgebra(A, S.AssociativeOperad(2))
    assert X.left_action((0, 1), ["a", "b"]) == "ab"
    assert X.left_action((1, 0), ["a", "b"]) is None


# ---------------------------------------------------------------- tensor

@pytest.mark.parametrize("N", [1, 2, 3])
def test_com_tensor_trivial_sums_gives_multisets(N):
    F = S.CommutativeOperad(N, nullary=True)
    A = PM.pointed_set(["a", "b"])
    T = PM.tensor_over_operad(PM.OperadModule(F), F, PM.PartialAlgebra(A, F), 0, max_letters=N)
    assert len(T.elements(0)) == sum(m + 1 for m in range(N + 1))


def test_ass_tensor_trivial_sums_gives_words():
    F = S.AssociativeOperad(3, nullary=True)
    A = PM.pointed_set(["a", "b"])
    T = PM.tensor_over_operad(PM.OperadModule(F), F, PM.PartialAlgebra(A, F), 0, max_letters=3)
    assert len(T.elements(0)) == 1 + 2 + 4 + 8


def test_total_algebra_classes_have_length_one_representatives():
    F = S.CommutativeOperad(3, nullary=True)
    A = PM.cyclic_monoid(3)
    T = PM.tensor_over_operad(PM.OperadModule(F), F, PM.PartialAlgebra(A, F), 0, max_letters=3)
    classes = T.elements(0)
    assert len(classes) == 3
    for cls in classes:
        assert any(F.arity(c) == 1 for c, _, _ in T.members(cls))
        assert T.filtration_index(cls) <= 1


def test_tensor_action_and_equivariance():
    C, F, B, G, X = PM.random_bracketing_instance(3)
    T = PM.tensor_over_operad(C, F, B, 2)
    for n in T.arities():
        for cls in T.elements(n):
            assert T.act(cls, tuple(range(n))) == cls
            for s, t in itertools.product(S.P.all_perms(n), repeat=2):
                assert T.act(T.act(cls, s), t) == T.act(cls, S.P.mul(s, t))


@pytest.mark.parametrize("seed", range(4))
def test_bracketings_agree(seed):
    w = PM.compare_bracketings(*PM.random_bracketing_instance(seed), 3)
    assert w.ok, w.problems
    assert len(w.lhs.elements(0)) == len(w.rhs.elements(0)) == len(w.mapping)


def test_random_monoid_is_reproducible():
    a = PM.random_partial_abelian_monoid(random.Random(5))
    b = PM.random_partial_abelian_monoid(random.Random(5))
    assert a.sums == b.sums
