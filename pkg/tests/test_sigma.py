import itertools

import pytest
from hypothesis import given, strategies as st

from operadkit import perms as P, sigma as S


def word_eval(w, ys):
    """Oracle for Ass: the word ``w`` concatenates its inputs in order ``w``."""
    return "".join(ys[i] for i in w)


def ass_compose_oracle(a, bs):
    names = [chr(ord("a") + i) for i in range(sum(len(b) for b in bs))]
    blocks, pos = [], 0
    for b in bs:
        blocks.append(word_eval(b, names[pos:pos + len(b)]))
        pos += len(b)
    text = word_eval(a, blocks)
    return tuple(names.index(ch) for ch in text)


def reverse(g, w):
    return tuple(reversed(w)) if g else w


def orbits(op, n):
    seen, count = set(), 0
    for x in op.elements(n):
        if x in seen:
            continue
        count += 1
        seen |= {op.act(x, s) for s in P.all_perms(n)}
    return count


# ---------------------------------------------------------------- Σ-sets

def test_sigma_set_validation():
    with pytest.raises(S.OperadError):
        S.SigmaSet({1: ["a"], 2: ["a"]})
    G = S.free_sigma2_generator()
    assert G.check_actions() == []
    broken = S.SigmaSet({2: ["m", "n"]}, act={("m", (1, 0)): "n", ("n", (1, 0)): "n"})
    assert broken.check_actions()


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_unit_is_left_and_right_unit(n):
    B = S.SigmaSet({1: ["a"], 2: ["b", "b'"]}, act={("b", (1, 0)): "b'", ("b'", (1, 0)): "b"})
    iota = S.unit_sigma_set()
    left = S.sigma_tensor(iota, B, n)
    right = S.sigma_tensor(B, iota, n)
    assert len(left) == len(B.elements(n)) == len(right)
    # the bijection: every representative carries a distinct B-element
    assert len({r[2][0] for r in left.representatives}) == len(left)
    image = {B.act(a, pi) for a, pi, _ in right.representatives}
    assert image == set(B.elements(n))


def test_tensor_count_on_a_and_b():
    A = S.SigmaSet({1: ["a"], 2: ["b"]})
    counts = [len(S.sigma_tensor(A, A, n)) for n in (1, 2)]
    assert counts == [1, 2] and sum(counts) == 3


def test_tensor_action_is_an_action():
    A = S.SigmaSet({1: ["a"], 2: ["b", "b'"]}, act={("b", (1, 0)): "b'", ("b'", (1, 0)): "b"})
    X = S.sigma_tensor(A, A, 3)
    for c in range(len(X)):
        assert X.act(c, P.identity(3)) == c
        for s, t in itertools.product(P.all_perms(3), repeat=2):
            assert X.act(X.act(c, s), t) == X.act(c, P.mul(s, t))


# ---------------------------------------------------------------- operads

def test_ass_compose_identities():
    Ass = S.AssociativeOperad(4)
    assert Ass.compose((0, 1), [(0, 1), (0,)]) == (0, 1, 2)
    for a in Ass.elements(2):
        assert Ass.compose(a, [Ass.unit, Ass.unit]) == a
        assert Ass.compose(Ass.unit, [a]) == a


@given(st.data())
def test_ass_compose_matches_word_oracle(data):
    Ass = S.AssociativeOperad(6)
    k = data.draw(st.integers(1, 3))
    a = tuple(data.draw(st.permutations(range(k))))
    sizes = data.draw(st.lists(st.integers(1, 2), min_size=k, max_size=k))
    bs = [tuple(data.draw(st.permutations(range(m)))) for m in sizes]
    assert Ass.compose(a, bs) == ass_compose_oracle(a, bs)


def test_arity_errors():
    Ass = S.AssociativeOperad(3)
    with pytest.raises(S.ArityOverflow):
        Ass.compose((0, 1), [(0, 1, 2), (0, 1)])
    with pytest.raises(S.OperadError):
        Ass.compose((0, 1), [(0,)])


def test_com_and_ass_axioms_small():
    assert S.check_operad_axioms(S.AssociativeOperad(4)).ok
    assert S.check_operad_axioms(S.CommutativeOperad(5)).ok


def test_corrupted_table_is_reported():
    T = S.TableOperad.from_operad(S.AssociativeOperad(3))
    key = ((1, 0), ((0, 1), (0,)))
    T.table[key] = (0, 1, 2) if T.table[key] != (0, 1, 2) else (2, 1, 0)
    report = S.check_operad_axioms(T)
    assert not report.ok
    assert any(v.instance[0] == (1, 0) for v in report.violations)
    assert str(report.violations[0])


def test_free_operad_arity_three():
    F = S.FreeOperad(S.free_sigma2_generator(), 4, 4)
    assert len(F.elements(3)) == 12
    assert orbits(F, 3) == 2
    C = S.FreeOperad(S.SigmaSet({2: ["c"]}), 4, 4)
    assert len(C.elements(3)) == 3 and orbits(C, 3) == 1


def test_free_operad_on_nothing_is_unit():
    F = S.FreeOperad(S.SigmaSet({}), 4, 4)
    assert [n for n in range(5) if F.elements(n)] == [1]
    assert F.elements(1) == (1,)


def test_free_operad_axioms():
    F = S.free_operad(S.free_sigma2_generator(), 3, 3)
    assert S.check_operad_axioms(F).ok


# ---------------------------------------------------------------- groups

def test_semidirect_identity_coordinates_reduce_to_mu():
    Ass = S.AssociativeOperad(4)
    SD = S.semidirect_product(Ass, S.cyclic_group(2), reverse)
    a = ((1, 0), (0, 0))
    bs = [((0, 1), (0, 0)), ((0,), (0,))]
    assert SD.compose(a, bs) == (Ass.compose((1, 0), [(0, 1), (0,)]), (0, 0, 0))


def test_semidirect_com_concatenates_coordinates():
    SD = S.semidirect_product(S.CommutativeOperad(5), S.cyclic_group(2))
    out = SD.compose((2, (1, 0)), [(2, (1, 0)), (3, (0, 1, 1))])
    assert out == (5, (0, 1, 0, 1, 1))


def test_semidirect_axioms():
    SD = S.semidirect_product(S.AssociativeOperad(3), S.cyclic_group(2), reverse)
    assert S.check_operad_axioms(SD).ok
    SD = S.semidirect_product(S.CommutativeOperad(3), S.cyclic_group(3))
    assert S.check_operad_axioms(SD).ok


def test_non_equivariant_action_rejected():
    def bad(g, w):  # not compatible with composition
        return tuple(reversed(w)) if g and len(w) == 2 else w

    with pytest.raises(S.NonEquivariantError):
        S.semidirect_product(S.AssociativeOperad(3), S.cyclic_group(2), bad)


def test_cyclic_group():
    G = S.cyclic_group(4)
    assert G.check() == []
    assert G.inverse(1) == 3 and G.mul(3, 3) == 2
