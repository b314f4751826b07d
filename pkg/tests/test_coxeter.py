import numpy as np
import pytest
from hypothesis import given, strategies as st

from bmwkz.coxeter import (
    Arrangement2D,
    CoxeterError,
    CoxeterMatrix,
    DihedralElement,
    DihedralModel,
    alternating_word,
    enumerate_group,
    reflection_matrix,
)


def test_alternating_words():
    assert alternating_word("x", "y", 0) == ()
    assert alternating_word("x", "y", 3) == ("x", "y", "x")
    assert alternating_word("x", "y", 4, "right")[-2:] == ("x", "y")
    with pytest.raises(ValueError):
        alternating_word("x", "y", 2, "middle")


@given(st.integers(0, 12))
def test_alternating_word_sides_agree_on_reversal(n):
    w = alternating_word("a", "b", n, "right")
    assert len(w) == n
    assert all(w[k] != w[k + 1] for k in range(n - 1))
    assert tuple(reversed(w)) == alternating_word("b", "a", n)


@pytest.mark.parametrize("m,t,j,want", [(6, 0, 2, 4), (5, 3, 3, 3), (6, 1, 3, 5)])
def test_reflection_action_table(m, t, j, want):
    assert DihedralModel(m).reflection_action(t, j) == want


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
def test_reflection_action_matches_matrices(m):
    model = DihedralModel(m)
    for t in range(m):
        R = reflection_matrix(np.pi * t / m)
        for j in range(m):
            d = R @ np.array([np.cos(np.pi * j / m), np.sin(np.pi * j / m)])
            img = int(round(np.arctan2(d[1], d[0]) / (np.pi / m))) % m
            assert model.reflection_action(t, j) == img


@pytest.mark.parametrize("m", [3, 4, 6])
def test_dihedral_group_axioms(m):
    model = DihedralModel(m)
    s0, s1 = DihedralElement("s", 0), DihedralElement("s", 1)
    for t in range(m):
        s = DihedralElement("s", t)
        assert all(model.act(model.multiply(s, s), j) == j for j in range(m))
    g, order = model.multiply(s0, s1), 1
    cur = g
    while any(model.act(cur, j) != j for j in range(m)) or cur.kind != "r" or cur.index != 0:
        cur = model.multiply(cur, g)
        order += 1
    assert order == m
    assert len(model.elements) == 2 * m


def test_reflection_classes():
    assert DihedralModel(5).n_classes == 1
    assert DihedralModel(6).n_classes == 2
    assert [DihedralModel(4).class_of(t) for t in range(4)] == [0, 1, 0, 1]


def test_arrangement_forms():
    arr = Arrangement2D(5)
    assert np.allclose(arr.forms([0.3, 0.7])[0], 0.7)
    for i in range(5):
        a = np.pi * i / 5
        assert abs(arr.forms([np.cos(a), np.sin(a)])[i]) < 1e-15
    p = arr.base_point()
    assert arr.in_base_chamber(p)
    assert np.all(np.abs(arr.forms(p)) > 0)


@pytest.mark.parametrize("name,size,L", [("I2(5)", 10, 5), ("A2", 6, 3), ("A1", 2, 1), ("A3", 24, 6), ("B3", 48, 9)])
def test_enumerate_group(name, size, L):
    enum = enumerate_group(CoxeterMatrix.named(name))
    assert len(enum.elements) == size
    assert enum.longest_length == L


def test_coxeter_matrix_validation():
    with pytest.raises(CoxeterError):
        CoxeterMatrix(((1, 3), (2, 1)))
    with pytest.raises(CoxeterError):
        CoxeterMatrix(((1, 1), (1, 1)))
    g = CoxeterMatrix.from_json('{"m": [[1, 4], [4, 1]]}')
    assert g == CoxeterMatrix.dihedral(4)
    assert CoxeterMatrix.from_dict(g.to_dict()) == g
