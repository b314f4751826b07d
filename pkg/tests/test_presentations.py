from itertools import product

import numpy as np
import pytest

from bmwkz import CoxeterMatrix, ParameterSet, sample_generic_parameters
from bmwkz.engine import associativity_residual, normal_form, verify_representation
from bmwkz.presentations import (
    bmw3_comparison,
    brauer_lk_assignment,
    build_brauer,
    build_general_bmw,
    compare_structure,
    degeneration_check,
    dihedral_basis,
    expected_dimension,
    derived_identity_residuals,
    simply_laced_check,
)


def nf_close(alg, lhs, rhs, tol=1e-7):
    """|nf(lhs) - nf(rhs)| for lists of (coefficient, word)."""
    acc = {}
    for sign, side in ((1, lhs), (-1, rhs)):
        for c, w in side:
            for k, v in normal_form(alg, w).items():
                acc[k] = acc.get(k, 0) + sign * c * v
    return max((abs(v) for v in acc.values()), default=0.0) < tol


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_spanning_words(m):
    words = dihedral_basis(m)
    assert len(set(words)) == len(words) == expected_dimension(m)
    assert words[0] == ()


@pytest.mark.parametrize("m,dim", [(3, 15), (4, 16), (5, 35), (6, 30)])
def test_dihedral_dimension(m, dim, bmw):
    alg = bmw(m)
    assert alg.dim == dim
    assert alg.diagnostics["trace_rank"] == dim
    assert max(alg.diagnostics["identity_residuals"].values()) < 1e-7


def test_commutation_identities(bmw):
    a4 = bmw(4)
    w = ("x0", "x1", "x0")
    assert nf_close(a4, [(1, ("E1",) + w)], [(1, w + ("E1",))])
    a5 = bmw(5)
    w = ("x0", "x1", "x0", "x1")
    assert nf_close(a5, [(1, ("E1",) + w)], [(1, w + ("E0",))])
    assert max(derived_identity_residuals(a5, a5.spec.mono, a5.spec.oracles).values()) < 1e-7


def test_three_strand_relations(bmw):
    alg = bmw(3)
    mono = alg.spec.mono
    p = mono.params
    tau, nu = p.tau(), p.nu()
    assert abs(tau - (1 + (1 / p.l() - p.l()) / (1 / p.q() - p.q()))) < 1e-12
    assert nf_close(alg, [(1, ("E0", "E1", "E0"))], [(1, ("E0",))])
    assert nf_close(alg, [(1, ("E0", "E0"))], [(tau, ("E0",))])
    lhs = [(p.l(), ("x0", "x0")), (p.l() * nu, ("x0",)), (-p.l(), ()), (-nu, ("E0",))]
    assert nf_close(alg, lhs, [])
    assert bmw3_comparison(p, alg)["max"] < 1e-8


@pytest.mark.parametrize("m", [3, 4, 5])
def test_monodromy_factors(m, bmw):
    from bmwkz.presentations import monodromy_assignment

    alg = bmw(m)
    assert verify_representation(alg.presentation, monodromy_assignment(alg.spec.mono), alg)["max"] < 1e-6


@pytest.mark.parametrize("m,dim", [(3, 15), (5, 35)])
def test_brauer_odd(m, dim):
    params = sample_generic_parameters(0, m).with_kappa(0)
    alg = build_brauer(m, params)
    assert alg.dim == dim and alg.diagnostics["trace_rank"] == dim
    assert verify_representation(alg.presentation, brauer_lk_assignment(m, params))["max"] < 1e-12
    for i in (0, 1):
        assert nf_close(alg, [(1, (f"S{i}", f"E{i}"))], [(1, (f"E{i}",))], tol=1e-12)


@pytest.mark.parametrize("m", [4, 6])
def test_brauer_even_reported(m):
    alg = build_brauer(m, sample_generic_parameters(0, m).with_kappa(0))
    assert set(alg.diagnostics["formulas"]) == {"2m+m^2/2", "m^2+m/2"}
    assert alg.diagnostics["matches"] == ["2m+m^2/2"]


# -- Br_3 against an explicit Brauer diagram algebra


def _diagrams(n):
    pts = list(range(2 * n))

    def matchings(rest):
        if not rest:
            yield ()
            return
        a = rest[0]
        for b in rest[1:]:
            left = [x for x in rest[1:] if x != b]
            for mm in matchings(left):
                yield ((a, b),) + mm

    return [frozenset(mt) for mt in matchings(pts)]


def _compose(d1, d2, n):
    """d1 on top of d2: points 0..n-1 top, n..2n-1 bottom. Returns (diagram, closed loops)."""
    adj = {}
    for a, b in d1:
        adj.setdefault(("u", a), []).append(("u", b))
        adj.setdefault(("u", b), []).append(("u", a))
    for a, b in d2:
        adj.setdefault(("d", a), []).append(("d", b))
        adj.setdefault(("d", b), []).append(("d", a))
    for k in range(n):  # glue bottom of d1 to top of d2
        adj[("u", n + k)].append(("d", k))
        adj[("d", k)].append(("u", n + k))

    def outer(node):
        side, x = node
        return (side == "u" and x < n) or (side == "d" and x >= n)

    def label(node):
        return node[1]

    seen, pairs = set(), []
    for start in [("u", k) for k in range(n)] + [("d", n + k) for k in range(n)]:
        if start in seen:
            continue
        prev, cur = None, start
        seen.add(cur)
        while True:
            nxt = [v for v in adj[cur] if v != prev][0] if prev is not None else adj[cur][0]
            prev, cur = cur, nxt
            seen.add(cur)
            if outer(cur):
                break
        pairs.append((label(start), label(cur)))
    loops = 0
    for node in adj:
        if node in seen:
            continue
        loops += 1
        stack = [node]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adj[v])
    return frozenset(tuple(sorted(p)) for p in pairs), loops


def test_brauer_three_strand_diagram_oracle():
    delta = 1.7
    n = 3
    ds = _diagrams(n)
    assert len(ds) == 15
    idx = {d: k for k, d in enumerate(ds)}

    def regular(g):
        M = np.zeros((15, 15))
        for d in ds:
            prod_, loops = _compose(g, d, n)
            M[idx[prod_], idx[d]] += delta**loops
        return M

    ident = [(k, n + k) for k in range(n)]
    s1 = frozenset([(0, 4), (1, 3), (2, 5)])
    s2 = frozenset([(0, 3), (1, 5), (2, 4)])
    e1 = frozenset([(0, 1), (3, 4), (2, 5)])
    e2 = frozenset([(1, 2), (4, 5), (0, 3)])
    assert frozenset(ident) in idx
    assign = {"S0": regular(s1), "S1": regular(s2), "E0": regular(e1), "E1": regular(e2)}
    params = ParameterSet(((1.0, delta),), 0.0)
    alg = build_brauer(3, params)
    rep = verify_representation(alg.presentation, assign, alg)
    assert rep["max"] < 1e-12
    # faithful: images of the 15 basis words are independent
    imgs = []
    for w in alg.basis:
        M = np.eye(15)
        for a in w:
            M = M @ assign[a]
        imgs.append(M.ravel())
    assert np.linalg.matrix_rank(np.array(imgs)) == 15


# -- general Coxeter type


@pytest.mark.parametrize("name,dim", [("A1xA1", 9), ("B2", 16), ("A2", 15)])
def test_general_dimensions(name, dim):
    gamma = CoxeterMatrix.named(name)
    n_classes = max(gamma.reflection_classes()) + 1
    params = ParameterSet(tuple(sample_generic_parameters(s, 3).classes[0] for s in range(n_classes)), 0.05)
    alg = build_general_bmw(gamma, params)
    assert not alg.diagnostics["incomplete"]
    assert alg.dim == dim
    assert associativity_residual(alg, 50) < 1e-8
    if name == "A1xA1":
        assert normal_form(alg, ("x0", "E1")) == normal_form(alg, ("E1", "x0"))


def test_a2_matches_dihedral(bmw):
    d3 = bmw(3)
    a2 = build_general_bmw(CoxeterMatrix.named("A2"), d3.spec.mono.params, designated=list(d3.basis))
    assert compare_structure(d3, a2) < 1e-8
    assert simply_laced_check(a2)["max"] < 1e-7


@pytest.mark.parametrize("m", [3, 5])
def test_degeneration(m):
    rep = degeneration_check(m, sample_generic_parameters(0, m))
    assert rep.passed
    assert all(a > b for a, b in zip(rep.deltas, rep.deltas[1:]))
