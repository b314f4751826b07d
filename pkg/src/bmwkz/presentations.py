"""Dihedral and general BMW-type presentations, the Brauer-type algebras, and comparison checks."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coxeter import CoxeterMatrix, DihedralModel, alternating_word, enumerate_group
from .engine import (
    Poly,
    Presentation,
    PresentedAlgebra,
    RewritingError,
    Word,
    associativity_residual,
    hecke_quotient,
    structure_constants,
    trace_form_rank,
)
from .lkrep import ParameterSet, build_iota, build_projector
from .monodromy import MonodromyResult, monodromy_generators
from .phi import PhiOracle


class IdentityCheckError(RuntimeError):
    """A derived identity of the dihedral BMW algebra failed its post-hoc check."""


# -- words


def hecke_words(m: int, a: str = "x0", b: str = "x1") -> list[Word]:
    """The 2m alternating words [a b ...]_i (0 <= i <= m) and [b a ...]_j (1 <= j <= m-1)."""
    return [alternating_word(a, b, i) for i in range(m + 1)] + [
        alternating_word(b, a, j) for j in range(1, m)
    ]


def dihedral_basis(m: int, letters=("x0", "x1"), idempotents=("E0", "E1")) -> list[Word]:
    """Spanning words of the rank-two BMW (or Brauer) algebra, unit first."""
    a, b = letters
    words = hecke_words(m, a, b)
    if m % 2:
        families = [(a, b, idempotents[0], m)]
    else:
        families = [(a, b, idempotents[0], m // 2), (b, a, idempotents[1], m // 2)]
    for x, y, e, n in families:
        for i in range(n):
            for j in range(n):
                words.append(alternating_word(x, y, i, "right") + (e,) + alternating_word(y, x, j))
    return words


def expected_dimension(m: int) -> int:
    return 2 * m + m * m if m % 2 else 2 * m + m * m // 2


# -- relators


def _local_relators(x: str, e: str, q: complex, l: complex) -> tuple[list[Poly], list[str]]:
    d = 1 / q - q
    rels = [
        # (q^-1 - q) E = l (x - q)(x + q^-1)
        [(l, (x, x)), (l * d, (x,)), (-l, ()), (-d, (e,))],
        [(1, (x, e)), (-1 / l, (e,))],
        [(1, (e, x)), (-1 / l, (e,))],
    ]
    return rels, ["cubic", "absorption", "absorption"]


def _inverse_rule(x: str, e: str, q: complex) -> Poly:
    # x^-1 = x + (q^-1 - q)(1 - E)
    d = 1 / q - q
    return [(1, (x,)), (d, ()), (-d, (e,))]


def rank_two_relators(m: int, letters, idempotents, mono: MonodromyResult,
                      oracles) -> tuple[list[Poly], list[str]]:
    """Braid, sandwich and (even m) cross relators for one generator pair.

    The sandwich scalars are imposed for every word of the pair's spanning set.
    """
    a, b = letters
    ea, eb = idempotents
    rels: list[Poly] = [[(1, alternating_word(a, b, m)), (-1, alternating_word(b, a, m))]]
    labels = ["braid"]
    span = dihedral_basis(m, letters, idempotents)
    # the oracles speak the alphabet x0, x1, E0, E1
    to_std = {a: "x0", b: "x1", ea: "E0", eb: "E1"}
    for e, oracle in ((ea, oracles[0]), (eb, oracles[1])):
        for X in span:
            phi = oracle(tuple(to_std[t] for t in X))
            rels.append([(1, (e,) + X + (e,)), (-phi, (e,))])
            labels.append("sandwich")
    if m % 2 == 0:
        for X in span:
            rels.append([(1, (ea,) + X + (eb,))])
            rels.append([(1, (eb,) + X + (ea,))])
            labels += ["cross", "cross"]
    return rels, labels


def commuting_relators(i: int, j: int) -> tuple[list[Poly], list[str]]:
    rels = []
    for u in (f"x{i}", f"E{i}"):
        for v in (f"x{j}", f"E{j}"):
            rels.append([(1, (u, v)), (-1, (v, u))])
    return rels, ["commute"] * 4


# -- dihedral BMW


@dataclass
class DihedralBMWSpec:
    m: int
    params: ParameterSet
    mono: MonodromyResult
    oracles: tuple[PhiOracle, PhiOracle]
    basis: list[Word]

    @property
    def kappa(self) -> complex:
        return self.params.kappa


def dihedral_presentation(m: int, params: ParameterSet, mono: MonodromyResult | None = None,
                          ode_tol: float = 1e-12) -> tuple[Presentation, DihedralBMWSpec]:
    model = DihedralModel(m)
    params.for_model(model)
    params.require_generic()
    if mono is None:
        mono = monodromy_generators(model, params, tol=ode_tol)
    oracles = (PhiOracle(mono, 0), PhiOracle(mono, 1))
    basis = dihedral_basis(m)
    rels: list[Poly] = []
    labels: list[str] = []
    inverses = {}
    for i in (0, 1):
        r, lab = _local_relators(f"x{i}", f"E{i}", mono.q(i), mono.l(i))
        rels += r
        labels += lab
        inverses[f"x{i}"] = _inverse_rule(f"x{i}", f"E{i}", mono.q(i))
    r, lab = rank_two_relators(m, ("x0", "x1"), ("E0", "E1"), mono, oracles)
    rels += r
    labels += lab
    pres = Presentation(("x0", "x1", "E0", "E1"), rels, inverses, basis, f"B(D_{m})", labels)
    return pres, DihedralBMWSpec(m, params, mono, oracles, basis)


def _difference(alg: PresentedAlgebra, lhs, rhs) -> float:
    """Max-norm of lhs - rhs, each a word or a list of (coef, word)."""

    def vec(side):
        if isinstance(side, tuple):
            return alg.word_vector(side)
        return sum(c * alg.word_vector(w) for c, w in side)

    return float(np.abs(vec(lhs) - vec(rhs)).max())


def derived_identity_residuals(alg: PresentedAlgebra, mono: MonodromyResult, oracles) -> dict[str, float]:
    """Residuals of the derived identities E_i^2 = tau_i E_i and the E-transport identities."""
    m = mono.m
    res: dict[str, float] = {}
    for i in (0, 1):
        e = (f"E{i}",)
        key = "E^2=tau E (odd)" if m % 2 else "E^2=tau E (even)"
        res[key] = max(res.get(key, 0.0), _difference(alg, e + e, [(mono.tau(i), e)]))
    w01 = alternating_word("x0", "x1", m - 1)
    w10 = alternating_word("x1", "x0", m - 1)
    if m % 2:
        res["E1 [x0 x1 ...] = [x0 x1 ...] E0"] = _difference(alg, ("E1",) + w01, w01 + ("E0",))
        return res
    res["E1 [x0 x1 ...] = [x0 x1 ...] E1"] = _difference(alg, ("E1",) + w01, w01 + ("E1",))
    res["E0 [x1 x0 ...] = [x1 x0 ...] E0"] = _difference(alg, ("E0",) + w10, w10 + ("E0",))
    # (m-1) is odd, so [... x1 x0]_{m-1} = [x0 x1 ...]_{m-1}
    for i, w in ((1, w01), (0, w10)):
        e = (f"E{i}",)
        scalar = oracles[i](w) / mono.tau(i)
        key = f"[...]E{i} = E{i}[...] = Phi/tau E{i}"
        res[key] = max(_difference(alg, w + e, [(scalar, e)]), _difference(alg, e + w, [(scalar, e)]))
    return res


def build_dihedral_bmw(m: int, params: ParameterSet, kappa: complex | None = None, tol: float = 1e-7,
                       mono: MonodromyResult | None = None, ode_tol: float = 1e-12,
                       rank_threshold: float = 1e-6) -> PresentedAlgebra:
    """The algebra B(D_m) on its designated basis, with the derived identities checked."""
    if kappa is not None:
        params = params.with_kappa(kappa)
    t0 = time.perf_counter()
    pres, spec = dihedral_presentation(m, params, mono, ode_tol)
    alg = structure_constants(pres)
    checks = derived_identity_residuals(alg, spec.mono, spec.oracles)
    for name, r in checks.items():
        if r > tol:
            raise IdentityCheckError(f"identity {name} fails with residual {r:.3e}")
    alg.diagnostics.update(
        m=m,
        identity_residuals=checks,
        trace_rank=trace_form_rank(alg, rank_threshold),
        expected_dimension=expected_dimension(m),
        seconds=time.perf_counter() - t0,
    )
    alg.spec = spec
    return alg


def monodromy_assignment(mono: MonodromyResult) -> dict[str, np.ndarray]:
    return {"x0": mono.T[0], "x1": mono.T[1], "E0": mono.e[0], "E1": mono.e[1]}


def bmw3_comparison(params: ParameterSet, alg: PresentedAlgebra | None = None) -> dict[str, float]:
    """Residuals, inside B(D_3), of the relations of the classical three-strand BMW algebra."""
    if alg is None:
        alg = build_dihedral_bmw(3, params)
    mono = alg.spec.mono
    q, l, tau = mono.q(0), mono.l(0), mono.tau(0)
    nu = (l - 1 / l) / (1 - tau)
    res: dict[str, float] = {}

    def rec(name, r):
        res[name] = max(res.get(name, 0.0), r)

    rec("braid", _difference(alg, ("x0", "x1", "x0"), ("x1", "x0", "x1")))
    for i, j in ((0, 1), (1, 0)):
        x, y, e, f = f"x{i}", f"x{j}", f"E{i}", f"E{j}"
        rec("XiXjEi = EjXiXj", _difference(alg, (x, y, e), (f, x, y)))
        rec("XiEi = l^-1 Ei", _difference(alg, (x, e), [(1 / l, (e,))]))
        rec("EiXjEi = l Ei", _difference(alg, (e, y, e), [(l, (e,))]))
        rec("Ei^2 = tau Ei", _difference(alg, (e, e), [(tau, (e,))]))
        rec("EiEjEi = Ei", _difference(alg, (e, f, e), (e,)))
        rec("l(Xi^2 + nu Xi - 1) = nu Ei",
            _difference(alg, [(l, (x, x)), (l * nu, (x,)), (-l, ())], [(nu, (e,))]))
    res["tau closed form"] = abs(tau - (1 + (1 / l - l) / (1 / q - q)))
    res["max"] = max(res.values())
    return res


# -- Brauer-type algebras


def brauer_presentation(m: int, params: ParameterSet) -> Presentation:
    """Presentation of the rank-two Brauer-type algebra on S0, S1, E0, E1."""
    model = DihedralModel(m)
    params.for_model(model)
    rels: list[Poly] = []
    labels: list[str] = []

    def add(label, poly):
        rels.append(poly)
        labels.append(label)

    def kref(word) -> complex:
        w = model.element_of_word(word)
        return params.k(model.class_of(w.index))

    add("2", [(1, alternating_word("S0", "S1", m)), (-1, alternating_word("S1", "S0", m))])
    for i in (0, 1):
        j = 1 - i
        S, E, Sj, Ej = f"S{i}", f"E{i}", f"S{j}", f"E{j}"
        alpha = params.alpha(model.class_of(i))
        add("1", [(1, (S, S)), (-1, ())])
        add("3", [(1, (S, E)), (-1, (E,))])
        add("3", [(1, (E, S)), (-1, (E,))])
        add("4", [(1, (E, E)), (-alpha, (E,))])
        if m == 2:
            add("5", [(1, (S, Ej)), (-1, (Ej, S))])
            add("6", [(1, (E, Ej)), (-1, (Ej, E))])
        elif m % 2 == 0:
            k = m // 2
            w = alternating_word(Sj, S, 2 * k - 1)
            add("7", [(1, w + (E,)), (-1, (E,))])
            add("7", [(1, (E,) + w), (-1, (E,))])
            for g in hecke_words(m, S, Sj):
                add("8", [(1, (E,) + g + (Ej,))])
            for l in range(1, k):
                s = alternating_word(Sj, S, 2 * l - 1)
                s2 = alternating_word(Sj, S, 2 * (k + l) - 1)
                add("9", [(1, (E,) + s + (E,)), (-(kref(s) + kref(s2)), (E,))])
        else:
            k = (m - 1) // 2
            for l in range(1, k + 1):
                s = alternating_word(Sj, S, 2 * l - 1)
                eps = i if l % 2 else j
                add("10", [(1, (E,) + s + (E,)), (-params.k(model.class_of(eps)), (E,))])
            w = alternating_word(S, Sj, 2 * k)
            add("11", [(1, w + (E,)), (-1, (Ej,) + w)])
    basis = dihedral_basis(m, ("S0", "S1"), ("E0", "E1"))
    return Presentation(("S0", "S1", "E0", "E1"), rels, {"S0": [(1, ("S0",))], "S1": [(1, ("S1",))]},
                        basis, f"Br(D_{m})", labels)


def brauer_dimension_formulas(m: int) -> dict[str, int]:
    """Candidate closed forms for the Brauer-type dimension."""
    if m % 2:
        return {"2m+m^2": 2 * m + m * m}
    return {"2m+m^2/2": 2 * m + m * m // 2, "m^2+m/2": m * m + m // 2}


def build_brauer(m: int, params: ParameterSet, rank_threshold: float = 1e-6,
                 designated: bool | None = None) -> PresentedAlgebra:
    """Enumerate the Brauer-type algebra; for even m the dimension is reported, not asserted.

    ``designated`` defaults to using the spanning words for odd m only.
    """
    pres = brauer_presentation(m, params)
    if designated is None:
        designated = bool(m % 2)
    if not designated:
        pres.designated = None
    alg = structure_constants(pres)
    formulas = brauer_dimension_formulas(m)
    alg.diagnostics.update(
        m=m,
        trace_rank=trace_form_rank(alg, rank_threshold),
        formulas=formulas,
        matches=[name for name, v in formulas.items() if v == alg.dim],
    )
    return alg


def brauer_lk_assignment(m: int, params: ParameterSet) -> dict[str, np.ndarray]:
    model = DihedralModel(m)
    iota = build_iota(model)
    return {
        "S0": iota.assign["s0"].astype(complex),
        "S1": iota.assign["s1"].astype(complex),
        "E0": build_projector(model, params, 0),
        "E1": build_projector(model, params, 1),
    }


# -- degeneration


@dataclass
class DegenerationReport:
    m: int
    kappas: list[float]
    deltas: list[float]
    ratios: list[float]
    bounded: bool
    linear: bool

    @property
    def passed(self) -> bool:
        return self.bounded and self.linear


def degeneration_check(m: int, params: ParameterSet, kappas=(1e-2, 1e-3, 1e-4), i: int = 0,
                       ratio_window=(7.0, 13.0), ode_tol: float = 1e-13) -> DegenerationReport:
    """Delta(kappa) = |(T_i^2 - 1)/(2 i pi kappa) - (k iota(s_i) - p_i)| along a decreasing kappa sequence."""
    model = DihedralModel(m)
    deltas = []
    for kappa in kappas:
        p = params.with_kappa(kappa)
        mono = monodromy_generators(model, p, tol=ode_tol)
        T = mono.T[i]
        k = p.k(model.class_of(i))
        limit = k * build_iota(model).assign[f"s{i}"] - build_projector(model, p, i)
        lhs = (T @ T - np.eye(m)) / (2j * np.pi * kappa)
        deltas.append(float(np.abs(lhs - limit).max()))
    ratios = [deltas[n] / deltas[n + 1] for n in range(len(deltas) - 1)]
    scaled = [d / abs(k) for d, k in zip(deltas, kappas)]
    bounded = max(scaled) <= 10 * min(scaled)
    lo, hi = ratio_window
    linear = all(lo <= r <= hi for r in ratios)
    return DegenerationReport(m, [float(abs(k)) for k in kappas], deltas, ratios, bounded, linear)


# -- general Coxeter type


@dataclass
class GeneralBMWSpec:
    gamma: CoxeterMatrix
    params: ParameterSet  # one (k, alpha) pair per reflection class of gamma
    classes: list[int]
    longest_length: int
    pair_monodromy: dict[tuple[int, int], MonodromyResult] = field(default_factory=dict)

    @property
    def kappa(self) -> complex:
        return self.params.kappa

    def pair_params(self, i: int, j: int) -> ParameterSet:
        m = self.gamma.m[i][j]
        ci, cj = self.classes[i], self.classes[j]
        pairs = [self.params.classes[ci]] if m % 2 else [self.params.classes[ci], self.params.classes[cj]]
        return ParameterSet(tuple(pairs), self.kappa)

    def q(self, i: int) -> complex:
        return self.params.q(self.classes[i])

    def l(self, i: int) -> complex:
        return self.params.l(self.classes[i])

    def tau(self, i: int) -> complex:
        return self.params.tau(self.classes[i])


def general_presentation(gamma: CoxeterMatrix, params: ParameterSet, ode_tol: float = 1e-12,
                         threads: int | None = None) -> tuple[Presentation, GeneralBMWSpec]:
    classes = gamma.reflection_classes()
    if params.n_classes != max(classes) + 1:
        raise ValueError(f"expected {max(classes) + 1} (k, alpha) pairs, one per reflection class")
    params.require_generic()
    enum = enumerate_group(gamma)
    spec = GeneralBMWSpec(gamma, params, classes, enum.longest_length)
    n = gamma.rank
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if gamma.m[i][j] > 2]

    def run(pair):
        i, j = pair
        m = gamma.m[i][j]
        return pair, monodromy_generators(DihedralModel(m), spec.pair_params(i, j), tol=ode_tol)

    if threads is None and os.environ.get("BMWKZ_THREADS"):
        threads = int(os.environ["BMWKZ_THREADS"])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for pair, mono in pool.map(run, pairs):
            spec.pair_monodromy[pair] = mono

    gens = tuple(f"x{i}" for i in range(n)) + tuple(f"E{i}" for i in range(n))
    rels: list[Poly] = []
    labels: list[str] = []
    inverses = {}
    for i in range(n):
        r, lab = _local_relators(f"x{i}", f"E{i}", spec.q(i), spec.l(i))
        rels += r
        labels += lab
        inverses[f"x{i}"] = _inverse_rule(f"x{i}", f"E{i}", spec.q(i))
    for i in range(n):
        for j in range(i + 1, n):
            if gamma.m[i][j] == 2:
                r, lab = commuting_relators(i, j)
            else:
                mono = spec.pair_monodromy[(i, j)]
                oracles = (PhiOracle(mono, 0), PhiOracle(mono, 1))
                r, lab = rank_two_relators(gamma.m[i][j], (f"x{i}", f"x{j}"), (f"E{i}", f"E{j}"), mono, oracles)
            rels += r
            labels += [f"{x}({i},{j})" for x in lab]
    pres = Presentation(gens, rels, inverses, None, "B(Gamma)", labels)
    return pres, spec


def build_general_bmw(gamma: CoxeterMatrix, params: ParameterSet, max_vectors: int = 20_000,
                      max_steps: int = 1_000_000, ode_tol: float = 1e-12, designated=None,
                      rank_threshold: float = 1e-6) -> PresentedAlgebra:
    """Enumerate B(Gamma); the basis is discovered by closure unless ``designated`` is given.

    When a cap is exceeded the returned algebra has an empty structure tensor and
    ``diagnostics["incomplete"] = True``.
    """
    t0 = time.perf_counter()
    pres, spec = general_presentation(gamma, params, ode_tol)
    pres.designated = designated
    try:
        alg = structure_constants(pres, max_vectors=max_vectors, max_steps=max_steps)
    except RewritingError as exc:
        empty = np.zeros((0, 0, 0), dtype=complex)
        alg = PresentedAlgebra(pres, [], empty, np.zeros((len(pres.generators), 0, 0)), np.zeros((0, 0)))
        alg.diagnostics.update(incomplete=True, message=str(exc))
        alg.spec = spec
        return alg
    alg.diagnostics.update(
        incomplete=False,
        trace_rank=trace_form_rank(alg, rank_threshold),
        word_length_bound=spec.longest_length,
        seconds=time.perf_counter() - t0,
    )
    alg.spec = spec
    return alg


def simply_laced_check(alg: PresentedAlgebra) -> dict[str, float]:
    """Residuals of the simply laced BMW relations (both i~j and i!~j families) in ``alg``."""
    spec: GeneralBMWSpec = alg.spec
    gamma = spec.gamma
    n = gamma.rank
    for i in range(n):
        for j in range(n):
            if i != j and gamma.m[i][j] > 3:
                raise ValueError("simply laced check needs all m_ij in {2, 3}")
    res: dict[str, float] = {}

    def rec(name, r):
        res[name] = max(res.get(name, 0.0), r)

    for i in range(n):
        x, e = f"x{i}", f"E{i}"
        l, tau = spec.l(i), spec.tau(i)
        nu = (l - 1 / l) / (1 - tau)
        rec("l(Xi^2 + nu Xi - 1) = nu Ei",
            _difference(alg, [(l, (x, x)), (l * nu, (x,)), (-l, ())], [(nu, (e,))]))
        rec("XiEi = l^-1 Ei", _difference(alg, (x, e), [(1 / l, (e,))]))
        rec("Ei^2 = tau Ei", _difference(alg, (e, e), [(tau, (e,))]))
        for j in range(n):
            if j == i:
                continue
            y, f = f"x{j}", f"E{j}"
            if gamma.m[i][j] == 3:
                rec("XiXjXi = XjXiXj", _difference(alg, (x, y, x), (y, x, y)))
                rec("XiXjEi = EjXiXj", _difference(alg, (x, y, e), (f, x, y)))
                rec("EiXjEi = l Ei", _difference(alg, (e, y, e), [(l, (e,))]))
                rec("EiEjEi = Ei", _difference(alg, (e, f, e), (e,)))
            else:
                rec("XiXj = XjXi", _difference(alg, (x, y), (y, x)))
                rec("XiEj = EjXi", _difference(alg, (x, f), (f, x)))
                rec("EiEj = EjEi", _difference(alg, (e, f), (f, e)))
    res["max"] = max(res.values())
    return res


def compare_structure(a: PresentedAlgebra, b: PresentedAlgebra, rename: dict[str, str] | None = None) -> float:
    """Max difference of structure constants after matching basis words (b's letters renamed)."""
    rename = rename or {}
    b_words = [tuple(rename.get(t, t) for t in w) for w in b.basis]
    if sorted(a.basis) != sorted(b_words):
        raise ValueError("bases do not coincide up to reordering")
    perm = [b_words.index(w) for w in a.basis]
    cb = b.structure[np.ix_(perm, perm, perm)]
    return float(np.abs(a.structure - cb).max())


def hecke_dimension(alg: PresentedAlgebra) -> int:
    return hecke_quotient(alg).dim


def associativity(alg: PresentedAlgebra, triples: int = 100, seed: int = 0) -> float:
    return associativity_residual(alg, triples, seed)
