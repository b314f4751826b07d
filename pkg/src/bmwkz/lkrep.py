"""Infinitesimal Lawrence–Krammer representation and the KZ-type connection."""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass

import numpy as np

from .coxeter import Arrangement2D, DihedralElement, DihedralModel, alternating_word


class GenericityError(ValueError):
    pass


class FlatnessError(RuntimeError):
    pass


def _c(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


@dataclass(frozen=True)
class ParameterSet:
    """Per-class pairs (k_c, alpha_c) and the deformation scale kappa."""

    classes: tuple[tuple[complex, complex], ...]
    kappa: complex

    def __post_init__(self):
        cls = tuple((complex(k), complex(a)) for k, a in self.classes)
        object.__setattr__(self, "classes", cls)
        object.__setattr__(self, "kappa", complex(self.kappa))
        if not cls:
            raise ValueError("at least one reflection class required")
        for k, _ in cls:
            if k == 0:
                raise ValueError("k_c must be nonzero")

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def k(self, c: int = 0) -> complex:
        return self.classes[c][0]

    def alpha(self, c: int = 0) -> complex:
        return self.classes[c][1]

    def q(self, c: int = 0) -> complex:
        return cmath.exp(1j * cmath.pi * self.kappa * self.k(c))

    def l(self, c: int = 0) -> complex:
        return cmath.exp(1j * cmath.pi * self.kappa * self.alpha(c)) / self.q(c)

    def tau(self, c: int = 0) -> complex:
        q, l = self.q(c), self.l(c)
        return l * (1 / l - q) * (1 / l + 1 / q) / (1 / q - q)

    def nu(self, c: int = 0) -> complex:
        l = self.l(c)
        return (l - 1 / l) / (1 - self.tau(c))

    def with_kappa(self, kappa: complex) -> ParameterSet:
        return ParameterSet(self.classes, kappa)

    def resonance_distance(self, c: int = 0) -> float:
        """Smallest of |l^-1 - q|, |l^-1 - q^-1|, |q -+ 1| and |l - l^-1|.

        The last one keeps tau away from 1, where nu = (l - l^-1)/(1 - tau) degenerates.
        """
        q, l = self.q(c), self.l(c)
        return min(abs(1 / l - q), abs(1 / l - 1 / q), abs(q - 1), abs(q + 1), abs(l - 1 / l))

    def is_generic(self, margin: float = 0.0) -> bool:
        if self.kappa == 0:
            return False
        return all(self.resonance_distance(c) > margin for c in range(self.n_classes))

    def require_generic(self, margin: float = 0.0):
        for c in range(self.n_classes):
            if self.kappa == 0 or self.resonance_distance(c) <= margin:
                raise GenericityError(
                    f"class {c}: l^-1 too close to q or q^-1 (or q = ±1, or l = ±1); "
                    f"distance {self.resonance_distance(c):.3e} <= margin {margin:.1e}"
                )

    def derived(self) -> list[dict]:
        return [
            {"q": self.q(c), "l": self.l(c), "tau": self.tau(c), "nu": self.nu(c)}
            for c in range(self.n_classes)
        ]

    def to_dict(self) -> dict:
        return {
            "kappa": [self.kappa.real, self.kappa.imag],
            "classes": [{"k": [k.real, k.imag], "alpha": [a.real, a.imag]} for k, a in self.classes],
        }

    @classmethod
    def from_dict(cls, data: dict) -> ParameterSet:
        classes = tuple((_c(c["k"]), _c(c["alpha"])) for c in data["classes"])
        return cls(classes, _c(data["kappa"]))

    @classmethod
    def from_json(cls, text: str) -> ParameterSet:
        return cls.from_dict(json.loads(text))

    def for_model(self, model: DihedralModel) -> ParameterSet:
        if self.n_classes != model.n_classes:
            raise ValueError(
                f"D_{model.m} has {model.n_classes} reflection classes, got {self.n_classes} parameter pairs"
            )
        return self


def sample_generic_parameters(
    seed: int,
    m: int,
    kappa: complex = 0.05,
    margin: float = 1e-3,
    box: tuple[float, float] = (0.5, 2.0),
    max_tries: int = 10_000,
) -> ParameterSet:
    """Seeded draw of (k_c, alpha_c) per class, rejecting near-resonant values."""
    rng = np.random.default_rng(seed)
    n_classes = 1 if m % 2 else 2
    lo, hi = box
    for _ in range(max_tries):
        classes = tuple(
            (complex(rng.uniform(lo, hi)), complex(rng.uniform(lo, hi))) for _ in range(n_classes)
        )
        params = ParameterSet(classes, kappa)
        if params.is_generic(margin):
            return params
    raise GenericityError("rejection sampling did not find generic parameters")


@dataclass
class MatrixRep:
    dim: int
    assign: dict[str, np.ndarray]

    def __post_init__(self):
        for name, M in self.assign.items():
            if M.shape != (self.dim, self.dim):
                raise ValueError(f"matrix {name!r} has shape {M.shape}, expected {(self.dim, self.dim)}")


def permutation_matrix(model: DihedralModel, w: DihedralElement) -> np.ndarray:
    m = model.m
    P = np.zeros((m, m))
    for j in range(m):
        P[model.act(w, j), j] = 1.0
    return P


def build_iota(model: DihedralModel) -> MatrixRep:
    """Permutation representation on the hyperplane basis, iota(w) v_j = v_{w(j)}."""
    assign = {}
    for w in model.elements:
        assign[f"{w.kind}{w.index}"] = permutation_matrix(model, w)
    return MatrixRep(model.m, assign)


def build_projector(model: DihedralModel, params: ParameterSet, i: int) -> np.ndarray:
    """Rank-one p_i: p_i v_i = alpha v_i, p_i v_j = (sum of k_t over t with t(H_j) = H_i) v_i."""
    params.for_model(model)
    m = model.m
    p = np.zeros((m, m), dtype=complex)
    for j in range(m):
        if j == i:
            p[i, i] = params.alpha(model.class_of(i))
            continue
        p[i, j] = sum(
            params.k(model.class_of(t)) for t in model.reflections if model.reflection_action(t, j) == i
        )
    return p


@dataclass
class ConnectionData:
    arrangement: Arrangement2D
    coefficients: np.ndarray  # shape (m, m, m); coefficients[i] = X_i
    kappa: complex
    flatness_residual: float = 0.0
    invariance_residual: float = 0.0


def connection_coefficients(model: DihedralModel, params: ParameterSet) -> np.ndarray:
    iota = build_iota(model)
    X = np.empty((model.m, model.m, model.m), dtype=complex)
    for i in range(model.m):
        k = params.k(model.class_of(i))
        X[i] = params.kappa * (k * iota.assign[f"s{i}"] - build_projector(model, params, i))
    return X


def flatness_residual(X: np.ndarray) -> float:
    total = X.sum(axis=0)
    return max(float(np.abs(Xi @ total - total @ Xi).max()) for Xi in X)


def invariance_residual(model: DihedralModel, X: np.ndarray) -> float:
    worst = 0.0
    for w in model.elements:
        P = permutation_matrix(model, w)
        for i in range(model.m):
            worst = max(worst, float(np.abs(P @ X[i] @ P.T - X[model.act(w, i)]).max()))
    return worst


def build_connection(model: DihedralModel, params: ParameterSet, flat_tol: float = 1e-12) -> ConnectionData:
    X = connection_coefficients(model, params)
    flat = flatness_residual(X)
    scale = max(1.0, float(np.abs(X).max()) ** 2)
    if flat > flat_tol * scale:
        raise FlatnessError(f"Kohno commutator residual {flat:.3e} exceeds {flat_tol:.1e}")
    return ConnectionData(
        Arrangement2D(model.m), X, params.kappa, flat, invariance_residual(model, X)
    )


def verify_brauer_rep(model: DihedralModel, params: ParameterSet) -> dict[str, float]:
    """Residual of each relation family 1)-11) of the rank-two Brauer presentation under S_i -> iota(s_i), E_i -> p_i."""
    m = model.m
    S = {i: permutation_matrix(model, DihedralElement("s", i)) for i in (0, 1)}
    E = {i: build_projector(model, params, i) for i in (0, 1)}
    eye = np.eye(m)
    res: dict[str, float] = {}

    def rec(key, value):
        res[key] = max(res.get(key, 0.0), float(np.abs(value).max()))

    def word(letters):
        out = eye
        for a in letters:
            out = out @ S[int(a[1:])]
        return out

    def kref(letters) -> complex:
        w = model.element_of_word(letters)
        return params.k(model.class_of(w.index))

    for i in (0, 1):
        j = 1 - i
        a = params.alpha(model.class_of(i))
        rec("1", S[i] @ S[i] - eye)
        rec("2", word(alternating_word(f"s{i}", f"s{j}", m)) - word(alternating_word(f"s{j}", f"s{i}", m)))
        rec("3", S[i] @ E[i] - E[i])
        rec("3", E[i] @ S[i] - E[i])
        rec("4", E[i] @ E[i] - a * E[i])
        if m == 2:
            rec("5", S[i] @ E[j] - E[j] @ S[i])
            rec("6", E[i] @ E[j] - E[j] @ E[i])
        elif m % 2 == 0:
            k = m // 2
            w = word(alternating_word(f"s{j}", f"s{i}", 2 * k - 1))
            rec("7", w @ E[i] - E[i])
            rec("7", E[i] @ w - E[i])
            for g in model.elements:
                rec("8", E[i] @ permutation_matrix(model, g) @ E[j])
            # l = k is excluded: that word fixes H_i, so relations 7) and 4) already give alpha_i E_i
            for l in range(1, k):
                s = alternating_word(f"s{j}", f"s{i}", 2 * l - 1)
                s2 = alternating_word(f"s{j}", f"s{i}", 2 * (k + l) - 1)
                rec("9", E[i] @ word(s) @ E[i] - (kref(s) + kref(s2)) * E[i])
        else:
            k = (m - 1) // 2
            for l in range(1, k + 1):
                s = alternating_word(f"s{j}", f"s{i}", 2 * l - 1)
                eps = i if l % 2 else j
                rec("10", E[i] @ word(s) @ E[i] - params.k(model.class_of(eps)) * E[i])
            w = word(alternating_word(f"s{i}", f"s{j}", 2 * k))
            rec("11", w @ E[i] - E[j] @ w)
    return res


def commutant_dimension(matrices, rtol: float = 1e-9) -> int:
    """Dimension of {A : [A, M] = 0 for every M}, via the kernel of the stacked Kronecker system."""
    mats = list(matrices.values()) if isinstance(matrices, dict) else list(matrices)
    if not mats:
        raise ValueError("at least one matrix required")
    d = mats[0].shape[0]
    eye = np.eye(d)
    # vec(AM - MA) = (M^T ⊗ I - I ⊗ M) vec(A) in column-major vec
    rows = [np.kron(M.T, eye) - np.kron(eye, M) for M in mats]
    K = np.vstack(rows)
    sv = np.linalg.svd(K, compute_uv=False)
    if sv[0] == 0:
        return d * d
    return int(d * d - np.sum(sv > rtol * sv[0]))


def brauer_element_matrix(model: DihedralModel, params: ParameterSet, letters) -> np.ndarray:
    """Image of a word in S0, S1, E0, E1 under the infinitesimal LK representation."""
    out = np.eye(model.m, dtype=complex)
    for a in letters:
        idx = int(a[1:])
        if a[0] == "S":
            out = out @ permutation_matrix(model, DihedralElement("s", idx))
        else:
            out = out @ build_projector(model, params, idx)
    return out

