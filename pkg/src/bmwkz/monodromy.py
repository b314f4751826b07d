"""Numerical monodromy of the dihedral KZ-type connection.

Parallel transport solves Y'(t) = A(t) Y(t) along piecewise paths in the
complexified plane, with A(t) = sum_i X_i f_i(gamma'(t)) / f_i(gamma(t)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .coxeter import Arrangement2D, DihedralElement, DihedralModel, alternating_word
from .lkrep import ConnectionData, ParameterSet, build_connection, permutation_matrix


class PathError(ValueError):
    pass


class IntegrationError(RuntimeError):
    pass


class SpectrumError(RuntimeError):
    pass


class ProjectorRankError(RuntimeError):
    pass


# Dormand–Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)


@dataclass
class TransportResult:
    matrix: np.ndarray
    error_estimate: float
    steps: int
    rejected: int


def integrate_linear(A, Y0, t0: float = 0.0, t1: float = 1.0, tol: float = 1e-12,
                     h0: float | None = None, max_steps: int = 1_000_000, where=None) -> TransportResult:
    """Adaptive Dormand–Prince 5(4) for the linear system Y' = A(t) Y.

    ``A`` is a callable returning a square matrix. The error estimate returned
    is the sum of accepted local error norms.
    """
    Y = np.array(Y0, dtype=complex)
    span = t1 - t0
    t = t0
    h = h0 if h0 is not None else span * 1e-2
    hmin = abs(span) * 1e-15
    K = [None] * 7
    K[0] = A(t) @ Y
    err_sum = 0.0
    steps = rejected = 0
    while (t1 - t) * np.sign(span) > 0:
        if steps + rejected > max_steps:
            raise IntegrationError(f"step budget exhausted at t={t}" + _loc(where, t))
        h = min(h, t1 - t) if span > 0 else max(h, t1 - t)
        for s in range(1, 7):
            incr = sum(a * K[j] for j, a in enumerate(_A[s]) if a != 0.0)
            K[s] = A(t + _C[s] * h) @ (Y + h * incr)
        Ynew = Y + h * sum(b * K[j] for j, b in enumerate(_B) if b != 0.0)
        errv = h * sum(e * K[j] for j, e in enumerate(_E) if e != 0.0)
        scale = tol * (1.0 + np.maximum(np.abs(Y), np.abs(Ynew)))
        err = float(np.max(np.abs(errv) / scale))
        if not np.isfinite(err) or not np.all(np.isfinite(Ynew)):
            if abs(h) <= hmin:
                raise IntegrationError("non-finite values" + _loc(where, t))
            h *= 0.2
            rejected += 1
            continue
        if err <= 1.0:
            t += h
            Y = Ynew
            K[0] = K[6]
            err_sum += float(np.max(np.abs(errv)))
            steps += 1
            fac = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            h *= fac
        else:
            rejected += 1
            h *= max(0.2, 0.9 * err ** -0.2)
            if abs(h) <= hmin:
                raise IntegrationError(f"step size underflow at t={t}" + _loc(where, t))
    return TransportResult(Y, err_sum, steps, rejected)


def _loc(where, t) -> str:
    if where is None:
        return ""
    return f" (point {np.round(where(t), 12).tolist()})"


@dataclass(frozen=True)
class Segment:
    start: np.ndarray
    end: np.ndarray

    def point(self, t):
        return self.start + t * (self.end - self.start)

    def velocity(self, t):
        return self.end - self.start


@dataclass(frozen=True)
class DetourArc:
    """t -> p' - (1 - exp(i pi t)) c alpha with c = <p', alpha>/<alpha, alpha>."""

    start: np.ndarray
    alpha: np.ndarray

    @property
    def coeff(self) -> complex:
        return np.vdot(self.alpha, self.start) / np.vdot(self.alpha, self.alpha)

    def point(self, t):
        return self.start - (1 - np.exp(1j * np.pi * t)) * self.coeff * self.alpha

    def velocity(self, t):
        return 1j * np.pi * np.exp(1j * np.pi * t) * self.coeff * self.alpha

    @property
    def end(self):
        return self.point(1.0)


@dataclass
class PiecewisePath:
    segments: list
    base_point: np.ndarray
    end_point: np.ndarray
    eps: float
    hyperplane: int | None = None

    def samples(self, n: int = 200):
        ts = np.linspace(0, 1, n)
        for k, seg in enumerate(self.segments):
            for t in ts:
                yield k, seg.point(t)

    def min_form_values(self, arrangement: Arrangement2D, n: int = 200) -> np.ndarray:
        """Per hyperplane, the smallest |f_i| seen over sampled path points."""
        out = np.full(arrangement.m, np.inf)
        for _, z in self.samples(n):
            out = np.minimum(out, np.abs(arrangement.forms(z)))
        return out

    def reversed(self) -> PiecewisePath:
        segs = [_Reversed(s) for s in reversed(self.segments)]
        return PiecewisePath(segs, self.end_point, self.base_point, self.eps, self.hyperplane)


@dataclass(frozen=True)
class _Reversed:
    seg: object

    def point(self, t):
        return self.seg.point(1 - t)

    def velocity(self, t):
        return -self.seg.velocity(1 - t)


def default_base_point(m: int) -> np.ndarray:
    return Arrangement2D(m).base_point()


def build_generator_path(model: DihedralModel, i: int, p=None, eps: float | None = None) -> PiecewisePath:
    """Straight segment p -> p', half-turn detour around H_i, straight segment s_i(p') -> s_i(p)."""
    if i not in (0, 1):
        raise ValueError("generator index must be 0 or 1")
    arr = Arrangement2D(model.m)
    p = default_base_point(model.m) if p is None else np.asarray(p, dtype=float)
    if not arr.in_base_chamber(p):
        raise PathError("base point must lie in the open chamber 0 < angle < pi/m")
    sp = model.reflect_point(i, p)
    crossing = 0.5 * (p + sp)
    dist = float(np.linalg.norm(p - crossing))
    if eps is None:
        eps = 1e-2 * dist
    if not 0 < eps < dist:
        raise PathError(f"eps={eps} must lie in (0, {dist})")
    p1 = crossing + eps * (p - crossing) / dist
    p2 = model.reflect_point(i, p1)
    alpha = (sp - p).astype(complex)
    segs = [
        Segment(p.astype(complex), p1.astype(complex)),
        DetourArc(p1.astype(complex), alpha),
        Segment(p2.astype(complex), sp.astype(complex)),
    ]
    path = PiecewisePath(segs, p.astype(complex), sp.astype(complex), eps, i)
    mins = path.min_form_values(arr)
    for j in range(model.m):
        if j == i:
            if mins[j] < 0.5 * eps:
                raise PathError(f"detour approaches its own hyperplane H_{j}")
        elif mins[j] <= 0.5 * eps:
            raise PathError(f"eps too large: path approaches hyperplane H_{j}")
    return path


def parallel_transport(conn: ConnectionData, path: PiecewisePath, tol: float = 1e-12) -> TransportResult:
    F = conn.arrangement.form_matrix
    X = conn.coefficients
    d = X.shape[1]
    Y = np.eye(d, dtype=complex)
    err = 0.0
    steps = rejected = 0
    if not np.any(X):
        return TransportResult(Y, 0.0, 0, 0)
    for seg in path.segments:

        def A(t, seg=seg):
            w = (F @ seg.velocity(t)) / (F @ seg.point(t))
            return np.tensordot(w, X, axes=1)

        res = integrate_linear(A, Y, tol=tol, where=seg.point)
        Y = res.matrix
        err += res.error_estimate
        steps += res.steps
        rejected += res.rejected
    return TransportResult(Y, err, steps, rejected)


def expected_spectrum(model: DihedralModel, params: ParameterSet, i: int) -> np.ndarray:
    """Eigenvalues {q, -q^-1, l^-1} of T(sigma_i), with multiplicities from the fixed points of s_i."""
    c = model.class_of(i)
    q, l = params.q(c), params.l(c)
    m = model.m
    fixed = sum(1 for j in range(m) if model.reflection_action(i, j) == j)
    plus = fixed + (m - fixed) // 2
    minus = (m - fixed) // 2
    return np.array([1 / l] + [q] * (plus - 1) + [-1 / q] * minus)


def spectrum_mismatch(eigs: np.ndarray, target: np.ndarray) -> float:
    cost = np.abs(eigs[:, None] - target[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def projector_from_monodromy(T: np.ndarray, q: complex, l: complex, ratio_tol: float = 1e-8):
    """e = l/(q^-1 - q) (T - q)(T + q^-1) with its best rank-one factorization u w."""
    d = T.shape[0]
    eye = np.eye(d)
    e = l / (1 / q - q) * (T - q * eye) @ (T + eye / q)
    U, s, Vh = np.linalg.svd(e)
    ratio = float(s[1] / s[0]) if d > 1 else 0.0
    if ratio > ratio_tol:
        raise ProjectorRankError(f"projector not rank 1: sigma2/sigma1 = {ratio:.3e}")
    u = U[:, 0] * s[0]
    w = Vh[0, :]
    return e, u, w, ratio


@dataclass
class MonodromyResult:
    m: int
    params: ParameterSet
    T: tuple[np.ndarray, np.ndarray]
    e: tuple[np.ndarray, np.ndarray]
    u: tuple[np.ndarray, np.ndarray]
    w: tuple[np.ndarray, np.ndarray]
    spectra: tuple[np.ndarray, np.ndarray]
    diagnostics: dict = field(default_factory=dict)

    @property
    def T0(self):
        return self.T[0]

    @property
    def T1(self):
        return self.T[1]

    @property
    def e0(self):
        return self.e[0]

    @property
    def e1(self):
        return self.e[1]

    def q(self, i: int) -> complex:
        return self.params.q(DihedralModel(self.m).class_of(i))

    def l(self, i: int) -> complex:
        return self.params.l(DihedralModel(self.m).class_of(i))

    def tau(self, i: int) -> complex:
        return self.params.tau(DihedralModel(self.m).class_of(i))


def braid_residual(T0: np.ndarray, T1: np.ndarray, m: int) -> float:
    def prod(word):
        out = np.eye(T0.shape[0], dtype=complex)
        for a in word:
            out = out @ (T0 if a == "0" else T1)
        return out

    return float(np.abs(prod(alternating_word("0", "1", m)) - prod(alternating_word("1", "0", m))).max())


def cubic_residual(T: np.ndarray, q: complex, l: complex) -> float:
    eye = np.eye(T.shape[0])
    return float(np.abs((T - eye / l) @ (T - q * eye) @ (T + eye / q)).max())


def transport_generators(model: DihedralModel, params: ParameterSet, p=None, eps: float | None = None,
                         tol: float = 1e-12) -> tuple[list[np.ndarray], dict]:
    """Raw T(sigma_0), T(sigma_1) with integration diagnostics and no spectral checks."""
    params.for_model(model)
    conn = build_connection(model, params)
    Ts = []
    diag: dict = {
        "flatness_residual": conn.flatness_residual,
        "invariance_residual": conn.invariance_residual,
        "integrator_error_estimate": 0.0,
        "steps": 0,
    }
    for i in (0, 1):
        path = build_generator_path(model, i, p, eps)
        tr = parallel_transport(conn, path, tol)
        diag["integrator_error_estimate"] += tr.error_estimate
        diag["steps"] += tr.steps
        Ts.append(permutation_matrix(model, DihedralElement("s", i)) @ tr.matrix)
    diag["braid_residual"] = braid_residual(Ts[0], Ts[1], model.m)
    return Ts, diag


def monodromy_generators(
    model: DihedralModel,
    params: ParameterSet,
    p=None,
    eps: float | None = None,
    tol: float = 1e-12,
    spectrum_tol: float = 1e-6,
    ratio_tol: float = 1e-8,
) -> MonodromyResult:
    """T(sigma_i) = iota(s_i) P(l_i) for i = 0, 1, plus projectors and diagnostics."""
    Ts, diag = transport_generators(model, params, p, eps, tol)
    es, us, ws = [], [], []
    spectra = [np.linalg.eigvals(T) for T in Ts]
    if params.kappa == 0:
        zero = np.zeros((model.m, model.m), dtype=complex)
        return MonodromyResult(model.m, params, tuple(Ts), (zero, zero), (None, None), (None, None),
                               tuple(spectra), diag)
    for i in (0, 1):
        c = model.class_of(i)
        q, l = params.q(c), params.l(c)
        target = expected_spectrum(model, params, i)
        mismatch = spectrum_mismatch(spectra[i], target)
        inverted = spectrum_mismatch(spectra[i], 1 / target)
        diag[f"spectrum_mismatch_{i}"] = mismatch
        if mismatch > spectrum_tol:
            if inverted < spectrum_tol:
                raise SpectrumError(f"T(sigma_{i}) has the inverse spectrum: orientation convention reversed")
            raise SpectrumError(f"T(sigma_{i}) spectrum mismatch {mismatch:.3e}")
        diag[f"cubic_residual_{i}"] = cubic_residual(Ts[i], q, l)
        e, u, w, ratio = projector_from_monodromy(Ts[i], q, l, ratio_tol)
        diag[f"rank1_ratio_{i}"] = ratio
        diag[f"tau_mismatch_{i}"] = abs(complex(w @ u) - params.tau(c))
        diag[f"absorption_residual_{i}"] = float(np.abs(Ts[i] @ e - e / l).max())
        es.append(e)
        us.append(u)
        ws.append(w)
    diag["determinant_mismatch"] = max(
        abs(np.linalg.det(Ts[i]) - np.prod(expected_spectrum(model, params, i))) for i in (0, 1)
    )
    return MonodromyResult(model.m, params, tuple(Ts), tuple(es), tuple(us), tuple(ws), tuple(spectra), diag)


def abelian_monodromy(kappa: complex, c: complex, tol: float = 1e-12) -> complex:
    """Monodromy of the rank-one connection kappa c dz/z once around the origin."""
    coef = complex(kappa) * complex(c)

    def A(t):
        # z(t) = exp(2 pi i t): z'/z = 2 pi i
        return np.array([[coef * 2j * np.pi]])

    return complex(integrate_linear(A, np.eye(1, dtype=complex), tol=tol).matrix[0, 0])
