"""Coxeter matrices, dihedral reflection groups and their line arrangements."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class CoxeterError(ValueError):
    pass


class NotFiniteError(CoxeterError):
    """Raised when group enumeration exceeds its cap."""


Word = tuple[str, ...]


def alternating_word(x: str, y: str, length: int, side: str = "left") -> Word:
    """Alternating word in ``x`` and ``y`` of the given length.

    ``side="left"`` gives ``x y x ...`` (starts with x); ``side="right"`` gives
    ``... x y`` (ends with x y).
    """
    if length < 0:
        raise ValueError("length must be nonnegative")
    if side == "left":
        return tuple(x if n % 2 == 0 else y for n in range(length))
    if side == "right":
        return tuple(reversed(alternating_word(y, x, length, "left")))
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


@dataclass(frozen=True)
class CoxeterMatrix:
    m: tuple[tuple[int, ...], ...]
    finite_type: bool | None = None
    longest_length: int | None = None

    def __post_init__(self):
        m = tuple(tuple(int(v) for v in row) for row in self.m)
        object.__setattr__(self, "m", m)
        n = len(m)
        if n == 0:
            raise CoxeterError("empty Coxeter matrix")
        for i in range(n):
            if len(m[i]) != n:
                raise CoxeterError("Coxeter matrix must be square")
            if m[i][i] != 1:
                raise CoxeterError(f"diagonal entry m[{i}][{i}] must be 1")
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise CoxeterError("Coxeter matrix must be symmetric")
                if i != j and m[i][j] < 2:
                    raise CoxeterError(f"off-diagonal entry m[{i}][{j}] must be >= 2")

    @property
    def rank(self) -> int:
        return len(self.m)

    @classmethod
    def dihedral(cls, m: int) -> CoxeterMatrix:
        return cls(((1, m), (m, 1)))

    @classmethod
    def from_dict(cls, data: dict) -> CoxeterMatrix:
        if "dihedral" in data:
            return cls.dihedral(int(data["dihedral"]))
        mat = data["m"]
        if "rank" in data and int(data["rank"]) != len(mat):
            raise CoxeterError("rank does not match matrix size")
        return cls(tuple(tuple(r) for r in mat))

    @classmethod
    def from_json(cls, text: str) -> CoxeterMatrix:
        return cls.from_dict(json.loads(text))

    @classmethod
    def named(cls, name: str) -> CoxeterMatrix:
        """A few finite types by name: A1, A2, A3, A1xA1, B2, B3, H3, I2(m)."""
        key = name.replace(" ", "").upper()
        table = {
            "A1": ((1,),),
            "A2": ((1, 3), (3, 1)),
            "A3": ((1, 3, 2), (3, 1, 3), (2, 3, 1)),
            "A1XA1": ((1, 2), (2, 1)),
            "B2": ((1, 4), (4, 1)),
            "G2": ((1, 6), (6, 1)),
            "B3": ((1, 4, 2), (4, 1, 3), (2, 3, 1)),
            "H3": ((1, 5, 2), (5, 1, 3), (2, 3, 1)),
        }
        if key in table:
            return cls(table[key])
        if key.startswith("I2(") and key.endswith(")"):
            return cls.dihedral(int(key[3:-1]))
        raise CoxeterError(f"unknown Coxeter type {name!r}")

    def to_dict(self) -> dict:
        return {"rank": self.rank, "m": [list(r) for r in self.m]}

    def is_dihedral(self) -> bool:
        return self.rank == 2

    def tits_matrices(self) -> list[np.ndarray]:
        """Geometric (Tits) representation s_i(v) = v - 2 B(e_i, v) e_i."""
        n = self.rank
        B = np.array([[-np.cos(np.pi / self.m[i][j]) for j in range(n)] for i in range(n)])
        mats = []
        for i in range(n):
            S = np.eye(n)
            S[i, :] -= 2 * B[i, :]
            mats.append(S)
        return mats

    def reflection_classes(self) -> list[int]:
        """Class id of each simple reflection; s_i ~ s_j iff joined by an odd-labelled path."""
        n = self.rank
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(n):
            for j in range(i + 1, n):
                if self.m[i][j] % 2 == 1:
                    parent[find(i)] = find(j)
        roots: dict[int, int] = {}
        return [roots.setdefault(find(i), len(roots)) for i in range(n)]


@dataclass(frozen=True)
class GroupEnumeration:
    elements: list[Word]
    longest_length: int
    matrices: list[np.ndarray] = field(repr=False)


def enumerate_group(gamma: CoxeterMatrix, cap: int = 100_000) -> GroupEnumeration:
    """Breadth-first enumeration of the Coxeter group of ``gamma``.

    Elements are realized in the Tits representation, which is faithful, and
    labelled by their shortlex-minimal reduced word (generators ``s0, s1, ...``).
    """
    if gamma.rank > 3 and not gamma.is_dihedral():
        raise CoxeterError("enumeration restricted to rank <= 3")
    gens = gamma.tits_matrices()
    n = gamma.rank

    def key(M):
        return tuple(np.round(M, 8).ravel().tolist())

    identity = np.eye(n)
    seen = {key(identity): 0}
    elements: list[Word] = [()]
    mats = [identity]
    queue = deque([0])
    while queue:
        idx = queue.popleft()
        for g in range(n):
            M = mats[idx] @ gens[g]
            k = key(M)
            if k in seen:
                continue
            if len(elements) >= cap:
                raise NotFiniteError(f"not finite within cap={cap}")
            seen[k] = len(elements)
            elements.append(elements[idx] + (f"s{g}",))
            mats.append(M)
            queue.append(len(elements) - 1)
    L = max(len(w) for w in elements)
    return GroupEnumeration(elements, L, mats)


def with_longest_length(gamma: CoxeterMatrix, cap: int = 100_000) -> CoxeterMatrix:
    enum = enumerate_group(gamma, cap)
    return CoxeterMatrix(gamma.m, finite_type=True, longest_length=enum.longest_length)


def reflection_matrix(angle: float) -> np.ndarray:
    """Real 2x2 reflection across the line through the origin at ``angle``."""
    c, s = np.cos(2 * angle), np.sin(2 * angle)
    return np.array([[c, s], [s, -c]])


def rotation_matrix(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class DihedralElement:
    """Either the reflection ``s_t`` (kind ``"s"``) or the rotation ``r_t`` by 2*t*pi/m."""

    kind: str
    index: int


@dataclass(frozen=True)
class DihedralModel:
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise CoxeterError("dihedral order parameter must be >= 2")

    @property
    def reflections(self) -> range:
        return range(self.m)

    @property
    def rotations(self) -> range:
        return range(self.m)

    @property
    def n_classes(self) -> int:
        return 1 if self.m % 2 else 2

    def class_of(self, t: int) -> int:
        self._check(t)
        return 0 if self.m % 2 else t % 2

    def _check(self, t: int):
        if not 0 <= t < self.m:
            raise IndexError(f"index {t} out of range for m={self.m}")

    def line_angle(self, j: int) -> float:
        return j * np.pi / self.m

    def reflection_action(self, t: int, j: int) -> int:
        """Index of s_t(H_j)."""
        self._check(t)
        self._check(j)
        return (2 * t - j) % self.m

    def rotation_action(self, a: int, j: int) -> int:
        self._check(a)
        self._check(j)
        return (j + 2 * a) % self.m

    def act(self, w: DihedralElement, j: int) -> int:
        if w.kind == "s":
            return self.reflection_action(w.index, j)
        return self.rotation_action(w.index, j)

    def multiply(self, a: DihedralElement, b: DihedralElement) -> DihedralElement:
        """Composition a∘b."""
        m = self.m
        if a.kind == "s" and b.kind == "s":
            return DihedralElement("r", (a.index - b.index) % m)
        if a.kind == "r" and b.kind == "s":
            return DihedralElement("s", (a.index + b.index) % m)
        if a.kind == "s" and b.kind == "r":
            return DihedralElement("s", (a.index - b.index) % m)
        return DihedralElement("r", (a.index + b.index) % m)

    @cached_property
    def elements(self) -> list[DihedralElement]:
        return [DihedralElement("r", j) for j in range(self.m)] + [
            DihedralElement("s", t) for t in range(self.m)
        ]

    def element_of_word(self, word) -> DihedralElement:
        """Group element of a word in the simple reflections ``s0``/``s1`` (or 0/1)."""
        out = DihedralElement("r", 0)
        for letter in word:
            idx = int(str(letter).lstrip("sS"))
            out = self.multiply(out, DihedralElement("s", idx))
        return out

    def matrix(self, w: DihedralElement) -> np.ndarray:
        if w.kind == "s":
            return reflection_matrix(self.line_angle(w.index))
        return rotation_matrix(2 * np.pi * w.index / self.m)

    def inverse(self, w: DihedralElement) -> DihedralElement:
        if w.kind == "s":
            return w
        return DihedralElement("r", (-w.index) % self.m)

    def reflect_point(self, t: int, p) -> np.ndarray:
        return reflection_matrix(self.line_angle(t)) @ np.asarray(p)


@dataclass(frozen=True)
class Arrangement2D:
    """The m reflection lines of D_m with forms f_i(x, y) = -x sin(i pi/m) + y cos(i pi/m)."""

    m: int

    @cached_property
    def form_matrix(self) -> np.ndarray:
        ang = np.arange(self.m) * np.pi / self.m
        return np.stack([-np.sin(ang), np.cos(ang)], axis=1)

    def forms(self, z) -> np.ndarray:
        """Values of every f_i at the (complex) point z."""
        return self.form_matrix @ np.asarray(z, dtype=complex)

    def in_base_chamber(self, p) -> bool:
        p = np.asarray(p)
        if np.iscomplexobj(p) and np.any(np.abs(np.imag(p)) > 0):
            return False
        x, y = np.real(p)
        ang = np.arctan2(y, x)
        return bool(0 < ang < np.pi / self.m and np.hypot(x, y) > 0)

    def base_point(self, radius: float = 1.0, angle: float | None = None) -> np.ndarray:
        if angle is None:
            angle = np.pi / (2 * self.m)
        return radius * np.array([np.cos(angle), np.sin(angle)])
