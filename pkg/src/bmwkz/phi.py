"""Sandwich scalars Phi^i(X) defined by e_i f(X) e_i = Phi^i(X) e_i."""

from __future__ import annotations

import threading

import numpy as np

from .monodromy import MonodromyResult

LETTERS = ("x0", "x1", "E0", "E1", "x0^-1", "x1^-1")


def parse_word(text) -> tuple[str, ...]:
    """Parse ``"x0 x1^-1 E0"`` (or an already tokenized sequence) into a token tuple."""
    if isinstance(text, str):
        tokens = text.replace(",", " ").split()
    else:
        tokens = list(text)
    out = []
    for tok in tokens:
        tok = tok.strip()
        if tok in ("", "1", "()"):
            continue
        if tok[0] == "X":
            tok = "x" + tok[1:]
        tok = tok.replace("^{-1}", "^-1").replace("'", "^-1")
        if tok.startswith("x") and tok.endswith("i") and not tok.endswith("^-1"):
            tok = tok[:-1] + "^-1"
        base = tok[:-3] if tok.endswith("^-1") else tok
        if base[0] not in "xE" or not base[1:].isdigit():
            raise ValueError(f"bad letter {tok!r}")
        if base[0] == "E" and tok.endswith("^-1"):
            raise ValueError("E letters are not invertible")
        out.append(tok)
    return tuple(out)


def word_str(word) -> str:
    return " ".join(word)


def letter_matrix(mono: MonodromyResult, letter: str) -> np.ndarray:
    idx = int(letter[1:].removesuffix("^-1"))
    if idx not in (0, 1):
        raise ValueError(f"letter {letter!r} outside the rank-two alphabet")
    if letter[0] == "E":
        return mono.e[idx]
    if letter.endswith("^-1"):
        return np.linalg.inv(mono.T[idx])
    return mono.T[idx]


def evaluate_word_matrix(mono: MonodromyResult, word) -> np.ndarray:
    """Ordered product f(X) with x_i -> T(sigma_i), x_i^-1 -> T(sigma_i)^-1, E_i -> e_i."""
    out = np.eye(mono.m, dtype=complex)
    for letter in parse_word(word):
        out = out @ letter_matrix(mono, letter)
    return out


class PhiOracle:
    """Memoized Phi^i over words; safe to share between threads."""

    def __init__(self, mono: MonodromyResult, i: int):
        if i not in (0, 1):
            raise ValueError("sandwich index must be 0 or 1")
        self.i = i
        self.mono = mono
        self.u = mono.u[i]
        self.w = mono.w[i]
        self._inv = [np.linalg.inv(T) for T in mono.T]
        self.cache: dict[tuple[str, ...], complex] = {}
        self._lock = threading.Lock()

    def _apply(self, word, vec):
        for letter in reversed(word):
            idx = int(letter[1:].removesuffix("^-1"))
            if letter[0] == "E":
                vec = self.mono.e[idx] @ vec
            elif letter.endswith("^-1"):
                vec = self._inv[idx] @ vec
            else:
                vec = self.mono.T[idx] @ vec
        return vec

    def __call__(self, word) -> complex:
        key = parse_word(word)
        val = self.cache.get(key)
        if val is not None:
            return val
        val = complex(self.w @ self._apply(key, self.u))
        with self._lock:
            self.cache.setdefault(key, val)
        return val


def phi(oracle: PhiOracle, word) -> complex:
    return oracle(word)


def cross_sandwich(mono: MonodromyResult, word) -> tuple[complex, complex]:
    """(w_0 f(X) u_1, w_1 f(X) u_0); both vanish for even m."""
    if mono.m % 2:
        raise ValueError("cross sandwich is only defined for even m")
    F = evaluate_word_matrix(mono, word)
    return complex(mono.w[0] @ F @ mono.u[1]), complex(mono.w[1] @ F @ mono.u[0])


def alternating_type_words(max_len: int) -> list[tuple[str, ...]]:
    """Words over {x0, x1, E0, E1} whose index alternates (0101... or 1010...), length <= max_len."""
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            if w:
                last = int(w[-1][1])
                idxs = [1 - last]
            else:
                idxs = [0, 1]
            for i in idxs:
                for kind in "xE":
                    nxt.append(w + (f"{kind}{i}",))
        out.extend(nxt)
        frontier = nxt
    return out


def dump_table(oracle: PhiOracle, max_len: int) -> dict[str, list[float]]:
    table = {}
    for w in alternating_type_words(max_len):
        v = oracle(w)
        table[word_str(w)] = [v.real, v.imag]
    return table
