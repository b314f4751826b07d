"""Finitely presented associative algebras over C with numerical coefficients.

The right regular module of the algebra is built by linear (vector)
enumeration: vectors are labelled by words, each relator is imposed at every
vector, and every nonzero relator image becomes a linear dependency that
eliminates one vector. The surviving word labels are the basis; the generator
action table gives normal forms, structure constants and the regular
representation.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field

import numpy as np

Word = tuple[str, ...]
Poly = list[tuple[complex, Word]]


class EnumerationError(RuntimeError):
    pass


class RewritingError(EnumerationError):
    """Enumeration did not close within its vector or step caps."""


class ClosureError(RuntimeError):
    """Designated spanning set is not closed (does not span the algebra)."""


class RelationError(RuntimeError):
    pass


@dataclass
class Presentation:
    """Generators, relators (polynomials equal to zero) and inverse rules.

    ``inverses`` maps an invertible generator to a polynomial in the generators
    equal to its inverse; ``designated`` optionally names the basis words the
    structure constants should be expressed in.
    """

    generators: tuple[str, ...]
    relators: list[Poly]
    inverses: dict[str, Poly] = field(default_factory=dict)
    designated: list[Word] | None = None
    name: str = ""
    relator_labels: list[str] | None = None
    # relators longer than this are only imposed in lookahead passes (None: all eager)
    eager_len: int | None = None


def poly_scale(poly: Poly) -> float:
    return max((abs(c) for c, _ in poly), default=0.0)


class _Enumerator:
    def __init__(self, pres: Presentation, max_vectors: int, dep_tol: float, zero_tol: float,
                 max_steps: int, abs_tol: float = 1e-6, eager_len: int | None = None,
                 lookahead_at: int = 500):
        self.pres = pres
        self.gidx = {g: n for n, g in enumerate(pres.generators)}
        self.ngen = len(pres.generators)
        self.relators = [
            [(complex(c), tuple(self.gidx[a] for a in w)) for c, w in r] for r in pres.relators
        ]
        self.max_vectors = max_vectors
        self.dep_tol = dep_tol
        self.zero_tol = zero_tol
        self.max_steps = max_steps
        self.abs_tol = abs_tol
        self.abs_zero = abs_tol * 1e-4
        self.lookahead_at = lookahead_at
        self.eager_len = pres.eager_len if eager_len is None else eager_len
        self.words: list[Word] = [()]
        self.alive: list[bool] = [True]
        self.repl: dict[int, dict[int, complex]] = {}
        self.images: list[list[dict[int, complex] | None]] = [[None] * self.ngen]
        self.n_alive = 1
        self.steps = 0
        self.max_discarded = 0.0
        self.min_accepted = np.inf
        self.pending: list[tuple[int, int]] = []

    # -- sparse vector helpers
    def canon(self, vec: dict[int, complex]) -> dict[int, complex]:
        out: dict[int, complex] = {}
        for k, c in vec.items():
            if self.alive[k]:
                out[k] = out.get(k, 0) + c
            else:
                for k2, c2 in self._repl(k).items():
                    out[k2] = out.get(k2, 0) + c * c2
        return self._prune(out)

    def _repl(self, k: int) -> dict[int, complex]:
        r = self.repl[k]
        if any(not self.alive[j] for j in r):
            r = self.canon(r)
            self.repl[k] = r
        return r

    def _prune(self, vec):
        if not vec:
            return vec
        top = max(abs(c) for c in vec.values())
        cut = max(self.zero_tol * top, self.abs_zero)
        return {k: c for k, c in vec.items() if abs(c) > cut}

    def new_vector(self, word: Word) -> int:
        if self.n_alive >= self.max_vectors:
            raise RewritingError(f"rewriting did not terminate: more than {self.max_vectors} live vectors")
        self.words.append(word)
        self.alive.append(True)
        self.images.append([None] * self.ngen)
        self.n_alive += 1
        return len(self.words) - 1

    def image(self, k: int, g: int, define: bool) -> dict[int, complex] | None:
        img = self.images[k][g]
        if img is None:
            if not define:
                return None
            new = self.new_vector(self.words[k] + (self.pres.generators[g],))
            img = {new: 1.0 + 0j}
            self.images[k][g] = img
        return img

    def act(self, vec, g: int, define: bool = True):
        out: dict[int, complex] = {}
        for k, c in vec.items():
            img = self.image(k, g, define)
            if img is None:
                return None
            for k2, c2 in img.items():
                out[k2] = out.get(k2, 0) + c * c2
        return self.canon(out)

    def apply_poly(self, vec, rel, define: bool = True):
        total: dict[int, complex] = {}
        scale = 0.0
        for c, word in rel:
            v = vec
            for g in word:
                v = self.act(v, g, define)
                if v is None:
                    return None, 0.0
            if v:
                scale = max(scale, abs(c) * max(abs(x) for x in v.values()))
            for k, x in v.items():
                total[k] = total.get(k, 0) + c * x
        return self.canon(total), scale

    # -- coincidences
    def coincidence(self, vec, scale: float):
        self.steps += 1
        if self.steps > self.max_steps:
            raise RewritingError(f"rewriting did not terminate within {self.max_steps} steps")
        vec = self.canon(vec)
        if not vec:
            return
        top = max(abs(c) for c in vec.values())
        rel = top / scale if scale > 0 else np.inf
        # coefficients of interest are O(1); tiny survivors are cancellation noise
        if rel < self.dep_tol or top < self.abs_tol:
            self.max_discarded = max(self.max_discarded, top)
            return
        self.min_accepted = min(self.min_accepted, rel)
        # pivot: longest word (then most recent) among the large coefficients;
        # the unit is only eliminated when nothing else is available
        cands = [k for k, c in vec.items() if k != 0 and abs(c) >= 0.1 * top]
        if not cands:
            cands = [k for k, c in vec.items() if k != 0 and abs(c) >= 1e-4 * top] or [0]
        p = max(cands, key=lambda k: (len(self.words[k]), k))
        cp = vec[p]
        self.repl[p] = {k: -c / cp for k, c in vec.items() if k != p}
        self.alive[p] = False
        self.n_alive -= 1
        for g in range(self.ngen):
            if self.images[p][g] is not None:
                self.pending.append((p, g))

    def drain(self):
        while self.pending:
            p, g = self.pending.pop()
            lhs = self.canon(self.images[p][g])
            rhs = self.act(self._repl(p), g, True)
            diff = dict(lhs)
            for k, c in rhs.items():
                diff[k] = diff.get(k, 0) - c
            scale = max([abs(c) for c in lhs.values()] + [abs(c) for c in rhs.values()] + [0.0])
            self.coincidence(diff, scale)

    def lookahead(self) -> bool:
        """Apply every relator at every live vector without defining new vectors.

        Returns True when some vector was eliminated.
        """
        before = self.n_alive
        for k in range(len(self.words)):
            for rel in self.relators:
                if not self.alive[k]:
                    break
                res, scale = self.apply_poly({k: 1.0 + 0j}, rel, define=False)
                if res is not None:
                    self.coincidence(res, scale)
                    self.drain()
        return self.n_alive < before

    def _process(self, k: int, eager):
        # deductions first: relators that are already fully evaluable
        for rel in eager:
            if not self.alive[k]:
                return
            res, scale = self.apply_poly({k: 1.0 + 0j}, rel, define=False)
            if res is not None:
                self.coincidence(res, scale)
                self.drain()
        for rel in eager:
            if not self.alive[k]:
                return
            res, scale = self.apply_poly({k: 1.0 + 0j}, rel)
            self.coincidence(res, scale)
            self.drain()
        if self.alive[k]:
            for g in range(self.ngen):
                self.image(k, g, True)

    def run(self):
        eager = [r for r in self.relators if self.eager_len is None
                 or max((len(w) for _, w in r), default=0) <= self.eager_len]
        done = 0
        while True:
            # short words first, so prefixes are reduced before their extensions
            heap = [(len(self.words[k]), k) for k in range(done, len(self.words))]
            heapq.heapify(heap)
            seen = len(self.words)
            soft = max(self.lookahead_at, 2 * self.n_alive)
            while heap:
                if self.n_alive > soft:
                    self.lookahead()
                    soft = max(soft, 2 * self.n_alive)
                _, k = heapq.heappop(heap)
                if self.alive[k]:
                    self._process(k, eager)
                for n in range(seen, len(self.words)):
                    heapq.heappush(heap, (len(self.words[n]), n))
                seen = len(self.words)
            done = len(self.words)
            # every live vector now has all images; close under the full relator set
            changed = self.lookahead()
            if not changed and len(self.words) == done:
                return self

    def result(self):
        live = [k for k in range(len(self.words)) if self.alive[k]]
        pos = {k: n for n, k in enumerate(live)}
        dim = len(live)
        action = np.zeros((self.ngen, dim, dim), dtype=complex)
        for k in live:
            for g in range(self.ngen):
                for k2, c in self.canon(self.images[k][g]).items():
                    action[g, pos[k2], pos[k]] = c
        return [self.words[k] for k in live], action


@dataclass
class EnumerationDiagnostics:
    vectors_defined: int
    coincidences: int
    max_discarded_residual: float  # largest coefficient treated as round-off
    min_accepted_residual: float  # smallest relative size of an accepted relation


def enumerate_module(pres: Presentation, max_vectors: int = 20_000, dep_tol: float = 1e-7,
                     zero_tol: float = 1e-14, max_steps: int = 1_000_000):
    """Return (basis words, right action matrices, diagnostics).

    ``action[g]`` has column j equal to the coordinates of basis_j * g.
    """
    en = _Enumerator(pres, max_vectors, dep_tol, zero_tol, max_steps).run()
    words, action = en.result()
    if not words or words[0] != ():
        raise EnumerationError("the unit collapsed: presentation is inconsistent")
    diag = EnumerationDiagnostics(len(en.words), en.steps, en.max_discarded,
                                  float(en.min_accepted))
    return words, action, diag


def _poly_mul(a: Poly, b: Poly) -> Poly:
    return [(ca * cb, wa + wb) for ca, wa in a for cb, wb in b]


@dataclass
class PresentedAlgebra:
    """Algebra with an ordered word basis and structure constants c[a, b, d]."""

    presentation: Presentation
    basis: list[Word]
    structure: np.ndarray
    action: np.ndarray = field(repr=False)
    to_basis: np.ndarray = field(repr=False)
    diagnostics: dict = field(default_factory=dict)
    spec: object = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def generators(self) -> tuple[str, ...]:
        return self.presentation.generators

    def index(self, word) -> int:
        return self.basis.index(tuple(word))

    # -- normal forms
    def expand_inverses(self, word) -> Poly:
        """Replace inverse letters by their polynomial expressions."""
        inv = self.presentation.inverses
        poly: Poly = [(1.0 + 0j, ())]
        for letter in word:
            if letter in self.generators:
                poly = [(c, w + (letter,)) for c, w in poly]
            elif letter.endswith("^-1") and letter[:-3] in inv:
                poly = _poly_mul(poly, inv[letter[:-3]])
            else:
                raise ValueError(f"letter {letter!r} is not a generator of {self.presentation.name}")
        return poly

    def word_vector(self, word) -> np.ndarray:
        """Coordinates (in the basis) of a word, inverse letters allowed."""
        raw = np.zeros(self.action.shape[1], dtype=complex)
        gidx = {g: n for n, g in enumerate(self.generators)}
        for c, w in self.expand_inverses(word):
            v = np.zeros(self.action.shape[1], dtype=complex)
            v[0] = 1.0
            for a in w:
                v = self.action[gidx[a]] @ v
            raw += c * v
        return self.to_basis @ raw

    def normal_form(self, word, prune: float = 1e-14) -> dict[Word, complex]:
        vec = self.word_vector(word)
        top = np.abs(vec).max(initial=0.0)
        return {self.basis[d]: complex(vec[d]) for d in range(self.dim) if abs(vec[d]) > prune * max(top, 1.0)}

    def element(self, terms) -> np.ndarray:
        """Coordinates of a linear combination given as {word: coef} or [(coef, word)]."""
        items = terms.items() if isinstance(terms, dict) else [(w, c) for c, w in terms]
        out = np.zeros(self.dim, dtype=complex)
        for w, c in items:
            out += c * self.word_vector(w)
        return out

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("a,b,abd->d", a, b, self.structure)

    def left_matrices(self) -> np.ndarray:
        """L[a] with L[a][d, b] = c[a, b, d]."""
        return np.transpose(self.structure, (0, 2, 1))

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("a,adb->db", x, self.left_matrices())

    def generator_matrix(self, word) -> np.ndarray:
        return self.left_matrix(self.word_vector(word))

    def to_dict(self) -> dict:
        entries = []
        for a, b, d in zip(*np.nonzero(np.abs(self.structure) > 1e-14)):
            c = self.structure[a, b, d]
            entries.append([int(a), int(b), int(d), float(c.real), float(c.imag)])
        return {"basis": [" ".join(w) for w in self.basis], "tensor": entries}


def structure_constants(pres: Presentation, max_vectors: int = 20_000, dep_tol: float = 1e-7,
                        max_steps: int = 1_000_000, cond_limit: float = 1e10) -> PresentedAlgebra:
    """Enumerate the algebra and tabulate c[a, b, d] for basis_a * basis_b = sum_d c[a,b,d] basis_d.

    With a designated basis, the enumerated coordinates are changed to it; a
    designated set that does not span (or is not independent) raises ClosureError.
    """
    words, action, diag = enumerate_module(pres, max_vectors, dep_tol, max_steps=max_steps)
    dim = len(words)
    gidx = {g: n for n, g in enumerate(pres.generators)}

    def raw_vector(word):
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
        for a in word:
            v = action[gidx[a]] @ v
        return v

    if pres.designated is not None:
        basis = [tuple(w) for w in pres.designated]
        C = np.column_stack([raw_vector(w) for w in basis]) if basis else np.zeros((dim, 0))
        if C.shape[1] != dim:
            raise ClosureError(
                f"spanning set not closed: designated set has {C.shape[1]} words, algebra has dimension {dim}"
            )
        sv = np.linalg.svd(C, compute_uv=False)
        if sv[-1] < sv[0] / cond_limit:
            raise ClosureError(f"spanning set not closed: designated words are dependent (cond {sv[0] / sv[-1]:.2e})")
        to_basis = np.linalg.inv(C)
        if basis[0] != ():
            raise ClosureError("designated basis must start with the empty word")
    else:
        basis = words
        to_basis = np.eye(dim, dtype=complex)

    raw_basis = [raw_vector(w) for w in basis]
    structure = np.zeros((dim, dim, dim), dtype=complex)
    for b, wb in enumerate(basis):
        # right action of the word b on every basis vector at once
        R = np.eye(dim, dtype=complex)
        for a in wb:
            R = action[gidx[a]] @ R
        cols = R @ np.column_stack(raw_basis)
        structure[:, b, :] = (to_basis @ cols).T
    structure[np.abs(structure) < 1e-14] = 0
    alg = PresentedAlgebra(pres, basis, structure, action, to_basis)
    alg.diagnostics.update(
        vectors_defined=diag.vectors_defined,
        coincidences=diag.coincidences,
        max_discarded_residual=diag.max_discarded_residual,
        min_accepted_residual=diag.min_accepted_residual,
    )
    return alg


def normal_form(alg: PresentedAlgebra, word) -> dict[Word, complex]:
    return alg.normal_form(word)


def regular_representation(alg: PresentedAlgebra, relation_tol: float = 1e-7) -> dict[str, np.ndarray]:
    """Left-multiplication matrices of the generators, with the relators re-checked on them."""
    mats = {g: alg.generator_matrix((g,)) for g in alg.generators}
    res = relation_residuals(alg.presentation, mats)
    worst = max(res.values(), default=0.0)
    alg.diagnostics["regular_relation_residual"] = worst
    if worst > relation_tol:
        raise RelationError(f"regular representation violates a relator (residual {worst:.3e})")
    return mats


def evaluate_poly(poly: Poly, mats: dict[str, np.ndarray]) -> np.ndarray:
    d = next(iter(mats.values())).shape[0]
    out = np.zeros((d, d), dtype=complex)
    for c, w in poly:
        M = np.eye(d, dtype=complex)
        for a in w:
            M = M @ mats[a]
        out += c * M
    return out


def relation_residuals(pres: Presentation, mats: dict[str, np.ndarray]) -> dict[str, float]:
    labels = pres.relator_labels or [f"r{n}" for n in range(len(pres.relators))]
    out: dict[str, float] = {}
    for lab, rel in zip(labels, pres.relators):
        r = float(np.abs(evaluate_poly(rel, mats)).max()) if rel else 0.0
        out[lab] = max(out.get(lab, 0.0), r)
    return out


def verify_representation(pres: Presentation, assign: dict[str, np.ndarray],
                          alg: PresentedAlgebra | None = None, samples: int = 50, seed: int = 0) -> dict:
    """Residuals of every relator under ``assign`` and, optionally, of sampled structure constants."""
    missing = [g for g in pres.generators if g not in assign]
    if missing:
        raise ValueError(f"no matrix for generators {missing}")
    report = {"relations": relation_residuals(pres, assign)}
    if alg is not None:
        rng = np.random.default_rng(seed)
        d = next(iter(assign.values())).shape[0]

        def img(word):
            M = np.eye(d, dtype=complex)
            for a in word:
                M = M @ assign[a]
            return M

        imgs = [img(w) for w in alg.basis]
        worst = 0.0
        for _ in range(samples):
            a, b = rng.integers(alg.dim, size=2)
            rhs = sum(alg.structure[a, b, k] * imgs[k] for k in np.nonzero(alg.structure[a, b])[0])
            worst = max(worst, float(np.abs(imgs[a] @ imgs[b] - rhs).max()))
        report["structure"] = worst
    report["max"] = max([*report["relations"].values(), report.get("structure", 0.0)], default=0.0)
    return report


def associativity_residual(alg: PresentedAlgebra, triples: int = 100, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    c = alg.structure
    worst = 0.0
    for _ in range(triples):
        a, b, d = rng.integers(alg.dim, size=3)
        left = np.einsum("e,ef->f", c[a, b], c[:, d, :])
        right = np.einsum("e,ef->f", c[b, d], c[a, :, :])
        worst = max(worst, float(np.abs(left - right).max()))
    return worst


def hecke_quotient(alg: PresentedAlgebra, ideal_generators=None) -> PresentedAlgebra:
    """Quotient by the two-sided ideal generated by the E generators (default: names starting with "E").

    The quotient basis is the E-free part of the designated basis (when there is one).
    """
    pres = alg.presentation
    if ideal_generators is None:
        ideal_generators = [g for g in pres.generators if g.startswith("E")]
    killed = set(ideal_generators)
    rels = list(pres.relators) + [[(1.0, (g,))] for g in ideal_generators]
    labels = list(pres.relator_labels or [f"r{n}" for n in range(len(pres.relators))])
    labels += [f"{g}=0" for g in ideal_generators]
    designated = None
    if pres.designated is not None:
        designated = [w for w in pres.designated if not killed.intersection(w)]
    inverses = {
        g: [(c, w) for c, w in poly if not killed.intersection(w)] for g, poly in pres.inverses.items()
    }
    quot = Presentation(pres.generators, rels, inverses, designated, f"{pres.name}/I", labels, pres.eager_len)
    return structure_constants(quot)


def quotient_map_residual(alg: PresentedAlgebra, quot: PresentedAlgebra, samples: int = 100, seed: int = 0) -> float:
    """Check that basis words map multiplicatively into the quotient on sampled pairs."""
    rng = np.random.default_rng(seed)
    images = np.array([quot.word_vector(w) for w in alg.basis])  # images[a] = phi(basis_a)
    worst = 0.0
    for _ in range(samples):
        a, b = rng.integers(alg.dim, size=2)
        lhs = alg.structure[a, b] @ images
        rhs = quot.multiply(images[a], images[b])
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def trace_form_rank(alg: PresentedAlgebra, threshold: float = 1e-6) -> int:
    """Numerical rank of the trace form B(a, b) = Tr(L_a L_b).

    B is whitened by the Frobenius Gram matrix G(a, b) = Tr(L_a L_b^*), which does
    not change its rank but removes the dependence on how the basis is scaled.
    """
    L = alg.left_matrices()
    B = np.einsum("aij,bji->ab", L, L)
    G = np.einsum("aij,bij->ab", L, L.conj())
    w, V = np.linalg.eigh(G)
    if w.min() <= 0:
        raise np.linalg.LinAlgError("regular representation is not faithful")
    W = (V * w**-0.5) @ V.conj().T
    sv = np.linalg.svd(W @ B @ W.T, compute_uv=False)
    alg.diagnostics["trace_form_singular_values"] = (float(sv[0]), float(sv[-1]))
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > threshold * sv[0]))


def unit_residual(alg: PresentedAlgebra) -> float:
    eye = np.eye(alg.dim)
    return max(float(np.abs(alg.structure[0] - eye).max()), float(np.abs(alg.structure[:, 0, :] - eye).max()))


def all_words(generators, max_len: int):
    for n in range(max_len + 1):
        yield from itertools.product(generators, repeat=n)
