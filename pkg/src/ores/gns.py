"""GNS construction from an exact moment table.

The Gram matrix on words of degree at most d is built exactly and
reduced by exact graded hermitian pivoting, which certifies positivity,
yields the null ideal, and selects a pivot set that is nested along the
degree filtration.  Orthonormalization and generator matrices are then
computed in floating point on the certified-positive pivot block.

Truncation convention: generator matrices map the degree-(d-1) block
into the degree-d block, so adjoint identities are only claimed on the
inner window; the top layer is unfaithful because multiplication raises
degree.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, Presentation, _check_same
from .errors import InsufficientDegree, StateAxiomError
from .linalg import graded_hermitian_reduce
from .scalars import ONE, Scalar
from .states import MomentFunctional, from_numeric


class GnsRepresentation:
    """Generator matrices on the compressed quotient of a moment table.

    words        pivot words, in nested (degree-graded) order
    ranks        ranks[g] = dim of the quotient spanned by words of
                 degree <= g; gram_rank = ranks[degree]
    basis        upper triangular change of basis: orthonormal vector j is
                 sum_i basis[i, j] * [pivot word i]
    matrices     generator name -> (gram_rank x ranks[degree-1]) matrix
    cyclic       coordinates of the class [1]
    kernel       exact elements spanning the null ideal at degree <= d
    """

    def __init__(self, functional, words, ranks, basis, matrices, cyclic,
                 kernel):
        self.functional = functional
        self.presentation = functional.presentation
        self.degree = functional.degree
        self.words = words
        self.ranks = tuple(ranks)
        self.basis = basis
        self.matrices = matrices
        self.cyclic = cyclic
        self.kernel = tuple(kernel)

    @property
    def gram_rank(self) -> int:
        return self.ranks[-1]

    @property
    def inner_rank(self) -> int:
        return self.ranks[self.degree - 1]

    def matrix(self, gen_name: str) -> np.ndarray:
        return self.matrices[gen_name]

    def window(self, gen_name: str) -> np.ndarray:
        """The square inner block of a generator matrix."""
        r = self.inner_rank
        return self.matrices[gen_name][:r, :]

    def adjoint_defect(self, gen_name: str) -> float:
        """Spectral-norm gap between the window of the adjoint generator
        and the conjugate transpose of the generator's window."""
        p = self.presentation
        g = p._gen_index(gen_name)
        gd_name = p.generators[p.dagger_map[g]]
        gap = self.window(gd_name) - self.window(gen_name).conj().T
        return float(np.linalg.norm(gap, 2))

    def apply_word(self, word) -> np.ndarray:
        """Coordinates of pi(word) applied to the cyclic vector.

        The word must have degree <= degree-1 so every intermediate stays
        inside the faithful inner block.
        """
        p = self.presentation
        if word and isinstance(tuple(word)[0], str):
            word = p._word(tuple(word))
        word = tuple(word)
        if len(word) > self.degree - 1:
            raise InsufficientDegree(
                "word of degree %d leaves the inner block (max %d)"
                % (len(word), self.degree - 1))
        r_in = self.inner_rank
        x = np.array(self.cyclic[:r_in], dtype=complex)
        full = np.zeros(self.gram_rank, dtype=complex)
        full[:len(self.cyclic)] = self.cyclic
        for g in reversed(word):
            full = self.matrices[self.presentation.generators[g]] @ x
            x = full[:r_in]
        return full

    def moment(self, word) -> complex:
        """<Omega, pi(word) Omega> for words of degree <= 2*(degree-1),
        computed through the matrices by splitting the word in half."""
        p = self.presentation
        if word and isinstance(tuple(word)[0], str):
            word = p._word(tuple(word))
        word = tuple(word)
        if len(word) > 2 * (self.degree - 1):
            raise InsufficientDegree(
                "word of degree %d is not representable at degree %d"
                % (len(word), self.degree))
        h = (len(word) + 1) // 2
        u = p.dagger_word(word[:h])
        v = word[h:]
        psi_u = self.apply_word(u)
        psi_v = self.apply_word(v)
        return complex(np.vdot(psi_u, psi_v))

    def vector_of(self, el: AlgebraElement) -> np.ndarray:
        """Coordinates of the class [el], for el of degree <= degree."""
        _check_same(self.presentation, el.presentation)
        if el.degree() > self.degree:
            raise InsufficientDegree(
                "element degree %d exceeds the quotient degree %d"
                % (el.degree(), self.degree))
        p = self.presentation
        f = self.functional
        col = np.zeros(self.gram_rank, dtype=complex)
        for k, w in enumerate(self.words):
            wd = p.dagger_word(w)
            acc = Scalar(0)
            for w2, c in el.terms.items():
                prod = p.normalize_raw({wd + w2: ONE})
                acc = acc + c * f.evaluate(prod)
            col[k] = acc.to_complex()
        return self.basis.conj().T @ col


def gns(f: MomentFunctional) -> GnsRepresentation:
    """Build the representation carried by the moment table.

    Exact steps: Gram assembly, graded hermitian reduction (positivity
    verdict, nested pivots, null ideal).  Floating steps: Cholesky of the
    pivot block and the generator matrices, with invariants holding to
    1e-10 on the inner window.
    """
    p = f.presentation
    d = f.degree
    if d < 1:
        raise InsufficientDegree("the construction needs degree at least 1")
    all_words, G = f.gram()
    grades = [len(w) for w in all_words]
    report = graded_hermitian_reduce(G, grades)
    if not report.psd:
        raise StateAxiomError(
            "the moment table is not positive semidefinite "
            "(failure at word %s)" % p.word_str(all_words[report.failure_index]))

    pivots = report.pivots
    r = len(pivots)
    piv_words = tuple(all_words[i] for i in pivots)
    ranks = []
    for g in range(d + 1):
        ranks.append(sum(1 for w in piv_words if len(w) <= g))

    GP = np.empty((r, r), dtype=complex)
    for i, pi in enumerate(pivots):
        for j, pj in enumerate(pivots):
            GP[i, j] = G[pi][pj].to_complex()
    L = np.linalg.cholesky(GP)
    # basis B solves L^H B = I, so B is upper triangular and B^H GP B = I
    B = np.linalg.solve(L.conj().T, np.eye(r, dtype=complex))

    r_in = ranks[d - 1]
    Bsub = B[:r_in, :r_in]
    matrices = {}
    for gi, gen_name in enumerate(p.generators):
        F = np.empty((r, r_in), dtype=complex)
        for k in range(r):
            wkd = p.dagger_word(piv_words[k])
            for l in range(r_in):
                el = p.normalize_raw({wkd + (gi,) + piv_words[l]: ONE})
                F[k, l] = f.evaluate(el).to_complex()
        matrices[gen_name] = B.conj().T @ F @ Bsub

    col = np.array([G[pi][0].to_complex() for pi in pivots])
    cyclic = B.conj().T @ col

    kernel = []
    for vec in report.kernel:
        raw = {all_words[i]: c for i, c in enumerate(vec) if c}
        kernel.append(p.normalize_raw(raw))

    return GnsRepresentation(f, piv_words, ranks, B, matrices, cyclic, kernel)


def state_from_representation(rep, omega=None, degree=None,
                              presentation=None) -> MomentFunctional:
    """Recover a moment table from a representation and a unit vector.

    Accepts a GnsRepresentation (omega defaults to its cyclic vector and
    the new table carries degree-1, the faithful window) or a band
    operator assignment together with a finitely supported omega and an
    explicit degree.  Floating moments are snapped to exact rationals and
    hermitian-symmetrized; the snap tolerance is the documented bridge
    from numeric data back to exact tables.
    """
    if isinstance(rep, GnsRepresentation):
        if degree is None:
            degree = rep.degree - 1
        if degree < 1:
            raise InsufficientDegree(
                "representation degree %d leaves no faithful window"
                % rep.degree)
        if 2 * degree > 2 * (rep.degree - 1):
            raise InsufficientDegree(
                "moments of degree %d exceed the faithful window %d"
                % (2 * degree, 2 * (rep.degree - 1)))
        p = rep.presentation
        values = {}
        for w in p.basis_words(2 * degree):
            values[w] = rep.moment(w)
        return from_numeric(p, degree, values)

    from .operators import FockAssignment

    if isinstance(rep, FockAssignment):
        if omega is None or degree is None:
            raise ValueError(
                "an operator assignment needs an explicit omega and degree")
        p = presentation or rep.presentation
        omega = np.asarray(omega, dtype=complex)
        values = {}
        for w in p.basis_words(2 * degree):
            vec = omega
            for g in reversed(w):
                vec = rep.operator(p.generators[g]).apply(vec)
            n = min(len(vec), len(omega))
            values[w] = complex(np.vdot(omega[:n], vec[:n]))
        return from_numeric(p, degree, values)

    raise TypeError("unsupported representation object %r" % (rep,))
