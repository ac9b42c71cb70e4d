"""States as exact moment tables.

A MomentFunctional stores f on every irreducible word of degree at most
2d, which is enough to build the degree-d Gram matrix G[w, w'] = f(w'w')
and to evaluate f on any element of degree at most 2d.  All stored
values are Gaussian rationals, so positivity can be decided exactly.

Shipped states: the Dirac/vacuum table (1 on the empty word, 0 on every
other normal word; on the normal-ordered oscillator presentation this is
exactly the vacuum expectation), the Gaussian moment state on the one
variable presentation, and a numeric import path that snaps floating
moments to nearby rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Rational

from .algebra import AlgebraElement, Presentation, _check_same
from .errors import InsufficientDegree, StateAxiomError
from .linalg import PsdReport, graded_hermitian_reduce
from .scalars import ONE, ZERO, Scalar


class MomentFunctional:
    """An exact linear functional given by a full word table up to 2d."""

    __slots__ = ("presentation", "degree", "table")

    def __init__(self, presentation: Presentation, degree: int, table: dict,
                 validate: bool = True):
        if degree < 1:
            raise InsufficientDegree("moment degree must be at least 1")
        if 2 * degree > presentation.degree_cap:
            raise InsufficientDegree(
                "moment degree %d needs words of degree %d > cap %d"
                % (degree, 2 * degree, presentation.degree_cap))
        self.presentation = presentation
        self.degree = int(degree)
        words = presentation.basis_words(2 * degree)
        fixed = {}
        for w in words:
            c = table.get(w, ZERO)
            c = c if isinstance(c, Scalar) else Scalar(c)
            fixed[w] = c
        if validate:
            extra = set(table) - set(words)
            if extra:
                raise StateAxiomError(
                    "table contains non-basis words: %s"
                    % sorted(extra)[:3])
            if fixed[()] != ONE:
                raise StateAxiomError("state normalization f(1) = 1 fails")
            for w in words:
                wd = presentation.dagger_word(w)
                if fixed[w].conjugate() != fixed.get(wd, ZERO):
                    raise StateAxiomError(
                        "hermitian symmetry fails at word %s"
                        % presentation.word_str(w))
        self.table = fixed

    @classmethod
    def from_function(cls, presentation, degree, fn, validate=True):
        words = presentation.basis_words(2 * degree)
        return cls(presentation, degree, {w: fn(w) for w in words}, validate)

    def evaluate(self, el: AlgebraElement) -> Scalar:
        """f extended linearly; exact."""
        _check_same(self.presentation, el.presentation)
        out = ZERO
        for w, c in el.terms.items():
            v = self.table.get(w)
            if v is None:
                raise InsufficientDegree(
                    "word %s of degree %d exceeds the table degree 2*%d"
                    % (self.presentation.word_str(w), len(w), self.degree))
            if v:
                out = out + c * v
        return out

    def gram(self, d: int | None = None):
        """Exact Gram matrix G[i][j] = f(w_i' w_j) on words of degree <= d."""
        if d is None:
            d = self.degree
        if d > self.degree:
            raise InsufficientDegree(
                "Gram at degree %d needs moments to 2*%d" % (d, d))
        p = self.presentation
        words = p.basis_words(d)
        G = []
        for wi in words:
            wid = p.dagger_word(wi)
            row = []
            for wj in words:
                prod = p.normalize_raw({wid + wj: ONE})
                row.append(self.evaluate(prod))
            G.append(row)
        return words, G


@dataclass
class StateReport:
    hermitian_ok: bool
    normalized: bool
    psd: PsdReport
    cauchy_schwarz_ok: bool
    cauchy_schwarz_samples: int

    @property
    def ok(self) -> bool:
        return (self.hermitian_ok and self.normalized and self.psd.psd
                and self.cauchy_schwarz_ok)

    def __bool__(self):
        return self.ok


def check_state_axioms(f: MomentFunctional, rng=None,
                       samples: int = 25) -> StateReport:
    """Hermitian symmetry and normalization (exact), Gram positivity
    (exact pivot reduction), and Cauchy-Schwarz on sampled pairs (exact).
    """
    p = f.presentation
    hermitian_ok = True
    for w, c in f.table.items():
        if c.conjugate() != f.table.get(p.dagger_word(w), ZERO):
            hermitian_ok = False
            break
    normalized = f.table.get((), ZERO) == ONE

    words, G = f.gram()
    grades = [len(w) for w in words]
    psd = graded_hermitian_reduce(G, grades)

    cs_ok = True
    n_samples = 0
    if rng is not None and psd.psd:
        from .algebra import random_element
        for _ in range(samples):
            a = random_element(p, rng, max_degree=f.degree, max_terms=3)
            b = random_element(p, rng, max_degree=f.degree, max_terms=3)
            fab = f.evaluate(a.dagger() * b)
            faa = f.evaluate(a.dagger() * a)
            fbb = f.evaluate(b.dagger() * b)
            n_samples += 1
            # |f(a'b)|^2 <= f(a'a) f(b'b), all sides exact rationals
            lhs = fab.abs2()
            rhs = (faa * fbb).re
            if lhs > rhs:
                cs_ok = False
                break
    return StateReport(hermitian_ok, normalized, psd, cs_ok, n_samples)


# -- shipped states ------------------------------------------------------------


def dirac_state(presentation: Presentation, degree: int) -> MomentFunctional:
    """f(w) = 1 if w is empty else 0.

    On commutative polynomial presentations this is evaluation at the
    origin; on the normal-ordered oscillator presentation it is the
    vacuum vector expectation, since every nonempty normal word
    annihilates or escapes the vacuum.
    """
    return MomentFunctional.from_function(
        presentation, degree, lambda w: ONE if not w else ZERO)


def fock_state(presentation: Presentation, degree: int) -> MomentFunctional:
    """Vacuum expectation on the normal-ordered oscillator presentation."""
    return dirac_state(presentation, degree)


def double_factorial_moments(max_power: int):
    """m_0..m_max with m_{2k} = (2k-1)!! by recurrence, odd moments 0."""
    ms = [Rational(1)]
    for k in range(1, max_power + 1):
        ms.append(Rational(0) if k % 2 else ms[k - 2] * (k - 1))
    return ms


def gaussian_state(presentation: Presentation, degree: int) -> MomentFunctional:
    """Standard Gaussian moments on a single hermitian generator:
    f(x^(2k)) = (2k-1)!!, odd moments zero."""
    if len(presentation.generators) != 1:
        raise StateAxiomError(
            "the Gaussian moment table needs a single-generator presentation")
    ms = double_factorial_moments(2 * degree)
    return MomentFunctional.from_function(
        presentation, degree, lambda w: Scalar(ms[len(w)]))


def from_numeric(presentation: Presentation, degree: int, values: dict,
                 snap_tol: float = 1e-9, max_denominator: int = 10 ** 6,
                 validate: bool = True) -> MomentFunctional:
    """Build an exact table from floating moments.

    Each value is snapped to the nearest rational with denominator up to
    max_denominator; the snap must land within snap_tol or the value is
    rejected.  The table is then hermitian-symmetrized exactly (averaging
    w against the conjugate at w'), so tiny float asymmetries cannot fail
    the state axioms.
    """
    def snap(x: float) -> Rational:
        r = Rational(x).limit_denominator(max_denominator)
        if abs(float(r) - x) > snap_tol:
            raise StateAxiomError(
                "moment %r does not snap to a rational within %g"
                % (x, snap_tol))
        return r

    raw = {}
    for w, v in values.items():
        if w and isinstance(w[0], str):
            w = presentation._word(tuple(w))
        v = complex(v)
        raw[w] = Scalar(snap(v.real), snap(v.imag))
    half = Scalar(Rational(1, 2))
    table = {}
    for w in presentation.basis_words(2 * degree):
        wd = presentation.dagger_word(w)
        a = raw.get(w, ZERO)
        b = raw.get(wd, ZERO)
        if w not in raw and wd not in raw:
            table[w] = ZERO
        elif wd not in raw:
            table[w] = a
        elif w not in raw:
            table[w] = b.conjugate()
        else:
            table[w] = (a + b.conjugate()) * half
    return MomentFunctional(presentation, degree, table, validate)


# -- quadrature-backed extension on one commutative variable --------------------


def gauss_hermite_fraction_expectation(frac, nodes: int = 80) -> complex:
    """Expectation of a one-variable fraction against the standard
    Gaussian weight, by Gauss-Hermite quadrature (probabilists' weight).

    This demonstrates extending the Gaussian state from polynomials to
    fractions with strictly positive denominators; it is a quadrature
    demonstration on the commutative preset, not a general extension
    algorithm.  Exact for polynomial integrands of degree < 2*nodes.
    """
    import numpy as np

    p = frac.presentation
    if len(p.generators) != 1 or not p.commutative:
        raise StateAxiomError(
            "quadrature extension is only defined on one commutative variable")
    xs, ws = np.polynomial.hermite_e.hermegauss(nodes)
    ws = ws / np.sqrt(2.0 * np.pi)

    def poly_at(el: AlgebraElement, x):
        out = np.zeros_like(x, dtype=complex)
        for w, c in el.terms.items():
            out = out + complex(c.to_complex()) * x ** len(w)
        return out

    num = poly_at(frac.num, xs)
    den = np.ones_like(xs, dtype=complex)
    for p_el in frac.den.ps:
        fv = poly_at(p_el, xs)
        den = den * (1.0 + np.conj(fv) * fv)
    return complex(np.sum(ws * num / den))
