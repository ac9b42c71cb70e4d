"""Independent reference implementations used by the tests.

Everything here recomputes expected values through a different algorithm
than the package: rewriting by rightmost-redex worklist instead of
memoized leftmost recursion, commutative fractions as explicit rational
functions, dense numpy linear algebra instead of banded solvers.  Tests
freeze or compare against these, never against the code under test.
"""

from fractions import Fraction as Rational

import numpy as np

from ores.scalars import Scalar

ZERO = Scalar(0)


# -- naive rewriting ---------------------------------------------------------------


def _find_redex(p, w):
    """Rightmost rule match inside w; returns (position, rule) or None."""
    best = None
    for rule in p.rules:
        L = len(rule.lhs)
        for i in range(len(w) - L, -1, -1):
            if w[i:i + L] == rule.lhs:
                if best is None or i > best[0]:
                    best = (i, rule)
                break
    return best


def naive_normal_form(p, terms: dict) -> dict:
    """Normalize a raw word->coef dict by worklist rewriting."""
    out = {}
    work = [(tuple(w), c) for w, c in terms.items()]
    while work:
        w, c = work.pop()
        if not c:
            continue
        red = _find_redex(p, w)
        if red is None:
            acc = out.get(w, ZERO) + c
            if acc:
                out[w] = acc
            else:
                out.pop(w, None)
        else:
            i, rule = red
            L = len(rule.lhs)
            for w2, c2 in rule.rhs.items():
                work.append((w[:i] + w2 + w[i + L:], c * c2))
    return out


def naive_mul_terms(a_terms: dict, b_terms: dict) -> dict:
    out = {}
    for wa, ca in a_terms.items():
        for wb, cb in b_terms.items():
            w = tuple(wa) + tuple(wb)
            c = ca * cb
            acc = out.get(w, ZERO) + c
            if acc:
                out[w] = acc
            else:
                out.pop(w, None)
    return out


def naive_product_normal_form(p, elements) -> dict:
    """Normal form of a product of elements, computed naively."""
    terms = {(): Scalar(1)}
    for el in elements:
        terms = naive_mul_terms(terms, el.terms)
    return naive_normal_form(p, terms)


def same_terms(terms: dict, el) -> bool:
    return {tuple(w): c for w, c in terms.items() if c} == dict(el.terms)


def witness_identity_holds(a, s, b, t) -> bool:
    """Re-verify a*t == s*b by naive expansion (right Ore identity)."""
    p = a.presentation
    lhs = naive_product_normal_form(p, (a, t.value))
    rhs = naive_product_normal_form(p, (s.value, b))
    return lhs == rhs


def left_witness_identity_holds(a, s, b, t) -> bool:
    """Re-verify t*a == b*s by naive expansion (left Ore identity)."""
    p = a.presentation
    lhs = naive_product_normal_form(p, (t.value, a))
    rhs = naive_product_normal_form(p, (b, s.value))
    return lhs == rhs


# -- commutative rational functions ------------------------------------------------------


class XPoly:
    """One-variable polynomial over the Gaussian rationals, as a degree
    map; the oracle for the single-generator commutative preset."""

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {d: c for d, c in (coeffs or {}).items() if c}

    @classmethod
    def from_element(cls, el) -> "XPoly":
        out = {}
        for w, c in el.terms.items():
            out[len(w)] = out.get(len(w), ZERO) + c
        return cls(out)

    def __add__(self, o):
        out = dict(self.coeffs)
        for d, c in o.coeffs.items():
            out[d] = out.get(d, ZERO) + c
        return XPoly(out)

    def __mul__(self, o):
        out = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in o.coeffs.items():
                out[d1 + d2] = out.get(d1 + d2, ZERO) + c1 * c2
        return XPoly(out)

    def conj(self):
        return XPoly({d: c.conjugate() for d, c in self.coeffs.items()})

    def __eq__(self, o):
        return self.coeffs == o.coeffs

    def __hash__(self):
        raise TypeError("unhashable")


X_ONE = XPoly({0: Scalar(1)})


def fraction_as_rational_function(f):
    """(numerator, denominator) of a fraction over the x preset."""
    num = XPoly.from_element(f.num)
    den = X_ONE
    for p_el in f.den.ps:
        q = XPoly.from_element(p_el)
        den = den * (X_ONE + q.conj() * q)
    return num, den


def rational_functions_equal(f, g) -> bool:
    nf, df = fraction_as_rational_function(f)
    ng, dg = fraction_as_rational_function(g)
    return nf * dg == ng * df


def rational_function_dagger_equal(f, g) -> bool:
    """Does conj(f) equal g as a rational function?  Denominators of
    S-fractions are conjugation invariant, so only numerators flip."""
    nf, df = fraction_as_rational_function(f)
    ng, dg = fraction_as_rational_function(g)
    return nf.conj() * dg == ng * df


# -- dense operator oracles ----------------------------------------------------------------


def dense_matrix(op, N: int) -> np.ndarray:
    """Entrywise dense truncation; goes through op.entry only."""
    return np.array([[op.entry(i, j) for j in range(N)] for i in range(N)],
                    dtype=complex)


def dense_apply(op, xi, N: int) -> np.ndarray:
    v = np.zeros(N, dtype=complex)
    v[:len(xi)] = xi
    return dense_matrix(op, N) @ v


def dense_one_plus_AstarA_solve(A, y, N: int) -> np.ndarray:
    Ad = dense_matrix(A, N)
    M = np.eye(N, dtype=complex) + Ad.conj().T @ Ad
    rhs = np.zeros(N, dtype=complex)
    rhs[:len(y)] = y
    return np.linalg.solve(M, rhs)


def dense_annihilation(N: int) -> np.ndarray:
    M = np.zeros((N, N), dtype=complex)
    for n in range(N - 1):
        M[n, n + 1] = np.sqrt(n + 1.0)
    return M


def dense_creation(N: int) -> np.ndarray:
    return dense_annihilation(N).conj().T


# -- classical moment data ---------------------------------------------------------------


def double_factorial(k: int) -> int:
    if k <= 0:
        return 1
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def gaussian_moment(k: int) -> int:
    return 0 if k % 2 else double_factorial(k - 1)


def hermite_jacobi(d: int) -> np.ndarray:
    """The d x d Jacobi matrix of the unit Gaussian: zero diagonal,
    off-diagonals sqrt(1..d-1) from the Hermite three-term recurrence."""
    J = np.zeros((d, d))
    for k in range(d - 1):
        J[k, k + 1] = J[k + 1, k] = np.sqrt(k + 1.0)
    return J


# -- exact dense linear algebra (fractions) ----------------------------------------------


def exact_rank(rows) -> int:
    """Row rank of a matrix of Scalars by fraction Gaussian elimination."""
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    col = 0
    while rank < len(m) and col < ncols:
        piv = None
        for r in range(rank, len(m)):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                factor = m[r][col] / inv
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


def random_scalar_matrix(rng, rows: int, cols: int, span: int = 3):
    return [[Scalar(Rational(rng.randint(-span, span)),
                    Rational(rng.randint(-span, span)))
             for _ in range(cols)] for _ in range(rows)]
