"""Banded operators on l2(N) with exact band formulas.

A BandedOperator stores finitely many bands: offset k maps to a closed
coefficient formula c_k(n), and the action is (A xi)_n = sum_k c_k(n) *
xi_{n+k}, i.e. matrix entry [n, n+k] = c_k(n).  Band formulas live in the
exact radical-formula algebra, so adjoints, sums, and products are
computed symbolically and identities between operators are decidable as
data equality; floating point enters only when a formula is evaluated at
a concrete index.

Truncated inversion of 1 + A*A uses the positive-definite banded solver
and reports the global residual recomputed from the band formulas; the
error bound ||x - x_true|| <= residual holds because the inverse has
norm at most 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .algebra import AlgebraElement, Presentation, _check_same
from .errors import PresentationError, TruncationLimit
from .formulas import Formula, QPoly
from .localization import SProduct, ore_solve_left


class BandedOperator:
    """Finitely many bands of closed formulas; immutable."""

    __slots__ = ("bands",)

    def __init__(self, bands: dict):
        self.bands = {int(k): f for k, f in bands.items() if not f.is_zero()}

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls) -> "BandedOperator":
        return cls({})

    @classmethod
    def identity(cls) -> "BandedOperator":
        return cls({0: Formula.const(1)})

    @classmethod
    def diagonal(cls, formula: Formula) -> "BandedOperator":
        return cls({0: formula})

    @classmethod
    def weighted_shift(cls, offset: int, formula: Formula) -> "BandedOperator":
        return cls({offset: formula})

    @classmethod
    def annihilation(cls) -> "BandedOperator":
        """A e_j = sqrt(j) e_{j-1}: band +1 with c(n) = sqrt(n+1)."""
        return cls({1: Formula.sqrt(QPoly.of(1, 1))})

    @classmethod
    def creation(cls) -> "BandedOperator":
        """A e_j = sqrt(j+1) e_{j+1}: band -1 with c(n) = sqrt(n)."""
        return cls({-1: Formula.sqrt(QPoly.of(0, 1))})

    # -- structure ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.bands

    @property
    def min_offset(self) -> int:
        return min(self.bands) if self.bands else 0

    @property
    def max_offset(self) -> int:
        return max(self.bands) if self.bands else 0

    @property
    def bandwidth(self) -> int:
        if not self.bands:
            return 0
        return max(abs(k) for k in self.bands)

    def band(self, k: int) -> Formula:
        return self.bands.get(k, Formula.zero())

    def entry(self, row: int, col: int) -> complex:
        if row < 0 or col < 0:
            return 0j
        f = self.bands.get(col - row)
        return f.eval(row) if f is not None else 0j

    # -- action ----------------------------------------------------------------------

    def apply(self, xi) -> np.ndarray:
        """Exact banded action on a finitely supported vector.

        The input is zero-extended conceptually; the output has length
        len(xi) + max(0, -min_offset) so no support is lost.
        """
        xi = np.asarray(xi, dtype=complex)
        L = len(xi)
        out_len = L + max(0, -self.min_offset)
        out = np.zeros(out_len, dtype=complex)
        for k, f in sorted(self.bands.items()):
            lo = max(0, -k)
            hi = min(out_len, L - k)
            for n in range(lo, hi):
                x = xi[n + k]
                if x:
                    out[n] += f.eval(n) * x
        return out

    def matrix(self, N: int) -> np.ndarray:
        """Dense N x N truncation."""
        M = np.zeros((N, N), dtype=complex)
        for k, f in self.bands.items():
            for n in range(max(0, -k), min(N, N - k)):
                M[n, n + k] = f.eval(n)
        return M

    # -- adjoint / sum / product -------------------------------------------------------

    def adjoint(self) -> "BandedOperator":
        """Band j of the adjoint is conj(c_{-j}(n + j))."""
        return BandedOperator(
            {-k: f.shift(-k).conj() for k, f in self.bands.items()})

    def __add__(self, o: "BandedOperator") -> "BandedOperator":
        acc = dict(self.bands)
        for k, f in o.bands.items():
            prev = acc.get(k)
            f = f + prev if prev is not None else f
            if f.is_zero():
                acc.pop(k, None)
            else:
                acc[k] = f
        return BandedOperator(acc)

    def __neg__(self) -> "BandedOperator":
        return BandedOperator({k: -f for k, f in self.bands.items()})

    def __sub__(self, o: "BandedOperator") -> "BandedOperator":
        return self + (-o)

    def scale(self, c) -> "BandedOperator":
        return BandedOperator({k: f.scale(c) for k, f in self.bands.items()})

    def __mul__(self, o: "BandedOperator") -> "BandedOperator":
        """Composition: (AB)[n, n+k] = sum_j a_j(n) b_{k-j}(n+j)."""
        acc = {}
        for j, fa in self.bands.items():
            for l, fb in o.bands.items():
                k = j + l
                term = fa.mul_shifted(fb, j)
                prev = acc.get(k)
                term = term + prev if prev is not None else term
                acc[k] = term
        return BandedOperator(acc)

    # -- identity --------------------------------------------------------------------------

    def key(self):
        return tuple((k, f.key()) for k, f in sorted(self.bands.items()))

    def __eq__(self, o):
        return isinstance(o, BandedOperator) and self.bands == o.bands

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if not self.bands:
            return "BandedOperator(0)"
        return "BandedOperator({%s})" % ", ".join(
            "%+d: %r" % (k, f) for k, f in sorted(self.bands.items()))


def strong_sum(a: BandedOperator, b: BandedOperator) -> BandedOperator:
    """On the banded class the strong sum restricts to the pointwise sum
    of band formulas."""
    return a + b


def strong_product(a: BandedOperator, b: BandedOperator) -> BandedOperator:
    """On the banded class the strong product restricts to composition."""
    return a * b


# -- assignments -----------------------------------------------------------------


class FockAssignment:
    """A map from presentation generators to banded operators.

    Validation is symbolic: the adjoint generator must carry the exact
    band-formula adjoint, and every rewrite rule must hold as an identity
    of band formulas, so the relations hold on every finitely supported
    vector with no truncation-boundary caveat.
    """

    def __init__(self, presentation: Presentation, ops: dict,
                 validate: bool = True):
        self.presentation = presentation
        fixed = {}
        for name in presentation.generators:
            if name not in ops:
                raise PresentationError(
                    "no operator assigned to generator %r" % name)
            fixed[name] = ops[name]
        self.ops = fixed
        self._word_cache = {(): BandedOperator.identity()}
        self._el_cache = {}
        if validate:
            self._validate()

    def _validate(self):
        p = self.presentation
        for gi, name in enumerate(p.generators):
            partner = p.generators[p.dagger_map[gi]]
            if self.ops[partner] != self.ops[name].adjoint():
                raise PresentationError(
                    "operator for %r is not the adjoint of the operator "
                    "for %r" % (partner, name))
        for rule in p.rules:
            lhs_op = self._word_operator(rule.lhs)
            rhs_op = BandedOperator.zero()
            for w, c in rule.rhs.items():
                rhs_op = rhs_op + self._word_operator(w).scale(c)
            if lhs_op != rhs_op:
                raise PresentationError(
                    "assignment violates the relation at %s"
                    % p.word_str(rule.lhs))

    def operator(self, gen_name: str) -> BandedOperator:
        return self.ops[gen_name]

    def _word_operator(self, w) -> BandedOperator:
        cached = self._word_cache.get(w)
        if cached is None:
            head = self.ops[self.presentation.generators[w[0]]]
            cached = head * self._word_operator(w[1:])
            self._word_cache[w] = cached
        return cached

    def operator_of(self, el: AlgebraElement) -> BandedOperator:
        """The banded operator of an algebra element, linear over words."""
        _check_same(self.presentation, el.presentation)
        key = el.key()
        cached = self._el_cache.get(key)
        if cached is None:
            cached = BandedOperator.zero()
            for w, c in el.sorted_terms():
                cached = cached + self._word_operator(w).scale(c)
            self._el_cache[key] = cached
        return cached


def fock_assignment(presentation: Presentation) -> FockAssignment:
    """The weighted-shift assignment on the normal-ordered oscillator
    presentation: the annihilator symbol acts by the annihilation shift
    and its adjoint generator by the creation shift."""
    p = presentation
    if len(p.generators) != 2:
        raise PresentationError(
            "the shift assignment needs the two oscillator generators")
    if any(p.dagger_map[gi] == gi for gi in range(2)):
        raise PresentationError(
            "the shift assignment needs a non-hermitian generator pair")
    # the presentation lists the creation symbol first (term order), and
    # its rule normal-orders annihilator-after-creator products
    ops = {
        p.generators[0]: BandedOperator.creation(),
        p.generators[1]: BandedOperator.annihilation(),
    }
    return FockAssignment(p, ops)


def factor_operator(assignment: FockAssignment,
                    p_el: AlgebraElement) -> BandedOperator:
    """1 + A*A for A the operator of the factor parameter."""
    A = assignment.operator_of(p_el)
    return BandedOperator.identity() + A.adjoint() * A


def sproduct_operator(assignment: FockAssignment, s: SProduct) -> BandedOperator:
    """The left-to-right product of the factor operators of s."""
    out = BandedOperator.identity()
    for p_el in s.ps:
        out = out * factor_operator(assignment, p_el)
    return out


# -- truncated inversion of 1 + A*A ------------------------------------------------


@dataclass(frozen=True)
class InversionResult:
    x: np.ndarray
    residual: float
    truncation_size: int


def one_plus_AstarA(A: BandedOperator) -> BandedOperator:
    return BandedOperator.identity() + A.adjoint() * A


def _banded_cholesky_solve(M: BandedOperator, rhs: np.ndarray) -> np.ndarray:
    """Solve the N x N truncation of the hermitian positive definite
    banded operator M against rhs (length N)."""
    N = len(rhs)
    K = M.max_offset
    if K == 0:
        f = M.bands[0]
        d = np.array([f.eval(n) for n in range(N)], dtype=complex)
        return rhs / d
    ab = np.zeros((K + 1, N), dtype=complex)
    for k in range(0, K + 1):
        f = M.bands.get(k)
        if f is None:
            continue
        row = K - k
        for n in range(0, N - k):
            ab[row, n + k] = f.eval(n)
    return scipy.linalg.solveh_banded(ab, rhs, lower=False)


def invert_one_plus_AstarA(A: BandedOperator, y, tol: float,
                           start_size: int | None = None,
                           size_cap: int = 4096) -> InversionResult:
    """Solve (1 + A*A) x = y on growing truncations until the recomputed
    global residual meets tol.

    The residual is ||(1+A*A) x - y|| with x zero-extended, evaluated
    through the band formulas, so the contraction bound
    ||x - x_true|| <= residual is a guarantee, not a heuristic.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    y = np.asarray(y, dtype=complex)
    M = one_plus_AstarA(A)
    L = len(y)
    K = max(M.bandwidth, 1)
    N = start_size or max(2 * L, L + 4 * K, 16)
    N = min(N, size_cap)
    while True:
        rhs = np.zeros(N, dtype=complex)
        rhs[:min(L, N)] = y[:min(L, N)]
        x = _banded_cholesky_solve(M, rhs)
        z = M.apply(x)
        m = max(len(z), L)
        r = np.zeros(m, dtype=complex)
        r[:len(z)] = z
        r[:L] -= y
        residual = float(np.linalg.norm(r))
        if residual <= tol:
            return InversionResult(x, residual, N)
        if N >= size_cap:
            raise TruncationLimit(
                "residual %.3g > tol %.3g at the size cap %d"
                % (residual, tol, size_cap))
        N = min(2 * N, size_cap)


@dataclass(frozen=True)
class ChainSolveResult:
    x: np.ndarray
    residual: float
    truncation_sizes: tuple
    inner_residuals: tuple


def chain_solve(assignment: FockAssignment, s: SProduct, y, tol: float,
                size_cap: int = 4096) -> ChainSolveResult:
    """Solve pi(s) x = y by chaining factor inversions.

    pi(s) factors as the product of the operators 1 + A_i*A_i, so x is
    obtained by inverting the factors left to right; the final residual
    is recomputed against the full product operator and inner tolerances
    are tightened until it meets tol.
    """
    y = np.asarray(y, dtype=complex)
    if s.is_one():
        return ChainSolveResult(y, 0.0, (), ())
    ops = [assignment.operator_of(p) for p in s.ps]
    total = sproduct_operator(assignment, s)
    inner_tol = tol / (10 * len(ops))
    last = None
    for _ in range(5):
        z = y
        sizes = []
        inner = []
        for A in ops:
            res = invert_one_plus_AstarA(A, z, inner_tol, size_cap=size_cap)
            z = res.x
            sizes.append(res.truncation_size)
            inner.append(res.residual)
        v = total.apply(z)
        m = max(len(v), len(y))
        r = np.zeros(m, dtype=complex)
        r[:len(v)] = v
        r[:len(y)] -= y
        residual = float(np.linalg.norm(r))
        last = ChainSolveResult(z, residual, tuple(sizes), tuple(inner))
        if residual <= tol:
            return last
        inner_tol /= 100
    raise TruncationLimit(
        "chained residual %.3g did not reach tol %.3g" % (last.residual, tol))


# -- probes -----------------------------------------------------------------------


@dataclass
class ProbeItem:
    label: str
    residual: float
    truncation: int
    passed: bool
    extra: dict = field(default_factory=dict)


@dataclass
class ProbeReport:
    probe: str
    tol: float
    items: list

    @property
    def ok(self) -> bool:
        return all(it.passed for it in self.items)

    def __bool__(self):
        return self.ok

    def as_dict(self) -> dict:
        return {
            "probe": self.probe,
            "tol": self.tol,
            "pass": self.ok,
            "items": [
                {"label": it.label, "residual": it.residual,
                 "truncation_size": it.truncation, "pass": it.passed,
                 **it.extra}
                for it in self.items
            ],
        }


def pi_s_surjectivity_probe(assignment: FockAssignment, s: SProduct,
                            targets, tol: float,
                            size_cap: int = 4096) -> ProbeReport:
    """For each target y, find x with ||pi(s) x - y|| <= tol."""
    items = []
    for idx, y in enumerate(targets):
        label = "target_%d" % idx
        try:
            res = chain_solve(assignment, s, y, tol, size_cap)
            items.append(ProbeItem(label, res.residual,
                                   max(res.truncation_sizes, default=0),
                                   res.residual <= tol))
        except TruncationLimit as exc:
            items.append(ProbeItem(label, float("inf"), size_cap, False,
                                   {"error": str(exc)}))
    return ProbeReport("surjectivity", tol, items)


def lemma_pis_equals_S_check(assignment: FockAssignment, s: SProduct,
                             samples) -> ProbeReport:
    """Compare the operator of the normalized product s.value against the
    product of the factor operators: the band formulas must be equal as
    data, and the two actions must agree bit for bit on every sample."""
    route_a = assignment.operator_of(s.value)
    route_b = sproduct_operator(assignment, s)
    formulas_equal = route_a == route_b
    items = [ProbeItem("band_formulas", 0.0, 0, formulas_equal)]
    for idx, xi in enumerate(samples):
        va = route_a.apply(xi)
        vb = route_b.apply(xi)
        same = va.shape == vb.shape and bool(np.all(va == vb))
        gap = 0.0 if same else float(
            np.linalg.norm(
                np.resize(va, max(len(va), len(vb)))
                - np.resize(vb, max(len(va), len(vb)))))
        items.append(ProbeItem("sample_%d" % idx, gap, len(np.asarray(xi)),
                               same))
    return ProbeReport("composite_equals_product", 0.0, items)


def core_density_probe(assignment: FockAssignment, a: AlgebraElement,
                       s: SProduct, xi, tol: float,
                       size_cap: int = 4096) -> ProbeReport:
    """Approximate xi from pi(s) applied to finitely supported vectors in
    the graph norm of the operator of a."""
    xi = np.asarray(xi, dtype=complex)
    Aop = assignment.operator_of(a)
    total = sproduct_operator(assignment, s)
    items = []
    N = max(8, min(len(xi), size_cap))
    best = None
    while True:
        try:
            res = chain_solve(assignment, s, xi[:N], tol / 4, size_cap)
        except TruncationLimit:
            break
        v = total.apply(res.x)
        m = max(len(v), len(xi))
        diff = np.zeros(m, dtype=complex)
        diff[:len(v)] = v
        diff[:len(xi)] -= xi
        graph_sq = float(np.linalg.norm(diff)) ** 2
        adiff = Aop.apply(diff)
        graph_sq += float(np.linalg.norm(adiff)) ** 2
        dist = graph_sq ** 0.5
        if best is None or dist < best[0]:
            best = (dist, N)
        if dist <= tol or N >= min(len(xi), size_cap):
            break
        N = min(2 * N, size_cap, len(xi))
    if best is None:
        items.append(ProbeItem("graph_distance", float("inf"), size_cap,
                               False))
    else:
        items.append(ProbeItem("graph_distance", best[0], best[1],
                               best[0] <= tol))
    return ProbeReport("core_density", tol, items)


# -- fraction extension -------------------------------------------------------------


@dataclass
class ExtensionResult:
    vector: np.ndarray
    inverse_residual: float
    truncation_sizes: tuple
    witness_found: bool
    witness_vector: np.ndarray | None = None
    route_gap: float | None = None


def extend_representation(assignment: FockAssignment, frac, xi, tol: float,
                          budget=None, size_cap: int = 4096,
                          cross_check: bool = True) -> ExtensionResult:
    """Evaluate the extended representation on a right fraction [a, s]:
    the primary route solves pi(s) u = xi and applies the operator of a.

    When a left witness t a = b s is found within budget, the alternate
    route solves pi(t) v = pi(b) xi and the gap between the two routes is
    reported; the containment of the two compositions predicts agreement
    up to the solve tolerances.
    """
    from .localization import DEFAULT_BUDGET

    budget = budget or DEFAULT_BUDGET
    xi = np.asarray(xi, dtype=complex)
    a, s = frac.num, frac.den
    sol = chain_solve(assignment, s, xi, tol, size_cap)
    vector = assignment.operator_of(a).apply(sol.x)

    witness_found = False
    witness_vector = None
    route_gap = None
    if cross_check:
        solved = ore_solve_left(a, s, budget)
        if solved.found:
            witness_found = True
            w = solved.witness
            bxi = assignment.operator_of(w.b).apply(xi)
            alt = chain_solve(assignment, w.t, bxi, tol, size_cap)
            witness_vector = alt.x
            m = max(len(vector), len(witness_vector))
            gap = np.zeros(m, dtype=complex)
            gap[:len(vector)] = vector
            gap[:len(witness_vector)] -= witness_vector
            route_gap = float(np.linalg.norm(gap))
    return ExtensionResult(vector, sol.residual, sol.truncation_sizes,
                           witness_found, witness_vector, route_gap)
