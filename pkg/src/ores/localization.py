"""Right fractions over the multiplicative set of shifted squares.

The denominator set S consists of finite products of elements 1 + p'p
(p any algebra element, ' the dagger).  Membership in S is certified
syntactically: an SProduct carries its factor list, and products of
SProducts concatenate factor lists.  A right fraction [a, s] denotes
a s^{-1} once the localization exists; here everything is witness
driven and budgeted, and "not found within budget" is a first-class
outcome rather than an error.

The witness solver enumerates candidate denominators t deterministically
(the empty product, the query denominator itself, then products of
1 + p'p over monomials and pairwise integer combinations of monomials)
and decides membership of a*t in s*A by exact linear algebra over the
span of bounded-degree words, with a floating point projection as a
cheap prefilter.  Returned witnesses are always re-verified exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, Presentation, _check_same, is_regular_up_to
from .errors import DegreeOverflow, IrregularDenominator, OreWitnessNotFound
from .linalg import RowSpace
from .scalars import ONE, Scalar


@dataclass(frozen=True)
class OreBudget:
    """Search budget for witness enumeration.

    max_factors       most factors 1 + p'p in a candidate denominator t
    max_degree        highest degree of p in candidate factors
    degree_slack      extra degree allowed for the solved numerator b
    regularity_depth  depth of the bounded zero-divisor check applied to
                      denominators entering Fraction
    """
    max_factors: int = 2
    max_degree: int = 2
    degree_slack: int = 0
    regularity_depth: int = 2


DEFAULT_BUDGET = OreBudget()


class SProduct:
    """An element of S, stored as the list of its factor parameters p.

    The value is the normalized product of the factors 1 + p'p, in
    order.  The dagger reverses the factor list; each factor is
    hermitian, so membership in S is preserved syntactically.
    """

    __slots__ = ("presentation", "ps", "_value")

    def __init__(self, presentation: Presentation, ps=()):
        self.presentation = presentation
        ps = tuple(ps)
        for p in ps:
            _check_same(presentation, p.presentation)
        self.ps = ps
        self._value = None

    @classmethod
    def one(cls, presentation: Presentation) -> "SProduct":
        return cls(presentation, ())

    @property
    def value(self) -> AlgebraElement:
        if self._value is None:
            cache = self.presentation._sproduct_value_cache
            key = self.key()
            val = cache.get(key)
            if val is None:
                val = self.presentation.one()
                for p in self.ps:
                    val = val * factor_value(p)
                cache[key] = val
            self._value = val
        return self._value

    def key(self):
        return tuple(p.key() for p in self.ps)

    def dagger(self) -> "SProduct":
        return SProduct(self.presentation, tuple(reversed(self.ps)))

    def __mul__(self, other):
        if not isinstance(other, SProduct):
            return NotImplemented
        _check_same(self.presentation, other.presentation)
        return SProduct(self.presentation, self.ps + other.ps)

    def is_one(self) -> bool:
        return not self.ps

    def degree(self) -> int:
        return self.value.degree()

    def __eq__(self, other):
        if not isinstance(other, SProduct):
            return NotImplemented
        return (self.presentation == other.presentation
                and self.key() == other.key())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if not self.ps:
            return "<S: 1>"
        return "<S: %s>" % " * ".join("(1 + (%s)'(%s))" % (p, p)
                                      for p in self.ps)


def factor_value(p: AlgebraElement) -> AlgebraElement:
    """The normalized value 1 + p'p of a single factor."""
    return p.presentation.one() + p.dagger() * p


def check_denominator(s: SProduct, depth: int):
    """Bounded regularity check for a denominator; raises on a witness.

    The depth is clamped so the product s * witness stays under the
    degree cap; a clamp to zero degenerates to checking s != 0, which is
    the honest bounded statement available at that degree.
    """
    p = s.presentation
    val = s.value
    if val.is_zero():
        raise IrregularDenominator("denominator is zero")
    room = p.degree_cap - val.degree()
    use = min(depth, room)
    if use < 0:
        raise DegreeOverflow("denominator degree exceeds the degree cap")
    res = is_regular_up_to(val, use)
    if not res.regular:
        raise IrregularDenominator(
            "denominator has a zero divisor at depth %d: %s"
            % (use, res.witness))
    return res


class Fraction:
    """A right fraction [a, s] with a in the algebra and s in S."""

    __slots__ = ("num", "den")

    def __init__(self, num: AlgebraElement, den: SProduct,
                 regularity_depth: int = DEFAULT_BUDGET.regularity_depth,
                 _checked=False):
        _check_same(num.presentation, den.presentation)
        if not _checked and not den.is_one():
            check_denominator(den, regularity_depth)
        self.num = num
        self.den = den

    @property
    def presentation(self) -> Presentation:
        return self.num.presentation

    def key(self):
        return (self.num.key(), self.den.key())

    def __repr__(self):
        return "[%s | %s]" % (self.num, self.den)


def embed(a: AlgebraElement) -> Fraction:
    """The canonical map a -> [a, 1]."""
    return Fraction(a, SProduct.one(a.presentation), _checked=True)


@dataclass(frozen=True)
class OreWitness:
    """Witness (b, t) for the right Ore condition: a t = s b."""
    b: AlgebraElement
    t: SProduct


@dataclass(frozen=True)
class LeftOreWitness:
    """Witness (b, t) for the left Ore condition: t a = b s."""
    b: AlgebraElement
    t: SProduct


@dataclass(frozen=True)
class OreSolveResult:
    witness: object | None
    candidates_tried: int = 0
    budget: OreBudget = DEFAULT_BUDGET

    @property
    def found(self) -> bool:
        return self.witness is not None

    def __bool__(self):
        return self.found


# -- candidate enumeration ---------------------------------------------------


def candidate_factor_parameters(presentation: Presentation, max_degree: int):
    """Deterministic list of parameters p for candidate factors 1 + p'p:

    all irreducible monomials of degree 1..max_degree in deglex order,
    then pairwise sums and differences of those monomials.
    """
    cached = presentation._candidate_cache.get(max_degree)
    if cached is not None:
        return cached
    words = [w for w in presentation.basis_words(max_degree) if w]
    mons = [AlgebraElement(presentation, {w: ONE}, _trusted=True)
            for w in words]
    ps = list(mons)
    for i in range(len(mons)):
        for j in range(i + 1, len(mons)):
            ps.append(mons[i] + mons[j])
            ps.append(mons[i] - mons[j])
    ps = tuple(ps)
    presentation._candidate_cache[max_degree] = ps
    return ps


def _candidate_denominators(presentation, s: SProduct, budget: OreBudget):
    seen = set()

    def emit(t: SProduct):
        k = t.key()
        if k in seen:
            return None
        seen.add(k)
        return t

    t = emit(SProduct.one(presentation))
    if t is not None:
        yield t
    if s is not None and s.ps:
        t = emit(s)
        if t is not None:
            yield t
    ps = candidate_factor_parameters(presentation, budget.max_degree)
    for count in range(1, budget.max_factors + 1):
        for combo in itertools.product(range(len(ps)), repeat=count):
            t = emit(SProduct(presentation, tuple(ps[i] for i in combo)))
            if t is not None:
                yield t


# -- membership in s * span(words of bounded degree) --------------------------


class _MulSubspace:
    """The span of { s * w : w irreducible word, deg w <= bound } with a
    float projection prefilter and a lazily built exact row space."""

    def __init__(self, presentation, s_value: AlgebraElement, bound: int):
        self.presentation = presentation
        self.s_value = s_value
        self.bound = bound
        self.basis = presentation.basis_words(bound)
        self.target = presentation.basis_words(bound + max(s_value.degree(), 0))
        self.index = {w: i for i, w in enumerate(self.target)}
        self.products = []
        cols = []
        for w in self.basis:
            wel = AlgebraElement(presentation, {w: ONE}, _trusted=True)
            prod = s_value * wel
            self.products.append(prod)
            vec = np.zeros(len(self.target), dtype=complex)
            for w2, c in prod.terms.items():
                vec[self.index[w2]] = c.to_complex()
            cols.append(vec)
        mat = np.column_stack(cols) if cols else np.zeros((len(self.target), 0))
        self._q, _ = np.linalg.qr(mat, mode="reduced")
        self._rowspace = None

    def _vector(self, el: AlgebraElement):
        vec = [Scalar(0)] * len(self.target)
        for w, c in el.terms.items():
            i = self.index.get(w)
            if i is None:
                return None
            vec[i] = c
        return vec

    def _float_vector(self, el: AlgebraElement):
        vec = np.zeros(len(self.target), dtype=complex)
        for w, c in el.terms.items():
            i = self.index.get(w)
            if i is None:
                return None
            vec[i] = c.to_complex()
        return vec

    def maybe_member(self, el: AlgebraElement) -> bool:
        """Fast float check; False means certainly not in the span."""
        fv = self._float_vector(el)
        if fv is None:
            return False
        norm = np.linalg.norm(fv)
        if norm == 0:
            return True
        resid = fv - self._q @ (self._q.conj().T @ fv)
        return np.linalg.norm(resid) <= 1e-9 * max(1.0, norm)

    def solve(self, el: AlgebraElement) -> AlgebraElement | None:
        """Exact b with s*b = el and deg b <= bound, or None."""
        vec = self._vector(el)
        if vec is None:
            return None
        if self._rowspace is None:
            rs = RowSpace(len(self.target))
            for prod in self.products:
                pv = [Scalar(0)] * len(self.target)
                for w, c in prod.terms.items():
                    pv[self.index[w]] = c
                rs.add(pv)
            self._rowspace = rs
        coeffs = self._rowspace.represent(vec)
        if coeffs is None:
            return None
        raw = {w: c for w, c in zip(self.basis, coeffs) if c}
        return self.presentation.normalize_raw(raw)


def _subspace(presentation, s_value, bound) -> _MulSubspace:
    key = (s_value.key(), bound)
    sub = presentation._mul_subspaces.get(key)
    if sub is None:
        sub = _MulSubspace(presentation, s_value, bound)
        presentation._mul_subspaces[key] = sub
    return sub


# -- the solver ----------------------------------------------------------------


def ore_solve_right(a: AlgebraElement, s: SProduct,
                    budget: OreBudget = DEFAULT_BUDGET) -> OreSolveResult:
    """Search for (b, t) with a t = s b, t in S, within the budget.

    The search is deterministic; a Found result is re-verified exactly
    before it is returned.  NotFound only ever means "not within this
    budget".
    """
    p = a.presentation
    _check_same(p, s.presentation)
    if a.is_zero():
        return OreSolveResult(OreWitness(p.zero(), SProduct.one(p)), 0, budget)
    if s.is_one():
        return OreSolveResult(OreWitness(a, SProduct.one(p)), 0, budget)
    s_value = s.value
    if p.commutative:
        # a s = s a exactly, so (b, t) = (a, s) is always a witness
        assert (a * s_value).terms == (s_value * a).terms
        return OreSolveResult(OreWitness(a, s), 0, budget)

    s_deg = s_value.degree()
    room = p.degree_cap - s_deg
    tried = 0
    for t in _candidate_denominators(p, s, budget):
        tried += 1
        try:
            r = a * t.value
        except DegreeOverflow:
            continue
        bound = max(r.degree() - s_deg, 0) + budget.degree_slack
        if bound > room or r.degree() - s_deg > bound:
            continue
        sub = _subspace(p, s_value, bound)
        if not sub.maybe_member(r):
            continue
        b = sub.solve(r)
        if b is None:
            continue
        assert (a * t.value).terms == (s_value * b).terms
        return OreSolveResult(OreWitness(b, t), tried, budget)
    return OreSolveResult(None, tried, budget)


def ore_solve_left(a: AlgebraElement, s: SProduct,
                   budget: OreBudget = DEFAULT_BUDGET) -> OreSolveResult:
    """Search for (b, t) with t a = b s, t in S, within the budget.

    Reduces to the right problem through the dagger: a' t' = s' b'
    daggers to t'' a = b'' s with t'' in S because S is dagger closed.
    """
    res = ore_solve_right(a.dagger(), s.dagger(), budget)
    if not res.found:
        return OreSolveResult(None, res.candidates_tried, budget)
    w = res.witness
    left = LeftOreWitness(w.b.dagger(), w.t.dagger())
    assert (left.t.value * a).terms == (left.b * s.value).terms
    return OreSolveResult(left, res.candidates_tried, budget)


# -- fraction arithmetic ---------------------------------------------------------


def _require_witness(res: OreSolveResult, what: str) -> object:
    if not res.found:
        raise OreWitnessNotFound(
            "%s: no witness within budget (%d candidates tried)"
            % (what, res.candidates_tried))
    return res.witness


def frac_add(lam, f: Fraction, g: Fraction,
             budget: OreBudget = DEFAULT_BUDGET) -> Fraction:
    """lam*f + g via a common denominator: with s1 t = s2 b the sum is
    [lam*a1*t + a2*b, s1*t]."""
    _check_same(f.presentation, g.presentation)
    if not isinstance(lam, Scalar):
        lam = Scalar(lam)
    w = _require_witness(
        ore_solve_right(f.den.value, g.den, budget), "fraction addition")
    num = f.num.scale(lam) * w.t.value + g.num * w.b
    den = f.den * w.t
    return Fraction(num, den, budget.regularity_depth)


def frac_mul(f: Fraction, g: Fraction,
             budget: OreBudget = DEFAULT_BUDGET) -> Fraction:
    """f * g: with a2 t = s1 b the product is [a1*b, s2*t]."""
    _check_same(f.presentation, g.presentation)
    w = _require_witness(
        ore_solve_right(g.num, f.den, budget), "fraction multiplication")
    return Fraction(f.num * w.b, g.den * w.t, budget.regularity_depth)


def frac_dagger(f: Fraction, budget: OreBudget = DEFAULT_BUDGET) -> Fraction:
    """The involution [a, s] -> [1, s'] * [a', 1] = [b, t] where a' t = s' b."""
    if f.den.is_one():
        return Fraction(f.num.dagger(), f.den, _checked=True)
    w = _require_witness(
        ore_solve_right(f.num.dagger(), f.den.dagger(), budget),
        "fraction dagger")
    return Fraction(w.b, w.t, budget.regularity_depth)


@dataclass(frozen=True)
class EqResult:
    """Outcome of a fraction comparison.

    equal    the verdict (meaningful when decided)
    decided  True when a common-denominator witness or commutative
             cross-multiplication settled the question exactly under the
             standing assumptions; False when the budget ran out
    u, v     certificate: num_f*u = num_g*v and den_f*u = den_g*v in S
    """
    equal: bool
    decided: bool
    u: AlgebraElement | None = None
    v: AlgebraElement | None = None

    def __bool__(self):
        return self.equal and self.decided


def eq_fraction(f: Fraction, g: Fraction,
                budget: OreBudget = DEFAULT_BUDGET) -> EqResult:
    """Decide [a,s] = [b,t] via a common denominator.

    With s w = t c in S, equality holds iff a w = b c; in commutative
    presentations this reduces to cross multiplication.  When no common
    denominator witness is found within budget the result is undecided
    and reported as not-equal-up-to-budget.
    """
    _check_same(f.presentation, g.presentation)
    p = f.presentation
    a, s = f.num, f.den
    b, t = g.num, g.den
    if p.commutative:
        equal = (a * t.value).terms == (b * s.value).terms
        return EqResult(equal, True, t.value, s.value)
    if s.key() == t.key():
        # same syntactic denominator: compare numerators directly
        return EqResult(a.terms == b.terms, True, p.one(), p.one())
    res = ore_solve_right(s.value, t, budget)
    if not res.found:
        return EqResult(False, False)
    c, w = res.witness.b, res.witness.t
    try:
        left = a * w.value
        right = b * c
    except DegreeOverflow:
        return EqResult(False, False)
    return EqResult(left.terms == right.terms, True, w.value, c)


@dataclass(frozen=True)
class RemarkCheck:
    witnesses_found: bool
    equal: bool | None


def remark_mult_property_check(a: AlgebraElement, s: SProduct, u: SProduct,
                               budget: OreBudget = DEFAULT_BUDGET) -> RemarkCheck:
    """Check [1, u*s] * [u*a, 1] = [1, s] * [a, 1].

    The left-side denominator u*s is certified in S by concatenating the
    factor lists, which is why u is taken from S here.
    """
    p = a.presentation
    _check_same(p, s.presentation)
    _check_same(p, u.presentation)
    us = u * s
    try:
        lhs = frac_mul(Fraction(p.one(), us, budget.regularity_depth),
                       embed(u.value * a), budget)
        rhs = frac_mul(Fraction(p.one(), s, budget.regularity_depth),
                       embed(a), budget)
    except OreWitnessNotFound:
        return RemarkCheck(False, None)
    eq = eq_fraction(lhs, rhs, budget)
    if not eq.decided:
        return RemarkCheck(False, None)
    return RemarkCheck(True, eq.equal)
