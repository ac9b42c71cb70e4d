"""Finitely presented unital *-algebras with exact normal forms.

A Presentation fixes an ordered list of generators, an involutive
pairing of generators (the dagger), and rewrite rules sending a word to
a linear combination of strictly smaller words in the degree-
lexicographic order on generator indices.  The order condition makes
rewriting terminate; all critical pairs up to the degree cap are checked
at load time, which makes normal forms canonical on the checked range.
Because rule right-hand sides never exceed the left-hand side in degree,
rewriting never lengthens a word, so the degree cap is enforced purely
at word-construction sites (raw input and products).

Elements are immutable linear combinations of irreducible words over
the Gaussian rationals.  Words are tuples of generator indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (DegreeOverflow, PresentationError, PresentationMismatch)
from .scalars import ONE, Scalar

Word = tuple

_SCALAR_ONE = ONE


def _deglex_key(w: Word):
    return (len(w), w)


def _as_scalar(c) -> Scalar:
    if isinstance(c, Scalar):
        return c
    return Scalar(c)


class RewriteRule:
    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs: Word, rhs: dict):
        self.lhs = lhs
        self.rhs = rhs


class Presentation:
    """A *-algebra presentation with a terminating, confluence-checked
    rewriting system.

    generators   ordered names; the position is the generator index used
                 by the degree-lexicographic term order
    dagger_pairs groups of one name (hermitian generator) or two names
                 (a generator and its adjoint)
    relations    list of (lhs_word, rhs_terms) with words as name tuples
                 and rhs_terms as a list of (coeff, word) pairs
    degree_cap   hard bound on word length; exceeding it raises
                 DegreeOverflow rather than silently truncating
    """

    def __init__(self, generators, dagger_pairs, relations, degree_cap,
                 name=None, validate=True):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        self.name = name
        if degree_cap < 1:
            raise PresentationError("degree_cap must be at least 1")
        self.degree_cap = int(degree_cap)
        self._index = {g: i for i, g in enumerate(self.generators)}

        dag = [None] * len(self.generators)
        for pair in dagger_pairs:
            pair = tuple(pair)
            if len(pair) == 1:
                g = self._gen_index(pair[0])
                dag[g] = g
            elif len(pair) == 2:
                g, h = (self._gen_index(pair[0]), self._gen_index(pair[1]))
                dag[g], dag[h] = h, g
            else:
                raise PresentationError("dagger pair must have 1 or 2 names")
        if any(d is None for d in dag):
            raise PresentationError("every generator needs a dagger pairing")
        self.dagger_map = tuple(dag)
        self._dagger_pairs = tuple(tuple(p) for p in dagger_pairs)

        rules = []
        for lhs_names, rhs_pairs in relations:
            lhs = self._word(lhs_names)
            if not lhs:
                raise PresentationError("rule left-hand side must be nonempty")
            if len(lhs) > self.degree_cap:
                raise PresentationError("rule left-hand side exceeds degree cap")
            rhs = {}
            for coeff, word_names in rhs_pairs:
                w = self._word(word_names)
                c = _as_scalar(coeff)
                if not c:
                    continue
                prev = rhs.get(w)
                c = c + prev if prev is not None else c
                if c:
                    rhs[w] = c
                elif w in rhs:
                    del rhs[w]
            for w in rhs:
                if _deglex_key(w) >= _deglex_key(lhs):
                    raise PresentationError(
                        "rule does not decrease the term order: %s -> %s"
                        % (self.word_str(lhs), self.word_str(w)))
            rules.append(RewriteRule(lhs, rhs))
        rules.sort(key=lambda r: _deglex_key(r.lhs))
        self.rules = tuple(rules)
        by_first = {}
        for r in self.rules:
            by_first.setdefault(r.lhs[0], []).append(r)
        self._rules_by_first = {g: tuple(rs) for g, rs in by_first.items()}
        self._relations_input = tuple(
            (tuple(lhs), tuple((c, tuple(w)) for c, w in rhs))
            for lhs, rhs in relations)

        self._nf_cache = {}
        self._basis_cache = {}
        self._mul_subspaces = {}
        self._regular_cache = {}
        self._candidate_cache = {}
        self._sproduct_value_cache = {}

        if validate:
            self._check_dagger_closure()
            self._check_confluence()
        self.commutative = self._detect_commutative()

    # -- construction helpers ------------------------------------------------

    def _gen_index(self, name) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PresentationError("unknown generator %r" % (name,)) from None

    def _word(self, names) -> Word:
        return tuple(self._gen_index(n) for n in names)

    def word_str(self, w: Word) -> str:
        if not w:
            return "1"
        return "*".join(self.generators[g] for g in w)

    def dagger_word(self, w: Word) -> Word:
        dag = self.dagger_map
        return tuple(dag[g] for g in reversed(w))

    # -- rewriting -----------------------------------------------------------

    def _find_redex(self, w: Word):
        by_first = self._rules_by_first
        n = len(w)
        for pos in range(n):
            rules = by_first.get(w[pos])
            if not rules:
                continue
            for rule in rules:
                L = len(rule.lhs)
                if pos + L <= n and w[pos:pos + L] == rule.lhs:
                    return pos, rule
        return None

    def normal_form_word(self, w: Word) -> dict:
        """Normal form of a single word as a dict word -> Scalar."""
        if len(w) > self.degree_cap:
            raise DegreeOverflow(
                "word of length %d exceeds degree cap %d"
                % (len(w), self.degree_cap))
        cached = self._nf_cache.get(w)
        if cached is not None:
            return cached
        hit = self._find_redex(w)
        if hit is None:
            result = {w: _SCALAR_ONE}
        else:
            pos, rule = hit
            u, v = w[:pos], w[pos + len(rule.lhs):]
            acc = {}
            for rw, rc in rule.rhs.items():
                for w2, c2 in self.normal_form_word(u + rw + v).items():
                    c = rc * c2
                    prev = acc.get(w2)
                    if prev is not None:
                        c = prev + c
                    if c:
                        acc[w2] = c
                    elif w2 in acc:
                        del acc[w2]
            result = acc
        self._nf_cache[w] = result
        return result

    def normalize_raw(self, raw: dict) -> "AlgebraElement":
        """Normalize a raw word combination (dict word -> Scalar)."""
        acc = {}
        for w, c in raw.items():
            if not c:
                continue
            for w2, c2 in self.normal_form_word(w).items():
                v = c * c2
                prev = acc.get(w2)
                if prev is not None:
                    v = prev + v
                if v:
                    acc[w2] = v
                elif w2 in acc:
                    del acc[w2]
        return AlgebraElement(self, acc, _trusted=True)

    def is_irreducible(self, w: Word) -> bool:
        return self._find_redex(w) is None

    # -- load-time checks ----------------------------------------------------

    def _check_dagger_closure(self):
        for rule in self.rules:
            lhs_d = self.normalize_raw({self.dagger_word(rule.lhs): _SCALAR_ONE})
            rhs_d = self.normalize_raw(
                {self.dagger_word(w): c.conjugate() for w, c in rule.rhs.items()})
            if lhs_d.terms != rhs_d.terms:
                raise PresentationError(
                    "relation %s is not dagger-closed" % self.word_str(rule.lhs))

    def _check_confluence(self):
        cap = self.degree_cap
        for r1, r2 in itertools.product(self.rules, repeat=2):
            l1, l2 = r1.lhs, r2.lhs
            # proper overlap: a suffix of l1 is a prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] != l2[:k]:
                    continue
                sup = l1 + l2[k:]
                if len(sup) > cap:
                    continue
                left = self.normalize_raw(
                    {w + l2[k:]: c for w, c in r1.rhs.items()})
                right = self.normalize_raw(
                    {l1[:-k] + w: c for w, c in r2.rhs.items()})
                if left.terms != right.terms:
                    raise PresentationError(
                        "critical pair %s does not resolve" % self.word_str(sup))
            # containment: l2 occurs inside l1
            if len(l2) <= len(l1):
                for pos in range(len(l1) - len(l2) + 1):
                    if r1 is r2 and pos == 0 and len(l1) == len(l2):
                        continue
                    if l1[pos:pos + len(l2)] != l2:
                        continue
                    left = self.normalize_raw(dict(r1.rhs))
                    right = self.normalize_raw(
                        {l1[:pos] + w + l1[pos + len(l2):]: c
                         for w, c in r2.rhs.items()})
                    if left.terms != right.terms:
                        raise PresentationError(
                            "embedded critical pair in %s does not resolve"
                            % self.word_str(l1))

    def _detect_commutative(self) -> bool:
        n = len(self.generators)
        for i in range(n):
            for j in range(i + 1, n):
                ab = self.normal_form_word((i, j))
                ba = self.normal_form_word((j, i))
                if ab != ba:
                    return False
        return True

    # -- element constructors ------------------------------------------------

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {}, _trusted=True)

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {(): _SCALAR_ONE}, _trusted=True)

    def scalar(self, c) -> "AlgebraElement":
        c = _as_scalar(c)
        return AlgebraElement(self, {(): c} if c else {}, _trusted=True)

    def generator(self, name) -> "AlgebraElement":
        g = self._gen_index(name)
        return self.normalize_raw({(g,): _SCALAR_ONE})

    def element(self, terms: dict) -> "AlgebraElement":
        """Build an element from a dict mapping name tuples to coefficients."""
        raw = {}
        for names, c in terms.items():
            w = self._word(tuple(names))
            if len(w) > self.degree_cap:
                raise DegreeOverflow(
                    "input word of length %d exceeds degree cap %d"
                    % (len(w), self.degree_cap))
            c = _as_scalar(c)
            prev = raw.get(w)
            raw[w] = c + prev if prev is not None else c
        return self.normalize_raw(raw)

    # -- word enumeration ----------------------------------------------------

    def basis_words(self, max_degree: int):
        """All irreducible words of length <= max_degree, deglex sorted."""
        if max_degree < 0:
            return ()
        if max_degree > self.degree_cap:
            raise DegreeOverflow(
                "basis up to degree %d exceeds degree cap %d"
                % (max_degree, self.degree_cap))
        cached = self._basis_cache.get(max_degree)
        if cached is not None:
            return cached
        layers = [[()]]
        ngen = len(self.generators)
        for d in range(1, max_degree + 1):
            layer = []
            for w in layers[d - 1]:
                for g in range(ngen):
                    w2 = w + (g,)
                    # the prefix is irreducible, so any redex is a suffix
                    if all(w2[-len(r.lhs):] != r.lhs
                           for r in self.rules if len(r.lhs) <= d):
                        layer.append(w2)
            layers.append(layer)
        words = tuple(itertools.chain.from_iterable(layers))
        self._basis_cache[max_degree] = words
        return words

    # -- identity ------------------------------------------------------------

    def _structure_key(self):
        rel = tuple(sorted(
            (r.lhs, tuple(sorted((w, c.re, c.im) for w, c in r.rhs.items())))
            for r in self.rules))
        return (self.generators, self.dagger_map, rel, self.degree_cap)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Presentation):
            return NotImplemented
        return self._structure_key() == other._structure_key()

    def __hash__(self):
        return hash(self._structure_key())

    def __repr__(self):
        label = self.name or ",".join(self.generators)
        return "Presentation(%s)" % label


def _check_same(p: Presentation, q: Presentation):
    if p is q:
        return
    if p != q:
        raise PresentationMismatch(
            "operands belong to different presentations: %r vs %r" % (p, q))


class AlgebraElement:
    """An immutable normalized linear combination of irreducible words."""

    __slots__ = ("presentation", "terms", "_hash")

    def __init__(self, presentation, terms, _trusted=False):
        self.presentation = presentation
        if not _trusted:
            el = presentation.normalize_raw(dict(terms))
            terms = el.terms
        self.terms = terms
        self._hash = None

    # -- ring structure -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            _check_same(self.presentation, other.presentation)
            return other
        if isinstance(other, (int, Scalar)):
            return self.presentation.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        acc = dict(self.terms)
        for w, c in o.terms.items():
            prev = acc.get(w)
            v = prev + c if prev is not None else c
            if v:
                acc[w] = v
            elif w in acc:
                del acc[w]
        return AlgebraElement(self.presentation, acc, _trusted=True)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __neg__(self):
        return AlgebraElement(
            self.presentation, {w: -c for w, c in self.terms.items()},
            _trusted=True)

    def scale(self, c) -> "AlgebraElement":
        c = _as_scalar(c)
        if not c:
            return self.presentation.zero()
        return AlgebraElement(
            self.presentation, {w: c * v for w, v in self.terms.items()},
            _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.presentation
        cap = p.degree_cap
        raw = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in o.terms.items():
                if len(w1) + len(w2) > cap:
                    raise DegreeOverflow(
                        "product word %s * %s exceeds degree cap %d"
                        % (p.word_str(w1), p.word_str(w2), cap))
                w = w1 + w2
                c = c1 * c2
                prev = raw.get(w)
                raw[w] = c + prev if prev is not None else c
        return p.normalize_raw(raw)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = self.presentation.one()
        for _ in range(n):
            out = out * self
        return out

    def dagger(self) -> "AlgebraElement":
        p = self.presentation
        raw = {}
        for w, c in self.terms.items():
            wd = p.dagger_word(w)
            cd = c.conjugate()
            prev = raw.get(wd)
            raw[wd] = cd + prev if prev is not None else cd
        return p.normalize_raw(raw)

    # -- inspection ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(): _SCALAR_ONE}

    def degree(self) -> int:
        """Maximal word length, or -1 for the zero element."""
        if not self.terms:
            return -1
        return max(len(w) for w in self.terms)

    def coefficient(self, word_names) -> Scalar:
        w = self.presentation._word(tuple(word_names))
        return self.terms.get(w, Scalar(0))

    def sorted_terms(self):
        return tuple(sorted(self.terms.items(), key=lambda t: _deglex_key(t[0])))

    def key(self):
        """Hashable canonical key, usable across equal presentations."""
        return tuple((w, c.re, c.im) for w, c in self.sorted_terms())

    def __eq__(self, other):
        if isinstance(other, (int, Scalar)):
            other = self.presentation.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        _check_same(self.presentation, other.presentation)
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return "<%s>" % format_element(self)


# -- canonical text form -------------------------------------------------------


def _format_coeff_word(c: Scalar, word_txt: str):
    """Return (negate, text) for one term, with negate pulling a leading minus."""
    neg = (c.re < 0) or (c.re == 0 and c.im < 0)
    if neg:
        c = -c
    if not c.im:
        if c.re == 1 and word_txt:
            return neg, word_txt
        base = str(c.re)
    elif not c.re:
        base = "i" if c.im == 1 else "%s*i" % c.im
    else:
        imag = "i" if c.im == 1 else ("%s*i" % c.im)
        base = "(%s + %s)" % (c.re, imag) if c.im > 0 else None
        if base is None:
            mag = -c.im
            imag = "i" if mag == 1 else "%s*i" % mag
            base = "(%s - %s)" % (c.re, imag)
    if word_txt:
        return neg, "%s*%s" % (base, word_txt)
    return neg, base


def format_element(e: AlgebraElement) -> str:
    """Canonical text of an element in the expression grammar."""
    if not e.terms:
        return "0"
    p = e.presentation
    parts = []
    for w, c in e.sorted_terms():
        neg, txt = _format_coeff_word(c, p.word_str(w) if w else "")
        parts.append((neg, txt))
    first_neg, first = parts[0]
    out = ("0 - " + first) if first_neg else first
    for neg, txt in parts[1:]:
        out += (" - " if neg else " + ") + txt
    return out


# -- module-level operation names ----------------------------------------------


def normalize(raw, presentation: Presentation) -> AlgebraElement:
    """Normalize raw input: an element, or a dict of words to coefficients.

    Word keys may be tuples of generator names or of generator indices.
    """
    if isinstance(raw, AlgebraElement):
        _check_same(raw.presentation, presentation)
        return presentation.normalize_raw(dict(raw.terms))
    fixed = {}
    for w, c in dict(raw).items():
        w = tuple(w)
        if w and isinstance(w[0], str):
            w = presentation._word(w)
        if len(w) > presentation.degree_cap:
            raise DegreeOverflow(
                "input word of length %d exceeds degree cap %d"
                % (len(w), presentation.degree_cap))
        c = _as_scalar(c)
        prev = fixed.get(w)
        fixed[w] = c + prev if prev is not None else c
    return presentation.normalize_raw(fixed)


def add(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    return u + v


def scale(c, u: AlgebraElement) -> AlgebraElement:
    return u.scale(c)


def mul(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    return u * v


def dagger(u: AlgebraElement) -> AlgebraElement:
    return u.dagger()


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    depth: int
    witness: AlgebraElement | None = None
    side: str | None = None

    def __bool__(self):
        return self.regular


def is_regular_up_to(s: AlgebraElement, depth: int) -> RegularityResult:
    """Search for zero divisors of s among elements of degree <= depth.

    Checks both a*s = 0 and s*a = 0 by exact kernel computation.  A
    trivial kernel only certifies regularity up to the stated depth.
    """
    from .linalg import nullspace

    p = s.presentation
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if s.is_zero():
        return RegularityResult(False, depth, p.one(), "both")
    if s.degree() + depth > p.degree_cap:
        raise DegreeOverflow(
            "regularity check at depth %d needs degree %d > cap %d"
            % (depth, s.degree() + depth, p.degree_cap))
    key = (s.key(), depth)
    cached = p._regular_cache.get(key)
    if cached is not None:
        return cached

    basis = p.basis_words(depth)
    target = p.basis_words(depth + s.degree())
    index = {w: i for i, w in enumerate(target)}
    result = None
    for side in ("left", "right"):
        cols = []
        for w in basis:
            wel = AlgebraElement(p, {w: _SCALAR_ONE}, _trusted=True)
            prod = (s * wel) if side == "left" else (wel * s)
            vec = [Scalar(0)] * len(target)
            for w2, c in prod.terms.items():
                vec[index[w2]] = c
            cols.append(vec)
        rows = [[cols[j][i] for j in range(len(basis))]
                for i in range(len(target))]
        kernel = nullspace(rows)
        if kernel:
            combo = kernel[0]
            witness = p.normalize_raw(
                {basis[j]: combo[j] for j in range(len(basis)) if combo[j]})
            # witness annihilates s on the named side: side refers to where
            # the witness sits relative to s
            result = RegularityResult(
                False, depth, witness, "right" if side == "left" else "left")
            break
    if result is None:
        result = RegularityResult(True, depth)
    p._regular_cache[key] = result
    return result


# -- presets ---------------------------------------------------------------------


_PRESET_CACHE = {}


def preset_poly_x(degree_cap: int = 24) -> Presentation:
    """C[x]: one hermitian generator, no relations."""
    key = ("poly_x", degree_cap)
    if key not in _PRESET_CACHE:
        _PRESET_CACHE[key] = Presentation(
            ("x",), (("x",),), (), degree_cap, name="poly_x")
    return _PRESET_CACHE[key]


def preset_poly_xy(degree_cap: int = 16) -> Presentation:
    """C[x,y]: two commuting hermitian generators."""
    key = ("poly_xy", degree_cap)
    if key not in _PRESET_CACHE:
        _PRESET_CACHE[key] = Presentation(
            ("x", "y"), (("x",), ("y",)),
            ((("y", "x"), ((1, ("x", "y")),)),),
            degree_cap, name="poly_xy")
    return _PRESET_CACHE[key]


def preset_heisenberg(degree_cap: int = 20) -> Presentation:
    """The algebra generated by a and its adjoint ad with a*ad = ad*a + 1.

    Generators are listed with ad first so the normal ordering rule
    decreases the term order; normal words are ad^j a^k.
    """
    key = ("heisenberg", degree_cap)
    if key not in _PRESET_CACHE:
        _PRESET_CACHE[key] = Presentation(
            ("ad", "a"), (("a", "ad"),),
            ((("a", "ad"), ((1, ("ad", "a")), (1, ()))),),
            degree_cap, name="heisenberg")
    return _PRESET_CACHE[key]


def preset_free_xy(degree_cap: int = 10) -> Presentation:
    """Free *-algebra on two hermitian generators, no relations."""
    key = ("free_xy", degree_cap)
    if key not in _PRESET_CACHE:
        _PRESET_CACHE[key] = Presentation(
            ("x", "y"), (("x",), ("y",)), (), degree_cap, name="free_xy")
    return _PRESET_CACHE[key]


PRESETS = {
    "poly_x": preset_poly_x,
    "poly_xy": preset_poly_xy,
    "heisenberg": preset_heisenberg,
    "free_xy": preset_free_xy,
}


def load_preset(name: str, degree_cap: int | None = None) -> Presentation:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise PresentationError(
            "unknown preset %r (have: %s)" % (name, ", ".join(sorted(PRESETS)))
        ) from None
    if degree_cap is None:
        return factory()
    return factory(degree_cap)


# -- sampling --------------------------------------------------------------------


def random_scalar(rng, complex_coeffs=True) -> Scalar:
    from fractions import Fraction
    num = rng.randint(-3, 3)
    den = rng.randint(1, 3)
    re = Fraction(num, den)
    im = Fraction(0)
    if complex_coeffs and rng.random() < 0.4:
        im = Fraction(rng.randint(-2, 2), rng.randint(1, 2))
    return Scalar(re, im)


def random_element(presentation, rng, max_degree=2, max_terms=3,
                   complex_coeffs=True, nonzero=False) -> AlgebraElement:
    """A deterministic pseudo-random element driven by the given rng."""
    words = presentation.basis_words(max_degree)
    while True:
        raw = {}
        for _ in range(rng.randint(1, max_terms)):
            w = words[rng.randrange(len(words))]
            c = random_scalar(rng, complex_coeffs)
            prev = raw.get(w)
            raw[w] = c + prev if prev is not None else c
        el = presentation.normalize_raw(raw)
        if not nonzero or not el.is_zero():
            return el
