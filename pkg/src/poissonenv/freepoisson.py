"""The free Poisson algebra SLV with its bigrading and PBW star product.

A monomial is a multiset of Lyndon basis elements.  Two gradings matter:

* star degree: the sum of the factors' star degrees (the shifted Lie
  grading, extended multiplicatively);
* sym degree: the plain number of factors (the symmetric-power grading).

The Poisson bracket is the biderivation extending the Lie bracket.  The star
product transports concatenation through the symmetrization map e:
B(a, b) = e^{-1}(e(a) e(b)); its graded component B_p lowers sym degree by p
and raises star degree by p.  B_0 is the commutative product and B_1 is half
the Poisson bracket.
"""

from __future__ import annotations

from fractions import Fraction

from . import pbw
from .freelie import TensorElement, bracket_basis, generator


class PoissonMonomial:
    """A commutative product of Lie basis elements, canonically sorted.

    Gradings carried by every monomial: ``star_degree`` (sum of factor star
    degrees), ``sym_degree`` (factor count), ``poly_degree`` (letter factors,
    the SV part), ``plus_degree`` (positive-star factors) and
    ``total_degree`` (every letter, including those inside Lie factors).
    """

    __slots__ = (
        "factors",
        "star_degree",
        "sym_degree",
        "poly_degree",
        "plus_degree",
        "total_degree",
        "sort_key",
        "_hash",
    )

    def __init__(self, factors):
        self.factors = factors
        self.star_degree = sum(f.star_degree for f in factors)
        self.sym_degree = len(factors)
        self.poly_degree = sum(1 for f in factors if f.star_degree == 0)
        self.plus_degree = self.sym_degree - self.poly_degree
        self.total_degree = sum(len(f.word) for f in factors)
        self.sort_key = (
            self.star_degree,
            self.total_degree,
            tuple(f.sort_key for f in factors),
        )
        self._hash = hash(tuple(f.word for f in factors))

    @classmethod
    def of(cls, factors):
        return cls(tuple(sorted(factors, key=lambda f: f.sort_key)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, PoissonMonomial) and self.factors == other.factors
        )

    def __repr__(self):
        if not self.factors:
            return "1"
        return "*".join(repr(f) for f in self.factors)


MONOMIAL_ONE = PoissonMonomial(())


def _merge(acc, terms, scale=1):
    for k, v in terms.items():
        w = acc.get(k, 0) + scale * v
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)
    return acc


class PoissonElement:
    """Exact rational combination of Poisson monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls, coeff=1):
        return cls({MONOMIAL_ONE: Fraction(coeff)})

    @classmethod
    def monomial(cls, m, coeff=1):
        return cls({m: Fraction(coeff)})

    @classmethod
    def generator(cls, i):
        return cls({PoissonMonomial((generator(i),)): Fraction(1)})

    @classmethod
    def from_lie(cls, a):
        """Embed a Lie element as a sum of single-factor monomials."""
        return cls({PoissonMonomial((b,)): c for b, c in a.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, PoissonElement) and self.terms == other.terms

    def __add__(self, other):
        return PoissonElement(_merge(dict(self.terms), other.terms))

    def __sub__(self, other):
        return PoissonElement(_merge(dict(self.terms), other.terms, -1))

    def __neg__(self):
        return PoissonElement({m: -c for m, c in self.terms.items()})

    def __rmul__(self, c):
        c = Fraction(c)
        if not c:
            return PoissonElement()
        return PoissonElement({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, PoissonElement):
            return multiply(self, other)
        return Fraction(other) * self

    def sym_part(self, p):
        return PoissonElement(
            {m: c for m, c in self.terms.items() if m.sym_degree == p}
        )

    def star_part(self, q):
        return PoissonElement(
            {m: c for m, c in self.terms.items() if m.star_degree == q}
        )

    def bigraded_part(self, p, q):
        return PoissonElement(
            {
                m: c
                for m, c in self.terms.items()
                if m.sym_degree == p and m.star_degree == q
            }
        )

    def star_truncate(self, d):
        return PoissonElement(
            {m: c for m, c in self.terms.items() if m.star_degree <= d}
        )

    def sym_degrees(self):
        return sorted({m.sym_degree for m in self.terms})

    def star_degrees(self):
        return sorted({m.star_degree for m in self.terms})

    def max_star_degree(self):
        return max((m.star_degree for m in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, key=lambda m: m.sort_key):
            bits.append(f"{self.terms[m]}*{m!r}")
        return " + ".join(bits)


def multiply(a, b):
    """Commutative product; both gradings add."""
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            _merge(out, {PoissonMonomial.of(m1.factors + m2.factors): c1 * c2})
    return PoissonElement(out)


_BRACKET_MONO_CACHE = {}


def _bracket_monomials(m1, m2):
    key = (m1.factors, m2.factors)
    hit = _BRACKET_MONO_CACHE.get(key)
    if hit is not None:
        return hit
    out = {}
    for i, f in enumerate(m1.factors):
        rest1 = m1.factors[:i] + m1.factors[i + 1 :]
        for j, g in enumerate(m2.factors):
            rest2 = m2.factors[:j] + m2.factors[j + 1 :]
            for b, c in bracket_basis(f, g).terms.items():
                _merge(out, {PoissonMonomial.of(rest1 + rest2 + (b,)): c})
    _BRACKET_MONO_CACHE[key] = out
    return out


def poisson_bracket(a, b):
    """The biderivation extending the Lie bracket; raises star degree by
    the brackets' +1 on each paired factor."""
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            _merge(out, _bracket_monomials(m1, m2), c1 * c2)
    return PoissonElement(out)


def symmetrize(a):
    """The PBW symmetrization map e into the tensor algebra."""
    out = TensorElement.zero()
    for m, c in a.terms.items():
        out = out + c * pbw.symmetrize_factors(m.factors)
    return out


def e_inverse(t):
    """The inverse of symmetrize: the unique a with symmetrize(a) == t."""
    out = {}
    for w, c in t.terms.items():
        for factors, v in pbw.e_inverse_word(w).items():
            _merge(out, {PoissonMonomial(factors): c * v})
    return PoissonElement(out)


_STAR_MONO_CACHE = {}


def _star_monomials(m1, m2):
    key = (m1.factors, m2.factors)
    hit = _STAR_MONO_CACHE.get(key)
    if hit is None:
        t = pbw.symmetrize_factors(m1.factors) * pbw.symmetrize_factors(
            m2.factors
        )
        hit = e_inverse(t).terms
        _STAR_MONO_CACHE[key] = hit
    return hit


def star_product(a, b):
    """The PBW quantized product B(a, b) = e^{-1}(e(a) e(b))."""
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            _merge(out, _star_monomials(m1, m2), c1 * c2)
    return PoissonElement(out)


def star_component(a, b, p):
    """B_p: the component of the star product dropping sym degree by p.

    Applied bilinearly over the sym-homogeneous components of the inputs.
    On star-homogeneous inputs it is also the component raising star degree
    by exactly p.
    """
    out = PoissonElement.zero()
    for pa in a.sym_degrees():
        for pb in b.sym_degrees():
            full = star_product(a.sym_part(pa), b.sym_part(pb))
            out = out + full.sym_part(pa + pb - p)
    return out


def bigraded_component(a, p, q):
    """Projection onto sym degree p and star degree q."""
    return a.bigraded_part(p, q)


def poisson_one():
    return PoissonElement.one()


def generators(n_gens):
    return [PoissonElement.generator(i) for i in range(1, n_gens + 1)]


def sv_tuples(n_gens, degree):
    """Nondecreasing letter tuples of the given length (monomials of SV)."""
    if degree == 0:
        return [()]
    out = []

    def rec(lo, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(lo, n_gens + 1):
            acc.append(i)
            rec(i, remaining - 1, acc)
            acc.pop()

    rec(1, degree, [])
    return out


def plus_tuples(n_gens, star):
    """Multisets of positive-star Lyndon elements with star degrees summing
    to ``star``, as nondecreasing factor tuples."""
    from .freelie import lyndon_basis_of_length

    if star == 0:
        return [()]
    pool = []
    for s in range(1, star + 1):
        pool.extend(lyndon_basis_of_length(n_gens, s + 1))
    pool.sort(key=lambda b: b.sort_key)
    out = []

    def rec(lo, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for idx in range(lo, len(pool)):
            b = pool[idx]
            if b.star_degree > remaining:
                continue
            acc.append(b)
            rec(idx, remaining - b.star_degree, acc)
            acc.pop()

    rec(0, star, [])
    return out


def monomials_star_total(n_gens, star, total):
    """All monomials with the exact star degree and total letter count."""
    out = []
    for plus in plus_tuples(n_gens, star):
        lie_letters = sum(len(b.word) for b in plus)
        poly = total - lie_letters
        if poly < 0:
            continue
        for sv in sv_tuples(n_gens, poly):
            out.append(PoissonMonomial.of(tuple(generator(i) for i in sv) + plus))
    return out


def monomials_star_maxpoly(n_gens, star, max_poly):
    """All monomials with the exact star degree and SV-part degree <= max_poly."""
    out = []
    for plus in plus_tuples(n_gens, star):
        for p in range(max_poly + 1):
            for sv in sv_tuples(n_gens, p):
                out.append(
                    PoissonMonomial.of(tuple(generator(i) for i in sv) + plus)
                )
    return out
