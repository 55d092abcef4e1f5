"""Truncated Poisson envelopes of finitely presented commutative algebras.

For A = SV/I the envelope is PA = SLV / <<I>>, where <<I>> is the smallest
ideal closed under both products.  It is generated, as an ordinary ideal, by
the relations together with their iterated brackets with the coordinate
generators (all insertion positions of the relation inside the nested
bracket).  That generator list is star-graded, so PA inherits the star
grading, and each graded piece is computed here as an exact quotient within
a finite window.

Windows: the reported window is (star degree n, SV-part degree <= N).  For
homogeneous relations the ideal is additionally graded by total letter
count, the computation decomposes into finite (star, total) blocks, and the
window ranks are exact.  For inhomogeneous relations the ideal span is
generated up to a poly-degree slack and intersected with the window, which
yields a lower bound on the ideal (so an upper bound on the quotient rank);
pieces carry an ``exact`` flag either way.
"""

from __future__ import annotations

from dataclasses import dataclass

from .freelie import LieElement, generator
from .freepoisson import (
    PoissonElement,
    PoissonMonomial,
    monomials_star_maxpoly,
    monomials_star_total,
    multiply,
    poisson_bracket,
)
from .linalg import Echelon, SparseMatrix, SparseVector


@dataclass(frozen=True)
class EnvelopePresentation:
    """A = polynomial algebra on n_gens generators modulo ``relations``."""

    n_gens: int
    relations: tuple
    d: int
    N: int

    def __post_init__(self):
        if self.n_gens < 1:
            raise ValueError("need at least one generator")
        if self.d < 0:
            raise ValueError("d must be >= 0")
        rels = tuple(self.relations)
        object.__setattr__(self, "relations", rels)
        for f in rels:
            if f.is_zero():
                raise ValueError("relations must be nonzero")
            if f.max_star_degree() != 0:
                raise ValueError("relations must be commutative polynomials")
        if rels and self.N < self.max_relation_degree:
            raise ValueError("window N must cover the relation degrees")

    @property
    def max_relation_degree(self):
        return max(
            (m.poly_degree for f in self.relations for m in f.terms), default=0
        )

    @property
    def homogeneous(self):
        """True if every relation is homogeneous in polynomial degree."""
        for f in self.relations:
            degs = {m.poly_degree for m in f.terms}
            if len(degs) > 1:
                return False
        return True


@dataclass
class GradedQuotientPiece:
    """One star-degree piece of the windowed envelope quotient."""

    star_degree: int
    ambient_basis: list
    ideal_span: SparseMatrix
    quotient_rank: int
    exact: bool


def _nested_bracket(chain):
    """{c_0, {c_1, ..., {c_{k-1}, c_k}...}} for PoissonElements."""
    out = chain[-1]
    for c in reversed(chain[:-1]):
        out = poisson_bracket(c, out)
    return out


def _letter_tuples(n_gens, k):
    if k == 0:
        return [()]
    out = [()]
    for _ in range(k):
        out = [t + (i,) for t in out for i in range(1, n_gens + 1)]
    return out


def poisson_ideal_generators(pres, n):
    """Ideal generators of star degree exactly n.

    Degree 0 gives the relations themselves; degree n >= 1 gives the nested
    brackets g_i(x_{j1},...,x_{jn}; f) with the relation f inserted at every
    position of the bracket chain.  Together with monomial multiples (of all
    lower-degree generators) these span the windowed Poisson ideal.
    """
    if n > pres.d:
        raise ValueError(f"star degree {n} exceeds presentation bound {pres.d}")
    if n == 0:
        return list(pres.relations)
    gens = []
    seen = set()
    letters = [PoissonElement.generator(i) for i in range(1, pres.n_gens + 1)]
    for f in pres.relations:
        for tup in _letter_tuples(pres.n_gens, n):
            for pos in range(n + 1):
                chain = (
                    [letters[j - 1] for j in tup[:pos]]
                    + [f]
                    + [letters[j - 1] for j in tup[pos:]]
                )
                g = _nested_bracket(chain)
                if g.is_zero():
                    continue
                key = frozenset(g.terms.items())
                if key in seen:
                    continue
                seen.add(key)
                gens.append(g)
    return gens


def _coords(element, index):
    out = {}
    for m, c in element.terms.items():
        i = index.get(m)
        if i is None:
            raise KeyError(f"monomial {m!r} outside ambient window")
        out[i] = c
    return out


def _generators_up_to(pres, n):
    return {m: poisson_ideal_generators(pres, m) for m in range(n + 1)}


def ideal_block(pres, n, total, gens_by_degree=None, window_poly=None):
    """Echelon of the (star n, total letter count) block of <<I>>.

    Only valid for homogeneous presentations, where the ideal is graded by
    total degree.  Returns (block monomials, echelon over block indices).
    When ``window_poly`` is given, columns of SV-degree above it are
    eliminated first, so echelon rows pivoted inside the window span exactly
    the intersection of the block with the window.
    """
    if gens_by_degree is None:
        gens_by_degree = _generators_up_to(pres, n)
    block = monomials_star_total(pres.n_gens, n, total)
    order = {}
    for i, m in enumerate(block):
        inside = window_poly is None or m.poly_degree <= window_poly
        order[i] = (1 if inside else 0, m.sort_key)
    index = {m: i for i, m in enumerate(block)}
    ech = Echelon(col_key=lambda c: order[c])
    for m_deg, gens in gens_by_degree.items():
        if m_deg > n:
            continue
        for g in gens:
            g_total = next(iter(g.terms)).total_degree
            h_total = total - g_total
            if h_total < 0:
                continue
            for h in monomials_star_total(pres.n_gens, n - m_deg, h_total):
                prod = multiply(PoissonElement.monomial(h), g)
                if not prod.is_zero():
                    ech.add(_coords(prod, index))
    return block, ech


def _ideal_window_rows(pres, n):
    """Rows spanning <<I>> within the (star n, poly <= N) window.

    Returns (rows in window coordinates, window monomial list, exact flag).
    """
    window = monomials_star_maxpoly(pres.n_gens, n, pres.N)
    window_index = {m: i for i, m in enumerate(window)}
    if not pres.relations:
        return [], window, True

    gens_by_degree = _generators_up_to(pres, n)

    if pres.homogeneous:
        rows = []
        for total in range(n + 2 * n + pres.N + 1):
            cols, ech = ideal_block(
                pres, n, total, gens_by_degree, window_poly=pres.N
            )
            if not cols:
                continue
            for row in ech.basis():
                mons = [cols[i] for i in row]
                if all(m.poly_degree <= pres.N for m in mons):
                    rows.append({window_index[cols[i]]: c for i, c in row.items()})
        return rows, window, True

    # Inhomogeneous relations: generate with poly-degree slack, then carve out
    # the window part of the span.  The result is a lower bound on the ideal.
    slack = pres.max_relation_degree
    products = []
    support = set(window)
    for m_deg, gens in gens_by_degree.items():
        for g in gens:
            for h in monomials_star_maxpoly(
                pres.n_gens, n - m_deg, pres.N + slack
            ):
                prod = multiply(PoissonElement.monomial(h), g)
                if prod.is_zero():
                    continue
                products.append(prod)
                support.update(prod.terms)
    cols = sorted(support, key=lambda m: m.sort_key)
    index = {m: i for i, m in enumerate(cols)}
    order = {
        i: (1 if m.poly_degree <= pres.N else 0, m.sort_key)
        for i, m in enumerate(cols)
    }
    ech = Echelon(col_key=lambda c: order[c])
    for prod in products:
        ech.add(_coords(prod, index))
    rows = []
    for row in ech.basis():
        mons = [cols[i] for i in row]
        if all(m.poly_degree <= pres.N for m in mons):
            rows.append({window_index[cols[i]]: c for i, c in row.items()})
    return rows, window, False


def _quotient_piece(pres, n):
    rows, window, exact = _ideal_window_rows(pres, n)
    dim = len(window)
    vectors = [SparseVector(dim, r) for r in rows]
    span = SparseMatrix.from_rows(vectors) if vectors else SparseMatrix(0, dim)
    return GradedQuotientPiece(
        star_degree=n,
        ambient_basis=window,
        ideal_span=span,
        quotient_rank=dim - len(rows),
        exact=exact,
    )


def envelope_truncated(pres):
    """The windowed graded pieces of PA/P_{>d}A, one per star degree <= d."""
    return [_quotient_piece(pres, n) for n in range(pres.d + 1)]


def _sv_partial(f, i):
    """d/dx_i of a commutative polynomial (star-degree-0 PoissonElement)."""
    out = {}
    for m, c in f.terms.items():
        letters = [b.word[0] for b in m.factors]
        count = letters.count(i)
        if not count:
            continue
        rest = list(letters)
        rest.remove(i)
        mono = PoissonMonomial.of(tuple(generator(j) for j in rest))
        out[mono] = out.get(mono, 0) + c * count
    return PoissonElement(out)


def p1_rank_check(pres):
    """Star-degree-1 rank of the envelope vs. the rank of windowed Omega^2.

    The first is computed through the Poisson ideal machinery, the second by
    an independent elimination on two-forms: ambient m * dx_i ^ dx_j with
    deg m <= N, modulo I * Omega^2 and Omega^1 ^ dI.
    """
    computed = _quotient_piece(pres, 1).quotient_rank

    n = pres.n_gens
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    from .freepoisson import sv_tuples

    cols = []
    for deg in range(pres.N + 1):
        for sv in sv_tuples(n, deg):
            for pr in pairs:
                cols.append((sv, pr))
    index = {c: i for i, c in enumerate(cols)}

    def sv_key(m):
        return tuple(sorted(b.word[0] for b in m.factors))

    slack = 0 if pres.homogeneous else pres.max_relation_degree
    support = set(cols)
    rows = []
    for f in pres.relations:
        # I * Omega^2 rows: m * f * dx_i ^ dx_j
        for deg in range(pres.N + slack + 1):
            for sv in sv_tuples(n, deg):
                m_el = PoissonElement.monomial(
                    PoissonMonomial.of(tuple(generator(a) for a in sv))
                )
                mf = multiply(m_el, f)
                for pr in pairs:
                    row = {}
                    for mono, c in mf.terms.items():
                        key = (sv_key(mono), pr)
                        support.add(key)
                        row[key] = row.get(key, 0) + c
                    rows.append(row)
        # Omega^1 ^ dI rows: m * dx_k ^ df
        partials = {i: _sv_partial(f, i) for i in range(1, n + 1)}
        for deg in range(pres.N + slack + 1):
            for sv in sv_tuples(n, deg):
                m_el = PoissonElement.monomial(
                    PoissonMonomial.of(tuple(generator(a) for a in sv))
                )
                for k in range(1, n + 1):
                    row = {}
                    for b in range(1, n + 1):
                        if b == k:
                            continue
                        coeff = multiply(m_el, partials[b])
                        sign = 1 if k < b else -1
                        pr = (k, b) if k < b else (b, k)
                        for mono, c in coeff.terms.items():
                            key = (sv_key(mono), pr)
                            support.add(key)
                            row[key] = row.get(key, 0) + sign * c
                    if row:
                        rows.append(row)

    all_cols = sorted(
        support, key=lambda c: (len(c[0]), c[0], c[1])
    )
    col_index = {c: i for i, c in enumerate(all_cols)}
    in_window = lambda c: len(c[0]) <= pres.N
    order = {
        i: (1 if in_window(c) else 0, len(c[0]), c[0], c[1])
        for i, c in enumerate(all_cols)
    }
    ech = Echelon(col_key=lambda i: order[i])
    for row in rows:
        ech.add({col_index[c]: v for c, v in row.items()})
    window_rows = 0
    for row in ech.basis():
        if all(in_window(all_cols[i]) for i in row):
            window_rows += 1
    omega2_rank = len(cols) - window_rows
    return computed, omega2_rank


@dataclass(frozen=True)
class LocalModelElement:
    """An element of the local model A (x) SL_+V, A polynomial on the letters."""

    value: PoissonElement


def _as_poisson(a):
    return a.value if isinstance(a, LocalModelElement) else a


def _de_rham(p):
    """The factor-slot differential of the local model.

    Returns the element of (SLV (x) L) as a dict (coefficient monomial,
    Lie leg) -> coefficient.
    """
    out = {}
    for m, c in p.terms.items():
        for i, f in enumerate(m.factors):
            rest = PoissonMonomial.of(m.factors[:i] + m.factors[i + 1 :])
            key = (rest, f)
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def local_model_bracket(f, g):
    """{p, q} = phi(Dp ^ Dq): differentiate both arguments, pair the legs
    through the free Lie bracket, and contract the coefficients.

    For polynomial coefficients this coincides with the free Poisson bracket.
    """
    wrap = isinstance(f, LocalModelElement) or isinstance(g, LocalModelElement)
    df = _de_rham(_as_poisson(f))
    dg = _de_rham(_as_poisson(g))
    out = PoissonElement.zero()
    from .freelie import bracket_basis

    for (m1, leg1), c1 in df.items():
        for (m2, leg2), c2 in dg.items():
            br = bracket_basis(leg1, leg2)
            if br.is_zero():
                continue
            coeff = multiply(
                PoissonElement.monomial(m1, c1), PoissonElement.monomial(m2, c2)
            )
            out = out + multiply(coeff, PoissonElement.from_lie(br))
    return LocalModelElement(out) if wrap else out


def induced_hom(images, a):
    """The Poisson-universal extension of generator images.

    Each Lyndon basis factor is replaced by the iterated Poisson bracket of
    the images of its letters; letter factors map straight through; the
    result is extended multiplicatively and linearly.
    """

    def theta_tree(tree):
        if isinstance(tree, int):
            try:
                return images[tree]
            except KeyError:
                raise ValueError(f"unassigned generator x{tree}") from None
        return poisson_bracket(theta_tree(tree[0]), theta_tree(tree[1]))

    p = _as_poisson(a)
    out = PoissonElement.zero()
    for m, c in p.terms.items():
        acc = PoissonElement.one(c)
        for f in m.factors:
            acc = multiply(acc, theta_tree(f.bracketing))
        out = out + acc
    return out


def gap_witness(n_gens=4, indices=(1, 2, 3, 4)):
    """A Leibniz relation that the naive transport rule fails to respect.

    ``envelope_side`` evaluates {a1, a3{a2,a4}} + {a1, a2{a3,a4}}
    - {a1, {a2 a3, a4}} honestly (it is 0 by the Leibniz rule).
    ``naive_image`` pushes the same three terms through the ill-defined rule
    b*{c0,{c1,...}} -> b*[dc0,[dc1,...]] term by term, which leaves the
    nonzero element (13)(24) + (12)(34).
    """
    if n_gens < 4:
        raise ValueError("need at least 4 generators")
    if len(set(indices)) != 4:
        raise ValueError("indices must be injective")
    a1, a2, a3, a4 = (PoissonElement.generator(i) for i in indices)

    t1 = poisson_bracket(a1, multiply(a3, poisson_bracket(a2, a4)))
    t2 = poisson_bracket(a1, multiply(a2, poisson_bracket(a3, a4)))
    t3 = poisson_bracket(a1, poisson_bracket(multiply(a2, a3), a4))
    envelope_side = t1 + t2 - t3

    def naive_tree(tree):
        # tree: a commutative polynomial (leaf) or a pair of trees; value is
        # an element of A (x) L as leg -> polynomial coefficient
        if isinstance(tree, PoissonElement):
            out = {}
            for i in range(1, n_gens + 1):
                da = _sv_partial(tree, i)
                if not da.is_zero():
                    out[generator(i)] = da
            return out
        left = naive_tree(tree[0])
        right = naive_tree(tree[1])
        from .freelie import bracket_basis

        out = {}
        for leg1, c1 in left.items():
            for leg2, c2 in right.items():
                for b, v in bracket_basis(leg1, leg2).terms.items():
                    coeff = v * multiply(c1, c2)
                    if b in out:
                        out[b] = out[b] + coeff
                    else:
                        out[b] = coeff
        return out

    def transport(coeff, *trees):
        acc = coeff
        for tree in trees:
            val = naive_tree(tree)
            term = PoissonElement.zero()
            for leg, cof in val.items():
                term = term + multiply(
                    cof, PoissonElement.from_lie(LieElement.basis(leg))
                )
            acc = multiply(acc, term)
        return acc

    one = PoissonElement.one()
    # The three terms, pre-expanded by the Leibniz rule into the rule's
    # domain b * (products of nested brackets of algebra elements):
    n1 = transport(one, (a1, a3), (a2, a4)) + transport(a3, (a1, (a2, a4)))
    n2 = transport(one, (a1, a2), (a3, a4)) + transport(a2, (a1, (a3, a4)))
    n3 = transport(one, (a1, (multiply(a2, a3), a4)))
    naive_image = n1 + n2 - n3
    return envelope_side, naive_image
