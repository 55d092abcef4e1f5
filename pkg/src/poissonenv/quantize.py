"""The truncated PBW quantization Q_X^(d) for polynomial coordinates.

For a polynomial algebra the local model is the whole free Poisson algebra,
so the quantized product is the PBW star product with every star degree
above d discarded; that truncation is exact because the discarded part is a
two-sided ideal.

The filtration computations run in PBW coordinates (nondecreasing products
of Lyndon basis elements), where the product is concatenation followed by
straightening and the star truncation is the coordinate span of the tuples
of star degree above d.  Every object in sight is graded by total letter
count, so windows by total degree are honest finite quotients and the
computed chains restrict exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import pbw
from .freelie import generator
from .freepoisson import (
    PoissonElement,
    monomials_star_maxpoly,
    monomials_star_total,
    star_component,
    star_product,
)
from .linalg import Echelon

NCWord = tuple  # sequence of 1-based generator indices; empty = unit


@dataclass(frozen=True)
class QuantizedAlgebra:
    """Q_X^(d): the free Poisson algebra in star degrees <= d with the
    truncated star product."""

    n_gens: int
    d: int

    def __post_init__(self):
        if self.n_gens < 1 or self.d < 0:
            raise ValueError("need n_gens >= 1 and d >= 0")


def bx_component(a, b, p):
    """B^X_p on polynomial representatives: for polynomial coordinates the
    local model is SLV itself, so this is the free star component."""
    return star_component(a, b, p)


def truncated_product(alg, a, b):
    """The associative product sum of B^X_p with star degrees > d dropped."""
    if a.max_star_degree() > alg.d or b.max_star_degree() > alg.d:
        raise ValueError(f"inputs must have star degree <= {alg.d}")
    return star_product(a, b).star_truncate(alg.d)


def nc_embed(alg, w):
    """Image of a noncommutative word under the product of the generators."""
    out = PoissonElement.one()
    for i in w:
        if not 1 <= i <= alg.n_gens:
            raise ValueError(f"letter {i} outside 1..{alg.n_gens}")
        out = truncated_product(alg, out, PoissonElement.generator(i))
    return out


def _tuple_star(t):
    return sum(f.star_degree for f in t)


def _tuple_total(t):
    return sum(len(f.word) for f in t)


class UWindow:
    """Q_X^(d) modulo total degree > max_total, in PBW coordinates."""

    def __init__(self, n_gens, d, max_total):
        self.n_gens = n_gens
        self.d = d
        self.max_total = max_total
        self.tuples = []
        for total in range(max_total + 1):
            for q in range(min(d, total) + 1):
                for m in monomials_star_total(n_gens, q, total):
                    self.tuples.append(m.factors)
        self.index = {t: i for i, t in enumerate(self.tuples)}
        self.letters = [(generator(i),) for i in range(1, n_gens + 1)]
        self._chain = None

    def mono_mul(self, t1, t2):
        out = {}
        for t, c in pbw.normal(t1 + t2).items():
            if _tuple_star(t) <= self.d:
                out[self.index[t]] = c
        return out

    def _vec_terms(self, row):
        return [(self.tuples[i], c) for i, c in row.items()]

    def mul(self, v, w):
        out = {}
        for t1, c1 in self._vec_terms(v):
            for t2, c2 in self._vec_terms(w):
                if _tuple_total(t1) + _tuple_total(t2) > self.max_total:
                    continue
                for i, c in self.mono_mul(t1, t2).items():
                    x = out.get(i, 0) + c1 * c2 * c
                    if x:
                        out[i] = x
                    else:
                        out.pop(i, None)
        return out

    def commutator(self, v, w):
        out = dict(self.mul(v, w))
        for i, c in self.mul(w, v).items():
            x = out.get(i, 0) - c
            if x:
                out[i] = x
            else:
                out.pop(i, None)
        return out

    def letter_vec(self, i):
        return {self.index[self.letters[i - 1]]: Fraction(1)}

    def full_span(self):
        ech = Echelon()
        for i in range(len(self.tuples)):
            ech.add({i: Fraction(1)})
        return ech

    def ideal_close(self, seeds):
        """Span of the two-sided ideal generated by ``seeds`` (worklist:
        closing under product by the generators suffices, since they
        generate the algebra)."""
        ech = Echelon()
        queue = [dict(s) for s in seeds]
        letters = [self.letter_vec(i) for i in range(1, self.n_gens + 1)]
        while queue:
            v = queue.pop()
            if not v or not ech.add(v):
                continue
            for lv in letters:
                left = self.mul(lv, v)
                if left:
                    queue.append(left)
                right = self.mul(v, lv)
                if right:
                    queue.append(right)
        return ech

    def filtration(self, levels):
        """Commutator filtration chain F_0 .. F_levels (list of Echelons).

        F_{n+1} is the sum over the products F_p F_{n+1-p} (p, q >= 1) plus
        the two-sided ideal generated by the commutators [F_p, F_{n-p}].
        [F_0, F_q] reduces to the generator commutators [x_i, F_q] because
        commutation against a product peels one factor at a time.
        """
        if self._chain is None:
            self._chain = [self.full_span()]
        chain = self._chain
        while len(chain) <= levels:
            n = len(chain) - 1
            bracket_gens = []
            for i in range(1, self.n_gens + 1):
                lv = self.letter_vec(i)
                for v in chain[n].basis():
                    c = self.commutator(lv, v)
                    if c:
                        bracket_gens.append(c)
            for p in range(1, n):
                q = n - p
                for v in chain[p].basis():
                    for w in chain[q].basis():
                        c = self.commutator(v, w)
                        if c:
                            bracket_gens.append(c)
            new = self.ideal_close(bracket_gens)
            for p in range(1, n + 1):
                q = n + 1 - p
                for v in chain[p].basis():
                    for w in chain[q].basis():
                        prod = self.mul(v, w)
                        if prod:
                            new.add(prod)
            chain.append(new)
        return chain

    def poisson_span(self, monomials):
        """Echelon of the e-images of Poisson monomials, star-truncated."""
        ech = Echelon()
        for m in monomials:
            row = {}
            for t, c in pbw.sym_pbw(m.factors).items():
                if _tuple_star(t) <= self.d:
                    row[self.index[t]] = c
            ech.add(row)
        return ech

    def window_monomials(self, max_poly, min_star=0):
        out = []
        for q in range(min_star, self.d + 1):
            for m in monomials_star_maxpoly(self.n_gens, q, max_poly):
                if m.total_degree <= self.max_total:
                    out.append(m)
        return out


_UWINDOW_CACHE = {}


def u_window(n_gens, d, max_total):
    key = (n_gens, d, max_total)
    if key not in _UWINDOW_CACHE:
        _UWINDOW_CACHE[key] = UWindow(n_gens, d, max_total)
    return _UWINDOW_CACHE[key]


def _span_union_rank(a, b):
    ech = Echelon()
    for row in a.basis():
        ech.add(row)
    for row in b.basis():
        ech.add(row)
    return ech.rank


def _intersection_rank(a, b):
    return a.rank + b.rank - _span_union_rank(a, b)


@dataclass
class FiltrationWindowReport:
    """Window comparison of the computed F_n against the star-graded tail."""

    n: int
    N: int
    rank_filtration: int
    rank_expected: int
    tail_inside_filtration: bool

    @property
    def matches(self):
        return self.tail_inside_filtration and (
            self.rank_filtration == self.rank_expected
        )


def commutator_filtration_Q(alg, n, N):
    """Compare F_n of the commutator filtration of Q_X^(d) with the span of
    the star degrees >= n, inside the (star <= d, poly <= N) window."""
    if n > alg.d + 1:
        raise ValueError("filtration level exceeds d + 1")
    win = u_window(alg.n_gens, alg.d, N + 2 * alg.d)
    chain = win.filtration(n)
    window_span = win.poisson_span(win.window_monomials(N))
    tail_span = win.poisson_span(win.window_monomials(N, min_star=n))
    rank_filtration = _intersection_rank(chain[n], window_span)
    tail_inside = all(chain[n].contains(row) for row in tail_span.basis())
    return FiltrationWindowReport(
        n=n,
        N=N,
        rank_filtration=rank_filtration,
        rank_expected=tail_span.rank,
        tail_inside_filtration=tail_inside,
    )


@dataclass
class GradedRankReport:
    n: int
    graded_rank: int
    envelope_rank: int

    @property
    def matches(self):
        return self.graded_rank == self.envelope_rank


def graded_of_Q(alg, N):
    """Ranks of F_n/F_{n+1} in the window against the graded envelope piece
    P_n (the graded-reconstruction witness for polynomial coordinates)."""
    win = u_window(alg.n_gens, alg.d, N + 2 * alg.d)
    chain = win.filtration(alg.d + 1)
    window_span = win.poisson_span(win.window_monomials(N))
    out = []
    for n in range(alg.d + 1):
        r_n = _intersection_rank(chain[n], window_span)
        r_n1 = _intersection_rank(chain[n + 1], window_span)
        p_n = win.poisson_span(
            [
                m
                for m in win.window_monomials(N)
                if m.star_degree == n
            ]
        ).rank
        out.append(
            GradedRankReport(n=n, graded_rank=r_n - r_n1, envelope_rank=p_n)
        )
    return out


@dataclass
class StarIdealReport:
    """Finite sanity check of the topology-equivalence bound: the N-th star
    power of the augmentation star-ideal J sits inside I^m G + G_{>=m}."""

    d: int
    m: int
    alpha: int
    power: int
    max_total: int
    included: bool


def star_ideal_topology_check(n_gens, d, m, alpha=None, extra_totals=2):
    """Check J^{*N} <= I^m G + G_{>=m} in Q^(d) for N = m * alpha^d + d.

    alpha bounds the bidifferential order of the truncated product (its p-th
    component has order <= p), floored at 2 because the base-alpha digit
    bookkeeping behind the bound degenerates below base 2 (at d = 1 the
    literal order 1 makes the inclusion false: x1 * x1 * x2 picks up the
    term x1*(12) of SV-degree 1).  The containment target is a coordinate
    subspace in Poisson coordinates: monomials with SV-part degree >= m or
    star degree >= m.
    """
    if alpha is None:
        alpha = max(2, d)
    power = m * alpha**d + d
    max_total = power + extra_totals
    win = u_window(n_gens, d, max_total)
    letters = [win.letter_vec(i) for i in range(1, n_gens + 1)]

    target = win.poisson_span(
        [
            mono
            for total in range(power, max_total + 1)
            for q in range(min(d, total) + 1)
            for mono in monomials_star_total(n_gens, q, total)
            if mono.poly_degree >= m or mono.star_degree >= m
        ]
    )

    def vec_total(v):
        return _tuple_total(win.tuples[next(iter(v))])

    def right_close(seeds, cap):
        # every J-power element is total-homogeneous; vectors whose total
        # exceeds the stage cap can never shrink back, so they are dropped
        ech = Echelon()
        queue = list(seeds)
        while queue:
            v = queue.pop()
            if not v or vec_total(v) > cap or not ech.add(v):
                continue
            for lv in letters:
                right = win.mul(v, lv)
                if right:
                    queue.append(right)
        return ech

    # J^{*k} elements have total >= k and the final membership test only
    # looks below max_total, so stage k is capped at k + extra_totals.
    # Right closure of the letters is all of total degree >= 1: every word
    # starts with a letter, so sum_i x_i * R is the full positive part.
    j_span = right_close(
        [dict(lv) for lv in letters], min(1 + extra_totals, max_total)
    )
    for k in range(2, power + 1):
        seeds = []
        for v in j_span.basis():
            for lv in letters:
                prod = win.mul(v, lv)
                if prod:
                    seeds.append(prod)
        # J^{*k} = J^{*(k-1)} * J = sum of J^{*(k-1)} x_i R: close on the right
        j_span = right_close(seeds, min(k + extra_totals, max_total))

    included = all(target.contains(row) for row in j_span.basis())
    return StarIdealReport(
        d=d,
        m=m,
        alpha=alpha,
        power=power,
        max_total=max_total,
        included=included,
    )


# -- finite window algebras (structure-constant form) ------------------------


def poisson_window_algebra(n_gens, d, max_total):
    """The free Poisson algebra cut to star degree <= d and total letter
    count <= max_total, as a TruncatedAlgebra with bracket.

    Both excess gradings span Poisson ideals, so the quotient is an honest
    finite-rank Poisson algebra.
    """
    from .filtration import TruncatedAlgebra
    from .freepoisson import multiply, poisson_bracket

    basis = []
    for total in range(max_total + 1):
        for q in range(min(d, total) + 1):
            basis.extend(monomials_star_total(n_gens, q, total))
    index = {m: i for i, m in enumerate(basis)}

    def coords(element):
        out = {}
        for m, c in element.terms.items():
            if m.star_degree <= d and m.total_degree <= max_total:
                out[index[m]] = c
        return out

    product = {}
    bracket = {}
    for i, m1 in enumerate(basis):
        e1 = PoissonElement.monomial(m1)
        for j, m2 in enumerate(basis):
            e2 = PoissonElement.monomial(m2)
            row = coords(multiply(e1, e2))
            if row:
                product[(i, j)] = row
            row = coords(poisson_bracket(e1, e2))
            if row:
                bracket[(i, j)] = row
    return TruncatedAlgebra(
        dim=len(basis),
        labels=[repr(m) for m in basis],
        unit=index[next(m for m in basis if m.total_degree == 0)],
        product=product,
        bracket=bracket,
        validate=True,
    )


def quantized_window_algebra(n_gens, d, max_total):
    """Q_X^(d) cut to total degree <= max_total, in PBW coordinates, as an
    associative TruncatedAlgebra (no bracket table)."""
    from .filtration import TruncatedAlgebra

    win = UWindow(n_gens, d, max_total)
    product = {}
    for i, t1 in enumerate(win.tuples):
        for j, t2 in enumerate(win.tuples):
            if _tuple_total(t1) + _tuple_total(t2) > max_total:
                continue
            row = win.mono_mul(t1, t2)
            if row:
                product[(i, j)] = row
    unit = win.index[()]
    labels = ["*".join(repr(f) for f in t) or "1" for t in win.tuples]
    return TruncatedAlgebra(
        dim=len(win.tuples),
        labels=labels,
        unit=unit,
        product=product,
        validate=True,
    )


def envelope_window_algebra(pres, max_total):
    """PA/P_{>d}A cut to total degree <= max_total, for a homogeneous
    presentation, as a TruncatedAlgebra with bracket.

    Basis vectors are the non-pivot monomials of the windowed ideal blocks;
    products and brackets are computed in SLV and reduced to normal form.
    """
    from .envelope import _generators_up_to, ideal_block
    from .filtration import TruncatedAlgebra
    from .freepoisson import multiply, poisson_bracket

    if not pres.homogeneous:
        raise ValueError("window algebra needs a homogeneous presentation")
    d = pres.d
    gens = _generators_up_to(pres, d)
    blocks = {}
    basis = []
    for total in range(max_total + 1):
        for q in range(min(d, total) + 1):
            cols, ech = ideal_block(pres, q, total, gens)
            index = {m: i for i, m in enumerate(cols)}
            blocks[(q, total)] = (cols, index, ech)
            pivots = set(ech.rows)
            basis.extend(m for i, m in enumerate(cols) if i not in pivots)
    gindex = {m: i for i, m in enumerate(basis)}

    def reduce_element(element):
        out = {}
        for m, c in element.terms.items():
            if m.star_degree > d or m.total_degree > max_total:
                continue
            cols, index, ech = blocks[(m.star_degree, m.total_degree)]
            for i, v in ech.normal_form({index[m]: c}).items():
                key = gindex[cols[i]]
                x = out.get(key, 0) + v
                if x:
                    out[key] = x
                else:
                    out.pop(key, None)
        return out

    product = {}
    bracket = {}
    for i, m1 in enumerate(basis):
        e1 = PoissonElement.monomial(m1)
        for j, m2 in enumerate(basis):
            e2 = PoissonElement.monomial(m2)
            row = reduce_element(multiply(e1, e2))
            if row:
                product[(i, j)] = row
            row = reduce_element(poisson_bracket(e1, e2))
            if row:
                bracket[(i, j)] = row
    return TruncatedAlgebra(
        dim=len(basis),
        labels=[repr(m) for m in basis],
        unit=gindex[next(m for m in basis if m.total_degree == 0)],
        product=product,
        bracket=bracket,
        validate=True,
    )
