"""Poincare-Birkhoff-Witt machinery for the tensor algebra as U(LV).

The tensor algebra has a second useful basis besides words: concatenation
products l_1 l_2 ... l_k of Lyndon basis elements with nondecreasing
(word length, word) keys.  ``normal`` rewrites any product into that basis by
the straightening rule

    l_i l_j  =  l_j l_i + [l_i, l_j]        (when l_i > l_j)

where the bracket term has one factor fewer, so the rewriting terminates.

Symmetrization e and its inverse live here too.  e of a k-factor monomial is
the sorted product plus terms with fewer factors, so e is unitriangular with
respect to the factor count; e_inverse peels the top factor count, subtracts
its symmetrization and recurses.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .freelie import (
    TensorElement,
    bracket_basis,
    expand_to_tensor,
    generator,
)


def _merge(acc, terms, scale=1):
    for k, v in terms.items():
        w = acc.get(k, 0) + scale * v
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)
    return acc


def is_normal(factors):
    keys = [f.sort_key for f in factors]
    return all(keys[i] <= keys[i + 1] for i in range(len(keys) - 1))


_NORMAL_CACHE = {}


def normal(factors):
    """PBW normal form of a concatenation product of basis elements.

    Returns a dict mapping nondecreasing factor tuples to coefficients.
    """
    factors = tuple(factors)
    hit = _NORMAL_CACHE.get(factors)
    if hit is not None:
        return dict(hit)
    swap_at = None
    for i in range(len(factors) - 1):
        if factors[i].sort_key > factors[i + 1].sort_key:
            swap_at = i
            break
    if swap_at is None:
        out = {factors: Fraction(1)}
    else:
        i = swap_at
        swapped = factors[:i] + (factors[i + 1], factors[i]) + factors[i + 2 :]
        out = dict(normal(swapped))
        for b, c in bracket_basis(factors[i], factors[i + 1]).terms.items():
            _merge(out, normal(factors[:i] + (b,) + factors[i + 2 :]), c)
    _NORMAL_CACHE[factors] = out
    return dict(out)


def word_to_pbw(word):
    """A word, seen as a product of letter factors, in PBW normal form."""
    return normal(tuple(generator(i) for i in word))


def tensor_to_pbw(t):
    out = {}
    for w, c in t.terms.items():
        _merge(out, word_to_pbw(w), c)
    return out


def pbw_to_tensor(factors):
    out = TensorElement.one()
    for f in factors:
        out = out * expand_to_tensor(f)
    return out


def multiset_permutations(items):
    """Distinct permutations of a sequence of (hashable, orderable-key) items."""
    items = sorted(items, key=lambda f: f.sort_key)
    distinct = []
    counts = []
    for it in items:
        if distinct and distinct[-1] == it:
            counts[-1] += 1
        else:
            distinct.append(it)
            counts.append(1)
    n = len(items)
    acc = []

    def rec(remaining):
        if remaining == 0:
            yield tuple(acc)
            return
        for idx in range(len(distinct)):
            if counts[idx]:
                counts[idx] -= 1
                acc.append(distinct[idx])
                yield from rec(remaining - 1)
                acc.pop()
                counts[idx] += 1

    yield from rec(n)


def symmetrize_factors(factors):
    """e(l_1 ... l_k): average the concatenations over all factor orders."""
    factors = tuple(factors)
    k = len(factors)
    if k == 0:
        return TensorElement.one()
    mult = Fraction(1)
    seen = {}
    for f in factors:
        seen[f] = seen.get(f, 0) + 1
    for m in seen.values():
        mult *= factorial(m)
    weight = mult / factorial(k)
    out = TensorElement.zero()
    for perm in multiset_permutations(factors):
        out = out + weight * pbw_to_tensor(perm)
    return out


_SYM_PBW_CACHE = {}


def sym_pbw(factors):
    """e of a monomial, expressed in the PBW basis (memoized).

    Uses the first-factor recursion e(m) = (1/k) sum_f f e(m/f) over the k
    factor positions, which stays in PBW coordinates; it agrees with the
    definitional average over all orders (the recursion is that average,
    grouped by which factor comes first).
    """
    factors = tuple(sorted(factors, key=lambda f: f.sort_key))
    hit = _SYM_PBW_CACHE.get(factors)
    if hit is None:
        k = len(factors)
        if k == 0:
            hit = {(): Fraction(1)}
        else:
            hit = {}
            i = 0
            while i < k:
                f = factors[i]
                j = i
                while j < k and factors[j] == f:
                    j += 1
                weight = Fraction(j - i, k)
                rest = sym_pbw(factors[:i] + factors[i + 1 :])
                for t, c in rest.items():
                    _merge(hit, normal((f,) + t), weight * c)
                i = j
        _SYM_PBW_CACHE[factors] = hit
    return dict(hit)


_EINV_WORD_CACHE = {}


def e_inverse_word(word):
    """e^{-1} of a single word, as a dict factor-tuple -> coefficient.

    Triangular induction on the factor count: the top part of the PBW normal
    form is already symmetric-leading, so subtracting its symmetrization
    strictly lowers the maximal factor count.
    """
    word = tuple(word)
    hit = _EINV_WORD_CACHE.get(word)
    if hit is not None:
        return dict(hit)
    current = word_to_pbw(word)
    result = {}
    guard = len(word) + 1
    while current:
        guard -= 1
        if guard < 0:  # pragma: no cover - triangularity violated
            raise RuntimeError("e_inverse failed to terminate")
        top_count = max(len(t) for t in current)
        top = {t: c for t, c in current.items() if len(t) == top_count}
        for t, c in top.items():
            _merge(result, {t: c})
            _merge(current, sym_pbw(t), -c)
        if any(len(t) >= top_count for t in current):  # pragma: no cover
            raise RuntimeError("symmetrization is not unitriangular")
    _EINV_WORD_CACHE[word] = result
    return dict(result)
