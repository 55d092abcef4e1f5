"""Free Lie algebra on generators x1..xn inside the tensor algebra.

Words are tuples of 1-based generator indices.  The Lie algebra basis is the
set of Lyndon words, each carrying its standard (right) factorization as a
bracketing.  The grading is shifted: a basis element of word length k has
star degree k - 1, so the generators themselves sit in degree 0 and the
bracket adds degrees plus one.

Bracket rewriting goes through the tensor algebra: expand both sides as
noncommutative polynomials and solve an exact linear system against the
expanded Lyndon basis of the matching word length.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import Echelon, SparseVector, SpanSolver

Word = tuple  # tuple of 1-based generator indices


def is_lyndon(word):
    """True if ``word`` is strictly smaller than all its proper rotations."""
    n = len(word)
    if n == 0:
        return False
    for i in range(1, n):
        if word[i:] + word[:i] <= word:
            return False
    return True


def _standard_factorization(word):
    # w = uv with v the longest proper Lyndon suffix; u is then Lyndon too.
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise ValueError(f"{word} has no standard factorization")


class LieBasisElement:
    """A Lyndon word together with its standard bracketing.

    ``bracketing`` is a nested structure: a bare int for a letter, or a pair
    ``(left, right)`` of sub-bracketings.  Instances are immutable by
    convention and interned by word, so equality and hashing are cheap.
    """

    __slots__ = ("word", "bracketing", "star_degree", "sort_key", "_hash")

    def __init__(self, word, bracketing):
        self.word = word
        self.bracketing = bracketing
        self.star_degree = len(word) - 1
        self.sort_key = (len(word), word)
        self._hash = hash(word)

    @classmethod
    def from_word(cls, word):
        word = tuple(word)
        elt = _ELEMENT_CACHE.get(word)
        if elt is None:
            if not is_lyndon(word):
                raise ValueError(f"{word} is not a Lyndon word")
            elt = cls(word, _bracketing_of(word))
            _ELEMENT_CACHE[word] = elt
        return elt

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, LieBasisElement) and self.word == other.word

    def __repr__(self):
        if len(self.word) == 1:
            return f"x{self.word[0]}"
        return "(" + "".join(str(i) for i in self.word) + ")"


_ELEMENT_CACHE = {}
_BRACKETING_CACHE = {}


def _bracketing_of(word):
    tree = _BRACKETING_CACHE.get(word)
    if tree is None:
        if len(word) == 1:
            tree = word[0]
        else:
            u, v = _standard_factorization(word)
            tree = (_bracketing_of(u), _bracketing_of(v))
        _BRACKETING_CACHE[word] = tree
    return tree


def generator(i):
    """The basis element for the single letter x_i."""
    return LieBasisElement.from_word((i,))


def _merge_terms(acc, terms, scale=1):
    for k, v in terms.items():
        w = acc.get(k, 0) + scale * v
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)
    return acc


class TensorElement:
    """Exact rational combination of noncommutative words (element of TV).

    The empty word is the unit.  ``*`` is the concatenation product.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {
            tuple(w): Fraction(c) for w, c in (terms or {}).items() if c
        }

    @classmethod
    def word(cls, w, coeff=1):
        return cls({tuple(w): Fraction(coeff)})

    @classmethod
    def one(cls):
        return cls({(): Fraction(1)})

    @classmethod
    def zero(cls):
        return cls()

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        return TensorElement(_merge_terms(dict(self.terms), other.terms))

    def __sub__(self, other):
        return TensorElement(_merge_terms(dict(self.terms), other.terms, -1))

    def __neg__(self):
        return TensorElement({w: -c for w, c in self.terms.items()})

    def __rmul__(self, c):
        c = Fraction(c)
        if not c:
            return TensorElement()
        return TensorElement({w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                _merge_terms(out, {w1 + w2: c1 * c2})
        return TensorElement(out)

    def word_lengths(self):
        return sorted({len(w) for w in self.terms})

    def length_component(self, length):
        return TensorElement(
            {w: c for w, c in self.terms.items() if len(w) == length}
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            bits.append(f"{self.terms[w]}*{''.join(map(str, w)) or '1'}")
        return " + ".join(bits)


class LieElement:
    """Exact rational combination of Lyndon basis elements."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {b: Fraction(c) for b, c in (terms or {}).items() if c}

    @classmethod
    def basis(cls, elt, coeff=1):
        return cls({elt: Fraction(coeff)})

    @classmethod
    def zero(cls):
        return cls()

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, LieElement) and self.terms == other.terms

    def __add__(self, other):
        return LieElement(_merge_terms(dict(self.terms), other.terms))

    def __sub__(self, other):
        return LieElement(_merge_terms(dict(self.terms), other.terms, -1))

    def __neg__(self):
        return LieElement({b: -c for b, c in self.terms.items()})

    def __rmul__(self, c):
        c = Fraction(c)
        if not c:
            return LieElement()
        return LieElement({b: c * v for b, v in self.terms.items()})

    def star_degrees(self):
        return sorted({b.star_degree for b in self.terms})

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for b in sorted(self.terms, key=lambda b: b.sort_key):
            bits.append(f"{self.terms[b]}*{b!r}")
        return " + ".join(bits)


def lyndon_words(n_gens, max_len):
    """All Lyndon words over 1..n_gens of length <= max_len (Duval, lex order)."""
    if n_gens < 1 or max_len < 1:
        return []
    out = []
    w = [1]
    while w:
        out.append(tuple(w))
        w = (w * (max_len // len(w) + 1))[:max_len]
        while w and w[-1] == n_gens:
            w.pop()
        if w:
            w[-1] += 1
    return sorted(out, key=lambda u: (len(u), u))


_BASIS_CACHE = {}


def lyndon_basis_of_length(n_gens, length):
    """Lyndon basis elements of exact word length, in word order."""
    key = (n_gens, length)
    if key not in _BASIS_CACHE:
        _BASIS_CACHE[key] = [
            LieBasisElement.from_word(w)
            for w in lyndon_words(n_gens, length)
            if len(w) == length
        ]
    return _BASIS_CACHE[key]


def lyndon_basis(n_gens, max_star_degree):
    """Lyndon basis grouped by star degree 0..max_star_degree.

    The count in degree s is the Witt number W(s+1) over n_gens letters.
    """
    if n_gens < 1:
        raise ValueError("need at least one generator")
    return [
        lyndon_basis_of_length(n_gens, s + 1) for s in range(max_star_degree + 1)
    ]


def _mobius(n):
    mu, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            mu = -mu
        p += 1
    if n > 1:
        mu = -mu
    return mu


def witt_number(n_gens, length):
    """Dimension of the word-length-``length`` piece of the free Lie algebra."""
    total = 0
    for d in range(1, length + 1):
        if length % d == 0:
            total += _mobius(d) * n_gens ** (length // d)
    assert total % length == 0
    return total // length


_EXPAND_CACHE = {}


def _expand_tree(tree):
    if isinstance(tree, int):
        return TensorElement.word((tree,))
    key = tree
    out = _EXPAND_CACHE.get(key)
    if out is None:
        a = _expand_tree(tree[0])
        b = _expand_tree(tree[1])
        out = a * b - b * a
        _EXPAND_CACHE[key] = out
    return out


def expand_to_tensor(a):
    """Image of a Lie element under the inclusion LV in TV."""
    if isinstance(a, LieBasisElement):
        return _expand_tree(a.bracketing)
    out = TensorElement()
    for b, c in a.terms.items():
        out = out + c * _expand_tree(b.bracketing)
    return out


def _word_index(word, n_gens):
    idx = 0
    for a in word:
        idx = idx * n_gens + (a - 1)
    return idx


def _tensor_vector(t, n_gens, length):
    dim = n_gens**length
    return SparseVector(
        dim, {_word_index(w, n_gens): c for w, c in t.terms.items()}
    )


_REWRITE_SOLVERS = {}


def _rewrite_solver(n_gens, length):
    key = (n_gens, length)
    if key not in _REWRITE_SOLVERS:
        basis = lyndon_basis_of_length(n_gens, length)
        vecs = [
            _tensor_vector(expand_to_tensor(b), n_gens, length) for b in basis
        ]
        _REWRITE_SOLVERS[key] = (basis, SpanSolver(vecs))
    return _REWRITE_SOLVERS[key]


def rewrite_in_basis(t, n_gens=None):
    """Lyndon-basis coordinates of a tensor element, or None if not in LV."""
    if t.is_zero():
        return LieElement.zero()
    if () in t.terms:
        return None
    if n_gens is None:
        n_gens = max(max(w) for w in t.terms)
    out = {}
    for length in t.word_lengths():
        comp = t.length_component(length)
        basis, solver = _rewrite_solver(n_gens, length)
        coeffs = solver.solve(_tensor_vector(comp, n_gens, length))
        if coeffs is None:
            return None
        for b, c in zip(basis, coeffs):
            if c:
                out[b] = c
    return LieElement(out)


_BRACKET_CACHE = {}


def bracket_basis(a, b):
    """[a, b] for basis elements, expressed in the Lyndon basis (memoized)."""
    if a.word == b.word:
        return LieElement.zero()
    key = (a.word, b.word)
    out = _BRACKET_CACHE.get(key)
    if out is None:
        ta, tb = expand_to_tensor(a), expand_to_tensor(b)
        out = rewrite_in_basis(ta * tb - tb * ta, max(max(a.word), max(b.word)))
        assert out is not None, "commutator of Lie elements left LV"
        _BRACKET_CACHE[key] = out
    return out


def lie_bracket(a, b):
    """Lie bracket of two Lie elements, in the Lyndon basis."""
    out = LieElement.zero()
    for x, cx in a.terms.items():
        for y, cy in b.terms.items():
            out = out + (cx * cy) * bracket_basis(x, y)
    return out


def left_normed_tensor(letters):
    """[x_{i1},[x_{i2},[...,[x_{ik},x_{ik+1}]...]]] expanded in TV.

    These left-normed brackets are the classical spanning set of the free Lie
    algebra; they are the independent oracle against which the Lyndon basis
    dimensions are checked.
    """
    letters = tuple(letters)
    out = TensorElement.word((letters[-1],))
    for i in reversed(letters[:-1]):
        xi = TensorElement.word((i,))
        out = xi * out - out * xi
    return out


def _compositions(total):
    # all ordered compositions of ``total`` into parts >= 1
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


def tensor_filtration_basis(n_gens, word_len, n):
    """Basis of F_n TV intersected with words of exact length ``word_len``.

    F_n TV is spanned by concatenation products of homogeneous Lie elements
    whose star degrees sum to at least n.  The spanning set (all ordered
    products of Lyndon basis expansions) is reduced to a basis by exact
    elimination, in a deterministic order.
    """
    if word_len < 1:
        raise ValueError("word_len must be positive")
    picked = []
    ech = Echelon()
    for comp in _compositions(word_len):
        if word_len - len(comp) < n:
            continue  # max achievable star degree falls short
        pools = [lyndon_basis_of_length(n_gens, part) for part in comp]
        for combo in _product_pools(pools):
            if sum(b.star_degree for b in combo) < n:
                continue
            t = TensorElement.one()
            for b in combo:
                t = t * expand_to_tensor(b)
            vec = _tensor_vector(t, n_gens, word_len)
            if ech.add(vec.entries):
                picked.append(t)
    return picked


def _product_pools(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _product_pools(pools[1:]):
            yield (head,) + rest
