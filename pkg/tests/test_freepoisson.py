import itertools as it
import random
from fractions import Fraction

from poissonenv.freelie import LieBasisElement, TensorElement, _tensor_vector
from poissonenv.freepoisson import (
    PoissonElement,
    bigraded_component,
    e_inverse,
    monomials_star_total,
    multiply,
    poisson_bracket,
    star_component,
    star_product,
    symmetrize,
)
from poissonenv.linalg import SpanSolver


def gen(i):
    return PoissonElement.generator(i)


def lie(word):
    from poissonenv.freelie import LieElement

    return PoissonElement.from_lie(LieElement.basis(LieBasisElement.from_word(word)))


def word(w, c=1):
    return TensorElement.word(w, c)


def test_multiply_generators():
    p = multiply(gen(1), gen(2))
    (m, c) = next(iter(p.terms.items()))
    assert c == 1 and [f.word for f in m.factors] == [(1,), (2,)]


def test_multiply_unit():
    a = gen(1) + lie((1, 2))
    assert multiply(PoissonElement.one(), a) == a


def test_multiply_distributes():
    a = gen(1) + lie((1, 2))
    assert multiply(a, gen(1)) == multiply(gen(1), gen(1)) + multiply(
        lie((1, 2)), gen(1)
    )


def test_multiply_commutative_bidegrees_add():
    a, b = multiply(gen(1), gen(2)), lie((1, 2))
    assert multiply(a, b) == multiply(b, a)
    for m in multiply(a, b).terms:
        assert m.sym_degree == 3 and m.star_degree == 1


def test_bracket_generators():
    assert poisson_bracket(gen(1), gen(2)) == lie((1, 2))


def test_bracket_leibniz_form():
    lhs = poisson_bracket(gen(1), multiply(gen(2), gen(3)))
    rhs = multiply(gen(2), lie((1, 3))) + multiply(gen(3), lie((1, 2)))
    assert lhs == rhs


def test_bracket_lie_element_with_generator():
    assert poisson_bracket(lie((1, 2)), gen(1)) == -1 * lie((1, 1, 2))


def test_symmetrize_two_letters():
    assert symmetrize(multiply(gen(1), gen(2))) == Fraction(1, 2) * (
        word((1, 2)) + word((2, 1))
    )


def test_symmetrize_square():
    assert symmetrize(multiply(gen(1), gen(1))) == word((1, 1))


def test_symmetrize_mixed_factor():
    got = symmetrize(multiply(gen(1), lie((1, 2))))
    assert got == Fraction(1, 2) * (word((1, 1, 2)) - word((2, 1, 1)))


def test_e_inverse_square():
    assert e_inverse(word((1, 1))) == multiply(gen(1), gen(1))


def test_e_inverse_lie_element():
    assert e_inverse(word((1, 2)) - word((2, 1))) == lie((1, 2))


def test_e_inverse_single_word():
    expected = multiply(gen(1), gen(2)) + Fraction(1, 2) * lie((1, 2))
    assert e_inverse(word((1, 2))) == expected


def _solver_oracle(length):
    monos = monomials_star_total(2, 0, length)
    for q in range(1, length + 1):
        monos += monomials_star_total(2, q, length)
    vecs = [
        _tensor_vector(symmetrize(PoissonElement.monomial(m)), 2, length)
        for m in monos
    ]
    return monos, SpanSolver(vecs)


def test_e_inverse_against_solver_oracle():
    # independent route: solve the target against the symmetrized monomial
    # basis instead of the triangular normal-form recursion
    for length in (2, 3, 4):
        monos, solver = _solver_oracle(length)
        for w in it.product((1, 2), repeat=length):
            coeffs = solver.solve(_tensor_vector(word(w), 2, length))
            assert coeffs is not None
            expected = PoissonElement.zero()
            for c, m in zip(coeffs, monos):
                expected = expected + PoissonElement.monomial(m, c)
            assert e_inverse(word(w)) == expected


def test_star_product_generators():
    expected = multiply(gen(1), gen(2)) + Fraction(1, 2) * lie((1, 2))
    assert star_product(gen(1), gen(2)) == expected


def test_star_product_unit():
    a = multiply(gen(1), lie((1, 2))) + gen(2)
    assert star_product(PoissonElement.one(), a) == a


def test_star_product_reversed():
    expected = multiply(gen(1), gen(2)) - Fraction(1, 2) * lie((1, 2))
    assert star_product(gen(2), gen(1)) == expected


def test_star_component_zero_is_product():
    a = multiply(gen(1), gen(1))
    assert star_component(a, gen(2), 0) == multiply(a, gen(2))


def test_star_component_one_is_half_bracket():
    a = multiply(gen(1), gen(1))
    b = multiply(gen(2), gen(2))
    got = star_component(a, b, 1)
    assert got == Fraction(1, 2) * poisson_bracket(a, b)
    assert got == 2 * multiply(multiply(gen(1), gen(2)), lie((1, 2)))


def test_star_component_two_frozen_value():
    # sym-degree-2 part of e^{-1}(1122); the value was frozen from the
    # solver oracle of test_e_inverse_against_solver_oracle
    a = multiply(gen(1), gen(1))
    b = multiply(gen(2), gen(2))
    got = star_component(a, b, 2)
    expected = (
        Fraction(1, 3) * multiply(gen(1), lie((1, 2, 2)))
        + Fraction(1, 3) * multiply(gen(2), lie((1, 1, 2)))
        + Fraction(1, 2) * multiply(lie((1, 2)), lie((1, 2)))
    )
    assert got == expected
    full = e_inverse(word((1, 1, 2, 2)))
    assert got == full.sym_part(2)


def test_bigraded_component():
    x1 = gen(1)
    p = multiply(x1, lie((1, 2)))
    assert bigraded_component(p, 2, 1) == p
    assert bigraded_component(p, 1, 1).is_zero()
    b = star_product(gen(1), gen(2))
    assert bigraded_component(b, 2, 0) == multiply(gen(1), gen(2))
    assert bigraded_component(b, 1, 1) == Fraction(1, 2) * lie((1, 2))


def test_poisson_bracket_leibniz_and_jacobi_random():
    rng = random.Random(9)
    pool = monomials_star_total(2, 0, 1) + monomials_star_total(2, 0, 2)
    pool += monomials_star_total(2, 1, 2) + monomials_star_total(2, 1, 3)

    def rand_elt():
        out = PoissonElement.zero()
        for m in rng.sample(pool, 3):
            out = out + PoissonElement.monomial(m, Fraction(rng.randint(-3, 3)))
        return out

    for _ in range(20):
        a, b, c = rand_elt(), rand_elt(), rand_elt()
        assert poisson_bracket(a, multiply(b, c)) == multiply(
            b, poisson_bracket(a, c)
        ) + multiply(c, poisson_bracket(a, b))
        jac = (
            poisson_bracket(a, poisson_bracket(b, c))
            + poisson_bracket(b, poisson_bracket(c, a))
            + poisson_bracket(c, poisson_bracket(a, b))
        )
        assert jac.is_zero()


def test_bracket_star_degree_shift():
    a = multiply(gen(1), lie((1, 2)))
    b = lie((1, 1, 2))
    got = poisson_bracket(a, b)
    for m in got.terms:
        assert m.star_degree == 1 + 2 + 1
