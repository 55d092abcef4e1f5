"""Filtrations of finite-rank algebras given by structure constants.

The commutator filtration is the smallest descending chain with
F_p F_q <= F_{p+q} and [F_p, F_q] <= F_{p+q+1}; its defining recursion

    F_{n+1} = sum_{p=1}^{n} F_p F_{n+1-p} + sum_{p=0}^{n} <[F_p, F_{n-p}]>

is iterated literally, with the two-sided-ideal closure recomputed inside
every sum.  The nil-Poisson filtration replaces commutators by the Poisson
bracket.  Chains are iterated to stabilization; the stable value need not be
zero (upper-triangular matrices stabilize at the strictly-upper part), and
whether it vanishes is the nilcommutativity certificate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .linalg import Echelon, SparseMatrix, SparseVector, SpanSolver


def _merge(acc, terms, scale=1):
    for k, v in terms.items():
        w = acc.get(k, 0) + scale * v
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)
    return acc


class TruncatedAlgebra:
    """Finite-rank unital algebra with sparse structure constants.

    ``product[(i, j)]`` is the coordinate dict of basis_i * basis_j; an
    optional ``bracket`` table makes it a Poisson algebra.  The constructor
    verifies associativity, the unit law and (when present) antisymmetry,
    Jacobi and Leibniz on all basis triples.
    """

    def __init__(self, dim, labels, unit, product, bracket=None, validate=True):
        self.dim = dim
        self.labels = list(labels)
        self.unit = unit
        self.product = {k: dict(v) for k, v in product.items() if v}
        self.bracket = (
            None if bracket is None else {k: dict(v) for k, v in bracket.items() if v}
        )
        if len(self.labels) != dim:
            raise ValueError("label count must match dim")
        if validate:
            self._validate()

    # -- arithmetic on coordinate dicts ------------------------------------
    def mul(self, v, w):
        out = {}
        for i, ci in v.items():
            for j, cj in w.items():
                c = ci * cj
                for k, s in self.product.get((i, j), {}).items():
                    x = out.get(k, 0) + c * s
                    if x:
                        out[k] = x
                    else:
                        out.pop(k, None)
        return out

    def brk(self, v, w):
        if self.bracket is None:
            raise ValueError("algebra carries no bracket")
        out = {}
        for i, ci in v.items():
            for j, cj in w.items():
                c = ci * cj
                for k, s in self.bracket.get((i, j), {}).items():
                    x = out.get(k, 0) + c * s
                    if x:
                        out[k] = x
                    else:
                        out.pop(k, None)
        return out

    def commutator(self, v, w):
        return _merge(dict(self.mul(v, w)), self.mul(w, v), -1)

    def basis_vec(self, i):
        return {i: Fraction(1)}

    def unit_vec(self):
        return {self.unit: Fraction(1)}

    def _validate(self):
        e = self.unit_vec()
        for i in range(self.dim):
            v = self.basis_vec(i)
            if self.mul(e, v) != v or self.mul(v, e) != v:
                raise ValueError(f"unit law fails at basis {i}")
        for i in range(self.dim):
            vi = self.basis_vec(i)
            for j in range(self.dim):
                vj = self.basis_vec(j)
                ij = self.mul(vi, vj)
                for k in range(self.dim):
                    vk = self.basis_vec(k)
                    if self.mul(ij, vk) != self.mul(vi, self.mul(vj, vk)):
                        raise ValueError(f"associativity fails at {(i, j, k)}")
        if self.bracket is None:
            return
        for i in range(self.dim):
            vi = self.basis_vec(i)
            for j in range(self.dim):
                vj = self.basis_vec(j)
                if _merge(dict(self.brk(vi, vj)), self.brk(vj, vi)):
                    raise ValueError(f"bracket not antisymmetric at {(i, j)}")
        for i in range(self.dim):
            vi = self.basis_vec(i)
            for j in range(self.dim):
                vj = self.basis_vec(j)
                for k in range(self.dim):
                    vk = self.basis_vec(k)
                    jac = dict(self.brk(vi, self.brk(vj, vk)))
                    _merge(jac, self.brk(vj, self.brk(vk, vi)))
                    _merge(jac, self.brk(vk, self.brk(vi, vj)))
                    if jac:
                        raise ValueError(f"Jacobi fails at {(i, j, k)}")
                    leib = dict(self.brk(vi, self.mul(vj, vk)))
                    _merge(leib, self.mul(vj, self.brk(vi, vk)), -1)
                    _merge(leib, self.mul(self.brk(vi, vj), vk), -1)
                    if leib:
                        raise ValueError(f"Leibniz fails at {(i, j, k)}")

    # -- serialization ------------------------------------------------------
    def to_json_dict(self):
        def table(t):
            return [
                [i, j, k, str(c)]
                for (i, j), row in sorted(t.items())
                for k, c in sorted(row.items())
            ]

        out = {
            "dim": self.dim,
            "labels": [str(l) for l in self.labels],
            "unit": self.unit,
            "product": table(self.product),
        }
        if self.bracket is not None:
            out["bracket"] = table(self.bracket)
        return out

    @classmethod
    def from_json_dict(cls, data, validate=True):
        def table(rows):
            t = {}
            for i, j, k, c in rows:
                t.setdefault((i, j), {})[k] = Fraction(c)
            return t

        return cls(
            dim=data["dim"],
            labels=data["labels"],
            unit=data["unit"],
            product=table(data["product"]),
            bracket=table(data["bracket"]) if data.get("bracket") else None,
            validate=validate,
        )

    def dump(self, fp):
        json.dump(self.to_json_dict(), fp, indent=1)

    @classmethod
    def load(cls, fp, validate=True):
        return cls.from_json_dict(json.load(fp), validate=validate)


@dataclass
class FiltrationChain:
    """Descending chain F_0 >= F_1 >= ... down to its stable value."""

    pieces: list  # list of lists of coordinate dicts (echelon bases)
    stable_is_zero: bool

    @property
    def length(self):
        return len(self.pieces)

    def rank(self, n):
        return len(self.piece_basis(n))

    def piece_basis(self, n):
        if n < len(self.pieces):
            return self.pieces[n]
        return self.pieces[-1]

    def piece_echelon(self, n):
        ech = Echelon()
        for row in self.piece_basis(n):
            ech.add(row)
        return ech

    def ranks(self):
        return [len(p) for p in self.pieces]


def _ideal_closure(alg, seeds):
    ech = Echelon()
    queue = [dict(s) for s in seeds]
    basis = [alg.basis_vec(i) for i in range(alg.dim)]
    while queue:
        v = queue.pop()
        if not v or not ech.add(v):
            continue
        for b in basis:
            left = alg.mul(b, v)
            if left:
                queue.append(left)
            right = alg.mul(v, b)
            if right:
                queue.append(right)
    return ech


def _filtration(alg, pair_map):
    full = Echelon()
    for i in range(alg.dim):
        full.add(alg.basis_vec(i))
    chain = [full]
    while True:
        n = len(chain) - 1
        new = Echelon()
        for p in range(1, n + 1):
            q = n + 1 - p
            for v in chain[p].basis():
                for w in chain[q].basis():
                    prod = alg.mul(v, w)
                    if prod:
                        new.add(prod)
        for p in range(0, n + 1):
            q = n - p
            gens = []
            for v in chain[p].basis():
                for w in chain[q].basis():
                    c = pair_map(v, w)
                    if c:
                        gens.append(c)
            # the ideal closure nests inside the sum: each summand is closed
            # on its own before the pieces are added up
            if gens:
                for row in _ideal_closure(alg, gens).basis():
                    new.add(row)
        if new.rank == chain[-1].rank:
            # descending chain: equal rank means equal span; stable from here
            return FiltrationChain(
                pieces=[e_basis(c) for c in chain],
                stable_is_zero=(new.rank == 0),
            )
        chain.append(new)
        if new.rank == 0:
            return FiltrationChain(
                pieces=[e_basis(c) for c in chain], stable_is_zero=True
            )


def e_basis(ech):
    return ech.basis()


def commutator_filtration(alg):
    """Iterate the commutator-filtration recursion to stabilization."""
    return _filtration(alg, alg.commutator)


def nil_poisson_filtration(alg):
    """The Poisson analogue, driven by the bracket table."""
    if alg.bracket is None:
        raise ValueError("nil-Poisson filtration needs a bracket")
    return _filtration(alg, alg.brk)


def chain_is_admissible(alg, pieces, use_bracket=False):
    """Check the defining containments for a hand-supplied descending chain.

    ``pieces`` maps n -> list of coordinate dicts; the chain is padded with
    its last piece.  Verifies F_p F_q <= F_{p+q} and bracket/commutator of
    F_p, F_q inside F_{p+q+1}.
    """
    echs = []
    for basis in pieces:
        ech = Echelon()
        for row in basis:
            ech.add(row)
        echs.append(ech)

    def piece(n):
        return echs[min(n, len(echs) - 1)]

    pair = alg.brk if use_bracket else alg.commutator
    top = len(echs) + 1
    for p in range(top):
        for q in range(top):
            for v in piece(p).basis():
                for w in piece(q).basis():
                    if not piece(p + q).contains(alg.mul(v, w)):
                        return False
                    if not piece(p + q + 1).contains(pair(v, w)):
                        return False
    return True


def associated_graded(alg, chain):
    """The graded Poisson algebra sum F_n/F_{n+1} of a vanishing chain.

    Grade representatives are chosen deterministically from the chain's
    echelon bases; the product of grades p and q is projected to grade
    p + q, and the commutator (degree +1) induces the bracket.
    """
    if not chain.stable_is_zero:
        raise ValueError("associated graded needs a chain that reaches zero")
    echs = [chain.piece_echelon(n) for n in range(chain.length + 1)]
    reps = []  # list per grade of coordinate dicts
    for n in range(chain.length):
        ech = Echelon()
        for row in echs[n + 1].basis():
            ech.add(row)
        grade = []
        for row in echs[n].basis():
            if ech.add(row):
                grade.append(row)
        reps.append(grade)

    labels = []
    grade_of = []
    flat = []
    for n, grade in enumerate(reps):
        for k, row in enumerate(grade):
            labels.append(f"g{n}.{k}")
            grade_of.append(n)
            flat.append(row)
    dim = len(flat)

    def as_vec(row):
        return SparseVector(alg.dim, row)

    solvers = {}

    def project(vec, grade):
        """Coordinates of ``vec`` on the grade representatives mod F_{grade+1}."""
        if not vec:
            return {}
        if grade >= chain.length:
            if not echs[min(grade, len(echs) - 1)].contains(vec):
                raise ValueError("chain is not multiplicative")
            return {}
        if grade not in solvers:
            tail = echs[grade + 1].basis()
            solvers[grade] = (
                SpanSolver([as_vec(r) for r in reps[grade] + tail]),
                len(reps[grade]),
            )
        solver, n_reps = solvers[grade]
        coeffs = solver.solve(as_vec(vec))
        if coeffs is None:
            raise ValueError("vector not inside its filtration grade")
        offset = sum(len(g) for g in reps[:grade])
        return {offset + k: c for k, c in enumerate(coeffs[:n_reps]) if c}

    product = {}
    bracket = {}
    for a in range(dim):
        for b in range(dim):
            ga, gb = grade_of[a], grade_of[b]
            prod = alg.mul(flat[a], flat[b])
            row = project(prod, ga + gb)
            if row:
                product[(a, b)] = row
            com = alg.commutator(flat[a], flat[b])
            row = project(com, ga + gb + 1)
            if row:
                bracket[(a, b)] = row
    unit_row = project(alg.unit_vec(), 0)
    if list(unit_row.values()) == [Fraction(1)] and len(unit_row) == 1:
        unit = next(iter(unit_row))
    else:
        raise ValueError("unit does not project to a graded basis vector")
    return TruncatedAlgebra(
        dim=dim,
        labels=labels,
        unit=unit,
        product=product,
        bracket=bracket,
        validate=True,
    )


@dataclass(frozen=True)
class EndoMap:
    """A linear map given by its matrix; columns are images of basis vectors."""

    matrix: SparseMatrix

    def apply(self, vec):
        out = {}
        for j, c in vec.items():
            for (i, jj), m in self.matrix.entries.items():
                if jj == j:
                    x = out.get(i, 0) + c * m
                    if x:
                        out[i] = x
                    else:
                        out.pop(i, None)
        return out

    @classmethod
    def from_columns(cls, dim, columns):
        entries = {}
        for j, col in enumerate(columns):
            for i, c in col.items():
                entries[(i, j)] = c
        return cls(SparseMatrix(dim, dim, entries))

    def columns(self):
        cols = [dict() for _ in range(self.matrix.cols)]
        for (i, j), c in self.matrix.entries.items():
            cols[j][i] = c
        return cols


@dataclass
class ContractionReport:
    """Outcome of the endomorphism contraction test."""

    is_endomorphism: bool
    identity_mod_f1: bool
    difference_identities_hold: bool
    inclusions: list  # per n: D(F_n) <= F_{n+1}
    identity_on_top: bool
    top_index: int

    @property
    def passed(self):
        return (
            self.is_endomorphism
            and self.identity_mod_f1
            and self.difference_identities_hold
            and all(self.inclusions)
            and self.identity_on_top
        )


def endo_contraction_check(alg, f, chain, use_bracket=True):
    """Verify the contraction behaviour of an endomorphism fixing F_0/F_1.

    Checks, in order: f is a unital multiplicative (and bracket-preserving,
    for the Poisson variant) endomorphism; f == id modulo F_1; the
    difference D = f - id satisfies
        D{p,q} = {Dp,q} + {p,Dq} - {Dp,Dq}
        D(pq)  = p Dq + q Dp - Dp Dq
    on all basis pairs; D(F_n) <= F_{n+1} for every computed degree; hence f
    restricts to the identity on the last nonzero piece.
    """
    pair = alg.brk if use_bracket else alg.commutator
    cols = f.columns()

    ok_endo = f.apply(alg.unit_vec()) == alg.unit_vec()
    for i in range(alg.dim):
        if not ok_endo:
            break
        vi = alg.basis_vec(i)
        fi = cols[i]
        for j in range(alg.dim):
            vj = alg.basis_vec(j)
            fj = cols[j]
            if f.apply(alg.mul(vi, vj)) != alg.mul(fi, fj):
                ok_endo = False
                break
            if use_bracket and f.apply(alg.brk(vi, vj)) != alg.brk(fi, fj):
                ok_endo = False
                break

    f1 = chain.piece_echelon(1)

    def D(vec):
        return _merge(dict(f.apply(vec)), vec, -1)

    identity_mod_f1 = all(
        f1.contains(D(alg.basis_vec(i))) for i in range(alg.dim)
    )

    identities = True
    for i in range(alg.dim):
        vi = alg.basis_vec(i)
        for j in range(alg.dim):
            vj = alg.basis_vec(j)
            lhs = dict(D(pair(vi, vj)))
            _merge(lhs, pair(D(vi), vj), -1)
            _merge(lhs, pair(vi, D(vj)), -1)
            _merge(lhs, pair(D(vi), D(vj)))
            if lhs:
                identities = False
                break
            lhs = dict(D(alg.mul(vi, vj)))
            _merge(lhs, alg.mul(vi, D(vj)), -1)
            _merge(lhs, alg.mul(vj, D(vi)), -1)
            _merge(lhs, alg.mul(D(vi), D(vj)))
            if lhs:
                identities = False
                break
        if not identities:
            break

    inclusions = []
    top = chain.length - 1
    for n in range(chain.length):
        nxt = chain.piece_echelon(n + 1)
        inclusions.append(
            all(nxt.contains(D(row)) for row in chain.piece_basis(n))
        )
    identity_on_top = all(not D(row) for row in chain.piece_basis(top))

    return ContractionReport(
        is_endomorphism=ok_endo,
        identity_mod_f1=identity_mod_f1,
        difference_identities_hold=identities,
        inclusions=inclusions,
        identity_on_top=identity_on_top,
        top_index=top,
    )


def exp_nilpotent_endo(alg, derivation_cols):
    """exp of a nilpotent derivation, as an EndoMap.

    The derivation is given by its columns; it must vanish after at most
    ``dim`` iterations, which holds for every degree-raising derivation of a
    truncated graded algebra.
    """

    def apply_cols(cols, vec):
        out = {}
        for j, c in vec.items():
            _merge(out, cols[j], c)
        return out

    columns = []
    for i in range(alg.dim):
        total = dict(alg.basis_vec(i))
        term = dict(alg.basis_vec(i))
        k = 0
        while term:
            k += 1
            if k > alg.dim:
                raise ValueError("derivation is not nilpotent")
            term = apply_cols(derivation_cols, term)
            _merge(total, {m: c / factorial(k) for m, c in term.items()})
        columns.append(total)
    return EndoMap.from_columns(alg.dim, columns)


def hamiltonian_derivation(alg, c_vec):
    """The inner Poisson derivation {c, -} as column dicts."""
    return [alg.brk(c_vec, alg.basis_vec(i)) for i in range(alg.dim)]


def inner_derivation(alg, u_vec):
    """The associative inner derivation [u, -] as column dicts."""
    return [alg.commutator(u_vec, alg.basis_vec(i)) for i in range(alg.dim)]
