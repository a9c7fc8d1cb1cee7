"""Principal minors of the matrix (t^{d_ij}) of a weighted tree.

The central objects are spanned forests: subforests of the subtree spanned
by a vertex set X whose leaves all lie in X (isolated vertices of X are
allowed and count as their own components).  Summing a sign and a degree
product over them gives every principal minor of (t^{d_ij}) exactly; the
determinant computed from the matrix itself serves as the independent
oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import ExactPoly, PolyMatrix, det
from .tree import Edge, Tree


def build_matrix(T: Tree, X: Sequence[int]) -> PolyMatrix:
    """The symmetric matrix (t^{d(x_i, x_j)}) over the listed vertices."""
    xs = T.check_subset(X)
    rows = [
        [ExactPoly.t_power(T.dist(a, b)) for b in xs]
        for a in xs
    ]
    return PolyMatrix(rows, kind="symmetric")


@dataclass(frozen=True)
class SpannedForest:
    """A forest spanned by X: X is contained in the vertex set and every
    leaf (degree <= 1 vertex) belongs to X."""

    edges: frozenset[Edge]
    isolated: frozenset[int]  # members of X touched by no edge
    components: int  # connected components, isolated vertices included
    weight: Fraction  # total edge weight

    @property
    def vertices(self) -> frozenset[int]:
        vs = set(self.isolated)
        for u, v in self.edges:
            vs.add(u)
            vs.add(v)
        return frozenset(vs)


def spanned_forests(T: Tree, X: Iterable[int]) -> list[SpannedForest]:
    """All forests spanned by X inside the subtree spanned by X.

    Enumerates subsets of the spanned subtree's edges and keeps those whose
    degree-one vertices all lie in X; vertices of X meeting no edge stay as
    isolated components.
    """
    xs = frozenset(T.check_subset(X))
    if not xs:
        raise ValueError("X must be nonempty")
    _, edge_pool = T.spanned_subtree(xs)
    pool = sorted(edge_pool)
    out = []
    for r in range(len(pool) + 1):
        for combo in itertools.combinations(pool, r):
            deg: dict[int, int] = {}
            for u, v in combo:
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            if any(d == 1 and v not in xs for v, d in deg.items()):
                continue
            comp = _component_count(combo, deg)
            isolated = xs - deg.keys()
            weight = sum((T.weight(e) for e in combo), Fraction(0))
            out.append(
                SpannedForest(
                    edges=frozenset(combo),
                    isolated=frozenset(isolated),
                    components=comp + len(isolated),
                    weight=weight,
                )
            )
    return out


def _component_count(edges, deg) -> int:
    parent = {v: v for v in deg}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = len(parent)
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return comps


def forest_degree_product(T_or_forest_edges, X: frozenset[int]) -> int:
    """prod over non-X vertices of (degree - 1) in the given edge set."""
    deg: dict[int, int] = {}
    for u, v in T_or_forest_edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    prod = 1
    for v, d in deg.items():
        if v not in X:
            prod *= d - 1
    return prod


def minor_formula(T: Tree, X: Iterable[int]) -> ExactPoly:
    """det of (t^{d_ij}) over X as a signed sum over spanned forests:
    each forest F contributes (-1)^{|X| + c(F)} t^{2 w(F)} times the product
    of (deg_F(v) - 1) over vertices of F outside X."""
    xs = frozenset(T.check_subset(X))
    k = len(xs)
    terms = []
    for f in spanned_forests(T, xs):
        coeff = forest_degree_product(f.edges, xs)
        if (k + f.components) % 2:
            coeff = -coeff
        terms.append((2 * f.weight, Fraction(coeff)))
    return ExactPoly.from_terms(terms)


def minor_leading(T: Tree, X: Iterable[int]) -> tuple[Fraction, Fraction]:
    """(exponent, coefficient) of the top term of the minor, read directly
    off the spanned subtree: exponent twice its weight, coefficient
    (-1)^{|X|+1} times the interior degree product."""
    xs = frozenset(T.check_subset(X))
    if not xs:
        raise ValueError("X must be nonempty")
    _, edges = T.spanned_subtree(xs)
    weight = sum((T.weight(e) for e in edges), Fraction(0))
    coeff = Fraction(forest_degree_product(edges, xs))
    if len(xs) % 2 == 0:
        coeff = -coeff
    return 2 * weight, coeff


def minor_oracle(T: Tree, X: Sequence[int]) -> ExactPoly:
    """Independent evaluation: determinant of the actual matrix."""
    return det(build_matrix(T, X))


@dataclass(frozen=True)
class SignatureReport:
    positives: int
    negatives: int
    evidence: tuple  # (prefix size, leading exponent, leading coefficient)


def signature(T: Tree, X: Sequence[int]) -> SignatureReport:
    """Signature (1, |X|-1) of the minor over X, certified by the strict
    sign alternation of the nested leading principal minors: size-m prefixes
    have leading coefficient of sign (-1)^{m+1}."""
    xs = T.check_subset(X)
    if not xs:
        raise ValueError("X must be nonempty")
    evidence = []
    for m in range(1, len(xs) + 1):
        e, c = minor_leading(T, xs[:m])
        want = 1 if m % 2 else -1
        if (c > 0) != (want > 0) or c == 0:
            raise ArithmeticError(
                f"sign alternation broke at prefix size {m}: coefficient {c}"
            )
        evidence.append((m, e, c))
    return SignatureReport(positives=1, negatives=len(xs) - 1, evidence=tuple(evidence))


def build_weighted_matrix(
    T: Tree, phi: Sequence[int], potential: Sequence | None = None
) -> PolyMatrix:
    """Matrix (t^{w_ij}) for w_ij = d(phi_i, phi_j) + p_i + p_j.

    phi maps row indices to tree vertices (repeats allowed); the potential
    defaults to zero.
    """
    m = len(phi)
    p = _potential(potential, m)
    for v in phi:
        if not T.has_vertex(v):
            raise ValueError(f"vertex {v} is not in the tree")
    rows = [
        [ExactPoly.t_power(T.dist(phi[i], phi[j]) + p[i] + p[j]) for j in range(m)]
        for i in range(m)
    ]
    return PolyMatrix(rows, kind="symmetric")


def weighted_minor(
    T: Tree, phi: Sequence[int], potential: Sequence | None = None
) -> ExactPoly:
    """det (t^{w_ij}) via the forest formula.

    A non-injective phi collapses two rows, so the determinant is zero;
    otherwise the potential factors out of every row and column as
    t^{2 sum p} times the plain minor over the image of phi.
    """
    m = len(phi)
    p = _potential(potential, m)
    for v in phi:
        if not T.has_vertex(v):
            raise ValueError(f"vertex {v} is not in the tree")
    if len(set(phi)) != m:
        return ExactPoly.zero()
    shift = 2 * sum(p, Fraction(0))
    base = minor_formula(T, phi)
    return ExactPoly.t_power(shift) * base


def _potential(potential, m) -> list[Fraction]:
    if potential is None:
        return [Fraction(0)] * m
    p = [Fraction(x) for x in potential]
    if len(p) != m:
        raise ValueError("potential length must match phi length")
    return p
