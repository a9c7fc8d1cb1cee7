"""Dissimilarity maps of a tree, exchange-property checks, and matrix
representations whose valuations recover the maps.

A dissimilarity map here is a finite-valued function on subsets of a ground
set (`ValuatedFn`); subsets outside its support take the value -inf.  The
two exchange checkers test the greedy-exchange inequalities directly, by
brute force over the support, and hand back a certificate when one fails.

The representation half builds matrices over exact Laurent polynomials (or
truncated series) whose minor/Pfaffian top exponents reproduce the maps:

* `represent_odd` -- a skew matrix of pairwise distance powers, taken in a
  nice vertex order, plus its image under t -> 1/t; Pfaffian valuations of
  principal submatrices give the odd-edge map and its negative.
* `represent_rooted` -- the pairwise-power matrix with the rank-one root
  contribution removed, split through an exact Cholesky factorisation and
  mixed by a random rectangular matrix of rationals.  Determinant valuations
  of k-column blocks give the rooted subtree-weight map.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .metric import MINUS_INF
from .pfaffian import build_skew_matrix
from .poly import ExactPoly, PolyMatrix, det, pfaffian
from .tree import Tree
from .tropic import PrecisionError, PuiseuxTrunc, cholesky, series_det

Value = "Fraction | float"  # a finite Fraction, or MINUS_INF


# ---------------------------------------------------------------------------
# finite-valued set functions


class ValuatedFn:
    """A function on subsets of a ground set, finite on its support.

    `values` maps subsets (any iterables of ground elements) to rationals;
    everything else is -inf.  Pass `k` to declare that the support must sit
    on k-element subsets, as the fixed-rank exchange check requires.
    """

    __slots__ = ("ground", "k", "_values")

    def __init__(self, ground: Iterable[int], values: Mapping, k: int | None = None):
        gs = tuple(ground)
        if len(set(gs)) != len(gs):
            raise ValueError(f"repeated ground elements in {gs}")
        self.ground = tuple(sorted(gs))
        self.k = k
        gset = set(self.ground)
        store: dict[frozenset[int], Fraction] = {}
        for key, val in values.items():
            s = frozenset(key)
            if not s <= gset:
                raise ValueError(f"{sorted(s)} is not a subset of the ground set")
            if val == MINUS_INF:
                continue
            if k is not None and len(s) != k:
                raise ValueError(f"finite value on {sorted(s)} but k={k}")
            store[s] = Fraction(val)
        self._values = store

    def value(self, X: Iterable[int]):
        s = frozenset(X)
        bad = s - set(self.ground)
        if bad:
            raise ValueError(f"{sorted(bad)} are not ground elements")
        return self._values.get(s, MINUS_INF)

    def support(self) -> list[frozenset[int]]:
        return sorted(self._values, key=lambda s: (len(s), tuple(sorted(s))))

    def items(self) -> list[tuple[frozenset[int], Fraction]]:
        return [(s, self._values[s]) for s in self.support()]

    def negate(self) -> "ValuatedFn":
        return ValuatedFn(self.ground, {s: -v for s, v in self._values.items()}, self.k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ValuatedFn):
            return NotImplemented
        return (
            self.ground == other.ground
            and self.k == other.k
            and self._values == other._values
        )

    def __repr__(self) -> str:
        return (
            f"ValuatedFn(ground={self.ground}, k={self.k}, "
            f"support size {len(self._values)})"
        )

    @staticmethod
    def _set_key(s: frozenset[int]) -> str:
        return ",".join(str(x) for x in sorted(s))

    def to_json(self) -> dict:
        out = {
            "ground": list(self.ground),
            "values": {self._set_key(s): str(v) for s, v in self.items()},
        }
        if self.k is not None:
            out["k"] = self.k
        return out

    @classmethod
    def from_json(cls, data) -> "ValuatedFn":
        if isinstance(data, str):
            data = json.loads(data)
        values = {}
        for key, val in data["values"].items():
            s = tuple(int(x) for x in key.split(",")) if key else ()
            if isinstance(val, str) and val.strip() in ("-inf", "-Infinity"):
                continue
            values[s] = Fraction(val)
        return cls(data["ground"], values, k=data.get("k"))


@dataclass(frozen=True)
class ExchangeViolation:
    """Witness that one greedy-exchange inequality fails: for the pivot
    element, every admissible swap loses value."""

    axiom: str  # "matroid" (fixed size) or "delta" (symmetric difference)
    X: tuple[int, ...]
    Y: tuple[int, ...]
    pivot: int
    lhs: Fraction
    best: "Fraction | float"

    def __str__(self) -> str:
        return (
            f"{self.axiom} exchange fails for X={self.X}, Y={self.Y} at "
            f"element {self.pivot}: f(X) + f(Y) = {self.lhs} exceeds the best "
            f"swap value {self.best}"
        )


def check_valuated_matroid(fn: ValuatedFn) -> ExchangeViolation | None:
    """Test the fixed-rank exchange property by brute force.

    For every pair X, Y in the support and every i in X \\ Y there must be a
    j in Y \\ X with f(X) + f(Y) <= f(X - i + j) + f(Y - j + i).  Returns the
    first failing triple, or None.
    """
    supp = fn.support()
    if not supp:
        return None
    sizes = {len(s) for s in supp}
    if len(sizes) != 1:
        raise ValueError(
            "the fixed-rank exchange test needs all finite values on subsets "
            f"of one size, got sizes {sorted(sizes)}"
        )
    for X in supp:
        fx = fn.value(X)
        for Y in supp:
            lhs = fx + fn.value(Y)
            for i in X - Y:
                best = MINUS_INF
                for j in Y - X:
                    cand = fn.value(X - {i} | {j}) + fn.value(Y - {j} | {i})
                    if cand > best:
                        best = cand
                if lhs > best:
                    return ExchangeViolation(
                        "matroid", tuple(sorted(X)), tuple(sorted(Y)), i, lhs, best
                    )
    return None


def check_delta_matroid(fn: ValuatedFn) -> ExchangeViolation | None:
    """Test the symmetric-difference exchange property by brute force.

    For every pair X, Y in the support and every i in X ^ Y there must be a
    j in (X ^ Y) - i with f(X) + f(Y) <= f(X ^ {i,j}) + f(Y ^ {i,j}).
    Returns the first failing triple, or None.
    """
    supp = fn.support()
    for X in supp:
        fx = fn.value(X)
        for Y in supp:
            diff = X ^ Y
            if not diff:
                continue
            lhs = fx + fn.value(Y)
            for i in diff:
                best = MINUS_INF
                for j in diff - {i}:
                    cand = fn.value(X ^ {i, j}) + fn.value(Y ^ {i, j})
                    if cand > best:
                        best = cand
                if lhs > best:
                    return ExchangeViolation(
                        "delta", tuple(sorted(X)), tuple(sorted(Y)), i, lhs, best
                    )
    return None


# ---------------------------------------------------------------------------
# dissimilarity maps read off a tree


def k_dissimilarity(T: Tree, k: int, ground: Iterable[int] | None = None) -> ValuatedFn:
    """X |-> weight of the smallest subtree containing X, on k-subsets of the
    ground set (default: the leaves)."""
    g = T.leaves() if ground is None else T.check_subset(ground)
    if not 1 <= k <= len(g):
        raise ValueError(f"k={k} is out of range for a ground set of {len(g)}")
    vals = {Y: T.spanned_weight(Y) for Y in combinations(sorted(g), k)}
    return ValuatedFn(g, vals, k=k)


def rooted_k_dissimilarity(
    T: Tree, root: int, k: int, ground: Iterable[int] | None = None
) -> ValuatedFn:
    """Y |-> weight of the smallest subtree containing Y and the root, on
    k-subsets of the ground set (default: the leaves, which must then not
    include the root)."""
    g = _rooted_ground(T, root, ground)
    if not 1 <= k <= len(g):
        raise ValueError(f"k={k} is out of range for a ground set of {len(g)}")
    vals = {Y: T.spanned_weight(Y + (root,)) for Y in combinations(g, k)}
    return ValuatedFn(g, vals, k=k)


def odd_dissimilarity(T: Tree, ground: Iterable[int] | None = None) -> ValuatedFn:
    """X |-> total weight of the edges splitting X oddly, on even-size
    subsets of the ground set (default: every vertex); odd sizes are -inf."""
    g = tuple(T.vertices) if ground is None else T.check_subset(ground)
    gs = sorted(g)
    vals = {}
    for r in range(0, len(gs) + 1, 2):
        for X in combinations(gs, r):
            vals[X] = sum((T.weight(e) for e in T.odd_edges(X)), Fraction(0))
    return ValuatedFn(g, vals)


def principal_minor_valuation_fn(
    T: Tree, ground: Iterable[int] | None = None, parity: str | None = None
) -> ValuatedFn:
    """X |-> top exponent of det of the pairwise-power matrix on X.

    Exploratory: no exchange property is promised for this map.  `parity`
    restricts the support to "even" or "odd" subset sizes.
    """
    from .minors import build_matrix

    if parity not in (None, "even", "odd"):
        raise ValueError(f"parity must be None, 'even' or 'odd', not {parity!r}")
    g = tuple(T.vertices) if ground is None else T.check_subset(ground)
    gs = sorted(g)
    vals: dict[tuple[int, ...], Fraction] = {}
    for r in range(0, len(gs) + 1):
        if parity == "even" and r % 2:
            continue
        if parity == "odd" and r % 2 == 0:
            continue
        for X in combinations(gs, r):
            p = det(build_matrix(T, X)) if X else ExactPoly.one()
            if p.is_zero():
                continue
            vals[X] = p.leading_term()[0]
    return ValuatedFn(g, vals)


# ---------------------------------------------------------------------------
# skew representation of the odd-edge map


@dataclass(frozen=True)
class OddRepresentation:
    """Skew matrix of distance powers over a nicely ordered vertex tuple,
    with its t -> 1/t image; Pfaffian valuations recover the odd-edge map
    (and, on the image, its negative)."""

    tree: Tree
    order: tuple[int, ...]
    matrix: PolyMatrix
    dual: PolyMatrix

    def _positions(self, X: Iterable[int]) -> list[int]:
        idx = {v: i for i, v in enumerate(self.order)}
        xs = frozenset(X)
        bad = [x for x in xs if x not in idx]
        if bad:
            raise ValueError(f"{sorted(bad)} are not represented vertices")
        return sorted(idx[x] for x in xs)

    def _value_in(self, m: PolyMatrix, X: Iterable[int]):
        pos = self._positions(X)
        if len(pos) % 2:
            return MINUS_INF
        p = pfaffian(m.principal_submatrix(pos))
        if p.is_zero():
            return MINUS_INF
        return p.leading_term()[0]

    def value(self, X: Iterable[int]):
        """Top exponent of the Pfaffian of the X-rows-and-columns block."""
        return self._value_in(self.matrix, X)

    def dual_value(self, X: Iterable[int]):
        """Same, on the t -> 1/t image."""
        return self._value_in(self.dual, X)


def represent_odd(T: Tree, ground: Iterable[int] | None = None) -> OddRepresentation:
    """Build the skew distance-power matrix over a nice order of the ground
    set (default: every vertex), plus its t -> 1/t image."""
    g = tuple(T.vertices) if ground is None else T.check_subset(ground)
    order = tuple(T.nice_order(g))
    B = build_skew_matrix(T, order)
    dual = PolyMatrix(
        [[e.power_substitute(-1) for e in row] for row in B.entries], kind="skew"
    )
    return OddRepresentation(T, order, B, dual)


# ---------------------------------------------------------------------------
# rooted representation of the subtree-weight map


def _rooted_ground(T: Tree, root: int, ground: Iterable[int] | None) -> tuple[int, ...]:
    (rt,) = T.check_subset([root])
    if ground is None:
        g = T.leaves()
        if rt in g:
            raise ValueError(
                "the root is a leaf; pass an explicit ground set avoiding it"
            )
    else:
        g = T.check_subset(ground)
        if rt in g:
            raise ValueError("the root must stay outside the ground set")
    return tuple(sorted(g))


def rooted_matrix(T: Tree, root: int, ground: Sequence[int]) -> PolyMatrix:
    """The symmetric matrix t^(d_ab) - t^(d_ra + d_rb) over the ground set,
    r the root: pairwise powers with the rank-one root part removed."""
    g = tuple(ground)
    depth = {a: T.dist(root, a) for a in g}
    rows = []
    for a in g:
        row = []
        for b in g:
            row.append(
                ExactPoly.t_power(T.dist(a, b))
                - ExactPoly.t_power(depth[a] + depth[b])
            )
        rows.append(row)
    return PolyMatrix(rows, kind="symmetric")


def check_alternating_leading_minors(M: PolyMatrix) -> int | None:
    """Verify sign(top coefficient of det M[1..j]) = (-1)^j for every j.

    That alternation certifies the matrix is negative definite once t is
    large.  Returns the first failing size, or None.
    """
    for j in range(1, M.n + 1):
        d = det(M.principal_submatrix(range(j)))
        if d.is_zero():
            return j
        sign = 1 if d.leading_term()[1] > 0 else -1
        if sign != (-1) ** j:
            return j
    return None


def exponent_spread(M: PolyMatrix) -> Fraction:
    """Largest top-minus-bottom exponent gap over the nonzero entries."""
    best = Fraction(0)
    for row in M.entries:
        for p in row:
            if p.is_zero():
                continue
            gap = p.leading_term()[0] - p.trailing_term()[0]
            if gap > best:
                best = gap
    return best


def default_window(M: PolyMatrix) -> Fraction:
    """Default truncation window: four times the matrix exponent spread."""
    s = exponent_spread(M)
    return 4 * s if s > 0 else Fraction(4)


def _sample_mix(k: int, n: int, seed: int) -> list[list[Fraction]]:
    rng = random.Random(seed)
    return [
        [
            Fraction(rng.choice((-1, 1)) * rng.randint(1, 1 << 31), rng.randint(1, 1 << 31))
            for _ in range(n)
        ]
        for _ in range(k)
    ]


@dataclass(frozen=True)
class RootedRepresentation:
    """A k x n matrix of truncated series whose k x k column-block
    determinant valuations equal the rooted subtree-weight map.

    `matrix` is the exact root-reduced power matrix M; `lower` a Cholesky
    factor L of -M over truncated series (so -M = L L^T up to the window);
    `mix` a random rational k x n matrix J; and `rows` the product J L^T.
    """

    tree: Tree
    root: int
    ground: tuple[int, ...]
    k: int
    window: Fraction
    seed: int
    matrix: PolyMatrix
    lower: tuple[tuple[PuiseuxTrunc, ...], ...]
    mix: tuple[tuple[Fraction, ...], ...]
    rows: tuple[tuple[PuiseuxTrunc, ...], ...]

    def _positions(self, Y: Iterable[int]) -> list[int]:
        idx = {v: i for i, v in enumerate(self.ground)}
        ys = frozenset(Y)
        bad = [y for y in ys if y not in idx]
        if bad:
            raise ValueError(f"{sorted(bad)} are not ground elements")
        if len(ys) != self.k:
            raise ValueError(f"need exactly k={self.k} distinct elements")
        return sorted(idx[y] for y in ys)

    def series_valuation(self, Y: Iterable[int]):
        """Valuation of det of the Y-column block of the series matrix."""
        pos = self._positions(Y)
        block = [[self.rows[i][p] for p in pos] for i in range(self.k)]
        v = series_det(block).valuation()
        return MINUS_INF if v is None else v

    def exact_minor_valuation(self, Y: Iterable[int]):
        """Top exponent of det M[Y], from the exact polynomial matrix."""
        pos = self._positions(Y)
        d = det(self.matrix.principal_submatrix(pos))
        if d.is_zero():
            return MINUS_INF
        return d.leading_term()[0]

    def scaled_minor_valuation(self, Y: Iterable[int]):
        """Top exponent of det M[Y] after t -> t^(1/2) -- the exact-path
        valuation on the same scale as the series path (i.e. halved).

        A one-column block of L carries t^(half the diagonal exponent), so
        determinants of the series matrix live on half the exponent scale of
        the polynomial minors; this accessor applies the matching rescale.
        """
        pos = self._positions(Y)
        d = det(self.matrix.principal_submatrix(pos))
        if d.is_zero():
            return MINUS_INF
        return d.power_substitute(Fraction(1, 2)).leading_term()[0]

    def value_fn(self) -> ValuatedFn:
        """The map Y |-> series valuation, over all k-subsets."""
        vals = {}
        for Y in combinations(self.ground, self.k):
            vals[Y] = self.series_valuation(Y)
        return ValuatedFn(self.ground, vals, k=self.k)


def _assemble_rooted(
    T: Tree,
    root: int,
    g: tuple[int, ...],
    k: int,
    window: Fraction,
    M: PolyMatrix,
    L: Sequence[Sequence[PuiseuxTrunc]],
    seed: int,
) -> RootedRepresentation:
    n = len(g)
    J = _sample_mix(k, n, seed)
    rows = []
    for i in range(k):
        r = []
        for j in range(n):
            acc = None
            for s in range(j + 1):  # L is lower triangular
                term = J[i][s] * L[j][s]
                acc = term if acc is None else acc + term
            r.append(acc)
        rows.append(tuple(r))
    return RootedRepresentation(
        tree=T,
        root=root,
        ground=g,
        k=k,
        window=window,
        seed=seed,
        matrix=M,
        lower=tuple(tuple(row) for row in L),
        mix=tuple(tuple(row) for row in J),
        rows=tuple(rows),
    )


def _rooted_core(T: Tree, root: int, g: tuple[int, ...], window):
    M = rooted_matrix(T, root, g)
    bad = check_alternating_leading_minors(M)
    if bad is not None:
        raise ArithmeticError(
            f"the root-reduced matrix is not negative definite for large t "
            f"(leading minor {bad} has the wrong sign)"
        )
    w = default_window(M) if window is None else Fraction(window)
    if w <= 0:
        raise ValueError("window must be positive")
    try:
        L = cholesky([[-e for e in row] for row in M.entries], window=w)
    except PrecisionError as exc:
        raise ArithmeticError(
            f"factorisation failed at truncation window {w} ({exc}); "
            "raise the window and retry"
        ) from exc
    return M, w, L


def represent_rooted(
    T: Tree,
    root: int,
    k: int,
    ground: Iterable[int] | None = None,
    window=None,
    seed: int = 0,
) -> RootedRepresentation:
    """Build the k-row series representation of the rooted subtree-weight
    map: factor the negated root-reduced matrix as L L^T over truncated
    series and mix L^T by a random rational k x n matrix.

    `window` is the truncation width (default: four times the exponent
    spread of the matrix).  If later valuations come out truncated to
    nothing, raise it.
    """
    g = _rooted_ground(T, root, ground)
    if not 1 <= k <= len(g):
        raise ValueError(f"k={k} is out of range for a ground set of {len(g)}")
    M, w, L = _rooted_core(T, root, g, window)
    return _assemble_rooted(T, root, g, k, w, M, L, seed)


def verify_rooted_representation(
    T: Tree,
    root: int,
    k: int,
    ground: Iterable[int] | None = None,
    window=None,
    seed: int = 0,
    max_reseeds: int = 5,
) -> tuple[RootedRepresentation, int]:
    """Build a rooted representation and check it against the map computed
    straight from the tree, on every k-subset.

    A disagreement or an unresolved (fully truncated) valuation is put down
    to an unlucky mixing matrix: the mix is resampled, at most `max_reseeds`
    times, and the failure is reported if it persists.  Returns the verified
    representation and the number of reseeds used.
    """
    g = _rooted_ground(T, root, ground)
    if not 1 <= k <= len(g):
        raise ValueError(f"k={k} is out of range for a ground set of {len(g)}")
    expected = rooted_k_dissimilarity(T, root, k, ground=g)
    M, w, L = _rooted_core(T, root, g, window)
    failures = []
    for attempt in range(max_reseeds + 1):
        rep = _assemble_rooted(T, root, g, k, w, M, L, seed + attempt)
        problem = None
        try:
            for Y in combinations(g, k):
                got = rep.series_valuation(Y)
                want = expected.value(Y)
                if got != want:
                    problem = (
                        f"seed {seed + attempt}: valuation {got} != {want} at "
                        f"Y={Y} (degenerate mix suspected)"
                    )
                    break
        except PrecisionError as exc:
            problem = f"seed {seed + attempt}: {exc}"
        if problem is None:
            return rep, attempt
        failures.append(problem)
    raise ArithmeticError(
        f"rooted representation still disagrees after {max_reseeds + 1} "
        "attempts; either the random mix kept degenerating or the truncation "
        "window is too small -- raise the window and retry.\n  "
        + "\n  ".join(failures)
    )
