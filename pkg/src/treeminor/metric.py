"""Tree metrics: the four-point test, exact tree realization, potential
splitting, and the spectral signature of powered distance matrices.

Matrices here are plain lists of lists of Fractions (symmetric, zero
diagonal for metrics).  Powered matrices substitute a rational base tau
into tau^(d_ij); half-integer exponents stay exact through square-root
field elements, so every sign and signature below is certified.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

from .radicals import QRad
from .tree import Tree

Matrix = list[list[Fraction]]

MINUS_INF = float("-inf")


# ---------------------------------------------------------------------------
# basic matrix plumbing


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    m = [
        [x if x == MINUS_INF else Fraction(x) for x in row]
        for row in rows
    ]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    return m


def check_dissimilarity(rows: Sequence[Sequence]) -> Matrix:
    """Validate a symmetric, zero-diagonal, nonnegative matrix."""
    m = as_matrix(rows)
    n = len(m)
    for i in range(n):
        if m[i][i] != 0:
            raise ValueError(f"diagonal entry ({i},{i}) is {m[i][i]}, not 0")
        for j in range(i + 1, n):
            if m[i][j] != m[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i},{j})")
            if m[i][j] < 0:
                raise ValueError(f"negative entry {m[i][j]} at ({i},{j})")
    return m


def parse_matrix_csv(text: str) -> list[list[Fraction | float]]:
    """Comma-separated rows; entries are rationals like 3, 1/2, 2.5, or the
    token -inf."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row: list[Fraction | float] = []
        for tok in line.split(","):
            tok = tok.strip()
            if tok == "-inf":
                row.append(MINUS_INF)
                continue
            try:
                row.append(Fraction(tok))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"line {lineno}: bad entry {tok!r}") from exc
        rows.append(row)
    if not rows:
        raise ValueError("empty matrix")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    return rows


def format_matrix_csv(rows: Sequence[Sequence]) -> str:
    out = []
    for row in rows:
        out.append(",".join("-inf" if x == MINUS_INF else str(x) for x in row))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# four-point condition


@dataclass(frozen=True)
class FourPointViolation:
    quadruple: tuple[int, int, int, int]
    sums: tuple[Fraction, Fraction, Fraction]

    def __str__(self) -> str:
        i, j, k, l = self.quadruple
        s = self.sums
        return (
            f"points ({i},{j},{k},{l}): "
            f"d({i},{j})+d({k},{l}) = {s[0]}, "
            f"d({i},{k})+d({j},{l}) = {s[1]}, "
            f"d({i},{l})+d({j},{k}) = {s[2]} "
            "-- the maximum is attained only once"
        )


def _four_point_scan(m: Matrix) -> FourPointViolation | None:
    n = len(m)
    for i, j, k, l in combinations_with_replacement(range(n), 4):
        s = (m[i][j] + m[k][l], m[i][k] + m[j][l], m[i][l] + m[j][k])
        top = max(s)
        if sum(1 for x in s if x == top) < 2:
            return FourPointViolation((i, j, k, l), s)
    return None


def check_4pc(rows: Sequence[Sequence]) -> FourPointViolation | None:
    """Four-point condition, quadruples with repetition: of the three pair
    sums, the maximum must be attained at least twice.  Returns None when
    the matrix passes, otherwise the first violating quadruple."""
    return _four_point_scan(check_dissimilarity(rows))


def is_tree_metric(rows: Sequence[Sequence]) -> bool:
    return check_4pc(rows) is None


# ---------------------------------------------------------------------------
# potentials


def split_potentials(rows: Sequence[Sequence]) -> tuple[Matrix, list[Fraction]]:
    """Write a symmetric matrix w_ij as d_ij + p_i + p_j with d zero on the
    diagonal: p_i = w_ii / 2."""
    w = as_matrix(rows)
    n = len(w)
    for i in range(n):
        for j in range(i + 1, n):
            if w[i][j] != w[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i},{j})")
    p = [w[i][i] / 2 for i in range(n)]
    d = [[w[i][j] - p[i] - p[j] for j in range(n)] for i in range(n)]
    return d, p


def join_potentials(rows: Sequence[Sequence], potentials: Sequence) -> Matrix:
    d = as_matrix(rows)
    p = [Fraction(x) for x in potentials]
    if len(p) != len(d):
        raise ValueError("one potential per point, please")
    return [[d[i][j] + p[i] + p[j] for j in range(len(d))] for i in range(len(d))]


# ---------------------------------------------------------------------------
# exact realization


def realize_tree(rows: Sequence[Sequence]) -> tuple[Tree, list[int]]:
    """Build a weighted tree whose leaf-to-leaf (point-to-point) distances
    reproduce the given tree metric exactly.

    Points 0..n-1 get vertex labels 1..n; interior vertices the metric
    forces get fresh labels above n.  Zero-distance points share a vertex.
    Raises ValueError (with the quadruple) when the matrix is not a tree
    metric.
    """
    m = check_dissimilarity(rows)
    bad = check_4pc(m)
    if bad is not None:
        raise ValueError(f"not a tree metric: {bad}")
    n = len(m)
    vertex_of = [0] * n

    # merge zero-distance points
    rep = list(range(n))
    for i in range(n):
        for j in range(i):
            if m[i][j] == 0:
                rep[i] = rep[j]
                break
    reps = sorted(set(rep))
    for i in range(n):
        vertex_of[i] = rep[i] + 1

    if len(reps) == 1:
        return Tree([], vertices=[reps[0] + 1]), vertex_of

    # grow the tree point by point; adjacency with explicit weights
    adj: dict[int, dict[int, Fraction]] = {}

    def link(u: int, v: int, w: Fraction) -> None:
        adj.setdefault(u, {})[v] = w
        adj.setdefault(v, {})[u] = w

    def cut(u: int, v: int) -> Fraction:
        w = adj[u].pop(v)
        adj[v].pop(u)
        return w

    def walk(a: int, b: int) -> list[int]:
        prev = {a: None}
        stack = [a]
        while stack:
            x = stack.pop()
            if x == b:
                break
            for y in adj[x]:
                if y not in prev:
                    prev[y] = x
                    stack.append(y)
        path = [b]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        path.reverse()
        return path

    fresh = n + 1
    r = reps[0]
    first, second = r + 1, reps[1] + 1
    link(first, second, m[r][reps[1]])
    placed = [r, reps[1]]

    for q in reps[2:]:
        x = q + 1
        # deepest meet of x with any placed point, seen from the reference r
        best, h = placed[1], Fraction(0)
        for a in placed[1:]:
            g = (m[r][q] + m[r][a] - m[q][a]) / 2
            if g > h:
                best, h = a, g
        hang = m[r][q] - h
        # walk from the reference toward `best` for distance h
        path = walk(first, best + 1)
        run = Fraction(0)
        at = first
        for u, v in zip(path, path[1:]):
            if run == h:
                break
            w = adj[u][v]
            if run + w > h:
                cut(u, v)
                s = fresh
                fresh += 1
                link(u, s, h - run)
                link(s, v, run + w - h)
                at = s
                break
            run += w
            at = v
        if hang == 0:
            # x coincides with an interior vertex: claim its label
            if at <= n:
                raise ValueError(f"points {at - 1} and {q} at distance zero were not merged")
            for y in list(adj[at]):
                link(x, y, cut(at, y))
            adj.pop(at, None)
        else:
            link(x, at, hang)
        placed.append(q)

    edges = []
    seen = set()
    for u, nbrs in adj.items():
        for v, w in nbrs.items():
            if (v, u) not in seen:
                seen.add((u, v))
                edges.append((u, v, w))
    tree = Tree(edges)

    # certify the construction before handing it back
    for i in range(n):
        for j in range(n):
            got = Fraction(0) if vertex_of[i] == vertex_of[j] else tree.dist(
                vertex_of[i], vertex_of[j]
            )
            if got != m[i][j]:
                raise AssertionError(
                    f"realization is off at ({i},{j}): built {got}, wanted {m[i][j]}"
                )
    return tree, vertex_of


def square_cycle_metric() -> Matrix:
    """The 4-cycle metric, the textbook non-example: a metric that fails
    the four-point condition."""
    return as_matrix([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])


# ---------------------------------------------------------------------------
# exact signatures of powered matrices


def _sgn(x) -> int:
    if isinstance(x, QRad):
        return x.sign()
    return 1 if x > 0 else (-1 if x < 0 else 0)


def power_entry(tau: Fraction, d: Fraction):
    """tau^d exactly: a Fraction for integer d, a square-root extension for
    half-integer d, zero for d = -inf.  Denominators beyond 2 would need
    deeper radicals."""
    if d == MINUS_INF:
        return Fraction(0)
    tau, d = Fraction(tau), Fraction(d)
    if tau <= 0:
        raise ValueError("base must be positive")
    if d.denominator == 1:
        return tau ** d.numerator
    if d.denominator == 2:
        whole = d.numerator // 2  # floor; remainder is 1/2
        return (tau ** whole) * QRad.sqrt_of(tau)
    raise ValueError(f"exponent {d} needs a {d.denominator}-th root; only 2 is supported")


def power_matrix(rows: Sequence[Sequence], tau, subset: Sequence[int] | None = None):
    m = as_matrix(rows)
    idx = list(range(len(m))) if subset is None else list(subset)
    return [[power_entry(tau, m[i][j]) for j in idx] for i in idx]


def inertia(rows: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric matrix by exact
    congruence: 1x1 pivots where the diagonal allows, hyperbolic 2x2 blocks
    where it does not."""
    a = [list(row) for row in rows]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(i):
            if _sgn(a[i][j] - a[j][i]) != 0:
                raise ValueError(f"matrix is not symmetric at ({i},{j})")
    live = list(range(n))
    pos = neg = zero = 0
    while live:
        piv = next((i for i in live if _sgn(a[i][i]) != 0), None)
        if piv is not None:
            s = _sgn(a[piv][piv])
            pos, neg = pos + (s > 0), neg + (s < 0)
            live.remove(piv)
            d = a[piv][piv]
            for i in live:
                if _sgn(a[i][piv]) == 0:
                    continue
                f = a[i][piv] / d
                for j in live:
                    a[i][j] = a[i][j] - f * a[piv][j]
                a[i][piv] = 0
            for i in live:
                a[piv][i] = 0
            continue
        off = next(
            (
                (i, j)
                for ii, i in enumerate(live)
                for j in live[ii + 1:]
                if _sgn(a[i][j]) != 0
            ),
            None,
        )
        if off is None:
            zero += len(live)
            break
        i0, j0 = off
        # a zero diagonal with a_{i0 j0} != 0: a hyperbolic pair, one of each
        pos += 1
        neg += 1
        live.remove(i0)
        live.remove(j0)
        b = a[i0][j0]
        for r in live:
            u, v = a[r][i0], a[r][j0]
            if _sgn(u) == 0 and _sgn(v) == 0:
                continue
            # subtract the rank-2 correction (u v' + v u') / b
            for c in live:
                a[r][c] = a[r][c] - (u * a[j0][c] + v * a[i0][c]) / b
        for r in live:
            a[r][i0] = a[r][j0] = a[i0][r] = a[j0][r] = 0
    return pos, neg, zero


def spectral_signature(
    rows: Sequence[Sequence], tau, subset: Sequence[int] | None = None
) -> tuple[int, int, int]:
    """Inertia of [tau^(d_ij)] restricted to the subset."""
    return inertia(power_matrix(rows, tau, subset))


def tree_signature_ok(rows: Sequence[Sequence], taus: Iterable = (10, 100)) -> bool:
    """Whether [tau^(d_ij)] has exactly one positive eigenvalue and the rest
    negative, at every listed base."""
    m = as_matrix(rows)
    n = len(m)
    return all(spectral_signature(m, tau) == (1, n - 1, 0) for tau in taus)


def star_condition_check(
    rows: Sequence[Sequence], subsets: Iterable[Sequence[int]] | None = None
):
    """det M[X] >= 0 for odd |X| and <= 0 for even |X|, over the listed
    principal subsets (default: every nonempty one; n <= 12 only, pass
    explicit subsets beyond that).

    M must already be numeric (say a powered matrix [tau^(w_ij)], whose
    entries may be square-root extensions); determinant signs come from
    exact inertia counts, so zero minors satisfy the weak inequalities.
    Returns the first violating subset, or None."""
    m = [list(row) for row in rows]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    if subsets is None:
        if n > 12:
            raise ValueError("n > 12: pass an explicit subset sample")
        subsets = (
            xs for r in range(1, n + 1) for xs in combinations(range(n), r)
        )
    for xs in subsets:
        xs = list(xs)
        p, q, z = inertia([[m[i][j] for j in xs] for i in xs])
        det_sign = 0 if z else (-1) ** q
        if det_sign < 0 if len(xs) % 2 else det_sign > 0:
            return tuple(xs)
    return None


def hpp_eigen_check(rows: Sequence[Sequence], taus: Iterable = (10, 100)):
    """Eigenvalue-count test for a symmetric pair-value matrix, -inf allowed
    on the diagonal only (max-plus order: -inf powers to a zero entry).

    For each base in the grid, [tau^(f_ij)] must have at most one positive
    eigenvalue; the four-point condition on f itself is checked alongside.
    Returns None when everything holds, the first failing base otherwise,
    or the four-point certificate."""
    m = as_matrix(rows)
    n = len(m)
    for i in range(n):
        for j in range(i + 1, n):
            if m[i][j] != m[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i},{j})")
            if m[i][j] == MINUS_INF:
                raise ValueError(
                    f"-inf off the diagonal at ({i},{j}); only diagonal "
                    "entries may be -inf"
                )
    for tau in taus:
        positives, _, _ = inertia(power_matrix(m, tau))
        if positives > 1:
            return Fraction(tau)
    return _four_point_scan(m)


def alternating_minor_signs(
    rows: Sequence[Sequence], tau, subsets: Iterable[Sequence[int]] | None = None
):
    """Check sign(det [tau^(d_ij)]_{X}) = (-1)^(|X|+1) for each subset X
    (default: every nonempty principal subset).  Returns the first failing
    subset or None."""
    m = as_matrix(rows)
    n = len(m)
    if subsets is None:
        subsets = (
            xs for r in range(1, n + 1) for xs in combinations(range(n), r)
        )
    for xs in subsets:
        xs = list(xs)
        p, q, z = inertia(power_matrix(m, tau, xs))
        det_sign = 0 if z else (-1) ** q
        if det_sign != (-1) ** (len(xs) + 1):
            return tuple(xs)
    return None


# ---------------------------------------------------------------------------
# random generators used by the stress checks


def random_tree_metric(
    n: int, seed: int | None = None, half_integers: bool = False
) -> Matrix:
    """Distances between n uniformly chosen vertices of a random weighted
    tree (points may repeat, so zero distances do occur)."""
    rng = random.Random(seed)
    t = Tree(
        [
            (u, v, Fraction(rng.randint(1, 8), 2 if half_integers else 1))
            for u, v, _ in random_tree_edges(max(n, 2), rng)
        ]
    )
    pts = [rng.choice(t.vertices) for _ in range(n)]
    return [
        [Fraction(0) if a == b else t.dist(a, b) for b in pts] for a in pts
    ]


def random_tree_edges(n: int, rng: random.Random) -> list[tuple[int, int, int]]:
    out = []
    for v in range(2, n + 1):
        out.append((rng.randint(1, v - 1), v, 1))
    return out


def random_symmetric_matrix(
    n: int, seed: int | None = None, half_integers: bool = True, high: int = 8
) -> Matrix:
    """Random zero-diagonal symmetric matrix with (half-)integer entries."""
    rng = random.Random(seed)
    step = Fraction(1, 2) if half_integers else Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = step * rng.randint(1, high)
    return m
