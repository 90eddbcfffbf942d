"""Brute-force ground truth over small prime fields.

Representation points are tuples of matrices over F_p, one per arrow,
enumerated exhaustively.  Semistability and stability are decided by
searching all subspace tuples (one subspace per vertex, in reduced row
echelon form) that are closed under the arrow maps; endomorphism rings are
computed as nullspaces of the commuting-square linear system.  Class counts
follow from the stabilizer formula: a stable point with endomorphism field
of degree r has automorphism group F_{p^r}^*, so its orbit has exactly
#GL / (p^r - 1) points, and the division is asserted to be exact.

The mass counts run on contiguous blocks of the point index range with
vectorized integer arithmetic; results are identical to the per-point
functions, which are kept as the simple reference implementation.

Budgets are explicit: exceeding them raises, it never degrades silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product as _cartesian
from typing import Iterator, Sequence

import numpy as np

from .numtheory import is_prime
from .quiver import Quiver, slope
from .series import DimVector, height, subvectors


class BudgetError(RuntimeError):
    """An enumeration would exceed the configured budget."""


class DivisibilityError(RuntimeError):
    """An orbit count failed to divide evenly; invariant violation."""


@dataclass(frozen=True)
class Budget:
    """Enumeration limits: total points and, for subspace searches, the
    largest dimension-vector height per prime."""

    max_points: int = 1 << 24
    stability_heights: tuple[tuple[int, int], ...] = ((2, 4),)
    default_stability_height: int = 3

    def stable_height(self, p: int) -> int:
        for prime, bound in self.stability_heights:
            if prime == p:
                return bound
        return self.default_stability_height


DEFAULT_BUDGET = Budget()


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def rep_space_dim(quiver: Quiver, alpha: DimVector) -> int:
    """Dimension of the representation space: sum over arrows of a^i a^j."""
    return sum(alpha[i] * alpha[j] for i, j in quiver.arrow_list())


def gl_order(alpha: Sequence[int], p: int) -> int:
    """#GL_alpha(F_p) = prod_i prod_{j<a_i} (p^{a_i} - p^j)."""
    total = 1
    for a in alpha:
        for j in range(a):
            total *= p**a - p**j
    return total


def _check_point_budget(quiver: Quiver, alpha: DimVector, p: int, budget: Budget) -> int:
    total = p ** rep_space_dim(quiver, alpha)
    if total > budget.max_points:
        raise BudgetError(
            f"{total} points for alpha={tuple(alpha)} at p={p} exceeds the budget "
            f"of {budget.max_points}; use a smaller alpha or prime, or raise the budget"
        )
    return total


def _check_stability_budget(alpha: DimVector, p: int, budget: Budget) -> None:
    bound = budget.stable_height(p)
    if height(alpha) > bound:
        raise BudgetError(
            f"subspace search at height {height(alpha)} exceeds the bound {bound} "
            f"for p={p}; use a smaller alpha or raise the budget"
        )


# -- points -------------------------------------------------------------------


@dataclass(frozen=True)
class RepPoint:
    """One point of the representation space: a matrix per arrow.

    The arrow h: i -> j carries an alpha^j x alpha^i matrix (rows indexed by
    the target), stored as a tuple of row tuples with entries in [0, p).
    """

    quiver: Quiver
    alpha: DimVector
    p: int
    mats: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        arrows = self.quiver.arrow_list()
        if len(self.mats) != len(arrows):
            raise ValueError("one matrix per arrow required")
        for (i, j), m in zip(arrows, self.mats):
            if len(m) != self.alpha[j] or any(len(row) != self.alpha[i] for row in m):
                raise ValueError(f"matrix shape mismatch for arrow {i}->{j}")


def _point_from_digits(quiver: Quiver, alpha: DimVector, p: int,
                       digits: Sequence[int]) -> RepPoint:
    mats = []
    pos = 0
    for i, j in quiver.arrow_list():
        rows, cols = alpha[j], alpha[i]
        mat = tuple(
            tuple(digits[pos + r * cols + c] for c in range(cols)) for r in range(rows)
        )
        pos += rows * cols
        mats.append(mat)
    return RepPoint(quiver, alpha, p, tuple(mats))


def enumerate_points(quiver: Quiver, alpha: Sequence[int], p: int,
                     budget: Budget = DEFAULT_BUDGET) -> Iterator[RepPoint]:
    """Every point of the representation space exactly once.

    Deterministic order: point n has flattened entries equal to the base-p
    digits of n, least significant digit first.
    """
    _check_prime(p)
    alpha = tuple(alpha)
    total = _check_point_budget(quiver, alpha, p, budget)
    ndigits = rep_space_dim(quiver, alpha)
    for n in range(total):
        digits = []
        t = n
        for _ in range(ndigits):
            digits.append(t % p)
            t //= p
        yield _point_from_digits(quiver, alpha, p, digits)


# -- linear algebra mod p (plain python; small matrices only) --------------------


def _rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    rows = [[x % p for x in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((k for k in range(r, len(rows)) if rows[k][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][col], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                factor = rows[k][col]
                rows[k] = [(a - factor * b) % p for a, b in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _nullspace(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {v : M v = 0} for the matrix with the given rows."""
    if not rows:
        return [[1 if c == k else 0 for c in range(ncols)] for k in range(ncols)]
    reduced, pivots = _rref([list(r) for r in rows], p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-reduced[r][f]) % p
        basis.append(v)
    return basis


@lru_cache(maxsize=None)
def subspace_bases(n: int, d: int, p: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All d-dimensional subspaces of F_p^n, as RREF basis-row matrices."""
    if d < 0 or d > n:
        return ()
    if d == 0:
        return ((),)
    out = []
    for pivot_cols in combinations(range(n), d):
        pivot_set = set(pivot_cols)
        free_pos = [
            (t, j)
            for t in range(d)
            for j in range(pivot_cols[t] + 1, n)
            if j not in pivot_set
        ]
        for values in _cartesian(range(p), repeat=len(free_pos)):
            rows = [[0] * n for _ in range(d)]
            for t in range(d):
                rows[t][pivot_cols[t]] = 1
            for (t, j), v in zip(free_pos, values):
                rows[t][j] = v
            out.append(tuple(tuple(r) for r in rows))
    return tuple(out)


@lru_cache(maxsize=None)
def _annihilator(basis: tuple[tuple[int, ...], ...], n: int, p: int
                 ) -> tuple[tuple[int, ...], ...]:
    """Rows spanning {w : B w = 0}; membership test v in rowspace(B) <=> A v = 0."""
    return tuple(tuple(row) for row in _nullspace([list(r) for r in basis], n, p))


def _proper_subdims(alpha: DimVector) -> list[DimVector]:
    zero = tuple(0 for _ in alpha)
    return [d for d in subvectors(alpha) if d != zero and d != alpha]


def _tuple_is_invariant(point: RepPoint, bases: Sequence[tuple], p: int) -> bool:
    alpha = point.alpha
    for (i, j), mat in zip(point.quiver.arrow_list(), point.mats):
        basis_i = bases[i]
        if not basis_i:
            continue
        ann_j = _annihilator(bases[j], alpha[j], p)
        if not ann_j:
            continue
        for u in basis_i:
            image = [sum(mat[r][c] * u[c] for c in range(alpha[i])) % p
                     for r in range(alpha[j])]
            for w in ann_j:
                if sum(a * b for a, b in zip(w, image)) % p:
                    return False
    return True


def _violating_tuples(point: RepPoint, theta: Sequence[int], strict: bool):
    """Subspace tuples whose dimension vector would violate (semi)stability."""
    alpha = point.alpha
    mu = slope(theta, alpha)
    for dims in _proper_subdims(alpha):
        s = slope(theta, dims)
        if (s > mu) if strict else (s >= mu):
            per_vertex = [subspace_bases(alpha[i], dims[i], point.p)
                          for i in range(len(alpha))]
            yield from _cartesian(*per_vertex)


def is_semistable(point: RepPoint, theta: Sequence[int]) -> bool:
    """No invariant subspace tuple of slope greater than the point's slope.

    The zero representation counts as semistable.
    """
    if height(point.alpha) == 0:
        return True
    for bases in _violating_tuples(point, theta, strict=True):
        if _tuple_is_invariant(point, bases, point.p):
            return False
    return True


def is_stable(point: RepPoint, theta: Sequence[int]) -> bool:
    """No invariant subspace tuple of slope >= the point's slope.

    The zero representation is not stable.
    """
    if height(point.alpha) == 0:
        return False
    for bases in _violating_tuples(point, theta, strict=False):
        if _tuple_is_invariant(point, bases, point.p):
            return False
    return True


def endomorphism_dim(point: RepPoint) -> int:
    """Dimension over F_p of {(phi_i) : phi_j X_h = X_h phi_i for all h: i->j}."""
    alpha = point.alpha
    p = point.p
    sizes = [a * a for a in alpha]
    offsets = [sum(sizes[:i]) for i in range(len(alpha))]
    unknowns = sum(sizes)
    rows = []
    for (i, j), mat in zip(point.quiver.arrow_list(), point.mats):
        ai, aj = alpha[i], alpha[j]
        for r in range(aj):
            for c in range(ai):
                row = [0] * unknowns
                for s in range(aj):
                    row[offsets[j] + r * aj + s] += mat[s][c]
                for s in range(ai):
                    row[offsets[i] + s * ai + c] -= mat[r][s]
                rows.append([x % p for x in row])
    if not rows:
        return unknowns
    reduced, pivots = _rref(rows, p)
    return unknowns - len(pivots)


# -- blocked mass counting ----------------------------------------------------------


_BLOCK = 1 << 15


def _digit_blocks(total: int, ndigits: int, p: int) -> Iterator[np.ndarray]:
    """Base-p digit arrays for contiguous index blocks, least digit first."""
    for start in range(0, total, _BLOCK):
        idx = np.arange(start, min(start + _BLOCK, total), dtype=np.int64)
        digits = np.empty((idx.size, ndigits), dtype=np.int64)
        t = idx.copy()
        for e in range(ndigits):
            digits[:, e] = t % p
            t //= p
        yield digits


def _arrow_layout(quiver: Quiver, alpha: DimVector) -> list[tuple[int, int, int]]:
    """Per arrow: (source index, target index, flat offset into the digits)."""
    layout = []
    pos = 0
    for i, j in quiver.arrow_list():
        layout.append((i, j, pos))
        pos += alpha[j] * alpha[i]
    return layout


def _candidate_constraints(quiver: Quiver, alpha: DimVector, p: int,
                           dims_list: Sequence[DimVector]):
    """For every subspace tuple of the given dimension vectors, the list of
    (arrow, annihilator, basis-transpose) triples that certify invariance."""
    layout = _arrow_layout(quiver, alpha)
    candidates = []
    for dims in dims_list:
        per_vertex = [subspace_bases(alpha[i], dims[i], p) for i in range(len(alpha))]
        for bases in _cartesian(*per_vertex):
            constraints = []
            for h, (i, j, off) in enumerate(layout):
                if not bases[i]:
                    continue
                ann = _annihilator(bases[j], alpha[j], p)
                if not ann:
                    continue
                C = np.array(ann, dtype=np.int64)
                BT = np.array(bases[i], dtype=np.int64).T
                constraints.append((i, j, off, C, BT))
            candidates.append(constraints)
    return candidates


def _no_invariant_mask(digits: np.ndarray, alpha: DimVector, p: int,
                       candidates) -> np.ndarray:
    """True where no candidate subspace tuple is invariant."""
    n = digits.shape[0]
    ok = np.ones(n, dtype=bool)
    for constraints in candidates:
        invariant = np.ones(n, dtype=bool)
        for i, j, off, C, BT in constraints:
            rows, cols = alpha[j], alpha[i]
            X = digits[:, off:off + rows * cols].reshape(n, rows, cols)
            prod = np.einsum("rs,nst,tu->nru", C, X, BT) % p
            invariant &= ~prod.any(axis=(1, 2))
            if not invariant.any():
                break
        ok &= ~invariant
        if not ok.any():
            break
    return ok


def _batch_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks over F_p of a stack of matrices, by vectorized elimination."""
    a = mats % p
    n, nrows, ncols = a.shape
    if n == 0 or nrows == 0 or ncols == 0:
        return np.zeros(n, dtype=np.int64)
    inv_table = np.array([0] + [pow(v, p - 2, p) for v in range(1, p)], dtype=np.int64)
    rank = np.zeros(n, dtype=np.int64)
    row_idx = np.arange(nrows)
    for col in range(ncols):
        colvals = a[:, :, col]
        eligible = (colvals != 0) & (row_idx[None, :] >= rank[:, None])
        has = eligible.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        r0 = rank[idx]
        piv = np.argmax(eligible[idx], axis=1)
        swap_tmp = a[idx, r0, :].copy()
        a[idx, r0, :] = a[idx, piv, :]
        a[idx, piv, :] = swap_tmp
        pivot_vals = a[idx, r0, col]
        a[idx, r0, :] = (a[idx, r0, :] * inv_table[pivot_vals][:, None]) % p
        col_rest = a[idx, :, col].copy()
        col_rest[np.arange(idx.size), r0] = 0
        a[idx, :, :] = (a[idx, :, :] - col_rest[:, :, None] * a[idx, r0, None, :]) % p
        rank[idx] += 1
    return rank


def _batch_end_dims(digits: np.ndarray, quiver: Quiver, alpha: DimVector,
                    p: int) -> np.ndarray:
    """Endomorphism dimensions for every point in the block."""
    n = digits.shape[0]
    sizes = [a * a for a in alpha]
    offsets = [sum(sizes[:i]) for i in range(len(alpha))]
    unknowns = sum(sizes)
    layout = _arrow_layout(quiver, alpha)
    neq = sum(alpha[j] * alpha[i] for i, j, _ in layout)
    if neq == 0:
        return np.full(n, unknowns, dtype=np.int64)
    system = np.zeros((n, neq, unknowns), dtype=np.int64)
    eq = 0
    for i, j, off in layout:
        ai, aj = alpha[i], alpha[j]
        X = digits[:, off:off + aj * ai].reshape(n, aj, ai)
        for r in range(aj):
            for c in range(ai):
                row = eq + r * ai + c
                for s in range(aj):
                    system[:, row, offsets[j] + r * aj + s] += X[:, s, c]
                for s in range(ai):
                    system[:, row, offsets[i] + s * ai + c] -= X[:, r, s]
        eq += aj * ai
    return unknowns - _batch_rank(system, p)


def count_semistable_ratio(quiver: Quiver, alpha: Sequence[int],
                           theta: Sequence[int], p: int,
                           budget: Budget = DEFAULT_BUDGET) -> Fraction:
    """#semistable points / #GL, exactly.

    Only dimension vectors of slope above the point's slope can violate
    semistability, so when no such sub-dimension exists (for instance for
    the zero stability) every point is semistable and no enumeration is
    needed; otherwise all points are scanned in blocks.
    """
    _check_prime(p)
    alpha = tuple(alpha)
    if height(alpha) == 0:
        return Fraction(1)
    glo = gl_order(alpha, p)
    mu = slope(theta, alpha)
    viol = [d for d in _proper_subdims(alpha) if slope(theta, d) > mu]
    dim = rep_space_dim(quiver, alpha)
    if not viol:
        return Fraction(p**dim, glo)
    total = _check_point_budget(quiver, alpha, p, budget)
    _check_stability_budget(alpha, p, budget)
    candidates = _candidate_constraints(quiver, alpha, p, viol)
    count = 0
    for digits in _digit_blocks(total, dim, p):
        count += int(_no_invariant_mask(digits, alpha, p, candidates).sum())
    return Fraction(count, glo)


@lru_cache(maxsize=128)
def _stable_end_tally(quiver: Quiver, alpha: DimVector, theta: tuple[int, ...],
                      p: int, budget: Budget) -> tuple[tuple[int, int], ...]:
    """(end_dim, point count) pairs over all stable points."""
    if height(alpha) == 0:
        return ()
    total = _check_point_budget(quiver, alpha, p, budget)
    mu = slope(theta, alpha)
    viol = [d for d in _proper_subdims(alpha) if slope(theta, d) >= mu]
    if viol:
        _check_stability_budget(alpha, p, budget)
    candidates = _candidate_constraints(quiver, alpha, p, viol)
    dim = rep_space_dim(quiver, alpha)
    tally: dict[int, int] = {}
    for digits in _digit_blocks(total, dim, p):
        mask = _no_invariant_mask(digits, alpha, p, candidates)
        stable_digits = digits[mask]
        if stable_digits.shape[0] == 0:
            continue
        ends = _batch_end_dims(stable_digits, quiver, alpha, p)
        values, counts = np.unique(ends, return_counts=True)
        for v, c in zip(values, counts):
            tally[int(v)] = tally.get(int(v), 0) + int(c)
    return tuple(sorted(tally.items()))


def _orbit_classes(n_points: int, aut_order: int, glo: int, label: str) -> int:
    numerator = n_points * aut_order
    if numerator % glo:
        raise DivisibilityError(
            f"{label}: {n_points} points with automorphism order {aut_order} "
            f"do not split into whole orbits of GL order {glo}"
        )
    return numerator // glo


def count_absolutely_stable(quiver: Quiver, alpha: Sequence[int],
                            theta: Sequence[int], p: int,
                            budget: Budget = DEFAULT_BUDGET) -> int:
    """Isomorphism classes of stable points with scalar endomorphisms only.

    Such a point has automorphism group F_p^*, so the class count is
    (#points) * (p-1) / #GL; exact divisibility is asserted.
    """
    _check_prime(p)
    alpha = tuple(alpha)
    if height(alpha) == 0:
        return 0
    tally = dict(_stable_end_tally(quiver, alpha, tuple(theta), p, budget))
    return _orbit_classes(tally.get(1, 0), p - 1, gl_order(alpha, p),
                          f"absolutely stable classes at {alpha}, p={p}")


def count_stable_with_end_dim(quiver: Quiver, alpha: Sequence[int],
                              theta: Sequence[int], p: int, r: int,
                              budget: Budget = DEFAULT_BUDGET) -> int:
    """Isomorphism classes of stable points whose endomorphism ring is the
    field with p^r elements (automorphism group of order p^r - 1)."""
    _check_prime(p)
    if r < 1:
        raise ValueError("endomorphism degree must be >= 1")
    alpha = tuple(alpha)
    if height(alpha) == 0:
        return 0
    tally = dict(_stable_end_tally(quiver, alpha, tuple(theta), p, budget))
    return _orbit_classes(tally.get(r, 0), p**r - 1, gl_order(alpha, p),
                          f"stable classes with degree {r} at {alpha}, p={p}")
