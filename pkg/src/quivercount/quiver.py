"""Quiver combinatorics: arrow data, Euler forms, slopes and q-binomials.

A quiver is stored as an arrow-multiplicity matrix (entry (i, j) counts
arrows i -> j); loops and parallel arrows are allowed.  The bilinear form

    <a, b> = sum_i a^i b^i - sum_{arrows i->j} a^i b^j

has Gram matrix R with R_ij = delta_ij - #arrows(i -> j); its quadratic
form T(a) = <a, a> enters the closed formulas for counting series.

The q-binomials

    [n, m] = prod_{i=1..m} (1 - q^{n+i}) / prod_{i=1..m} (1 - q^i)
    [inf, m] = 1 / prod_{i=1..m} (1 - q^i)

are exact rational functions (polynomials for n >= 0), with vertexwise
products for vector arguments, and feed the generating series built at the
bottom of this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from .numtheory import integer_binomial
from .qpoly import QPoly, RationalFunction
from .series import DimVector, Series, TruncationSpec, height


class _Infinity:
    """Sentinel for the unbounded upper q-binomial parameter."""

    __slots__ = ()

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()

BinomIndex = Union[int, _Infinity]


@dataclass(frozen=True)
class Quiver:
    """A finite quiver with named vertices and an arrow-count matrix."""

    vertices: tuple[str, ...]
    arrow_counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.vertices)
        if n == 0:
            raise ValueError("quiver needs at least one vertex")
        if len(self.arrow_counts) != n or any(len(row) != n for row in self.arrow_counts):
            raise ValueError("arrow matrix must be square with one row per vertex")
        if any(c < 0 for row in self.arrow_counts for c in row):
            raise ValueError("arrow counts must be nonnegative")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]],
                    vertices: Optional[Sequence[str]] = None) -> "Quiver":
        n = len(matrix)
        if vertices is None:
            vertices = [str(i + 1) for i in range(n)]
        return cls(tuple(vertices), tuple(tuple(row) for row in matrix))

    @classmethod
    def from_arrows(cls, vertices: Sequence[str],
                    arrows: Sequence[Sequence[str]]) -> "Quiver":
        index = {v: i for i, v in enumerate(vertices)}
        n = len(vertices)
        counts = [[0] * n for _ in range(n)]
        for arrow in arrows:
            if len(arrow) != 2:
                raise ValueError(f"arrow {arrow!r} must be a [source, target] pair")
            src, dst = arrow
            if src not in index or dst not in index:
                raise ValueError(f"arrow {arrow!r} uses an unknown vertex")
            counts[index[src]][index[dst]] += 1
        return cls.from_matrix(counts, vertices)

    @classmethod
    def from_json(cls, data: dict) -> "Quiver":
        if "vertices" not in data:
            raise ValueError("quiver JSON needs a 'vertices' list")
        vertices = [str(v) for v in data["vertices"]]
        if "matrix" in data:
            return cls.from_matrix(data["matrix"], vertices)
        if "arrows" in data:
            return cls.from_arrows(vertices, data["arrows"])
        raise ValueError("quiver JSON needs 'arrows' or 'matrix'")

    @classmethod
    def load(cls, path) -> "Quiver":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "matrix": [list(row) for row in self.arrow_counts],
        }

    # -- structure -------------------------------------------------------------

    @property
    def nvertices(self) -> int:
        return len(self.vertices)

    def arrow_list(self) -> tuple[tuple[int, int], ...]:
        """Arrows as (source, target) index pairs, in canonical order."""
        out = []
        for i, row in enumerate(self.arrow_counts):
            for j, count in enumerate(row):
                out.extend([(i, j)] * count)
        return tuple(out)

    def ringel_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Gram matrix R of the Euler form: R_ij = delta_ij - #arrows(i->j)."""
        n = self.nvertices
        return tuple(
            tuple((1 if i == j else 0) - self.arrow_counts[i][j] for j in range(n))
            for i in range(n)
        )

    def ringel_form(self, alpha: Sequence[int], beta: Sequence[int]) -> int:
        n = self.nvertices
        if len(alpha) != n or len(beta) != n:
            raise ValueError("vector length must match the vertex count")
        total = sum(a * b for a, b in zip(alpha, beta))
        for i in range(n):
            if alpha[i]:
                row = self.arrow_counts[i]
                total -= alpha[i] * sum(row[j] * beta[j] for j in range(n) if beta[j])
        return total

    def tits_form(self, alpha: Sequence[int]) -> int:
        return self.ringel_form(alpha, alpha)

    def is_acyclic(self) -> bool:
        try:
            topological_order(self)
        except ValueError:
            return False
        return True


def topological_order(quiver: Quiver) -> tuple[int, ...]:
    """Vertex order with all arrows pointing forward; errors on cycles.

    Reordering is never done implicitly: the quiver keeps its given vertex
    order and callers apply this permutation explicitly when they need it.
    """
    n = quiver.nvertices
    indeg = [0] * n
    for i in range(n):
        for j in range(n):
            if quiver.arrow_counts[i][j]:
                if i == j:
                    raise ValueError("quiver has a loop; no topological order")
                indeg[j] += quiver.arrow_counts[i][j]
    order = []
    ready = [i for i in range(n) if indeg[i] == 0]
    while ready:
        v = ready.pop(0)
        order.append(v)
        for j in range(n):
            c = quiver.arrow_counts[v][j]
            if c:
                indeg[j] -= c
                if indeg[j] == 0:
                    ready.append(j)
    if len(order) != n:
        raise ValueError("quiver has an oriented cycle; no topological order")
    return tuple(order)


# -- stability ---------------------------------------------------------------


def parse_theta(data: dict, nvertices: int) -> tuple[int, ...]:
    theta = tuple(int(t) for t in data["theta"])
    if len(theta) != nvertices:
        raise ValueError("theta length must match the vertex count")
    return theta


def slope(theta: Sequence[int], alpha: Sequence[int]) -> Fraction:
    """The slope theta(alpha) / height(alpha); undefined for alpha = 0."""
    if len(theta) != len(alpha):
        raise ValueError("theta and alpha must have the same length")
    h = height(alpha)
    if h == 0:
        raise ValueError("slope of the zero vector is undefined")
    return Fraction(sum(t * a for t, a in zip(theta, alpha)), h)


# -- q-binomials ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _poch_denominator(m: int) -> QPoly:
    """prod_{i=1..m} (1 - q^i)."""
    poly = QPoly.one()
    for i in range(1, m + 1):
        poly = poly * QPoly([1] + [0] * (i - 1) + [-1])
    return poly


@lru_cache(maxsize=None)
def _qbinom_poly(n: int, m: int) -> QPoly:
    """[n, m] for n >= 0, as a polynomial (exact division, no gcd needed)."""
    num = QPoly.one()
    for i in range(1, m + 1):
        num = num * QPoly([1] + [0] * (n + i - 1) + [-1])
    for i in range(1, m + 1):
        num = num.exact_div(QPoly([1] + [0] * (i - 1) + [-1]))
    return num


@lru_cache(maxsize=None)
def qbinom(n: BinomIndex, m: int) -> RationalFunction:
    """The q-binomial [n, m]; n may be any integer or INFINITY.

    [n, 0] = 1; [n, m] = 0 for -m <= n <= -1 (a numerator factor 1 - q^0
    vanishes); for n <= -m-1 the reflection
        [n, m] = (-1)^m q^{mn + m(m+1)/2} [-n-m-1, m]
    reduces to the polynomial case.
    """
    if m < 0:
        raise ValueError("lower q-binomial index must be nonnegative")
    if m == 0:
        return RationalFunction.one()
    if isinstance(n, _Infinity):
        return RationalFunction(QPoly.one(), _poch_denominator(m))
    if -m <= n <= -1:
        return RationalFunction.zero()
    if n >= 0:
        return RationalFunction(_qbinom_poly(n, m))
    exponent = m * n + m * (m + 1) // 2
    sign = -1 if m % 2 else 1
    return (
        RationalFunction.q_power(exponent)
        * RationalFunction(_qbinom_poly(-n - m - 1, m) * sign)
    )


def qbinom_vec(lam, alpha: Sequence[int]) -> RationalFunction:
    """Vertexwise product [lam, alpha] = prod_i [lam^i, alpha^i].

    `lam` is either INFINITY (all entries unbounded) or a vector of integers
    of the same length as alpha.
    """
    if isinstance(lam, _Infinity):
        entries = [INFINITY] * len(alpha)
    else:
        entries = list(lam)
        if len(entries) != len(alpha):
            raise ValueError("lambda and alpha must have the same length")
    out = RationalFunction.one()
    for n, m in zip(entries, alpha):
        if m:
            out = out * qbinom(n, m)
            if out.is_zero:
                return out
    return out


# -- generating series -------------------------------------------------------


def q_exponential(trunc: TruncationSpec) -> Series:
    """The series with coefficient [inf, alpha] at x^alpha.

    For one variable this is Euler's q-exponential sum_k x^k / (q;q)_k; it
    equals Exp(sum_i x_i / (1-q)).
    """
    return Series(trunc, {a: qbinom_vec(INFINITY, a) for a in trunc.vectors()})


def q_binomial_series(lam: Sequence[int], trunc: TruncationSpec) -> Series:
    """The series with coefficient [lam, alpha] at x^alpha."""
    lam = tuple(lam)
    if len(lam) != trunc.nvars:
        raise ValueError("lambda length must match the variable count")
    return Series(trunc, {a: qbinom_vec(lam, a) for a in trunc.vectors()})


def q_binomial_series_at_one(lam: Sequence[int], trunc: TruncationSpec
                             ) -> dict[DimVector, Fraction]:
    """The q = 1 limit of q_binomial_series, via prod_i (1-x_i)^{-lam^i-1}.

    Coefficient of x^alpha is prod_i of the x^k coefficient of
    (1-x)^{-n-1}, i.e. (-1)^k C(-n-1, k); exact integers as Fractions.
    """
    lam = tuple(lam)
    if len(lam) != trunc.nvars:
        raise ValueError("lambda length must match the variable count")
    out = {}
    for alpha in trunc.vectors():
        val = 1
        for n, k in zip(lam, alpha):
            if k:
                sign = -1 if k % 2 else 1
                val *= sign * integer_binomial(-n - 1, k)
                if val == 0:
                    break
        if val:
            out[alpha] = Fraction(val)
    return out
