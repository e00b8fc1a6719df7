"""Adjacency spectra: Jacobi eigensolver, power iteration, Hong's bound,
equitable quotients, the closed-form cubics, and interlacing.

Two independent routes to rho(G), each auditing the other:

- the dense route, `spectral_radius`, runs shifted power iteration and
  falls back to the cyclic Jacobi solver when convergence stalls;
- the quotient route, `quotient_matrix` + `characteristic_cubic` +
  `cubic_largest_root`, works from block row sums and a bracketed root
  search and never forms the full adjacency matrix spectrum.

Equitability is decided on exact integer row sums. Quotient entries are
`Fraction`s, so the cubics built from them have exact coefficients.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DEFAULT_TOLERANCES
from .graph import edge_count, family_cells, is_complete, is_star, iter_bits


class MatrixError(ValueError):
    """Non-square or non-symmetric input to a symmetric routine."""


class PartitionError(ValueError):
    """Cells that overlap, miss a vertex, or are empty."""


class RootBracketError(ArithmeticError):
    """No sign change could be found for a cubic."""


def adjacency_matrix(g):
    a = np.zeros((g.n, g.n))
    for v, row in enumerate(g.adj):
        for u in iter_bits(row):
            a[v, u] = 1.0
    return a


def family_adjacency(spec):
    """Dense A(K_h ∨ (K_c ∪ iK_1)) filled block by block in builder order.

    Unlike `build_family` this has no vertex cap.
    """
    spec.validate()
    hub, clique, _ = spec.parts()
    a = np.zeros((spec.n, spec.n))
    a[:hub, :] = 1.0
    a[:, :hub] = 1.0
    a[hub:hub + clique, hub:hub + clique] = 1.0
    np.fill_diagonal(a, 0.0)
    return a


def _as_symmetric(m, tol=1e-12):
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MatrixError(f"matrix must be square, got shape {a.shape}")
    if a.size and np.max(np.abs(a - a.T)) > tol:
        raise MatrixError("matrix must be symmetric")
    return a


def jacobi_eigh(m, tol=DEFAULT_TOLERANCES["eig"], max_sweeps=100):
    """Cyclic Jacobi rotations on a symmetric matrix.

    Returns (eigenvalues, eigenvectors, sweeps), eigenvalues unsorted in
    diagonal order and eigenvectors as the columns of the accumulated
    rotation. Stops once the off-diagonal Frobenius mass falls below
    `tol` times the matrix's Frobenius norm.
    """
    a = _as_symmetric(m)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a) or 1.0
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        off = math.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off < tol * scale:
            sweeps -= 1
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    return np.diag(a).copy(), v, sweeps


def eigenvalues_sym(m, tol=DEFAULT_TOLERANCES["eig"]):
    """Full spectrum of a symmetric matrix, non-increasing."""
    values, _, _ = jacobi_eigh(m, tol)
    return sorted((float(x) for x in values), reverse=True)


def power_iteration(a, tol=DEFAULT_TOLERANCES["eig"], max_iter=20000,
                    gap_floor=1e-6):
    """Dominant eigenpair of a nonnegative symmetric matrix.

    Iterates on A + I so that a bipartite spectrum (rho and -rho) cannot
    oscillate. Returns (value, vector, converged). `converged` is False
    when the iteration budget runs out or the observed contraction rate
    implies a spectral gap below `gap_floor`; callers then fall back to
    the Jacobi solver.
    """
    n = a.shape[0]
    shifted = a + np.eye(n)
    x = np.ones(n) / math.sqrt(n)
    value = 0.0
    previous_residual = None
    for iteration in range(1, max_iter + 1):
        y = shifted @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0, x, True
        x = y / norm
        ax = a @ x
        rayleigh = float(x @ ax)
        residual = float(np.linalg.norm(ax - rayleigh * x))
        if residual <= tol * max(1.0, abs(rayleigh)):
            return rayleigh, x, True
        if previous_residual and iteration > 50:
            ratio = residual / previous_residual
            if ratio < 1.0 and (1.0 - ratio) * (rayleigh + 1.0) < gap_floor:
                return rayleigh, x, False
        previous_residual = residual
        value = rayleigh
    return value, x, False


def spectral_radius(g, tol=DEFAULT_TOLERANCES["eig"]):
    """rho(G) = lambda_1(A(G))."""
    if g.n == 0:
        raise ValueError("spectral radius of the empty graph")
    if g.n == 1 or edge_count(g) == 0:
        return 0.0
    return matrix_spectral_radius(adjacency_matrix(g), tol)


def matrix_spectral_radius(a, tol=DEFAULT_TOLERANCES["eig"]):
    """lambda_1 of a nonnegative symmetric array: power iteration, then
    Jacobi when it stalls."""
    if not np.any(a):
        return 0.0
    value, _, converged = power_iteration(a, tol)
    if converged:
        return value
    return eigenvalues_sym(a, tol)[0]


def perron_vector(g, tol=DEFAULT_TOLERANCES["eig"]):
    """Unit eigenvector for lambda_1, sign-normalised to a positive sum."""
    values, vectors, _ = jacobi_eigh(adjacency_matrix(g), tol)
    x = vectors[:, int(np.argmax(values))]
    if x.sum() < 0:
        x = -x
    return x / np.linalg.norm(x)


@dataclass(frozen=True)
class HongBound:
    """sqrt(2e - n + 1), or None when the radicand is negative."""

    value: float | None
    radicand: int
    equality: bool

    def to_dict(self):
        return {"value": self.value, "radicand": self.radicand,
                "equality": self.equality}


def hong_bound(g):
    radicand = 2 * edge_count(g) - g.n + 1
    value = math.sqrt(radicand) if radicand >= 0 else None
    equality = is_star(g) or is_complete(g)
    return HongBound(value, radicand, equality)


# --- Quotient matrices ----------------------------------------------------

def _validate_cells(n, cells):
    seen = set()
    for index, cell in enumerate(cells):
        if not cell:
            raise PartitionError(f"cell {index} is empty")
        for v in cell:
            if not 0 <= v < n:
                raise PartitionError(f"vertex {v} out of range for n={n}")
            if v in seen:
                raise PartitionError(f"vertex {v} appears in two cells")
            seen.add(v)
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        raise PartitionError(f"cells miss vertices {missing}")


def symmetrize(matrix):
    """Symmetric matrix similar to a nonnegative quotient matrix.

    Entry (i, j) is sqrt(q_ij * q_ji). For an equitable quotient with
    positive cell sizes this equals D^(1/2) B D^(-1/2), D the diagonal
    of cell sizes, because |V_i| q_ij = |V_j| q_ji.
    """
    b = np.array([[float(x) for x in row] for row in matrix])
    product = b * b.T
    if np.any(product < 0):
        raise MatrixError("q_ij * q_ji must be nonnegative to symmetrize")
    s = np.sqrt(product)
    np.fill_diagonal(s, np.diag(b))
    return s


@dataclass(frozen=True)
class QuotientMatrix:
    cells: tuple
    q: tuple
    equitable: bool

    @property
    def order(self):
        return len(self.cells)

    def as_array(self):
        return np.array([[float(x) for x in row] for row in self.q])

    def symmetrized(self):
        return symmetrize(self.q)

    def eigenvalues(self, tol=DEFAULT_TOLERANCES["eig"]):
        """Spectrum of the quotient (via its symmetrization), non-increasing."""
        return eigenvalues_sym(self.symmetrized(), tol)

    def to_dict(self):
        return {
            "cells": [list(cell) for cell in self.cells],
            "q": [[float(x) for x in row] for row in self.q],
            "q_exact": [[str(x) for x in row] for row in self.q],
            "equitable": self.equitable,
        }


def quotient_matrix(g, cells):
    """Block average row sums of A(G) over `cells`."""
    cells = tuple(tuple(cell) for cell in cells)
    _validate_cells(g.n, cells)
    masks = [sum(1 << v for v in cell) for cell in cells]
    q = []
    equitable = True
    for cell in cells:
        row = []
        for mask in masks:
            sums = [(g.adj[v] & mask).bit_count() for v in cell]
            if min(sums) != max(sums):
                equitable = False
            row.append(Fraction(sum(sums), len(cell)))
        q.append(tuple(row))
    return QuotientMatrix(cells, tuple(q), equitable)


def dense_quotient_matrix(a, cells):
    """`quotient_matrix` for a dense 0/1 adjacency array."""
    cells = tuple(tuple(cell) for cell in cells)
    _validate_cells(a.shape[0], cells)
    q = []
    equitable = True
    for cell in cells:
        row = []
        for other in cells:
            sums = a[np.ix_(cell, other)].sum(axis=1)
            if sums.min() != sums.max():
                equitable = False
            row.append(Fraction(int(round(sums.sum())), len(cell)))
        q.append(tuple(row))
    return QuotientMatrix(cells, tuple(q), equitable)


def family_quotient(spec):
    """Quotient of a family over its nonempty (hub, clique, isolated)
    cells, read off the dense block matrix."""
    return dense_quotient_matrix(family_adjacency(spec), family_cells(spec))


def equitable_refinement(g):
    """Coarsest equitable partition, by colour refinement from one cell.

    Cells are returned ordered by their smallest vertex.
    """
    colour = [0] * g.n
    while True:
        signatures = [
            (colour[v], tuple(sorted(colour[u] for u in iter_bits(g.adj[v]))))
            for v in range(g.n)
        ]
        palette = {}
        refined = [palette.setdefault(sig, len(palette)) for sig in signatures]
        if len(palette) == len(set(colour)):
            break
        colour = refined
    cells = {}
    for v in range(g.n):
        cells.setdefault(colour[v], []).append(v)
    return sorted(cells.values(), key=lambda cell: cell[0])


# --- Cubics ---------------------------------------------------------------

@dataclass(frozen=True)
class CubicPoly:
    """x^3 + c2 x^2 + c1 x + c0."""

    c2: object
    c1: object
    c0: object

    def __call__(self, x):
        return ((x + self.c2) * x + self.c1) * x + self.c0

    def derivative(self, x):
        return (3 * x + 2 * self.c2) * x + self.c1

    def coefficients(self):
        return (1, self.c2, self.c1, self.c0)

    def critical_points(self):
        """Real roots of the derivative, ascending."""
        a, b, c = 3.0, 2.0 * float(self.c2), float(self.c1)
        disc = b * b - 4 * a * c
        if disc < 0:
            return []
        if disc == 0:
            return [-b / (2 * a)]
        root = math.sqrt(disc)
        return sorted([(-b - root) / (2 * a), (-b + root) / (2 * a)])

    def cauchy_bound(self):
        return 1.0 + max(abs(float(c)) for c in (self.c2, self.c1, self.c0))

    def __sub__(self, other):
        return CubicDifference(self.c2 - other.c2, self.c1 - other.c1,
                               self.c0 - other.c0)

    def __str__(self):
        terms = ["x^3"]
        for coefficient, power in ((self.c2, "x^2"), (self.c1, "x"), (self.c0, "")):
            if coefficient == 0:
                continue
            sign = "-" if coefficient < 0 else "+"
            magnitude = abs(coefficient)
            body = power if magnitude == 1 and power else f"{magnitude}{power}"
            terms.append(f"{sign} {body}")
        return " ".join(terms)

    def to_dict(self):
        return {"c2": str(self.c2), "c1": str(self.c1), "c0": str(self.c0),
                "text": str(self)}


@dataclass(frozen=True)
class CubicDifference:
    """c2 x^2 + c1 x + c0, the difference of two monic cubics."""

    c2: object
    c1: object
    c0: object

    def __call__(self, x):
        return (self.c2 * x + self.c1) * x + self.c0


def phi_b1(n, k, s):
    return CubicPoly(
        s - 2 * k + 3 - n,
        2 * k * s - s * s - 2 * k + 2 - n,
        s * (s - 2 * k + 1) * (n - 2 * s + 2 * k - 2),
    )


def phi_b2(n, k):
    return CubicPoly(3 - n, 2 - 2 * k - n, 2 * k * (n - 2 * k - 2))


def phi_b3(n, k, delta):
    return phi_b1(n, k, delta)


def b1_matrix(n, k, s):
    """Quotient of K_s ∨ (K_{n-2s+2k-1} ∪ (s-2k+1)K_1) over its three parts."""
    return [
        [s - 1, n - 2 * s + 2 * k - 1, s - 2 * k + 1],
        [s, n - 2 * s + 2 * k - 2, 0],
        [s, 0, 0],
    ]


def b2_matrix(n, k):
    return [
        [2 * k - 1, n - 2 * k - 1, 1],
        [2 * k, n - 2 * k - 2, 0],
        [2 * k, 0, 0],
    ]


def b3_matrix(n, k, delta):
    return b1_matrix(n, k, delta)


def characteristic_cubic(m):
    """det(xI - M) for a 3x3 matrix, exact for integer or Fraction entries."""
    if len(m) != 3 or any(len(row) != 3 for row in m):
        raise MatrixError("characteristic_cubic needs a 3x3 matrix")
    trace = m[0][0] + m[1][1] + m[2][2]
    minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0]
              + m[0][0] * m[2][2] - m[0][2] * m[2][0]
              + m[1][1] * m[2][2] - m[1][2] * m[2][1])
    det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
           - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
           + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    return CubicPoly(-trace, minors, -det)


def default_bracket(n):
    """[n-2, n-1]: the Perron root of a proper spanning supergraph of
    K_{n-1} inside K_n lies strictly between these."""
    return float(n - 2), float(n - 1)


def _sign_change(p, lo, hi, attempts=60):
    """Widen [lo, hi] geometrically until p(lo) < 0 < p(hi)."""
    width = max(hi - lo, 1.0)
    for _ in range(attempts):
        if p(lo) < 0 < p(hi):
            return lo, hi
        lo -= width
        hi += width
        width *= 2.0
    raise RootBracketError(f"no sign change for {p} after widening to [{lo}, {hi}]")


def _analytic_bracket(p, critical):
    bound = p.cauchy_bound()
    if not critical:
        return -bound, bound
    top = critical[-1]
    if p(top) < 0:
        return top, bound
    return -bound, critical[0]


def cubic_largest_root(p, bracket_lo=None, bracket_hi=None,
                       tol=DEFAULT_TOLERANCES["root"]):
    """Largest real root of a monic cubic.

    With a bracket, the bracket is widened geometrically until it shows
    a sign change, then clipped to lie above the local minimum when p is
    negative there. Without a bracket the critical points decide
    directly. A repeated largest root (no sign change anywhere near it)
    is returned when p vanishes at the largest critical point.
    """
    critical = p.critical_points()
    if critical:
        top = critical[-1]
        scale = max(1.0, abs(top)) ** 3
        if abs(p(top)) <= 1e-12 * scale:
            return float(top)
    if bracket_lo is None or bracket_hi is None:
        lo, hi = _analytic_bracket(p, critical)
    else:
        lo, hi = _sign_change(p, float(bracket_lo), float(bracket_hi))
    if critical and p(critical[-1]) < 0:
        # Only the largest root lies above the local minimum.
        lo = float(critical[-1])
        if hi <= lo or not p(hi) > 0:
            hi = p.cauchy_bound()

    if not p(lo) < 0 < p(hi):
        lo, hi = _sign_change(p, lo, hi)
    x = 0.5 * (lo + hi)
    for _ in range(400):
        value = p(x)
        if value == 0:
            return float(x)
        if value < 0:
            lo = x
        else:
            hi = x
        slope = p.derivative(x)
        candidate = x - value / slope if slope else None
        if candidate is not None and lo < candidate < hi:
            step = abs(candidate - x)
            x = candidate
            if step <= tol * max(1.0, abs(x)):
                return float(x)
        else:
            x = 0.5 * (lo + hi)
        if hi - lo <= tol * max(1.0, abs(x)):
            return float(0.5 * (lo + hi))
    return float(x)


# --- Interlacing ----------------------------------------------------------

@dataclass(frozen=True)
class InterlacingResult:
    ok: bool
    outer: tuple
    inner: tuple
    violation: dict | None = None

    def to_dict(self):
        return {"ok": self.ok, "outer": list(self.outer),
                "inner": list(self.inner), "violation": self.violation}


def check_interlacing(m, keep, tol=DEFAULT_TOLERANCES["interlace"]):
    """lambda_i >= mu_i >= lambda_{s-t+i} for the principal submatrix on
    rows `keep` (mu) of the symmetric matrix `m` (lambda)."""
    a = _as_symmetric(m)
    keep = sorted(keep)
    if not keep:
        raise ValueError("keep must be a nonempty index set")
    outer = eigenvalues_sym(a)
    inner = eigenvalues_sym(a[np.ix_(keep, keep)])
    s, t = len(outer), len(inner)
    for i in range(t):
        upper = outer[i]
        lower = outer[s - t + i]
        if inner[i] > upper + tol or inner[i] < lower - tol:
            violation = {"i": i + 1, "lambda_i": upper, "mu_i": inner[i],
                         "lambda_s_t_i": lower}
            return InterlacingResult(False, tuple(outer), tuple(inner), violation)
    return InterlacingResult(True, tuple(outer), tuple(inner))
