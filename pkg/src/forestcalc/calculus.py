"""Forest-matrix stack from the Laplacian recurrence, and derived matrices.

The k-arc forest matrices Q_k and their total weights sigma_k satisfy

    Q_0 = I,   sigma_{k+1} = tr(L Q_k) / (k + 1),   Q_{k+1} = sigma_{k+1} I - L Q_k,

with L the column Laplacian.  sigma_k grows combinatorially, so the loop is
run on the normalized matrices J_k = Q_k / sigma_k and the consecutive ratios
rho_k = sigma_k / sigma_{k-1}:

    rho_{k+1} = tr(L J_k) / (k + 1),   J_{k+1} = I - (L J_k) / rho_{k+1}.

The iteration stops at the first vanishing ratio; the last layer J_m is the
column-stochastic projection onto the maximum-forest structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .digraph import Digraph, reverse, source_knots
from .laplacian import LaplacianMatrix, column_laplacian

ZERO_RATIO_RTOL = 1e-12


class RecurrenceBreakdownError(ArithmeticError):
    """Negative forest weight appeared beyond roundoff; the float recurrence
    has lost the structure and the exact mode should be used instead."""


def _identity(n: int, exact: bool) -> np.ndarray:
    if exact:
        eye = np.full((n, n), Fraction(0), dtype=object)
        for i in range(n):
            eye[i, i] = Fraction(1)
        return eye
    return np.eye(n)


@dataclass(frozen=True, eq=False)
class ForestMatrixStack:
    """Normalized forest matrices J_0..J_m plus the weight ratios rho_1..rho_m.

    The raw sigma_k and Q_k are reconstructed on demand; m is the largest
    arc count with nonvanishing total forest weight, and n - m equals the
    number of trees in any maximum forest.
    """

    n: int
    j_matrices: tuple[np.ndarray, ...]
    rhos: tuple
    exact: bool

    @property
    def m(self) -> int:
        return len(self.j_matrices) - 1

    @property
    def d_prime(self) -> int:
        return self.n - self.m

    @cached_property
    def sigmas(self) -> tuple:
        one = Fraction(1) if self.exact else 1.0
        out = [one]
        for rho in self.rhos:
            out.append(out[-1] * rho)
        return tuple(out)

    @cached_property
    def q_matrices(self) -> tuple[np.ndarray, ...]:
        return tuple(s * j for s, j in zip(self.sigmas, self.j_matrices))

    def j(self, k: int) -> np.ndarray:
        return self.j_matrices[k]

    def q(self, k: int) -> np.ndarray:
        return self.q_matrices[k]


@dataclass(frozen=True, eq=False)
class ParametricForestMatrix:
    """Q and J evaluated on the digraph with all weights scaled by tau."""

    tau: float
    q_tau: np.ndarray
    sigma_tau: float
    j_tau: np.ndarray


@dataclass(frozen=True, eq=False)
class MaxForestMatrix:
    """Normalized matrix of maximum forests: the idempotent, column-stochastic
    projection annihilated by the Laplacian on both sides."""

    entries: np.ndarray


def forest_recurrence(lap: LaplacianMatrix) -> ForestMatrixStack:
    """Run the normalized recurrence until the forest weights vanish."""
    if lap.orientation != "column":
        raise ValueError("forest recurrence needs the column Laplacian")
    L = lap.entries
    n = lap.n
    exact = lap.exact
    eye = _identity(n, exact)
    j_matrices = [eye]
    rhos: list = []
    jk = eye
    for k in range(n):
        product = L @ jk
        rho = np.trace(product) / (k + 1)
        if exact:
            if rho < 0:
                raise RecurrenceBreakdownError(f"negative weight ratio {rho} in exact mode")
            if rho == 0:
                break
        else:
            cutoff = ZERO_RATIO_RTOL * n
            if rho < -cutoff:
                raise RecurrenceBreakdownError(
                    f"weight ratio {rho} fell below -{cutoff:.3e}; "
                    "consider the exact-arithmetic mode"
                )
            if rho <= cutoff:
                break
        jk = eye - product / rho
        j_matrices.append(jk)
        rhos.append(rho)
    return ForestMatrixStack(n, tuple(j_matrices), tuple(rhos), exact)


@lru_cache(maxsize=None)
def forest_stack(g: Digraph, exact: bool = False) -> ForestMatrixStack:
    """Forest stack of a digraph (memoised; column Laplacian built internally)."""
    return forest_recurrence(column_laplacian(g, exact=exact))


def in_forest_stack(g: Digraph, exact: bool = False) -> ForestMatrixStack:
    """Out-forest stack of the reversed digraph.

    Reversal swaps diverging and converging trees, so entry (j, i) of this
    stack's Q_k is the weight of the k-arc converging forests of g in which
    i's tree converges to j.
    """
    return forest_stack(reverse(g), exact=exact)


def forest_dimension(stack: ForestMatrixStack, g: Digraph | None = None) -> int:
    """Tree count of the maximum forests, n - m.

    When the digraph is supplied, the structural source-knot count is
    cross-checked; a mismatch means the recurrence tolerances failed.
    """
    d = stack.d_prime
    if g is not None:
        structural = source_knots(g).d_prime
        if structural != d:
            raise ArithmeticError(
                f"algebraic dimension {d} != structural source-knot count {structural}"
            )
    return d


def parametric_matrices(stack: ForestMatrixStack, lap: LaplacianMatrix, tau) -> ParametricForestMatrix:
    """Evaluate Q(tau) = sum Q_k tau^k and J(tau) = Q(tau) / sigma(tau).

    Also verifies J(tau) (I + tau L) = I, reconciling the polynomial route
    with the resolvent route.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if lap.exact != stack.exact:
        raise ValueError("stack and Laplacian must share the arithmetic mode")
    if stack.exact:
        tau = tau if isinstance(tau, Fraction) else Fraction(str(tau))
    else:
        tau = float(tau)
    coeffs = []
    power = Fraction(1) if stack.exact else 1.0
    for sigma in stack.sigmas:
        coeffs.append(sigma * power)
        power = power * tau
    total = sum(coeffs)
    j_tau = sum((c / total) * j for c, j in zip(coeffs, stack.j_matrices))
    q_tau = total * j_tau
    L = lap.entries
    eye = _identity(stack.n, stack.exact)
    residual = j_tau @ (eye + tau * L) - eye
    if stack.exact:
        if any(x != 0 for x in residual.flat):
            raise ArithmeticError("exact parametric matrix failed the inverse identity")
    else:
        scale = max(1.0, float(tau) * float(np.abs(L).max()))
        if float(np.abs(residual).max()) > 1e-8 * scale * stack.n:
            raise ArithmeticError(
                "parametric matrix failed the inverse identity beyond tolerance"
            )
    return ParametricForestMatrix(tau, q_tau, total, j_tau)


def max_forest_matrix(stack: ForestMatrixStack) -> MaxForestMatrix:
    """Top layer of the stack: Q_m / sigma_m."""
    return MaxForestMatrix(stack.j_matrices[-1])


def forest_matrix_from_powers(stack: ForestMatrixStack, lap: LaplacianMatrix, k: int) -> np.ndarray:
    """Independent route Q_k = sum_{i<=k} sigma_{k-i} (-L)^i; checked against
    the recurrence output before being returned."""
    if k < 0 or k > stack.m:
        raise ValueError(f"k must lie in 0..{stack.m}, got {k}")
    L = lap.entries
    acc = _identity(stack.n, stack.exact) * stack.sigmas[k]
    power = _identity(stack.n, stack.exact)
    for i in range(1, k + 1):
        power = power @ (-L)
        acc = acc + stack.sigmas[k - i] * power
    direct = stack.q(k)
    if stack.exact:
        if any(x != y for x, y in zip(acc.flat, direct.flat)):
            raise ArithmeticError("power-series route disagrees with the recurrence")
    else:
        scale = max(1.0, float(stack.sigmas[k]))
        if float(np.abs(acc - direct).max()) > 1e-8 * scale * stack.n:
            raise ArithmeticError("power-series route disagrees with the recurrence")
    return acc


def forest_digraph_laplacians(stack: ForestMatrixStack, lap: LaplacianMatrix) -> tuple[np.ndarray, ...]:
    """Laplacians L_k = sigma_k I - Q_k of the digraphs of k-arc forests.

    Verifies the recurrences L_{k+1} = L Q_k, tr(L_k) = k sigma_k, and
    L_{k+1} = L (tr(L_k)/k I - L_k) before returning L_1..L_m.
    """
    L = lap.entries
    eye = _identity(stack.n, stack.exact)
    out = []
    tol = 0.0
    if not stack.exact:
        tol = 1e-8 * stack.n * max(1.0, float(max(stack.sigmas)), float(np.abs(L).max()))

    def close(a, b) -> bool:
        if stack.exact:
            return all(x == y for x, y in zip(np.asarray(a).flat, np.asarray(b).flat))
        return float(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)).max()) <= tol

    for k in range(1, stack.m + 1):
        lk = stack.sigmas[k] * eye - stack.q(k)
        if not close(lk, L @ stack.q(k - 1)):
            raise ArithmeticError(f"L_{k} != L Q_{k - 1} beyond tolerance")
        if not close(np.trace(lk), k * stack.sigmas[k]):
            raise ArithmeticError(f"tr(L_{k}) != {k} sigma_{k} beyond tolerance")
        if k >= 2:
            prev = out[-1]
            target = L @ ((np.trace(prev) / (k - 1)) * eye - prev)
            if not close(lk, target):
                raise ArithmeticError(f"trace form of L_{k} disagrees beyond tolerance")
        out.append(lk)
    return tuple(out)


def dense_forest_matrix(max_forest: MaxForestMatrix, alpha: float, stack: ForestMatrixStack) -> np.ndarray:
    """Inverse of I + alpha * Jbar for admissible alpha.

    The admissible interval is 0 < alpha < sigma_m / sigma_{m-1} (any positive
    alpha when m = 0).  Idempotence of the projection forces the closed form
    I - alpha/(1+alpha) * Jbar, which is asserted against the direct inverse.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if stack.m >= 1:
        bound = float(stack.rhos[-1])
        if alpha >= bound:
            raise ValueError(f"alpha must be below sigma_m/sigma_(m-1) = {bound}, got {alpha}")
    jbar = np.asarray(max_forest.entries, dtype=float)
    n = jbar.shape[0]
    inverse = np.linalg.inv(np.eye(n) + alpha * jbar)
    closed = np.eye(n) - (alpha / (1.0 + alpha)) * jbar
    if float(np.abs(inverse - closed).max()) > 1e-9 * n:
        raise ArithmeticError("dense forest matrix disagrees with the idempotent closed form")
    return inverse
