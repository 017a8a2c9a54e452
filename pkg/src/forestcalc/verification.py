"""Cross-check suite: every matrix identity against enumeration ground truth.

Each check compares an independent route (exhaustive forest enumeration,
traversal reachability, exact determinants) with the linear-algebra results,
and reports one pass/fail entry.  Sized for enumeration-scale digraphs.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .accessibility import in_accessibility, out_accessibility
from .calculus import (
    forest_digraph_laplacians,
    forest_matrix_from_powers,
    forest_stack,
    max_forest_matrix,
    parametric_matrices,
)
from .digraph import Digraph, reachability_bfs, reverse, source_knots
from .laplacian import column_laplacian
from .markov import cesaro_limit, inverse_corresponding_chain, verify_tree_theorem
from .oracle import MAX_VERTICES, enumerate_out_forests, forest_matrix
from .ranking import daniels_scores_strong, mean_score, score_basis
from .structure import (
    reachability_from_parametric,
    reachability_from_top_layers,
    sign_pattern,
    source_knots_from_matrix,
    structural_top_reachability,
    top_reachability,
    top_reachability_by_threshold,
)

PARAMETRIC_TAUS = (0.1, 1.0, 10.0)
REACHABILITY_TAUS = (0.01, 1.0, 100.0)


def _check(name: str, passed: bool, detail: str = "") -> dict:
    entry = {"name": name, "pass": bool(passed)}
    if detail:
        entry["detail"] = detail
    return entry


def _numeric_rank(matrix: np.ndarray, rtol: float = 1e-8) -> int:
    """Singular values above rtol times the largest one."""
    s = np.linalg.svd(np.asarray(matrix, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int((s > rtol * s[0]).sum())


def verify_suite(g: Digraph) -> dict:
    """Run the full identity suite on one digraph; n is capped at
    enumeration size because the oracle must be able to see everything."""
    if g.n > MAX_VERTICES:
        raise ValueError(f"verification needs n <= {MAX_VERTICES}, got {g.n}")
    checks: list[dict] = []
    stack = forest_stack(g)
    lap = column_laplacian(g)
    fs = enumerate_out_forests(g)
    jbar = np.asarray(max_forest_matrix(stack).entries, dtype=float)
    sk = source_knots(g)
    n = g.n

    # enumeration vs recurrence
    sigma_ok = len(stack.sigmas) - 1 == fs.max_arc_count
    q_ok = True
    for k in range(min(stack.m, fs.max_arc_count) + 1):
        sigma_exact = fs.sigma(k)
        scale = max(1.0, float(sigma_exact))
        sigma_ok &= abs(stack.sigmas[k] - float(sigma_exact)) <= 1e-10 * scale
        q_exact = np.array(forest_matrix(fs, k), dtype=float)
        q_ok &= float(np.abs(stack.q(k) - q_exact).max()) <= 1e-10 * scale
    checks.append(_check("forest-weights-match-enumeration", sigma_ok))
    checks.append(_check("forest-matrices-match-enumeration", q_ok))

    col_ok = all(
        float(np.abs(np.asarray(j, dtype=float).sum(axis=0) - 1.0).max()) <= 1e-9
        for j in stack.j_matrices
    )
    checks.append(_check("column-sums-stochastic", col_ok))

    two_route = True
    eye = np.eye(n)
    for tau in PARAMETRIC_TAUS:
        pm = parametric_matrices(stack, lap, tau)
        system = eye + tau * lap.entries
        det = float(np.linalg.det(system))
        adj = det * np.linalg.inv(system)
        scale = max(1.0, abs(det))
        two_route &= abs(pm.sigma_tau - det) <= 1e-8 * scale
        two_route &= float(np.abs(np.asarray(pm.q_tau, dtype=float) - adj).max()) <= 1e-8 * scale
    checks.append(_check("parametric-two-route", two_route))

    ann = max(
        float(np.abs(lap.entries @ jbar).max()),
        float(np.abs(jbar @ lap.entries).max()),
    )
    checks.append(_check("laplacian-annihilation", ann <= 1e-8, f"max {ann:.2e}"))
    idem = float(np.abs(jbar @ jbar - jbar).max())
    checks.append(_check("projection-idempotent", idem <= 1e-8, f"max {idem:.2e}"))

    d_prime = sk.d_prime
    rank_jbar = _numeric_rank(jbar)
    rank_lap = _numeric_rank(lap.entries)
    checks.append(_check("ranks", rank_jbar == d_prime and rank_lap == n - d_prime,
                         f"rank Jbar {rank_jbar}, rank L {rank_lap}"))
    checks.append(_check("dimension-structural-agreement", stack.d_prime == d_prime))

    try:
        for k in range(stack.m + 1):
            forest_matrix_from_powers(stack, lap, k)
        checks.append(_check("power-series-route", True))
    except ArithmeticError as err:
        checks.append(_check("power-series-route", False, str(err)))
    try:
        forest_digraph_laplacians(stack, lap)
        checks.append(_check("forest-laplacian-recurrences", True))
    except ArithmeticError as err:
        checks.append(_check("forest-laplacian-recurrences", False, str(err)))

    reach = reachability_bfs(g)
    par_ok = all(
        np.array_equal(reachability_from_parametric(g, tau), reach)
        for tau in REACHABILITY_TAUS
    )
    checks.append(_check("reachability-parametric", par_ok))
    checks.append(_check("reachability-top-layers",
                         np.array_equal(reachability_from_top_layers(stack), reach)))
    rhat = structural_top_reachability(g).entries
    checks.append(_check("top-reachability",
                         np.array_equal(top_reachability(max_forest_matrix(stack)).entries, rhat)))
    checks.append(_check("knots-from-matrix",
                         source_knots_from_matrix(max_forest_matrix(stack)).as_sets() == sk.as_sets()))
    if g.unit_weights():
        checks.append(_check("threshold-top-reachability",
                             np.array_equal(top_reachability_by_threshold(g).entries, rhat)))

    # duality, re-derived from enumeration of the reversed digraph
    dual_ok = True
    p_out = out_accessibility(g, 1.0).entries
    p_in = in_accessibility(g, 1.0).entries
    dual_ok &= float(np.abs(p_out - in_accessibility(reverse(g), 1.0).entries.T).max()) <= 1e-12
    fs_rev = enumerate_out_forests(reverse(g))
    total = fs_rev.sigma_total
    q_all = [[Fraction(0)] * n for _ in range(n)]
    for forest in fs_rev.all_forests():
        for j, root in forest.tree_assignment.items():
            q_all[root - 1][j - 1] += forest.weight
    p_in_oracle = np.array([[float(q_all[j][i] / total) for j in range(n)] for i in range(n)])
    dual_ok &= float(np.abs(p_in - p_in_oracle).max()) <= 1e-9
    checks.append(_check("duality", dual_ok))

    knot_ok = True
    knot_of = {v: knot for knot in sk.knots for v in knot}
    pattern = sign_pattern(jbar)
    for i in g.vertices:
        for j in g.vertices:
            expected = 1 if (i in sk.union and reach[i - 1, j - 1]) else 0
            knot_ok &= pattern[i - 1, j - 1] == expected
    for knot, plus in zip(sk.knots, sk.exclusive_reach):
        knot_ok &= abs(sum(jbar[k - 1, k - 1] for k in knot) - 1.0) <= 1e-9
        for k in knot:
            for j in plus:
                knot_ok &= abs(jbar[k - 1, j - 1] - jbar[k - 1, k - 1]) <= 1e-9
        members = sorted(knot)
        base = members[0]
        for other in members[1:]:
            ratio = jbar[other - 1, other - 1] / jbar[base - 1, base - 1]
            knot_ok &= float(np.abs(jbar[other - 1] - ratio * jbar[base - 1]).max()) <= 1e-9
    checks.append(_check("knot-structure", knot_ok))

    chain = inverse_corresponding_chain(g)
    limit = cesaro_limit(chain, tol=1e-8)
    ok, deviation = verify_tree_theorem(g, chain, limit)
    checks.append(_check("cesaro-tree-theorem", ok, f"max {deviation:.2e}"))

    mean = mean_score(g)
    checks.append(_check("mean-score-nullspace",
                         float(np.abs(lap.entries @ mean.values).max()) <= 1e-9))
    try:
        basis = score_basis(g)
        checks.append(_check("score-basis", len(basis.columns) == d_prime))
    except ArithmeticError as err:
        checks.append(_check("score-basis", False, str(err)))
    if d_prime == 1 and len(sk.knots[0]) == n:
        try:
            daniels_scores_strong(g)
            checks.append(_check("spanning-tree-scores", True))
        except ArithmeticError as err:
            checks.append(_check("spanning-tree-scores", False, str(err)))

    return {"checks": checks, "all_pass": all(c["pass"] for c in checks)}
