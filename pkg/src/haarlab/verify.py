"""The full invariant battery behind the `verify` command.

Each check returns a (name, passed, detail) record; the battery is a pure
function of (depth, trials, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .martingale import (
    StepFunction,
    analyze,
    haar_basis_matrix,
    haar_function,
    square_function,
    square_function_martingale,
    synthesize,
)
from .measure import MeasureTree, lebesgue, random_doubling
from .norms import (
    haar_lambda2_norm,
    inner_product,
    lambda_norm,
    lp_norm,
    sibling_lemma_check,
)
from .opnorm import l2_opnorm
from .shift import apply_shift, petermichl
from .studies import theorem_suite
from .tree import Node


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _battery(depth: int, trials: int, seed: int):
    """Deterministic stream of (measure, rng) pairs at depths 2..depth."""
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        d = int(rng.integers(2, depth + 1))
        wide = t % 3 == 0  # every third measure is strongly lopsided
        p_lo, p_hi = (0.05, 0.95) if wide else (0.25, 0.75)
        mu = random_doubling(d, seed=seed * 100_003 + t, p_min=p_lo, p_max=p_hi)
        yield mu, rng


def check_basis(depth: int, trials: int, seed: int) -> list[CheckResult]:
    worst_gram = worst_pars = worst_round = worst_mean = 0.0
    gram_budget = 40  # dense Gram checks are quadratic; cap how many run
    grams_done = 0
    for mu, rng in _battery(depth, trials, seed):
        n = 1 << mu.depth
        if grams_done < gram_budget:
            H = haar_basis_matrix(mu)
            gram = (H * mu.leaf_masses) @ H.T
            worst_gram = max(worst_gram, float(np.max(np.abs(gram - np.eye(n - 1)))))
            means = H @ mu.leaf_masses
            scale = np.max(np.abs(H), axis=1) * mu.total_mass
            worst_mean = max(worst_mean, float(np.max(np.abs(means) / scale)))
            grams_done += 1
        f = StepFunction(mu.depth, rng.standard_normal(n))
        spec = analyze(f, mu)
        l2sq = lp_norm(f, mu, 2.0) ** 2
        pars = spec.mean**2 * mu.total_mass + float(np.sum(spec.coeffs[1:] ** 2))
        worst_pars = max(worst_pars, abs(pars - l2sq) / l2sq)
        g = synthesize(spec, mu)
        worst_round = max(
            worst_round,
            float(np.max(np.abs(g.values - f.values)) / np.max(np.abs(f.values))),
        )
    return [
        CheckResult("orthonormality", worst_gram <= 1e-9, f"max |Gram - I| = {worst_gram:.3e}"),
        CheckResult("haar_mean_zero", worst_mean <= 1e-12, f"max scaled mean = {worst_mean:.3e}"),
        CheckResult("parseval", worst_pars <= 1e-9, f"max rel err = {worst_pars:.3e}"),
        CheckResult("roundtrip", worst_round <= 1e-9, f"max rel err = {worst_round:.3e}"),
    ]


def check_sandwich(depth: int, trials: int, seed: int) -> CheckResult:
    ok = True
    worst = ""
    for mu, _ in _battery(depth, trials, seed):
        rep = mu.balanced_constant()
        root_b = np.sqrt(rep.balanced_constant)
        if not (root_b * (1 - 1e-12) <= rep.bal_form_constant <= 4 * root_b * (1 + 1e-12)):
            ok = False
            worst = f"B={rep.balanced_constant:.4g} form={rep.bal_form_constant:.4g}"
            break
    return CheckResult("balance_sandwich", ok, worst or "sqrt(B) <= form <= 4 sqrt(B)")


def check_sibling(depth: int, trials: int, seed: int) -> CheckResult:
    count = 0
    for mu, rng in _battery(depth, trials, seed):
        f = StepFunction(mu.depth, rng.standard_normal(1 << mu.depth))
        for node in mu.tree.internal_nodes():
            holds, slack = sibling_lemma_check(mu, node, f)
            count += 1
            if not holds:
                return CheckResult(
                    "sibling_lemma", False, f"violated at {node}, slack {slack:.3e}"
                )
    return CheckResult("sibling_lemma", True, f"{count} trials, no violation")


def check_square_function(depth: int, trials: int, seed: int) -> CheckResult:
    worst = 0.0
    for mu, rng in _battery(depth, trials, seed):
        f = StepFunction(mu.depth, rng.standard_normal(1 << mu.depth))
        a = square_function(f, mu).values
        b = square_function_martingale(f, mu).values
        scale = max(float(np.max(a)), 1e-300)
        worst = max(worst, float(np.max(np.abs(a - b))) / scale)
    return CheckResult("square_function_two_forms", worst <= 1e-9, f"max rel err = {worst:.3e}")


def check_petermichl_norm(depth: int, trials: int, seed: int) -> CheckResult:
    worst = 0.0
    n_done = 0
    for mu, _ in _battery(depth, max(trials // 10, 5), seed + 1):
        est = l2_opnorm(petermichl(mu.depth), mu, tol=1e-10)
        worst = max(worst, abs(est.lower_bound - np.sqrt(2.0)))
        n_done += 1
    return CheckResult(
        "petermichl_sqrt2", worst <= 1e-6, f"{n_done} measures, max dev = {worst:.3e}"
    )


def check_lambda_closed_form(depth: int, trials: int, seed: int) -> CheckResult:
    worst = 0.0
    for mu, rng in _battery(min(depth, 7), max(trials // 10, 5), seed + 2):
        alpha = float(rng.uniform(0.0, 1.0))
        for node in mu.tree.internal_nodes():
            closed = haar_lambda2_norm(mu, node, alpha)
            enum = lambda_norm(haar_function(mu, node), mu, 2.0, alpha).value
            worst = max(worst, abs(closed - enum) / closed)
    return CheckResult("lambda_closed_form", worst <= 1e-9, f"max rel err = {worst:.3e}")


def check_adjoint_pairing(depth: int, trials: int, seed: int) -> CheckResult:
    worst = 0.0
    for mu, rng in _battery(depth, max(trials // 10, 5), seed + 3):
        T = petermichl(mu.depth)
        Tadj = T.adjoint()
        n = 1 << mu.depth
        f = StepFunction(mu.depth, rng.standard_normal(n))
        g = StepFunction(mu.depth, rng.standard_normal(n))
        lhs = inner_product(apply_shift(T, f, mu), g, mu)
        rhs = inner_product(f, apply_shift(Tadj, g, mu), mu)
        scale = max(lp_norm(f, mu, 2.0) * lp_norm(g, mu, 2.0), 1e-300)
        worst = max(worst, abs(lhs - rhs) / scale)
    return CheckResult("adjoint_pairing", worst <= 1e-9, f"max rel err = {worst:.3e}")


def check_theorem_suites(depth: int, seed: int) -> CheckResult:
    """Quick stagnation check on the even-split family at two depths."""
    lo = min(4, depth)
    hi = min(max(6, depth - 2), 8)
    if hi <= lo:
        hi = lo + 1
    rows = theorem_suite(
        "BMOtoBMO", [{"kind": "lebesgue"}], [lo, hi], seed=seed, n_random=6
    )
    by_depth = {r.depth: max(r.estimates.values()) for r in rows}
    ok = by_depth[hi] <= 1.25 * by_depth[lo]
    return CheckResult(
        "theorem_suite_stagnation",
        ok,
        f"max ratio {by_depth[lo]:.4g} @ depth {lo} vs {by_depth[hi]:.4g} @ depth {hi}",
    )


def run_verification(depth: int = 8, trials: int = 100, seed: int = 7) -> list[CheckResult]:
    results = []
    results.extend(check_basis(depth, trials, seed))
    results.append(check_sandwich(depth, trials, seed))
    results.append(check_sibling(depth, trials, seed))
    results.append(check_square_function(depth, trials, seed))
    results.append(check_petermichl_norm(depth, trials, seed))
    results.append(check_lambda_closed_form(depth, trials, seed))
    results.append(check_adjoint_pairing(depth, trials, seed))
    results.append(check_theorem_suites(depth, seed))
    return results
