"""The symbolic and cutoff identity suites behind ``cmzv selftest``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import checks
from .checks import CheckResult


@dataclass(frozen=True)
class Envelope:
    max_weight: int
    max_m: int
    star_m: int
    max_k: int
    fpq_q: int
    cutoff: int
    points: int


LEVELS = {
    "quick": Envelope(max_weight=4, max_m=3, star_m=6, max_k=6, fpq_q=5, cutoff=12, points=400),
    "full": Envelope(max_weight=6, max_m=4, star_m=8, max_k=9, fpq_q=8, cutoff=20, points=4000),
}


def run_selftest(level: str = "quick", seed: int = 0) -> list[CheckResult]:
    env = LEVELS[level]
    rng = np.random.default_rng(seed)
    w = env.max_weight
    shapes = checks.cyclic_indices(min(w, 5), 3)
    return [
        checks.check_two_derivation(env.max_m + 2, w - 1),
        checks.check_s_commutators(env.max_m, w - 1),
        checks.check_delta_harmonic(env.max_m, w - 1),
        checks.check_leibniz(w),
        checks.check_eq1(env.star_m),
        checks.check_eq2(env.star_m),
        checks.check_eq3(env.star_m),
        checks.check_weighted_sum(env.star_m),
        checks.check_der_z_sum(env.star_m),
        checks.check_der_z_1(env.max_m, w - 1),
        checks.check_partial_preserves_h0(env.max_m, w - 1),
        checks.check_sum_formula_words(env.max_k),
        checks.check_inner_harmonic_fpq(env.fpq_q, min(w, 4) - 1, w - 1),
        checks.check_cyclic_sum_construction(w),
        checks.check_derivation_paths(w),
        checks.check_ribbon_decomposition(w, 3, env.cutoff),
        checks.check_single_block_reduction(w, env.cutoff),
        checks.check_rotation(w, env.cutoff),
        checks.check_E_discrete(min(w, 5), 6 if level == "quick" else 10),
        checks.check_E_continuous(shapes, rng, env.points, 8),
        checks.check_Dprime_split(shapes, rng, env.points),
    ]


def format_report(level: str, seed: int, results: list[CheckResult]) -> str:
    lines = [f"cmzv selftest level={level} seed={seed}"]
    lines.extend(r.line() for r in results)
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
