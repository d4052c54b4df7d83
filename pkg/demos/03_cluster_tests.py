"""Which clusters are viral? Pairwise pooled t-tests over share counts."""

import numpy as np

from viralens import (
    cluster_stats,
    derive_viral_set,
    pairwise_matrix,
    t_quantile,
    viral_probability,
)

rng = np.random.default_rng(17)

# -- 1. simulate share counts for four clusters; cluster 2 runs hot
SIZES = (30, 25, 28, 12)
CENTERS = (950.0, 1100.0, 2600.0, 1000.0)
assignments = np.repeat(np.arange(4), SIZES)
shares = np.concatenate(
    [rng.normal(c, 700.0, size=n).clip(0) for c, n in zip(CENTERS, SIZES)]
)

stats = cluster_stats(assignments, shares, n_clusters=4)
print("cluster   n        mean      variance")
for s in stats:
    print(f"{s.cluster:>7} {s.frequency:>3} {s.mean:>11.1f} {s.variance:>13.0f}")

# -- 2. exact Student critical values, no lookup table
print("\nt critical values (95%, two-sided):")
for df in (10, 30, 53):
    print(f"  df={df}: {t_quantile(df, 0.975):.4f}")

# -- 3. all six pairwise tests; significance = |t| beyond the critical value
tests = pairwise_matrix(stats, confidence=0.95)
print("\npair    t        crit    significant")
for (i, j), r in sorted(tests.items()):
    star = "*" if r.significant else ""
    print(f"{i} vs {j} {r.t_stat:>7.2f} {r.t_crit:>9.2f}   {star}")

# -- 4. the viral set: clusters that win at least one significant comparison
viral = derive_viral_set(stats, tests)
print(f"\nviral clusters: {sorted(viral.clusters)} (rule: {viral.rule})")

# a design with most of its weight on a viral cluster scores high
theta = np.array([0.05, 0.10, 0.80, 0.05])
print(f"viral probability of theta {theta.tolist()}: {viral_probability(theta, viral):.2f}")
