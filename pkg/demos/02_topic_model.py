"""Train the Gibbs-sampled topic model on a tiny planted corpus."""

import numpy as np
import scipy.sparse as sp

from viralens import DocTermMatrix, LdaHyperparams, fold_in, gibbs_train, log_likelihood

rng = np.random.default_rng(5)

# -- 1. plant three topics over 15 words: each owns a 5-word block
VOCAB = tuple(f"w{i:02d}" for i in range(15))
phi_true = np.full((3, 15), 0.01)
for k in range(3):
    phi_true[k, 5 * k : 5 * (k + 1)] = 0.188
phi_true /= phi_true.sum(axis=1, keepdims=True)

rows = np.zeros((40, 15), dtype=np.int64)
theta_true = rng.dirichlet((0.2, 0.2, 0.2), size=40)
for d in range(40):
    for z in rng.choice(3, size=60, p=theta_true[d]):
        rows[d, rng.choice(15, p=phi_true[z])] += 1
matrix = DocTermMatrix(
    doc_ids=tuple(f"doc-{d:02d}" for d in range(40)),
    vocabulary=VOCAB,
    counts=sp.csr_matrix(rows),
)
print(f"corpus: {rows.shape[0]} docs, {rows.sum()} tokens, V={len(VOCAB)}")

# -- 2. train; alpha defaults to 50/K, counts averaged after burn-in
hp = LdaHyperparams(k=3, alpha=0.2, eta=0.1, sweeps=400, burn_in=100, seed=11)
model, theta = gibbs_train(matrix, hp)

print("\ntop words per topic (planted blocks should reappear):")
for k in range(3):
    top = np.argsort(-model.phi[k])[:5]
    words = " ".join(VOCAB[w] for w in sorted(top))
    print(f"  topic {k}: {words}")

# -- 3. the log-likelihood trace climbs during burn-in, then plateaus
trace = model.ll_trace
print(f"\nlog likelihood sweep 1: {trace[0]:.1f}  sweep 400: {trace[-1]:.1f}")
print(f"final point-estimate ll: {log_likelihood(model, theta, matrix):.1f}")

# -- 4. fold-in: theta for an unseen bag without touching phi
held_out = {"w00": 10, "w01": 8, "w03": 6}  # pure block-0 vocabulary
theta_new = fold_in(model, held_out, seed=99)
print(f"\nfold-in of a block-0 document: theta = {np.round(theta_new, 3)}")
print(f"dominant topic weight: {theta_new.max():.3f}")
