"""Latent Dirichlet allocation with a collapsed Gibbs sampler.

Training, point-estimate log likelihood, model selection over the topic
count with restarts, and fold-in inference for unseen documents.  Documents
are processed in a canonical order (sorted by document id) with one
splitmix64 stream per document, so permuting the corpus rows permutes the
outputs identically.
"""

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _gibbs
from .corpus import DocTermMatrix
from .rng import Stream, derive

DEFAULT_ETA = 0.1
FOLD_IN_SWEEPS = 200
FOLD_IN_BURN_IN = 50


@dataclass(frozen=True)
class LdaHyperparams:
    """Sampler configuration.

    alpha may be None (defaults to the conventional 50/K, symmetric), a
    positive scalar applied to every topic, or a length-K sequence of
    positive per-topic values.
    """

    k: int
    alpha: float | Sequence[float] | None = None
    eta: float = DEFAULT_ETA
    sweeps: int = 500
    burn_in: int = 100
    seed: int = 42

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if not self.sweeps > self.burn_in >= 0:
            raise ValueError("need sweeps > burn_in >= 0")
        if self.alpha is not None:
            if np.isscalar(self.alpha):
                if self.alpha <= 0:
                    raise ValueError("alpha must be positive")
            else:
                vec = tuple(float(a) for a in self.alpha)
                if len(vec) != self.k:
                    raise ValueError("per-topic alpha must have length k")
                if any(a <= 0 for a in vec):
                    raise ValueError("alpha components must be positive")
                object.__setattr__(self, "alpha", vec)

    def alpha_vector(self) -> np.ndarray:
        if self.alpha is None:
            return np.full(self.k, 50.0 / self.k)
        if np.isscalar(self.alpha):
            return np.full(self.k, float(self.alpha))
        return np.asarray(self.alpha, dtype=np.float64)


@dataclass(frozen=True)
class LdaModel:
    hyperparams: LdaHyperparams
    phi: np.ndarray                 # (K, V) topic-word probabilities
    vocabulary: tuple[str, ...]
    ll_trace: tuple[float, ...] = field(default=())

    def __post_init__(self):
        k, v = self.phi.shape
        if k != self.hyperparams.k or v != len(self.vocabulary):
            raise ValueError("phi shape must be (k, vocabulary size)")
        if np.any(self.phi <= 0):
            raise ValueError("phi entries must be positive")
        if np.max(np.abs(self.phi.sum(axis=1) - 1.0)) > 1e-9:
            raise ValueError("phi rows must sum to 1")

    @property
    def k(self) -> int:
        return self.hyperparams.k

    def word_index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.vocabulary)}


def _canonical_tokens(matrix: DocTermMatrix):
    """Expand counts to token streams in sorted-doc_id order.

    Returns (row_order, words, doc_off, zero_rows): row_order maps canonical
    position -> original row, zero_rows lists rows with no tokens (excluded).
    """
    totals = matrix.token_totals()
    zero_rows = [d for d in range(len(matrix.doc_ids)) if totals[d] == 0]
    nonzero = [d for d in range(len(matrix.doc_ids)) if totals[d] > 0]
    row_order = sorted(nonzero, key=lambda d: matrix.doc_ids[d])
    words_parts = []
    doc_off = np.zeros(len(row_order) + 1, dtype=np.int64)
    csr = matrix.counts
    for pos, d in enumerate(row_order):
        start, end = csr.indptr[d], csr.indptr[d + 1]
        words_parts.append(np.repeat(csr.indices[start:end], csr.data[start:end]))
        doc_off[pos + 1] = doc_off[pos] + totals[d]
    words = (
        np.concatenate(words_parts).astype(np.int64)
        if words_parts
        else np.zeros(0, dtype=np.int64)
    )
    return row_order, words, doc_off, zero_rows


def _doc_states(matrix: DocTermMatrix, row_order, seed: int) -> np.ndarray:
    return np.array(
        [derive(seed, "doc", matrix.doc_ids[d]) for d in row_order], dtype=np.uint64
    )


def gibbs_train(matrix: DocTermMatrix, hp: LdaHyperparams):
    """Train by collapsed Gibbs; returns (LdaModel, per-document theta M x K).

    phi and theta come from count tables averaged over post-burn-in sweeps.
    Documents with zero tokens are skipped (with a warning) and get the prior
    mean as theta.
    """
    row_order, words, doc_off, zero_rows = _canonical_tokens(matrix)
    if zero_rows:
        ids = [matrix.doc_ids[d] for d in zero_rows]
        warnings.warn(f"skipping zero-token documents: {ids}", stacklevel=2)
    if not row_order:
        raise ValueError("corpus has no documents with tokens")

    k = hp.k
    v = len(matrix.vocabulary)
    alpha = hp.alpha_vector()
    n_docs = len(row_order)
    states = _doc_states(matrix, row_order, hp.seed)
    z = np.zeros(words.shape[0], dtype=np.int64)
    n_dk = np.zeros((n_docs, k), dtype=np.int64)
    n_kw = np.zeros((k, v), dtype=np.int64)
    n_k = np.zeros(k, dtype=np.int64)
    acc_dk = np.zeros((n_docs, k), dtype=np.int64)
    acc_kw = np.zeros((k, v), dtype=np.int64)
    ll_trace = np.zeros(hp.sweeps, dtype=np.float64)

    _gibbs.init_assignments(words, doc_off, k, states, z, n_dk, n_kw, n_k)
    _gibbs.run_chain(
        words, doc_off, z, n_dk, n_kw, n_k, alpha, hp.eta, states,
        hp.sweeps, hp.burn_in, acc_dk, acc_kw, ll_trace,
    )

    n_avg = hp.sweeps - hp.burn_in
    kw_bar = acc_kw / n_avg
    k_bar = kw_bar.sum(axis=1)
    phi = (kw_bar + hp.eta) / (k_bar + v * hp.eta)[:, None]

    asum = alpha.sum()
    theta = np.tile(alpha / asum, (len(matrix.doc_ids), 1))
    totals = matrix.token_totals()
    dk_bar = acc_dk / n_avg
    for pos, d in enumerate(row_order):
        theta[d] = (dk_bar[pos] + alpha) / (totals[d] + asum)

    model = LdaModel(
        hyperparams=hp,
        phi=phi,
        vocabulary=matrix.vocabulary,
        ll_trace=tuple(float(x) for x in ll_trace),
    )
    return model, theta


def log_likelihood(model: LdaModel, theta: np.ndarray, matrix: DocTermMatrix) -> float:
    """Point-estimate log likelihood: sum over tokens of log(theta_d . phi[:, w])."""
    theta = np.asarray(theta, dtype=np.float64)
    m, v = matrix.counts.shape
    if theta.shape != (m, model.k):
        raise ValueError(f"theta must be {(m, model.k)}, got {theta.shape}")
    if model.phi.shape[1] != v:
        raise ValueError("model vocabulary does not match corpus width")
    if np.max(np.abs(theta.sum(axis=1) - 1.0)) > 1e-6:
        raise ValueError("theta rows must sum to 1")
    coo = matrix.counts.tocoo()
    probs = np.einsum("nk,kn->n", theta[coo.row], model.phi[:, coo.col])
    return float(np.sum(coo.data * np.log(probs)))


def select_k(
    matrix: DocTermMatrix,
    k_candidates: Sequence[int],
    restarts: int,
    template: LdaHyperparams,
):
    """Train every candidate K `restarts` times; keep each K's best likelihood.

    Returns (best_k, {k: best log likelihood}).  Ties break toward smaller K.
    The restart seeds derive from (template seed, K, restart index), so the
    best over r restarts only improves as r grows.
    """
    if not k_candidates:
        raise ValueError("k_candidates must be non-empty")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if not (np.isscalar(template.alpha) or template.alpha is None):
        raise ValueError("select_k needs a scalar or default alpha template")
    table: dict[int, float] = {}
    for k in k_candidates:
        best = -np.inf
        for r in range(restarts):
            hp = LdaHyperparams(
                k=k,
                alpha=template.alpha,
                eta=template.eta,
                sweeps=template.sweeps,
                burn_in=template.burn_in,
                seed=derive(template.seed, "k", k, "restart", r),
            )
            model, theta = gibbs_train(matrix, hp)
            best = max(best, log_likelihood(model, theta, matrix))
        table[k] = best
    best_k = None
    for k in sorted(table):
        if best_k is None or table[k] > table[best_k]:
            best_k = k
    return best_k, table


def fold_in(
    model: LdaModel,
    doc: dict[str, int],
    seed: int | None = None,
    sweeps: int = FOLD_IN_SWEEPS,
    burn_in: int = FOLD_IN_BURN_IN,
) -> np.ndarray:
    """Infer theta for an unseen document with phi held fixed.

    Words outside the model vocabulary are dropped with a warning; an empty
    document gets the prior mean.
    """
    if not sweeps > burn_in >= 0:
        raise ValueError("need sweeps > burn_in >= 0")
    index = model.word_index()
    alpha = model.hyperparams.alpha_vector()
    unknown = sorted(w for w in doc if w not in index)
    if unknown:
        warnings.warn(f"dropping words outside model vocabulary: {unknown}", stacklevel=2)
    pairs = [(index[w], c) for w, c in doc.items() if w in index and c > 0]
    if not pairs:
        return alpha / alpha.sum()
    words = np.concatenate([np.full(c, w, dtype=np.int64) for w, c in pairs])
    state = np.uint64(derive(model.hyperparams.seed if seed is None else seed, "fold-in"))
    acc = _gibbs.fold_in_chain(words, model.phi, alpha, state, sweeps, burn_in)
    n_avg = sweeps - burn_in
    theta = (acc / n_avg + alpha) / (words.shape[0] + alpha.sum())
    return theta


class TopicAssignmentState:
    """Reference sampler over explicit count tables, in plain Python.

    Mirrors the compiled kernels draw-for-draw; useful for invariant checks
    and as an independent cross-check of the fast path on tiny corpora.
    """

    def __init__(self, matrix: DocTermMatrix, hp: LdaHyperparams):
        self.hp = hp
        row_order, words, doc_off, _ = _canonical_tokens(matrix)
        if not row_order:
            raise ValueError("corpus has no documents with tokens")
        self.doc_ids = tuple(matrix.doc_ids[d] for d in row_order)
        self.words = words
        self.doc_off = doc_off
        self.v = len(matrix.vocabulary)
        self.alpha = hp.alpha_vector()
        self.streams = [
            Stream(derive(hp.seed, "doc", doc_id)) for doc_id in self.doc_ids
        ]
        self.z = np.zeros(words.shape[0], dtype=np.int64)
        self.n_dk = np.zeros((len(row_order), hp.k), dtype=np.int64)
        self.n_kw = np.zeros((hp.k, self.v), dtype=np.int64)
        self.n_k = np.zeros(hp.k, dtype=np.int64)
        for d, stream in enumerate(self.streams):
            for i in range(doc_off[d], doc_off[d + 1]):
                topic = min(int(stream.uniform() * hp.k), hp.k - 1)
                self.z[i] = topic
                self.n_dk[d, topic] += 1
                self.n_kw[topic, words[i]] += 1
                self.n_k[topic] += 1

    @property
    def total_tokens(self) -> int:
        return int(self.words.shape[0])

    def sweep(self):
        k_count = self.hp.k
        eta = self.hp.eta
        veta = self.v * eta
        p = np.empty(k_count, dtype=np.float64)
        for d, stream in enumerate(self.streams):
            for i in range(self.doc_off[d], self.doc_off[d + 1]):
                w = self.words[i]
                old = self.z[i]
                self.n_dk[d, old] -= 1
                self.n_kw[old, w] -= 1
                self.n_k[old] -= 1
                total = 0.0
                for k in range(k_count):
                    total += (
                        (self.n_dk[d, k] + self.alpha[k])
                        * (self.n_kw[k, w] + eta)
                        / (self.n_k[k] + veta)
                    )
                    p[k] = total
                target = stream.uniform() * total
                new = 0
                while p[new] < target and new < k_count - 1:
                    new += 1
                self.z[i] = new
                self.n_dk[d, new] += 1
                self.n_kw[new, w] += 1
                self.n_k[new] += 1

    def run(self, n_sweeps: int):
        for _ in range(n_sweeps):
            self.sweep()
