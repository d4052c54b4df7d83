"""Compiled collapsed-Gibbs kernels.

Hot loops only; all corpus preparation, seeding policy, and estimation from
averaged counts live in the lda module.  Every kernel draws randomness from
per-document splitmix64 states passed in (and back out) as uint64 arrays so
the sampler is deterministic and independent of document storage order.
"""

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 2.0**-53


@njit(cache=True)
def _mix(state):
    """One splitmix64 step: returns (next_state, output)."""
    state = state + _GOLDEN
    z = state
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True)
def _next_uniform(state):
    state, z = _mix(state)
    return state, np.float64(z >> np.uint64(11)) * _U53


@njit(cache=True)
def init_assignments(words, doc_off, k, states, z, n_dk, n_kw, n_k):
    """Uniform random topic per token, one draw per token per document."""
    n_docs = doc_off.shape[0] - 1
    for d in range(n_docs):
        st = states[d]
        for i in range(doc_off[d], doc_off[d + 1]):
            st, u = _next_uniform(st)
            topic = int(u * k)
            if topic == k:
                topic = k - 1
            z[i] = topic
            n_dk[d, topic] += 1
            n_kw[topic, words[i]] += 1
            n_k[topic] += 1
        states[d] = st


@njit(cache=True)
def run_sweeps(words, doc_off, z, n_dk, n_kw, n_k, alpha, eta, states, n_sweeps):
    """Plain collapsed-Gibbs sweeps mutating state in place, no accumulation."""
    n_docs = doc_off.shape[0] - 1
    k_count = n_dk.shape[1]
    veta = n_kw.shape[1] * eta
    p = np.empty(k_count, np.float64)
    for _ in range(n_sweeps):
        for d in range(n_docs):
            st = states[d]
            for i in range(doc_off[d], doc_off[d + 1]):
                w = words[i]
                old = z[i]
                n_dk[d, old] -= 1
                n_kw[old, w] -= 1
                n_k[old] -= 1
                total = 0.0
                for k in range(k_count):
                    total += (
                        (n_dk[d, k] + alpha[k])
                        * (n_kw[k, w] + eta)
                        / (n_k[k] + veta)
                    )
                    p[k] = total
                st, u = _next_uniform(st)
                target = u * total
                new = 0
                while p[new] < target and new < k_count - 1:
                    new += 1
                z[i] = new
                n_dk[d, new] += 1
                n_kw[new, w] += 1
                n_k[new] += 1
            states[d] = st


@njit(cache=True)
def run_chain(
    words, doc_off, z, n_dk, n_kw, n_k, alpha, eta, states,
    sweeps, burn_in, acc_dk, acc_kw, ll_trace,
):
    """Full training chain: sweeps, per-sweep log likelihood, count averaging.

    ll_trace[s] is the point-estimate log likelihood of the counts at the end
    of sweep s; acc_dk / acc_kw accumulate counts over post-burn-in sweeps.
    """
    n_docs = doc_off.shape[0] - 1
    k_count = n_dk.shape[1]
    v_count = n_kw.shape[1]
    veta = v_count * eta
    asum = 0.0
    for k in range(k_count):
        asum += alpha[k]
    for s in range(sweeps):
        run_sweeps(words, doc_off, z, n_dk, n_kw, n_k, alpha, eta, states, 1)
        ll = 0.0
        for d in range(n_docs):
            nd = np.float64(doc_off[d + 1] - doc_off[d])
            for i in range(doc_off[d], doc_off[d + 1]):
                w = words[i]
                acc = 0.0
                for k in range(k_count):
                    theta = (n_dk[d, k] + alpha[k]) / (nd + asum)
                    phi = (n_kw[k, w] + eta) / (n_k[k] + veta)
                    acc += theta * phi
                ll += np.log(acc)
        ll_trace[s] = ll
        if s >= burn_in:
            for d in range(n_docs):
                for k in range(k_count):
                    acc_dk[d, k] += n_dk[d, k]
            for k in range(k_count):
                for w in range(v_count):
                    acc_kw[k, w] += n_kw[k, w]


@njit(cache=True)
def fold_in_chain(words, phi, alpha, state, sweeps, burn_in):
    """Sample topics for one unseen document with phi held fixed.

    Returns accumulated post-burn-in doc-topic counts (length K).
    """
    k_count = phi.shape[0]
    n = words.shape[0]
    z = np.empty(n, np.int64)
    ndk = np.zeros(k_count, np.int64)
    acc = np.zeros(k_count, np.int64)
    for i in range(n):
        state, u = _next_uniform(state)
        topic = int(u * k_count)
        if topic == k_count:
            topic = k_count - 1
        z[i] = topic
        ndk[topic] += 1
    p = np.empty(k_count, np.float64)
    for s in range(sweeps):
        for i in range(n):
            w = words[i]
            old = z[i]
            ndk[old] -= 1
            total = 0.0
            for k in range(k_count):
                total += (ndk[k] + alpha[k]) * phi[k, w]
                p[k] = total
            state, u = _next_uniform(state)
            target = u * total
            new = 0
            while p[new] < target and new < k_count - 1:
                new += 1
            z[i] = new
            ndk[new] += 1
        if s >= burn_in:
            for k in range(k_count):
                acc[k] += ndk[k]
    return acc
