"""Compiled single-replication stepper mirroring ``Agent`` + ``run_replication``.

Arithmetic is ordered exactly as in the reference engine so both produce
bit-identical regret and counts; tests hold them to that.
"""

import math

import numpy as np
from numba import njit

SLK, UCB1, DLP, DLF, DLF_NAIVE = 0, 1, 2, 3, 4
KIND_CODES = {"slk": SLK, "ucb1": UCB1, "dlp": DLP, "dlf": DLF, "dlf-naive": DLF_NAIVE}


@njit(cache=True)
def _slk_choice(means, counts, t, k):
    n = means.shape[0]
    logt = math.log(t)
    ucb = np.empty(n)
    lcb = np.empty(n)
    for i in range(n):
        pad = math.sqrt(2.0 * logt / counts[i])
        ucb[i] = means[i] + pad
        lcb[i] = means[i] - pad
    best = -1
    for i in range(n):
        ahead = 0
        for j in range(n):
            if ucb[j] > ucb[i] or (ucb[j] == ucb[i] and j < i):
                ahead += 1
        if ahead < k and (best < 0 or lcb[i] < lcb[best]):
            best = i
    return best


@njit(cache=True)
def run_kernel(real, kind, num_users, target_rank, model_m2, genie, log_points):
    horizon, n_arms = real.shape
    rows = num_users if kind == DLF_NAIVE else 1
    means = np.zeros((num_users, rows, n_arms))
    counts = np.zeros((num_users, rows, n_arms), dtype=np.int64)
    plays = np.zeros((num_users, n_arms), dtype=np.int64)
    choice = np.empty(num_users, dtype=np.int64)
    out = np.empty(log_points.shape[0])
    cum = 0.0
    nxt = 0
    for t in range(1, horizon + 1):
        for j in range(num_users):
            m = j + 1
            if t <= n_arms:
                if kind == SLK or kind == UCB1:
                    choice[j] = t - 1
                else:
                    choice[j] = (m + t) % n_arms
            else:
                if kind == SLK:
                    k = target_rank
                elif kind == UCB1:
                    k = 1
                elif kind == DLP:
                    k = m
                else:
                    k = (m + t) % num_users + 1
                row = k - 1 if kind == DLF_NAIVE else 0
                choice[j] = _slk_choice(means[j, row], counts[j, row], t, k)
        s = 0.0
        for j in range(num_users):
            arm = choice[j]
            x = real[t - 1, arm]
            paid = True
            for h in range(num_users):
                if h != j and choice[h] == arm and (h < j or not model_m2):
                    paid = False
                    break
            s += x if paid else 0.0
            if kind == DLF_NAIVE and t <= n_arms:
                r0, r1 = 0, rows
            elif kind == DLF_NAIVE:
                r0 = (j + 1 + t) % num_users
                r1 = r0 + 1
            else:
                r0, r1 = 0, 1
            for r in range(r0, r1):
                c = counts[j, r, arm]
                means[j, r, arm] = (means[j, r, arm] * c + x) / (c + 1)
                counts[j, r, arm] = c + 1
            plays[j, arm] += 1
        cum = (cum + genie) - s
        while nxt < log_points.shape[0] and log_points[nxt] == t:
            out[nxt] = cum
            nxt += 1
    return out, plays
