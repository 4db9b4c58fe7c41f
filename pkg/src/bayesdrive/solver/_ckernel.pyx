# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled MCCFR-S kernel over flattened uniform-stage games.

Mirrors the pure-Python backend operation for operation (same PCG32
stream, same floating-point order), so both backends produce
bit-identical results for table-utility games.
"""

from libc.stdlib cimport free, malloc
from libc.math cimport sqrt

import numpy as np

ctypedef unsigned long long u64
ctypedef unsigned int u32

cdef u64 PCG_MULT = 6364136223846793005UL


cdef struct Rng:
    u64 state
    u64 inc


cdef inline u32 rng_u32(Rng* r) nogil:
    cdef u64 old = r.state
    r.state = old * PCG_MULT + r.inc
    cdef u32 xorshifted = <u32>(((old >> 18) ^ old) >> 27)
    cdef u32 rot = <u32>(old >> 59)
    return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31))


cdef inline void rng_seed(Rng* r, u64 seed) nogil:
    r.state = 0
    r.inc = 1  # stream 0, matching the Python generator
    rng_u32(r)
    r.state = r.state + seed
    rng_u32(r)


cdef inline double rng_double(Rng* r) nogil:
    return rng_u32(r) * (2.0 ** -32)


cdef inline int rng_choice(Rng* r, double* probs, int k) nogil:
    cdef double total = 0.0
    cdef int i
    for i in range(k):
        total += probs[i]
    cdef double u = rng_double(r) * total
    cdef double acc = 0.0
    cdef int last = 0
    for i in range(k):
        acc += probs[i]
        last = i
        if u < acc:
            return i
    return last


cdef inline void regret_match(double* regs, double* out, int k) nogil:
    cdef double total = 0.0
    cdef int i
    for i in range(k):
        if regs[i] > 0.0:
            total += regs[i]
    if total <= 0.0:
        for i in range(k):
            out[i] = 1.0 / k
    else:
        for i in range(k):
            out[i] = regs[i] / total if regs[i] > 0.0 else 0.0


cdef double pair_penalty(double[:, :, :, :, ::1] c1,
                         double[:, :, :, :, :, ::1] c2,
                         int i, int ti, int a1i, int a2i,
                         int j, int tj, int a1j, int a2j,
                         double d) nogil:
    """Sum over samples and circle pairs of min(dist - d, 0)^2."""
    cdef double pen = 0.0
    cdef double d2lim = d * d
    cdef double dx, dy, d2, dist
    cdef int h, bi, bj
    cdef int h1 = c1.shape[3]
    cdef int h2 = c2.shape[4]
    for h in range(h1):
        for bi in range(2):
            for bj in range(2):
                dx = c1[i, ti, a1i, h, 2 * bi] - c1[j, tj, a1j, h, 2 * bj]
                dy = c1[i, ti, a1i, h, 2 * bi + 1] - c1[j, tj, a1j, h, 2 * bj + 1]
                d2 = dx * dx + dy * dy
                if d2 < d2lim:
                    dist = sqrt(d2) - d
                    pen += dist * dist
    for h in range(h2):
        for bi in range(2):
            for bj in range(2):
                dx = c2[i, ti, a1i, a2i, h, 2 * bi] - c2[j, tj, a1j, a2j, h, 2 * bj]
                dy = c2[i, ti, a1i, a2i, h, 2 * bi + 1] - c2[j, tj, a1j, a2j, h, 2 * bj + 1]
                d2 = dx * dx + dy * dy
                if d2 < d2lim:
                    dist = sqrt(d2) - d
                    pen += dist * dist
    return pen


def solve(int n_players, int n_stages,
          int[::1] n_types,
          int[:, :, ::1] n_act,
          int[:, ::1] amax,
          long[::1] stage_off,
          int[::1] amax_p,
          long[::1] base,
          long[::1] vbase,
          double[::1] prior,
          double[::1] re,
          double[::1] sigma,
          unsigned char[::1] visited,
          double[:, ::1] va,
          long[:, ::1] counts,
          long iterations, double eps, u64 seed,
          long[:, ::1] amarg,
          int util_mode,
          object table_obj, object own_obj, object c1_obj, object c2_obj,
          double w_s, double d):
    cdef Rng rng
    rng_seed(&rng, seed)

    cdef long n_isets = stage_off[n_stages]
    cdef int n_nodes = n_players * n_stages
    cdef int amax_all = 0
    cdef int i, s, t
    for i in range(n_players):
        if amax_p[i] > amax_all:
            amax_all = amax_p[i]

    cdef double[:, :, ::1] table
    cdef double[:, :, :, ::1] own
    cdef double[:, :, :, :, ::1] c1
    cdef double[:, :, :, :, :, ::1] c2
    if util_mode == 0:
        table = table_obj
    else:
        own = own_obj
        c1 = c1_obj
        c2 = c2_obj

    # per-node scratch
    cdef int* nd_player = <int*>malloc(n_nodes * sizeof(int))
    cdef long* nd_row = <long*>malloc(n_nodes * sizeof(long))
    cdef long* nd_vrow = <long*>malloc(n_nodes * sizeof(long))
    cdef int* nd_k = <int*>malloc(n_nodes * sizeof(int))
    cdef int* nd_a = <int*>malloc(n_nodes * sizeof(int))
    cdef double* nd_sig = <double*>malloc(n_nodes * sizeof(double))
    cdef double* nd_prefix = <double*>malloc(n_nodes * sizeof(double))
    cdef int* nd_stage = <int*>malloc(n_nodes * sizeof(int))
    cdef double* mixed = <double*>malloc(amax_all * sizeof(double))
    cdef double* reach = <double*>malloc(n_players * sizeof(double))
    cdef double* util = <double*>malloc(n_players * sizeof(double))
    cdef int* tvec = <int*>malloc(n_players * sizeof(int))
    cdef int* actions = <int*>malloc(n_nodes * sizeof(int))

    cdef long n_prior = prior.shape[0]
    cdef long it, tv_idx, h_idx, leaf_idx, row, vrow
    cdef int stage, j, k, a, node, ap, a1, a2
    cdef double like, prefix, x, c, w, u_i, pen
    cdef double sig_a

    freq = {}
    plan_len = 0
    for i in range(n_players):
        plan_len += n_types[i]
    plan = [0] * plan_len

    for it in range(iterations):
        # chance stage: sample the type vector from the flat joint prior
        tv_idx = rng_choice(&rng, &prior[0], <int>n_prior)
        leaf_idx = tv_idx
        for i in range(n_players - 1, -1, -1):
            tvec[i] = <int>(leaf_idx % n_types[i])
            leaf_idx //= n_types[i]
        for i in range(n_players):
            counts[i, tvec[i]] += 1

        # forward pass
        for i in range(n_players):
            reach[i] = 1.0
        like = 1.0
        h_idx = 0
        node = 0
        for stage in range(n_stages):
            for i in range(n_players):
                t = tvec[i]
                k = n_act[i, t, stage]
                row = base[i] + (t * n_isets + stage_off[stage] + h_idx) * amax_p[i]
                prefix = 1.0
                for j in range(n_players):
                    if j != i:
                        prefix *= reach[j]
                for ap in range(k):
                    mixed[ap] = (1.0 - eps) * sigma[row + ap] + eps / k
                a = rng_choice(&rng, mixed, k)
                like *= mixed[a]
                reach[i] *= sigma[row + a]
                nd_player[node] = i
                nd_row[node] = row
                nd_vrow[node] = vbase[i] + t * n_isets + stage_off[stage] + h_idx
                nd_k[node] = k
                nd_a[node] = a
                nd_sig[node] = sigma[row + a]
                nd_prefix[node] = prefix
                nd_stage[node] = stage
                actions[node] = a
                node += 1
            for i in range(n_players):
                h_idx = h_idx * amax[i, stage] + actions[node - n_players + i]

        # leaf utility
        if util_mode == 0:
            leaf_idx = h_idx
            for i in range(n_players):
                util[i] = table[tv_idx, leaf_idx, i]
        else:
            for i in range(n_players):
                a1 = actions[i]
                a2 = actions[n_players + i]
                util[i] = -own[i, tvec[i], a1, a2]
            for i in range(n_players):
                for j in range(i + 1, n_players):
                    pen = pair_penalty(c1, c2,
                                       i, tvec[i], actions[i], actions[n_players + i],
                                       j, tvec[j], actions[j], actions[n_players + j],
                                       d)
                    util[i] -= w_s * pen
                    util[j] -= w_s * pen

        # backward pass
        x = 1.0
        for node in range(n_nodes - 1, -1, -1):
            i = nd_player[node]
            row = nd_row[node]
            k = nd_k[node]
            a = nd_a[node]
            c = x
            x = c * nd_sig[node]
            w = util[i] / like * nd_prefix[node]
            for ap in range(k):
                if ap == a:
                    re[row + ap] += (c - x) * w
                else:
                    re[row + ap] += (-x) * w
            regret_match(&re[row], &sigma[row], k)
            visited[nd_vrow[node]] = 1
            if nd_stage[node] == 0:
                va[i, tvec[i]] += x * w

        # sample a partial plan from the updated strategies
        node = 0
        for i in range(n_players):
            for t in range(n_types[i]):
                k = n_act[i, t, 0]
                row = base[i] + t * n_isets * amax_p[i]
                a = rng_choice(&rng, &sigma[row], k)
                plan[node] = a
                amarg[node, a] += 1
                node += 1
        key = tuple(plan)
        if key in freq:
            freq[key] += 1
        else:
            freq[key] = 1

    free(nd_player); free(nd_row); free(nd_vrow); free(nd_k); free(nd_a)
    free(nd_sig); free(nd_prefix); free(nd_stage); free(mixed)
    free(reach); free(util); free(tvec); free(actions)
    return freq
