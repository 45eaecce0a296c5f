"""Numba kernels for the search-heavy paths.

Everything here works on plain numpy arrays so it can be JIT-compiled:

* ``canon_search`` -- backtracking minimisation of a code matrix under row
  permutations x per-row symbol permutations, columns kept sorted.
* ``census_subtree`` -- orderly-generation DFS that visits each canonical
  trifferent code exactly once.
* ``extend_base`` -- the tau-extension search: fill a new last coordinate of
  a base code with {0,1} in all ways and grow with symbol-2 words.

Pair compatibility is tracked with bitmasks over the 3^m candidate words: a
word u resolves a pair (y, z) iff some coordinate sees all three symbols,
which is an OR of precomputed per-(coordinate, symbol) masks.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np
from numba import njit

PERM_TBL = np.array(list(permutations(range(3))), dtype=np.uint8)


def _perm_tables() -> tuple[np.ndarray, np.ndarray]:
    idx = {tuple(p): i for i, p in enumerate(PERM_TBL)}
    comp = np.empty((6, 6), dtype=np.uint8)
    inv = np.empty(6, dtype=np.uint8)
    for a in range(6):
        for b in range(6):
            comp[a, b] = idx[tuple(PERM_TBL[a][PERM_TBL[b]])]
        inv[a] = idx[tuple(int(np.where(PERM_TBL[a] == v)[0][0]) for v in range(3))]
    return comp, inv


# PCOMP[a, b] = index of the perm x -> PERM_TBL[a][PERM_TBL[b][x]]
PCOMP, PINV = _perm_tables()

_CMP_EQ = np.uint8(0)
_CMP_LT = np.uint8(1)
_CMP_GT = np.uint8(2)


def digit_table(n: int) -> np.ndarray:
    """(3^n, n) table of digits, first coordinate most significant."""
    top = 3**n
    dig = np.empty((top, n), dtype=np.uint8)
    v = np.arange(top)
    for i in range(n - 1, -1, -1):
        dig[:, i] = v % 3
        v = v // 3
    return dig


def symbol_masks(n: int) -> np.ndarray:
    """(n, 3, nw) uint64 bitmasks: bit u set iff digit i of u equals s."""
    top = 3**n
    nw = (top + 63) // 64
    dig = digit_table(n)
    sm = np.zeros((n, 3, nw), dtype=np.uint64)
    for i in range(n):
        for s in range(3):
            for u in np.nonzero(dig[:, i] == s)[0]:
                sm[i, s, u >> 6] |= np.uint64(1) << np.uint64(u & 63)
    return sm


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def _pair_mask(out, ydig, zdig, sm):
    """OR of SM[i][third symbol] over coordinates where y and z differ."""
    nw = out.shape[0]
    for k in range(nw):
        out[k] = np.uint64(0)
    m = ydig.shape[0]
    for i in range(m):
        a = ydig[i]
        b = zdig[i]
        if a != b:
            s = 3 - a - b
            for k in range(nw):
                out[k] |= sm[i, s, k]


@njit(cache=True, inline="always")
def _refine(D, I, tz, order, grp, cmpst, bval, depth, r, p, mzp):
    """Place original row r with symbol permutation p at position ``depth``.

    Columns get counting-sorted inside their equal-prefix groups; the sorted
    row lands in ``bval`` and the depth+1 slots of the stacks are filled.
    Returns (action, jstar): action 0 if every column still ties with the
    incumbent exactly, 1 if the branch may still produce something smaller,
    2 if it must be pruned.  jstar is the column deciding the comparison;
    positions before it carry all-zero incumbent tails, so they must stay
    zero in every deeper row (the ``mzp`` leading positions are already
    under that constraint and prune the placement directly).
    """
    l = bval.shape[0]
    d1 = depth + 1
    j = 0
    while j < l:
        gid = grp[depth, j]
        k = j + 1
        while k < l and grp[depth, k] == gid:
            k += 1
        c0 = 0
        c1 = 0
        for t in range(j, k):
            v = PERM_TBL[p, D[r, order[depth, t]]]
            if v == 0:
                c0 += 1
            elif v == 1:
                c1 += 1
        b0 = j
        b1 = j + c0
        b2 = b1 + c1
        for t in range(j, k):
            v = PERM_TBL[p, D[r, order[depth, t]]]
            if v == 0:
                pos = b0
                b0 += 1
            elif v == 1:
                pos = b1
                b1 += 1
            else:
                pos = b2
                b2 += 1
            order[d1, pos] = order[depth, t]
            bval[pos] = v
            grp[d1, pos] = 3 * j + v
        j = k

    for t in range(mzp):
        if bval[t] != 0:
            return 2, t

    for t in range(l):
        st = cmpst[depth, t]
        if st == _CMP_EQ:
            if bval[t] < I[depth, t]:
                st = _CMP_LT
            elif bval[t] > I[depth, t]:
                st = _CMP_GT
        cmpst[d1, t] = st

    action = 0
    jstar = l
    for t in range(l):
        st = cmpst[d1, t]
        if st == _CMP_LT:
            action = 1
            jstar = t
            break
        if st == _CMP_GT:
            action = 2
            jstar = t
            break
        if tz[d1, t] == 0:
            action = 1
            jstar = t
            break
    return action, jstar


@njit(cache=True)
def canon_search(D, check_only):
    """Minimise a code matrix over the equivalence group.

    ``D`` is the (n, l) digit matrix of the input code, columns sorted
    ascending as base-3 words.  An arrangement picks an original row and one
    of the 6 symbol permutations per depth; after each placement the columns
    are re-sorted by the prefix built so far.  Three prunes keep the tree
    small: the zero-fill lower bound per column, the must-zero constraint on
    positions left of the deciding column, and automorphism orbits: every
    full tie between two arrangements exposes an automorphism of D, and a
    candidate equivalent (under automorphisms fixing the current path) to an
    already-explored sibling spans an isomorphic subtree, so it is skipped.

    Returns (is_input_canonical, canonical_digits, gen_s, gen_q, gen_count)
    where rows gen_s[i]/gen_q[i] for i < gen_count encode the discovered
    automorphism generators: original row x moves to row gen_s[i][x] with
    symbol permutation PERM_TBL[gen_q[i][x]].  With ``check_only`` the
    search aborts on the first strictly smaller arrangement.
    """
    n, l = D.shape
    I = D.copy()
    # tz[t, j]: incumbent digits of column j in rows >= t are all zero
    tz = np.zeros((n + 1, l), dtype=np.uint8)
    bdig = np.zeros((n, l), dtype=np.uint8)
    for j in range(l):
        tz[n, j] = 1
        for t in range(n - 1, -1, -1):
            tz[t, j] = 1 if (tz[t + 1, j] and I[t, j] == 0) else 0

    order = np.empty((n + 1, l), dtype=np.int32)
    grp = np.empty((n + 1, l), dtype=np.int32)
    cmpst = np.empty((n + 1, l), dtype=np.uint8)
    for j in range(l):
        order[0, j] = j
        grp[0, j] = 0
        cmpst[0, j] = _CMP_EQ

    nchoices = 6 * n
    used = np.zeros(n, dtype=np.uint8)
    bval = np.empty(l, dtype=np.uint8)
    cand = np.empty((n, nchoices), dtype=np.int32)
    cand_cnt = np.zeros(n, dtype=np.int32)
    idx = np.zeros(n, dtype=np.int32)
    keys = np.empty((n, nchoices), dtype=np.uint64)
    expl = np.zeros((n, nchoices), dtype=np.uint8)
    # mz[t]: leading positions that must stay zero in rows >= t
    mz = np.zeros(n + 1, dtype=np.int32)

    # current path and the path that produced the incumbent (identity start)
    cur_r = np.empty(n, dtype=np.int32)
    cur_p = np.empty(n, dtype=np.int32)
    inc_r = np.empty(n, dtype=np.int32)
    inc_p = np.zeros(n, dtype=np.int32)
    for t in range(n):
        inc_r[t] = t

    gcap = 256
    gs = np.empty((gcap, n), dtype=np.int8)
    gq = np.empty((gcap, n), dtype=np.int8)
    gcount = 0
    psb = np.empty(gcap, dtype=np.uint8)
    ovis = np.empty(nchoices, dtype=np.uint8)
    oque = np.empty(nchoices, dtype=np.int32)

    is_canonical = True
    depth = 0
    enter = True

    while depth >= 0:
        if enter:
            # enumerate viable branches at this node; for full minimisation
            # order them smallest sorted row first so the first leaf is
            # almost always the orbit minimum, for a plain canonicity check
            # the input is the only incumbent and ordering buys nothing
            cnt = 0
            if check_only:
                for c in range(nchoices):
                    if used[c // 6]:
                        continue
                    cand[depth, cnt] = c
                    cnt += 1
            else:
                for c in range(nchoices):
                    r = c // 6
                    if used[r]:
                        continue
                    p = c - 6 * r
                    action, _js = _refine(
                        D, I, tz, order, grp, cmpst, bval, depth, r, p, mz[depth]
                    )
                    if action == 2:
                        continue
                    key = np.uint64(0)
                    for t in range(l):
                        key = (key << np.uint64(2)) | np.uint64(bval[t])
                    pos = cnt
                    while pos > 0 and keys[depth, pos - 1] > key:
                        keys[depth, pos] = keys[depth, pos - 1]
                        cand[depth, pos] = cand[depth, pos - 1]
                        pos -= 1
                    keys[depth, pos] = key
                    cand[depth, pos] = c
                    cnt += 1
            cand_cnt[depth] = cnt
            for c in range(nchoices):
                expl[depth, c] = 0
            idx[depth] = 0
            enter = False
            continue

        if idx[depth] >= cand_cnt[depth]:
            depth -= 1
            if depth >= 0:
                used[cur_r[depth]] = 0
            continue

        c = cand[depth, idx[depth]]
        idx[depth] += 1
        r = c // 6
        p = c - 6 * r

        if gcount > 0:
            # automorphisms fixing the current path (pointwise, with
            # identity symbol action on the placed rows) permute the
            # candidates; anything in the orbit of an explored sibling
            # spans a subtree isomorphic to an explored one
            for gi in range(gcount):
                ok1 = True
                for u in range(depth):
                    ru = cur_r[u]
                    if gs[gi, ru] != ru or gq[gi, ru] != 0:
                        ok1 = False
                        break
                psb[gi] = 1 if ok1 else 0
            for t in range(nchoices):
                ovis[t] = 0
            ovis[c] = 1
            oque[0] = c
            qh = 0
            qt = 1
            skip = False
            while qh < qt:
                cc = oque[qh]
                qh += 1
                if expl[depth, cc]:
                    skip = True
                    break
                rr = cc // 6
                pp = cc - 6 * rr
                for gi in range(gcount):
                    if psb[gi] == 0:
                        continue
                    # forward image: row s^{-1}(rr), perm pp o q[s^{-1}(rr)]
                    r2 = -1
                    for x in range(n):
                        if gs[gi, x] == rr:
                            r2 = x
                            break
                    c2 = 6 * r2 + PCOMP[pp, gq[gi, r2]]
                    if ovis[c2] == 0:
                        ovis[c2] = 1
                        oque[qt] = c2
                        qt += 1
                    # inverse image: row s(rr), perm pp o q[rr]^-1
                    r3 = gs[gi, rr]
                    c3 = 6 * r3 + PCOMP[pp, PINV[gq[gi, rr]]]
                    if ovis[c3] == 0:
                        ovis[c3] = 1
                        oque[qt] = c3
                        qt += 1
            expl[depth, c] = 1
            if skip:
                continue
        else:
            expl[depth, c] = 1

        # re-evaluate: the incumbent may have improved since node entry
        action, jstar = _refine(D, I, tz, order, grp, cmpst, bval, depth, r, p, mz[depth])
        if action == 2:
            continue

        cur_r[depth] = r
        cur_p[depth] = p
        d1 = depth + 1
        if d1 == n:
            if action == 1:
                # strictly smaller full arrangement
                is_canonical = False
                if check_only:
                    return False, I, gs, gq, gcount
                for t in range(depth):
                    for jj in range(l):
                        I[t, jj] = bdig[t, jj]
                for jj in range(l):
                    I[depth, jj] = bval[jj]
                for jj in range(l):
                    tz[n, jj] = 1
                    for t in range(n - 1, -1, -1):
                        tz[t, jj] = 1 if (tz[t + 1, jj] and I[t, jj] == 0) else 0
                # the whole current path now ties with the incumbent
                for t in range(d1 + 1):
                    for jj in range(l):
                        cmpst[t, jj] = _CMP_EQ
                for t in range(1, d1 + 1):
                    w = l
                    for jj in range(l):
                        if tz[t, jj] == 0:
                            w = jj
                            break
                    mz[t] = w
                for t in range(n):
                    inc_r[t] = cur_r[t]
                    inc_p[t] = cur_p[t]
            else:
                # full tie: record the automorphism relating the two paths
                if gcount < gcap:
                    ident = True
                    for t in range(n):
                        x = cur_r[t]
                        gs[gcount, x] = inc_r[t]
                        gq[gcount, x] = PCOMP[PINV[inc_p[t]], cur_p[t]]
                        if gs[gcount, x] != x or gq[gcount, x] != 0:
                            ident = False
                    if not ident:
                        dup = False
                        for gi in range(gcount):
                            same = True
                            for x in range(n):
                                if gs[gi, x] != gs[gcount, x] or gq[gi, x] != gq[gcount, x]:
                                    same = False
                                    break
                            if same:
                                dup = True
                                break
                        if not dup:
                            gcount += 1
            continue

        for jj in range(l):
            bdig[depth, jj] = bval[jj]
        used[r] = 1
        mz[d1] = jstar
        depth = d1
        enter = True

    return is_canonical, I, gs, gq, gcount

@njit(cache=True)
def _encode_column(I, j):
    n = I.shape[0]
    v = np.int64(0)
    for t in range(n):
        v = 3 * v + I[t, j]
    return v


@njit(cache=True)
def _set_pairs_mask(mask, words, dig, sm, tmp):
    """AND the pair masks of all word pairs of a code into ``mask``."""
    l = words.shape[0]
    nw = mask.shape[0]
    for a in range(l):
        for b in range(a + 1, l):
            _pair_mask(tmp, dig[words[a]], dig[words[b]], sm)
            for k in range(nw):
                mask[k] &= tmp[k]


@njit(cache=True)
def census_subtree(n, words0, lmax, emit_min, dig, sm, counts, dist_hist, out_cap):
    """Orderly DFS below a canonical root code.

    Visits every canonical trifferent code that extends ``words0`` by words
    of strictly larger encoding, one class per orbit.  ``counts[l]`` gets the
    number of classes of cardinality l (root itself not counted);
    ``dist_hist[l, d]`` tallies classes by minimum distance.  Codes with
    cardinality >= ``emit_min`` are appended to the returned flat buffer as
    (l, w_1..w_l) records.
    """
    top = dig.shape[0]
    nw = (top + 63) // 64
    l0 = words0.shape[0]
    words = np.empty(lmax, dtype=np.int64)
    for i in range(l0):
        words[i] = words0[i]

    D = np.zeros((n, lmax), dtype=np.uint8)
    for i in range(l0):
        for t in range(n):
            D[t, i] = dig[words0[i], t]

    cand = np.zeros((lmax + 1, nw), dtype=np.uint64)
    cur = np.zeros(lmax + 1, dtype=np.int64)
    mind = np.zeros(lmax + 1, dtype=np.int64)
    tmp = np.empty(nw, dtype=np.uint64)

    # root candidate mask: all words above the root maximum that are
    # compatible with every root pair
    for k in range(nw):
        cand[l0, k] = ~np.uint64(0)
    _set_pairs_mask(cand[l0], words[:l0], dig, sm, tmp)
    start = words[l0 - 1] + 1 if l0 > 0 else 0
    cur[l0] = start

    md = n + 1  # "no pair" sentinel for cardinality < 2
    for a in range(l0):
        for b in range(a + 1, l0):
            d = 0
            for t in range(n):
                if dig[words[a], t] != dig[words[b], t]:
                    d += 1
            if d < md:
                md = d
    mind[l0] = md

    out = np.empty(out_cap, dtype=np.int64)
    out_len = 0

    depth = l0
    while depth >= l0:
        u = cur[depth]
        found = np.int64(-1)
        while u < top:
            if (cand[depth, u >> 6] >> np.uint64(u & 63)) & np.uint64(1):
                found = u
                break
            u += 1
        if found < 0:
            depth -= 1
            continue
        cur[depth] = found + 1
        l = depth
        words[l] = found
        for t in range(n):
            D[t, l] = dig[found, t]
        ok, _, _, _, _ = canon_search(D[:, : l + 1], True)
        if not ok:
            continue
        l1 = l + 1
        counts[l1] += 1
        # minimum distance, updated with the new word only
        md = mind[depth]
        for a in range(l):
            d = 0
            for t in range(n):
                if dig[words[a], t] != dig[found, t]:
                    d += 1
            if d < md:
                md = d
        if l1 >= 2:
            dist_hist[l1, md] += 1
        if l1 >= emit_min:
            if out_len + l1 + 1 > out.shape[0]:
                grown = np.empty(max(2 * out.shape[0], out_len + l1 + 1), dtype=np.int64)
                grown[:out_len] = out[:out_len]
                out = grown
            out[out_len] = l1
            out_len += 1
            for i in range(l1):
                out[out_len] = words[i]
                out_len += 1
        if l1 < lmax:
            for k in range(nw):
                cand[l1, k] = cand[depth, k]
            for a in range(l):
                _pair_mask(tmp, dig[words[a]], dig[found], sm)
                for k in range(nw):
                    cand[l1, k] &= tmp[k]
            cur[l1] = found + 1
            mind[l1] = md
            depth = l1

    return out[:out_len]


@njit(cache=True)
def _popcount_from(mask, lo, top):
    """Number of set bits with index in [lo, top)."""
    nw = mask.shape[0]
    k0 = lo >> 6
    if k0 >= nw:
        return np.int64(0)
    total = np.int64(_popcount(mask[k0] >> np.uint64(lo & 63)))
    for k in range(k0 + 1, nw):
        total += np.int64(_popcount(mask[k]))
    return total


@njit(cache=True)
def extend_base(base_words, m, target, dig, sm, prune, out_cap):
    """tau-extension of a length-m base code to length m+1.

    The base's tau words get the new last coordinate filled with {0,1} in
    all ways (first word pinned to 0: flipping 0<->1 in the new coordinate
    is a symbol permutation, so the halved set still covers every class);
    further words carry symbol 2 there and are added by DFS while the code
    stays trifferent.  Every code reaching ``target`` words is emitted raw
    as a (card, w_1..w_card) record of the returned buffer; equivalent codes
    are emitted once per realisation and deduplicated by the caller.

    With ``prune`` the occurrence-count cut is applied: assuming the final
    code has tau equal to the base cardinality, any symbol count above
    2*tau - target kills the branch.
    """
    tau = base_words.shape[0]
    top = dig.shape[0]
    nw = (top + 63) // 64
    smax = 2 * tau - target if prune else np.int64(1 << 60)

    # pair masks of all base pairs
    pm = np.zeros((tau, tau, nw), dtype=np.uint64)
    for a in range(tau):
        for b in range(a + 1, tau):
            _pair_mask(pm[a, b], dig[base_words[a]], dig[base_words[b]], sm)

    # base symbol counts per original coordinate
    sb = np.zeros((m, 3), dtype=np.int64)
    for a in range(tau):
        for t in range(m):
            sb[t, dig[base_words[a], t]] += 1

    # lazily built per-candidate masks: compatibility with all (base, u) pairs
    cb_idx = np.full(top, -1, dtype=np.int64)
    cb_buf = np.zeros((64, nw), dtype=np.uint64)
    cb_used = 0

    fills = np.zeros(tau, dtype=np.uint8)
    facc = np.zeros((tau + 1, nw), dtype=np.uint64)
    for k in range(nw):
        facc[0, k] = ~np.uint64(0)
    extra = np.uint64(64 * nw - top)
    if extra > 0:
        facc[0, nw - 1] = (~np.uint64(0)) >> extra
    fzeros = np.zeros(tau + 1, dtype=np.int64)
    fstate = np.zeros(tau + 1, dtype=np.int64)  # next fill value to try (0,1,2=done)

    amax = tau + 1
    added = np.zeros(amax, dtype=np.int64)
    aacc = np.zeros((amax + 1, nw), dtype=np.uint64)
    acur = np.zeros(amax + 1, dtype=np.int64)
    scnt = np.zeros((m, 3), dtype=np.int64)
    tmp = np.empty(nw, dtype=np.uint64)
    full = np.empty(amax + tau, dtype=np.int64)

    out = np.empty(out_cap, dtype=np.int64)
    out_len = 0

    needed = target - tau
    fstate[0] = 0
    depth = 0
    while depth >= 0:
        if depth == tau:
            # --- addition DFS under this filling ---
            for t in range(m):
                for s in range(3):
                    scnt[t, s] = sb[t, s]
            for k in range(nw):
                aacc[0, k] = facc[tau, k]
            acur[0] = 0
            a = 0
            while a >= 0:
                card = tau + a
                if card >= target and acur[a] == (added[a - 1] + 1 if a > 0 else 0):
                    # emit once, on first visit of this node
                    for i in range(tau):
                        full[i] = base_words[i] * 3 + fills[i]
                    for i in range(a):
                        full[tau + i] = added[i] * 3 + 2
                    sub = np.sort(full[:card])
                    if out_len + card + 1 > out.shape[0]:
                        grown = np.empty(max(2 * out.shape[0], out_len + card + 1), dtype=np.int64)
                        grown[:out_len] = out[:out_len]
                        out = grown
                    out[out_len] = card
                    out_len += 1
                    for j in range(card):
                        out[out_len] = sub[j]
                        out_len += 1
                # find next addable word
                u = acur[a]
                found = np.int64(-1)
                while u < top:
                    if (aacc[a, u >> 6] >> np.uint64(u & 63)) & np.uint64(1):
                        found = u
                        break
                    u += 1
                if found < 0:
                    a -= 1
                    if a >= 0:
                        w = added[a]
                        for t in range(m):
                            scnt[t, dig[w, t]] -= 1
                    continue
                acur[a] = found + 1
                # occurrence-count cut (new coordinate: symbol 2 appears a+1 times)
                if a + 1 > smax:
                    a -= 1
                    if a >= 0:
                        w = added[a]
                        for t in range(m):
                            scnt[t, dig[w, t]] -= 1
                    continue
                bad = False
                for t in range(m):
                    if scnt[t, dig[found, t]] + 1 > smax:
                        bad = True
                        break
                if bad:
                    continue
                # child candidate mask
                ci = cb_idx[found]
                if ci < 0:
                    if cb_used == cb_buf.shape[0]:
                        grown2 = np.zeros((2 * cb_buf.shape[0], nw), dtype=np.uint64)
                        grown2[:cb_used] = cb_buf[:cb_used]
                        cb_buf = grown2
                    for k in range(nw):
                        cb_buf[cb_used, k] = ~np.uint64(0)
                    for b in range(tau):
                        _pair_mask(tmp, dig[base_words[b]], dig[found], sm)
                        for k in range(nw):
                            cb_buf[cb_used, k] &= tmp[k]
                    cb_idx[found] = cb_used
                    ci = cb_used
                    cb_used += 1
                for k in range(nw):
                    aacc[a + 1, k] = aacc[a, k] & cb_buf[ci, k]
                for i in range(a):
                    _pair_mask(tmp, dig[added[i]], dig[found], sm)
                    for k in range(nw):
                        aacc[a + 1, k] &= tmp[k]
                if tau + a + 1 < target:
                    room = _popcount_from(aacc[a + 1], found + 1, top)
                    if tau + a + 1 + room < target:
                        continue
                added[a] = found
                for t in range(m):
                    scnt[t, dig[found, t]] += 1
                acur[a + 1] = found + 1
                a += 1
            depth -= 1
            continue

        b = fstate[depth]
        if b >= 2 or (depth == 0 and b >= 1):
            depth -= 1
            continue
        fstate[depth] += 1
        z1 = fzeros[depth] + (1 if b == 0 else 0)
        ones = depth + 1 - z1
        # both fill symbols obey the occurrence cut in the new coordinate
        if z1 > smax or ones > smax:
            continue
        for k in range(nw):
            facc[depth + 1, k] = facc[depth, k]
        for s in range(depth):
            if fills[s] == b:
                for k in range(nw):
                    facc[depth + 1, k] &= pm[s, depth, k]
        if needed > 0:
            room = _popcount_from(facc[depth + 1], 0, top)
            if room + tau < target:
                continue
        fills[depth] = b
        fzeros[depth + 1] = z1
        fstate[depth + 1] = 0
        depth += 1

    return out[:out_len]


@njit(cache=True, inline="always")
def _place_eq(D, T, order, grp, depth, r, p):
    """Place row r of D with symbol permutation p so it equals row ``depth`` of T.

    Columns are counting-sorted inside their equal-prefix groups exactly as in
    _refine; since T is column-sorted, the placed row matches T[depth] iff the
    per-group symbol counts match, in which case the depth+1 stacks are filled.
    """
    l = T.shape[1]
    d1 = depth + 1
    j = 0
    while j < l:
        gid = grp[depth, j]
        k = j + 1
        while k < l and grp[depth, k] == gid:
            k += 1
        c0 = 0
        c1 = 0
        t0 = 0
        t1 = 0
        for t in range(j, k):
            v = PERM_TBL[p, D[r, order[depth, t]]]
            if v == 0:
                c0 += 1
            elif v == 1:
                c1 += 1
            tv = T[depth, t]
            if tv == 0:
                t0 += 1
            elif tv == 1:
                t1 += 1
        if c0 != t0 or c1 != t1:
            return False
        b0 = j
        b1 = j + c0
        b2 = b1 + c1
        for t in range(j, k):
            v = PERM_TBL[p, D[r, order[depth, t]]]
            if v == 0:
                pos = b0
                b0 += 1
            elif v == 1:
                pos = b1
                b1 += 1
            else:
                pos = b2
                b2 += 1
            order[d1, pos] = order[depth, t]
            grp[d1, pos] = 3 * j + v
        j = k
    return True


@njit(cache=True)
def iso_to_target(D, T):
    """True iff some arrangement of D equals T exactly.

    ``D`` and ``T`` are (n, l) digit matrices of codes with equal shape and T
    column-sorted; equality of the arrangement with T at every row prunes the
    search to the point that both outcomes are decided almost immediately,
    which makes this far cheaper than comparing two full canonical forms.
    """
    n, l = D.shape
    order = np.empty((n + 1, l), dtype=np.int32)
    grp = np.empty((n + 1, l), dtype=np.int32)
    for j in range(l):
        order[0, j] = j
        grp[0, j] = 0
    used = np.zeros(n, dtype=np.uint8)
    choice = np.full(n, -1, dtype=np.int64)
    nchoices = 6 * n
    depth = 0
    while True:
        ch = choice[depth] + 1
        placed = False
        while ch < nchoices:
            r = ch // 6
            if used[r] == 0 and _place_eq(D, T, order, grp, depth, r, ch % 6):
                placed = True
                break
            ch += 1
        if placed:
            choice[depth] = ch
            used[ch // 6] = 1
            if depth == n - 1:
                return True
            depth += 1
            choice[depth] = -1
        else:
            depth -= 1
            if depth < 0:
                return False
            used[choice[depth] // 6] = 0
