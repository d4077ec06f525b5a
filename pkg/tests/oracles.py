"""Independent reference implementations used to check the real code.

Everything here is deliberately naive: plain scans, explicit loops, no
shared code with the package beyond its public data types.
"""

from __future__ import annotations

import math


def scan_windows(documents, x_tokens, y_tokens,
                 max_pre=1, max_mid=3, max_post=1):
    """Brute-force template windows: (doc, x_start, y_start, pre, mid, post)."""
    x_tokens = tuple(x_tokens)
    y_tokens = tuple(y_tokens)
    hits = []
    for doc_id, toks in enumerate(documents):
        n = len(toks)
        for xs in range(n):
            if tuple(toks[xs:xs + len(x_tokens)]) != x_tokens:
                continue
            xe = xs + len(x_tokens)
            for mid in range(max_mid + 1):
                ys = xe + mid
                if tuple(toks[ys:ys + len(y_tokens)]) != y_tokens:
                    continue
                ye = ys + len(y_tokens)
                if ye > n:
                    continue
                pre = min(max_pre, xs)
                post = min(max_post, n - ye)
                hits.append((doc_id, xs, ys, pre, mid, post))
    return hits


def scan_cooccurrences(documents, a_tokens, b_tokens, window):
    """(count_a, count_b, count_ab) by direct position scanning."""
    a_tokens, b_tokens = tuple(a_tokens), tuple(b_tokens)

    def positions(tokens_wanted):
        out = []
        for doc_id, toks in enumerate(documents):
            for i in range(len(toks)):
                if tuple(toks[i:i + len(tokens_wanted)]) == tokens_wanted:
                    out.append((doc_id, i))
        return out

    pos_a = positions(a_tokens)
    pos_b = positions(b_tokens)
    pairs = set()
    for da, ia in pos_a:
        for db, ib in pos_b:
            if da == db and (da, ia) != (db, ib) and abs(ia - ib) <= window:
                pairs.add(((da, min(ia, ib)), (da, max(ia, ib))))
    return len(pos_a), len(pos_b), len(pairs)


def enumerate_pattern_strings(window, x_span, y_span):
    """Every pattern (as a string) a window can generate, both hole orders."""
    out = set()
    for x_mark, y_mark in (("X", "Y"), ("Y", "X")):
        slots = []
        free = []
        i = 0
        while i < len(window):
            if i == x_span[0]:
                slots.append(x_mark)
                i = x_span[1]
            elif i == y_span[0]:
                slots.append(y_mark)
                i = y_span[1]
            else:
                free.append(len(slots))
                slots.append(window[i])
                i += 1
        for mask in range(1 << len(free)):
            variant = list(slots)
            for bit, pos in enumerate(free):
                if mask >> bit & 1:
                    variant[pos] = "*"
            out.add(" ".join(variant))
    return out


def ppmi_cell(F, i, j):
    """Scalar positive PMI of one cell, straight from the probability ratios."""
    total = sum(sum(row) for row in F)
    p_ij = F[i][j] / total
    p_i = sum(F[i]) / total
    p_j = sum(row[j] for row in F) / total
    if p_ij == 0 or p_i == 0 or p_j == 0:
        return 0.0
    pmi = math.log(p_ij / (p_i * p_j))
    return pmi if pmi > 0 else 0.0


def log_entropy_cell(F, i, j):
    """Scalar log-entropy weighting of one cell of a dense list matrix."""
    n_r = len(F)
    col = [F[r][j] for r in range(n_r)]
    col_sum = sum(col)
    if col_sum == 0:
        return 0.0
    if n_r > 1:
        entropy = 0.0
        for v in col:
            if v > 0:
                q = v / col_sum
                entropy += q * math.log(q)
        weight = 1.0 + entropy / math.log(n_r)
    else:
        weight = 1.0
    return math.log(F[i][j] + 1.0) * weight


def all_permutations(m):
    """Recursive permutation generator, independent of itertools."""
    if m == 0:
        return [()]
    out = []

    def rec(prefix, remaining):
        if not remaining:
            out.append(tuple(prefix))
            return
        for v in sorted(remaining):
            rec(prefix + [v], remaining - {v})

    rec([], set(range(m)))
    return out


def brute_force_best(m, score_of):
    """(best score, set of maximizing permutations) by exhaustive search."""
    best = -math.inf
    tied = []
    for perm in all_permutations(m):
        s = score_of(perm)
        if s > best:
            best = s
            tied = [perm]
        elif s == best:
            tied.append(perm)
    return best, set(tied)


def relational_score(perm, sim_lookup):
    """Direct double loop over i < j; sim_lookup(i, j, a, b) -> float."""
    m = len(perm)
    total = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            total += sim_lookup(i, j, perm[i], perm[j])
    return total


def attributional_score(perm, table):
    return sum(table[i][j] for i, j in enumerate(perm))
