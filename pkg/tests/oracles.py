"""Independent brute-force reference implementations used as test oracles.

Everything here is deliberately naive pure Python (explicit loops over
points, pairs, and thresholds) so it shares no code path with the package.
"""

from __future__ import annotations

import math


def norm_of(row, kind: str) -> float:
    if kind == "l1":
        return sum(abs(v) for v in row)
    if kind == "l2":
        return math.sqrt(sum(v * v for v in row))
    if kind == "linf":
        return max(abs(v) for v in row)
    raise ValueError(kind)


def brute_overlap(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return sum(min(p.get(k, 0.0), q.get(k, 0.0)) for k in keys)


def brute_total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def brute_subset_variation(p: dict, q: dict, member) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys if member(k))


def brute_bound(pos, neg, conditions, kind: str) -> float:
    """Direct transcription of the pooled-bound algorithm, loops only.

    pos/neg are lists of coordinate tuples; conditions are callables
    returning 0 or 1 for a tuple.
    """
    pool = list(pos) + list(neg)
    r_pool = max(norm_of(x, kind) for x in pool)
    d = len(pos[0])
    mean_pos = [sum(x[i] for x in pos) / len(pos) for i in range(d)]
    mean_neg = [sum(x[i] for x in neg) / len(neg) for i in range(d)]
    gap = norm_of([a - b for a, b in zip(mean_pos, mean_neg)], kind)
    best = 0.0
    for g in conditions:
        accepted = [x for x in pool if g(x)]
        r_region = max((norm_of(x, kind) for x in accepted), default=0.0)
        rate_pos = sum(g(x) for x in pos) / len(pos)
        rate_neg = sum(g(x) for x in neg) / len(neg)
        if r_pool > 0:
            s = (1.0 - r_region / r_pool) * abs(rate_pos - rate_neg)
            best = max(best, s)
    if r_pool == 0.0:
        return 1.0
    return 1.0 - gap / (2.0 * r_pool) - 0.5 * best


def brute_auroc(scores, labels) -> float:
    pos = [s for s, y in zip(scores, labels) if y]
    neg = [s for s, y in zip(scores, labels) if not y]
    total = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                total += 1.0
            elif sp == sn:
                total += 0.5
    return total / (len(pos) * len(neg))


def brute_aupr(scores, labels) -> float:
    n_pos = sum(1 for y in labels if y)
    area = 0.0
    prev_recall = 0.0
    for t in sorted(set(scores), reverse=True):
        tp = sum(1 for s, y in zip(scores, labels) if y and s >= t)
        fp = sum(1 for s, y in zip(scores, labels) if not y and s >= t)
        precision = tp / (tp + fp)
        recall = tp / n_pos
        area += (recall - prev_recall) * precision
        prev_recall = recall
    return area


def brute_tpr_at(scores, labels, in_rate: float) -> float:
    n_pos = sum(1 for y in labels if y)
    n_neg = len(labels) - n_pos
    threshold = None
    for t in sorted(set(scores), reverse=True):
        retained = sum(1 for s, y in zip(scores, labels) if y and s >= t) / n_pos
        if retained >= in_rate:
            threshold = t
            break
    return sum(1 for s, y in zip(scores, labels) if not y and s < threshold) / n_neg


def brute_scorer_score(in_class, query, radii, kind: str) -> float:
    """First-pass confidence by direct pooled-bound evaluation."""
    conditions = [
        (lambda x, r=r: 1 if norm_of(x, kind) <= r else 0) for r in radii
    ]
    return brute_bound([tuple(query)], [tuple(x) for x in in_class], conditions, kind)
