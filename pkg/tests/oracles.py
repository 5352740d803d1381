"""Independent brute-force oracles.

Everything here is written from the definitions using plain Python loops and
mpmath for determinants/logs, deliberately avoiding the library's numpy code
paths so the two sides can disagree.
"""

import math
from functools import lru_cache

import mpmath

mpmath.mp.dps = 40


def mean_oracle(rows):
    n = len(rows)
    d = len(rows[0])
    return [sum(r[c] for r in rows) / n for c in range(d)]


def cov_oracle(rows, epsilon):
    """Direct-summation ML covariance (divisor n); epsilon added afterwards."""
    n = len(rows)
    d = len(rows[0])
    m = mean_oracle(rows)
    cov = [[0.0] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            cov[i][j] = sum((r[i] - m[i]) * (r[j] - m[j]) for r in rows) / n
    for i in range(d):
        cov[i][i] += epsilon
    return cov


def det_cofactor(matrix):
    """Recursive cofactor expansion; intended for d <= 3."""
    d = len(matrix)
    if d == 1:
        return matrix[0][0]
    total = 0.0
    for j in range(d):
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        total += ((-1) ** j) * matrix[0][j] * det_cofactor(minor)
    return total


def log_det_mp(matrix):
    """Arbitrary-precision log-determinant (exact conversion of f64 entries)."""
    return float(mpmath.log(mpmath.det(mpmath.matrix(matrix))))


def bic_oracle(rows, penalty, epsilon):
    n = len(rows)
    d = len(rows[0])
    k = d + d * (d + 1) // 2
    return 0.5 * n * log_det_mp(cov_oracle(rows, epsilon)) + penalty * k * math.log(n)


def delta_bic_oracle(x1, x2, epsilon):
    """Penalized likelihood comparison of adjacent windows, from scratch."""
    w = len(x1)
    d = len(x1[0])
    k = d + d * (d + 1) // 2
    ld1 = log_det_mp(cov_oracle(x1, epsilon))
    ld2 = log_det_mp(cov_oracle(x2, epsilon))
    ld12 = log_det_mp(cov_oracle(list(x1) + list(x2), epsilon))
    l_sep = -0.5 * w * (ld1 + ld2)
    l_joint = -w * ld12
    return -2.0 * (l_joint - l_sep) + k * math.log(2 * w)


def segmentation_cost_oracle(rows, splits, epsilon):
    """Per-segment code-length sum evaluated directly from its definition."""
    total_len = len(rows)
    d = len(rows[0])
    k = d + d * (d + 1) // 2
    bounds = [0] + list(splits) + [total_len]
    total = 0.0
    for start, end in zip(bounds[:-1], bounds[1:]):
        n = end - start
        if n == 1:
            ld = d * math.log(epsilon)
        else:
            ld = log_det_mp(cov_oracle(rows[start:end], epsilon))
        total += -0.5 * n * ld + 0.5 * k * math.log(n)
    return total


def mean_token_oracle(rows):
    """Direct-summation average of segment rows."""
    return mean_oracle(rows)


def dtw_oracle(a, b):
    """Recursive memoized DTW with squared Euclidean local cost."""
    a = [tuple(r) for r in a]
    b = [tuple(r) for r in b]

    def local(i, j):
        return sum((x - y) ** 2 for x, y in zip(a[i], b[j]))

    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == 0 and j == 0:
            return local(0, 0)
        if i == 0:
            return local(0, j) + rec(0, j - 1)
        if j == 0:
            return local(i, 0) + rec(i - 1, 0)
        return local(i, j) + min(rec(i - 1, j - 1), rec(i - 1, j), rec(i, j - 1))

    return rec(len(a) - 1, len(b) - 1)
