"""Brute-force oracles kept independent of the library's elimination code."""

import itertools
from math import gcd


def perm_det(M):
    n = len(M)
    total = 0
    for p in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] > p[j]:
                    sign = -sign
        prod = 1
        for i in range(n):
            prod *= M[i][p[i]]
        total += sign * prod
    return total


def minors_gcd(M, k):
    m, n = len(M), len(M[0])
    g = 0
    for rows in itertools.combinations(range(m), k):
        for cols in itertools.combinations(range(n), k):
            g = gcd(g, perm_det([[M[i][j] for j in cols] for i in rows]))
    return g


def invariant_factors_by_minors(M):
    """d_k = D_k / D_{k-1}, D_k the gcd of k x k minors; stops at the rank."""
    if not M or not M[0]:
        return []
    out, prev = [], 1
    for k in range(1, min(len(M), len(M[0])) + 1):
        Dk = minors_gcd(M, k)
        if Dk == 0:
            break
        out.append(Dk // prev)
        prev = Dk
    return out


def matmul(A, B):
    return [[sum(a * b for a, b in zip(r, c)) for c in zip(*B)] for r in A]
