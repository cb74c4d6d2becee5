"""Exact moments of Q_2(N, h, P) by brute-force enumeration.

Independent of the library: expands E[Q^k] over all k-tuples of index pairs
and multiplies exact raw moments of the standardized Poisson variables.
Prints values that the C++ tests freeze.
"""
from fractions import Fraction
from itertools import product
from math import comb


def standardized_poisson_moments(lam, up_to):
    # cumulants of (Po(l) - l)/sqrt(l) for l a perfect square are rational
    root = Fraction(int(lam ** 0.5))
    assert root * root == lam
    kappa = [Fraction(0), Fraction(0)] + [Fraction(lam) / root ** k for k in range(2, up_to + 1)]
    m = [Fraction(1)] + [Fraction(0)] * up_to
    for n in range(1, up_to + 1):
        m[n] = sum(comb(n - 1, k - 1) * kappa[k] * m[n - k] for k in range(1, n + 1))
    return m


def moments(h, n, raw, k):
    pairs = [(i, j) for i in range(n) for j in range(n) if h[i][j] != 0]
    total = Fraction(0)
    for tup in product(pairs, repeat=k):
        counts = [0] * n
        w = Fraction(1)
        for (i, j) in tup:
            counts[i] += 1
            counts[j] += 1
            w *= h[i][j]
        for c in counts:
            w *= raw[c]
            if w == 0:
                break
        total += w
    return total


def canonical(n):
    return [[Fraction(0) if i == j else Fraction(1, n) for j in range(n)] for i in range(n)]


if __name__ == "__main__":
    raw = standardized_poisson_moments(1, 8)
    print("standardized Poisson, lambda=1:", [str(x) for x in raw])
    for n in (4, 5):
        h = canonical(n)
        m = [moments(h, n, raw, k) for k in (2, 3, 4)]
        stat = m[2] - 12 * m[1]
        print(f"N={n}: E2={m[0]} E3={m[1]} E4={m[2]} stat={stat} = {float(stat)!r}")
    g = [Fraction(x) for x in (1, 0, 1, 0, 3, 0, 15, 0, 105)]
    h = canonical(4)
    print("gaussian N=4:", *(moments(h, 4, g, k) for k in (2, 3, 4)))
