"""Independent reference computations used only by the tests.

Nothing here imports the package: these are the slow, obvious routes that
the fast paths are checked against.
"""

from collections import Counter


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in partitions(n - p, p):
            yield (p,) + rest


def count_where(n, keep):
    return sum(1 for p in partitions(n) if keep(Counter(p)))


def no_single(residue, modulus):
    """Parts congruent to ``residue`` mod ``modulus`` never appear exactly once."""
    return lambda mult: all(m != 1 for k, m in mult.items()
                            if k % modulus == residue)


def product_of_factors(N, exponents):
    """``prod_j (1 - q^j)^e_j`` truncated to ``N`` by repeated multiplication.

    ``exponents`` maps ``j`` to a nonnegative exponent.
    """
    c = [1] + [0] * (N - 1)
    for j, e in exponents.items():
        for _ in range(e):
            for i in range(N - 1, j - 1, -1):
                c[i] -= c[i - j]
    return c


def pochhammer_direct(r, N, power=1):
    return product_of_factors(N, {j: power for j in range(r, N, r)})


def naive_mul(a, b):
    n = min(len(a), len(b))
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)]
