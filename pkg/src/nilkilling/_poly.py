"""Univariate polynomials over Q as coefficient lists, highest degree first."""

from math import gcd, isqrt

from ._scalar import Q

_DIVISOR_LIMIT = 10**10


def trim(p):
    p = list(p)
    while p and p[0] == 0:
        p.pop(0)
    return p


def evaluate(p, x):
    acc = Q(0)
    for c in p:
        acc = acc * x + c
    return acc


def derivative(p):
    d = len(p) - 1
    return trim([c * (d - i) for i, c in enumerate(p[:-1])])


def remainder(a, b):
    a, b = trim(a), trim(b)
    while len(a) >= len(b) and a:
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a = trim(a)
    return a


def quotient(a, b):
    a, b = trim(a), trim(b)
    q = [Q(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        f = a[0] / b[0]
        q[len(q) - (len(a) - len(b)) - 1] = f
        for i in range(len(b)):
            a[i] -= f * b[i]
        a.pop(0)
    return trim(q)


def gcd_poly(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, remainder(a, b)
    return [c / a[0] for c in a]


def squarefree(p):
    """p divided by gcd(p, p'): same roots, all simple."""
    p = trim(p)
    if len(p) <= 1:
        return p
    return quotient(p, gcd_poly(p, derivative(p)))


def interpolate(xs, ys):
    """Coefficients of the polynomial through (xs, ys), by Newton differences."""
    n = len(xs)
    coef = [Q(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = [coef[-1]]
    for k in range(n - 2, -1, -1):
        # p = p * (x - xs[k]) + coef[k]
        p = [a - b for a, b in zip(p + [Q(0)], [Q(0)] + [c * xs[k] for c in p])]
        p[-1] += coef[k]
    return trim(p)


def _sign_changes(values):
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def real_root_count(p):
    """Number of distinct real roots (Sturm)."""
    p = trim(p)
    if len(p) <= 1:
        return 0
    seq = [p, derivative(p)]
    while True:
        r = remainder(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    at_plus = [q[0] for q in seq]
    at_minus = [q[0] * (-1 if (len(q) - 1) % 2 else 1) for q in seq]
    return _sign_changes(at_minus) - _sign_changes(at_plus)


def _divisors(m):
    m = abs(m)
    small = [d for d in range(1, isqrt(m) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))


def rational_roots(p):
    """Rational roots found by the rational root theorem (empty if coefficients are huge)."""
    p = trim(p)
    roots = []
    while len(p) > 1 and p[-1] == 0:
        roots.append(Q(0))
        p = p[:-1]
    if len(p) <= 1:
        return roots
    den = 1
    for c in p:
        den = den * Q(c).denominator // gcd(den, Q(c).denominator)
    ints = [int(c * den) for c in p]
    if abs(ints[0]) > _DIVISOR_LIMIT or abs(ints[-1]) > _DIVISOR_LIMIT:
        return roots
    for num in _divisors(ints[-1]):
        for d in _divisors(ints[0]):
            for cand in (Q(num, d), Q(-num, d)):
                if cand not in roots and evaluate(p, cand) == 0:
                    roots.append(cand)
    return roots
