"""Dense univariate polynomials as coefficient lists, lowest degree first.

Coefficients may be any exact field elements (Fraction or ExtElem).  These
helpers back the extension-field arithmetic and the content/GCD steps of the
bivariate GCD.
"""
from __future__ import annotations

from fractions import Fraction


def _inv(c):
    # plain ints would divide to a float
    return Fraction(1, c) if isinstance(c, int) else 1 / c


def strip(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def add(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return strip(out)


def sub(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = out[i] - c
    return strip(out)


def mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return strip(out)


def scale(a, c):
    return strip([v * c for v in a]) if c else []


def divmod_(a, b):
    """Euclidean division over a field."""
    b = strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(strip(a))
    if len(r) < len(b):
        return [], r
    inv = _inv(b[-1])
    q = [0] * (len(r) - len(b) + 1)
    db = len(b) - 1
    while len(r) >= len(b):
        shift = len(r) - 1 - db
        c = r[-1] * inv
        q[shift] = c
        for i, cb in enumerate(b):
            r[shift + i] = r[shift + i] - c * cb
        r.pop()
        r = strip(r)
    return strip(q), r


def rem(a, b):
    return divmod_(a, b)[1]


def exact_div(a, b):
    q, r = divmod_(a, b)
    if r:
        raise ArithmeticError("inexact univariate division")
    return q


def monic(a):
    a = strip(a)
    if not a:
        return a
    inv = _inv(a[-1])
    return [c * inv for c in a]


def gcd(a, b):
    """Monic GCD; gcd(0, 0) = 0."""
    a, b = strip(a), strip(b)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = strip(a), strip(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return [], [], []
    inv = _inv(r0[-1])
    return [c * inv for c in r0], [c * inv for c in s0], [c * inv for c in t0]


def deriv(a):
    return strip([a[i] * i for i in range(1, len(a))])


def evaluate(a, v):
    acc = 0
    for c in reversed(a):
        acc = acc * v + c
    return acc


def to_text(p, var: str) -> str:
    p = strip(p)
    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and c == 1:
            term = mono
        elif mono and c == -1:
            term = "-" + mono
        elif mono:
            term = f"{c}*{mono}"
        else:
            term = str(c)
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out
