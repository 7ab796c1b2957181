"""Jacobi elliptic functions and the complete elliptic integral, dependency-free.

Both are computed through the arithmetic-geometric mean: K(k) from the AGM
limit (DLMF 19.8.5) and sn/cn/dn by the descending Landen/Gauss transformation
(DLMF 22.20(ii)).  The AGM route keeps uniform accuracy over the whole modulus
range, including k -> 1 where series expansions stall.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DomainError


class EllipticTriple(NamedTuple):
    sn: float
    cn: float
    dn: float


_MAX_AGM_ITER = 64


def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind, modulus convention
    K(k) = integral_0^{pi/2} dtheta / sqrt(1 - k^2 sin^2 theta)."""
    if not (0.0 <= k < 1.0):
        raise DomainError("complete_K requires 0 <= k < 1")
    a, b = 1.0, math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(_MAX_AGM_ITER):
        if abs(a - b) <= 1e-17 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def jacobi(u: float, k: float) -> EllipticTriple:
    """Jacobi sn, cn, dn of argument u and modulus k in [0, 1].

    Callers that need dn(., 1/k) for k > 1 must pass the reciprocal modulus
    themselves.  Arguments are reduced modulo the period 4K(k) before the
    Landen recursion, so accuracy is uniform in |u|.
    """
    if not math.isfinite(u):
        raise DomainError("argument u must be finite")
    if not (0.0 <= k <= 1.0):
        raise DomainError("jacobi requires modulus k in [0, 1]")
    if k == 0.0:
        return EllipticTriple(math.sin(u), math.cos(u), 1.0)
    if k == 1.0:
        sech = 1.0 / math.cosh(u)
        return EllipticTriple(math.tanh(u), sech, sech)

    big_k = complete_K(k)
    u = math.fmod(u, 4.0 * big_k)

    # descending AGM sequence a_n, b_n, c_n
    a = [1.0]
    b = math.sqrt((1.0 - k) * (1.0 + k))
    c = [k]
    while abs(c[-1]) > 1e-17 * a[-1] and len(a) < _MAX_AGM_ITER:
        a_next = 0.5 * (a[-1] + b)
        b_next = math.sqrt(a[-1] * b)
        c.append(0.5 * (a[-1] - b))
        a.append(a_next)
        b = b_next
    n = len(a) - 1

    if n == 0:
        sn, cn = math.sin(u), math.cos(u)
        return EllipticTriple(sn, cn, math.sqrt(1.0 - (k * sn) ** 2))

    # backward phi recursion: phi_{n-1} = (phi_n + asin(c_n/a_n sin phi_n)) / 2
    phi = (2.0**n) * a[n] * u
    for i in range(n, 0, -1):
        s = math.sin(phi)
        arg = c[i] / a[i] * s
        arg = 1.0 if arg > 1.0 else (-1.0 if arg < -1.0 else arg)
        phi = 0.5 * (phi + math.asin(arg))
    sn = math.sin(phi)
    cn = math.cos(phi)
    # dn through the modulus identity; the DLMF cos-ratio form degrades at
    # quarter periods.  dn >= k' > 0 for k < 1, so the square root is safe.
    dn = math.sqrt(max(1.0 - (k * sn) * (k * sn), 0.0))
    return EllipticTriple(sn, cn, dn)
