"""Jacobi elliptic functions and the complete elliptic integral of the first kind.

Everything is evaluated with the arithmetic-geometric mean (AGM) and the
descending Landen transformation, which keeps full accuracy over the whole
modulus range needed by the finite sine-Gordon stability windows.

The real modulus k (0 <= k <= 1) is used throughout, i.e. the convention in
which sn(u, 0) = sin(u) and dn^2 + k^2 sn^2 = 1.
"""

from __future__ import annotations

import math

from .errors import DivergentIntegral, DomainError

# Absolute AGM convergence tolerance; downstream root finding on K(k)
# needs about 1e-10 in k.
AGM_TOL = 1e-14

_MAX_AGM_ITER = 64


def _check_modulus(k: float) -> None:
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"elliptic modulus must lie in [0, 1], got {k}")


def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind, K(k).

    Strictly increasing in k with K(0) = pi/2; diverges as k -> 1.
    """
    if k == 1.0:
        raise DivergentIntegral("K(k) diverges at k = 1")
    if not 0.0 <= k < 1.0:
        raise DomainError(f"complete_K requires 0 <= k < 1, got {k}")
    a, b = 1.0, math.sqrt(1.0 - k * k)
    for _ in range(_MAX_AGM_ITER):
        if abs(a - b) <= AGM_TOL:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def jacobi_am(u: float, k: float) -> float:
    """Jacobi amplitude am(u, k).

    am(u, 0) = u, am(K(k), k) = pi/2, and am is odd in u.
    """
    _check_modulus(k)
    if not math.isfinite(u):
        raise DomainError(f"jacobi_am requires finite u, got {u}")
    if k == 0.0:
        return u
    if k == 1.0:
        # Gudermannian limit: am(u, 1) = 2 atan(e^u) - pi/2 = asin(tanh u).
        return 2.0 * math.atan(math.tanh(0.5 * u))

    # Ascending AGM scale, then descend through the Landen phases.
    a = [1.0]
    b = [math.sqrt(1.0 - k * k)]
    c = [k]
    while abs(c[-1]) > AGM_TOL and len(a) < _MAX_AGM_ITER:
        an = 0.5 * (a[-1] + b[-1])
        bn = math.sqrt(a[-1] * b[-1])
        cn = 0.5 * (a[-1] - b[-1])
        a.append(an)
        b.append(bn)
        c.append(cn)
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * u
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(max(-1.0, min(1.0, c[i] / a[i] * math.sin(phi)))))
    return phi


def jacobi_sn_cn_dn(u: float, k: float) -> tuple[float, float, float]:
    """sn, cn, dn at (u, k): sn = sin(am), cn = cos(am), dn = sqrt(1 - k^2 sn^2)."""
    _check_modulus(k)
    if not math.isfinite(u):
        raise DomainError(f"jacobi_sn_cn_dn requires finite u, got {u}")
    if k == 1.0:
        sech = 1.0 / math.cosh(u)
        return math.tanh(u), sech, sech
    phi = jacobi_am(u, k)
    sn = math.sin(phi)
    cn = math.cos(phi)
    dn = math.sqrt(max(0.0, 1.0 - (k * sn) ** 2))
    return sn, cn, dn
