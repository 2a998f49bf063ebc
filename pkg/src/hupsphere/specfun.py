"""Special functions: Bessel J of integer and half-integer order, Gegenbauer
polynomials and their derivatives, associated Legendre functions, Bessel zeros.

All routines are scalar-order and vectorised over the argument.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "BesselOrder",
    "bessel_j",
    "bessel_j_zero",
    "gegenbauer",
    "gegenbauer_deriv",
    "gegenbauer_normalized",
    "assoc_legendre",
    "legendre_norm_sq",
]


@dataclass(frozen=True)
class BesselOrder:
    """Order of a Bessel function stored as ``2*nu`` so half-integers are exact."""

    twice_nu: int

    def __post_init__(self):
        if not isinstance(self.twice_nu, (int, np.integer)) or self.twice_nu < 0:
            raise ValueError(f"twice_nu must be a non-negative integer, got {self.twice_nu!r}")

    @classmethod
    def from_value(cls, nu) -> "BesselOrder":
        if isinstance(nu, BesselOrder):
            return nu
        twice = 2.0 * float(nu)
        k = int(round(twice))
        if k < 0 or abs(twice - k) > 1e-12:
            raise ValueError(f"order {nu!r} is not a non-negative integer or half-integer")
        return cls(k)

    @classmethod
    def for_dimension(cls, j: int, n: int) -> "BesselOrder":
        """Order ``j + (n-2)/2`` used by plane-wave expansions on S^{n-1}."""
        if j < 0 or n < 2:
            raise ValueError("need j >= 0 and n >= 2")
        return cls(2 * j + n - 2)

    @property
    def value(self) -> float:
        return self.twice_nu / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice_nu % 2 == 0


def _series(nu: float, x: np.ndarray) -> np.ndarray:
    half = 0.5 * x
    term = np.exp(nu * np.log(half) - math.lgamma(nu + 1.0))
    total = term.copy()
    q = -half * half
    for k in range(1, 300):
        term = term * q / (k * (k + nu))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _miller(order: BesselOrder, x: np.ndarray) -> np.ndarray:
    # Backward recurrence over orders nu0 + k, nu0 in {0, 1/2}.
    nu0 = 0.0 if order.is_integer else 0.5
    m = order.twice_nu // 2
    xmax = float(np.max(x))
    top = int(max(m, xmax)) + 40 + int(3.0 * xmax ** (1.0 / 3.0) * 4)
    top += top % 2
    j_next = np.zeros_like(x)
    j_cur = np.full_like(x, 1e-30)
    target = np.zeros_like(x)
    j0 = np.zeros_like(x)
    j1 = np.zeros_like(x)
    neumann = np.zeros_like(x)
    for k in range(top, 0, -1):
        # j_cur holds order nu0+k; compute order nu0+k-1
        j_prev = (2.0 * (nu0 + k) / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        kk = k - 1
        if kk == m:
            target = j_cur.copy()
        if kk == 1:
            j1 = j_cur.copy()
        if order.is_integer and kk % 2 == 0:
            neumann += (2.0 if kk > 0 else 1.0) * j_cur
        big = np.abs(j_cur) > 1e200
        if np.any(big):
            s = np.where(big, 1e-200, 1.0)
            j_cur, j_next, target, j1, neumann = (
                j_cur * s, j_next * s, target * s, j1 * s, neumann * s)
    j0 = j_cur
    if m == 0:
        target = j0
    if order.is_integer:
        return target / neumann
    amp = np.sqrt(2.0 / (np.pi * x))
    half = amp * np.sin(x)
    three_half = amp * (np.sin(x) / x - np.cos(x))
    use_half = np.abs(half) >= np.abs(three_half)
    scale = np.where(use_half, half / np.where(use_half, j0, 1.0),
                     three_half / np.where(use_half, 1.0, j1))
    return target * scale


def bessel_j(nu, x):
    """Bessel function of the first kind ``J_nu(x)`` for ``x > 0``.

    ``nu`` is a :class:`BesselOrder` or a non-negative integer/half-integer.
    Uses the power series where it has no cancellation and Miller's backward
    recurrence elsewhere.
    """
    order = BesselOrder.from_value(nu)
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if np.any(~(xa > 0)):
        raise ValueError("bessel_j requires x > 0")
    nu_val = order.value
    out = np.empty_like(xa)
    small = (0.5 * xa) ** 2 <= nu_val + 1.0
    if np.any(small):
        out[small] = _series(nu_val, xa[small])
    if np.any(~small):
        out[~small] = _miller(order, xa[~small])
    return float(out[0]) if scalar else out


@lru_cache(maxsize=None)
def _zeros(twice_nu: int, count: int) -> tuple:
    order = BesselOrder(twice_nu)
    nu = order.value
    found = []
    a = max(nu, 0.5)
    fa = bessel_j(order, a)
    step = 1.0
    while len(found) < count:
        b = a + step
        fb = bessel_j(order, b)
        if fa == 0.0:
            found.append(a)
        elif fa * fb < 0.0:
            lo, hi, flo = a, b, fa
            while hi - lo > 1e-14 * max(1.0, hi):
                mid = 0.5 * (lo + hi)
                fm = bessel_j(order, mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if flo * fm < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            found.append(0.5 * (lo + hi))
        a, fa = b, fb
    return tuple(found)


def bessel_j_zero(nu, k: int) -> float:
    """k-th positive zero of ``J_nu`` (k >= 1), by bracketing and bisection."""
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    order = BesselOrder.from_value(nu)
    return _zeros(order.twice_nu, int(k))[int(k) - 1]


def gegenbauer(l: int, lam: float, t):
    """Gegenbauer polynomial ``G_l^lam(t)`` by the three-term recurrence."""
    if l < 0:
        raise ValueError("degree must be non-negative")
    if not lam > 0:
        raise ValueError("Gegenbauer order must be positive")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if l == 0:
        return prev if t.ndim else float(prev)
    cur = 2.0 * lam * t
    for k in range(2, l + 1):
        prev, cur = cur, (2.0 * t * (k + lam - 1.0) * cur - (k + 2.0 * lam - 2.0) * prev) / k
    return cur if t.ndim else float(cur)


def gegenbauer_deriv(m: int, l: int, lam: float, t):
    """m-th derivative of ``G_l^lam`` via ``D^m G_l^lam = 2^m (lam)_m G_{l-m}^{lam+m}``."""
    if m < 0:
        raise ValueError("derivative order must be non-negative")
    if l < 0:
        raise ValueError("degree must be non-negative")
    if not lam > 0:
        raise ValueError("Gegenbauer order must be positive")
    t = np.asarray(t, dtype=float)
    if m > l:
        z = np.zeros_like(t)
        return z if t.ndim else 0.0
    factor = 2.0 ** m * math.exp(math.lgamma(lam + m) - math.lgamma(lam))
    return factor * gegenbauer(l - m, lam + m, t)


def gegenbauer_normalized(l: int, n: int, t):
    """Zonal profile ``G_l^{(n-2)/2}(t) / G_l^{(n-2)/2}(1)`` on S^{n-1}.

    For n = 2 this is the Chebyshev limit ``T_l(t)``.
    """
    t = np.asarray(t, dtype=float)
    if n < 2:
        raise ValueError("dimension must be >= 2")
    if n == 2:
        out = np.cos(l * np.arccos(np.clip(t, -1.0, 1.0)))
        return out if t.ndim else float(out)
    lam = (n - 2) / 2.0
    return gegenbauer(l, lam, t) / gegenbauer(l, lam, 1.0)


def assoc_legendre(k: int, l: int, t):
    """Associated Legendre function ``P_k^l(t)`` with the Condon-Shortley phase.

    Negative orders follow ``P_k^{-l} = (-1)^l (k-l)!/(k+l)! P_k^l``.
    """
    if k < 0 or abs(l) > k:
        raise ValueError(f"need |l| <= k, got k={k}, l={l}")
    t = np.asarray(t, dtype=float)
    m = abs(l)
    s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    # P_m^m = (-1)^m (2m-1)!! s^m
    pmm = np.ones_like(t)
    for i in range(1, m + 1):
        pmm = -pmm * (2 * i - 1) * s
    if k == m:
        val = pmm
    else:
        p_prev, p_cur = pmm, t * (2 * m + 1) * pmm
        for j in range(m + 2, k + 1):
            p_prev, p_cur = p_cur, ((2 * j - 1) * t * p_cur - (j + m - 1) * p_prev) / (j - m)
        val = p_cur
    if l < 0:
        val = (-1) ** m * math.exp(math.lgamma(k - m + 1) - math.lgamma(k + m + 1)) * val
    return val if t.ndim else float(val)


def legendre_norm_sq(k: int, l: int) -> float:
    """Mean of ``|P_k^l(cos theta)|^2`` over S^2 under the probability measure."""
    m = abs(l)
    if l >= 0:
        return math.exp(math.lgamma(k + m + 1) - math.lgamma(k - m + 1)) / (2 * k + 1)
    return math.exp(math.lgamma(k - m + 1) - math.lgamma(k + m + 1)) / (2 * k + 1)
