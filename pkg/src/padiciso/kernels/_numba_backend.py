"""Numba-jitted convolution kernels.

All kernels work on 1-D int64 arrays with entries reduced into [0, m) for a
modulus m < 2**31, so every intermediate product fits in int64.  The NTT path
computes the exact integer convolution via three NTT-friendly primes and
Garner recombination, then reduces mod m; it is valid for any m < 2**31 and
output lengths up to ~2**23.
"""

import numpy as np
from numba import njit

P1 = 754974721    # 45 * 2**24 + 1, primitive root 11
P2 = 167772161    # 5 * 2**25 + 1, primitive root 3
P3 = 469762049    # 7 * 2**26 + 1, primitive root 3
G1, G2, G3 = 11, 3, 3

P1_MOD_P3 = P1 % P3
INV_P1_MOD_P2 = pow(P1, -1, P2)
INV_P1P2_MOD_P3 = pow(P1 * P2, -1, P3)


@njit(cache=True)
def _pow_mod(base, exp, m):
    r = 1
    base %= m
    while exp > 0:
        if exp & 1:
            r = r * base % m
        base = base * base % m
        exp >>= 1
    return r


@njit(cache=True)
def conv_schoolbook(a, b, m):
    la = a.shape[0]
    lb = b.shape[0]
    if la == 0 or lb == 0:
        return np.zeros(0, np.int64)
    out = np.zeros(la + lb - 1, np.int64)
    for i in range(la):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(lb):
            out[i + j] = (out[i + j] + ai * b[j]) % m
    return out


@njit(cache=True)
def _ntt_inplace(a, p, g, invert):
    n = a.shape[0]
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            t = a[i]
            a[i] = a[j]
            a[j] = t
    length = 2
    while length <= n:
        if invert:
            wlen = _pow_mod(g, p - 1 - (p - 1) // length, p)
        else:
            wlen = _pow_mod(g, (p - 1) // length, p)
        half = length >> 1
        start = 0
        while start < n:
            w = 1
            for k in range(start, start + half):
                u = a[k]
                v = a[k + half] * w % p
                s = u + v
                if s >= p:
                    s -= p
                d = u - v
                if d < 0:
                    d += p
                a[k] = s
                a[k + half] = d
                w = w * wlen % p
            start += length
        length <<= 1
    if invert:
        ninv = _pow_mod(n, p - 2, p)
        for i in range(n):
            a[i] = a[i] * ninv % p


@njit(cache=True)
def _conv_prime(a, b, p, g, size, lout):
    fa = np.zeros(size, np.int64)
    fb = np.zeros(size, np.int64)
    for i in range(a.shape[0]):
        fa[i] = a[i] % p
    for i in range(b.shape[0]):
        fb[i] = b[i] % p
    _ntt_inplace(fa, p, g, False)
    _ntt_inplace(fb, p, g, False)
    for i in range(size):
        fa[i] = fa[i] * fb[i] % p
    _ntt_inplace(fa, p, g, True)
    return fa[:lout]


@njit(cache=True)
def ntt_conv(a, b, m):
    la = a.shape[0]
    lb = b.shape[0]
    if la == 0 or lb == 0:
        return np.zeros(0, np.int64)
    lout = la + lb - 1
    size = 1
    while size < lout:
        size <<= 1
    r1 = _conv_prime(a, b, P1, G1, size, lout)
    r2 = _conv_prime(a, b, P2, G2, size, lout)
    r3 = _conv_prime(a, b, P3, G3, size, lout)
    p1m = P1 % m
    p12m = p1m * (P2 % m) % m
    out = np.empty(lout, np.int64)
    for i in range(lout):
        x2 = (r2[i] - r1[i]) % P2 * INV_P1_MOD_P2 % P2
        t = ((r3[i] - r1[i]) % P3 - P1_MOD_P3 * x2) % P3
        x3 = t * INV_P1P2_MOD_P3 % P3
        out[i] = (r1[i] % m + p1m * x2 % m + p12m * x3 % m) % m
    return out


def warmup():
    """Trigger JIT compilation on tiny inputs (useful before timing)."""
    a = np.array([1, 2, 3], np.int64)
    conv_schoolbook(a, a, 97)
    ntt_conv(a, a, 97)
