"""Pure-numpy convolution kernels (fallback lane, no JIT).

Numerically identical to the numba backend: int64 arrays, modulus m < 2**31.
Schoolbook convolution splits one operand into 16-bit limbs so the partial
sums of np.convolve stay below 2**63; the NTT is a stage-vectorized
Cooley-Tukey with cached bit-reversal permutations and twiddle tables.
"""

import numpy as np

P1 = 754974721
P2 = 167772161
P3 = 469762049
G1, G2, G3 = 11, 3, 3

P1_MOD_P3 = P1 % P3
INV_P1_MOD_P2 = pow(P1, -1, P2)
INV_P1P2_MOD_P3 = pow(P1 * P2, -1, P3)

_CHUNK = 1 << 15

_rev_cache = {}
_tw_cache = {}


def conv_schoolbook(a, b, m):
    la = a.shape[0]
    lb = b.shape[0]
    if la == 0 or lb == 0:
        return np.zeros(0, np.int64)
    if lb > la:
        a, b = b, a
        la, lb = lb, la
    out = np.zeros(la + lb - 1, np.int64)
    bl = b & 0xFFFF
    bh = b >> 16
    for s in range(0, la, _CHUNK):
        seg = a[s:s + _CHUNK]
        lo = np.convolve(seg, bl)
        hi = np.convolve(seg, bh)
        part = ((hi % m) * 65536 + lo) % m
        sl = out[s:s + part.shape[0]]
        sl += part
        sl %= m
    return out


def _bitrev_perm(n):
    perm = _rev_cache.get(n)
    if perm is None:
        perm = np.zeros(n, np.int64)
        for i in range(1, n):
            perm[i] = perm[i >> 1] >> 1
            if i & 1:
                perm[i] |= n >> 1
        _rev_cache[n] = perm
    return perm


def _twiddles(p, length, invert):
    key = (p, length, invert)
    ws = _tw_cache.get(key)
    if ws is None:
        g = {P1: G1, P2: G2, P3: G3}[p]
        e = (p - 1) // length
        if invert:
            e = p - 1 - e
        w = pow(g, e, p)
        half = length >> 1
        ws = np.ones(half, np.int64)
        cur = w
        filled = 1
        while filled < half:
            take = min(filled, half - filled)
            ws[filled:filled + take] = ws[:take] * cur % p
            cur = cur * cur % p
            filled *= 2
        _tw_cache[key] = ws
    return ws


def _ntt(a, p, invert):
    n = a.shape[0]
    a = a[_bitrev_perm(n)]
    length = 2
    while length <= n:
        half = length >> 1
        ws = _twiddles(p, length, invert)
        blocks = a.reshape(-1, length)
        u = blocks[:, :half].copy()
        v = blocks[:, half:] * ws % p
        blocks[:, :half] = (u + v) % p
        blocks[:, half:] = (u - v) % p
        length <<= 1
    if invert:
        a = a * pow(n, p - 2, p) % p
    return a


def _conv_prime(a, b, p, size, lout):
    fa = np.zeros(size, np.int64)
    fb = np.zeros(size, np.int64)
    fa[:a.shape[0]] = a % p
    fb[:b.shape[0]] = b % p
    fa = _ntt(fa, p, False)
    fb = _ntt(fb, p, False)
    fa = fa * fb % p
    fa = _ntt(fa, p, True)
    return fa[:lout]


def ntt_conv(a, b, m):
    la = a.shape[0]
    lb = b.shape[0]
    if la == 0 or lb == 0:
        return np.zeros(0, np.int64)
    lout = la + lb - 1
    size = 1
    while size < lout:
        size <<= 1
    r1 = _conv_prime(a, b, P1, size, lout)
    r2 = _conv_prime(a, b, P2, size, lout)
    r3 = _conv_prime(a, b, P3, size, lout)
    p1m = P1 % m
    p12m = p1m * (P2 % m) % m
    x2 = (r2 - r1) % P2 * INV_P1_MOD_P2 % P2
    t = ((r3 - r1) % P3 - P1_MOD_P3 * x2) % P3
    x3 = t * INV_P1P2_MOD_P3 % P3
    return (r1 % m + p1m * x2 % m + p12m * x3 % m) % m


def warmup():
    a = np.array([1, 2, 3], np.int64)
    conv_schoolbook(a, a, 97)
    ntt_conv(a, a, 97)
