"""Modular-convolution kernels with two interchangeable lanes.

The active lane is chosen once at import time:

* ``PADICISO_KERNELS=numpy``  forces the pure-numpy fallback,
* ``PADICISO_KERNELS=numba``  forces the jitted lane (ImportError if numba
  is missing),
* unset: numba when available, numpy otherwise.

Both lanes are exact and bit-identical; ``padiciso.bench`` compares their
throughput.  Dispatch between schoolbook, Karatsuba and NTT multiplication
happens here so the two lanes only need to supply the leaf kernels.
"""

import os

import numpy as np

#: moduli must stay below this so int64 products cannot overflow
MAX_MODULUS = (1 << 31) - 1

#: schoolbook below this operand length (Karatsuba/NTT above)
SCHOOLBOOK_MAX = 32
#: Karatsuba up to this output length, NTT beyond
KARATSUBA_MAX = 512

_requested = os.environ.get("PADICISO_KERNELS", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(
        f"PADICISO_KERNELS must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numpy":
    from . import _numpy_backend as _backend
    LANE = "numpy"
else:
    try:
        from . import _numba_backend as _backend
        LANE = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import _numpy_backend as _backend
        LANE = "numpy"

_EMPTY = np.zeros(0, np.int64)


def active_lane():
    return LANE


def get_backend(name):
    """Return a specific lane module ('numba' or 'numpy'), bypassing the
    env-flag selection; used by tests and the lane benchmark."""
    if name == "numpy":
        from . import _numpy_backend
        return _numpy_backend
    if name == "numba":
        from . import _numba_backend
        return _numba_backend
    raise ValueError(f"unknown kernel lane {name!r}")


def warmup():
    _backend.warmup()


def conv_schoolbook(a, b, m):
    return _backend.conv_schoolbook(a, b, m)


def conv_ntt(a, b, m):
    return _backend.ntt_conv(a, b, m)


def conv_karatsuba(a, b, m, leaf=None):
    """Karatsuba on top of the lane's schoolbook leaf.

    Handles unequal lengths; exact for any m <= MAX_MODULUS.
    """
    if leaf is None:
        leaf = _backend.conv_schoolbook
    return _kara(np.ascontiguousarray(a), np.ascontiguousarray(b), m, leaf)


def _kara(a, b, m, leaf):
    la = a.shape[0]
    lb = b.shape[0]
    if la == 0 or lb == 0:
        return _EMPTY
    if min(la, lb) <= SCHOOLBOOK_MAX:
        return leaf(a, b, m)
    h = (max(la, lb) + 1) >> 1
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _kara(a0, b0, m, leaf)
    z2 = _kara(a1, b1, m, leaf)
    sa = _padded_add(a0, a1, m)
    sb = _padded_add(b0, b1, m)
    z1 = _kara(sa, sb, m, leaf)
    out = np.zeros(la + lb - 1, np.int64)
    out[:z0.shape[0]] = z0
    if z2.shape[0]:
        sl = out[2 * h:2 * h + z2.shape[0]]
        sl += z2
        sl %= m
    mid = z1.copy()
    _sub_into(mid, 0, z0, m)
    _sub_into(mid, 0, z2, m)
    # (a0+a1)(b0+b1) - a0b0 - a1b1 = a0b1 + a1b0 fits in out; the formal
    # tail of z1 beyond that cancels exactly
    fit = out.shape[0] - h
    if mid.shape[0] > fit:
        mid = mid[:fit]
    sl = out[h:h + mid.shape[0]]
    sl += mid
    sl %= m
    return out


def _padded_add(x, y, m):
    if x.shape[0] < y.shape[0]:
        x, y = y, x
    out = x.copy()
    sl = out[:y.shape[0]]
    sl += y
    sl %= m
    return out


def _sub_into(out, off, z, m):
    if z.shape[0] == 0:
        return
    sl = out[off:off + z.shape[0]]
    sl -= z
    sl %= m


def conv_mod(a, b, m):
    """Product of two coefficient arrays mod m, dispatching on size."""
    la = a.shape[0]
    lb = b.shape[0]
    if la == 0 or lb == 0:
        return _EMPTY
    if min(la, lb) <= SCHOOLBOOK_MAX:
        return _backend.conv_schoolbook(a, b, m)
    if la + lb - 1 <= KARATSUBA_MAX:
        return _kara(a, b, m, _backend.conv_schoolbook)
    return _backend.ntt_conv(a, b, m)
