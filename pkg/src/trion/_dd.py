"""Vectorised double-double arithmetic on numpy arrays.

A ``DD`` holds an unevaluated sum ``hi + lo`` with ``|lo| <= ulp(hi)/2``,
giving roughly 32 significant digits.  Only the operations needed by the
matrix-element kernels and the similarity transforms are provided.
The algorithms are the classic error-free transformations of Dekker and
Knuth (see Hida, Li & Bailey, "Library for double-double and quad-double
arithmetic").
"""

from __future__ import annotations

import mpmath
import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


class DD:
    """Real double-double array."""

    __slots__ = ("hi", "lo")
    __array_priority__ = 100.0

    def __init__(self, hi, lo=None):
        self.hi = np.asarray(hi, dtype=np.float64)
        self.lo = np.zeros_like(self.hi) if lo is None else np.asarray(lo, dtype=np.float64)

    @staticmethod
    def _coerce(x) -> "DD":
        if isinstance(x, DD):
            return x
        return DD(x)

    def __add__(self, other):
        if isinstance(other, DDComplex):
            return other + self
        o = DD._coerce(other)
        s, e = _two_sum(self.hi, o.hi)
        t, f = _two_sum(self.lo, o.lo)
        e = e + t
        s, e = _quick_two_sum(s, e)
        e = e + f
        return DD(*_quick_two_sum(s, e))

    __radd__ = __add__

    def __neg__(self):
        return DD(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DDComplex):
            return other * self
        o = DD._coerce(other)
        p, e = _two_prod(self.hi, o.hi)
        e = e + (self.hi * o.lo + self.lo * o.hi)
        return DD(*_quick_two_sum(p, e))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, DDComplex):
            return DDComplex(self, DD(np.zeros_like(self.hi))) / other
        o = DD._coerce(other)
        q1 = self.hi / o.hi
        r = self - o * q1
        q2 = r.hi / o.hi
        r = r - o * q2
        q3 = r.hi / o.hi
        q1, q2 = _quick_two_sum(q1, q2)
        return DD(q1, q2) + q3

    def __rtruediv__(self, other):
        return DD._coerce(other) / self

    def __getitem__(self, idx):
        return DD(self.hi[idx], self.lo[idx])

    def __setitem__(self, idx, value):
        v = DD._coerce(value)
        self.hi[idx] = v.hi
        self.lo[idx] = v.lo

    @property
    def shape(self):
        return self.hi.shape

    @property
    def T(self):
        return DD(self.hi.T, self.lo.T)

    def copy(self):
        return DD(self.hi.copy(), self.lo.copy())

    def to_float(self) -> np.ndarray:
        return self.hi + self.lo

    def __repr__(self):
        return f"DD(shape={self.hi.shape})"


class DDComplex:
    """Complex double-double array stored as two ``DD`` parts."""

    __slots__ = ("real", "imag")
    __array_priority__ = 100.0

    def __init__(self, real: DD, imag: DD):
        self.real = real
        self.imag = imag

    @staticmethod
    def from_complex(z) -> "DDComplex":
        z = np.asarray(z, dtype=np.complex128)
        return DDComplex(DD(z.real.copy()), DD(z.imag.copy()))

    @staticmethod
    def _coerce(x) -> "DDComplex":
        if isinstance(x, DDComplex):
            return x
        if isinstance(x, DD):
            return DDComplex(x, DD(np.zeros_like(x.hi)))
        if np.iscomplexobj(x):
            return DDComplex.from_complex(x)
        return DDComplex(DD(x), DD(np.zeros_like(np.asarray(x, dtype=np.float64))))

    def __add__(self, other):
        o = DDComplex._coerce(other)
        return DDComplex(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __neg__(self):
        return DDComplex(-self.real, -self.imag)

    def __sub__(self, other):
        return self + (-DDComplex._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, DD)):
            return DDComplex(self.real * other, self.imag * other)
        o = DDComplex._coerce(other)
        return DDComplex(
            self.real * o.real - self.imag * o.imag,
            self.real * o.imag + self.imag * o.real,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, DD)):
            return DDComplex(self.real / other, self.imag / other)
        o = DDComplex._coerce(other)
        den = o.real * o.real + o.imag * o.imag
        num = self * o.conj()
        return DDComplex(num.real / den, num.imag / den)

    def __rtruediv__(self, other):
        return DDComplex._coerce(other) / self

    def conj(self):
        return DDComplex(self.real, -self.imag)

    def __getitem__(self, idx):
        return DDComplex(self.real[idx], self.imag[idx])

    @property
    def shape(self):
        return self.real.shape

    def to_complex(self) -> np.ndarray:
        return self.real.to_float() + 1j * self.imag.to_float()


def dd_matmul(a: DD, b: DD) -> DD:
    """Matrix product in double-double, accumulated over the inner index."""
    n = a.shape[1]
    if b.shape[0] != n:
        raise ValueError("inner dimensions differ")
    acc = DD(np.zeros((a.shape[0], b.shape[1])))
    for k in range(n):
        acc = acc + a[:, k : k + 1] * b[k : k + 1, :]
    return acc


def to_mp_matrix(a: DD) -> mpmath.matrix:
    """Exact conversion to an mpmath matrix (requires mp.prec >= 107)."""
    rows, cols = a.shape
    m = mpmath.matrix(rows, cols)
    for i in range(rows):
        for j in range(cols):
            m[i, j] = mpmath.mpf(float(a.hi[i, j])) + mpmath.mpf(float(a.lo[i, j]))
    return m


def from_mp_matrix(m: mpmath.matrix) -> DD:
    """Round an mpmath matrix to the nearest double-double."""
    rows, cols = m.rows, m.cols
    hi = np.empty((rows, cols))
    lo = np.empty((rows, cols))
    for i in range(rows):
        for j in range(cols):
            x = m[i, j]
            h = float(x)
            hi[i, j] = h
            lo[i, j] = float(x - h)
    return DD(hi, lo)


# pi and pi**2 to double-double accuracy
PI = DD(np.float64(3.141592653589793), np.float64(1.2246467991473532e-16))
PI2 = PI * PI
