"""The degree 5 cyclic division algebra D = (L/E, sigma, a) and its involution.

Elements are stored as gamma = sum_i u^i l_i with u on the left, where
u^5 = a, u l = sigma(l) u and hence l u^j = u^j sigma^{-j}(l).
The involution of the second kind is iota(u) = u^{-1}, iota|_L = conjugation.
"""

from fractions import Fraction

from . import exact
from .tower import DEGREE, EElem, LElem, MElem, RHO11, RHO11_BAR, RHO2, RHO2_BAR

# instance constants
P0 = 11
D_EXP = 3
E_EXP = 1
B_CONST = 10
A_CONST = RHO2 * RHO11 ** 3 / (RHO2_BAR * RHO11_BAR ** 3)
A_INV = A_CONST.inverse()
DELTA = MElem((2, 1, 0, 0, 0))  # alpha + 2, of norm 11

_A_L = A_CONST.to_l()
_AINV_L = A_INV.to_l()
_ZERO_L = LElem()


def a_coordinates():
    """(a0, a1) with a = a0 + rho a1."""
    return A_CONST.r, A_CONST.s


class AlgebraElem:
    """gamma = sum_{i<5} u^i l_i with l_i in L."""

    __slots__ = ("l",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = [_ZERO_L] * DEGREE
        coeffs = [c if isinstance(c, LElem) else _to_l(c) for c in coeffs]
        if len(coeffs) != DEGREE:
            raise ValueError("need five L coefficients")
        self.l = tuple(coeffs)

    @classmethod
    def scalar(cls, x):
        return cls([_to_l(x)] + [_ZERO_L] * (DEGREE - 1))

    @classmethod
    def u_power(cls, i, l=1):
        """u^i l, reducing i modulo 5 with u^5 = a."""
        q, r = divmod(i, DEGREE)
        l = _to_l(l) * (_A_L ** q)
        coeffs = [_ZERO_L] * DEGREE
        coeffs[r] = l
        return cls(coeffs)

    @classmethod
    def from_vector(cls, v):
        """Inverse of ``to_vector``: 50 rational coordinates, index (2i + j) * 5 + k."""
        return cls([LElem.from_coords(v[10 * i:10 * i + 10]) for i in range(DEGREE)])

    def to_vector(self):
        out = []
        for l in self.l:
            out.extend(l.coords())
        return out

    def __add__(self, o):
        o = _as_alg(o)
        return AlgebraElem([x + y for x, y in zip(self.l, o.l)])

    __radd__ = __add__

    def __sub__(self, o):
        o = _as_alg(o)
        return AlgebraElem([x - y for x, y in zip(self.l, o.l)])

    def __rsub__(self, o):
        return _as_alg(o) - self

    def __neg__(self):
        return AlgebraElem([-x for x in self.l])

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return AlgebraElem([x * o for x in self.l])
        o = _as_alg(o)
        out = [_ZERO_L] * DEGREE
        for j, m in enumerate(o.l):
            if not m:
                continue
            for i, l in enumerate(self.l):
                if not l:
                    continue
                t = l.sigma(-j) * m
                k = i + j
                if k >= DEGREE:
                    k -= DEGREE
                    t = t * _A_L
                out[k] = out[k] + t
        return AlgebraElem(out)

    def __rmul__(self, o):
        return _as_alg(o) * self

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out, base = AlgebraElem.scalar(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        try:
            o = _as_alg(o)
        except TypeError:
            return NotImplemented
        return self.l == o.l

    def __hash__(self):
        return hash(self.l)

    def __bool__(self):
        return any(bool(x) for x in self.l)

    def __repr__(self):
        return f"AlgebraElem({list(self.l)!r})"

    def is_scalar(self):
        """True if self lies in E."""
        return not any(self.l[1:]) and self.l[0].in_e()

    def iota(self):
        return iota(self)

    def eta(self):
        return eta(self)


def _to_l(x):
    if isinstance(x, LElem):
        return x
    if isinstance(x, EElem):
        return x.to_l()
    if isinstance(x, MElem):
        return LElem(x)
    return LElem(MElem(x))


def _as_alg(o):
    if isinstance(o, AlgebraElem):
        return o
    if isinstance(o, (int, Fraction, EElem, MElem, LElem)):
        return AlgebraElem.scalar(o)
    raise TypeError(f"cannot coerce {type(o).__name__} to AlgebraElem")


U = AlgebraElem.u_power(1)


def d_mul(x, y):
    return x * y


def iota(x):
    """Involution: iota(sum u^i l_i) = conj(l_0) + sum_j u^j a^{-1} sigma^{-j}(conj(l_{5-j}))."""
    out = [x.l[0].conj()]
    for j in range(1, DEGREE):
        l = x.l[DEGREE - j]
        out.append(_AINV_L * l.conj().sigma(-j) if l else _ZERO_L)
    return AlgebraElem(out)


def eta(x):
    """5x5 matrix over L representing x; iota becomes conjugate transpose."""
    out = exact.zeros(DEGREE, DEGREE, _ZERO_L)
    for r in range(DEGREE):
        for c in range(DEGREE):
            i = (c - r) % DEGREE
            l = x.l[i]
            if not l:
                continue
            e = l.sigma(c)
            out[r][c] = e * _A_L if c < r else e
    return out


def eta_u():
    return eta(U)


def conj_transpose(m):
    n = len(m)
    return [[m[c][r].conj() for c in range(n)] for r in range(n)]


def l_mat_mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), _ZERO_L) for j in range(n)]
            for i in range(n)]


def trd(x):
    """Reduced trace, an element of E."""
    return x.l[0].trace_LE()


def trd_square(x):
    return trd(x * x)


def charpoly(x):
    """Reduced characteristic polynomial over E, coefficients from the leading term down."""
    m = eta(x)
    return [c.to_e() for c in exact.charpoly(m, _ZERO_L, LElem(1))]


def nrd(x):
    cp = charpoly(x)
    return -cp[-1] if DEGREE % 2 else cp[-1]


def verify_norm_equation(x, target):
    """True if iota(x) x equals the scalar ``target``."""
    return iota(x) * x == AlgebraElem.scalar(target)


def is_iota_fixed(x):
    return iota(x) == x

