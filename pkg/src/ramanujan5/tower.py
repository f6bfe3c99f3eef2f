"""Exact arithmetic in the tower Q < E, M < L = M E.

E = Q(sqrt(-7)) with integral basis 1, rho where rho = (1 + sqrt(-7))/2 and
rho^2 = rho - 2.  M is the real cyclic quintic field cut out by
x^5 - x^4 - 4x^3 + 3x^2 + 3x - 1 with power basis in a root alpha, and
L = M + rho M.  The generator sigma of Gal(M/Q) acts by
alpha -> -alpha^4 + 4 alpha^2 - 2 and extends to L fixing rho.
"""

from fractions import Fraction
from functools import lru_cache

from . import exact

# coefficients c0..c5 of the minimal polynomial of alpha
MIN_POLY = (-1, 3, 3, -4, -1, 1)
SIGMA_ALPHA = (-2, 0, 4, 0, -1)
DEGREE = 5

_F0 = Fraction(0)
_F1 = Fraction(1)


def _poly_reduce(coeffs):
    """Reduce a coefficient list (low to high) modulo the minimal polynomial."""
    c = list(coeffs)
    for top in range(len(c) - 1, DEGREE - 1, -1):
        t = c[top]
        if t:
            for i in range(DEGREE):
                c[top - DEGREE + i] -= t * MIN_POLY[i]
        c[top] = 0
    c = c[:DEGREE]
    while len(c) < DEGREE:
        c.append(0)
    return c


def _mul_coeffs(a, b):
    prod = [_F0] * 9
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    return _poly_reduce(prod)


class MElem:
    """Element of M in the power basis 1, alpha, ..., alpha^4."""

    __slots__ = ("c",)

    def __init__(self, coeffs=(0, 0, 0, 0, 0)):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs, 0, 0, 0, 0)
        if len(coeffs) != DEGREE:
            raise ValueError("MElem needs five coordinates")
        self.c = tuple(Fraction(x) for x in coeffs)

    @classmethod
    def alpha(cls, k=1):
        return cls(_poly_reduce([0] * k + [1]))

    def __add__(self, o):
        o = _as_m(o)
        if o is NotImplemented:
            return o
        return MElem(tuple(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, o):
        o = _as_m(o)
        if o is NotImplemented:
            return o
        return MElem(tuple(x - y for x, y in zip(self.c, o.c)))

    def __rsub__(self, o):
        return _as_m(o) - self

    def __neg__(self):
        return MElem(tuple(-x for x in self.c))

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return MElem(tuple(x * o for x in self.c))
        if not isinstance(o, MElem):
            return NotImplemented
        return MElem(_mul_coeffs(self.c, o.c))

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            return MElem(tuple(x / o for x in self.c))
        return self * _as_m(o).inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = MElem(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        o = _as_m(o)
        return o is not NotImplemented and self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return f"MElem({[str(x) for x in self.c]})"

    def mul_matrix(self):
        """Matrix of multiplication by self on column coordinate vectors."""
        cols = [(self * MElem.alpha(j)).c for j in range(DEGREE)]
        return [[cols[j][i] for j in range(DEGREE)] for i in range(DEGREE)]

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in M")
        x = exact.rat_solve(self.mul_matrix(), [_F1, _F0, _F0, _F0, _F0])
        return MElem(x)

    def sigma(self, k=1):
        return MElem(exact.mat_vec(_sigma_matrix(k % DEGREE), self.c))

    def trace(self):
        return sum(self.mul_matrix()[i][i] for i in range(DEGREE))

    def norm(self):
        return exact.rat_det(self.mul_matrix())

    def charpoly(self):
        return exact.charpoly(self.mul_matrix(), _F0, _F1)

    def min_poly(self):
        """Monic minimal polynomial over Q, coefficients from the leading term down."""
        powers = [MElem(1).c]
        for k in range(1, DEGREE + 1):
            powers.append((self ** k).c)
            sol = _solve_dependence(powers[:k], powers[k])
            if sol is not None:
                return [_F1] + [-x for x in reversed(sol)]
        raise AssertionError("unreachable")

    def is_integral(self):
        return all(x.denominator == 1 for x in self.c)


def _solve_dependence(vecs, target):
    """Rational x with sum x_i vecs[i] = target, or None."""
    k = len(vecs)
    rows = [[vecs[j][i] for j in range(k)] + [target[i]] for i in range(DEGREE)]
    r = 0
    where = [-1] * k
    for c in range(k):
        piv = next((i for i in range(r, DEGREE) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(DEGREE):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        where[c] = r
        r += 1
    for i in range(r, DEGREE):
        if rows[i][k] != 0:
            return None
    return [rows[where[c]][k] if where[c] >= 0 else _F0 for c in range(k)]


def _as_m(o):
    if isinstance(o, MElem):
        return o
    if isinstance(o, (int, Fraction)):
        return MElem(o)
    return NotImplemented


@lru_cache(maxsize=None)
def _sigma_matrix(k):
    if k == 0:
        return tuple(tuple(_F1 if i == j else _F0 for j in range(DEGREE)) for i in range(DEGREE))
    s = MElem(SIGMA_ALPHA)
    cols = [(s ** j).c for j in range(DEGREE)]
    one = [[cols[j][i] for j in range(DEGREE)] for i in range(DEGREE)]
    m = one
    for _ in range(k - 1):
        m = exact.mat_mul(one, m)
    return tuple(tuple(r) for r in m)


@lru_cache(maxsize=None)
def trace_form_T():
    """Gram matrix Tr_{M/Q}(alpha^i alpha^j) of the trace form."""
    return [[int((MElem.alpha(i) * MElem.alpha(j)).trace()) for j in range(DEGREE)]
            for i in range(DEGREE)]


class EElem:
    """Element r + s rho of E."""

    __slots__ = ("r", "s")

    def __init__(self, r=0, s=0):
        self.r = Fraction(r)
        self.s = Fraction(s)

    def __add__(self, o):
        o = _as_e(o)
        if o is NotImplemented:
            return o
        return EElem(self.r + o.r, self.s + o.s)

    __radd__ = __add__

    def __sub__(self, o):
        o = _as_e(o)
        if o is NotImplemented:
            return o
        return EElem(self.r - o.r, self.s - o.s)

    def __rsub__(self, o):
        return _as_e(o) - self

    def __neg__(self):
        return EElem(-self.r, -self.s)

    def __mul__(self, o):
        o = _as_e(o)
        if o is NotImplemented:
            return o
        return EElem(self.r * o.r - 2 * self.s * o.s,
                     self.r * o.s + self.s * o.r + self.s * o.s)

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self * _as_e(o).inverse()

    def __rtruediv__(self, o):
        return _as_e(o) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = EElem(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        o = _as_e(o)
        return o is not NotImplemented and (self.r, self.s) == (o.r, o.s)

    def __hash__(self):
        return hash((self.r, self.s))

    def __bool__(self):
        return bool(self.r or self.s)

    def __repr__(self):
        return f"EElem({self.r}, {self.s})"

    def conj(self):
        return EElem(self.r + self.s, -self.s)

    def norm(self):
        return self.r * self.r + self.r * self.s + 2 * self.s * self.s

    def trace(self):
        return 2 * self.r + self.s

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in E")
        c = self.conj()
        return EElem(c.r / n, c.s / n)

    def is_integral(self):
        return self.r.denominator == 1 and self.s.denominator == 1

    def to_l(self):
        return LElem(MElem(self.r), MElem(self.s))


def _as_e(o):
    if isinstance(o, EElem):
        return o
    if isinstance(o, (int, Fraction)):
        return EElem(o)
    return NotImplemented


class LElem:
    """Element m0 + m1 rho of L with m0, m1 in M."""

    __slots__ = ("m0", "m1")

    def __init__(self, m0=0, m1=0):
        self.m0 = m0 if isinstance(m0, MElem) else MElem(m0)
        self.m1 = m1 if isinstance(m1, MElem) else MElem(m1)

    @classmethod
    def from_coords(cls, coords):
        return cls(MElem(coords[:5]), MElem(coords[5:]))

    def coords(self):
        return self.m0.c + self.m1.c

    def __add__(self, o):
        o = _as_l(o)
        if o is NotImplemented:
            return o
        return LElem(self.m0 + o.m0, self.m1 + o.m1)

    __radd__ = __add__

    def __sub__(self, o):
        o = _as_l(o)
        if o is NotImplemented:
            return o
        return LElem(self.m0 - o.m0, self.m1 - o.m1)

    def __rsub__(self, o):
        return _as_l(o) - self

    def __neg__(self):
        return LElem(-self.m0, -self.m1)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return LElem(self.m0 * o, self.m1 * o)
        o = _as_l(o)
        if o is NotImplemented:
            return o
        a0, a1, b0, b1 = self.m0, self.m1, o.m0, o.m1
        t = a1 * b1
        return LElem(a0 * b0 - t * 2, a0 * b1 + a1 * b0 + t)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            return LElem(self.m0 / o, self.m1 / o)
        return self * _as_l(o).inverse()

    def __rtruediv__(self, o):
        return _as_l(o) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = LElem(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        o = _as_l(o)
        return o is not NotImplemented and self.m0 == o.m0 and self.m1 == o.m1

    def __hash__(self):
        return hash((self.m0, self.m1))

    def __bool__(self):
        return bool(self.m0) or bool(self.m1)

    def __repr__(self):
        return f"LElem({self.m0!r}, {self.m1!r})"

    def conj(self):
        return LElem(self.m0 + self.m1, -self.m1)

    def sigma(self, k=1):
        return LElem(self.m0.sigma(k), self.m1.sigma(k))

    def norm_LM(self):
        """N_{L/M}, an element of M."""
        return self.m0 * self.m0 + self.m0 * self.m1 + self.m1 * self.m1 * 2

    def inverse(self):
        n = self.norm_LM()
        if not n:
            raise ZeroDivisionError("inverse of zero in L")
        ninv = n.inverse()
        c = self.conj()
        return LElem(c.m0 * ninv, c.m1 * ninv)

    def norm_LE(self):
        """N_{L/E} as an EElem."""
        out = self
        for k in range(1, DEGREE):
            out = out * self.sigma(k)
        return out.to_e()

    def trace_LE(self):
        return EElem(self.m0.trace(), self.m1.trace())

    def to_e(self):
        """Return the EElem equal to self; raises if self is not in E."""
        if any(self.m0.c[1:]) or any(self.m1.c[1:]):
            raise ValueError("element does not lie in E")
        return EElem(self.m0.c[0], self.m1.c[0])

    def in_e(self):
        return not any(self.m0.c[1:]) and not any(self.m1.c[1:])

    def is_integral(self):
        return self.m0.is_integral() and self.m1.is_integral()

    def mul_matrix(self):
        """10x10 rational matrix of left multiplication on L coordinates.

        Coordinates are ordered (rho power j, alpha power k) -> 5 j + k, and the
        2x2 block pattern [[m0, -2 m1], [m1, m0 + m1]] is expanded by the 5x5
        multiplication matrices of M.
        """
        a = self.m0.mul_matrix()
        b = self.m1.mul_matrix()
        ab = (self.m0 + self.m1).mul_matrix()
        out = exact.zeros(10, 10, _F0)
        for i in range(5):
            for j in range(5):
                out[i][j] = a[i][j]
                out[i][5 + j] = -2 * b[i][j]
                out[5 + i][j] = b[i][j]
                out[5 + i][5 + j] = ab[i][j]
        return out


def _as_l(o):
    if isinstance(o, LElem):
        return o
    if isinstance(o, (int, Fraction)):
        return LElem(MElem(o))
    if isinstance(o, MElem):
        return LElem(o)
    if isinstance(o, EElem):
        return o.to_l()
    return NotImplemented


RHO2 = EElem(0, 1)
RHO2_BAR = RHO2.conj()
RHO11 = EElem(1, 2)
RHO11_BAR = RHO11.conj()


def e_valuation(x, prime):
    """Valuation of a nonzero element of E at the prime ideal generated by ``prime``."""
    x = x if isinstance(x, EElem) else EElem(x)
    if not x:
        raise ValueError("valuation of zero")
    d = x.r.denominator * x.s.denominator
    return _val_integral(x * d, prime) - _val_integral(EElem(d), prime)


def _val_integral(x, prime):
    pinv = prime.inverse()
    v = 0
    while True:
        y = x * pinv
        if not y.is_integral():
            return v
        x = y
        v += 1
