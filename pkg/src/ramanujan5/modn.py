"""Arithmetic in O_E/n and the mod-n trivialisations of Lambda_max.

O_E/n = Z[rho]/n with rho^2 = rho - 2.  For n prime to 2 * 7 * 11 the
trivialisation is conjugation by B_n = U_gamma A^{-1}; at 11, where the
order is only known abstractly, an explicit system of matrix units is
lifted instead (``ElevenTrivialization``).
"""

import json
import random
from fractions import Fraction
from math import gcd

from . import exact
from .algebra import A_CONST, AlgebraElem, eta
from .tower import DEGREE, RHO11, EElem, LElem, MElem


# ---------------------------------------------------------------- integers

def factorize(n):
    """{prime: exponent} by trial division."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def crt(residues):
    """Combine [(value, modulus), ...] with coprime moduli."""
    x, m = 0, 1
    for a, n in residues:
        t = ((a - x) * pow(m, -1, n)) % n
        x, m = x + m * t, m * n
    return x % m, m


def rat_mod(x, n):
    x = Fraction(x)
    if gcd(x.denominator, n) != 1:
        raise ZeroDivisionError(f"denominator {x.denominator} is not invertible mod {n}")
    return x.numerator * pow(x.denominator, -1, n) % n


def is_split(q):
    return q % 7 in (1, 2, 4)


def rho_roots(m):
    """Roots r of r^2 - r + 2 mod a prime power m = q^k with q split, Hensel lifted."""
    q = next(iter(factorize(m)))
    base = [r for r in range(q) if (r * r - r + 2) % q == 0]
    out = []
    for r in base:
        mod = q
        while mod < m:
            mod = min(mod * mod, m)
            f = r * r - r + 2
            r = (r - f * pow(2 * r - 1, -1, mod)) % mod
        out.append(r % m)
    return out


# ---------------------------------------------------------------- O_E / n

class ModNScalar:
    """r + s rho in O_E/n."""

    __slots__ = ("r", "s", "n")

    def __init__(self, r, s=0, n=None):
        if n is None:
            raise ValueError("modulus required")
        self.n = n
        self.r = r % n
        self.s = s % n

    @classmethod
    def from_e(cls, x, n):
        x = x if isinstance(x, EElem) else EElem(x)
        return cls(rat_mod(x.r, n), rat_mod(x.s, n), n)

    def _c(self, o):
        if isinstance(o, ModNScalar):
            if o.n != self.n:
                raise ValueError("moduli differ")
            return o
        return ModNScalar(o, 0, self.n)

    def __add__(self, o):
        o = self._c(o)
        return ModNScalar(self.r + o.r, self.s + o.s, self.n)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._c(o)
        return ModNScalar(self.r - o.r, self.s - o.s, self.n)

    def __rsub__(self, o):
        return self._c(o) - self

    def __neg__(self):
        return ModNScalar(-self.r, -self.s, self.n)

    def __mul__(self, o):
        o = self._c(o)
        # (r + s rho)(r' + s' rho) with rho^2 = rho - 2
        ss = self.s * o.s
        return ModNScalar(self.r * o.r - 2 * ss, self.r * o.s + self.s * o.r + ss, self.n)

    __rmul__ = __mul__

    def __pow__(self, k):
        out, b = ModNScalar(1, 0, self.n), self
        if k < 0:
            b, k = self.inverse(), -k
        while k:
            if k & 1:
                out = out * b
            b = b * b
            k >>= 1
        return out

    def __eq__(self, o):
        if isinstance(o, int):
            o = ModNScalar(o, 0, self.n)
        if not isinstance(o, ModNScalar):
            return NotImplemented
        return (self.r, self.s, self.n) == (o.r, o.s, o.n)

    def __hash__(self):
        return hash((self.r, self.s, self.n))

    def __bool__(self):
        return bool(self.r or self.s)

    def __repr__(self):
        return f"ModNScalar({self.r}, {self.s}, n={self.n})"

    def conj(self):
        return ModNScalar(self.r + self.s, -self.s, self.n)

    def norm(self):
        return (self.r * self.r + self.r * self.s + 2 * self.s * self.s) % self.n

    def is_unit(self):
        return gcd(self.norm(), self.n) == 1

    def inverse(self):
        nm = self.norm()
        if gcd(nm, self.n) != 1:
            raise ZeroDivisionError(f"{self!r} is not a unit")
        c = self.conj()
        inv = pow(nm, -1, self.n)
        return ModNScalar(c.r * inv, c.s * inv, self.n)

    def at_root(self, root):
        """Image in Z/n under rho -> root."""
        return (self.r + self.s * root) % self.n

    def pair(self):
        return (self.r, self.s)


def scalar_crt(parts):
    """Combine [(ModNScalar mod m_i), ...] into one scalar mod prod m_i."""
    r, n = crt([(x.r, x.n) for x in parts])
    s, _ = crt([(x.s, x.n) for x in parts])
    return ModNScalar(r, s, n)


class ModNMatrix:
    """Square matrix over O_E/n."""

    __slots__ = ("rows", "n")

    def __init__(self, rows, n):
        self.n = n
        self.rows = [[x if isinstance(x, ModNScalar) else ModNScalar(x, 0, n) for x in row]
                     for row in rows]

    @property
    def size(self):
        return len(self.rows)

    @classmethod
    def identity(cls, n, size=DEGREE):
        return cls([[int(i == j) for j in range(size)] for i in range(size)], n)

    @classmethod
    def antidiagonal(cls, n, size=DEGREE):
        return cls([[int(i + j == size - 1) for j in range(size)] for i in range(size)], n)

    @classmethod
    def from_pairs(cls, pairs, n):
        return cls([[ModNScalar(r, s, n) for r, s in row] for row in pairs], n)

    def pairs(self):
        return [[x.pair() for x in row] for row in self.rows]

    def __mul__(self, o):
        if isinstance(o, ModNMatrix):
            zero = ModNScalar(0, 0, self.n)
            cols = list(zip(*o.rows))
            return ModNMatrix([[sum((a * b for a, b in zip(row, col)), zero) for col in cols]
                               for row in self.rows], self.n)
        return ModNMatrix([[x * o for x in row] for row in self.rows], self.n)

    __rmul__ = __mul__

    def __add__(self, o):
        return ModNMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, o.rows)],
                          self.n)

    def __sub__(self, o):
        return ModNMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, o.rows)],
                          self.n)

    def __eq__(self, o):
        return isinstance(o, ModNMatrix) and self.n == o.n and self.rows == o.rows

    def __hash__(self):
        return hash((self.n, tuple(tuple(x.pair() for x in row) for row in self.rows)))

    def __repr__(self):
        return f"ModNMatrix({self.pairs()}, n={self.n})"

    def dagger(self):
        k = self.size
        return ModNMatrix([[self.rows[c][r].conj() for c in range(k)] for r in range(k)], self.n)

    def transpose(self):
        return ModNMatrix([list(c) for c in zip(*self.rows)], self.n)

    def charpoly(self):
        return exact.charpoly(self.rows, ModNScalar(0, 0, self.n), ModNScalar(1, 0, self.n))

    def det(self):
        c = self.charpoly()
        return c[-1] if self.size % 2 == 0 else -c[-1]

    def inverse(self):
        """Inverse via Cayley-Hamilton; needs a unit determinant."""
        c = self.charpoly()  # t^k + c1 t^{k-1} + ... + ck
        k = self.size
        if not c[-1].is_unit():
            raise ZeroDivisionError("matrix is not invertible mod n")
        acc = ModNMatrix.identity(self.n, k)
        for i in range(1, k):
            acc = self * acc + ModNMatrix.identity(self.n, k) * c[i]
        return acc * (-c[-1].inverse())

    def is_scalar(self):
        k = self.size
        d = self.rows[0][0]
        return all(self.rows[i][j] == (d if i == j else 0) for i in range(k) for j in range(k))

    def reduce(self, m):
        """Reduction to a divisor m of the modulus."""
        if self.n % m:
            raise ValueError("not a divisor of the modulus")
        return ModNMatrix([[ModNScalar(x.r, x.s, m) for x in row] for row in self.rows], m)

    def at_root(self, root):
        """Integer matrix mod n under rho -> root."""
        return [[x.at_root(root) for x in row] for row in self.rows]


def matrix_crt(parts):
    k = parts[0].size
    rows = [[scalar_crt([p.rows[i][j] for p in parts]) for j in range(k)] for i in range(k)]
    return ModNMatrix(rows, rows[0][0].n)


def from_root_images(a, b, r1, r2, m):
    """The O_E/m matrix whose images under rho -> r1, r2 are a, b (m odd, r1 - r2 a unit)."""
    inv = pow((r1 - r2) % m, -1, m)
    rows = []
    for ra, rb in zip(a, b):
        row = []
        for x, y in zip(ra, rb):
            s = (x - y) * inv
            row.append(ModNScalar(x - s * r1, s, m))
        rows.append(row)
    return ModNMatrix(rows, m)


# ---------------------------------------------------------------- L mod n

def l_reduce(l, n):
    """Integer representative of an n-integral element of L."""
    return LElem.from_coords([rat_mod(c, n) for c in l.coords()])


def l_to_scalar(l, n):
    """Reduce an element of L that is congruent mod n to an element of O_E."""
    c = [rat_mod(x, n) for x in l.coords()]
    if any(c[1:5]) or any(c[6:10]):
        raise ValueError("entry is not in O_E mod n")
    return ModNScalar(c[0], c[5], n)


def _check_modulus(n, extra=()):
    bad = [q for q in (2, 7, 11) + tuple(extra) if n % q == 0]
    if bad:
        raise ValueError(f"modulus {n} must be prime to {2 * 7 * 11}"
                         + (f" and {extra}" if extra else ""))


def _norm_residue(g, a, m):
    """N_{L/E}(g) * a^{-1} reduced mod m, as an E element with integer coordinates."""
    nm = g.norm_LE() / a
    return EElem(rat_mod(nm.r, m), rat_mod(nm.s, m))


def hensel_gamma(n, seed=0):
    """gamma in O_L (integer coordinates mod n) with N_{L/E}(gamma) = a mod n."""
    _check_modulus(n)
    if n == 1:
        return LElem(1)
    rng = random.Random(seed)
    parts = []
    for q, k in sorted(factorize(n).items()):
        g = None
        for _ in range(200 * q * q):
            cand = LElem.from_coords([rng.randrange(q) for _ in range(10)])
            if cand and _norm_residue(cand, A_CONST, q) == EElem(1):
                g = cand
                break
        if g is None:
            raise ArithmeticError(f"no base solution of N(gamma) = a mod {q}")
        mod = q
        while mod < q ** k:
            mod = min(mod * mod, q ** k)
            # N(g (1 + t alpha)) = N(g)(1 + t) modulo the square of the error, since Tr(alpha) = 1
            t = _norm_residue(g, A_CONST, mod).inverse() - 1
            t = EElem(rat_mod(t.r, mod), rat_mod(t.s, mod))
            g = l_reduce(g * (LElem(1) + t.to_l() * LElem(MElem.alpha(1))), mod)
        parts.append((g, q ** k))
    coords = [crt([(int(g.coords()[i]), m) for g, m in parts])[0] for i in range(10)]
    gamma = LElem.from_coords(coords)
    if _norm_residue(gamma, A_CONST, n) != EElem(1):
        raise ArithmeticError("Hensel lift failed")
    return gamma


def norm_congruence_holds(gamma, n):
    return _norm_residue(gamma, A_CONST, n) == EElem(1)


# ---------------------------------------------------------------- B_n

def circulant_a():
    """A[r][c] = sigma^{r+c}(alpha); det A = +-11^2."""
    al = [LElem(MElem.alpha(1).sigma(i)) for i in range(DEGREE)]
    return [[al[(r + c) % DEGREE] for c in range(DEGREE)] for r in range(DEGREE)]


def l_matrix_inverse(m):
    """Inverse of an invertible square matrix over the field L (Gauss-Jordan)."""
    k = len(m)
    aug = [list(row) + [LElem(int(i == j)) for j in range(k)] for i, row in enumerate(m)]
    for c in range(k):
        piv = next(r for r in range(c, k) if aug[r][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [x * inv for x in aug[c]]
        for r in range(k):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[k:] for row in aug]


def l_mat_mul(a, b):
    k = len(a)
    return [[sum((a[i][t] * b[t][j] for t in range(k)), LElem()) for j in range(k)]
            for i in range(k)]


def u_gamma(gamma):
    d = [LElem(1)]
    for i in range(DEGREE - 1):
        d.append(d[-1] * gamma.sigma(i))
    return d


class Trivialization:
    """Conjugation by B_n = U_gamma A^{-1}: Lambda_max / n -> Mat_5(O_E/n)."""

    def __init__(self, n, seed=0):
        _check_modulus(n)
        self.n = n
        self.gamma = hensel_gamma(n, seed)
        d = u_gamma(self.gamma)
        A = circulant_a()
        Ainv = l_matrix_inverse(A)
        k = DEGREE
        # B = U A^{-1}, B^{-1} = A U^{-1}
        self.B = [[d[i] * Ainv[i][j] for j in range(k)] for i in range(k)]
        dinv = [x.inverse() for x in d]
        self.Binv = [[A[i][j] * dinv[j] for j in range(k)] for i in range(k)]

    def conjugate_exact(self, x):
        """B^{-1} eta(x) B over L."""
        return l_mat_mul(l_mat_mul(self.Binv, eta(x)), self.B)

    def reduce(self, x):
        m = self.conjugate_exact(x)
        return ModNMatrix([[l_to_scalar(v, self.n) for v in row] for row in m], self.n)

    def hermitian(self):
        """The invariant form B^dagger B, divided by a unit of L so that it lies in O_E mod n.

        B^dagger B itself only lies in L; the group it preserves is the same
        after scaling by a central unit, and the scaled form is Hermitian over O_E/n.
        """
        k = DEGREE
        bd = [[self.B[c][r].conj() for c in range(k)] for r in range(k)]
        h = l_mat_mul(bd, self.B)
        scale = next(h[i][i] for i in range(k) if _is_unit_mod(h[i][i], self.n))
        inv = scale.inverse()
        return ModNMatrix([[l_to_scalar(v * inv, self.n) for v in row] for row in h], self.n)


def _is_unit_mod(l, n):
    nm = l.norm_LE().norm() if l else Fraction(0)
    return nm != 0 and gcd(nm.numerator, n) == 1 and gcd(nm.denominator, n) == 1


def build_Bn(n, seed=0):
    return Trivialization(n, seed)


# ---------------------------------------------------------------- V at 11

class NotIntegral(ValueError):
    """Element outside the order where an integral reduction was required."""


def _rank_mod_p(vectors, p):
    """Rank over F_p plus indices of a maximal independent subset (in input order)."""
    rows = []
    pivots = []
    chosen = []
    for idx, v in enumerate(vectors):
        v = [x % p for x in v]
        for (pc, r) in zip(pivots, rows):
            if v[pc]:
                f = v[pc]
                v = [(a - f * b) % p for a, b in zip(v, r)]
        pc = next((i for i, x in enumerate(v) if x), None)
        if pc is None:
            continue
        inv = pow(v[pc], -1, p)
        v = [x * inv % p for x in v]
        rows.append(v)
        pivots.append(pc)
        chosen.append(idx)
    return len(rows), chosen, pivots


def _int_matrix_inverse_mod(m, mod):
    k = len(m)
    aug = [[x % mod for x in row] + [int(i == j) for j in range(k)] for i, row in enumerate(m)]
    for c in range(k):
        piv = next(r for r in range(c, k) if gcd(aug[r][c], mod) == 1)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], -1, mod)
        aug[c] = [x * inv % mod for x in aug[c]]
        for r in range(k):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [(x - f * y) % mod for x, y in zip(aug[r], aug[c])]
    return [row[k:] for row in aug]


def _poly_roots_mod(coeffs, p):
    """Roots in F_p of a polynomial given low to high."""
    return [x for x in range(p) if sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p == 0]


class ElevenTrivialization:
    """Lambda_max / 11^k -> Mat_5(O_E/11^k) from lifted matrix units.

    Each of the two components (rho -> r, rho -> rbar) of O_E/11^k carries a
    matrix algebra; a primitive idempotent e is found mod 11 as a spectral
    projector of a random element, Newton lifted, and the left ideal
    Lambda e is used as the standard module.
    """

    P0 = 11

    def __init__(self, bundle, k=1, seed=0):
        self.k = k
        self.mod = self.P0 ** k
        self.bundle = bundle
        self.basis = [AlgebraElem.from_vector(c) for c in exact.transpose(bundle.amax)]
        r1, r2 = rho_roots(self.mod)
        # rho11 = 1 + 2 rho vanishes mod 11 at the first component
        if (1 + 2 * r1) % self.P0:
            r1, r2 = r2, r1
        self.roots = (r1, r2)
        self.components = []
        rng = random.Random(seed)
        for root, other in ((r1, r2), (r2, r1)):
            eps = self._central_idempotent(root, other)
            self.components.append(self._component(eps, rng))

    # -- element <-> coordinates mod 11^k
    def coords(self, x):
        c = exact.mat_vec(self.bundle.amax_inv, x.to_vector())
        if any(Fraction(v).denominator % self.P0 == 0 for v in c):
            raise NotIntegral("element is not 11-integral in Lambda_max")
        return [rat_mod(v, self.mod) for v in c]

    def elem(self, c):
        return AlgebraElem.from_vector(exact.mat_vec(self.bundle.amax, list(c)))

    def mul(self, a, b):
        return [v % self.mod for v in self.coords(self.elem(a) * self.elem(b))]

    def _central_idempotent(self, root, other):
        m = self.mod
        v = pow((root - other) % m, -1, m)
        u = (-v * other) % m
        return self.coords(AlgebraElem.scalar(EElem(u, v)))

    def _component(self, eps, rng):
        p = self.P0
        for _ in range(50):
            z = self.mul(eps, [rng.randrange(p) for _ in range(len(self.basis))])
            powers = [eps]
            for _ in range(DEGREE):
                powers.append(self.mul(powers[-1], z))
            rank, chosen, _ = _rank_mod_p(powers, p)
            deg = rank
            # minimal polynomial of z in the component: first dependency among eps, z, z^2, ...
            mp = self._dependency(powers[:deg + 1], p)
            if mp is None:
                continue
            for lam in _poly_roots_mod(mp, p):
                g = _divide_linear(mp, lam, p)
                if _poly_roots_mod(g, p).count(lam):
                    continue
                glam = sum(c * pow(lam, i, p) for i, c in enumerate(g)) % p
                e = [0] * len(eps)
                for i, c in enumerate(g):
                    e = [(a + c * b) for a, b in zip(e, powers[i])]
                ginv = pow(glam, -1, p)
                e = [a * ginv % self.mod for a in e]
                # primitive iff the right ideal e Lambda has rank 5 mod 11
                right = [self.mul(e, self.coords(b)) for b in self.basis]
                if _rank_mod_p(right, p)[0] != DEGREE:
                    continue
                e = self._lift_idempotent(e)
                return self._module(e)
        raise ArithmeticError("no primitive idempotent found; raise the number of trials")

    @staticmethod
    def _dependency(vecs, p):
        """Monic coefficients (low to high) of the first linear relation, mod p."""
        n = len(vecs)
        # solve sum_{i<n-1} c_i v_i = -v_{n-1}
        rows = [[v[j] for v in vecs[:-1]] + [(-vecs[-1][j]) % p] for j in range(len(vecs[0]))]
        sol = _solve_mod_p(rows, n - 1, p)
        return None if sol is None else sol + [1]

    def _lift_idempotent(self, e):
        mod = self.P0
        while mod < self.mod:
            mod = min(mod * mod, self.mod)
            e2 = self.mul(e, e)
            e3 = self.mul(e2, e)
            e = [(3 * a - 2 * b) % self.mod for a, b in zip(e2, e3)]
        if self.mul(e, e) != [v % self.mod for v in e]:
            raise ArithmeticError("idempotent lifting failed")
        return e

    def _module(self, e):
        ideal = [self.mul(self.coords(b), e) for b in self.basis]
        rank, chosen, _ = _rank_mod_p(ideal, self.P0)
        if rank != DEGREE:
            raise ArithmeticError("left ideal has the wrong rank")
        gens = [ideal[i] for i in chosen]
        # coordinates where the 5 generators are independent mod 11
        _, rows, _ = _rank_mod_p([list(c) for c in zip(*gens)], self.P0)
        minor = [[gens[j][r] for j in range(DEGREE)] for r in rows]
        return {"e": e, "gens": gens, "rows": rows,
                "minor_inv": _int_matrix_inverse_mod(minor, self.mod)}

    def component_matrix(self, x, which=0):
        """Matrix over Z/11^k of left multiplication by x on the standard module."""
        comp = self.components[which]
        c = self.coords(x) if isinstance(x, AlgebraElem) else list(x)
        cols = []
        for gvec in comp["gens"]:
            img = self.mul(c, gvec)
            sel = [img[r] for r in comp["rows"]]
            cols.append([sum(a * b for a, b in zip(row, sel)) % self.mod
                         for row in comp["minor_inv"]])
        return [list(r) for r in zip(*cols)]

    def reduce(self, x):
        a = self.component_matrix(x, 0)
        b = self.component_matrix(x, 1)
        return from_root_images(a, b, self.roots[0], self.roots[1], self.mod)


def _divide_linear(coeffs, lam, p):
    """Quotient of a polynomial (low to high) by (t - lam) over F_p."""
    out = [0] * (len(coeffs) - 1)
    carry = 0
    for i in range(len(coeffs) - 1, 0, -1):
        carry = (coeffs[i] + carry * lam) % p
        out[i - 1] = carry
    return out


def _solve_mod_p(rows, nvars, p):
    """One solution of an augmented linear system over F_p, or None."""
    rows = [[x % p for x in r] for r in rows]
    piv_cols = []
    r = 0
    for c in range(nvars):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    sol = [0] * nvars
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][-1]
    return sol


def build_Vp0(bundle, k=1, seed=0):
    return ElevenTrivialization(bundle, k, seed)


class CompositeTrivialization:
    """CRT combination of a trivialisation prime to 11 and one at 11^k."""

    def __init__(self, bundle, n, seed=0):
        k = 0
        m = n
        while m % 11 == 0:
            m //= 11
            k += 1
        self.n = n
        self.parts = []
        if m > 1:
            self.parts.append(Trivialization(m, seed))
        if k:
            self.parts.append(ElevenTrivialization(bundle, k, seed))

    def reduce(self, x):
        if not self.parts:
            return ModNMatrix.identity(1)
        return matrix_crt([p.reduce(x) for p in self.parts])


# ---------------------------------------------------------------- C_n

class CnResult:
    def __init__(self, C, lam):
        self.C = C
        self.lam = lam

    def __iter__(self):
        return iter((self.C, self.lam))


def _scalar_multiple_of_j(H):
    """lambda if H = lambda J with lambda in (Z/n)^x, else None."""
    k = H.size
    lam = H.rows[0][k - 1]
    if lam.s or gcd(lam.r, H.n) != 1:
        return None
    return lam.r if H == ModNMatrix.antidiagonal(H.n, k) * lam else None


def _herm(H, u, v):
    """u^dagger H v for column vectors u, v."""
    zero = ModNScalar(0, 0, H.n)
    out = zero
    for i, ui in enumerate(u):
        if not ui:
            continue
        acc = zero
        for j, vj in enumerate(v):
            if vj:
                acc = acc + H.rows[i][j] * vj
        out = out + ui.conj() * acc
    return out


def _field_elements(q):
    return [ModNScalar(r, s, q) for s in range(q) for r in range(q)]


def _orthonormal_basis(H, q):
    """C over F_{q^2} (q inert) with C^dagger H C = I, by splitting off anisotropic vectors."""
    k = H.size
    basis = [[ModNScalar(int(i == j), 0, q) for i in range(k)] for j in range(k)]
    elems = [c for c in _field_elements(q) if c]
    norm_root = {}
    for c in elems:
        norm_root.setdefault(c.norm(), c)
    out = []
    while basis:
        v = next((b for b in basis if _herm(H, b, b)), None)
        if v is None:
            v = _anisotropic_combination(H, basis, elems)
        hv = _herm(H, v, v)  # lies in F_q
        c = norm_root[pow(hv.r, -1, q)]
        v = [x * c for x in v]
        out.append(v)
        proj = [[x - y * _herm(H, v, b) for x, y in zip(b, v)] for b in basis]
        basis = _independent_subset(proj)
    return ModNMatrix([list(r) for r in zip(*out)], q)


def _anisotropic_combination(H, basis, elems):
    for i in range(len(basis)):
        for j in range(len(basis)):
            if i == j:
                continue
            for c in elems:
                w = [x + c * y for x, y in zip(basis[i], basis[j])]
                if _herm(H, w, w):
                    return w
    raise ArithmeticError("degenerate Hermitian form")


def _independent_subset(vectors):
    """A maximal independent subset over the residue field, in input order."""
    rows, pivots, keep = [], [], []
    for v in vectors:
        w = list(v)
        for pc, r in zip(pivots, rows):
            if w[pc]:
                f = w[pc]
                w = [a - f * b for a, b in zip(w, r)]
        pc = next((i for i, x in enumerate(w) if x), None)
        if pc is None:
            continue
        inv = w[pc].inverse()
        rows.append([x * inv for x in w])
        pivots.append(pc)
        keep.append(v)
    return keep


def _cq_inert(H, q, k):
    Hq = H.reduce(q)
    C0 = _orthonormal_basis(Hq, q)
    J = ModNMatrix.antidiagonal(q)
    CJ = _orthonormal_basis(J, q)
    C = C0 * CJ.inverse()
    m = q ** k
    Hm = H.reduce(m)
    Jm = ModNMatrix.antidiagonal(m)
    C = ModNMatrix([[ModNScalar(x.r, x.s, m) for x in row] for row in C.rows], m)
    mod = q
    while mod < m:
        mod = min(mod * mod, m)
        Em = C.dagger() * Hm * C - Jm
        half = pow(2, -1, m)
        C = C * (ModNMatrix.identity(m) - Jm * Em * half)
    return C


def _cq_split(H, q, k):
    m = q ** k
    r1, r2 = rho_roots(m)
    Hm = H.reduce(m)
    X = Hm.at_root(r1)
    Xinv = _int_matrix_inverse_mod(X, m)
    J = [[int(i + j == DEGREE - 1) for j in range(DEGREE)] for i in range(DEGREE)]
    first = exact.mat_mul(Xinv, J)
    first = [[v % m for v in row] for row in first]
    ident = [[int(i == j) for j in range(DEGREE)] for i in range(DEGREE)]
    return from_root_images(first, ident, r1, r2, m)


def build_Cn(H):
    """C with C^dagger H C = lambda J mod n; returns (C, lambda)."""
    n = H.n
    _check_modulus(n)
    lam = _scalar_multiple_of_j(H)
    if lam is not None:
        return CnResult(ModNMatrix.identity(n, H.size), lam)
    parts = []
    for q, k in sorted(factorize(n).items()):
        parts.append(_cq_split(H, q, k) if is_split(q) else _cq_inert(H, q, k))
    C = matrix_crt(parts) if len(parts) > 1 else parts[0]
    res = C.dagger() * H * C
    if res != ModNMatrix.antidiagonal(n, H.size):
        raise ArithmeticError("form reduction failed")
    return CnResult(C, 1)


def is_hermitian(H):
    return H.dagger() == H


def random_hermitian(n, rng, size=DEGREE):
    """Random Hermitian matrix with unit determinant mod n."""
    while True:
        rows = [[None] * size for _ in range(size)]
        for i in range(size):
            # conjugation fixes exactly the r + 0 rho
            rows[i][i] = ModNScalar(rng.randrange(n), 0, n)
            for j in range(i + 1, size):
                x = ModNScalar(rng.randrange(n), rng.randrange(n), n)
                rows[i][j] = x
                rows[j][i] = x.conj()
        H = ModNMatrix(rows, n)
        if H.det().is_unit():
            return H


# ---------------------------------------------------------------- gates and group sizes

def reduce_gate(gate, triv, cn):
    """C^{-1} B^{-1} eta(s) B C mod n for the scaled gate s; checks unitarity."""
    n = triv.n
    if n % 11 == 0:
        raise ValueError("reduction at 11 is not unitary for the order as built")
    s = gate.element() if hasattr(gate, "element") else gate
    C, lam = cn
    Y = triv.reduce(s)
    Z = C.inverse() * Y * C
    J = ModNMatrix.antidiagonal(n)
    if Z.dagger() * J * Z != J:
        raise ArithmeticError("reduced gate is not unitary")
    return Z


def is_unitary(Z):
    J = ModNMatrix.antidiagonal(Z.n, Z.size)
    return Z.dagger() * J * Z == J


def _u5_local(q):
    if is_split(q):
        num = 1
        for i in range(5):
            num *= q ** 5 - q ** i
    else:
        num = 1
        for i in range(5):
            num *= q ** 5 + (-1) ** i * q ** i
    return Fraction(num, q ** 25)


def group_sizes(n, p=None):
    """|U_5(Z/n)|, |U_1(Z/n)| and the vertex count of the complex for gates at p."""
    if gcd(n, 14) != 1:
        raise ValueError("n must be prime to 14")
    u5 = Fraction(n ** 25)
    u1 = Fraction(n)
    for q in factorize(n):
        u5 *= _u5_local(q)
        # split primes contribute (q - 1)/q, inert ones (q + 1)/q
        u1 *= Fraction(q - 1, q) if is_split(q) else Fraction(q + 1, q)
    u5, u1 = int(u5), int(u1)
    out = {"u5": u5, "u1": u1}
    if p is not None:
        out["vertices"] = u5 // u1 if is_split(p) else u5
    return out


def export_reduced(mats, n, path=None):
    data = {"modulus": n, "matrices": [m.pairs() for m in mats]}
    text = json.dumps(data, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def span_rank(mats, q):
    """Dimension over F_q of the span of reduced matrices mod a prime q (as 2 * 25 coordinates)."""
    vecs = [[c for row in m.reduce(q).rows for x in row for c in x.pair()] for m in mats]
    return _rank_mod_p(vecs, q)[0]
