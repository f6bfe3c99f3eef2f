"""Exact integer and rational linear algebra.

Matrices are plain lists of rows holding ``int`` or ``Fraction`` entries.
Lattices are spanned by the *columns* of a basis matrix.
"""

from fractions import Fraction
from math import gcd, isqrt, lcm

IntMatrix = list  # list[list[int]]
RatMatrix = list  # list[list[Fraction]]


def zeros(n, m=None, zero=0):
    m = n if m is None else m
    return [[zero] * m for _ in range(n)]


def identity(n, one=1, zero=0):
    out = zeros(n, n, zero)
    for i in range(n):
        out[i][i] = one
    return out


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_mul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def to_fractions(a):
    return [[Fraction(x) for x in row] for row in a]


def hstack(*mats):
    return [sum((list(m[i]) for m in mats), []) for i in range(len(mats[0]))]


def common_denominator(a):
    d = 1
    for row in a:
        for x in row:
            d = lcm(d, Fraction(x).denominator)
    return d


def rat_inverse(a):
    """Inverse of a square rational matrix by Gauss-Jordan elimination."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def rat_det(a):
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def rat_solve(a, b):
    """Solve ``a x = b`` for square invertible ``a``."""
    return mat_vec(rat_inverse(a), b)


def charpoly(m, zero=0, one=1):
    """Characteristic polynomial det(tI - m), coefficients from the leading term down.

    Berkowitz's algorithm, division free, so it works over any commutative ring.
    """
    n = len(m)
    p = [one]
    for r in range(n):
        q = [one, zero - m[r][r]]
        v = [m[i][r] for i in range(r)]
        for _ in range(r):
            acc = zero
            for x, y in zip(m[r][:r], v):
                acc = acc + x * y
            q.append(zero - acc)
            v = [sum((m[i][j] * v[j] for j in range(r)), zero) for i in range(r)]
        newp = []
        for i in range(r + 2):
            acc = zero
            for j in range(max(0, i - r - 1), min(i, r) + 1):
                acc = acc + q[i - j] * p[j]
            newp.append(acc)
        p = newp
    return p


# ---------------------------------------------------------------- HNF

def hnf(m):
    """Column-style Hermite normal form of an integer matrix.

    Returns the nonzero columns of ``m U`` for a unimodular ``U``: each column
    starts (top down) at a pivot row, pivot rows increase strictly, pivots
    are positive and every entry left of a pivot lies in ``[0, pivot)``.
    """
    if not m:
        return []
    rows = len(m)
    cols = [list(c) for c in zip(*m)]
    cols = [c for c in cols if any(c)]
    out = []
    pivots = []
    for i in range(rows):
        active = [c for c in cols if c[i] != 0]
        rest = [c for c in cols if c[i] == 0]
        while len(active) > 1:
            active.sort(key=lambda c: abs(c[i]))
            p = active[0]
            nxt = [p]
            for c in active[1:]:
                q = c[i] // p[i]
                c = [x - q * y for x, y in zip(c, p)]
                if c[i] != 0:
                    nxt.append(c)
                elif any(c):
                    rest.append(c)
            active = nxt
        if active:
            p = active[0]
            if p[i] < 0:
                p = [-x for x in p]
            out.append(p)
            pivots.append(i)
        cols = rest
    # reduce entries to the left of each pivot
    for k, i in enumerate(pivots):
        p = out[k]
        for j in range(k):
            q = out[j][i] // p[i]
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], p)]
    return [list(r) for r in zip(*out)] if out else [[] for _ in range(rows)]


def hnf_pivots(h):
    pivots = []
    if not h or not h[0]:
        return pivots
    for j in range(len(h[0])):
        pivots.append(next(i for i in range(len(h)) if h[i][j] != 0))
    return pivots


class RationalLattice:
    """A finitely generated subgroup of Q^n kept in canonical HNF.

    ``basis`` is the rational HNF of the generating columns, so two lattices
    are equal exactly when their bases are equal.
    """

    __slots__ = ("dim", "basis")

    def __init__(self, generators):
        gens = [[Fraction(x) for x in row] for row in generators]
        self.dim = len(gens)
        d = common_denominator(gens)
        h = hnf([[int(x * d) for x in row] for row in gens])
        self.basis = [[Fraction(x, d) for x in row] for row in h]

    @classmethod
    def from_columns(cls, columns, dim):
        return cls([[col[i] for col in columns] for i in range(dim)])

    @property
    def rank(self):
        return len(self.basis[0]) if self.basis else 0

    def columns(self):
        return [list(c) for c in zip(*self.basis)]

    def __eq__(self, other):
        return isinstance(other, RationalLattice) and self.basis == other.basis

    def __hash__(self):
        return hash(tuple(map(tuple, self.basis)))

    def coordinates(self, v):
        """Coordinates of ``v`` in the HNF basis, or None if ``v`` is outside the span."""
        v = [Fraction(x) for x in v]
        piv = hnf_pivots(self.basis)
        coords = []
        for k, i in enumerate(piv):
            c = v[i] / self.basis[i][k]
            coords.append(c)
            if c:
                v = [x - c * self.basis[r][k] for r, x in enumerate(v)]
        if any(v):
            return None
        return coords

    def contains(self, v):
        c = self.coordinates(v)
        return c is not None and all(x.denominator == 1 for x in c)

    def covolume(self):
        """Product of the pivots; for full rank lattices this is |det|."""
        out = Fraction(1)
        for k, i in enumerate(hnf_pivots(self.basis)):
            out *= self.basis[i][k]
        return out

    def __repr__(self):
        return f"RationalLattice(dim={self.dim}, rank={self.rank})"


def lattice_sum(a, b):
    return RationalLattice(hstack(a.basis, b.basis))


def lattice_contains(a, b):
    """True when lattice ``b`` is a sublattice of ``a``."""
    return all(a.contains(c) for c in b.columns())


def lattice_index(sub, sup):
    """Index [sup : sub] of full rank lattices."""
    if not lattice_contains(sup, sub):
        raise ValueError("not a sublattice")
    idx = sub.covolume() / sup.covolume()
    assert idx.denominator == 1
    return int(idx)


def dual_basis(rows):
    """Basis (as columns) of {x : r.x in Z for every r in the row span}.

    ``rows`` spans a full rank lattice in Q^n.
    """
    n = len(rows[0])
    lat = RationalLattice(transpose(rows))
    if lat.rank != n:
        raise ValueError("rows do not span a full rank lattice")
    # lat.basis columns form a basis R^T; the dual has basis columns of R^{-1}
    return rat_inverse(transpose(lat.basis))


# ---------------------------------------------------------------- quadratic forms

def exact_ldl(g):
    """Exact LDL^T of a symmetric matrix: returns (L, D) with L unit lower triangular.

    Raises ValueError if the form is not positive definite.
    """
    n = len(g)
    L = identity(n, Fraction(1), Fraction(0))
    D = [Fraction(0)] * n
    for j in range(n):
        d = Fraction(g[j][j]) - sum(L[j][k] ** 2 * D[k] for k in range(j))
        if d <= 0:
            raise ValueError("form is not positive definite")
        D[j] = d
        for i in range(j + 1, n):
            s = Fraction(g[i][j]) - sum(L[i][k] * L[j][k] * D[k] for k in range(j))
            L[i][j] = s / d
    return L, D


class GramForm:
    """Integral positive definite quadratic form x^T G x."""

    def __init__(self, gram):
        n = len(gram)
        g = [[Fraction(x) for x in row] for row in gram]
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix is not symmetric")
        self.gram = [[int(x) if x.denominator == 1 else x for x in row] for row in g]
        self.dim = n

    def __call__(self, x):
        g = self.gram
        return sum(x[i] * sum(g[i][j] * x[j] for j in range(self.dim))
                   for i in range(self.dim) if x[i])

    def is_integral(self):
        return all(isinstance(x, int) for row in self.gram for x in row)

    def is_nonnegative(self):
        return all(x >= 0 for row in self.gram for x in row)

    def is_positive_definite(self):
        try:
            exact_ldl(self.gram)
        except ValueError:
            return False
        return True


def lll_gram(gram, delta=Fraction(99, 100)):
    """Integral LLL reduction driven by a Gram matrix (all arithmetic in Z).

    Returns a unimodular ``H`` (columns are the new basis in old coordinates);
    the reduced Gram matrix is ``H^T G H``.  Used only to precondition the
    short vector search, whose output is basis independent.
    """
    n = len(gram)
    g = [[int(x) for x in row] for row in gram]
    H = [[int(i == j) for i in range(n)] for j in range(n)]  # H[k] = k-th basis vector
    num, den = delta.numerator, delta.denominator
    lam = [[0] * n for _ in range(n)]
    d = [1] + [0] * n  # d[i + 1] is d_i in 1-based notation

    def dot(a, b):
        return sum(a[i] * sum(g[i][j] * b[j] for j in range(n) if b[j]) for i in range(n) if a[i])

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            H[k] = [x - q * y for x, y in zip(H[k], H[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        H[k], H[k - 1] = H[k - 1], H[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    k, kmax = 1, 0
    d[1] = dot(H[0], H[0])
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(H[k], H[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k + 1] = u
        red(k, k - 1)
        if den * d[k + 1] * d[k - 1] < num * d[k] * d[k] - den * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return transpose(H)


def _integer_levels(gram):
    """Integer data for Fincke-Pohst over the reversed coordinate order.

    With y = reversed(x) and Q = sum_k D_k (y_k + sum_{j>k} L_jk y_j)^2, we
    write each term as iw_k * Y_k^2 / W where Y_k = den_k y_k + sum cint_kj y_j
    is an integer; everything is then compared in exact integers.
    """
    n = len(gram)
    rev = [[gram[n - 1 - i][n - 1 - j] for j in range(n)] for i in range(n)]
    L, D = exact_ldl(rev)
    den, cint, w = [], [], []
    for k in range(n):
        dk = 1
        for j in range(k + 1, n):
            dk = lcm(dk, L[j][k].denominator)
        den.append(dk)
        cint.append({j: int(L[j][k] * dk) for j in range(k + 1, n) if L[j][k]})
        w.append(D[k] / (dk * dk))
    W = 1
    for x in w:
        W = lcm(W, x.denominator)
    iw = [int(x * W) for x in w]
    return den, cint, iw, W


def canonical_sign(x):
    """x or -x, whichever has a positive first nonzero coordinate."""
    for v in x:
        if v:
            return tuple(x) if v > 0 else tuple(-c for c in x)
    return tuple(x)


def enumerate_short(gram, bound, top_values=None, canonical=True, reduce=True):
    """All nonzero integer x with x^T G x <= bound, exactly.

    With ``canonical`` only one of each pair +-x is produced: the one whose
    first nonzero coordinate is positive. With ``reduce`` the search runs in
    an LLL-reduced basis and vectors are mapped back; otherwise it runs in
    the given basis and vectors come out in search-tree order. ``top_values``
    restricts the first search coordinate (of the reduced basis when
    ``reduce`` is set), which partitions the search across workers.
    Yields ``(x, value)`` pairs.
    """
    if not reduce:
        yield from fincke_pohst(gram, bound, top_values, canonical)
        return
    H = lll_gram(gram)
    red = mat_mul(mat_mul(transpose(H), gram), H)
    for y, val in fincke_pohst(red, bound, top_values, True):
        x = canonical_sign(mat_vec(H, y))
        yield x, val
        if not canonical:
            yield tuple(-c for c in x), val


def fincke_pohst(gram, bound, top_values=None, canonical=True):
    """Fincke-Pohst search in the given basis; see ``enumerate_short``."""
    n = len(gram)
    den, cint, iw, W = _integer_levels(gram)
    total = (Fraction(bound) * W).__floor__()
    if total < 0:
        return
    y = [0] * n
    hi = [0] * n
    C = [0] * n
    partial = [0] * (n + 1)
    zero_above = [True] * (n + 1)
    allowed = None if top_values is None else sorted(set(top_values))

    def enter(k):
        c = 0
        for j, v in cint[k].items():
            if y[j]:
                c += v * y[j]
        C[k] = c
        r = total - partial[k + 1]
        if r < 0:
            return False
        s = isqrt(r // iw[k])
        d = den[k]
        lo = -((s + c) // d)
        hi[k] = (s - c) // d
        zero_above[k] = zero_above[k + 1] and (k == n - 1 or y[k + 1] == 0)
        if canonical and zero_above[k] and lo < 0:
            lo = 0
        y[k] = lo
        return True

    k = n - 1
    if not enter(k):
        return
    top_iter = None
    if allowed is not None:
        top_iter = iter([v for v in allowed if y[k] <= v <= hi[k]])
        nxt = next(top_iter, None)
        if nxt is None:
            return
        y[k] = nxt
    while True:
        if y[k] > hi[k]:
            k += 1
            if k == n:
                return
            if k == n - 1 and top_iter is not None:
                nxt = next(top_iter, None)
                if nxt is None:
                    return
                y[k] = nxt
            else:
                y[k] += 1
            continue
        Y = den[k] * y[k] + C[k]
        partial[k] = partial[k + 1] + iw[k] * Y * Y
        if k == 0:
            if not (zero_above[0] and y[0] == 0):
                yield tuple(reversed(y)), Fraction(partial[0], W)
            y[0] += 1
            continue
        k -= 1
        enter(k)


def search_partition(gram, bound, parts, reduce=True):
    """Split the canonical search into ``parts`` lists of first-coordinate values.

    Each list can be passed as ``top_values`` to ``enumerate_short`` with the
    same ``reduce`` flag; the union of the results is the full enumeration.
    """
    if reduce:
        H = lll_gram(gram)
        gram = mat_mul(mat_mul(transpose(H), gram), H)
    den, _, iw, W = _integer_levels(gram)
    total = (Fraction(bound) * W).__floor__()
    if total < 0:
        return [[] for _ in range(parts)]
    top = isqrt(total // iw[-1]) // den[-1]
    return [list(range(i, top + 1, parts)) for i in range(parts)]


def count_short(gram, bound, canonical=True, reduce=True):
    return sum(1 for _ in enumerate_short(gram, bound, canonical=canonical, reduce=reduce))


def gcd_list(xs):
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
