"""Orders in D: the base order, the two local maximal orders and their sum.

All lattices live in Q^50 through the coordinates of ``AlgebraElem.to_vector``
(index (2i + j) * 5 + k for the coefficient of u^i rho^j alpha^k).  The
iota-fixed part is parametrised by 25 free coordinates (m00, m10, m11, m20, m21),
the alpha-coordinates of l_0 = m00, l_1 = m10 + rho m11, l_2 = m20 + rho m21.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from . import exact
from .algebra import (A_CONST, B_CONST, D_EXP, DELTA, E_EXP, AlgebraElem, iota,
                      trd_square)
from .tower import (DEGREE, EElem, LElem, MElem, RHO11, RHO11_BAR, RHO2, RHO2_BAR,
                    e_valuation, trace_form_T)

DIM = 50
FREE_DIM = 25


def _cdiv(a, b):
    return -((-a) // b)


def _basis_l():
    """Z-basis rho^j alpha^k of O_L in coordinate order."""
    return [LElem(MElem.alpha(k)) if j == 0 else LElem(0, MElem.alpha(k))
            for j in range(2) for k in range(DEGREE)]


def base_order_scalars(d=D_EXP, e=E_EXP):
    """c_i with Lambda_D = sum_i u^i c_i O_L."""
    out = []
    for i in range(DEGREE):
        c = (RHO2_BAR ** _cdiv(e * i, 5) * RHO11_BAR ** _cdiv(d * e * i, 5)
             * RHO2 ** _cdiv(-e * i, 5) * RHO11 ** _cdiv(-d * e * i, 5))
        out.append(c)
    return out


def base_order_columns():
    cols = []
    for i, c in enumerate(base_order_scalars()):
        for b in _basis_l():
            cols.append(AlgebraElem.u_power(i, c.to_l() * b).to_vector())
    return cols


def plus_minus_data(sign, d=D_EXP, e=E_EXP, b=B_CONST):
    """(s, t, scalars a_i) for y = s + u t generating the order on one side of 11."""
    delta4 = DELTA ** 4
    if sign > 0:
        s = LElem(delta4 * b) / RHO11_BAR.to_l()
        t = -LElem(DELTA ** (d * e + 4)) / RHO11_BAR.to_l()
        scal = [RHO2_BAR ** _cdiv(e * i, 5) * RHO2 ** _cdiv(-e * i, 5)
                * RHO11 ** _cdiv(-4 * i, 5) for i in range(DEGREE)]
    else:
        s = LElem(delta4 * b) / RHO11.to_l()
        t = -LElem(DELTA ** (4 - d * e)) / RHO11.to_l()
        scal = [RHO2_BAR ** _cdiv(e * i, 5) * RHO2 ** _cdiv(-e * i, 5)
                * RHO11_BAR ** _cdiv(2 * d * e * i, 5) for i in range(DEGREE)]
    return s, t, scal


def y_element(sign):
    s, t, _ = plus_minus_data(sign)
    return AlgebraElem([s, t, 0, 0, 0])


def _complete_homogeneous(vals, k):
    """h_k(vals), the sum of all degree k monomials."""
    # h_k(x_0..x_m) = sum_i x_m^i h_{k-i}(x_0..x_{m-1})
    h = [LElem(1)] + [LElem()] * k
    for x in vals:
        new = [LElem()] * (k + 1)
        for deg in range(k + 1):
            acc = LElem()
            p = LElem(1)
            for i in range(deg + 1):
                acc = acc + p * h[deg - i]
                p = p * x
            new[deg] = acc
        h = new
    return h[k]


def t_matrix(s, t):
    """Upper triangular T with (1, y, .., y^4) = (1, u, .., u^4) T for y = s + u t."""
    n = DEGREE
    T = exact.zeros(n, n, LElem())
    s_conj = [s.sigma(-i) for i in range(n)]
    pi = [LElem(1)]
    for k in range(1, n):
        pi.append(pi[-1] * t.sigma(-(k - 1)))
    for i in range(n):
        for k in range(i, n):
            if i == 0:
                T[0][k] = s ** k
            else:
                # coefficient of u^i in y^k: h_{k-i}(s, s^{sigma^-1}, .., s^{sigma^-i}) Pi_i
                T[i][k] = _complete_homogeneous(s_conj[:i + 1], k - i) * pi[i]
    return T


def t_matrix_direct(s, t):
    """T computed by expanding powers of y in the algebra (independent check)."""
    y = AlgebraElem([s, t, 0, 0, 0])
    T = exact.zeros(DEGREE, DEGREE, LElem())
    p = AlgebraElem.scalar(1)
    for k in range(DEGREE):
        for i in range(DEGREE):
            T[i][k] = p.l[i]
        p = p * y
    return T


def _expand(block_matrix):
    """Replace each L entry by its 10x10 rational multiplication matrix."""
    n = len(block_matrix)
    out = exact.zeros(10 * n, 10 * n, Fraction(0))
    for bi in range(n):
        for bj in range(n):
            m = block_matrix[bi][bj].mul_matrix()
            for r in range(10):
                out[10 * bi + r][10 * bj:10 * bj + 10] = m[r]
    return out


def a_pm_matrix(sign):
    """50x50 rational basis matrix (columns) of the local maximal order Lambda_+ or Lambda_-."""
    s, t, scal = plus_minus_data(sign)
    T = t_matrix(s, t)
    blocks = [[T[i][k] * scal[k].to_l() for k in range(DEGREE)] for i in range(DEGREE)]
    return _expand(blocks)


def compute_amax():
    """HNF basis (columns) of Lambda_max = Lambda_+ + Lambda_-."""
    return exact.RationalLattice(exact.hstack(a_pm_matrix(1), a_pm_matrix(-1)))


def phi_matrix():
    """50x25 rational matrix sending free coordinates to the full iota-fixed element."""
    cols = []
    for n in range(FREE_DIM):
        v = [0] * FREE_DIM
        v[n] = 1
        cols.append(gamma_from_vec(v).to_vector())
    return exact.transpose(cols)


def gamma_from_free(m00, m1, m2):
    """The iota-fixed element with l0 = m00 (in M), l1 = m1, l2 = m2 (in L)."""
    l0 = LElem(m00)
    l4 = iota(AlgebraElem([0, m1, 0, 0, 0])).l[4]
    l3 = iota(AlgebraElem([0, 0, m2, 0, 0])).l[3]
    return AlgebraElem([l0, m1, m2, l3, l4])


def gamma_from_vec(m):
    """iota-fixed element from a vector of 25 free coordinates (Q-linear)."""
    m = [Fraction(x) for x in m]
    m00 = MElem(m[0:5])
    l1 = LElem(MElem(m[5:10]), MElem(m[10:15]))
    l2 = LElem(MElem(m[15:20]), MElem(m[20:25]))
    return gamma_from_free(m00, l1, l2)


def free_coordinates(g):
    """Inverse of ``gamma_from_vec`` on iota-fixed elements."""
    l0, l1, l2 = g.l[0], g.l[1], g.l[2]
    return list(l0.m0.c + l1.m0.c + l1.m1.c + l2.m0.c + l2.m1.c)


def compute_bmax(amax):
    """25x25 basis (columns) of {m : gamma_from_vec(m) in Lambda_max}."""
    ainv = exact.rat_inverse(amax.basis)
    n = exact.mat_mul(ainv, phi_matrix())
    basis = exact.dual_basis(n)
    return exact.RationalLattice(basis).basis


def a0_matrix():
    """Gram matrix of Trd(gamma^2) on free coordinates (before the B_max change of basis)."""
    T = trace_form_T()
    out = exact.zeros(FREE_DIM, FREE_DIM, 0)

    def put(bi, bj, f):
        for i in range(5):
            for j in range(5):
                out[5 * bi + i][5 * bj + j] = f * T[i][j]

    put(0, 0, 1)
    for a, b in ((1, 2), (3, 4)):
        put(a, a, 2)
        put(a, b, 1)
        put(b, a, 1)
        put(b, b, 4)
    return out


def compute_qmax(bmax):
    b = bmax
    return [[int(x) if Fraction(x).denominator == 1 else x for x in row]
            for row in exact.mat_mul(exact.mat_mul(exact.transpose(b), a0_matrix()), b)]


def qmax_eval(q, x):
    return exact.GramForm(q)(x)


def trd_square_formula(m):
    """Trd(gamma^2) = Tr(m00^2 + 2 N(l1) + 2 N(l2)) from free coordinates."""
    g = gamma_from_vec(m)
    l0, l1, l2 = g.l[0], g.l[1], g.l[2]
    return (l0.m0 * l0.m0 + l1.norm_LM() * 2 + l2.norm_LM() * 2).trace()


@dataclass
class OrderBundle:
    amax: list  # 50x50 HNF basis, columns
    bmax: list  # 25x25 basis of the iota-fixed part, columns
    qmax: list  # 25x25 integer Gram matrix
    _amax_inv: list = field(default=None, repr=False)

    @classmethod
    def build(cls):
        am = compute_amax()
        bm = compute_bmax(am)
        return cls(am.basis, bm, compute_qmax(bm))

    @property
    def amax_inv(self):
        if self._amax_inv is None:
            self._amax_inv = exact.rat_inverse(self.amax)
        return self._amax_inv

    def lattice(self):
        return exact.RationalLattice(self.amax)

    def contains(self, x):
        return lambda_max_contains(self, x)

    def gamma_from_vec(self, x):
        """iota-fixed element attached to an integer 25-vector x (m = B_max x)."""
        return gamma_from_vec(exact.mat_vec(self.bmax, list(x)))

    def vec_from_gamma(self, g):
        """Integer coordinates x of an iota-fixed element, or None if outside the lattice."""
        m = free_coordinates(g)
        x = exact.mat_vec(exact.rat_inverse(self.bmax), m)
        if any(Fraction(c).denominator != 1 for c in x):
            return None
        return [int(c) for c in x]

    def to_json(self):
        def enc(m):
            return [[f"{Fraction(x).numerator}/{Fraction(x).denominator}" for x in row] for row in m]
        return json.dumps({"amax": enc(self.amax), "bmax": enc(self.bmax), "qmax": enc(self.qmax)})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)

        def dec(m):
            return [[Fraction(x) for x in row] for row in m]
        q = [[int(x) if x.denominator == 1 else x for x in row] for row in dec(data["qmax"])]
        return cls(dec(data["amax"]), dec(data["bmax"]), q)


def reference_bmax():
    """The tabulated 25x25 B_max (rows as printed; its columns generate the lattice)."""
    from importlib import resources
    text = resources.files("ramanujan5").joinpath("data/bmax_reference.json").read_text()
    return [[Fraction(x) for x in row] for row in json.loads(text)]


def same_lattice(a, b):
    """True if the columns of a and b generate the same Z-lattice (equal HNFs)."""
    return exact.RationalLattice(a).basis == exact.RationalLattice(b).basis


def lambda_max_contains(bundle, x):
    """True if the AlgebraElem x lies in Lambda_max."""
    c = exact.mat_vec(bundle.amax_inv, x.to_vector())
    return all(Fraction(v).denominator == 1 for v in c)


def lattice_from_elements(elems):
    return exact.RationalLattice(exact.transpose([e.to_vector() for e in elems]))


def verify_order_properties(bundle):
    """Check that Lambda_max is an iota-stable order containing the base order.

    Returns a dict of named boolean checks plus the index [Lambda_max : Lambda_D].
    """
    lat = bundle.lattice()
    basis = [AlgebraElem.from_vector(c) for c in lat.columns()]
    closed = all(lambda_max_contains(bundle, x * y) for x in basis for y in basis)
    stable = all(lambda_max_contains(bundle, iota(x)) for x in basis)
    unit = lambda_max_contains(bundle, AlgebraElem.scalar(1))
    base = exact.RationalLattice(exact.transpose(base_order_columns()))
    contains_base = exact.lattice_contains(lat, base)
    index = exact.lattice_index(base, lat) if contains_base else None
    only_11 = index is not None and _is_power_of(index, 11)
    v2 = e_valuation(A_CONST, RHO2)
    v2b = e_valuation(A_CONST, RHO2_BAR)
    return {
        "closed_under_products": closed,
        "iota_stable": stable,
        "contains_unit": unit,
        "contains_base_order": contains_base,
        "index_is_power_of_11": only_11,
        "index": index,
        "a_valuations": (v2, v2b),
        "a_valuations_ok": (v2, v2b) == (1, -1),
    }


def _is_power_of(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def trd_square_direct(m):
    return trd_square(gamma_from_vec(m))
