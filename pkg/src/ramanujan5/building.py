"""Vertices of the building near the base vertex x0, in the lattice model.

Split p: neighbours of x0 are the proper nonzero subspaces of F_p^5, stored as
reduced row echelon bases.  Inert p: vertices at distance two are self-dual
submodules of (O_E/p^2)^5 under the reduced form H_p, stored in Howell form.
Distance-one vertices are totally isotropic subspaces W of (O_E/p)^5.
"""

from collections import Counter, defaultdict
from functools import reduce
from itertools import combinations, product

import numpy as np

from .modn import ModNMatrix, rho_roots

N = 5


# ---------------------------------------------------------------- vector spaces over F_p

def rref(rows, p):
    """Canonical reduced row echelon basis (tuple of tuples) of the span of rows mod p."""
    rows = [[x % p for x in r] for r in rows]
    out = []
    width = len(rows[0]) if rows else 0
    r = 0
    for c in range(width):
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
        r += 1
    out = [tuple(row) for row in rows[:r]]
    return tuple(out)


def pivots(label):
    return tuple(next(i for i, x in enumerate(row) if x) for row in label)


def split_labels(p, dims=None, n=N):
    """All proper nonzero subspaces of F_p^n in RREF, by dimension and pivot pattern."""
    dims = range(1, n) if dims is None else dims
    for k in dims:
        for piv in combinations(range(n), k):
            # free slots: right of the row's pivot, outside the pivot columns
            slots = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, n) if c not in piv]
            for vals in product(range(p), repeat=len(slots)):
                rows = [[0] * n for _ in range(k)]
                for i, pc in enumerate(piv):
                    rows[i][pc] = 1
                for (i, c), v in zip(slots, vals):
                    rows[i][c] = v
                yield tuple(tuple(r) for r in rows)


def gaussian_binomial(n, k, q):
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def split_label_count(p, n=N):
    return sum(gaussian_binomial(n, k, p) for k in range(1, n))


def count_split_labels(p, n=N):
    """Exhaustive count of ``split_labels`` (with a spot check of canonicity)."""
    total = 0
    for i, lab in enumerate(split_labels(p, n=n)):
        if i % 9973 == 0 and rref(lab, p) != lab:
            raise AssertionError("label not in canonical form")
        total += 1
    return total


def span_dim(rows, p):
    return len(rref(rows, p)) if rows else 0


def is_subspace(a, b, p):
    """True if span(a) is contained in span(b)."""
    return span_dim(list(a) + list(b), p) == len(rref(b, p))


def split_simplices(labels, p, max_len=None):
    """Chains M1 < M2 < ... of labels (strict inclusion); each is a simplex with x0."""
    labels = sorted(set(labels), key=lambda l: (len(l), l))
    by_dim = defaultdict(list)
    for l in labels:
        by_dim[len(l)].append(l)

    def extend(chain):
        yield tuple(chain)
        if max_len is not None and len(chain) >= max_len:
            return
        top = chain[-1]
        for d in sorted(by_dim):
            if d <= len(top):
                continue
            for l in by_dim[d]:
                if is_subspace(top, l, p):
                    yield from extend(chain + [l])

    for l in labels:
        yield from extend([l])


def count_full_flags(p, n=N):
    """Maximal flags of F_p^n by the q-factorial."""
    out = 1
    for i in range(1, n + 1):
        out *= (p ** i - 1) // (p - 1)
    return out


def count_full_flags_brute(p, n=N):
    """Maximal chains among all labels, found by walking up through containments."""
    labels = list(split_labels(p, n=n))
    by_dim = defaultdict(list)
    for l in labels:
        by_dim[len(l)].append(l)
    counts = {l: 1 for l in by_dim[n - 1]}
    for d in range(n - 2, 0, -1):
        for l in by_dim[d]:
            counts[l] = sum(c for u, c in counts.items() if len(u) == d + 1 and is_subspace(l, u, p))
    return sum(counts[l] for l in by_dim[1])


class GateMatchError(ValueError):
    pass


def split_root(p, rp):
    """The root r of rho^2 - rho + 2 mod p at which rho_p = x + y rho vanishes."""
    r1, r2 = rho_roots(p)
    x, y = int(rp.r), int(rp.s)
    for r in (r1, r2):
        if (x + y * r) % p == 0:
            return r
    raise ValueError("rho_p does not vanish at either root")


def column_space_label(M, root, p):
    """RREF of the column space of a ModNMatrix evaluated at rho = root mod p."""
    a = M.at_root(root) if isinstance(M, ModNMatrix) else M
    cols = [[a[r][c] % p for r in range(len(a))] for c in range(len(a[0]))]
    return rref(cols, p)


def match_gate_split(gate, triv, p, rp):
    """Label of a split gate: the column space mod rho_p of its trivialised matrix.

    The unscaled element is used; the scale is a unit at rho_p.
    """
    g = gate.g if hasattr(gate, "g") else gate
    M = triv.reduce(g).reduce(p)
    label = column_space_label(M, split_root(p, rp), p)
    if not label or len(label) == N:
        raise GateMatchError(f"column space has dimension {len(label)}")
    return label


# ---------------------------------------------------------------- O_E / p^k

class ResidueRing:
    """O_E/p^k for inert p, elements encoded as r + m s with m = p^k (r + s rho).

    Operations are table lookups; ``val`` is the p-adic valuation (k for 0).
    """

    def __init__(self, p, k):
        self.p, self.k = p, k
        m = self.m = p ** k
        size = self.size = m * m
        pairs = [(i % m, i // m) for i in range(size)]

        def enc(r, s):
            return r % m + m * (s % m)

        self.enc = enc
        self.pairs = pairs
        self.add = [[enc(a[0] + b[0], a[1] + b[1]) for b in pairs] for a in pairs]
        self.sub = [[enc(a[0] - b[0], a[1] - b[1]) for b in pairs] for a in pairs]
        # (a + b rho)(c + d rho) = ac - 2bd + (ad + bc + bd) rho
        self.mul = [[enc(a[0] * b[0] - 2 * a[1] * b[1], a[0] * b[1] + a[1] * b[0] + a[1] * b[1])
                     for b in pairs] for a in pairs]
        self.neg = [enc(-a, -b) for a, b in pairs]
        # conj(rho) = 1 - rho
        self.conj = [enc(a + b, -b) for a, b in pairs]
        self.val = []
        for a, b in pairs:
            v = 0
            while v < k and a % p ** (v + 1) == 0 and b % p ** (v + 1) == 0:
                v += 1
            self.val.append(v)
        one = enc(1, 0)
        self.one = one
        self.inv = [None] * size
        for x in range(size):
            if self.val[x] == 0 and self.inv[x] is None:
                y = next(y for y in range(size) if self.mul[x][y] == one)
                self.inv[x], self.inv[y] = y, x
        # x = low + p * high with low having coordinates in [0, p)
        self.low = [enc(a % p, b % p) for a, b in pairs]
        self.high = [enc((a - a % p) // p, (b - b % p) // p) for a, b in pairs]
        self.pmul = [enc(p * a, p * b) for a, b in pairs]

    def residue(self, x, v):
        """Representative of x mod p^v with coordinates in [0, p^v)."""
        a, b = self.pairs[x]
        q = self.p ** v
        return self.enc(a % q, b % q)

    def from_scalar(self, x):
        return self.enc(x.r, x.s)

    def from_matrix(self, M):
        return [[self.from_scalar(v) for v in row] for row in M.rows]

    def div_p(self, x, v):
        """y with p^v y = x (x of valuation >= v)."""
        for _ in range(v):
            x = self.high[x]
        return x

    def reduce_to(self, other, x):
        a, b = self.pairs[x]
        return other.enc(a, b)

    def lift_from(self, other, x):
        a, b = other.pairs[x]
        return self.enc(a, b)

    # vectors
    def vadd(self, u, v):
        add = self.add
        return [add[a][b] for a, b in zip(u, v)]

    def vsub(self, u, v):
        sub = self.sub
        return [sub[a][b] for a, b in zip(u, v)]

    def vscale(self, t, u):
        row = self.mul[t]
        return [row[a] for a in u]

    def dot(self, u, v):
        add, mul = self.add, self.mul
        return reduce(lambda acc, ab: add[acc][mul[ab[0]][ab[1]]], zip(u, v), 0)


def _normalise(R, row, c, v):
    """Scale row by a unit so that its entry in column c is exactly p^v."""
    # only u mod p^(k - v) matters; the canonical residue makes the choice unique
    u = R.residue(R.div_p(row[c], v), R.k - v)
    return R.vscale(R.inv[u], row)


def howell(R, rows):
    """Canonical generator matrix of the O_E/p^k-span of rows.

    Echelon form with pivots exactly p^v, closed under multiplication by p
    (Howell property) and with entries above each pivot reduced modulo that pivot.
    """
    k = R.k
    width = len(rows[0]) if rows else 0
    pool = [list(r) for r in rows if any(r)]
    piv_rows = []
    for c in range(width):
        cand = [(R.val[r[c]], i) for i, r in enumerate(pool) if R.val[r[c]] < k]
        if not cand:
            continue
        v, i = min(cand)
        row = _normalise(R, pool.pop(i), c, v)
        new_pool = []
        for r in pool:
            if r[c]:
                r = R.vsub(r, R.vscale(R.div_p(r[c], v), row))
            if any(r):
                new_pool.append(r)
        pool = new_pool
        if v:
            extra = row
            for _ in range(k - v):
                extra = [R.pmul[x] for x in extra]
            if any(extra):
                pool.append(extra)
        piv_rows.append((c, v, row))
    out = [r for _, _, r in piv_rows]
    for j, (c, v, row) in enumerate(piv_rows):
        for i in range(j):
            e = out[i][c]
            if e:
                out[i] = R.vsub(out[i], R.vscale(R.div_p(R.sub[e][R.residue(e, v)], v), row))
    return tuple(tuple(r) for r in out)


def howell_pivot_data(H):
    return tuple((next(c for c, x in enumerate(r) if x), r) for r in H)


def module_log_size(R, H):
    """log_p |span| for a Howell form (each pivot p^v contributes 2(k - v))."""
    return sum(2 * (R.k - R.val[next(x for x in r if x)]) for r in H)


def module_elements(R, H):
    """All elements of the span of a Howell form (small cases only)."""
    gens = [list(r) for r in H]
    width = len(gens[0]) if gens else 0
    elems = {tuple([0] * width)}
    for g in gens:
        new = set()
        for t in range(R.size):
            s = R.vscale(t, g)
            for e in elems:
                new.add(tuple(R.add[a][b] for a, b in zip(e, s)))
        elems = new
    return frozenset(elems)


def smith_kernel(R, A):
    """Generators of {x : A x = 0} over O_E/p^k for a matrix A (list of rows).

    Row and column operations bring A to diag(p^v_j); column operations are
    recorded in Q and the kernel is spanned by p^(k - v_j) Q e_j.
    """
    k = R.k
    rows = [list(r) for r in A]
    ncols = len(rows[0]) if rows else 0
    Q = [[R.one if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    diag = []
    for r in range(min(len(rows), ncols)):
        best = min(((R.val[rows[i][j]], i, j) for i in range(r, len(rows))
                    for j in range(r, ncols)), default=(k, 0, 0))
        v, i, j = best
        if v >= k:
            break
        rows[r], rows[i] = rows[i], rows[r]
        for row in rows + Q:
            row[r], row[j] = row[j], row[r]
        rows[r] = _normalise(R, rows[r], r, v)
        for i2 in range(len(rows)):
            if i2 != r and rows[i2][r]:
                rows[i2] = R.vsub(rows[i2], R.vscale(R.div_p(rows[i2][r], v), rows[r]))
        for j2 in range(r + 1, ncols):
            if rows[r][j2]:
                t = R.div_p(rows[r][j2], v)
                for row in rows + Q:
                    row[j2] = R.sub[row[j2]][R.mul[row[r]][t]]
        diag.append(v)
    gens = []
    for j in range(ncols):
        v = diag[j] if j < len(diag) else k
        if v == 0:
            continue
        scale = R.one
        for _ in range(k - v):
            scale = R.pmul[scale]
        gens.append([R.mul[Q[i][j]][scale] for i in range(ncols)])
    return gens


# ---------------------------------------------------------------- inert model

class InertModel:
    """Vertices within distance two of x0 = O^n for an inert prime p and form H.

    H is a Hermitian matrix over O_E/p^2 (a ModNMatrix mod p^2), unimodular.
    """

    def __init__(self, p, H):
        self.p = p
        self.n = H.size if hasattr(H, "size") else len(H.rows)
        self.R = ResidueRing(p, 2)
        self.F = ResidueRing(p, 1)
        self.H = self.R.from_matrix(H)
        self.Hbar = [[self.R.reduce_to(self.F, x) for x in row] for row in self.H]
        self._isotropic = {}

    # forms
    def herm(self, x, y, R=None):
        """x^dagger H y over R (O/p^2 by default, or O/p)."""
        R = R or self.R
        H = self.H if R is self.R else self.Hbar
        hy = [R.dot(row, y) for row in H]
        return R.dot([R.conj[a] for a in x], hy)

    def dual(self, rows):
        """{x : herm(g, x) = 0 for every generator g}, in Howell form."""
        R = self.R
        A = [[R.dot([R.conj[a] for a in g], [self.H[i][j] for i in range(self.n)])
              for j in range(self.n)] for g in rows]
        if not A:
            return howell(R, [[R.one if i == j else 0 for j in range(self.n)] for i in range(self.n)])
        return howell(R, smith_kernel(R, A))

    def is_self_dual(self, label):
        return self.dual(label) == label

    def contains(self, big, small):
        return howell(self.R, list(big) + list(small)) == tuple(big)

    # subspaces of (O/p)^n
    def field_rref(self, rows):
        """RREF over F_{p^2} = O/p of encoded vectors."""
        F = self.F
        rows = [list(r) for r in rows]
        r = 0
        for c in range(self.n):
            piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            rows[r] = F.vscale(F.inv[rows[r][c]], rows[r])
            for i in range(len(rows)):
                if i != r and rows[i][c]:
                    rows[i] = F.vsub(rows[i], F.vscale(rows[i][c], rows[r]))
            r += 1
        return tuple(tuple(x) for x in rows[:r])

    def perp(self, W):
        """W^perp in (O/p)^n as an RREF basis."""
        F = self.F
        A = [[F.dot([F.conj[a] for a in w], [self.Hbar[i][j] for i in range(self.n)])
              for j in range(self.n)] for w in W]
        return self.field_rref(_field_kernel(F, A, self.n))

    def isotropic_subspaces(self, dim):
        if dim in self._isotropic:
            return self._isotropic[dim]
        F = self.F
        if dim == 1:
            out = []
            for v in product(range(F.size), repeat=self.n):
                lead = next((x for x in v if x), None)
                if lead != F.one:
                    continue
                if self.herm(v, v, F) == 0:
                    out.append((tuple(v),))
        elif dim == 2:
            # a plane is spanned by two orthogonal isotropic lines, and its
            # lines are exactly the isotropic lines orthogonal to both
            lines = [l for (l,) in self.isotropic_subspaces(1)]
            Z = self._orthogonality(lines)
            done = set()
            out = []
            for i in range(len(lines)):
                for j in np.nonzero(Z[i])[0]:
                    if j <= i or (i, j) in done:
                        continue
                    ks = np.nonzero(Z[i] & Z[j])[0].tolist()
                    done.update((a, b) for a in ks for b in ks)
                    out.append(self.field_rref([lines[i], lines[j]]))
            out.sort()
        else:
            raise NotImplementedError("only lines and planes occur in rank five")
        self._isotropic[dim] = out
        return out

    def _orthogonality(self, vecs):
        """Boolean matrix of herm(u, v) = 0 over O/p, computed in Z[rho] with numpy."""
        F, p = self.F, self.p
        V = np.array([[F.pairs[x] for x in v] for v in vecs], dtype=np.int64)
        H = np.array([[F.pairs[x] for x in row] for row in self.Hbar], dtype=np.int64)
        a, b = V[..., 0], V[..., 1]
        c1, c2 = _zrho_matmul(a + b, -b, H[..., 0], H[..., 1])
        g1, g2 = _zrho_matmul(c1, c2, a.T, b.T)
        return (g1 % p == 0) & (g2 % p == 0)

    def distance_one_vertices(self):
        return self.isotropic_subspaces(1) + self.isotropic_subspaces(2)

    def _lift(self, v):
        return [self.R.lift_from(self.F, x) for x in v]

    def p_times(self, vecs):
        R = self.R
        return [[R.pmul[x] for x in self._lift(v)] for v in vecs]

    def base_label(self):
        """x0 itself: p O^n mod p^2."""
        I = [[self.F.one if i == j else 0 for j in range(self.n)] for i in range(self.n)]
        return howell(self.R, self.p_times(I))

    def labels_over(self, W):
        """All self-dual M with M mod p = W: generators w_i + p z_i and p W^perp.

        z is taken in a complement of W^perp dual to W; the isotropy of the
        generators mod p^2 is D + D^dagger = -h/p for D_ij = <w_i, z_j>,
        whose solutions form a coset of the skew-Hermitian matrices.
        """
        R, F, p = self.R, self.F, self.p
        a = len(W)
        V = self._dual_complement(W)
        w = [self._lift(x) for x in W]
        h = [[R.div_p(self.herm(w[i], w[j]), 1) for j in range(a)] for i in range(a)]
        h = [[R.reduce_to(F, x) for x in row] for row in h]
        half = F.inv[F.enc(2, 0)]
        theta = F.enc(-1, 2)  # rho - conj(rho), skew
        base = [[F.mul[F.neg[h[i][j]]][half] for j in range(a)] for i in range(a)]
        tail = self.p_times(self.perp(W))
        out = []
        for K in _hermitian_matrices(F, a, p):
            D = [[F.add[base[i][j]][F.mul[theta][K[i][j]]] for j in range(a)] for i in range(a)]
            gens = []
            for i in range(a):
                # z_i = sum_k c_ik v_k with c_ik = D_ki
                z = [0] * self.n
                for kk in range(a):
                    z = F.vadd(z, F.vscale(D[kk][i], V[kk]))
                gens.append(R.vadd(w[i], [R.pmul[x] for x in self._lift(z)]))
            out.append(howell(R, gens + tail))
        return out

    def _dual_complement(self, W):
        """v_1..v_a with herm(w_i, v_j) = delta_ij over O/p."""
        F = self.F
        a = len(W)
        A = [[F.dot([F.conj[x] for x in w], [self.Hbar[i][j] for i in range(self.n)])
              for j in range(self.n)] for w in W]
        out = []
        for j in range(a):
            rhs = [F.one if i == j else 0 for i in range(a)]
            out.append(_field_solve(F, A, rhs, self.n))
        return out

    def labels(self, types=(1, 2)):
        """Every self-dual label at distance two, with its W, in a fixed order."""
        for a in types:
            for W in self.isotropic_subspaces(a):
                for lab in self.labels_over(W):
                    yield lab, W

    def reduction(self, label):
        """M mod p as an RREF subspace of (O/p)^n."""
        rows = [[self.R.reduce_to(self.F, x) for x in r] for r in label]
        return self.field_rref([r for r in rows if any(r)])

    def between(self, label, W):
        """True if the distance-one vertex W is adjacent to the label (p lift(W^perp) in M)."""
        return self.contains(label, self.p_times(self.perp(W)))

    def midpoint(self, label):
        """The minimal distance-one vertex between x0 and the label."""
        return self.reduction(label)

    def vertex_pair(self, W):
        """(M1, M2) for a distance-one vertex: M2 = lift(W) + pO^n, M1 = dual(p M2)."""
        R = self.R
        pO = [list(r) for r in self.base_label()]
        M2 = howell(R, [self._lift(w) for w in W] + pO)
        pM2 = [[R.pmul[x] for x in r] for r in M2]
        return self.dual(pM2), M2

    def partition(self, types=(1, 2)):
        """{W: [labels whose midpoint is W]}."""
        out = defaultdict(list)
        for lab, W in self.labels(types):
            out[W].append(lab)
        return dict(out)


def _zrho_matmul(a1, a2, b1, b2):
    """(a1 + a2 rho)(b1 + b2 rho) for integer matrices, with rho^2 = rho - 2."""
    p11, p22 = a1 @ b1, a2 @ b2
    return p11 - 2 * p22, a1 @ b2 + a2 @ b1 + p22


def _hermitian_matrices(F, a, p):
    """All a x a Hermitian matrices over F_{p^2} (diagonal in F_p)."""
    diag_vals = [F.enc(x, 0) for x in range(p)]
    off = list(range(F.size))
    n_off = a * (a - 1) // 2
    for d in product(diag_vals, repeat=a):
        for o in product(off, repeat=n_off):
            K = [[0] * a for _ in range(a)]
            it = iter(o)
            for i in range(a):
                K[i][i] = d[i]
                for j in range(i + 1, a):
                    x = next(it)
                    K[i][j] = x
                    K[j][i] = F.conj[x]
            yield K


def _field_rref_aug(F, A, ncols):
    rows = [list(r) for r in A]
    piv = []
    r = 0
    for c in range(ncols):
        i = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if i is None:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        rows[r] = F.vscale(F.inv[rows[r][c]], rows[r])
        for i2 in range(len(rows)):
            if i2 != r and rows[i2][c]:
                rows[i2] = F.vsub(rows[i2], F.vscale(rows[i2][c], rows[r]))
        piv.append(c)
        r += 1
    return rows, piv


def _field_kernel(F, A, n):
    if not A:
        return [[F.one if i == j else 0 for j in range(n)] for i in range(n)]
    rows, piv = _field_rref_aug(F, A, n)
    free = [c for c in range(n) if c not in piv]
    out = []
    for f in free:
        v = [0] * n
        v[f] = F.one
        for i, c in enumerate(piv):
            v[c] = F.neg[rows[i][f]]
        out.append(v)
    return out


def _field_solve(F, A, rhs, n):
    aug = [list(r) + [b] for r, b in zip(A, rhs)]
    rows, piv = _field_rref_aug(F, aug, n)
    if any(row[n] for row in rows[len(piv):]):
        raise ValueError("inconsistent system")
    v = [0] * n
    for i, c in enumerate(piv):
        v[c] = rows[i][n]
    return v


def paper_fibers(model, W, labels_by_w):
    """All distance-two labels adjacent to W: the fibre as the closed formula counts it."""
    F = model.F
    out = []
    for W2, labs in labels_by_w.items():
        sub = model.field_rref(list(W2) + list(W))
        if len(sub) == len(W):
            out.extend(labs)
    return out


# ---------------------------------------------------------------- brute force oracle

def _span_set(R, gens, n):
    """Element set of the span of gens, as a frozenset of integer keys (numpy sumsets)."""
    m = R.m
    pairs = np.array(R.pairs)
    mul = np.array(R.mul)
    elems = np.zeros((1, 2 * n), dtype=np.int64)
    for g in gens:
        mults = pairs[mul[:, g]].reshape(R.size, 2 * n)
        mults = np.unique(mults, axis=0)
        elems = (elems[:, None, :] + mults[None, :, :]).reshape(-1, 2 * n) % m
        elems = np.unique(elems, axis=0)
    keys = elems @ (m ** np.arange(2 * n, dtype=np.int64))
    return frozenset(keys.tolist())


def brute_force_self_dual(p, H):
    """Self-dual submodules of (O/p^2)^n for n <= 3 found without the W-parametrisation.

    A submodule of size p^(2n) is p O^n or R x + p V with x primitive and V a
    hyperplane of (O/p)^n through x mod p.  Each candidate is tested for total
    isotropy mod p^2 and stored as its element set.
    """
    model = InertModel(p, H)
    R, F, n = model.R, model.F, model.n
    if n > 3:
        raise ValueError("brute force is limited to rank three")
    found = {_span_set(R, model.base_label(), n)}
    normals = [v for v in product(range(F.size), repeat=n)
               if next((x for x in v if x), None) == F.one]
    for x in product(range(R.size), repeat=n):
        # x up to units: first coordinate of valuation zero equal to 1
        lead = next((c for c in x if R.val[c] == 0), None)
        if lead != R.one or any(R.val[c] == 0 for c in x[:x.index(lead)]):
            continue
        if model.herm(x, x) != 0:
            continue
        xbar = [R.reduce_to(F, c) for c in x]
        for f in normals:
            if F.dot(list(f), xbar):
                continue
            V = _field_kernel(F, [list(f)], n)
            pv = model.p_times(V)
            gens = [list(x)] + pv
            if any(model.herm(a, b) for a in gens for b in gens):
                continue
            elems = _span_set(R, gens, n)
            if len(elems) == p ** (2 * n):
                found.add(elems)
    return found


def label_element_set(model, label):
    return _span_set(model.R, [list(r) for r in label], model.n)


# ---------------------------------------------------------------- valency tables

def _qfact(q, dims):
    """Number of flags 0 < V_1 < ... < V_r < F_q^N with the given dimensions."""
    out = 1
    prev = 0
    steps = list(dims) + [N]
    rest = N
    for d in steps:
        out *= gaussian_binomial(rest, d - prev, q)
        rest -= d - prev
        prev = d
    return out


SPLIT_SHAPES = ("01", "02", "012", "013", "0123", "01234")


def _rotation_class(t):
    """Canonical cyclic shape of a set of types mod 5 (as the lexicographically least rotation)."""
    best = None
    for s in range(N):
        r = tuple(sorted((x - s) % N for x in t))
        if r[0] == 0 and (best is None or r < best):
            best = r
    return "".join(map(str, best))


def split_valency_by_flags(q):
    """Simplices through a vertex, grouped by cyclic shape, counted as flags."""
    out = Counter()
    for r in range(1, N):
        for dims in combinations(range(1, N), r):
            out[_rotation_class((0,) + dims)] += _qfact(q, dims)
    return dict(out)


def valency_table(q, case):
    """Closed-form valencies.  Keys: (vertex type, simplex type) and a few extras."""
    if case == "split":
        t = {
            (0, "01"): 2 * (q ** 5 - 1) // (q - 1),
            (0, "02"): 2 * (q ** 5 - 1) * (q ** 4 - 1) // ((q ** 2 - 1) * (q - 1)),
            (0, "012"): 3 * (q ** 5 - 1) * (q ** 4 - 1) // (q - 1) ** 2,
            (0, "013"): 3 * (q ** 5 - 1) * (q ** 4 - 1) * (q ** 3 - 1) // ((q ** 2 - 1) * (q - 1) ** 2),
            (0, "0123"): 4 * (q ** 5 - 1) * (q ** 4 - 1) * (q ** 3 - 1) // (q - 1) ** 3,
            (0, "01234"): ((q ** 5 - 1) * (q ** 4 - 1) * (q ** 3 - 1) * (q ** 2 - 1)) // (q - 1) ** 4,
            ("panel", "chambers"): q + 1,
        }
        return t
    if case == "inert":
        return {
            (0, "012"): (q ** 2 + 1) * (q ** 3 + 1) * (q ** 5 + 1),
            (0, "01"): (q ** 2 + 1) * (q ** 5 + 1),
            (0, "02"): (q ** 3 + 1) * (q ** 5 + 1),
            (1, "012"): (q + 1) * (q ** 3 + 1),
            (1, "01"): q + 1,
            (1, "12"): q ** 3 + 1,
            (2, "012"): (q + 1) * (q ** 2 + 1) * (q ** 3 + 1),
            (2, "02"): (q + 1) * (q ** 3 + 1),
            (2, "12"): (q ** 2 + 1) * (q ** 3 + 1),
            ("01", "chambers"): q ** 3 + 1,
            ("02", "chambers"): q ** 2 + 1,
            ("12", "chambers"): q + 1,
        }
    raise ValueError("case must be 'split' or 'inert'")
