"""Gate elements: solutions of iota(x) x = p^e in Lambda_max outside O_E.

Solutions are found by enumerating short iota-fixed elements gamma of the
order, matching their characteristic polynomials against a list of
candidate quintic fields, and rebuilding x = alpha(gamma) + rho beta(gamma).
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import exact
from .algebra import AlgebraElem, charpoly, eta, iota, verify_norm_equation
from .orders import OrderBundle, lambda_max_contains
from .tower import DEGREE, RHO11, RHO2, EElem, LElem, MElem

log = logging.getLogger(__name__)

DISC_CONSTANT = Fraction("0.134288")


class CandidateError(ValueError):
    """Raised for a malformed candidate file."""


@dataclass(frozen=True)
class CandidateEntry:
    gamma_minpoly: tuple  # 6 integers, leading coefficient first
    disc: int
    alpha_expr: tuple  # 5 rationals, coefficient of gamma^4 first
    beta_expr: tuple
    target: int
    source_id: str = ""

    def x_from_gamma(self, g):
        """alpha(gamma) + rho beta(gamma) for gamma in D."""
        powers = [AlgebraElem.scalar(1)]
        for _ in range(DEGREE - 1):
            powers.append(powers[-1] * g)
        a = _eval_desc(self.alpha_expr, powers)
        b = _eval_desc(self.beta_expr, powers)
        return a + b * RHO2

    def x_conj_from_gamma(self, g):
        """alpha(gamma) + rhobar beta(gamma), which equals iota of ``x_from_gamma``."""
        return iota(self.x_from_gamma(g))

    def to_dict(self):
        return {
            "gamma_minpoly": [str(c) for c in self.gamma_minpoly],
            "disc": str(self.disc),
            "alpha_expr": [str(c) for c in self.alpha_expr],
            "beta_expr": [str(c) for c in self.beta_expr],
            "target": str(self.target),
            "source_id": self.source_id,
        }


def _eval_desc(coeffs, powers):
    out = AlgebraElem()
    for c, pw in zip(coeffs, reversed(powers)):
        if c:
            out = out + pw * Fraction(c)
    return out


# ---------------------------------------------------------------- polynomials over Q

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b):
    """Product of low-to-high coefficient lists."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pmod(a, f):
    """Remainder of a modulo the monic f (both low to high)."""
    a = _trim(a)
    d = len(f) - 1
    while len(a) > d:
        t = a[-1]
        shift = len(a) - 1 - d
        for i, c in enumerate(f):
            a[shift + i] -= t * c
        a = _trim(a)
    return a


def _pmod_p(a, f, p):
    a = _trim([x % p for x in a])
    d = len(f) - 1
    while len(a) > d:
        t = a[-1]
        shift = len(a) - 1 - d
        for i, c in enumerate(f):
            a[shift + i] = (a[shift + i] - t * c) % p
        a = _trim(a)
    return a


def irreducible_mod2(desc):
    """True if the monic integer polynomial (leading first) is irreducible over F_2.

    Exhaustive check against every monic divisor of degree up to half the degree.
    """
    f = [c % 2 for c in reversed(desc)]
    deg = len(f) - 1
    if f[-1] != 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product((0, 1), repeat=d):
            g = list(low) + [1]
            if not _pmod_p(f, g, 2):
                return False
    return True


def norm_identity_holds(entry):
    """alpha^2 + alpha beta + 2 beta^2 = target modulo the minimal polynomial."""
    f = list(reversed(entry.gamma_minpoly))
    a = list(reversed([Fraction(c) for c in entry.alpha_expr]))
    b = list(reversed([Fraction(c) for c in entry.beta_expr]))
    lhs = [x + y + 2 * z for x, y, z in
           _zip_pad(_pmul(a, a), _pmul(a, b), _pmul(b, b))]
    lhs[0] -= entry.target
    return not _pmod(lhs, f)


def _zip_pad(*lists):
    n = max(len(x) for x in lists)
    return zip(*[list(x) + [0] * (n - len(x)) for x in lists])


def validate_candidate(entry):
    """Reason string if the entry is invalid, else None."""
    mp = entry.gamma_minpoly
    if len(mp) != DEGREE + 1 or mp[0] != 1:
        return "minimal polynomial must be a monic quintic"
    if not irreducible_mod2(mp):
        return "minimal polynomial is reducible mod 2"
    if len(entry.alpha_expr) != DEGREE or len(entry.beta_expr) != DEGREE:
        return "alpha and beta need five coefficients"
    if not norm_identity_holds(entry):
        return "alpha^2 + alpha beta + 2 beta^2 != target modulo the minimal polynomial"
    return None


def _parse_entry(obj):
    try:
        return CandidateEntry(
            gamma_minpoly=tuple(int(c) for c in obj["gamma_minpoly"]),
            disc=int(obj["disc"]),
            alpha_expr=tuple(Fraction(c) for c in obj["alpha_expr"]),
            beta_expr=tuple(Fraction(c) for c in obj["beta_expr"]),
            target=int(obj["target"]),
            source_id=str(obj.get("source_id", "")),
        )
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise CandidateError(f"bad candidate entry: {exc}") from exc


def load_candidates(path, return_rejected=False):
    """Read and validate a JSON candidate file.

    Invalid entries are dropped with a logged reason; with ``return_rejected``
    the result is ``(valid, [(entry, reason), ...])``.
    """
    with open(path) as fh:
        text = fh.read()
    data = json.loads(text) if text.strip() else []
    if not isinstance(data, list):
        raise CandidateError("candidate file must hold a JSON array")
    valid, rejected = [], []
    for obj in data:
        if not isinstance(obj, dict):
            raise CandidateError("candidate entries must be JSON objects")
        entry = _parse_entry(obj)
        reason = validate_candidate(entry)
        if reason is None:
            valid.append(entry)
        else:
            log.warning("rejected candidate %s: %s", entry.source_id, reason)
            rejected.append((entry, reason))
    return (valid, rejected) if return_rejected else valid


def save_candidates(entries, path):
    with open(path, "w") as fh:
        json.dump([e.to_dict() for e in entries], fh, indent=1)


def worked_candidate():
    """The quintic candidate used for the p = 11 example."""
    f = Fraction
    return CandidateEntry(
        gamma_minpoly=(1, 0, -17, 21, 21, -25),
        disc=89417,
        alpha_expr=(f(1, 11), f(2, 11), f(-8, 11), f(3, 11), f(-17, 11)),
        beta_expr=(f(-3, 11), f(-4, 11), f(43, 11), f(-9, 11), f(-42, 11)),
        target=11,
        source_id="5.5.89417.1",
    )


# coordinates (in the B_max basis) of the short gamma behind the p = 11 example
WORKED_X_VEC = (-2, -3, 7, 1, 1, 7, -1, 6, 5, -5, -5, -3, -1, -7, -1,
                177, -39, -138, -87, -136, -41, -62, -39, -17, 130)


def worked_gate(bundle):
    """The p = 11 example as a scaled gate (not checked for membership)."""
    g = bundle.gamma_from_vec(WORKED_X_VEC)
    x = worked_candidate().x_from_gamma(g)
    return GateElement(x, rho_p(11).conj().inverse(), "worked")


def disc_bound(p, e, ramified7=False):
    """Upper bound on the discriminant of a quintic field housing a solution."""
    base = Fraction(4 * p ** e) if ramified7 else Fraction(4 * p ** e, 7)
    return DISC_CONSTANT * base ** 10


def sufficiency_bound(p, e):
    """Trd(gamma^2) bound under which some gamma for every solution shows up."""
    return Fraction(35 * p ** e, 2)


# ---------------------------------------------------------------- solving

@dataclass
class SolveReport:
    bound: Fraction
    enumerated: int = 0
    prefilter_hits: int = 0
    charpoly_matches: list = field(default_factory=list)  # (x_vec, candidate index)
    norm_failures: list = field(default_factory=list)
    membership_failures: list = field(default_factory=list)
    solutions: list = field(default_factory=list)
    exceeds_sufficiency: bool = False


def _trd_linear_form(bundle):
    """Coefficients c with Trd(gamma) = c . x for gamma = bundle.gamma_from_vec(x)."""
    out = []
    for col in exact.transpose(bundle.bmax):
        t = MElem(col[0:5]).trace()
        out.append(int(t) if t.denominator == 1 else t)
    return out


def _prefilter_index(candidates):
    """(t^4 coefficient, t^3 coefficient) -> candidate indices."""
    index = {}
    for i, c in enumerate(candidates):
        index.setdefault((c.gamma_minpoly[1], c.gamma_minpoly[2]), []).append(i)
    return index


def _scan(args):
    """Worker: enumerate one subtree and return (count, prefilter hits)."""
    gram, bound, top, trd, keys = args
    n = 0
    hits = []
    for x, q in exact.enumerate_short(gram, bound, top_values=top):
        n += 1
        t1 = sum(a * b for a, b in zip(trd, x))
        c4 = -t1
        c3 = (t1 * t1 - q) / 2
        for sign in (1, -1):
            if (sign * c4, c3) in keys:
                hits.append((tuple(sign * v for v in x), (sign * c4, c3)))
    return n, hits


class NumericCharpoly:
    """Floating point charpoly of gamma_from_vec(x) through one complex embedding.

    Only a sieve in front of the exact charpoly: a vector is passed on when
    every coefficient is within 1/4 of the candidate's.
    """

    def __init__(self, bundle):
        roots = np.roots([1, -1, -4, 3, 3, -1])
        a = float(min(r.real for r in roots if abs(r.imag) < 1e-12))
        rho = complex(0.5, 7 ** 0.5 / 2)

        def emb(l):
            m0 = sum(float(c) * a ** k for k, c in enumerate(l.m0.c))
            m1 = sum(float(c) * a ** k for k, c in enumerate(l.m1.c))
            return m0 + m1 * rho

        mats = []
        for i in range(len(bundle.bmax[0])):
            unit = [0] * len(bundle.bmax[0])
            unit[i] = 1
            m = eta(bundle.gamma_from_vec(unit))
            mats.append([[emb(v) for v in row] for row in m])
        self.mats = np.array(mats, dtype=complex)

    def __call__(self, x):
        m = np.tensordot(np.asarray(x, dtype=float), self.mats, axes=1)
        return np.poly(m)

    def close_to(self, x, target):
        c = self(x)
        return bool(np.all(np.abs(c - np.asarray(target, dtype=float)) < 0.25))


def _sign_key(v):
    neg = [-c for c in v]
    return max(list(v), neg)


def solve_norm_equation_report(bundle, p, e, bound, candidates, workers=1):
    """Full search with diagnostics; see ``solve_norm_equation``."""
    bound = Fraction(bound)
    target = p ** e
    report = SolveReport(bound=bound)
    report.exceeds_sufficiency = bound > sufficiency_bound(p, e)
    if report.exceeds_sufficiency:
        log.warning("bound %s exceeds the sufficiency bound %s", bound, sufficiency_bound(p, e))
    cands = [c for c in candidates if c.target == target]
    if bound <= 0 or not cands:
        return report
    index = _prefilter_index(cands)
    trd = _trd_linear_form(bundle)
    gram = bundle.qmax
    parts = max(1, workers) * 4 if workers > 1 else 1
    plan = exact.search_partition(gram, bound, parts) if parts > 1 else [None]
    jobs = [(gram, bound, top, trd, set(index)) for top in plan]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_scan, jobs))
    else:
        results = [_scan(j) for j in jobs]
    hits = []
    for n, h in results:
        report.enumerated += n
        hits.extend(h)
    hits.sort()
    report.prefilter_hits = len(hits)
    found = {}
    sieve = NumericCharpoly(bundle) if hits else None
    for x, key in hits:
        if not any(sieve.close_to(x, cands[ci].gamma_minpoly) for ci in index[key]):
            continue
        g = bundle.gamma_from_vec(x)
        cp = charpoly(g)
        if any(not c.r.denominator == 1 or c.s for c in cp):
            continue
        cp = tuple(int(c.r) for c in cp)
        for ci in index[key]:
            cand = cands[ci]
            if cp != cand.gamma_minpoly:
                continue
            report.charpoly_matches.append((x, ci))
            for sol in (cand.x_from_gamma(g), cand.x_conj_from_gamma(g)):
                vec = sol.to_vector()
                if not verify_norm_equation(sol, target):
                    report.norm_failures.append(vec)
                    continue
                if not lambda_max_contains(bundle, sol):
                    report.membership_failures.append(vec)
                    continue
                key_vec = tuple(_sign_key(vec))
                found.setdefault(key_vec, AlgebraElem.from_vector(list(key_vec)))
    report.solutions = [found[k] for k in sorted(found)]
    return report


def solve_norm_equation(bundle, p, e, bound, candidates, workers=1):
    """Solutions x in Lambda_max of iota(x) x = p^e found from short gamma.

    Every short iota-fixed gamma (Q_max(x_vec) <= bound) whose characteristic
    polynomial equals a candidate's is turned into alpha(gamma) + rho beta(gamma)
    and into its iota-conjugate; those that solve the equation and lie in
    Lambda_max are kept, one per pair {x, -x}, in a fixed order.
    """
    return solve_norm_equation_report(bundle, p, e, bound, candidates, workers).solutions


# ---------------------------------------------------------------- gates

def rho_p(p):
    """Fixed generator of norm p in O_E for split p (rho_11 = 1 + 2 rho)."""
    if p == 11:
        return RHO11
    for y in range(1, p + 1):
        for x in sorted(range(-p, p + 1), key=lambda v: (abs(v), v < 0)):
            if x * x + x * y + 2 * y * y == p:
                return EElem(x, y)
    raise ValueError(f"{p} is not a norm from O_E")


def is_split(p):
    return p % 7 in (1, 2, 4)


def exponent_for(p):
    if p in (2, 7):
        raise ValueError("p must differ from 2 and 7")
    return 1 if is_split(p) else 2


def in_o_e(x):
    """True if x lies in O_E (support only on the coordinates of 1 and rho)."""
    v = x.to_vector()
    return (all(c == 0 for i, c in enumerate(v) if i not in (0, 5))
            and all(Fraction(v[i]).denominator == 1 for i in (0, 5)))


@dataclass
class GateElement:
    g: AlgebraElem
    scale: EElem
    source: str = ""
    label: object = None

    def element(self):
        return self.g * self.scale

    def to_dict(self):
        quint = []
        for l in self.g.l:
            quint.append([str(c) for c in l.m0.c])
            quint.append([str(c) for c in l.m1.c])
        return {"g": quint, "scale": [str(self.scale.r), str(self.scale.s)],
                "source": self.source,
                "label": None if self.label is None else [list(r) for r in self.label]}

    @classmethod
    def from_dict(cls, d):
        q = [MElem([Fraction(c) for c in row]) for row in d["g"]]
        g = AlgebraElem([LElem(q[2 * i], q[2 * i + 1]) for i in range(DEGREE)])
        scale = EElem(Fraction(d["scale"][0]), Fraction(d["scale"][1]))
        label = d.get("label")
        label = None if label is None else tuple(tuple(r) for r in label)
        return cls(g, scale, d.get("source", ""), label)


def gates_from_solutions(p, e, solutions, source=""):
    """Scale non-central solutions into gates; central ones are dropped."""
    if e == 1:
        scale = rho_p(p).conj().inverse()
    else:
        scale = EElem(Fraction(1, p))
    return [GateElement(x, scale, source) for x in solutions if not in_o_e(x)]


def save_gates(gates, path):
    with open(path, "w") as fh:
        json.dump([g.to_dict() for g in gates], fh, indent=1, sort_keys=True)


def load_gates(path):
    with open(path) as fh:
        return [GateElement.from_dict(d) for d in json.load(fh)]


def gaussian_binomial(n, k, q):
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def gate_count_formula(p):
    """Theoretical gate count: split sum of Gaussian binomials, inert closed form."""
    if p in (2, 7):
        raise ValueError("p must differ from 2 and 7")
    if is_split(p):
        return sum(gaussian_binomial(5, i, p) for i in range(1, 5))
    return (p * (p ** 2 + 1) * (p ** 5 + 1)
            + ((p + 1) * (p ** 3 + 1) - 1) * (p ** 3 + 1) * (p ** 5 + 1))


def inert_label_count(p):
    """Number of self-dual labels at distance 2 for inert p, each counted once.

    Lines contribute p lifts each and planes p^4; ``gate_count_formula`` instead
    lists every line-type label again under each of the p^3 + 1 planes through it.
    """
    if is_split(p) or p in (2, 7):
        raise ValueError("p must be inert")
    lines = (p ** 5 + 1) * (p ** 2 + 1)
    planes = (p ** 5 + 1) * (p ** 3 + 1)
    return p * lines + p ** 4 * planes


def load_bundle(path=None):
    """Order data from a cache file, or freshly computed."""
    if path is None:
        return OrderBundle.build()
    with open(path) as fh:
        return OrderBundle.from_json(fh.read())
