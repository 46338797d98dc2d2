"""Exact derivation pipeline for ideal triangulations of knot complements.

From a triangulation table (per-tetrahedron sign, edge labels, face labels)
this module derives, in exact rational arithmetic:

  * the kinematical data: the face-variable solution and the symmetric
    integer matrix Q,
  * the shape-occurrence matrices (Abar, Bbar, Cbar) counting angle letters
    around each edge,
  * a balanced angle family solving the edge conditions (angles around each
    edge total (2, 1)),
  * the gluing system 1 - x_i = sigma_i eps^{m_i} prod_j x_j^{N_ij} together
    with the norm-exponent vector e(s) = v s + w and the t-coefficient.

Angles live in C = R x F^x and are written as pairs (dot, ddot).  The dot
part is a rational number, the ddot part a formal monomial in multiplicative
generators; pi = (1, -1) contributes an order-2 generator tau = -1 to the
ddot side.  Per tetrahedron a + b + c = pi, so b is eliminated everywhere via
bdot = 1 - adot - cdot and bddot = tau / (addot * cddot).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import rank, rref, solve_unique

# angle letter carried by each of the six edge slots (01,02,03,12,13,23)
LETTER_OF_SLOT = ("a", "b", "c", "c", "b", "a")
SLOT_NAMES = ("01", "02", "03", "12", "13", "23")
FACE_NAMES = ("012", "013", "023", "123")


class TriangulationError(ValueError):
    pass


class DerivationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# symbolic scalars: affine forms (dot parts) and monomials (ddot parts)


class AffineForm:
    """A rational affine combination  const + sum coeffs[sym] * sym."""

    __slots__ = ("const", "coeffs")

    def __init__(self, const=0, coeffs=None):
        self.const = Fraction(const)
        self.coeffs = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v != 0:
                    self.coeffs[k] = v

    @classmethod
    def symbol(cls, name):
        return cls(0, {name: 1})

    def __add__(self, other):
        if not isinstance(other, AffineForm):
            other = AffineForm(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return AffineForm(self.const + other.const, out)

    def __sub__(self, other):
        return self + (other * -1 if isinstance(other, AffineForm)
                       else AffineForm(-Fraction(other)))

    def __rsub__(self, other):
        return AffineForm(other) + self * -1

    __radd__ = __add__

    def __mul__(self, k):
        k = Fraction(k)
        return AffineForm(self.const * k,
                          {s: v * k for s, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, AffineForm):
            other = AffineForm(other)
        return self.const == other.const and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.const, tuple(sorted(self.coeffs.items()))))

    def is_constant(self):
        return not self.coeffs

    def substitute(self, table):
        """Replace symbols by AffineForms from `table` (missing = itself)."""
        out = AffineForm(self.const)
        for s, v in self.coeffs.items():
            out = out + table.get(s, AffineForm.symbol(s)) * v
        return out

    def evaluate(self, values):
        total = self.const
        for s, v in self.coeffs.items():
            total += v * Fraction(values[s])
        return total

    def __repr__(self):
        parts = [] if self.const == 0 else [str(self.const)]
        for s in sorted(self.coeffs):
            parts.append(f"{self.coeffs[s]}*{s}")
        return " + ".join(parts) if parts else "0"


class Monomial:
    """tau^parity * prod sym^powers[sym], with tau the order-2 sign -1."""

    __slots__ = ("powers", "tau")

    def __init__(self, powers=None, tau=0):
        self.powers = {}
        if powers:
            for k, v in powers.items():
                v = int(v)
                if v != 0:
                    self.powers[k] = v
        self.tau = int(tau) % 2

    @classmethod
    def symbol(cls, name):
        return cls({name: 1})

    def __mul__(self, other):
        out = dict(self.powers)
        for k, v in other.powers.items():
            out[k] = out.get(k, 0) + v
        return Monomial(out, self.tau + other.tau)

    def __pow__(self, k):
        k = int(k)
        return Monomial({s: v * k for s, v in self.powers.items()},
                        self.tau * k)

    def __eq__(self, other):
        return (isinstance(other, Monomial) and self.powers == other.powers
                and self.tau == other.tau)

    def __hash__(self):
        return hash((self.tau, tuple(sorted(self.powers.items()))))

    def is_one(self):
        return not self.powers and self.tau == 0

    def substitute(self, table):
        out = Monomial(tau=self.tau)
        for s, v in self.powers.items():
            out = out * table.get(s, Monomial.symbol(s)) ** v
        return out

    def __repr__(self):
        parts = ["tau"] * self.tau
        for s in sorted(self.powers):
            e = self.powers[s]
            parts.append(s if e == 1 else f"{s}^{e}")
        return "*".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class Tetrahedron:
    sign: int
    edge_ids: tuple
    face_ids: tuple

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise TriangulationError(f"bad sign {self.sign}")
        if len(self.edge_ids) != 6:
            raise TriangulationError("need exactly 6 edge labels")
        if len(self.face_ids) != 4:
            raise TriangulationError("need exactly 4 face labels")
        for lab in (*self.edge_ids, *self.face_ids):
            if not isinstance(lab, int) or lab < 0:
                raise TriangulationError(f"bad label {lab!r}")


@dataclass(frozen=True)
class PeripheralSpec:
    """Integer combinations of angle symbols plus a multiple of pi=(1,-1).

    Each curve is a list of (tet_index, letter, coeff) plus pi_mult.
    """
    lam_terms: tuple
    lam_pi: int
    mu_terms: tuple
    mu_pi: int


@dataclass(frozen=True)
class Triangulation:
    name: str
    tetrahedra: tuple
    peripheral: PeripheralSpec
    note: str = ""

    @property
    def num_tetrahedra(self):
        return len(self.tetrahedra)

    @property
    def num_edges(self):
        return 1 + max(e for t in self.tetrahedra for e in t.edge_ids)

    @property
    def num_faces(self):
        return 1 + max(f for t in self.tetrahedra for f in t.face_ids)


@dataclass(frozen=True)
class KinematicalData:
    face_solution: tuple   # face_solution[face][tet] : Fraction
    Q: tuple               # symmetric integer matrix, tuple of tuples


@dataclass(frozen=True)
class AngleFamily:
    basis: tuple                 # free angle symbols, e.g. ("a0","a1","c0")
    dot: dict                    # symbol ("a0","b0","c0",...) -> AffineForm
    ddot: dict                   # symbol -> Monomial over basis symbols
    lam_dot: AffineForm
    lam_ddot: Monomial
    mu_dot: AffineForm

    def dot_values(self, assignment):
        """Evaluate all dot angles at a rational assignment of the basis."""
        return {s: f.evaluate(assignment) for s, f in self.dot.items()}


@dataclass(frozen=True)
class GluingSystem:
    name: str
    r: int
    N: tuple                     # integer r x r matrix
    m: tuple                     # integer eps-exponents
    sigma: tuple                 # signs +-1
    e_slope: tuple               # v: rational r-vector
    e_offset: tuple              # w: rational r-vector
    t_coeff: AffineForm          # mu-dot as combination of dot angles
    degenerate_eps: tuple = ()   # known degenerate fibers (optional info)

    def e(self, s):
        return tuple(Fraction(v) * Fraction(s) + Fraction(w)
                     for v, w in zip(self.e_slope, self.e_offset))


# ---------------------------------------------------------------------------
# parsing


def parse_triangulation(text):
    """Parse the JSON triangulation document; validate combinatorics."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TriangulationError(f"not valid JSON: {exc}") from exc
    errors = []
    tets = []
    raw_tets = doc.get("tetrahedra", [])
    if not raw_tets:
        raise TriangulationError("no tetrahedra")
    for i, rt in enumerate(raw_tets):
        try:
            tets.append(Tetrahedron(sign=int(rt["sign"]),
                                    edge_ids=tuple(rt["edges"]),
                                    face_ids=tuple(rt["faces"])))
        except (KeyError, TriangulationError, TypeError, ValueError) as exc:
            errors.append(f"tetrahedron {i}: {exc}")
    if errors:
        raise TriangulationError("; ".join(errors))

    face_count = {}
    for t in tets:
        for f in t.face_ids:
            face_count[f] = face_count.get(f, 0) + 1
    bad = {f: c for f, c in face_count.items() if c != 2}
    if bad:
        raise TriangulationError(
            f"face labels must occur exactly twice, got {bad}")
    nfaces = 1 + max(face_count)
    if set(face_count) != set(range(nfaces)):
        raise TriangulationError("face labels must be 0..2N-1 without gaps")
    if nfaces != 2 * len(tets):
        raise TriangulationError("need exactly 2N face labels")

    def read_curve(node):
        terms = tuple((int(a), str(b), int(c)) for a, b, c in node["terms"])
        for ti, letter, _ in terms:
            if not (0 <= ti < len(tets)) or letter not in "abc":
                raise TriangulationError(f"bad peripheral term {(ti, letter)}")
        return terms, int(node.get("pi_mult", 0))

    per = doc.get("peripheral", {})
    lam_terms, lam_pi = read_curve(per["lambda"])
    mu_terms, mu_pi = read_curve(per["mu"])
    return Triangulation(
        name=str(doc.get("name", "")),
        tetrahedra=tuple(tets),
        peripheral=PeripheralSpec(lam_terms, lam_pi, mu_terms, mu_pi),
        note=str(doc.get("note", "")),
    )


# ---------------------------------------------------------------------------
# kinematical data


def kinematical_data(t):
    """Solve the face-variable delta relations; assemble the Q matrix.

    Per tetrahedron, with faces (f0,f1,f2,f3) in slot order (012,013,023,123),
    the kernel imposes x(f3) - x(f2) + x(f1) = 0 and x(f1) - x(f0) = -z_T,
    and contributes the pairing <x(f3); z_T>^sign.
    """
    n = t.num_tetrahedra
    nf = 2 * n
    a = [[Fraction(0)] * nf for _ in range(nf)]
    b = [[Fraction(0)] * n for _ in range(nf)]
    for i, tet in enumerate(t.tetrahedra):
        f0, f1, f2, f3 = tet.face_ids
        row = 2 * i
        a[row][f3] += 1
        a[row][f2] -= 1
        a[row][f1] += 1
        row = 2 * i + 1
        a[row][f1] += 1
        a[row][f0] -= 1
        b[row][i] = Fraction(-1)
    sol = solve_unique(a, b)
    if sol is None:
        raise DerivationError("kinematical system not uniquely solvable")
    face_solution = tuple(tuple(r) for r in sol)

    u = [[t.tetrahedra[i].sign * face_solution[t.tetrahedra[i].face_ids[3]][j]
          for j in range(n)] for i in range(n)]
    q = [[u[i][j] + u[j][i] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if q[i][j].denominator != 1:
                raise DerivationError("Q matrix is not integral")
    return KinematicalData(face_solution=face_solution,
                           Q=tuple(tuple(int(v) for v in row) for row in q))


def nz_matrices(t):
    """Shape-occurrence matrices (Abar, Bbar, Cbar), edges x tetrahedra."""
    ne, n = t.num_edges, t.num_tetrahedra
    mats = {letter: [[0] * n for _ in range(ne)] for letter in "abc"}
    for i, tet in enumerate(t.tetrahedra):
        for slot, edge in enumerate(tet.edge_ids):
            mats[LETTER_OF_SLOT[slot]][edge][i] += 1
    return (tuple(map(tuple, mats["a"])),
            tuple(map(tuple, mats["b"])),
            tuple(map(tuple, mats["c"])))


# ---------------------------------------------------------------------------
# angle balancing


def _angle_symbols(n):
    """Unknown symbols in letter-major order: a0..a_{n-1}, c0..c_{n-1}."""
    return [f"a{i}" for i in range(n)] + [f"c{i}" for i in range(n)]


def _edge_system(t):
    """Rows of the dot balancing system over (a_i, c_i), b eliminated."""
    abar, bbar, cbar = nz_matrices(t)
    n = t.num_tetrahedra
    rows, rhs = [], []
    for e in range(t.num_edges):
        row = [Fraction(abar[e][i] - bbar[e][i]) for i in range(n)]
        row += [Fraction(cbar[e][i] - bbar[e][i]) for i in range(n)]
        rows.append(row)
        rhs.append(Fraction(2 - sum(bbar[e])))
    return rows, rhs


def balance_angles(t, p=None):
    """Solve the edge conditions into an AngleFamily.

    Free symbols are chosen greedily in letter-major order (all a's first,
    then all c's): a symbol is kept free when the remaining undecided columns
    still span the row space of the balancing system.
    """
    if p is None:
        p = t.peripheral
    n = t.num_tetrahedra
    syms = _angle_symbols(n)
    rows, rhs = _edge_system(t)
    full_rank = rank(rows, range(2 * n))
    aug_rank = rank([r + [v] for r, v in zip(rows, rhs)], range(2 * n + 1))
    if aug_rank != full_rank:
        raise DerivationError("edge balancing system is inconsistent")
    nfree = 2 * n - full_rank

    free, undecided = [], list(range(2 * n))
    for idx in list(undecided):
        if len(free) == nfree:
            break
        others = [j for j in undecided if j != idx]
        if rank(rows, others) == full_rank:
            free.append(idx)
            undecided.remove(idx)
    if len(free) != nfree:
        raise DerivationError("could not select a free symbol basis")
    dep = undecided

    # dependents as affine forms in the frees:
    # rows[:, dep] * x_dep = rhs - rows[:, free] * x_free
    aug = []
    for r, v in zip(rows, rhs):
        aug.append([r[j] for j in dep] + [v] + [-r[j] for j in free])
    rref(aug, ncols=len(dep))
    dot = {}
    basis = tuple(syms[j] for j in free)
    for s in basis:
        dot[s] = AffineForm.symbol(s)
    for k, j in enumerate(dep):
        row = aug[k]
        dot[syms[j]] = AffineForm(
            row[len(dep)],
            {syms[free[i]]: row[len(dep) + 1 + i] for i in range(len(free))})

    ddot = {}
    for s in syms:
        f = dot[s]
        if s in basis:
            ddot[s] = Monomial.symbol(s)
            continue
        if f.const.denominator != 1 or any(
                v.denominator != 1 for v in f.coeffs.values()):
            raise DerivationError(
                f"ddot balancing not expressible with integer exponents ({s})")
        ddot[s] = Monomial({k: int(v) for k, v in f.coeffs.items()},
                           tau=int(f.const))
    for i in range(n):
        dot[f"b{i}"] = AffineForm(1) - dot[f"a{i}"] - dot[f"c{i}"]
        ddot[f"b{i}"] = (Monomial(tau=1) * ddot[f"a{i}"] ** -1
                         * ddot[f"c{i}"] ** -1)

    # verify every edge relation identically: dot sum 2, ddot product 1
    abar, bbar, cbar = nz_matrices(t)
    for e in range(t.num_edges):
        total_dot = AffineForm(0)
        total_ddot = Monomial()
        for i in range(n):
            for letter, mat in (("a", abar), ("b", bbar), ("c", cbar)):
                cnt = mat[e][i]
                if cnt:
                    total_dot = total_dot + dot[f"{letter}{i}"] * cnt
                    total_ddot = total_ddot * ddot[f"{letter}{i}"] ** cnt
        if total_dot != AffineForm(2) or not total_ddot.is_one():
            raise DerivationError(f"edge {e} relation fails after balancing")

    def curve(terms, pi_mult):
        d = AffineForm(pi_mult)
        dd = Monomial(tau=pi_mult)
        for ti, letter, coeff in terms:
            d = d + dot[f"{letter}{ti}"] * coeff
            dd = dd * ddot[f"{letter}{ti}"] ** coeff
        return d, dd

    lam_dot, lam_ddot = curve(p.lam_terms, p.lam_pi)
    mu_dot, _ = curve(p.mu_terms, p.mu_pi)
    if lam_dot.is_constant():
        raise DerivationError("longitude has constant dot part in this family")
    return AngleFamily(basis=basis, dot=dot, ddot=ddot, lam_dot=lam_dot,
                       lam_ddot=lam_ddot, mu_dot=mu_dot)


# ---------------------------------------------------------------------------
# gluing system


def _as_multiple(numer, denom_coeffs, what):
    """Express dict `numer` as k * dict `denom_coeffs`; exact, k rational."""
    if not numer:
        return Fraction(0)
    sym = next(iter(numer))
    if sym not in denom_coeffs:
        raise DerivationError(f"{what}: not a multiple of the reference form")
    k = Fraction(numer[sym]) / Fraction(denom_coeffs[sym])
    for s in set(numer) | set(denom_coeffs):
        if Fraction(numer.get(s, 0)) != k * Fraction(denom_coeffs.get(s, 0)):
            raise DerivationError(
                f"{what}: not a multiple of the reference form")
    return k


def gluing_system(t, f=None):
    """Derive 1 - x_i = sigma_i eps^{m_i} prod_j x_j^{N_ij} and e(s), t.

    The i-th delta equation is 1 - x_i = M_i prod_j x_j^{N_ij} with
    N = diag(sign) Q and prefactor M_i = [cddot_i prod_j addot_j^{s_j Q_ij}]
    ^{-s_i} (the change of variables divides by addot_j for positive
    tetrahedra and multiplies for negative ones).  Balancing reduces every
    M_i to sigma_i * lamddot^{m_i}; the norm weight prod |x_i|^{cdot_i - 1} /
    |1 - x_i|^{1 - adot_i} reduces on the fiber to |eps|^{-t} prod
    |x_j|^{e_j} with e(s) = v s + w affine in s = lamdot.
    """
    if f is None:
        f = balance_angles(t)
    kin = kinematical_data(t)
    n = t.num_tetrahedra
    signs = [tet.sign for tet in t.tetrahedra]
    nmat = [[signs[i] * kin.Q[i][j] for j in range(n)] for i in range(n)]

    lam = f.lam_ddot
    if not lam.powers:
        raise DerivationError("peripheral reduction failed: trivial lamddot")
    m, sigma = [], []
    for i in range(n):
        raw = Monomial({f"c{i}": 1})
        for j in range(n):
            raw = raw * Monomial({f"a{j}": signs[j] * kin.Q[i][j]})
        mono = (raw.substitute(f.ddot)) ** (-signs[i])
        mi = _as_multiple(mono.powers, lam.powers, "peripheral reduction")
        if mi.denominator != 1:
            raise DerivationError("peripheral reduction failed: "
                                  "non-integer longitude power")
        mi = int(mi)
        m.append(mi)
        sigma.append(1 if (mono.tau - mi * lam.tau) % 2 == 0 else -1)

    # norm exponents: e_j = (cdot_j - 1) - sum_i (1 - adot_i) N_ij
    v, w = [], []
    lam_lin = f.lam_dot.coeffs
    lam_const = f.lam_dot.const
    for j in range(n):
        ej = f.dot[f"c{j}"] - 1
        for i in range(n):
            if nmat[i][j]:
                ej = ej - (AffineForm(1) - f.dot[f"a{i}"]) * nmat[i][j]
        vj = _as_multiple(ej.coeffs, lam_lin, "norm-exponent reduction")
        v.append(vj)
        w.append(ej.const - vj * lam_const)

    # eps-norm exponent: t = sum_i m_i (1 - adot_i); must match mu-dot
    t_form = AffineForm(sum(m))
    for i in range(n):
        if m[i]:
            t_form = t_form - AffineForm.symbol(f"a{i}") * m[i]
    if t_form.substitute(f.dot) != f.mu_dot:
        raise DerivationError(
            "eps-exponent does not match the meridian dot part")

    return GluingSystem(name=t.name, r=n,
                        N=tuple(tuple(row) for row in nmat),
                        m=tuple(m), sigma=tuple(sigma),
                        e_slope=tuple(v), e_offset=tuple(w),
                        t_coeff=t_form)
