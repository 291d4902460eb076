"""Finite-dimensional homological kernels over prime fields.

Cochain complexes with exact rank computations, the two-chart Cech
complex of a line bundle on P^1, cochain cohomology of diagonalizable
group schemes (with a tame cyclic group acting), and Picard-category
invariants obtained by explicit enumeration.

Everything here is over F_p with matrices of small exact integers; the
heavy lifting is plain Gaussian elimination mod p on numpy arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np


# ---------------------------------------------------------------------------
# linear algebra mod p


def _as_modp(A, p):
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("matrix expected")
    return A % p


def rank_mod_p(A, p):
    A = _as_modp(A, p).copy()
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = None
        for i in range(r, rows):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        nz = np.nonzero(col)[0]
        if nz.size:
            A[nz] = (A[nz] - np.outer(col[nz], A[r])) % p
        r += 1
    return r


def solve_mod_p(A, b, p):
    """One solution of A x = b mod p, or None."""
    A = _as_modp(A, p)
    b = np.asarray(b, dtype=np.int64) % p
    rows, cols = A.shape
    M = np.concatenate([A, b.reshape(rows, 1)], axis=1).copy()
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        piv = None
        for i in range(r, rows):
            if M[i, c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        col = M[:, c].copy()
        col[r] = 0
        nz = np.nonzero(col)[0]
        if nz.size:
            M[nz] = (M[nz] - np.outer(col[nz], M[r])) % p
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if M[i, cols]:
            return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = M[i, cols]
    return x


# ---------------------------------------------------------------------------
# cochain complexes


@dataclass(frozen=True)
class CochainComplex:
    """Matrices d_i: F_p^{dims[i]} -> F_p^{dims[i+1]} with d.d = 0.

    ``start_degree`` labels dims[0]; matrices[i] has shape
    (dims[i+1], dims[i]).
    """

    p: int
    dims: tuple
    matrices: tuple
    start_degree: int = 0

    def __post_init__(self):
        if len(self.matrices) != len(self.dims) - 1:
            raise ValueError("need one differential per adjacent pair")
        mats = []
        for i, M in enumerate(self.matrices):
            M = _as_modp(M, self.p)
            if M.shape != (self.dims[i + 1], self.dims[i]):
                raise ValueError(f"differential {i} has shape {M.shape}")
            mats.append(M)
        for i in range(len(mats) - 1):
            if mats[i + 1].size and mats[i].size:
                if np.any((mats[i + 1] @ mats[i]) % self.p):
                    raise ValueError(f"d{i + 1} . d{i} != 0")
        object.__setattr__(self, "matrices", tuple(mats))
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))

    def degree_index(self, degree):
        i = degree - self.start_degree
        if not 0 <= i < len(self.dims):
            raise IndexError(f"degree {degree} outside the complex")
        return i

    def to_json(self):
        return {
            "p": self.p,
            "start_degree": self.start_degree,
            "dims": list(self.dims),
            "matrices": [M.tolist() for M in self.matrices],
        }

    @staticmethod
    def from_json(obj):
        return CochainComplex(
            obj["p"],
            tuple(obj["dims"]),
            tuple(np.array(M, dtype=np.int64) for M in obj["matrices"]),
            obj.get("start_degree", 0),
        )


def cohomology_dims(C):
    """dim H^i for every degree of the complex (rank-nullity over F_p)."""
    ranks = [rank_mod_p(M, C.p) for M in C.matrices]
    out = []
    for i, n in enumerate(C.dims):
        rin = ranks[i - 1] if i > 0 else 0
        rout = ranks[i] if i < len(ranks) else 0
        out.append(n - rout - rin)
    return out


def euler_characteristic(C):
    return sum((-1) ** i * n for i, n in enumerate(C.dims))


# ---------------------------------------------------------------------------
# Cech cohomology of O(d) on P^1


def cech_line_bundle(p, d, window=None):
    """(h0, h1) of O(d) on P^1 from the explicit two-chart Cech complex.

    Sections over the finite chart are monomials x^0..x^N, sections over
    the chart at infinity are x^{d-N}..x^d, sections on the overlap are
    the Laurent monomials spanning both ranges; the differential is
    (f, g) -> f - g.  N defaults to |d| + 2, which is past the point
    where the answer stabilizes.
    """
    N = window if window is not None else abs(d) + 2
    chart0 = list(range(0, N + 1))
    chart_inf = list(range(d - N, d + 1))
    lo = min(0, d - N)
    hi = max(N, d)
    overlap = {e: i for i, e in enumerate(range(lo, hi + 1))}
    n0 = len(chart0) + len(chart_inf)
    n1 = len(overlap)
    D = np.zeros((n1, n0), dtype=np.int64)
    for j, e in enumerate(chart0):
        D[overlap[e], j] = 1
    for j, e in enumerate(chart_inf):
        D[overlap[e], len(chart0) + j] = (-1) % p
    C = CochainComplex(p, (n0, n1), (D,))
    h0, h1 = cohomology_dims(C)
    return h0, h1


# ---------------------------------------------------------------------------
# graded modules over a diagonalizable group scheme, with tame H


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class GradedHModule:
    """A V-graded module, V = (Z/p)^s, with a cyclic H of order m acting.

    ``dims`` maps a character (tuple of length s) to the dimension of
    its graded piece.  The generator of H sends the character phi to
    T.phi and the basis vector (phi, i) to scalars[(phi, i)] times
    (T.phi, i); so graded pieces along a T-orbit must have equal
    dimension and the m-th iterate of the action must be the identity.
    """

    p: int
    s: int
    m: int
    T: tuple
    dims: dict = field(compare=False)
    scalars: dict = field(compare=False)

    def __post_init__(self):
        if _gcd(self.m, self.p) != 1:
            raise ValueError("|H| must be prime to p")
        # T^m = identity on V
        for phi in self.characters():
            psi = phi
            for _ in range(self.m):
                psi = self.apply_T(psi)
            if psi != phi:
                raise ValueError("T^m is not the identity on V")
        for phi, d in self.dims.items():
            if d != self.dims.get(self.apply_T(phi), 0):
                raise ValueError("graded dimensions not constant along H-orbits")
        # generator^m = identity on M
        for b in self.basis():
            c, cur = 1, b
            for _ in range(self.m):
                sc, cur = self.act_generator(cur)
                c = (c * sc) % self.p
            if cur != b or c != 1:
                raise ValueError("the H-action is not of order dividing m")

    def characters(self):
        return itertools.product(range(self.p), repeat=self.s)

    def apply_T(self, phi):
        return tuple(
            sum(self.T[i][j] * phi[j] for j in range(self.s)) % self.p
            for i in range(self.s)
        )

    def apply_T_power(self, phi, k):
        for _ in range(k):
            phi = self.apply_T(phi)
        return phi

    def basis(self):
        out = []
        for phi in self.characters():
            for i in range(self.dims.get(phi, 0)):
                out.append((phi, i))
        return out

    def act_generator(self, b):
        phi, i = b
        c = self.scalars.get((phi, i), 1) % self.p
        return c, (self.apply_T(phi), i)

    def total_dim(self):
        return sum(self.dims.values())

    def invariant_dim_at_zero(self):
        """dim (M_0)^H, the expected H^0."""
        zero = tuple([0] * self.s)
        n = 0
        for i in range(self.dims.get(zero, 0)):
            start = (zero, i)
            c, cur = 1, start
            while True:
                sc, cur = self.act_generator(cur)
                c = (c * sc) % self.p
                if cur == start:
                    break
            # invariant iff the scalar around the orbit cycle is 1
            if c == 1:
                n += 1
        return n

    @staticmethod
    def trivial_H(p, s, dims):
        T = tuple(tuple(1 if i == j else 0 for j in range(s)) for i in range(s))
        return GradedHModule(p, s, 1, T, dict(dims), {})


def coinduced_module(p, s):
    """O_G as a module over itself: one basis vector per character."""
    dims = {phi: 1 for phi in itertools.product(range(p), repeat=s)}
    return GradedHModule.trivial_H(p, s, dims)


def _cochain_basis(M, n):
    """Basis of C^n(G, M) = O_G^{tensor n} (tensor) M in the character basis."""
    chars = list(M.characters())
    return [
        (*phis, b)
        for phis in itertools.product(chars, repeat=n)
        for b in M.basis()
    ]


def _cochain_differential(M, n, v):
    """Sparse differential C^n -> C^{n+1} of a sparse vector v (dict)."""
    out = {}
    p = M.p
    for key, coeff in v.items():
        *phis, b = key
        psi = b[0]
        terms = []
        terms.append(((tuple([0] * M.s), *phis, b), 1))
        for nu in range(1, n + 1):
            dup = (*phis[: nu - 1], phis[nu - 1], phis[nu - 1], *phis[nu:], b)
            terms.append((dup, (-1) ** nu))
        terms.append(((*phis, psi, b), (-1) ** (n + 1)))
        for key2, sign in terms:
            out[key2] = (out.get(key2, 0) + sign * coeff) % p
    return {k: c for k, c in out.items() if c}


def _invariant_basis(M, basis):
    """Orbit-sum basis of the H-invariants of a monomial H-action.

    Returns a list of sparse vectors (dict basis-key -> coeff), each
    normalized to coefficient 1 at its smallest key.
    """
    index = {b: i for i, b in enumerate(basis)}
    seen = set()
    out = []
    p = M.p
    for b in basis:
        if b in seen:
            continue
        orbit = []
        scalars = []
        cur, c = b, 1
        while True:
            orbit.append((cur, c))
            seen.add(cur)
            *phis, mb = cur
            sc, mb2 = M.act_generator(mb)
            cur = (*[M.apply_T(phi) for phi in phis], mb2)
            c = (c * sc) % p
            if cur == b:
                break
        if c == 1:  # the cycle scalar; otherwise no invariant on this orbit
            vec = {k: co for k, co in orbit}
            # normalize at the smallest key for stable coordinates
            k0 = min(vec, key=lambda k: index[k])
            inv = pow(vec[k0], p - 2, p)
            out.append(({k: (co * inv) % p for k, co in vec.items()}, k0))
    return out


def group_cochain_complex(M, nmax):
    """The H-invariant cochain complex of G = G_0 x| H in degrees 0..nmax+1.

    C^n(G_0, M) = O_G^{tensor n} (tensor) M in the character basis; the
    H-invariants functor is applied degreewise (exact because |H| is
    prime to p), which computes the cohomology of the semidirect
    product.
    """
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    degree_data = []
    for n in range(nmax + 2):
        basis = _cochain_basis(M, n)
        inv = _invariant_basis(M, basis)
        degree_data.append((basis, inv))
    dims = tuple(len(inv) for _, inv in degree_data)
    mats = []
    for n in range(nmax + 1):
        _, inv_n = degree_data[n]
        _, inv_n1 = degree_data[n + 1]
        rep_index = {k0: j for j, (_, k0) in enumerate(inv_n1)}
        D = np.zeros((len(inv_n1), len(inv_n)), dtype=np.int64)
        for col, (vec, _) in enumerate(inv_n):
            dv = _cochain_differential(M, n, vec)
            for k, c in dv.items():
                j = rep_index.get(k)
                if j is not None:
                    D[j, col] = c
        mats.append(D)
    return CochainComplex(M.p, dims, tuple(mats))


def group_cohomology(M, nmax):
    """dim H^n(G, M) for n = 0..nmax."""
    C = group_cochain_complex(M, nmax)
    return cohomology_dims(C)[: nmax + 1]


def _resolution_differential(M, n, v):
    """Differential of the canonical resolution B^n = O_G^{tensor n+1} (x) M."""
    out = {}
    p = M.p
    for key, coeff in v.items():
        *phis, b = key  # n+1 characters here
        psi = b[0]
        terms = []
        for nu in range(n + 1):
            dup = (*phis[:nu], phis[nu], phis[nu], *phis[nu + 1 :], b)
            terms.append((dup, (-1) ** nu))
        terms.append(((*phis, psi, b), (-1) ** (n + 1)))
        for key2, sign in terms:
            out[key2] = (out.get(key2, 0) + sign * coeff) % p
    return {k: c for k, c in out.items() if c}


def _resolution_homotopy(M, v):
    """s(a0 (x) ... (x) an (x) m) = e(a0) a1 (x) ... (x) an (x) m."""
    out = {}
    p = M.p
    for key, coeff in v.items():
        *phis, b = key
        key2 = (*phis[1:], b)  # counit of any character is 1
        out[key2] = (out.get(key2, 0) + coeff) % p
    return {k: c for k, c in out.items() if c}


def verify_resolution_homotopy(M, nmax, differential=None):
    """Check s.d + d.s = id on the canonical resolution in degrees <= nmax.

    ``differential`` may override the resolution differential (used as a
    negative control in tests).
    """
    dmap = differential if differential is not None else _resolution_differential
    for n in range(nmax + 1):
        for key in _cochain_basis(M, n + 1):  # B^n has n+1 character slots
            v = {key: 1}
            if n == 0:
                # d s(v) on B^0 goes through the augmentation M -> B^0
                sm = _resolution_homotopy(M, v)  # element of M
                ds = {}
                for (b,), c in ((k, c) for k, c in sm.items()):
                    ds[(b[0], b)] = (ds.get((b[0], b), 0) + c) % M.p
            else:
                ds = dmap(M, n - 1, _resolution_homotopy(M, v))
            sd = _resolution_homotopy(M, dmap(M, n, v))
            total = dict(ds)
            for k, c in sd.items():
                total[k] = (total.get(k, 0) + c) % M.p
            total = {k: c % M.p for k, c in total.items() if c % M.p}
            if total != v:
                return False
    return True


# ---------------------------------------------------------------------------
# Picard-category invariants by enumeration


@dataclass(frozen=True)
class PicInvariants:
    """pi_0 and Aut(neutral) as invariant-factor tuples."""

    pi0: tuple
    aut: tuple


class EnumerationBudgetExceeded(Exception):
    pass


def _enumerate_vectors(p, n):
    return itertools.product(range(p), repeat=n)


def _apply(Mat, v, p):
    if Mat.shape[1] == 0:
        return tuple([0] * Mat.shape[0])
    return tuple(int(x) for x in (Mat @ np.array(v, dtype=np.int64)) % p)


def _quotient_group(cocycles, boundaries, p):
    """Orders the classes of cocycles mod the boundary set; returns
    (number of classes, canonical representative map)."""
    bset = sorted(boundaries)
    reps = {}
    for z in cocycles:
        cls = min(tuple((zi + bi) % p for zi, bi in zip(z, b)) for b in bset)
        reps[z] = cls
    return reps


def pic_invariants(A, budget=3**6):
    """Invariants of the Picard groupoid of a complex in degrees -1..2.

    Objects are the 1-cocycles, morphisms x -> y are elements f of the
    degree-0 piece with d(f) = y - x taken modulo the image of the
    degree -1 piece, and composition is addition.  Both invariants are
    computed by explicit enumeration and returned as invariant-factor
    tuples of elementary abelian p-groups.
    """
    p = A.p
    i1 = A.degree_index(1)
    n_m1, n0, n1 = A.dims[i1 - 2], A.dims[i1 - 1], A.dims[i1]
    if max(p**n_m1, p**n0, p**n1) > budget:
        raise EnumerationBudgetExceeded("graded pieces too large to enumerate")
    d_m1, d0, d1 = A.matrices[i1 - 2], A.matrices[i1 - 1], A.matrices[i1]

    zero_top = tuple([0] * d1.shape[0])
    cocycles = [v for v in _enumerate_vectors(p, n1) if _apply(d1, v, p) == zero_top]
    boundaries1 = {_apply(d0, f, p) for f in _enumerate_vectors(p, n0)}
    reps = _quotient_group(cocycles, boundaries1, p)
    classes = sorted(set(reps.values()))
    # Baer sum: class of the vector sum; check the group laws explicitly
    zero_class = reps[tuple([0] * n1)]
    for c in classes:
        acc = c
        order = 1
        while acc != zero_class:
            acc = reps[tuple((a + b) % p for a, b in zip(acc, c))]
            order += 1
            if order > p:
                raise ArithmeticError("class order exceeds p in an F_p-linear category")
    k1 = _integer_log(len(classes), p)
    # automorphisms of the neutral object: ker d0 modulo im d_{-1}
    zero0 = tuple([0] * d0.shape[0])
    autocycles = [f for f in _enumerate_vectors(p, n0) if _apply(d0, f, p) == zero0]
    boundaries0 = {_apply(d_m1, e, p) for e in _enumerate_vectors(p, n_m1)}
    reps0 = _quotient_group(autocycles, boundaries0, p)
    k0 = _integer_log(len(set(reps0.values())), p)
    return PicInvariants(pi0=(p,) * k1, aut=(p,) * k0)


def _integer_log(n, p):
    k = 0
    while n > 1:
        if n % p:
            raise ArithmeticError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k
