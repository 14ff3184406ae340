"""Finite-dimensional *-algebras over C, given concretely by matrices.

An algebra is a linearly independent family of basis matrices closed
(numerically) under product and adjoint, together with a distinguished
trace.  Everything downstream reduces to one primitive: the block profile,
the multiset of simple block dimensions {d_1 <= ... <= d_k} obtained by
spectrally splitting a random self-adjoint central element.  Twisted group
algebras, crossed products by twisted actions, fibers over central
characters, induction over a subgroup, and stabilization are all built on
top and cross-checked against each other by comparing profiles, which are
a complete invariant of finite-dimensional semisimple algebras.

The matrix layer is floating point; exactness lives upstream in the
cocycle layer, and the integers recovered here (ranks, block sizes) are
asserted to be consistent (sum of d_i^2 = dim) before anything is
returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .cocycles import Cocycle2, normalize, sigma_chi, subgroup_characters
from .errors import (
    DecompositionUnstableError,
    InvalidGroupError,
    ResourceCapError,
    VerificationError,
)
from .groups import FiniteGroup, Subgroup, center, left_cosets, quotient, subgroup_as_group

TOL = 1e-8
EIG_GAP = 1e-6
MAX_RETRIES = 8
CROSSED_CAP = 4096

# pair-product checks run in full below this basis size, sampled above
_FULL_CHECK_LIMIT = 48
_SAMPLED_PAIRS = 1024


def _phase(angle) -> complex:
    return np.exp(2j * np.pi * float(angle))


class StarAlgebra:
    """A concrete *-algebra: basis matrices, a trace, and a label.

    basis: (n, D, D) complex, linearly independent, spanning a subalgebra
    of M_D closed under adjoint.  trace_vector[i] is the trace of basis[i];
    the trace is required to be normalized (trace(1) = 1) when the span
    contains the identity.  Construction re-checks all of this, sampling
    product pairs once the full n^2 sweep gets large.
    """

    def __init__(self, basis, trace_vector, label: str = "", check: bool = True):
        basis = np.ascontiguousarray(np.asarray(basis, dtype=np.complex128))
        if basis.ndim != 3 or basis.shape[1] != basis.shape[2] or basis.shape[0] == 0:
            raise ValueError("basis must be a nonempty (n, D, D) array")
        self.basis = basis
        self.dim, self.rep_dim, _ = basis.shape
        self.label = label
        self.trace_vector = np.asarray(trace_vector, dtype=np.complex128)
        if self.trace_vector.shape != (self.dim,):
            raise ValueError("trace vector length must match the basis")
        flat = basis.reshape(self.dim, -1).T  # (D^2, n)
        sv = np.linalg.svd(flat, compute_uv=False)
        if sv[-1] <= sv[0] * 1e-10:
            raise ValueError("basis matrices are linearly dependent")
        self._flat = flat
        self._pinv = np.linalg.pinv(flat)
        self.unit_coords = self._find_unit()
        if check:
            self._check_closure()

    # -- coordinates -------------------------------------------------------

    def element(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.complex128)
        return np.einsum("i,iab->ab", c, self.basis)

    def coords_batch(self, mats: np.ndarray, tol: float = TOL) -> np.ndarray:
        """Coordinates of a stack (k, D, D); raises if any falls off the span."""
        vecs = mats.reshape(len(mats), -1).T  # (D^2, k)
        C = self._pinv @ vecs
        resid = np.abs(self._flat @ C - vecs).max() if len(mats) else 0.0
        scale = max(1.0, float(np.abs(mats).max()) if mats.size else 1.0)
        if resid > tol * scale:
            raise ValueError(f"matrix outside the algebra span (residual {resid:.2e})")
        return C.T  # (k, n)

    def coords(self, mat: np.ndarray, tol: float = TOL) -> np.ndarray:
        return self.coords_batch(mat[None], tol)[0]

    def trace(self, coords) -> complex:
        return complex(np.dot(np.asarray(coords, dtype=np.complex128), self.trace_vector))

    def _find_unit(self):
        eye = np.eye(self.rep_dim, dtype=np.complex128)
        c = self._pinv @ eye.reshape(-1)
        if np.abs(self._flat @ c - eye.reshape(-1)).max() <= TOL:
            return c
        return None

    # -- validation --------------------------------------------------------

    def _check_closure(self):
        n = self.dim
        if n * n * self.rep_dim**2 <= 4_000_000:
            pairs = [(i, j) for i in range(n) for j in range(n)]
        else:
            rng = np.random.default_rng(12345 + n)
            pairs = list(zip(rng.integers(0, n, _SAMPLED_PAIRS), rng.integers(0, n, _SAMPLED_PAIRS)))
        li = np.array([p[0] for p in pairs])
        rj = np.array([p[1] for p in pairs])
        prods = np.einsum("kab,kbc->kac", self.basis[li], self.basis[rj])
        prod_coords = self.coords_batch(prods)  # raises if not closed
        adj = np.conj(np.transpose(self.basis, (0, 2, 1)))
        adj_coords = self.coords_batch(adj)
        if self.unit_coords is not None:
            one = self.trace(self.unit_coords)
            if abs(one - 1.0) > 1e-6:
                raise ValueError(f"trace of the unit is {one:.6f}, expected 1")
            if len(pairs) == n * n:
                # Gram matrix tau(b_i* b_j) must be positive semidefinite
                prod_map = prod_coords.reshape(n, n, n)
                pair_traces = prod_map @ self.trace_vector  # (n, n): tau(b_c b_j)
                gram = adj_coords @ pair_traces
                w = np.linalg.eigvalsh((gram + gram.conj().T) / 2)
                if w.min() < -1e-7:
                    raise ValueError("trace is not positive on the basis Gram matrix")

    def adjoint_coords(self, coords) -> np.ndarray:
        adj = self.element(coords).conj().T
        return self.coords(adj)


def scalar_algebra() -> StarAlgebra:
    return StarAlgebra(np.ones((1, 1, 1)), np.ones(1), label="C")


def matrix_algebra(d: int) -> StarAlgebra:
    """Full matrix algebra M_d with its normalized trace."""
    if d < 1:
        raise ValueError("dimension must be positive")
    basis = np.zeros((d * d, d, d), dtype=np.complex128)
    tr = np.zeros(d * d, dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            basis[i * d + j, i, j] = 1.0
            if i == j:
                tr[i * d + j] = 1.0 / d
    return StarAlgebra(basis, tr, label=f"M{d}")


def tensor_algebra(a: StarAlgebra, b: StarAlgebra) -> StarAlgebra:
    """Tensor product with the product trace; basis index is (i, j) row-major."""
    n = a.dim * b.dim
    D = a.rep_dim * b.rep_dim
    basis = np.empty((n, D, D), dtype=np.complex128)
    tr = np.empty(n, dtype=np.complex128)
    for i in range(a.dim):
        for j in range(b.dim):
            basis[i * b.dim + j] = np.kron(a.basis[i], b.basis[j])
            tr[i * b.dim + j] = a.trace_vector[i] * b.trace_vector[j]
    return StarAlgebra(basis, tr, label=f"{a.label}(x){b.label}")


def twisted_group_algebra(G: FiniteGroup, omega: Cocycle2) -> StarAlgebra:
    """The algebra spanned by unitaries u_g with u_g u_h = omega(g, h) u_{gh},
    realized on l^2(G) by u_g(delta_h) = omega(g, h) delta_{gh}, with the
    canonical trace tau(x) = <x delta_e, delta_e>.

    A cocycle with some omega(g, g^-1) != 0 is replaced by its normalized
    representative first (same class, so the same algebra up to iso); after
    that u_e is the unit and tau(u_g) = 0 exactly for g != e.
    """
    if not np.array_equal(G.table, omega.group.table):
        raise ValueError("cocycle lives on a different group")
    if any(omega.angles[g, G.inv(g)] != 0 for g in range(G.order)):
        omega, _ = normalize(omega)
    m = G.order
    basis = np.zeros((m, m, m), dtype=np.complex128)
    for g in range(m):
        for h in range(m):
            basis[g, G.mul(g, h), h] = _phase(omega.angles[g, h])
    # relations u_g u_h = omega(g,h) u_{gh} hold by construction; re-check
    for g in range(m):
        for h in range(m):
            want = _phase(omega.angles[g, h]) * basis[G.mul(g, h)]
            if np.abs(basis[g] @ basis[h] - want).max() > TOL:
                raise VerificationError("twisted regular representation relations failed")
    tr = basis[:, 0, 0].copy()
    tag = "" if omega.is_trivial_table() else ", w"
    return StarAlgebra(basis, tr, label=f"C[{G.name}{tag}]")


# ---------------------------------------------------------------------------
# block decomposition


@dataclass(frozen=True)
class BlockProfile:
    """Sorted multiset of simple block dimensions of a semisimple algebra."""

    blocks: tuple[int, ...]
    dim: int
    seed: int

    def __post_init__(self):
        if list(self.blocks) != sorted(self.blocks) or any(d < 1 for d in self.blocks):
            raise ValueError("blocks must be sorted positive integers")
        if sum(d * d for d in self.blocks) != self.dim:
            raise ValueError("block dimensions do not square-sum to the algebra dimension")

    def scaled(self, k: int) -> "BlockProfile":
        return BlockProfile(tuple(d * k for d in self.blocks), self.dim * k * k, self.seed)

    def to_json(self) -> dict:
        return {"blocks": [int(d) for d in self.blocks], "dim": int(self.dim), "seed": int(self.seed)}


class _Unstable(Exception):
    pass


def _random_self_adjoint(A: StarAlgebra, span: np.ndarray, rng) -> np.ndarray:
    k = span.shape[1]
    c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    M = A.element(span @ c)
    return M + M.conj().T


def _center_coords(A: StarAlgebra, rng) -> np.ndarray:
    """Coordinate basis of the center, found as the joint commutant of two
    random self-adjoint elements and then verified against every basis
    element (the joint commutant can only be too big, never too small)."""
    n, D = A.dim, A.rep_dim
    full = np.eye(n, dtype=np.complex128)
    a = _random_self_adjoint(A, full, rng)
    b = _random_self_adjoint(A, full, rng)
    rows = []
    for t in (a, b):
        comm = np.einsum("iab,bc->iac", A.basis, t) - np.einsum("ab,ibc->iac", t, A.basis)
        rows.append(comm.reshape(n, D * D))
    K = np.concatenate(rows, axis=1).T  # (2 D^2, n); want c with K @ c = 0
    # K has at least n rows, so the economy Vh already spans all of C^n
    _, s, Vh = np.linalg.svd(K, full_matrices=False)
    if s.size == 0 or s[0] < 1e-12:
        Z = full
    else:
        rank = int(np.sum(s > s[0] * 1e-9))
        Z = Vh[rank:].conj().T  # (n, k)
    if Z.shape[1] == 0:
        raise _Unstable("empty commutant, degenerate draw")
    # verify: every candidate center element commutes with the whole basis
    zmats = np.einsum("nk,nab->kab", Z, A.basis)
    lhs = np.einsum("iab,kbc->ikac", A.basis, zmats)
    rhs = np.einsum("kab,ibc->ikac", zmats, A.basis)
    scale = max(1.0, float(np.abs(zmats).max()))
    if np.abs(lhs - rhs).max() > TOL * scale:
        raise _Unstable("joint commutant exceeds the center")
    return Z


def block_profile(A: StarAlgebra, seed: int = 0) -> BlockProfile:
    """Simple block dimensions via a random self-adjoint central element.

    The eigenvalue clusters of that element (separation threshold EIG_GAP)
    must number exactly dim(center); each spectral projector p then acts on
    the coefficient space with integer rank d^2, recovered as the trace of
    an idempotent map.  Collisions or rank drift trigger a retry with fresh
    randomness, and MAX_RETRIES failures raise DecompositionUnstableError.
    """
    n = A.dim
    rng = np.random.default_rng(seed)
    last = "no attempts ran"
    for _ in range(MAX_RETRIES):
        try:
            Z = _center_coords(A, rng)
            k = Z.shape[1]
            C = _random_self_adjoint(A, Z, rng)
            w, V = np.linalg.eigh(C)
            splits = np.nonzero(np.diff(w) > EIG_GAP)[0]
            bounds = [0, *(int(s) + 1 for s in splits), len(w)]
            if len(bounds) - 1 != k:
                raise _Unstable(f"{len(bounds) - 1} eigenvalue clusters for a {k}-dim center")
            dims = []
            for lo, hi in zip(bounds, bounds[1:]):
                P = V[:, lo:hi] @ V[:, lo:hi].conj().T
                moved = np.einsum("ab,ibc->iac", P, A.basis)
                cmat = A.coords_batch(moved)  # (n, n), row i = coords(P b_i)
                tr = np.trace(cmat)
                rank = int(round(tr.real))
                if abs(tr - rank) > 1e-6:
                    raise _Unstable(f"non-integer idempotent trace {tr:.4f}")
                d = isqrt(rank)
                if d * d != rank or rank == 0:
                    raise _Unstable(f"block rank {rank} is not a positive square")
                dims.append(d)
            if sum(d * d for d in dims) != n:
                raise _Unstable("block ranks do not sum to the dimension")
            return BlockProfile(tuple(sorted(dims)), n, seed)
        except (_Unstable, ValueError) as exc:
            last = str(exc)
    raise DecompositionUnstableError(f"block decomposition failed after {MAX_RETRIES} attempts: {last}")


# ---------------------------------------------------------------------------
# twisted systems and crossed products


class TwistedSystem:
    """A finite group acting on a StarAlgebra up to a unitary 2-cocycle.

    alpha[s] is the (n, n) coefficient matrix of an automorphism of A;
    omega[s, t] is the coordinate vector of a unitary in A.  The defining
    axioms (identity fixed, unit cocycle on the axes, the Ad-twisted
    composition law, and the cocycle condition) are all verified within
    TOL at construction.
    """

    def __init__(self, algebra: StarAlgebra, group: FiniteGroup, alpha, omega, check: bool = True):
        self.algebra = algebra
        self.group = group
        f, n = group.order, algebra.dim
        self.alpha = np.asarray(alpha, dtype=np.complex128)
        self.omega = np.asarray(omega, dtype=np.complex128)
        if self.alpha.shape != (f, n, n):
            raise ValueError(f"alpha must have shape {(f, n, n)}")
        if self.omega.shape != (f, f, n):
            raise ValueError(f"omega must have shape {(f, f, n)}")
        if algebra.unit_coords is None:
            raise ValueError("twisted systems need a unital coefficient algebra")
        if check:
            self._validate()

    def omega_matrix(self, s: int, t: int) -> np.ndarray:
        return self.algebra.element(self.omega[s, t])

    def _validate(self):
        A, F = self.algebra, self.group
        f, n = F.order, A.dim
        unit = A.unit_coords
        if np.abs(self.alpha[0] - np.eye(n)).max() > TOL:
            raise VerificationError("alpha at the identity is not the identity map")
        for s in range(f):
            if np.abs(self.omega[s, 0] - unit).max() > TOL or np.abs(self.omega[0, s] - unit).max() > TOL:
                raise VerificationError("omega is not the unit along the identity row/column")
        eye = np.eye(A.rep_dim)
        wmats = np.einsum("stn,nab->stab", self.omega, A.basis)
        for s in range(f):
            for t in range(f):
                W = wmats[s, t]
                if np.abs(W @ W.conj().T - eye).max() > TOL:
                    raise VerificationError(f"omega({s},{t}) is not unitary")
        # alpha_s alpha_t = Ad(omega(s,t)) alpha_{st}
        for s in range(f):
            for t in range(f):
                st = F.mul(s, t)
                W = wmats[s, t]
                target = np.einsum("ci,cab->iab", self.alpha[st], A.basis)
                conjd = np.einsum("ab,ibc,cd->iad", W, target, W.conj().T)
                rhs = A.coords_batch(conjd).T
                if np.abs(self.alpha[s] @ self.alpha[t] - rhs).max() > TOL:
                    raise VerificationError(f"composition axiom fails at ({s},{t})")
        # alpha_r(omega(s,t)) omega(r,st) = omega(r,s) omega(rs,t)
        for r in range(f):
            for s in range(f):
                for t in range(f):
                    st, rs = F.mul(s, t), F.mul(r, s)
                    lhs = A.element(self.alpha[r] @ self.omega[s, t]) @ wmats[r, st]
                    rhs = wmats[r, s] @ wmats[rs, t]
                    if np.abs(lhs - rhs).max() > TOL:
                        raise VerificationError(f"cocycle axiom fails at ({r},{s},{t})")
        # sampled automorphism property: multiplicative and *-preserving
        rng = np.random.default_rng(f * 1009 + n)
        count = min(n * n, 64)
        for s in range(f):
            amats = np.einsum("ci,cab->iab", self.alpha[s], A.basis)
            for _ in range(count):
                i, j = int(rng.integers(n)), int(rng.integers(n))
                prod = A.coords(A.basis[i] @ A.basis[j])
                if np.abs(A.element(self.alpha[s] @ prod) - amats[i] @ amats[j]).max() > TOL:
                    raise VerificationError(f"alpha({s}) is not multiplicative")
            i = int(rng.integers(n))
            star = A.coords(A.basis[i].conj().T)
            if np.abs(A.element(self.alpha[s] @ star) - amats[i].conj().T).max() > TOL:
                raise VerificationError(f"alpha({s}) does not preserve the adjoint")


def trivial_system(A: StarAlgebra, F: FiniteGroup) -> TwistedSystem:
    f, n = F.order, A.dim
    alpha = np.broadcast_to(np.eye(n, dtype=np.complex128), (f, n, n)).copy()
    omega = np.broadcast_to(A.unit_coords, (f, f, n)).copy()
    return TwistedSystem(A, F, alpha, omega)


def scalar_system(F: FiniteGroup, omega: Cocycle2) -> TwistedSystem:
    """C as coefficients, trivial action, scalar cocycle (normalized first)."""
    if not np.array_equal(F.table, omega.group.table):
        raise ValueError("cocycle lives on a different group")
    if any(omega.angles[g, F.inv(g)] != 0 for g in range(F.order)):
        omega, _ = normalize(omega)
    f = F.order
    alpha = np.ones((f, 1, 1), dtype=np.complex128)
    table = np.empty((f, f, 1), dtype=np.complex128)
    for s in range(f):
        for t in range(f):
            table[s, t, 0] = _phase(omega.angles[s, t])
    return TwistedSystem(scalar_algebra(), F, alpha, table)


def system_from_normal(G: FiniteGroup, N: Subgroup, sigma: Cocycle2 | None = None) -> TwistedSystem:
    """Decompose C[G, sigma] over a normal subgroup N: coefficients
    C[N, sigma|_N], the quotient acting by conjugation of the canonical
    coset representatives c(s), and the cocycle

        omega(s, t) = u_{c(s)} u_{c(t)} u*_{c(s t)}

    which lands in the coefficient algebra.  crossed_product of the result
    recovers the block profile of C[G, sigma]."""
    from .cocycles import trivial_cocycle

    if N.parent is not G:
        raise InvalidGroupError("subgroup belongs to a different group")
    if not N.is_normal():
        raise InvalidGroupError("subgroup is not normal")
    if sigma is None:
        sigma = trivial_cocycle(G)
    if not np.array_equal(sigma.group.table, G.table):
        raise ValueError("cocycle lives on a different group")
    if any(sigma.angles[g, G.inv(g)] != 0 for g in range(G.order)):
        sigma, _ = normalize(sigma)
    Ngrp, emb = subgroup_as_group(N)
    pos = {g: i for i, g in enumerate(emb)}
    nn = Ngrp.order
    restricted = np.empty((nn, nn), dtype=object)
    for i, a in enumerate(emb):
        for j, b in enumerate(emb):
            restricted[i, j] = sigma.angles[a, b]
    B = twisted_group_algebra(Ngrp, Cocycle2(Ngrp, restricted))
    Q, _, lift = quotient(G, N)
    q = Q.order
    alpha = np.zeros((q, nn, nn), dtype=np.complex128)
    omega = np.zeros((q, q, nn), dtype=np.complex128)
    for s in range(q):
        c = int(lift[s])
        cinv = G.inv(c)
        for i, nelt in enumerate(emb):
            cn = G.mul(c, nelt)
            target = pos[G.mul(cn, cinv)]
            alpha[s, target, i] = _phase(sigma.angles[c, nelt] + sigma.angles[cn, cinv])
    for s in range(q):
        for t in range(q):
            cs, ct = int(lift[s]), int(lift[t])
            cst_inv = G.inv(int(lift[Q.mul(s, t)]))
            cc = G.mul(cs, ct)
            target = pos[G.mul(cc, cst_inv)]
            omega[s, t, target] = _phase(sigma.angles[cs, ct] + sigma.angles[cc, cst_inv])
    return TwistedSystem(B, Q, alpha, omega)


def crossed_product(sys: TwistedSystem) -> StarAlgebra:
    """The twisted crossed product, on l^2(F) with A-valued vectors:

        (pi(a) xi)(g)   = alpha_{g^-1}(a) xi(g)
        (lambda_s xi)(g) = omega(g^-1, s) xi(s^-1 g)

    Basis pi(b_i) lambda_s at index i*|F| + s; dimension dim(A) * |F|;
    trace tau(pi(a) lambda_s) = tau_A(a) [s = e]."""
    A, F = sys.algebra, sys.group
    f, n, D = F.order, A.dim, A.rep_dim
    if n * f > CROSSED_CAP:
        raise ResourceCapError(f"crossed product dimension {n * f} exceeds {CROSSED_CAP}")
    Dt = D * f
    amats = np.empty((f, n, D, D), dtype=np.complex128)
    for g in range(f):
        amats[g] = np.einsum("ci,cab->iab", sys.alpha[g], A.basis)
    big = np.zeros((n * f, Dt, Dt), dtype=np.complex128)
    for g in range(f):
        ginv = F.inv(g)
        for s in range(f):
            col = F.mul(F.inv(s), g)
            w = A.element(sys.omega[ginv, s])
            blk = amats[ginv] @ w  # (n, D, D)
            rows = slice(g * D, (g + 1) * D)
            cols = slice(col * D, (col + 1) * D)
            for i in range(n):
                big[i * f + s, rows, cols] = blk[i]
    tr = np.zeros(n * f, dtype=np.complex128)
    tr[0 :: f] = A.trace_vector
    return StarAlgebra(big, tr, label=f"{A.label} x {F.name}")


# ---------------------------------------------------------------------------
# fibers over central characters


def cutdown_fiber(G: FiniteGroup, N: Subgroup, chi) -> StarAlgebra:
    """Compress C[G] by the central idempotent of a character of a central
    subgroup: e_chi = (1/|N|) sum_z conj(chi(z)) u_z, represented on the
    range of e_chi with basis the compressed u_g over right-coset
    representatives of N."""
    if N.parent is not G:
        raise InvalidGroupError("subgroup belongs to a different group")
    if not set(N.members) <= set(center(G).members):
        raise InvalidGroupError("subgroup is not central")
    chi_map = {int(k): v for k, v in dict(chi).items()}
    if set(chi_map) != set(N.members):
        raise InvalidGroupError("character must be defined exactly on the subgroup")
    m = G.order
    tbl = G.table
    perms = np.zeros((m, m, m), dtype=np.complex128)
    for g in range(m):
        perms[g, tbl[g], np.arange(m)] = 1.0
    e = sum(np.conj(_phase(chi_map[z])) * perms[z] for z in N.members) / len(N.members)
    if np.abs(e @ e - e).max() > TOL or np.abs(e - e.conj().T).max() > TOL:
        raise VerificationError("central character idempotent failed to be a projection")
    w, V = np.linalg.eigh(e)
    r = int(np.sum(w > 0.5))
    if r != m // len(N.members):
        raise VerificationError("fiber rank does not match the coset count")
    Q = V[:, w > 0.5]
    reps = []
    seen = set()
    for g in range(m):
        if g in seen:
            continue
        reps.append(g)
        seen.update(int(tbl[z, g]) for z in N.members)
    basis = np.array([Q.conj().T @ perms[g] @ Q for g in reps])
    tr = np.array([np.trace(b) / r for b in basis])
    return StarAlgebra(basis, tr, label=f"C[{G.name}]@chi")


def fiber_decomposition(G: FiniteGroup, N: Subgroup, seed: int = 0) -> list[tuple[dict, StarAlgebra]]:
    """All fibers of C[G] over the characters of a central subgroup.

    Each fiber's block profile is asserted to match the directly built
    twisted algebra of the quotient with the corresponding lifted-product
    cocycle, and the fiber dimensions are audited to sum to |G|."""
    fibers = []
    total = 0
    for chi in subgroup_characters(N):
        alg = cutdown_fiber(G, N, chi)
        sig = sigma_chi(G, N, chi)
        direct = twisted_group_algebra(sig.group, sig)
        p1 = block_profile(alg, seed)
        p2 = block_profile(direct, seed)
        if p1.blocks != p2.blocks:
            raise VerificationError(
                f"fiber profile {p1.blocks} disagrees with the quotient cocycle route {p2.blocks}"
            )
        fibers.append((chi, alg))
        total += alg.dim
    if total != G.order:
        raise VerificationError("fiber dimensions do not sum to the group order")
    return fibers


# ---------------------------------------------------------------------------
# induction (imprimitivity) and stabilization


def verify_imprimitivity(B: StarAlgebra, H: Subgroup, sys: TwistedSystem, seed: int = 0) -> dict:
    """Induce a twisted H-system up to G = H.parent and check that the
    induced crossed product is the H-crossed product inflated by the index:

        profile(A x G) = [G:H] * profile(B x H)   (elementwise)

    where A is the algebra of B-valued functions on G/H, G permuting the
    cosets and twisting by kappa(g, x) = t_{gx}^-1 g t_x inside H."""
    if B is not sys.algebra:
        raise ValueError("B must be the coefficient algebra of the system")
    G = H.parent
    Hgrp, emb = subgroup_as_group(H)
    if not np.array_equal(Hgrp.table, sys.group.table):
        raise ValueError("system group does not match the subgroup")
    pos = {g: i for i, g in enumerate(emb)}
    cosets = left_cosets(G, H)
    q = len(cosets)
    nB = B.dim
    if q * nB * G.order > CROSSED_CAP:
        raise ResourceCapError("induced crossed product exceeds the resource cap")
    t = [c[0] for c in cosets]
    cidx = np.empty(G.order, dtype=np.int64)
    for x, coset in enumerate(cosets):
        for g in coset:
            cidx[g] = x
    kappa = np.empty((G.order, q), dtype=np.int64)
    for g in range(G.order):
        for x in range(q):
            gx = int(cidx[G.mul(g, t[x])])
            h = G.mul(G.mul(G.inv(t[gx]), g), t[x])
            kappa[g, x] = pos[h]  # KeyError would mean the coset algebra broke
    nA = q * nB
    DB = B.rep_dim
    basis = np.zeros((nA, q * DB, q * DB), dtype=np.complex128)
    tr = np.zeros(nA, dtype=np.complex128)
    for x in range(q):
        sl = slice(x * DB, (x + 1) * DB)
        for i in range(nB):
            basis[x * nB + i][sl, sl] = B.basis[i]
            tr[x * nB + i] = B.trace_vector[i] / q
    A = StarAlgebra(basis, tr, label=f"Ind({B.label})")
    alpha = np.zeros((G.order, nA, nA), dtype=np.complex128)
    omega = np.zeros((G.order, G.order, nA), dtype=np.complex128)
    for g in range(G.order):
        for x in range(q):
            gx = int(cidx[G.mul(g, t[x])])
            h = kappa[g, x]
            alpha[g, gx * nB : (gx + 1) * nB, x * nB : (x + 1) * nB] = sys.alpha[h]
    for g1 in range(G.order):
        for g2 in range(G.order):
            for x in range(q):
                y1 = int(cidx[G.mul(G.inv(g1), t[x])])
                h1 = kappa[g1, y1]
                y2 = int(cidx[G.mul(G.inv(g2), t[y1])])
                h2 = kappa[g2, y2]
                omega[g1, g2, x * nB : (x + 1) * nB] = sys.omega[h1, h2]
    induced = TwistedSystem(A, G, alpha, omega)
    ambient = block_profile(crossed_product(induced), seed)
    small = block_profile(crossed_product(sys), seed)
    expected = tuple(sorted(d * q for d in small.blocks))
    if ambient.blocks != expected:
        raise VerificationError(
            f"imprimitivity mismatch: ambient {ambient.blocks}, compressed {small.blocks}, index {q}"
        )
    return {
        "ambient_profile": list(ambient.blocks),
        "compressed_profile": list(small.blocks),
        "index": q,
        "ambient_dim": ambient.dim,
        "compressed_dim": small.dim,
        "matches": True,
    }


def verify_stabilization(sys: TwistedSystem, seed: int = 0) -> dict:
    """Absorb the cocycle into matrices: on A (x) M_|F| the unitaries

        v_s = sum_g omega(s, g)* (x) E_{sg, g}

    implement an untwisted action beta_s = Ad(v_s) o (alpha_s (x) id); the
    exterior-equivalence cocycle v_s (alpha_s (x) id)(v_t) (omega(s,t) (x) 1)
    v_{st}* is checked to be 1, and the profiles of (A x_{alpha,omega} F)
    (x) M_|F| and (A (x) M_|F|) x_beta F are compared."""
    A, F = sys.algebra, sys.group
    f, n, D = F.order, A.dim, A.rep_dim
    if n * f * f > CROSSED_CAP:
        raise ResourceCapError("stabilized system exceeds the resource cap")
    big = tensor_algebra(A, matrix_algebra(f))
    Dt = D * f
    # everything below uses the same kron(A-factor, M_f-factor) layout as
    # tensor_algebra; the M_f slot of a matrix M is the strided view M[k::f, l::f]
    v = np.zeros((f, Dt, Dt), dtype=np.complex128)
    for s in range(f):
        for g in range(f):
            W = A.element(sys.omega[s, g]).conj().T
            unit = np.zeros((f, f))
            unit[F.mul(s, g), g] = 1.0
            v[s] += np.kron(W, unit)
    eye = np.eye(Dt)
    for s in range(f):
        if np.abs(v[s] @ v[s].conj().T - eye).max() > TOL:
            raise VerificationError("stabilizing unitary is not unitary")

    def alpha_tensor(s: int, M: np.ndarray) -> np.ndarray:
        out = np.zeros_like(M)
        for k in range(f):
            for l in range(f):
                blk = M[k::f, l::f]
                if np.abs(blk).max() > 1e-12:
                    out[k::f, l::f] = A.element(sys.alpha[s] @ A.coords(blk))
        return out

    sigma_dev = 0.0
    for s in range(f):
        for t in range(f):
            st = F.mul(s, t)
            wst = np.kron(A.element(sys.omega[s, t]), np.eye(f))
            lhs = v[s] @ alpha_tensor(s, v[t]) @ wst @ v[st].conj().T
            sigma_dev = max(sigma_dev, float(np.abs(lhs - eye).max()))
    if sigma_dev > TOL:
        raise VerificationError(f"stabilization cocycle deviates from 1 by {sigma_dev:.2e}")
    beta = np.zeros((f, big.dim, big.dim), dtype=np.complex128)
    for s in range(f):
        moved = np.empty((big.dim, Dt, Dt), dtype=np.complex128)
        for idx in range(big.dim):
            moved[idx] = v[s] @ alpha_tensor(s, big.basis[idx]) @ v[s].conj().T
        beta[s] = big.coords_batch(moved).T
    stab = TwistedSystem(big, F, beta, np.broadcast_to(big.unit_coords, (f, f, big.dim)).copy())
    right = block_profile(crossed_product(stab), seed)
    small = block_profile(crossed_product(sys), seed)
    left = block_profile(tensor_algebra(crossed_product(sys), matrix_algebra(f)), seed)
    if left.blocks != right.blocks or left.blocks != tuple(sorted(d * f for d in small.blocks)):
        raise VerificationError(
            f"stabilization mismatch: twisted-then-tensor {left.blocks}, untwisted {right.blocks}"
        )
    return {
        "twisted_profile": list(small.blocks),
        "tensored_profile": list(left.blocks),
        "stabilized_profile": list(right.blocks),
        "sigma_deviation": sigma_dev,
        "matches": True,
    }
