"""Low-degree homology of a finite group from its bar complex.

C_n is the free abelian group on n-tuples of group elements (lexicographic
basis order), with boundaries

    d2(g1, g2)     = (g1) - (g1 g2) + (g2)
    d3(g1, g2, g3) = (g2, g3) - (g1 g2, g3) + (g1, g2 g3) - (g1, g2)

H1 = C1 / im(d2) and H2 = ker(d2) / im(d3); both are finite here.  The
module also produces splittings sigma of d2 onto its image, the induced
projection pi = id - sigma d2 onto the cycle lattice, and its reduction
pibar to H2 coordinates, which downstream code feeds into extension and
twisted-algebra constructions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import intlin
from .errors import ResourceCapError, VerificationError
from .groups import FiniteGroup

_ORDER_CAP = 24


@dataclass(frozen=True)
class ChainData:
    """Bar-complex boundary matrices of one group.

    d2 has shape (m, m^2), d3 has shape (m^2, m^3); the basis tuple at
    flat index i*m + j is (g_i, g_j), and likewise for triples.
    """

    group: FiniteGroup
    d2: np.ndarray
    d3: np.ndarray

    @property
    def m(self) -> int:
        return self.group.order

    def pair_index(self, g1: int, g2: int) -> int:
        return g1 * self.m + g2

    def triple_index(self, g1: int, g2: int, g3: int) -> int:
        return (g1 * self.m + g2) * self.m + g3


def build_chain(G: FiniteGroup) -> ChainData:
    """Boundary matrices of the bar complex; verifies d2 @ d3 = 0."""
    m = G.order
    if m > _ORDER_CAP:
        raise ResourceCapError(f"bar complex capped at order {_ORDER_CAP}, got {m}")
    tbl = G.table
    cols2 = np.arange(m * m)
    g1 = cols2 // m
    g2 = cols2 % m
    d2 = np.zeros((m, m * m), dtype=np.int64)
    np.add.at(d2, (g1, cols2), 1)
    np.add.at(d2, (g2, cols2), 1)
    np.add.at(d2, (tbl[g1, g2], cols2), -1)

    cols3 = np.arange(m * m * m)
    h1 = cols3 // (m * m)
    h2 = (cols3 // m) % m
    h3 = cols3 % m
    d3 = np.zeros((m * m, m * m * m), dtype=np.int64)
    np.add.at(d3, (h2 * m + h3, cols3), 1)
    np.add.at(d3, (tbl[h1, h2] * m + h3, cols3), -1)
    np.add.at(d3, (h1 * m + tbl[h2, h3], cols3), 1)
    np.add.at(d3, (h1 * m + h2, cols3), -1)

    if np.any(d2 @ d3):
        raise VerificationError("d2 @ d3 != 0")
    d2.setflags(write=False)
    d3.setflags(write=False)
    return ChainData(G, d2, d3)


@dataclass(frozen=True)
class H2Presentation:
    """H2 = Z2/B2 in invariant-factor coordinates.

    kernel: columns form a basis of the cycle lattice Z2 in C2 coordinates.
    invariant_factors: the d_i >= 2 of H2 = sum of Z/d_i.
    reduce_rows: matrix W; a cycle with kernel coordinates w has H2
        coordinates (W @ w) mod d, componentwise.
    cycles: one representative 2-cycle per invariant factor (C2 coords),
        chosen so cycle i has H2 coordinates e_i.
    """

    chain: ChainData
    kernel: np.ndarray
    kernel_hnf: tuple
    invariant_factors: tuple[int, ...]
    reduce_rows: np.ndarray
    cycles: np.ndarray

    @property
    def invariants(self) -> intlin.AbelianInvariants:
        return intlin.AbelianInvariants(self.invariant_factors)

    def h2_coordinates(self, cycle_vec) -> tuple[int, ...]:
        """H2 class of a 2-cycle given in C2 coordinates."""
        w = intlin.solve_in_image(self.kernel, np.asarray(cycle_vec))
        raw = intlin.exact_matmul(self.reduce_rows, w.reshape(-1, 1))[:, 0]
        return tuple(int(r) % d for r, d in zip(raw, self.invariant_factors))


def h2_presentation(chain: ChainData) -> H2Presentation:
    K = intlin.kernel_basis(chain.d2)
    z = K.shape[1]
    hnfK = intlin.column_hnf(K)
    # boundary columns in kernel coordinates; duplicates and zero columns
    # carry no extra span
    nz = chain.d3[:, np.any(chain.d3 != 0, axis=0)]
    cols = np.unique(nz, axis=1) if nz.size else nz
    X = intlin.solve_batch_in_image(K, cols, hnf_data=hnfK)
    # compress the many columns down to at most z before the Smith form
    HX, _, pivX = intlin.column_hnf(X)
    Xc = HX[:, : len(pivX)]
    D, U, _ = intlin.smith_normal_form(Xc)
    diag = [int(D[i, i]) for i in range(min(D.shape))] + [0] * (z - min(D.shape))
    if any(d == 0 for d in diag):
        raise VerificationError("H2 of a finite group must be finite")
    rho = [i for i, d in enumerate(diag) if d >= 2]
    factors = tuple(diag[i] for i in rho)
    W = np.asarray(U)[rho, :]
    Uinv = intlin.unimodular_inverse(U)
    cycles = intlin.exact_matmul(K, np.asarray(Uinv)[:, rho])
    return H2Presentation(
        chain=chain,
        kernel=K,
        kernel_hnf=hnfK,
        invariant_factors=factors,
        reduce_rows=W,
        cycles=cycles,
    )


def h1(G: FiniteGroup) -> intlin.AbelianInvariants:
    """C1 modulo boundaries; coincides with the abelianization of G."""
    chain = build_chain(G)
    return intlin.cokernel_invariants(chain.d2)


def h2(G: FiniteGroup) -> intlin.AbelianInvariants:
    return h2_presentation(build_chain(G)).invariants


@dataclass(frozen=True)
class SplittingData:
    """A splitting sigma of d2 over its image, with the induced projection.

    b1_basis columns span B1 = im(d2) in C1 coordinates; sigma columns are
    their chosen preimages in C2, so d2 @ sigma = b1_basis.  pi = id -
    sigma_after_d2 projects C2 onto the cycle lattice, and pibar_matrix
    reduces that to H2: the class of basis pair c is pibar_matrix[:, c]
    mod the invariant factors.
    """

    chain: ChainData
    h2: H2Presentation
    seed: int | None
    b1_basis: np.ndarray
    sigma: np.ndarray
    pi: np.ndarray
    pibar_matrix: np.ndarray
    delta_coeffs: np.ndarray
    d2_in_b1: np.ndarray

    @property
    def pibar_table(self) -> np.ndarray:
        """(k, m, m) array of reduced H2 coordinates per basis pair."""
        d = np.array(self.h2.invariant_factors, dtype=np.int64)
        k = len(self.h2.invariant_factors)
        m = self.chain.m
        if k == 0:
            return np.zeros((0, m, m), dtype=np.int64)
        red = np.mod(self.pibar_matrix, d.reshape(-1, 1))
        return np.asarray(red, dtype=np.int64).reshape(k, m, m)


def make_splitting(
    chain: ChainData,
    seed: int | None = None,
    presentation: H2Presentation | None = None,
) -> SplittingData:
    """Choose preimages of the boundary lattice B1 under d2.

    The default is the Hermite-canonical choice; with a seed, a
    pseudo-random element of Hom(B1, Z2) with entries in [-2, 2] is added,
    which still splits because d2 kills the cycle lattice.  All defining
    identities are verified before returning.  Pass a precomputed
    presentation when drawing many splittings of one chain.
    """
    pres = presentation if presentation is not None else h2_presentation(chain)
    if presentation is not None and not np.array_equal(
        presentation.chain.group.table, chain.group.table
    ):
        raise ValueError("presentation belongs to a different chain")
    K = pres.kernel
    z = K.shape[1]
    Hd2, Vd2, piv2 = intlin.column_hnf(chain.d2)
    rb = len(piv2)
    Hb = Hd2[:, :rb]
    S = Vd2[:, :rb]
    if seed is None:
        R = np.zeros((z, rb), dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        R = rng.integers(-2, 3, size=(z, rb))
        S = S + intlin.exact_matmul(K, R)
    if not np.array_equal(intlin.exact_matmul(chain.d2, S), Hb):
        raise VerificationError("sigma does not split d2")
    T = intlin.solve_batch_in_image(Hb, chain.d2)  # d2 in B1 coordinates
    n2 = chain.m * chain.m
    eye = np.eye(n2, dtype=np.int64)
    pi = eye - intlin.exact_matmul(S, T)
    if np.any(intlin.exact_matmul(chain.d2, pi)):
        raise VerificationError("pi does not land in the cycle lattice")
    P = intlin.solve_batch_in_image(K, pi, hnf_data=pres.kernel_hnf)
    pibar = intlin.exact_matmul(pres.reduce_rows, P)
    d = np.array(pres.invariant_factors, dtype=object).reshape(-1, 1)
    if len(pres.invariant_factors):
        boundary_classes = intlin.exact_matmul(pibar, chain.d3)
        if np.any(np.mod(np.asarray(boundary_classes, dtype=object), d)):
            raise VerificationError("pibar does not kill boundaries")
    return SplittingData(
        chain=chain,
        h2=pres,
        seed=seed,
        b1_basis=Hb,
        sigma=S,
        pi=pi,
        pibar_matrix=pibar,
        delta_coeffs=R,
        d2_in_b1=T,
    )


@dataclass(frozen=True)
class Character:
    """A homomorphism H2 -> Q/Z, as rational angles on the invariant-factor
    generators."""

    invariant_factors: tuple[int, ...]
    angles: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.angles) != len(self.invariant_factors):
            raise ValueError("one angle per invariant factor required")
        for a, d in zip(self.angles, self.invariant_factors):
            if not 0 <= a < 1 or (a * d) % 1 != 0:
                raise ValueError(f"angle {a} has order not dividing {d}")

    def __call__(self, coords) -> Fraction:
        total = sum((Fraction(a) * int(c) for a, c in zip(self.angles, coords)), Fraction(0))
        return total % 1

    @property
    def is_trivial(self) -> bool:
        return all(a == 0 for a in self.angles)


def characters_of_h2(G: FiniteGroup) -> list[Character]:
    """All homomorphisms H2(G) -> Q/Z, the trivial one first."""
    factors = h2(G).torsion
    return characters_for_factors(factors)


def characters_for_factors(factors: tuple[int, ...]) -> list[Character]:
    out = []
    for combo in product(*(range(d) for d in factors)):
        out.append(Character(tuple(factors), tuple(Fraction(a, d) for a, d in zip(combo, factors))))
    return out
