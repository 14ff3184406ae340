"""Central extensions of a finite group by its second homology.

A splitting of the bar complex yields a homology-valued pairing pibar on
the group; the set H2 x G with the product

    (x1, g1) (x2, g2) = (x1 + x2 + pibar(g1, g2), g1 g2)

is a group containing H2 centrally with quotient G.  Everything here is
constructed and then re-verified exhaustively: group axioms, centrality,
exactness, and the section property.  The classification helpers label the
result against the builtin groups and count iso classes through Ext groups
of the homology, and each character of H2 cuts the extension's group
algebra down to one twisted-algebra fiber.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import intlin
from .cocycles import Cocycle2
from .errors import ResourceCapError, VerificationError
from .groups import (
    FiniteGroup,
    Homomorphism,
    Subgroup,
    center,
    cyclic,
    dihedral,
    direct_product,
    is_isomorphic_small,
    klein,
    quaternion8,
)
from .homology import Character, SplittingData, build_chain, characters_for_factors, h1, h2, make_splitting
from .staralg import StarAlgebra, block_profile, cutdown_fiber

EXTENSION_CAP = 256
CLASSIFY_CAP = 16

_KLEIN_NAMES = {1: "a", 2: "b", 3: "ab"}


def abelian_group(factors: tuple[int, ...]) -> FiniteGroup:
    """Direct sum of cyclic groups; tuple (c_1, ..., c_k) sits at the
    mixed-radix index with the first coordinate most significant."""
    G = cyclic(1)
    for d in factors:
        G = direct_product(G, cyclic(d)) if G.order > 1 else cyclic(d)
    if len(factors) != 1:
        name = "+".join(f"Z/{d}" for d in factors) or "0"
        G = FiniteGroup(G.table, name=name)
    return G


def _mixed_radix_strides(factors: tuple[int, ...]) -> list[int]:
    strides = []
    acc = 1
    for d in reversed(factors):
        strides.append(acc)
        acc *= d
    return list(reversed(strides))


@dataclass(frozen=True, eq=False)
class CentralExtension:
    """The extension group E with its embedding of H2 and projection to G.

    offset is the H2 coordinate tuple o with (o, e) the identity of E;
    section_map[g] is the index of the canonical lift (o, g) in E.
    Construction re-verifies centrality, exactness, surjectivity, and the
    section property on top of the group-axiom checks already run by the
    total group's constructor.
    """

    base: FiniteGroup
    h2: intlin.AbelianInvariants
    split: SplittingData
    total: FiniteGroup
    embed: Homomorphism
    project: Homomorphism
    offset: tuple[int, ...]
    section_map: np.ndarray = field(repr=False)

    def __post_init__(self):
        E, G = self.total, self.base
        if E.order != self.h2.order() * G.order:
            raise VerificationError("extension order is not |H2| * |G|")
        image = sorted(int(x) for x in self.embed.map)
        if not set(image) <= set(center(E).members):
            raise VerificationError("embedded homology is not central")
        kernel = sorted(i for i in range(E.order) if self.project.map[i] == 0)
        if image != kernel:
            raise VerificationError("embedding image differs from the projection kernel")
        if not self.project.is_surjective():
            raise VerificationError("projection is not surjective")
        smap = np.asarray(self.section_map, dtype=np.int64)
        smap.setflags(write=False)
        object.__setattr__(self, "section_map", smap)
        if smap.shape != (G.order,) or not np.array_equal(self.project.map[smap], np.arange(G.order)):
            raise VerificationError("section is not a right inverse of the projection")

    def section(self, g: int) -> int:
        return int(self.section_map[g])

    @property
    def kernel_subgroup(self) -> Subgroup:
        return Subgroup(self.total, tuple(int(x) for x in self.embed.map))


def build_extension(G: FiniteGroup, split: SplittingData) -> CentralExtension:
    """Assemble and fully verify the central extension defined by a splitting."""
    if not np.array_equal(split.chain.group.table, G.table):
        raise ValueError("splitting belongs to a different group")
    pres = split.h2
    factors = pres.invariant_factors
    h2_inv = intlin.AbelianInvariants(factors)
    m = G.order
    nH = h2_inv.order()
    size = nH * m
    if size > EXTENSION_CAP:
        raise ResourceCapError(f"extension order {size} exceeds {EXTENSION_CAP}")
    k = len(factors)
    pibar = split.pibar_table  # (k, m, m), entries already reduced mod the factors
    mods = np.array(factors, dtype=np.int64)
    strides = np.array(_mixed_radix_strides(factors), dtype=np.int64)

    coords = np.empty((nH, k), dtype=np.int64)
    for x in range(nH):
        rem = x
        for i in range(k):
            coords[x, i] = rem // strides[i]
            rem %= strides[i]

    o = (-pibar[:, 0, 0]) % mods if k else np.empty(0, dtype=np.int64)
    o_idx = int(o @ strides) if k else 0

    # raw index of (x, g) is x*m + g; then swap so the identity (o, e) is 0
    raw = np.empty((size, size), dtype=np.int64)
    for x1 in range(nH):
        for g1 in range(m):
            row = x1 * m + g1
            for x2 in range(nH):
                if k:
                    newx = (coords[x1] + coords[x2] + pibar[:, g1, :].T) % mods
                    idx = newx @ strides
                else:
                    idx = np.zeros(m, dtype=np.int64)
                raw[row, x2 * m : (x2 + 1) * m] = idx * m + G.table[g1]
    id_raw = o_idx * m
    perm = np.arange(size, dtype=np.int64)
    perm[0], perm[id_raw] = id_raw, 0
    table = np.empty_like(raw)
    table[perm[:, None], perm[None, :]] = perm[raw]
    E = FiniteGroup(table, name=f"ext({G.name})")

    Hgrp = abelian_group(factors)
    emb_map = np.empty(nH, dtype=np.int64)
    for z in range(nH):
        zc = (coords[z] + o) % mods if k else o
        emb_map[z] = perm[(int(zc @ strides) if k else 0) * m]
    proj_map = np.empty(size, dtype=np.int64)
    for x in range(nH):
        proj_map[perm[x * m : (x + 1) * m]] = np.arange(m)
    section_map = perm[o_idx * m : o_idx * m + m]

    return CentralExtension(
        base=G,
        h2=h2_inv,
        split=split,
        total=E,
        embed=Homomorphism(Hgrp, E, emb_map),
        project=Homomorphism(E, G, proj_map),
        offset=tuple(int(c) for c in o),
        section_map=section_map,
    )


def sample_extension(G: FiniteGroup, seed: int | None = None) -> CentralExtension:
    """Build the extension for the splitting drawn at the given seed."""
    chain = build_chain(G)
    return build_extension(G, make_splitting(chain, seed=seed))


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ExtensionClass:
    """Iso-class label, plus which nontrivial base elements acquire order-4
    lifts when the base is the four-group (empty otherwise)."""

    label: str
    order4_lifts: tuple[int, ...] = ()


def _builtin_candidates(order: int):
    yield f"cyclic({order})", cyclic(order)
    if order == 4:
        yield "klein", klein()
    if order % 2 == 0 and order >= 6:
        yield f"dihedral({order // 2})", dihedral(order // 2)
    if order == 8:
        yield "quaternion8", quaternion8()


def _canonical_fingerprint(G: FiniteGroup) -> str:
    """Relabeling-invariant hash: the lexicographically least Cayley table
    over breadth-first relabelings rooted at every generating sequence of
    the shortest length."""
    m = G.order
    tbl = G.table
    best: bytes | None = None
    for length in range(1, m):
        for seq in itertools.permutations(range(1, m), length):
            order = [0]
            pos = {0}
            qi = 0
            while qi < len(order) and len(order) < m:
                x = order[qi]
                qi += 1
                for g in seq:
                    y = int(tbl[x, g])
                    if y not in pos:
                        pos.add(y)
                        order.append(y)
            if len(order) < m:
                continue
            inv = np.empty(m, dtype=np.int64)
            for new_i, old in enumerate(order):
                inv[old] = new_i
            cand = inv[tbl[np.ix_(order, order)]].tobytes()
            if best is None or cand < best:
                best = cand
        if best is not None:
            break
    assert best is not None
    return "unclassified:" + hashlib.sha256(best).hexdigest()[:16]


def classify_extension(ext: CentralExtension) -> ExtensionClass:
    """Label the total group up to isomorphism.

    Over the four-group with |H2| = 2 the label also separates the three
    dihedral extensions: exactly one nontrivial base element then lifts to
    order-4 elements, giving D4(a), D4(b), D4(ab); all three lift to order
    4 in the quaternion case Q8.
    """
    E = ext.total
    if E.order > CLASSIFY_CAP:
        raise ResourceCapError(f"classification capped at order {CLASSIFY_CAP}, got {E.order}")
    lifts: tuple[int, ...] = ()
    if np.array_equal(ext.base.table, klein().table):
        found = []
        for g in range(1, 4):
            fiber_orders = {E.order_of(e) for e in range(E.order) if ext.project.map[e] == g}
            if 4 in fiber_orders:
                found.append(g)
        lifts = tuple(found)
        if E.order == 8:
            if len(lifts) == 3 and is_isomorphic_small(E, quaternion8()):
                return ExtensionClass("Q8", lifts)
            if len(lifts) == 1 and is_isomorphic_small(E, dihedral(4)):
                return ExtensionClass(f"D4({_KLEIN_NAMES[lifts[0]]})", lifts)
    for name, H in _builtin_candidates(E.order):
        if is_isomorphic_small(E, H):
            return ExtensionClass(name, lifts)
    return ExtensionClass(_canonical_fingerprint(E), lifts)


def count_extension_classes(G: FiniteGroup) -> tuple[intlin.AbelianInvariants, intlin.AbelianInvariants]:
    """(strong, weak) counts of central extensions of G by its second
    homology up to the two equivalences: congruence classes form a torsor
    over Ext(H1, H2), while weak (fiber-respecting) classes quotient
    further down to Ext(H1, free part of H2)."""
    a = h1(G)
    b = h2(G)
    free_part = intlin.AbelianInvariants((), free_rank=b.free_rank)
    return intlin.ext_group(a, b), intlin.ext_group(a, free_part)


# ---------------------------------------------------------------------------
# fibers


def cocycle_of_character(split: SplittingData, chi: Character) -> Cocycle2:
    """The scalar cocycle chi(pibar(g1, g2)) on the base group."""
    pres = split.h2
    if chi.invariant_factors != pres.invariant_factors:
        raise ValueError("character does not match the homology invariants")
    G = split.chain.group
    m = G.order
    pibar = split.pibar_table
    table = np.empty((m, m), dtype=object)
    for g1 in range(m):
        for g2 in range(m):
            table[g1, g2] = chi(pibar[:, g1, g2])
    return Cocycle2(G, table)


def fiber_of_extension(ext: CentralExtension, chi: Character) -> StarAlgebra:
    """Cut C[E] down by the central idempotent of chi pushed through the
    embedding of the homology."""
    if chi.invariant_factors != ext.h2.torsion:
        raise ValueError("character does not match the extension's homology")
    strides = _mixed_radix_strides(ext.h2.torsion)
    chi_map: dict[int, Fraction] = {}
    for z in range(ext.h2.order()):
        rem, zc = z, []
        for s in strides:
            zc.append(rem // s)
            rem %= s
        chi_map[int(ext.embed.map[z])] = chi(zc)
    return cutdown_fiber(ext.total, ext.kernel_subgroup, chi_map)


def extension_report(ext: CentralExtension, seed: int = 0) -> dict:
    """JSON-ready summary: base, homology invariants, iso label, order-4
    lifts, and the block profile of every character fiber."""
    cls = classify_extension(ext) if ext.total.order <= CLASSIFY_CAP else None
    fibers = []
    for chi in characters_for_factors(ext.split.h2.invariant_factors):
        prof = block_profile(fiber_of_extension(ext, chi), seed)
        fibers.append({"chi": [str(a) for a in chi.angles], "blocks": list(prof.blocks)})
    return {
        "base": ext.base.name,
        "h2": ext.h2.to_json(),
        "class": cls.label if cls else None,
        "order4_lifts": list(cls.order4_lifts) if cls else [],
        "fibers": fibers,
    }
