"""Bipartite UEBk pipeline and the named example bases."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import numerics
from . import patterns as pt
from . import states as st
from .errors import InvalidArity, InvalidInput, InvalidK, InvalidParameters


@dataclass(frozen=True, eq=False)
class BasisCandidate:
    """Orthonormal state set claimed to be an unextendible basis of Schmidt number ``k``.

    ``forms`` optionally holds a known Schmidt form per member.  Lifting uses
    it to keep the branch order a construction intends; when absent, forms are
    extracted numerically.
    """

    dims: tuple
    k: int
    members: tuple
    provenance: dict = field(default_factory=dict)
    claimed_special: bool = False
    forms: Optional[tuple] = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "members", tuple(self.members))
        if not 1 <= self.k <= min(dims):
            raise InvalidInput(f"k={self.k} outside [1, {min(dims)}] for dims {dims}")
        if len(self.members) >= self.total_dim:
            raise InvalidInput(
                f"{len(self.members)} members do not leave a complement in dimension {self.total_dim}"
            )
        for i, m in enumerate(self.members):
            if m.dims != dims:
                raise InvalidInput(f"member {i} has dims {m.dims}, expected {dims}")
            if abs(m.norm() - 1) > 1e-10:
                raise InvalidInput(f"member {i} is not normalized (norm {m.norm():.3g})")
        if self.forms is not None and len(self.forms) != len(self.members):
            raise InvalidInput("forms must list one entry per member")

    @property
    def n(self):
        return len(self.members)

    @property
    def m(self):
        return len(self.dims)

    @property
    def total_dim(self):
        return int(np.prod(self.dims))

    def matrix(self):
        """Members as the rows of an ``n x prod(dims)`` array."""
        return np.array([s.vector for s in self.members])

    def matrices(self, cut=(0,)):
        return [st.matricize(s, cut) for s in self.members]


def _normalize_members(states, forms=None):
    out_states, out_forms = [], []
    for i, s in enumerate(states):
        ph = numerics._lead_phase(s.vector)
        out_states.append(s.scaled(1 / ph))
        if forms is not None:
            f = forms[i]
            out_forms.append(None if f is None else f.scaled(1 / ph))
    return tuple(out_states), (tuple(out_forms) if forms is not None else None)


def _parse_variant(variant):
    if variant is None:
        return None
    if isinstance(variant, str):
        v = variant.lower().strip()
        if v == "general":
            return "general"
        v = v.lstrip("v")
        if not v.isdigit():
            raise InvalidParameters(f"unknown variant {variant!r}")
        return int(v)
    return int(variant)


def core_decomposition(k, r, rp, variant=None):
    """Decomposition of the ``(k+r) x (k+r')`` corner block."""
    variant = _parse_variant(variant)
    if variant == "general" or k >= 4:
        return pt.general_decomposition(k, r, rp)
    lo, hi = sorted((k + r, k + rp))
    if k == 2:
        dec = pt.catalog_k2((lo, hi), variant)
    else:
        dec = pt.catalog_k3((lo, hi))
    return dec if r <= rp else dec.T


def construct_bipartite_uebk(d1, d2, k, variant=None, rng=None):
    """UEBk in ``C^d1 (x) C^d2``.

    With ``d1 = s k + r`` and ``d2 = s' k + r'`` the coefficient space splits
    into a ``d1 x (s'-1)k`` tile, a ``(s-1)k x (k+r')`` tile, both filled with
    complete rank-k bases, and a ``(k+r) x (k+r')`` corner split by a zero
    pattern decomposition.  ``rng`` None uses canonical isometries; an int or
    generator draws seeded zero-free unitaries instead.
    """
    d1, d2, k = int(d1), int(d2), int(k)
    if min(d1, d2) < 2:
        raise InvalidParameters("party dimensions must be at least 2")
    if not 2 <= k <= min(d1, d2):
        raise InvalidK(f"need 2 <= k <= {min(d1, d2)}, got k={k}")
    if d1 > d2:
        b = construct_bipartite_uebk(d2, d1, k, variant, rng)
        members = [st.from_matrix(st.matricize(s, (0,)).T) for s in b.members]
        members, _ = _normalize_members(members)
        prov = dict(b.provenance, d1=d1, d2=d2, transposed=True)
        prov["residual_cells"] = [[j, i] for i, j in b.provenance["residual_cells"]]
        return BasisCandidate((d1, d2), k, members, prov)

    s, r = divmod(d1, k)
    sp, rp = divmod(d2, k)
    dec = core_decomposition(k, r, rp, variant)
    seed = rng if isinstance(rng, (int, np.integer)) else None
    core = pt.realize(dec, rng)

    mats = []
    left = (sp - 1) * k
    if left:
        for a in pt.complete_rank_k_basis(d1, left, k).matrices:
            x = np.zeros((d1, d2), dtype=complex)
            x[:, :left] = a
            mats.append(x)
    top = (s - 1) * k
    if top:
        for a in pt.complete_rank_k_basis(top, k + rp, k).matrices:
            x = np.zeros((d1, d2), dtype=complex)
            x[:top, left:] = a
            mats.append(x)
    for a in core.matrices:
        x = np.zeros((d1, d2), dtype=complex)
        x[top:, left:] = a
        mats.append(x)

    members, _ = _normalize_members([st.from_matrix(x) for x in mats])
    prov = {
        "constructor": "bipartite_uebk",
        "d1": d1,
        "d2": d2,
        "k": k,
        "decomposition": dec.name,
        "isometry": "canonical" if rng is None else "seeded",
        "seed": seed,
        "residual_cells": [[i + top, j + left] for i, j in dec.residual.cells],
    }
    return BasisCandidate((d1, d2), k, members, prov)


def _bipartite(name, mats, k, special=False, forms=None, **extra):
    members, forms = _normalize_members([st.from_matrix(a) for a in mats], forms)
    prov = {"constructor": name, **extra}
    dims = members[0].dims
    return BasisCandidate(dims, k, members, prov, special, forms)


def ueb2_2x2():
    """The three-member UEB2 of two qubits with coefficient matrices (2/3)J - I columns."""
    mats = [
        np.array([[-1, 0], [2, 2]]) / 3,
        np.array([[2, 0], [-1, 2]]) / 3,
        np.array([[2, 0], [2, -1]]) / 3,
    ]
    return _bipartite("ueb2_2x2", mats, 2)


def nonpattern_ueb2_2x2():
    """Three-member UEB2 of two qubits whose members share no zero entry."""
    mats = [
        (2 / 5) * np.array([[1 / 2, 2], [1, 1]]),
        (4 / np.sqrt(73)) * np.array([[1, -5 / 4], [1, 1]]),
        (21 / np.sqrt(3650)) * np.array([[52 / 21, 8 / 21], [-1, -1]]),
    ]
    return _bipartite("nonpattern_ueb2_2x2", mats, 2)


def ueb2_2x3():
    """Four-member UEB2 in 2 (x) 3 with Schmidt coefficients {1/2, sqrt(3)/2}.

    The stored forms keep the displayed branch order, which fixes how the
    members lift.
    """
    a, b = 0.5, np.sqrt(3) / 2
    e2, e3 = np.eye(2), np.eye(3)
    second = [
        ((a, b), np.column_stack([e3[0], e3[1]])),
        ((b, a), np.column_stack([e3[0], -e3[1]])),
        ((a, b), np.column_stack([e3[1], e3[0]])),
        ((b, a), np.column_stack([e3[1], -e3[0]])),
    ]
    forms = [st.SchmidtForm(lam, (e2, f2)) for lam, f2 in second]
    mats = [st.matricize(f.state(), (0,)) for f in forms]
    return _bipartite("ueb2_2x3", mats, 2, forms=forms)


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def umeb_2x3():
    """Four maximally entangled states ``(sigma_i (x) I)(|00> + |11>)/sqrt 2`` in 2 (x) 3."""
    ops = (np.eye(2, dtype=complex),) + _PAULI
    lam = np.full(2, 1 / np.sqrt(2))
    mats, forms = [], []
    for op in ops:
        f1 = op @ np.eye(2)
        f2 = np.eye(3, 2, dtype=complex)
        form = st.SchmidtForm(lam, (f1, f2))
        forms.append(form)
        mats.append(st.matricize(form.state(), (0,)))
    return _bipartite("umeb23", mats, 2, special=True, forms=forms)


def _product_basis(name, pairs, dims, **extra):
    members, forms = [], []
    for u, v in pairs:
        u = np.asarray(u, dtype=complex) / np.linalg.norm(u)
        v = np.asarray(v, dtype=complex) / np.linalg.norm(v)
        members.append(st.product_state(u, v))
        forms.append(st.SchmidtForm((1.0,), (u[:, None], v[:, None])))
    members, forms = _normalize_members(members, forms)
    return BasisCandidate(dims, 1, members, {"constructor": name, **extra}, False, forms)


def tiles_upb_3x3():
    """The five-member TILES UPB of 3 (x) 3."""
    e = np.eye(3)
    pairs = [
        (e[0], e[0] - e[1]),
        (e[2], e[1] - e[2]),
        (e[0] - e[1], e[2]),
        (e[1] - e[2], e[0]),
        (e.sum(0), e.sum(0)),
    ]
    return _product_basis("tiles", pairs, (3, 3), known_upb="TILES")


PYRAMID_H = 0.5 * np.sqrt(1 + np.sqrt(5))
PYRAMID_N = 2 / np.sqrt(5 + np.sqrt(5))


def pyramid_vectors():
    i = np.arange(5)
    return PYRAMID_N * np.column_stack(
        [np.cos(2 * np.pi * i / 5), np.sin(2 * np.pi * i / 5), np.full(5, PYRAMID_H)]
    )


def pyramid_upb_3x3():
    """The five-member Pyramid UPB ``|v_i>|v_{2i mod 5}>`` of 3 (x) 3."""
    v = pyramid_vectors()
    pairs = [(v[i], v[(2 * i) % 5]) for i in range(5)]
    return _product_basis("pyramid", pairs, (3, 3), known_upb="Pyramid")


def hs_basis_3qubit():
    """Six three-qubit states whose 1|23 matricizations form a rank-2 HS basis.

    Their matricizations are unextendible at that cut, yet the states are not
    a tripartite UEB2: several have no tripartite Schmidt form.
    """
    blocks = [np.array([[-1, 0], [2, 2]]), np.array([[2, 0], [-1, 2]]), np.array([[2, 0], [2, -1]])]
    mats = []
    for offset in (0, 2):
        for blk in blocks:
            x = np.zeros((2, 4))
            x[:, offset : offset + 2] = blk / 3
            mats.append(x)
    members, _ = _normalize_members([st.dematricize(x, (2, 2, 2), (0,)) for x in mats])
    return BasisCandidate((2, 2, 2), 2, members, {"constructor": "hs_basis_3qubit"})


def suebk_tripartite(d1, d2, d3, k):
    """Tripartite SUEBk with members
    ``(1/sqrt k) sum_p zeta_k^(n p) |p+m mod d1>|(l-1)k+p>|p+s mod d3>``.

    Requires ``1 < k < d1 <= d2``, ``d3 >= k`` and ``d2 = t k + r`` with ``0 < r < k``;
    yields ``t k d1 d3`` members.
    """
    d1, d2, d3, k = int(d1), int(d2), int(d3), int(k)
    t, r = divmod(d2, k)
    if not (1 < k < d1 <= d2) or r == 0 or d3 < k:
        raise InvalidParameters(
            f"need 1 < k < d1 <= d2, d2 not a multiple of k and d3 >= k; got {(d1, d2, d3, k)}"
        )
    zeta = np.exp(2j * np.pi / k)
    p = np.arange(k)
    lam = np.full(k, 1 / np.sqrt(k))
    members, forms = [], []
    for m in range(d1):
        for n in range(k):
            for l in range(t):
                for s in range(d3):
                    f1 = np.zeros((d1, k), dtype=complex)
                    f2 = np.zeros((d2, k), dtype=complex)
                    f3 = np.zeros((d3, k), dtype=complex)
                    f1[(p + m) % d1, p] = 1
                    f2[l * k + p, p] = 1
                    f3[(p + s) % d3, p] = zeta ** (n * p)
                    form = st.SchmidtForm(lam, (f1, f2, f3))
                    members.append(form.state())
                    forms.append(form)
    members, forms = _normalize_members(members, forms)
    prov = {"constructor": "suebk3", "d1": d1, "d2": d2, "d3": d3, "k": k}
    return BasisCandidate((d1, d2, d3), k, members, prov, True, forms)


def detect_zero_entries_condition(b, atol=1e-12):
    """True when the members share at least ``d1 d2 - n`` zero cells."""
    if b.m != 2:
        raise InvalidArity("zero entries condition is defined for bipartite bases")
    common = np.ones(b.dims, dtype=bool)
    for a in b.matrices():
        common &= np.abs(a) <= atol
    return int(common.sum()) >= b.total_dim - b.n


EXAMPLES = {
    "eq4": hs_basis_3qubit,
    "eq6": ueb2_2x2,
    "eq9": nonpattern_ueb2_2x2,
    "eq14": ueb2_2x3,
    "tiles": tiles_upb_3x3,
    "pyramid": pyramid_upb_3x3,
    "umeb23": umeb_2x3,
}
