"""Promote an m-partite basis to m + 1 parties.

Each member ``sum_l lam_l |psi^l>`` becomes ``d`` members
``sum_l lam_l |psi^l>|(j + l) mod d>`` for ``j = 0..d-1``.  When the lifted set
is orthonormal its span is the parent span tensored with ``C^d``; it is not
orthonormal for every parent (see ``lift_uebk``).  Product bases (k = 1) simply
gain a computational-basis factor.
"""

import warnings

import numpy as np

from . import states as st
from .constructors import BasisCandidate, _normalize_members
from .errors import InvalidDimension, InvalidK, LiftBlocked, NonOrthogonalLift


def member_forms(b, rng=0, restarts=50):
    """Schmidt form of every member, stored ones first; raises LiftBlocked."""
    forms = []
    for i, psi in enumerate(b.members):
        form = b.forms[i] if b.forms is not None else None
        if form is None:
            form = st.schmidt_form(psi, rng=rng, restarts=restarts)
        if not isinstance(form, st.SchmidtForm):
            raise LiftBlocked(i, form.reason)
        if form.k != b.k:
            raise LiftBlocked(i, f"Schmidt number {form.k} differs from declared k={b.k}")
        forms.append(form)
    return forms


def _lift_form(form, d, j):
    k = form.k
    last = np.zeros((d, k), dtype=complex)
    last[(j + np.arange(k)) % d, np.arange(k)] = 1
    frames = form.frames + (last,)
    lifted = st.SchmidtForm(form.coefficients, frames, check=False)
    return lifted.state(), lifted


def lift_uebk(b, d_next, rng=0):
    """Lift every member by the cyclic rule; member count grows by ``d_next``.

    Emits NonOrthogonalLift when the result is not orthonormal, which happens
    when distinct parents have overlapping Schmidt branches (the three-member
    two-qubit UEB2 is one such parent).
    """
    d_next = int(d_next)
    if d_next < 2:
        raise InvalidDimension(f"new party dimension must be at least 2, got {d_next}")
    if d_next < b.k:
        # the branches would share last-party vectors, so no member could keep
        # Schmidt number k
        raise InvalidDimension(f"new party dimension {d_next} is below k={b.k}")
    members, forms = [], []
    for form in member_forms(b, rng):
        for j in range(d_next):
            psi, f = _lift_form(form, d_next, j)
            members.append(psi)
            forms.append(f)
    members, forms = _normalize_members(members, forms)
    # Orthogonality of the lifted set needs more than orthogonality of the
    # parents: branch-wise cross terms sum_l lam_l lam'_l <psi^l|psi'^l> must
    # vanish too.  That holds for the catalog bases built from disjoint
    # patterns but not for every UEBk, so check instead of assuming.
    residual = float(np.abs(st.gram(members) - np.eye(len(members))).max())
    if residual > 1e-10:
        warnings.warn(
            f"lifted set is not orthonormal (Gram residual {residual:.3g}); "
            "the parent's Schmidt branches are not mutually orthogonal",
            NonOrthogonalLift,
            stacklevel=2,
        )
    prov = {"constructor": "lift", "d_next": d_next, "parent": b.provenance}
    return BasisCandidate(b.dims + (d_next,), b.k, members, prov, b.claimed_special, forms)


def lift_upb(b, d_next):
    """Append ``|j>`` to every member of a product basis."""
    if b.k != 1:
        raise InvalidK(f"lift_upb needs k = 1, got k={b.k}")
    d_next = int(d_next)
    if d_next < 2:
        raise InvalidDimension(f"new party dimension must be at least 2, got {d_next}")
    members = []
    for psi in b.members:
        for j in range(d_next):
            members.append(st.tensor(psi, st.basis_state((d_next,), (j,))))
    forms = None
    if b.forms is not None and all(f is not None for f in b.forms):
        forms = tuple(
            st.SchmidtForm(f.coefficients, f.frames + (np.eye(d_next)[:, [j]],), check=False)
            for f in b.forms
            for j in range(d_next)
        )
    prov = {"constructor": "lift_upb", "d_next": d_next, "parent": b.provenance}
    return BasisCandidate(b.dims + (d_next,), 1, members, prov, b.claimed_special, forms)


def lift_chain(b, dims_next, rng=0):
    for d in dims_next:
        b = lift_upb(b, d) if b.k == 1 else lift_uebk(b, d, rng)
    return b
