"""Multipartite pure states, matricization and Schmidt analysis."""

from dataclasses import dataclass, field
from functools import reduce
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import numerics
from .errors import InvalidArity, InvalidCut, InvalidInput

PRODUCT_TOL = 1e-8
SPECTRUM_TOL = 1e-8
DEGENERACY_GAP = 1e-8
FALLBACK_ACCEPT = 1e-8


@dataclass(frozen=True, eq=False)
class MultiState:
    """Amplitude tensor over parties with dimensions ``dims``.

    ``amplitudes`` has shape ``dims``; flattening in C order puts party 0
    slowest, matching ``|i_1 i_2 ... i_m>`` ordering.
    """

    dims: tuple
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise InvalidInput(f"bad party dimensions {self.dims}")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.size != int(np.prod(dims)):
            raise InvalidInput(
                f"{amps.size} amplitudes do not fit dims {dims} (need {int(np.prod(dims))})"
            )
        if not np.all(np.isfinite(amps)):
            raise InvalidInput("non-finite amplitude")
        amps = amps.reshape(dims).copy()
        amps.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def m(self):
        return len(self.dims)

    @property
    def vector(self):
        return self.amplitudes.reshape(-1)

    def norm(self):
        return float(np.linalg.norm(self.vector))

    def normalized(self):
        return MultiState(self.dims, self.vector / self.norm())

    def scaled(self, c):
        return MultiState(self.dims, self.vector * c)

    def __repr__(self):
        return f"MultiState(dims={self.dims}, nnz={int(np.count_nonzero(np.abs(self.vector) > 1e-14))})"


def basis_state(dims, indices):
    v = np.zeros(dims, dtype=complex)
    v[tuple(indices)] = 1.0
    return MultiState(dims, v)


def product_state(*factors):
    """Tensor product of single-party vectors."""
    factors = [np.asarray(f, dtype=complex).reshape(-1) for f in factors]
    return MultiState(tuple(len(f) for f in factors), reduce(np.kron, factors))


def tensor(*states):
    """Tensor product of MultiStates, concatenating their party lists."""
    dims = sum((s.dims for s in states), ())
    return MultiState(dims, reduce(np.kron, [s.vector for s in states]))


def phase_normalized(psi, atol=1e-12):
    """Remove the global phase: the first largest-modulus amplitude becomes real positive."""
    return psi.scaled(1 / numerics._lead_phase(psi.vector, atol))


class Cut(NamedTuple):
    left: tuple
    right: tuple


def make_cut(left, m):
    """Validate a bipartition of ``range(m)``; ``left`` keeps the given order."""
    if isinstance(left, Cut):
        left = left.left
    if isinstance(left, (int, np.integer)):
        left = (int(left),)
    left = tuple(int(i) for i in left)
    if not left or len(set(left)) != len(left) or len(left) >= m:
        raise InvalidCut(f"left side {left} is not a nonempty proper subset of {m} parties")
    if any(i < 0 or i >= m for i in left):
        raise InvalidCut(f"party index out of range in {left} for {m} parties")
    right = tuple(i for i in range(m) if i not in left)
    return Cut(left, right)


def matricize(psi, cut):
    """Group the parties in ``cut.left`` into rows and the rest into columns."""
    cut = make_cut(cut, psi.m)
    rows = int(np.prod([psi.dims[i] for i in cut.left]))
    return psi.amplitudes.transpose(cut.left + cut.right).reshape(rows, -1)


def dematricize(a, dims, cut):
    dims = tuple(dims)
    cut = make_cut(cut, len(dims))
    a = np.asarray(a, dtype=complex)
    shape = (int(np.prod([dims[i] for i in cut.left])), int(np.prod([dims[i] for i in cut.right])))
    if a.shape != shape:
        raise InvalidInput(f"matrix shape {a.shape} does not match cut shape {shape}")
    t = a.reshape([dims[i] for i in cut.left + cut.right])
    return MultiState(dims, t.transpose(np.argsort(cut.left + cut.right)))


def from_matrix(a):
    """Bipartite state whose coefficient matrix is ``a``."""
    a = np.asarray(a, dtype=complex)
    return MultiState(a.shape, a)


def inner(phi, psi):
    if phi.dims != psi.dims:
        raise InvalidInput(f"dims mismatch {phi.dims} vs {psi.dims}")
    return complex(np.vdot(phi.vector, psi.vector))


def gram(states):
    mat = np.array([s.vector for s in states])
    return mat.conj() @ mat.T


def reduced_density(psi, parties):
    """Reduced state on ``parties`` (traces out the rest)."""
    m_ = matricize(psi, parties)
    return m_ @ m_.conj().T


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """``sum_j coefficients[j] * kron_s frames[s][:, j]``.

    ``frames[s]`` is a ``d_s x k`` array whose columns are orthonormal.
    """

    coefficients: np.ndarray
    frames: tuple
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        lam = np.asarray(self.coefficients, dtype=float).reshape(-1)
        frames = tuple(np.asarray(f, dtype=complex) for f in self.frames)
        object.__setattr__(self, "coefficients", lam)
        object.__setattr__(self, "frames", frames)
        if any(f.ndim != 2 or f.shape[1] != len(lam) for f in frames):
            raise InvalidInput("every frame needs one column per coefficient")
        if self.check:
            if np.any(lam <= 0) or abs(np.sum(lam**2) - 1) > 1e-10:
                raise InvalidInput("Schmidt coefficients must be positive with unit 2-norm")
            for f in frames:
                if np.abs(f.conj().T @ f - np.eye(len(lam))).max() > 1e-9:
                    raise InvalidInput("Schmidt frame is not orthonormal")

    @property
    def k(self):
        return len(self.coefficients)

    @property
    def dims(self):
        return tuple(f.shape[0] for f in self.frames)

    def branch(self, j):
        """The product vector ``kron_s e_j^(s)`` as a MultiState."""
        return product_state(*(f[:, j] for f in self.frames))

    def state(self):
        vec = sum(lam * self.branch(j).vector for j, lam in enumerate(self.coefficients))
        return MultiState(self.dims, vec)

    def scaled(self, phase):
        """Same form with a unit ``phase`` absorbed into the last party."""
        frames = list(self.frames)
        frames[-1] = frames[-1] * phase
        return SchmidtForm(self.coefficients, tuple(frames), check=False)


def canonical_form(coefficients, frames):
    """Apply the phase convention and return a checked SchmidtForm.

    Coefficients are made real positive, and for every party but the last the
    first largest-modulus entry of each frame vector is made real positive; the
    compensating phases land in the last party's vectors.
    """
    coefficients = np.asarray(coefficients, dtype=complex)
    frames = [np.array(f, dtype=complex) for f in frames]
    for j, c in enumerate(coefficients):
        ph = c / abs(c)
        for f in frames[:-1]:
            p = numerics._lead_phase(f[:, j])
            f[:, j] /= p
            ph *= p
        frames[-1][:, j] *= ph
    return SchmidtForm(np.abs(coefficients), tuple(frames))


def schmidt_bipartite(psi, tol=numerics.RANK_TOL):
    """Bipartite Schmidt decomposition via the SVD of the coefficient matrix."""
    if psi.m != 2:
        raise InvalidArity(f"schmidt_bipartite needs 2 parties, got {psi.m}")
    trip = numerics.svd(matricize(psi, (0,)))
    s = trip.singular_values
    k = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    if k == 0:
        raise InvalidInput("zero state has no Schmidt decomposition")
    # A = sum s_j u_j v_j^dagger, so the second-party vectors are conj(v_j).
    return SchmidtForm(s[:k], (trip.left[:, :k], trip.right[:, :k].conj()))


@dataclass(frozen=True)
class NotSchmidtForm:
    """Certificate that a state has no multipartite Schmidt form."""

    reason: str


@dataclass(frozen=True)
class Indeterminate:
    """Neither a form nor a disqualifier was found."""

    reason: str
    best_overlap: float = float("nan")


def single_party_spectra(psi, tol=numerics.RANK_TOL):
    """Nonzero reduced-state eigenvalues for each party, nonincreasing."""
    out = []
    for s in range(psi.m):
        sv = numerics.singular_values(matricize(psi, (s,)))
        keep = sv > tol * sv[0] if sv[0] > 0 else np.zeros_like(sv, dtype=bool)
        out.append(sv[keep] ** 2)
    return out


def _is_product(t, tol=PRODUCT_TOL):
    psi = MultiState(t.shape, t)
    return all(
        numerics.numerical_rank(matricize(psi, (s,)), tol) <= 1 for s in range(psi.m)
    )


def _product_factors(t):
    psi = MultiState(t.shape, t)
    return [numerics.svd(matricize(psi, (s,))).left[:, 0] for s in range(psi.m)]


def _contract_except(t, vecs, skip):
    """Contract tensor ``t`` with ``conj(vecs[s])`` on every axis but ``skip``."""
    out = t
    # contract from the last axis down so earlier axis numbers stay valid
    for s in reversed(range(t.ndim)):
        if s != skip:
            out = np.tensordot(out, vecs[s].conj(), axes=([s], [0]))
    return out


def _polar(m_):
    u, _, vh = np.linalg.svd(m_, full_matrices=False)
    return u @ vh


def align_schmidt_frames(psi, coefficients, frames, max_sweeps=500, tol=1e-15):
    """Alternating maximization of Re<phi|psi> over per-party orthonormal frames.

    ``phi = sum_j coefficients[j] kron_s frames[s][:, j]`` with the coefficients
    held fixed.  Each party's frame is replaced by the polar factor of its
    partial contraction, which is the exact block maximizer.  Returns the final
    overlap and frames.
    """
    t = psi.amplitudes
    lam = np.asarray(coefficients, dtype=float)
    frames = [np.array(f, dtype=complex) for f in frames]
    k = len(lam)
    prev = -np.inf
    overlap = 0.0
    for _ in range(max_sweeps):
        for s in range(psi.m):
            mat = np.empty((psi.dims[s], k), dtype=complex)
            for j in range(k):
                mat[:, j] = lam[j] * _contract_except(t, [f[:, j] for f in frames], s)
            frames[s] = _polar(mat)
            overlap = float(np.linalg.svd(mat, compute_uv=False).sum())
        if overlap - prev < tol:
            break
        prev = overlap
    return overlap, frames


def max_schmidt_overlap(psi, coefficients, rng=0, restarts=50, max_sweeps=500):
    """Best ``|<phi|psi>|`` found over Schmidt-form states with the given coefficients."""
    k = len(coefficients)
    best, best_frames = -1.0, None
    for seed in numerics.child_seeds(rng, restarts):
        r = numerics.make_rng(seed)
        init = [numerics.random_frame(d, k, r) for d in psi.dims]
        ov, fr = align_schmidt_frames(psi, coefficients, init, max_sweeps)
        if ov > best:
            best, best_frames = ov, fr
        if best >= 1 - 1e-13:
            break
    return best, best_frames


def schmidt_form_multipartite(psi, tol=SPECTRUM_TOL, rng=0, restarts=50):
    """Detect the multipartite Schmidt form ``sum_j l_j kron_s e_j^(s)``.

    Returns a :class:`SchmidtForm`, a :class:`NotSchmidtForm` carrying the
    disqualifying reason, or :class:`Indeterminate` when the party-0 spectrum
    is degenerate and the seeded frame alignment neither fits nor rules out a
    form.
    """
    if psi.m < 3:
        raise InvalidArity("use schmidt_bipartite for fewer than 3 parties")
    spectra = single_party_spectra(psi)
    ref = spectra[0]
    for s, sp in enumerate(spectra[1:], start=1):
        if len(sp) != len(ref) or np.abs(sp - ref).max() > tol:
            return NotSchmidtForm(
                f"spectra mismatch: party 0 has {np.round(ref, 12).tolist()}, "
                f"party {s} has {np.round(sp, 12).tolist()}"
            )
    k = len(ref)
    lam = np.sqrt(ref)
    degenerate = k > 1 and np.min(-np.diff(ref)) < DEGENERACY_GAP
    if not degenerate:
        return _fast_path(psi, k, tol)

    ov, frames = max_schmidt_overlap(psi, lam / np.linalg.norm(lam), rng, restarts)
    if ov < 1 - FALLBACK_ACCEPT:
        return Indeterminate("degenerate spectrum and frame alignment did not converge", ov)
    branch = np.array(
        [np.vdot(product_state(*(f[:, j] for f in frames)).vector, psi.vector) for j in range(k)]
    )
    return canonical_form(branch / np.linalg.norm(branch), frames)


def _fast_path(psi, k, tol):
    trip = numerics.svd(matricize(psi, (0,)))
    e0 = trip.left[:, :k]
    rest_dims = psi.dims[1:]
    conditionals = [(e0[:, j].conj() @ matricize(psi, (0,))).reshape(rest_dims) for j in range(k)]
    factors = []
    for j, c in enumerate(conditionals):
        if not _is_product(c):
            return NotSchmidtForm(f"conditional vector {j} of party 0 is not a product state")
        factors.append(_product_factors(c))
    frames = [e0] + [np.column_stack([factors[j][s] for j in range(k)]) for s in range(psi.m - 1)]
    for s, f in enumerate(frames[1:], start=1):
        if np.abs(f.conj().T @ f - np.eye(k)).max() > tol:
            return NotSchmidtForm(f"party {s} vectors are not orthonormal")
    branch = np.array(
        [np.vdot(product_state(*(f[:, j] for f in frames)).vector, psi.vector) for j in range(k)]
    )
    form = canonical_form(branch, frames)
    if np.linalg.norm(form.state().vector - psi.vector) > 1e-8:
        return NotSchmidtForm("reassembled form does not reproduce the state")
    return form


def schmidt_form(psi, tol=SPECTRUM_TOL, rng=0, restarts=50):
    """Schmidt form for any arity: bipartite SVD or multipartite detection."""
    if psi.m == 2:
        return schmidt_bipartite(psi)
    return schmidt_form_multipartite(psi, tol, rng, restarts)


def is_suebk_member(sf, tol=1e-8):
    """True when all Schmidt coefficients equal 1/sqrt(k)."""
    return bool(np.max(np.abs(sf.coefficients - 1 / np.sqrt(sf.k))) <= tol)


def ghz(dims: Sequence[int], k: Optional[int] = None):
    """``(1/sqrt k) sum_j |j j ... j>``; k defaults to the smallest dimension."""
    k = min(dims) if k is None else k
    vec = np.zeros(dims, dtype=complex)
    for j in range(k):
        vec[(j,) * len(dims)] = 1 / np.sqrt(k)
    return MultiState(tuple(dims), vec)
