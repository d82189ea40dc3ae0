"""Dense complex linear algebra and seeded random generation.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Random streams use
numpy's PCG64 bit generator, so a given integer seed produces the same stream on
every platform numpy supports.
"""

from typing import NamedTuple

import numpy as np

from .errors import GenerationFailed, InvalidInput

RANK_TOL = 1e-9
ZERO_FLOOR = 1e-6


class SingularTriplet(NamedTuple):
    """Thin SVD ``A = left @ diag(singular_values) @ right.conj().T``."""

    singular_values: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def reconstruct(self):
        return (self.left * self.singular_values) @ self.right.conj().T


def as_matrix(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise InvalidInput(f"expected a nonempty 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("matrix has non-finite entries")
    return a


def make_rng(seed=0):
    """Return a PCG64-backed generator; passes generators through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(int(seed)))


def child_seeds(seed, n):
    """Derive ``n`` independent integer seeds from ``seed`` (int or generator).

    The derivation depends only on ``seed``, never on evaluation order, so
    restarts can be run in any order and still give the same aggregate.
    """
    if isinstance(seed, np.random.Generator):
        seed = int(seed.integers(0, 2**63))
    ss = np.random.SeedSequence(int(seed))
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in ss.spawn(n)]


def _lead_phase(v, atol=1e-12):
    """Unit phase of the first entry whose modulus is within ``atol`` of the max."""
    mags = np.abs(v)
    top = mags.max()
    if top == 0:
        return 1.0
    idx = int(np.argmax(mags >= top - atol))
    return v[idx] / mags[idx]


def svd(a):
    """Thin SVD with a fixed phase convention.

    Each left singular vector is rotated so that its first largest-modulus
    entry is real and positive; the matching right vector absorbs the phase.
    Singular values come back nonincreasing.
    """
    a = as_matrix(a)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    v = vh.conj().T
    for j in range(len(s)):
        ph = _lead_phase(u[:, j])
        u[:, j] = u[:, j] / ph
        v[:, j] = v[:, j] * np.conj(ph)
    return SingularTriplet(s, u, v)


def singular_values(a):
    return np.linalg.svd(as_matrix(a), compute_uv=False)


def numerical_rank(a, tol=RANK_TOL):
    """Number of singular values above ``tol * sigma_max``."""
    if tol <= 0:
        raise InvalidInput("rank tolerance must be positive")
    s = singular_values(a)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def hermitian_eig(h):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues nonincreasing."""
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise InvalidInput("hermitian_eig needs a square matrix")
    scale = np.linalg.norm(h)
    if np.linalg.norm(h - h.conj().T) > 1e-10 * max(scale, 1e-300):
        raise InvalidInput("matrix is not Hermitian")
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    for j in range(v.shape[1]):
        v[:, j] /= _lead_phase(v[:, j])
    return w, v


def haar_unitary(n, rng):
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    rng = make_rng(rng)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_frame(d, k, rng):
    """A ``d x k`` matrix with orthonormal columns (first k columns of a Haar unitary)."""
    return haar_unitary(d, rng)[:, :k]


def random_unitary_no_zeros(n, rng, max_attempts=100):
    """Haar unitary rejection-sampled until every entry has modulus above 1e-6."""
    if n < 1:
        raise InvalidInput("n must be at least 1")
    rng = make_rng(rng)
    for _ in range(max_attempts):
        u = haar_unitary(n, rng)
        if np.abs(u).min() > ZERO_FLOOR:
            return u
    raise GenerationFailed(f"no zero-free {n}x{n} unitary after {max_attempts} draws")


def canonical_unitary_no_zeros(n):
    """Deterministic real orthogonal matrix without zero entries.

    ``(2/n) J - I`` for n >= 3 (a reflection, hence an involution), the
    normalized Hadamard matrix for n = 2 and ``[1]`` for n = 1.
    """
    if n < 1:
        raise InvalidInput("n must be at least 1")
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    if n == 2:
        return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    return (2.0 / n) * np.ones((n, n), dtype=complex) - np.eye(n, dtype=complex)


def is_unitary(u, tol=1e-12):
    u = np.asarray(u)
    return np.allclose(u.conj().T @ u, np.eye(u.shape[1]), atol=tol, rtol=0)


def orthonormal_complement(vectors, dim, tol=1e-10):
    """Orthonormal basis (as columns) of the complement of span(vectors) in C^dim.

    ``vectors`` is an ``n x dim`` array of row vectors.  Uses the SVD, which is
    rank revealing; singular values below ``tol * sigma_max`` count as zero.
    """
    vectors = np.asarray(vectors, dtype=complex).reshape(-1, dim)
    if vectors.shape[0] == 0:
        return np.eye(dim, dtype=complex)
    _, s, vh = np.linalg.svd(vectors, full_matrices=True)
    rank = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    # x is orthogonal to v iff conj(v) . x = 0, so the rows of vh past the rank
    # (not their conjugates) span the complement.
    basis = vh[rank:].T.copy()
    for j in range(basis.shape[1]):
        basis[:, j] /= _lead_phase(basis[:, j])
    return basis
