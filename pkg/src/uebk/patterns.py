"""Zero-pattern matrix subspaces and rank-k Hilbert-Schmidt bases.

A zero pattern is a boolean mask; the matrices supported on it form a
coordinate subspace.  Filling the mask cells of basis element ``i`` with
column ``i`` of a zero-free unitary gives an orthonormal basis of that
subspace (under ``Tr(A^dagger B)``) whose members all have the subspace's
generic rank.  Cells are always visited row-major.
"""

from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import (
    DecompositionInvalid,
    InvalidInput,
    InvalidTiling,
    NotInCatalog,
    RankDefect,
    ZeroEntryIsometry,
)

GENERIC_TRIALS = 8


@dataclass(frozen=True, eq=False)
class ZeroPattern:
    mask: np.ndarray

    def __post_init__(self):
        mask = np.array(self.mask, dtype=bool)
        if mask.ndim != 2 or 0 in mask.shape:
            raise InvalidInput(f"pattern mask must be a nonempty 2-d grid, got {mask.shape}")
        mask.flags.writeable = False
        object.__setattr__(self, "mask", mask)

    @classmethod
    def parse(cls, art):
        """Build from row strings like ``"*0/**"`` (``*`` = free cell)."""
        rows = art.split("/")
        return cls(np.array([[c == "*" for c in row] for row in rows]))

    @classmethod
    def from_cells(cls, rows, cols, cells):
        mask = np.zeros((rows, cols), dtype=bool)
        for i, j in cells:
            mask[i, j] = True
        return cls(mask)

    @property
    def shape(self):
        return self.mask.shape

    @property
    def cells(self):
        return [tuple(int(x) for x in c) for c in np.argwhere(self.mask)]

    @property
    def size(self):
        return int(self.mask.sum())

    @property
    def T(self):
        return ZeroPattern(self.mask.T)

    def __eq__(self, other):
        return isinstance(other, ZeroPattern) and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash((self.mask.shape, self.mask.tobytes()))

    def __str__(self):
        return "/".join("".join("*" if c else "0" for c in row) for row in self.mask)

    __repr__ = __str__


def subspace_of(p):
    """Elementary matrices ``E_ij``, one per free cell, row-major."""
    out = []
    for i, j in p.cells:
        e = np.zeros(p.shape, dtype=complex)
        e[i, j] = 1
        out.append(e)
    return out


def span_generic_rank(matrices, rng=0, trials=GENERIC_TRIALS, tol=numerics.RANK_TOL):
    """Maximum rank seen over random complex combinations of ``matrices``.

    With probability one a single random combination already attains the
    largest rank in the span; taking the max over ``trials`` guards against
    unlucky draws near the measure-zero exceptional set.
    """
    matrices = [np.asarray(a, dtype=complex) for a in matrices]
    if not matrices:
        return 0
    rng = numerics.make_rng(rng)
    stack = np.array(matrices)
    best = 0
    for _ in range(trials):
        c = rng.standard_normal(len(matrices)) + 1j * rng.standard_normal(len(matrices))
        best = max(best, numerics.numerical_rank(np.tensordot(c, stack, axes=1), tol))
    return best


def generic_rank(p, rng=0, trials=GENERIC_TRIALS):
    return span_generic_rank(subspace_of(p), rng, trials)


@dataclass(frozen=True, eq=False)
class HSBasis:
    """Trace-orthonormal matrices that all have rank ``k``."""

    matrices: tuple
    k: int

    def __len__(self):
        return len(self.matrices)

    def gram(self):
        flat = np.array([a.reshape(-1) for a in self.matrices])
        return flat.conj() @ flat.T


def isometry_substitute(p, u, k=None):
    """Place column ``i`` of ``u`` into the free cells of ``p`` for member ``i``.

    ``k`` defaults to the pattern's generic rank; every member is checked to
    have exactly that rank.
    """
    u = np.asarray(u, dtype=complex)
    n = p.size
    if u.shape != (n, n):
        raise InvalidInput(f"pattern has {n} cells but isometry is {u.shape}")
    if not numerics.is_unitary(u, 1e-10):
        raise InvalidInput("substituted matrix is not an isometry")
    if np.abs(u).min() <= 1e-12:
        raise ZeroEntryIsometry("isometry has a zero entry")
    if k is None:
        k = generic_rank(p)
    rows, cols = zip(*p.cells)
    members = []
    for i in range(n):
        a = np.zeros(p.shape, dtype=complex)
        a[rows, cols] = u[:, i]
        r = numerics.numerical_rank(a)
        if r != k:
            raise RankDefect(f"member {i} on pattern {p} has rank {r}, expected {k}")
        members.append(a)
    return HSBasis(tuple(members), k)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Disjoint zero-pattern blocks of rank ``k`` plus a rank-deficient residual.

    The residual is always the complement of the blocks' union, so the grid is
    tiled by construction.
    """

    blocks: tuple
    residual: ZeroPattern
    k: int
    name: str = ""

    @classmethod
    def from_blocks(cls, blocks, k, name="", check_ranks=True):
        blocks = tuple(blocks)
        if not blocks:
            raise DecompositionInvalid("decomposition needs at least one block")
        shape = blocks[0].shape
        covered = np.zeros(shape, dtype=int)
        for b in blocks:
            if b.shape != shape:
                raise DecompositionInvalid("blocks have different shapes")
            covered += b.mask
        if covered.max() > 1:
            raise DecompositionInvalid("blocks overlap")
        dec = cls(blocks, ZeroPattern(covered == 0), k, name)
        if check_ranks:
            dec.validate()
        return dec

    @property
    def shape(self):
        return self.residual.shape

    @property
    def member_count(self):
        return sum(b.size for b in self.blocks)

    def validate(self, rng=0):
        for i, b in enumerate(self.blocks):
            g = generic_rank(b, rng)
            if g < self.k:
                raise DecompositionInvalid(f"block {i} ({b}) has generic rank {g} < {self.k}")
        g = generic_rank(self.residual, rng) if self.residual.size else 0
        if g >= self.k:
            raise DecompositionInvalid(f"residual {self.residual} has generic rank {g} >= {self.k}")

    @property
    def T(self):
        return Decomposition(
            tuple(b.T for b in self.blocks), self.residual.T, self.k, self.name + "^T"
        )

    def masks_tile(self):
        total = self.residual.mask.astype(int)
        for b in self.blocks:
            total = total + b.mask
        return bool(np.all(total == 1))


_K2 = {
    ((2, 2), None): ["*0/**"],
    ((2, 3), None): ["**0/**0"],
    ((3, 3), 1): ["***/***/000"],
    ((3, 3), 2): ["000/*00/**0", "*00/0*0/000", "0*0/00*/000"],
    ((3, 3), 3): ["**0/**0/000", "000/00*/0*0", "00*/000/*00"],
}

_K3 = {
    (3, 3): ["00*/*00/**0", "*00/0*0/00*"],
    (3, 4): ["000*/*000/**00", "*000/0*00/00*0", "0*00/00*0/000*"],
    (3, 5): [
        "0000*/*0000/**000",
        "*0000/0*000/00*00",
        "0*000/00*00/000*0",
        "00*00/000*0/0000*",
    ],
    (4, 4): [
        "000*/0000/*000/**00",
        "0000/*000/0*00/00*0",
        "*000/0*00/00*0/0000",
        "0*00/00*0/000*/0000",
    ],
    (4, 5): [
        "0000*/00000/*0000/**000",
        "00000/*0000/0*000/00*00",
        "*0000/0*000/00*00/00000",
        "0*000/00*00/000*0/00000",
        "00*00/000*0/0000*/00000",
    ],
    (5, 5): [
        "0000*/00000/00000/*0000/**000",
        "00000/00000/*0000/0*000/00*00",
        "00000/*0000/0*000/00*00/00000",
        "*0000/0*000/00*00/00000/00000",
        "0*000/00*00/000*0/00000/00000",
        "00*00/000*0/0000*/00000/00000",
    ],
}


def catalog_k2(shape, variant=None):
    """The k = 2 decompositions of M_{2x2}, M_{2x3} and the three of M_{3x3}.

    ``variant`` (1, 2 or 3) selects among the 3x3 splits, which give 6-, 7-
    and 8-member bases respectively.
    """
    shape = tuple(shape)
    if shape == (3, 3):
        variant = 1 if variant is None else int(variant)
    else:
        variant = None
    try:
        arts = _K2[(shape, variant)]
    except KeyError:
        raise NotInCatalog(f"no k=2 catalog entry for shape {shape} variant {variant}") from None
    name = f"k2:{shape[0]}x{shape[1]}" + (f":v{variant}" if variant else "")
    return Decomposition.from_blocks([ZeroPattern.parse(a) for a in arts], 2, name)


def catalog_k3(shape):
    """The k = 3 decompositions of M_{3x3} through M_{5x5}."""
    shape = tuple(shape)
    if shape not in _K3:
        raise NotInCatalog(f"no k=3 catalog entry for shape {shape}")
    blocks = [ZeroPattern.parse(a) for a in _K3[shape]]
    return Decomposition.from_blocks(blocks, 3, f"k3:{shape[0]}x{shape[1]}")


def _staircase_and_diagonals(k, r, rp):
    rows, cols = k + r, k + rp
    # 1-based (i, j) as in the closed form; converted on insertion
    first = [(1, k + rp)]
    for s in range(1, k):
        first += [(r + 1 + s, j) for j in range(1, s + 1)]
    blocks = [first]
    for l in range(2, r + 3):
        blocks.append([(j + l - 2, j) for j in range(1, k + 1)])
    for l in range(r + 3, r + rp + 3):
        blocks.append([(i, i + l - r - 2) for i in range(1, k + 1)])
    return [
        ZeroPattern.from_cells(rows, cols, [(i - 1, j - 1) for i, j in cells]) for cells in blocks
    ]


def general_decomposition(k, r, rp):
    """Split M_{(k+r)x(k+r')} into rank-k blocks and a residual of rank < k.

    Block 1 holds the top-right corner and a lower staircase, blocks
    ``2..r+2`` are the length-k diagonals shifted down, blocks
    ``r+3..r+r'+2`` the length-k diagonals shifted right.  Blocks whose
    generic rank falls below k join the residual.  For k = 2 with r*r' = 0
    these blocks tile the whole grid and leave nothing unextendible, so the
    k = 2 catalog split is returned instead.
    """
    if k < 2 or not (0 <= r < k) or not (0 <= rp < k):
        raise InvalidInput(f"need k >= 2 and 0 <= r, r' < k; got k={k}, r={r}, r'={rp}")
    if k == 2 and r * rp == 0:
        if r <= rp:
            return catalog_k2((2 + r, 2 + rp))
        return catalog_k2((2 + rp, 2 + r)).T
    used = []
    for b in _staircase_and_diagonals(k, r, rp):
        g = generic_rank(b)
        if g > k:
            raise DecompositionInvalid(f"block {b} has generic rank {g} > {k}")
        if g == k:
            used.append(b)
    return Decomposition.from_blocks(used, k, f"general:k{k}:r{r}:r'{rp}")


def realize(dec, rng=None):
    """Rank-k Hilbert-Schmidt basis for every block of ``dec``.

    With ``rng`` None each block uses the canonical zero-free orthogonal
    matrix; otherwise a seeded Haar unitary rejection-sampled for zero entries.
    """
    if rng is not None:
        rng = numerics.make_rng(rng)
    members = []
    for b in dec.blocks:
        if rng is None:
            u = numerics.canonical_unitary_no_zeros(b.size)
        else:
            u = numerics.random_unitary_no_zeros(b.size, rng)
        members.extend(isometry_substitute(b, u, dec.k).matrices)
    return HSBasis(tuple(members), dec.k)


def complete_rank_k_basis(a, b, k):
    """Complete trace-orthonormal basis of M_{a x b} made of rank-k matrices.

    For k | b the members carry ``zeta_k^(n p) / sqrt(k)`` at cells
    ``((p + m) mod a, (l - 1) k + p)``; for k | a the transposed construction
    is used.
    """
    if k < 1 or k > min(a, b):
        raise InvalidTiling(f"k={k} exceeds min({a}, {b})")
    if b % k == 0:
        return HSBasis(tuple(_shift_basis(a, b, k)), k)
    if a % k == 0:
        return HSBasis(tuple(x.T for x in _shift_basis(b, a, k)), k)
    raise InvalidTiling(f"k={k} divides neither {a} nor {b}")


def _shift_basis(a, b, k):
    zeta = np.exp(2j * np.pi / k)
    p = np.arange(k)
    out = []
    for m in range(a):
        for n in range(k):
            for l in range(b // k):
                x = np.zeros((a, b), dtype=complex)
                x[(p + m) % a, l * k + p] = zeta ** (n * p) / np.sqrt(k)
                out.append(x)
    return out
