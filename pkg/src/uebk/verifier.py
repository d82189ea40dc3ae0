"""Verification of orthonormality, member Schmidt numbers and unextendibility.

Unextendibility is settled by a certificate when one applies: if every
matrix in the complement (at some single-party cut) has rank below k, no state
of Schmidt number k can live there.  Otherwise seeded nonconvex searches look
for a witness; a failed search is evidence, never proof, and is reported as
``SearchPassed`` with its budget and best objective.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from . import numerics
from . import patterns as pt
from . import states as st
from .constructors import BasisCandidate

ORTHO_TOL = 1e-10
SEARCH_TOL = 1e-8
DELTA0 = 1e-3
LAMBDA_MIN = 1e-3
MAX_ITER = 500
BIPARTITE_RESTARTS = 100
MULTIPARTITE_RESTARTS = 200


@dataclass(frozen=True)
class Certified:
    certificate: str
    kind = "Certified"


@dataclass(frozen=True, eq=False)
class Falsified:
    witness: st.MultiState
    objective: float
    residual: float
    kind = "Falsified"


@dataclass(frozen=True)
class SearchPassed:
    best_objective: float
    restarts: int
    seed: int
    kind = "SearchPassed"


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    kind = "Indeterminate"


def describe(verdict):
    if isinstance(verdict, Certified):
        return f"Certified ({verdict.certificate})"
    if isinstance(verdict, Falsified):
        return f"Falsified (objective {verdict.objective:.3e}, residual {verdict.residual:.1e})"
    if isinstance(verdict, SearchPassed):
        return (
            f"SearchPassed (heuristic: best objective {verdict.best_objective:.6g} "
            f"over {verdict.restarts} restarts, seed {verdict.seed})"
        )
    return f"Indeterminate ({verdict.reason})"


@dataclass
class MemberResult:
    index: int
    status: str  # ok | wrong_k | no_form | indeterminate
    k: Optional[int] = None
    coefficients: Optional[list] = None
    reason: str = ""
    special: Optional[bool] = None


@dataclass
class VerificationReport:
    dims: tuple
    k: int
    n: int
    orthonormality_residual: float
    orthonormality_tol: float
    member_results: list
    unextendibility: object
    suebk_check: Optional[bool] = None
    prop2_check: Optional[dict] = None
    mode: str = "cert+search"
    seed: int = 0
    restarts: int = 0
    notes: list = field(default_factory=list)

    @property
    def orthonormal(self):
        return self.orthonormality_residual <= self.orthonormality_tol

    def failures(self):
        out = []
        if not self.orthonormal:
            out.append(f"orthonormality residual {self.orthonormality_residual:.3e}")
        for r in self.member_results:
            if r.status in ("wrong_k", "no_form"):
                out.append(f"member {r.index}: {r.reason}")
        if self.suebk_check is False:
            out.append("Schmidt coefficients are not all 1/sqrt(k)")
        if isinstance(self.unextendibility, Falsified):
            out.append("complement contains a Schmidt-number-k witness")
        for kk, v in (self.prop2_check or {}).items():
            if isinstance(v, Falsified):
                out.append(f"complement contains a Schmidt-number-{kk} state")
        return out

    def indeterminate(self):
        out = [f"member {r.index}: {r.reason}" for r in self.member_results if r.status == "indeterminate"]
        if isinstance(self.unextendibility, Inconclusive):
            out.append(self.unextendibility.reason)
        return out

    @property
    def passed(self):
        return not self.failures() and not self.indeterminate()

    def exit_code(self):
        if self.failures():
            return 2
        if self.indeterminate():
            return 3
        return 0

    def summary(self):
        """Short JSON-friendly digest for embedding in basis files."""
        v = self.unextendibility
        return {
            "orthonormality_residual": float(self.orthonormality_residual),
            "members_ok": sum(r.status == "ok" for r in self.member_results),
            "members": self.n,
            "unextendibility": v.kind,
            "detail": describe(v),
            "suebk": self.suebk_check,
            "exit_code": self.exit_code(),
        }

    def render(self):
        lines = [
            f"dims {list(self.dims)}, k = {self.k}, {self.n} members, mode {self.mode}",
            f"orthonormality residual {self.orthonormality_residual:.3e} "
            f"({'ok' if self.orthonormal else 'FAIL'}, tol {self.orthonormality_tol:g})",
        ]
        for r in self.member_results:
            lam = "" if r.coefficients is None else " lambda=" + ", ".join(f"{x:.6f}" for x in r.coefficients)
            extra = f" ({r.reason})" if r.reason else ""
            lines.append(f"  member {r.index}: {r.status} k={r.k}{lam}{extra}")
        if self.suebk_check is not None:
            lines.append(f"SUEBk coefficients: {'ok' if self.suebk_check else 'FAIL'}")
        lines.append("unextendibility: " + describe(self.unextendibility))
        for kk, v in (self.prop2_check or {}).items():
            lines.append(f"complement, Schmidt number {kk}: {describe(v)}")
        lines.extend(self.notes)
        status = {0: "PASS", 2: "FAIL", 3: "INDETERMINATE"}[self.exit_code()]
        lines.append(f"result: {status}")
        return "\n".join(lines)


def verify_orthonormal(b):
    """Largest entry of ``|Gram - I|``."""
    g = st.gram(b.members)
    return float(np.abs(g - np.eye(b.n)).max())


def complement_basis(b, tol=1e-10):
    """Orthonormal basis of the orthogonal complement of the members' span."""
    q = numerics.orthonormal_complement(b.matrix(), b.total_dim, tol)
    return [st.MultiState(b.dims, q[:, j]) for j in range(q.shape[1])]


def as_bipartite(b, cut=(0,)):
    """Reinterpret a basis as bipartite across ``cut`` (rows = ``cut`` parties)."""
    members = [st.from_matrix(st.matricize(s, cut)) for s in b.members]
    dims = members[0].dims
    k = min(b.k, *dims)
    prov = {"constructor": "as_bipartite", "cut": list(st.make_cut(cut, b.m).left), "parent": b.provenance}
    return BasisCandidate(dims, k, members, prov, b.claimed_special)


def certify_unextendible(b, rng=0, comp=None):
    """Complement-rank certificate, or Inconclusive when none applies."""
    comp = complement_basis(b) if comp is None else comp
    if not comp:
        return Inconclusive("no complement")
    parties = (0,) if b.m == 2 else range(b.m)
    for s in parties:
        g = pt.span_generic_rank([st.matricize(c, (s,)) for c in comp], rng)
        if g < b.k:
            where = "cut 0|1" if b.m == 2 else f"cut {s}|rest"
            return Certified(f"complement generic rank {g} < {b.k} at {where}")
    return Inconclusive("no single-party cut bounds the complement rank below k")


def _rank_objective(y, stack, k, delta0):
    p = stack.shape[0]
    norm = np.linalg.norm(y)
    c = (y[:p] + 1j * y[p:]) / norm
    b = np.tensordot(c, stack, axes=1)
    u, s, vh = np.linalg.svd(b, full_matrices=False)
    r = len(s)
    sk = s[k - 1] if k <= r else 0.0
    gap = max(0.0, delta0 - sk)
    f = float(np.sum(s[k:] ** 2) + gap**2)
    coef = np.zeros(r)
    coef[k:] = 2 * s[k:]
    if k <= r:
        coef[k - 1] = -2 * gap
    # d sigma_j / d c_i = u_j^H E_i v_j  (real part for Re c, minus imag for Im c)
    w = np.einsum("aj,iab,bj->ij", u.conj(), stack, vh.conj().T)
    gc = w @ coef
    g = np.concatenate([gc.real, -gc.imag])
    yhat = y / norm
    g = (g - (g @ yhat) * yhat) / norm
    return f, g


def _truncate(b, k):
    u, s, vh = np.linalg.svd(b, full_matrices=False)
    s[k:] = 0
    return (u * s) @ vh


def _polish_rank_k(b, stack, k, iters=200):
    """Alternate between the rank-k set and the span to clean up a near-witness."""
    flat = stack.reshape(stack.shape[0], -1)
    q, _ = np.linalg.qr(flat.T)
    for _ in range(iters):
        t = _truncate(b, k).reshape(-1)
        b = (q @ (q.conj().T @ t)).reshape(b.shape)
        b = b / np.linalg.norm(b)
    return b


def search_rank_k_in_subspace(
    comp_matrices,
    k,
    dims=None,
    rng=0,
    restarts=BIPARTITE_RESTARTS,
    tol=SEARCH_TOL,
    delta0=DELTA0,
    max_iter=MAX_ITER,
):
    """Look for a rank-k matrix in the span of ``comp_matrices``.

    Minimizes ``sum_{j>k} s_j^2 + max(0, delta0 - s_k)^2`` over unit coefficient
    vectors with L-BFGS from seeded random starts.  A witness must reach
    objective below ``tol`` with ``s_k >= delta0`` and then pass the rank test
    after polishing.
    """
    stack = np.array([np.asarray(a, dtype=complex) for a in comp_matrices])
    if dims is None:
        dims = stack.shape[1:]
    seed = rng if isinstance(rng, (int, np.integer)) else None
    if stack.size == 0 or k > min(stack.shape[1:]):
        return SearchPassed(float(delta0**2), 0, seed)
    p = stack.shape[0]
    best = np.inf
    for child in numerics.child_seeds(rng, restarts):
        y0 = numerics.make_rng(child).standard_normal(2 * p)
        res = minimize(
            _rank_objective,
            y0,
            args=(stack, k, delta0),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": max_iter},
        )
        best = min(best, float(res.fun))
        if res.fun >= tol:
            continue
        c = (res.x[:p] + 1j * res.x[p:]) / np.linalg.norm(res.x)
        b = np.tensordot(c, stack, axes=1)
        b = b / np.linalg.norm(b)
        if np.linalg.svd(b, compute_uv=False)[k - 1] < delta0:
            continue
        if numerics.numerical_rank(b) != k:
            b = _polish_rank_k(b, stack, k)
        if numerics.numerical_rank(b) == k:
            witness = st.dematricize(b, dims, (0,))
            return Falsified(witness, float(res.fun), _span_residual(b.reshape(-1), stack))
    return SearchPassed(best, restarts, seed)


def _span_residual(vec, stack):
    flat = stack.reshape(stack.shape[0], -1)
    q, _ = np.linalg.qr(flat.T)
    return float(np.linalg.norm(vec - q @ (q.conj().T @ vec)))


class _FormSearch:
    """Alternating maximization of ``||P phi||^2`` over Schmidt-form states."""

    def __init__(self, q, dims, k, lam_min):
        self.q = q
        self.dims = tuple(dims)
        self.k = k
        self.lam_min = lam_min

    def branches(self, frames):
        return [st.product_state(*(f[:, j] for f in frames)).vector for j in range(self.k)]

    def value(self, lam, frames):
        phi = sum(l * b for l, b in zip(lam, self.branches(frames)))
        return float(np.linalg.norm(self.q.conj().T @ phi) ** 2), phi

    def frame_step(self, lam, frames, s):
        phi = sum(l * b for l, b in zip(lam, self.branches(frames)))
        pphi = (self.q @ (self.q.conj().T @ phi)).reshape(self.dims)
        grad = np.empty((self.dims[s], self.k), dtype=complex)
        for j in range(self.k):
            grad[:, j] = lam[j] * st._contract_except(pphi, [f[:, j] for f in frames], s)
        frames[s] = st._polar(grad)

    def coefficient_step(self, lam, frames):
        proj = np.array([self.q.conj().T @ b for b in self.branches(frames)])
        kmat = (proj.conj() @ proj.T).real
        _, vecs = np.linalg.eigh(kmat)
        v = vecs[:, -1]
        signs = np.where(v < 0, -1.0, 1.0)
        frames[-1] = frames[-1] * signs
        lam = np.maximum(np.abs(v), self.lam_min)
        return lam / np.linalg.norm(lam)

    def run(self, lam, frames, max_sweeps, target=np.inf, stall=1e-11):
        frames = [np.array(f, dtype=complex) for f in frames]
        best, _ = self.value(lam, frames)
        for _ in range(max_sweeps):
            for s in range(len(self.dims)):
                self.frame_step(lam, frames, s)
            if self.k > 1:
                lam = self.coefficient_step(lam, frames)
            val, _ = self.value(lam, frames)
            if val > target:
                return val, lam, frames
            if val - best < stall:
                best = max(best, val)
                break
            best = val
        return best, lam, frames


def search_schmidt_form_in_subspace(
    comp,
    k,
    dims,
    rng=0,
    restarts=MULTIPARTITE_RESTARTS,
    tol=SEARCH_TOL,
    lam_min=LAMBDA_MIN,
    max_sweeps=MAX_ITER,
):
    """Maximize the weight ``||P phi||^2`` a Schmidt-form state puts in ``comp``.

    ``phi = sum_j lam_j kron_s e_j^(s)`` with every ``lam_j >= lam_min``.  Frames
    are updated by a minorize-maximize polar step per party and the
    coefficients by a top-eigenvector step.  A weight above ``1 - tol`` yields a
    Falsified verdict whose residual is ``1 - weight``.
    """
    dims = tuple(dims)
    seed = rng if isinstance(rng, (int, np.integer)) else None
    q = np.column_stack([c.vector if isinstance(c, st.MultiState) else np.asarray(c) for c in comp])
    if k > min(dims):
        return SearchPassed(0.0, 0, seed)
    search = _FormSearch(q, dims, k, lam_min)
    best = -np.inf
    for child in numerics.child_seeds(rng, restarts):
        r = numerics.make_rng(child)
        frames = [numerics.random_frame(d, k, r) for d in dims]
        lam = np.abs(r.standard_normal(k)) + lam_min
        lam = lam / np.linalg.norm(lam)
        val, lam, frames = search.run(lam, frames, max_sweeps, 1 - tol)
        best = max(best, val)
        if val > 1 - tol:
            form = st.SchmidtForm(lam, tuple(frames))
            witness = form.state()
            return Falsified(witness, float(val), max(0.0, float(1 - val)))
    return SearchPassed(float(best), restarts, seed)


def check_schmidt_number(psi, k, rng=0, restarts=50):
    """Detected Schmidt outcome of ``psi`` and whether it has Schmidt number ``k``."""
    out = st.schmidt_form(psi, rng=rng, restarts=restarts)
    return out, isinstance(out, st.SchmidtForm) and out.k == k


def check_prop2(b, rng=0, restarts=None, comp=None):
    """Look for complement states with Schmidt number k' for each k' >= k.

    Bipartite bases whose complement generic rank is below k are certified for
    every k' at once.  Returns ``{k': verdict}``.
    """
    comp = complement_basis(b) if comp is None else comp
    top = min(b.dims)
    ks = range(b.k, top + 1)
    if b.m == 2:
        mats = [st.matricize(c, (0,)) for c in comp]
        g = pt.span_generic_rank(mats, rng)
        if g < b.k:
            return {kk: Certified(f"complement generic rank {g} < {kk}") for kk in ks}
        restarts = BIPARTITE_RESTARTS if restarts is None else restarts
        return {kk: search_rank_k_in_subspace(mats, kk, b.dims, rng, restarts) for kk in ks}
    restarts = MULTIPARTITE_RESTARTS if restarts is None else restarts
    return {kk: search_schmidt_form_in_subspace(comp, kk, b.dims, rng, restarts) for kk in ks}


MODES = ("cert", "cert+search", "search")


def verify(b, mode="cert+search", seed=0, restarts=None, tol=SEARCH_TOL, prop2=False, ortho_tol=ORTHO_TOL):
    """Check every defining property of a UEBk and collect a report.

    Failures are recorded in the report rather than raised.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if restarts is None:
        restarts = BIPARTITE_RESTARTS if b.m == 2 else MULTIPARTITE_RESTARTS
    seeds = numerics.child_seeds(seed, 3)
    member_seeds = numerics.child_seeds(seeds[0], b.n)

    residual = verify_orthonormal(b)
    results = []
    special = [] if b.claimed_special else None
    for i, psi in enumerate(b.members):
        out = st.schmidt_form(psi, rng=member_seeds[i])
        if isinstance(out, st.SchmidtForm):
            lam = sorted(out.coefficients.tolist(), reverse=True)
            ok = out.k == b.k
            res = MemberResult(i, "ok" if ok else "wrong_k", out.k, lam,
                               "" if ok else f"Schmidt number {out.k}, expected {b.k}")
            if special is not None:
                res.special = st.is_suebk_member(out)
                special.append(res.special)
        elif isinstance(out, st.NotSchmidtForm):
            res = MemberResult(i, "no_form", None, None, out.reason)
        else:
            res = MemberResult(i, "indeterminate", None, None, out.reason)
        results.append(res)
    suebk = None if special is None else bool(special) and all(special)

    comp = complement_basis(b)
    verdict = None
    if mode in ("cert", "cert+search"):
        verdict = certify_unextendible(b, seeds[1], comp)
    if mode == "search" or (mode == "cert+search" and isinstance(verdict, Inconclusive)):
        if b.m == 2:
            mats = [st.matricize(c, (0,)) for c in comp]
            verdict = search_rank_k_in_subspace(mats, b.k, b.dims, seeds[2], restarts, tol)
        else:
            verdict = search_schmidt_form_in_subspace(comp, b.k, b.dims, seeds[2], restarts, tol)

    if isinstance(verdict, SearchPassed):
        verdict = replace(verdict, seed=seed)
    prop = check_prop2(b, seeds[2], restarts, comp) if prop2 else None
    if prop:
        prop = {kk: replace(v, seed=seed) if isinstance(v, SearchPassed) else v for kk, v in prop.items()}
    return VerificationReport(
        b.dims, b.k, b.n, residual, ortho_tol, results, verdict, suebk, prop, mode, seed, restarts
    )
