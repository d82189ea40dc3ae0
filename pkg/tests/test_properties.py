import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as hs

from uebk import constructors as C
from uebk import fileio
from uebk import lifting as L
from uebk import numerics as nm
from uebk import patterns as pt
from uebk import states as st
from uebk import verifier as V
from uebk.errors import ParseError

FAST = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
SLOW = settings(max_examples=8, deadline=None, suppress_health_check=[HealthCheck.too_slow])

seeds = hs.integers(0, 2**32 - 1)
party_dims = hs.lists(hs.integers(2, 4), min_size=2, max_size=4).filter(lambda d: np.prod(d) <= 128)


def random_state(dims, rng):
    n = int(np.prod(dims))
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return st.MultiState(tuple(dims), v / np.linalg.norm(v))


def projector(rows):
    q, _ = np.linalg.qr(np.asarray(rows).T)
    return q @ q.conj().T


@FAST
@given(party_dims, seeds, hs.data())
def test_matricization_conserves_norm_and_round_trips(dims, seed, data):
    psi = random_state(dims, np.random.default_rng(seed))
    cut = tuple(data.draw(hs.permutations(range(len(dims)))))[: data.draw(hs.integers(1, len(dims) - 1))]
    a = st.matricize(psi, cut)
    assert a.shape[0] == int(np.prod([dims[s] for s in cut]))
    assert abs(np.linalg.norm(a) - 1) < 1e-12
    np.testing.assert_array_equal(st.dematricize(a, tuple(dims), cut).vector, psi.vector)


@FAST
@given(hs.integers(2, 5), hs.integers(2, 5), seeds)
def test_bipartite_schmidt_reassembles(d1, d2, seed):
    psi = random_state((d1, d2), np.random.default_rng(seed))
    f = st.schmidt_bipartite(psi)
    assert f.k == min(d1, d2)
    assert np.all(np.diff(f.coefficients) <= 1e-15)
    assert abs(np.sum(f.coefficients**2) - 1) < 1e-12
    assert np.linalg.norm(f.state().vector - psi.vector) < 1e-12


@FAST
@given(hs.integers(2, 5), hs.integers(2, 5), hs.integers(1, 4), seeds)
def test_bipartite_schmidt_number_of_low_rank_state(d1, d2, r, seed):
    r = min(r, d1, d2)
    rng = np.random.default_rng(seed)
    a = nm.random_frame(d1, r, rng) @ np.diag(rng.uniform(0.3, 1, r)) @ nm.random_frame(d2, r, rng).T
    assert st.schmidt_bipartite(st.from_matrix(a / np.linalg.norm(a))).k == r


@SLOW
@given(hs.sampled_from([(2, 2, 2), (2, 3, 3), (3, 3, 3), (2, 2, 2, 2)]), hs.integers(2, 3), seeds)
def test_multipartite_schmidt_round_trip(dims, k, seed):
    k = min(k, *dims)
    rng = np.random.default_rng(seed)
    lam = np.sort(rng.uniform(0.2, 1, k))[::-1]
    lam /= np.linalg.norm(lam)
    psi = st.SchmidtForm(lam, [nm.random_frame(d, k, rng) for d in dims]).state()
    out = st.schmidt_form(psi)
    assert isinstance(out, st.SchmidtForm) and out.k == k
    np.testing.assert_allclose(np.sort(out.coefficients)[::-1], lam, atol=1e-8)
    assert np.linalg.norm(out.state().vector - psi.vector) < 1e-8


LIFTABLE = {
    "ueb2_2x3": lambda: C.EXAMPLES["eq14"](),
    "umeb23": lambda: C.EXAMPLES["umeb23"](),
    "3x3v1": lambda: C.construct_bipartite_uebk(3, 3, 2, "v1"),
    "3x4": lambda: C.construct_bipartite_uebk(3, 4, 2),
    "suebk3": lambda: C.suebk_tripartite(3, 5, 2, 2),
}


@SLOW
@given(hs.sampled_from(sorted(LIFTABLE)), hs.integers(2, 3))
def test_lift_laws(name, d):
    b = LIFTABLE[name]()
    lb = L.lift_uebk(b, d)
    assert lb.n == b.n * d and lb.dims == b.dims + (d,) and lb.k == b.k
    assert np.abs(st.gram(lb.members) - np.eye(lb.n)).max() < 1e-10
    np.testing.assert_allclose(projector(lb.matrix()), np.kron(projector(b.matrix()), np.eye(d)), atol=1e-10)


@FAST
@given(hs.integers(2, 5), hs.integers(0, 4), hs.integers(0, 4))
def test_decomposition_tiles_grid(k, r, rp):
    r, rp = r % k, rp % k
    d = pt.general_decomposition(k, r, rp)
    assert d.shape == (k + r, k + rp)
    assert d.masks_tile()
    assert d.member_count + d.residual.size == (k + r) * (k + rp)
    assert pt.generic_rank(d.residual) < k


@SLOW
@given(hs.sampled_from([(2, 2, 2), (2, 5, 2), (3, 4, 2), (4, 5, 3)]), seeds)
def test_seeded_construction_keeps_span(shape, seed):
    canonical = C.construct_bipartite_uebk(*shape)
    seeded = C.construct_bipartite_uebk(*shape, rng=seed)
    assert np.abs(st.gram(seeded.members) - np.eye(seeded.n)).max() < 1e-10
    np.testing.assert_allclose(projector(seeded.matrix()), projector(canonical.matrix()), atol=1e-10)


@SLOW
@given(hs.integers(0, 2**31 - 1))
def test_report_determinism(seed):
    b = L.lift_upb(C.EXAMPLES["tiles"](), 2)
    r1 = V.verify(b, mode="search", seed=seed, restarts=5)
    r2 = V.verify(b, mode="search", seed=seed, restarts=5)
    assert r1.summary() == r2.summary()
    assert fileio.serialize(b, r1) == fileio.serialize(b, r2)


@FAST
@given(hs.sampled_from(["eq6", "eq14", "umeb23", "tiles"]), hs.data())
def test_serialization_round_trip_and_truncation(name, data):
    b = C.EXAMPLES[name]()
    blob = fileio.serialize(b)
    back, _ = fileio.parse(blob)
    assert back.dims == b.dims and back.k == b.k
    np.testing.assert_array_equal(back.matrix(), b.matrix())
    cut = data.draw(hs.integers(0, len(blob) - 2))
    with pytest.raises(ParseError):
        fileio.parse(blob[:cut])
