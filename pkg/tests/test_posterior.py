import numpy as np
import pytest

from aonlab.channels import BalancedSet, BgtChannel, SbgChannel, bgt_apply, sbg_apply
from aonlab.montecarlo import mmse_mc, run_trials
from aonlab.posterior import (
    ExactPosterior,
    binary_entropy,
    filter_consistent,
    instance_error,
    posterior_entropy,
    predictive_entropy,
    z_count,
)
from aonlab.priors import KSparsePrior, Signal, overlap
from aonlab.sampling import Dataset, generate_dataset


def brute_force_atoms(prior, channel, dataset):
    """Naive double-loop oracle: re-evaluate every sample on every candidate."""
    region = getattr(channel, "region", None)
    atoms = []
    for sig in prior.enumerate():
        ok = True
        for x, y in zip(dataset.xs, dataset.ys):
            if region is None:
                out = bgt_apply(x, sig)
            else:
                out = sbg_apply(x, sig, region)
            if out != y:
                ok = False
                break
        if ok:
            atoms.append(sig.support)
    return atoms


def test_no_constraints_keeps_all_atoms():
    channel = BgtChannel(10, 2, 0.5)
    prior = channel.prior()
    sig = Signal(10, (0, 7))
    state = filter_consistent(prior, channel, generate_dataset(channel, sig, 0, seed=1))
    assert state.z0 == prior.n_atoms


def test_truth_always_consistent():
    channel = BgtChannel(12, 2, 0.5)
    prior = channel.prior()
    for seed in range(5):
        sig = prior.sample_signal(np.random.default_rng(seed))
        ds = generate_dataset(channel, sig, 30, seed=seed)
        state = filter_consistent(prior, channel, ds)
        assert any(tuple(row) == sig.support for row in state.supports)


def test_filter_matches_brute_force_oracle_bgt():
    channel = BgtChannel(12, 2, 0.5)
    prior = channel.prior()
    sig = Signal(12, (3, 8))
    ds = generate_dataset(channel, sig, 20, seed=99)
    state = filter_consistent(prior, channel, ds)
    assert [tuple(r) for r in state.supports] == brute_force_atoms(prior, channel, ds)


def test_filter_matches_brute_force_oracle_sbg():
    channel = SbgChannel(10, 2, BalancedSet.symmetric())
    prior = channel.prior()
    sig = Signal(10, (2, 6))
    ds = generate_dataset(channel, sig, 15, seed=5)
    state = filter_consistent(prior, channel, ds)
    assert [tuple(r) for r in state.supports] == brute_force_atoms(prior, channel, ds)


def test_nested_filtering():
    channel = BgtChannel(12, 2, 0.5)
    prior = channel.prior()
    sig = Signal(12, (1, 4))
    ds = generate_dataset(channel, sig, 25, seed=3)
    previous = None
    for n in range(0, 26, 5):
        prefix = Dataset(xs=ds.xs[:n], ys=ds.ys[:n], signal=sig)
        atoms = {tuple(r) for r in filter_consistent(prior, channel, prefix).supports}
        if previous is not None:
            assert atoms <= previous
        previous = atoms


def test_inconsistent_observations_rejected():
    channel = BgtChannel(6, 2, 0.5)
    prior = channel.prior()
    xs = np.ones((2, 6), dtype=np.uint8)
    ys = np.array([1, 0], dtype=np.uint8)  # all-ones test cannot be negative
    with pytest.raises(ValueError, match="inconsistent"):
        filter_consistent(prior, channel, Dataset(xs=xs, ys=ys))


# --- distance-tail counting -------------------------------------------------

def recount_oracle(state, sig, delta):
    count = 0
    for atom in state.signals():
        if 2 * (1 - float(overlap(atom, sig))) >= delta - 1e-15:
            count += 1
    return count


def test_z_count_properties():
    channel = BgtChannel(12, 2, 0.5)
    prior = channel.prior()
    sig = Signal(12, (3, 8))
    ds = generate_dataset(channel, sig, 6, seed=2)
    state = filter_consistent(prior, channel, ds)
    assert z_count(state, sig, 0.0) == state.z0
    counts = [z_count(state, sig, d) for d in (0.0, 0.5, 1.0, 1.5, 2.0)]
    assert counts == sorted(counts, reverse=True)
    for d in (0.0, 0.3, 1.0, 2.0):
        assert z_count(state, sig, d) == recount_oracle(state, sig, d)
    # delta = 2 keeps only zero-overlap atoms
    zero_overlap = sum(1 for a in state.signals() if overlap(a, sig) == 0)
    assert z_count(state, sig, 2.0) == zero_overlap
    with pytest.raises(ValueError):
        z_count(state, sig, 2.0 + 1e-9)
    with pytest.raises(ValueError):
        z_count(state, sig, -0.1)


# --- instance errors --------------------------------------------------------

def test_point_posterior_has_zero_error():
    channel = BgtChannel(12, 2, 0.5)
    prior = channel.prior()
    sig = Signal(12, (3, 8))
    ds = generate_dataset(channel, sig, 200, seed=11)
    state = filter_consistent(prior, channel, ds)
    assert state.z0 == 1
    assert instance_error(state, sig) == (0.0, 0.0)


def test_prior_instance_error_is_exact():
    # with no data the posterior is the prior and the direct error is 1 - k/N
    for n_dims, k in ((6, 1), (9, 3), (12, 2)):
        channel = BgtChannel(n_dims, k, 0.5)
        prior = channel.prior()
        sig = next(prior.enumerate())
        state = filter_consistent(prior, channel, generate_dataset(channel, sig, 0, seed=0))
        direct, counting = instance_error(state, sig)
        assert direct == pytest.approx(1 - k / n_dims, abs=1e-12)


def test_direct_error_identity_against_mean_vector():
    channel = BgtChannel(12, 2, 0.5)
    prior = channel.prior()
    sig = Signal(12, (3, 8))
    ds = generate_dataset(channel, sig, 4, seed=17)
    state = filter_consistent(prior, channel, ds)
    direct, counting = instance_error(state, sig)
    mean = state.mean_vector()
    assert direct == pytest.approx(float(((sig.vector() - mean) ** 2).sum()), abs=1e-12)
    dists = [2 * (1 - float(overlap(a, sig))) for a in state.signals()]
    assert counting == pytest.approx(0.5 * np.mean(dists), abs=1e-12)


def test_posterior_counting_match_over_trials():
    # the two per-instance errors agree in expectation (posterior-resampling identity)
    channel = BgtChannel(12, 2, 0.5)
    prior = channel.prior()
    table = run_trials(prior, channel, [5], trials=500, seed=21)
    diff = table.direct[:, 0] - table.counting[:, 0]
    se = diff.std(ddof=1) / np.sqrt(len(diff))
    assert abs(diff.mean()) <= 3 * max(se, 1e-12)


# --- posterior and predictive entropies -------------------------------------

def test_posterior_entropy_edges():
    channel = BgtChannel(12, 2, 0.5)
    prior = channel.prior()
    sig = Signal(12, (3, 8))
    empty = filter_consistent(prior, channel, generate_dataset(channel, sig, 0, seed=0))
    assert posterior_entropy(empty) == pytest.approx(np.log(prior.n_atoms), abs=1e-12)
    pinned = filter_consistent(prior, channel, generate_dataset(channel, sig, 200, seed=1))
    assert pinned.z0 == 1
    assert posterior_entropy(pinned) == 0.0


def test_posterior_entropy_weakly_decreasing():
    channel = BgtChannel(12, 2, 0.5)
    prior = channel.prior()
    sig = Signal(12, (1, 10))
    ds = generate_dataset(channel, sig, 30, seed=8)
    entropies = []
    for n in range(0, 31, 3):
        prefix = Dataset(xs=ds.xs[:n], ys=ds.ys[:n], signal=sig)
        entropies.append(posterior_entropy(filter_consistent(prior, channel, prefix)))
    assert all(a >= b for a, b in zip(entropies, entropies[1:]))


def test_predictive_entropy_point_posterior_is_zero():
    channel = BgtChannel(12, 2, 0.5)
    prior = channel.prior()
    sig = Signal(12, (3, 8))
    state = filter_consistent(prior, channel, generate_dataset(channel, sig, 200, seed=1))
    assert state.z0 == 1
    assert predictive_entropy(state, channel, mc_draws=100, seed=0) == 0.0


def test_predictive_entropy_prior_sbg():
    # The prior predictive is exactly balanced (E p_hat = 1/2); the entropy
    # estimate targets E h(p_hat), which sits a Jensen gap below ln 2 at
    # finite N. Check balance tightly and the estimate against an
    # independently seeded replication.
    channel = SbgChannel(12, 2, BalancedSet.half_space())
    prior = channel.prior()
    sig = Signal(12, (3, 8))
    state = filter_consistent(prior, channel, generate_dataset(channel, sig, 0, seed=0))

    rng = np.random.default_rng(2718)
    draws = 4000
    xs = channel.sample_design(rng, draws)
    p_hat = channel.respond(channel.row_pack(xs), state.atom_pack).mean(axis=1)
    se_balance = p_hat.std(ddof=1) / np.sqrt(draws)
    assert abs(p_hat.mean() - 0.5) <= 3 * se_balance

    oracle_vals = binary_entropy(p_hat)
    oracle = oracle_vals.mean()
    oracle_se = oracle_vals.std(ddof=1) / np.sqrt(draws)
    est = predictive_entropy(state, channel, mc_draws=4000, seed=4)
    assert abs(est - oracle) <= 3 * np.hypot(oracle_se, oracle_se)
    assert est < np.log(2)
    assert est == pytest.approx(np.log(2), abs=0.1)


def test_predictive_entropy_prior_bgt_exact_oracle():
    # For pooled tests p_hat(x) depends on x only through its support size s,
    # so E h(p_hat) has an exact combinatorial value: the MC estimate must
    # match it, and both sit below h(1-q) by Jensen at finite N.
    from math import comb

    q = 0.3
    n_dims, k = 12, 2
    channel = BgtChannel(n_dims, k, q)
    prior = channel.prior()
    sig = Signal(n_dims, (3, 8))
    state = filter_consistent(prior, channel, generate_dataset(channel, sig, 0, seed=0))

    rate = channel.nu / k
    total = comb(n_dims, k)
    exact = 0.0
    for s in range(n_dims + 1):
        weight = comb(n_dims, s) * rate**s * (1 - rate) ** (n_dims - s)
        p_hat = 1.0 - (comb(n_dims - s, k) / total if s <= n_dims - k else 0.0)
        exact += weight * float(binary_entropy(p_hat))

    est = predictive_entropy(state, channel, mc_draws=4000, seed=4)
    assert est == pytest.approx(exact, abs=0.015)
    assert exact < float(binary_entropy(1 - q))
    assert est == pytest.approx(float(binary_entropy(1 - q)), abs=0.1)
    with pytest.raises(ValueError):
        predictive_entropy(state, channel, mc_draws=0, seed=4)


# --- mmse over trials -------------------------------------------------------

def test_mmse_prior_shortcut():
    channel = BgtChannel(20, 3, 0.5)
    assert mmse_mc(channel, channel.prior(), 0, trials=10, seed=0) == (1 - 3 / 20, 0.0)


def test_mmse_within_unit_band():
    channel = BgtChannel(12, 2, 0.5)
    est, se = mmse_mc(channel, channel.prior(), 3, trials=200, seed=1)
    assert 0.0 <= est <= 1.0 + 3 * se


def test_mmse_monotone_information_gap():
    channel = BgtChannel(20, 3, 0.5)
    prior = channel.prior()
    table = run_trials(prior, channel, [3, 20], trials=400, seed=6)
    lo, lo_se = table.mmse(20)
    hi, hi_se = table.mmse(3)
    assert hi - lo > 10 * np.hypot(lo_se, hi_se)


# --- estimator front end ----------------------------------------------------

def test_estimator_fit_predict_round_trip():
    channel = BgtChannel(12, 2, 0.5)
    sig = Signal(12, (3, 8))
    ds = generate_dataset(channel, sig, 40, seed=15)
    est = ExactPosterior(channel).fit(ds.xs, ds.ys)
    assert est.z0_ == 1
    assert est.posterior_mean_ == pytest.approx(sig.vector())
    proba = est.predict_proba(ds.xs)
    assert proba.shape == (40, 2)
    assert np.allclose(proba.sum(axis=1), 1.0)
    assert (est.predict(ds.xs) == ds.ys).all()


def test_estimator_params_round_trip():
    channel = BgtChannel(12, 2, 0.5)
    est = ExactPosterior(channel, enumeration_budget=1234)
    params = est.get_params()
    assert params["enumeration_budget"] == 1234
    est.set_params(enumeration_budget=99_999)
    assert est.get_params()["enumeration_budget"] == 99_999
    with pytest.raises(ValueError):
        est.set_params(bogus=1)


def test_estimator_validates_inputs():
    channel = BgtChannel(12, 2, 0.5)
    est = ExactPosterior(channel)
    with pytest.raises(RuntimeError, match="not fitted"):
        est.predict(np.zeros((1, 12), dtype=np.uint8))
    with pytest.raises(ValueError):
        est.fit(np.zeros((3, 11), dtype=np.uint8), np.zeros(3, dtype=np.uint8))
    with pytest.raises(ValueError):
        est.fit(np.full((3, 12), 2, dtype=np.uint8), np.zeros(3, dtype=np.uint8))


def test_binary_entropy_values():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == pytest.approx(np.log(2), abs=1e-15)
    # h(0.7) in nats
    assert float(binary_entropy(0.7)) == pytest.approx(0.6108643021, abs=1e-9)
