import numpy as np
import pytest

from relayregions import (
    AXES,
    AuxJoint,
    DmcSpec,
    NotNormalized,
    OutOfRange,
    TooLarge,
    binary_pipes_spec,
    compose_full,
    discrete_cmi,
    dmc_maximize,
    eval_informed_both,
    eval_informed_source,
    make_degraded_channel,
)


def _random_spec(rng, sizes):
    ns, _, _, nx1, nx2, ny1, ny2 = sizes
    p_s = rng.dirichlet(np.ones(ns))
    channel = rng.dirichlet(np.ones(ny1 * ny2), size=(ns, nx1, nx2)).reshape(
        ns, nx1, nx2, ny1, ny2
    )
    return DmcSpec(sizes=sizes, p_s=p_s, channel=channel)


def _random_aux(rng, d):
    shape = d.sizes[:5]
    cells = int(np.prod(shape[1:]))
    cond = rng.dirichlet(np.ones(cells), size=shape[0])
    return AuxJoint((np.asarray(d.p_s)[:, None] * cond).reshape(shape))


def test_axes_order():
    assert AXES == ("s", "u1", "u2", "x1", "x2", "y1", "y2")


class TestSpecValidation:
    def test_alphabet_cap(self):
        with pytest.raises(OutOfRange):
            DmcSpec(
                sizes=(5, 1, 2, 2, 2, 2, 2),
                p_s=np.ones(5) / 5,
                channel=np.ones((5, 2, 2, 2, 2)) / 4,
            )

    def test_p_s_must_normalize(self):
        with pytest.raises(NotNormalized):
            DmcSpec(
                sizes=(2, 1, 2, 2, 2, 2, 2),
                p_s=np.array([0.6, 0.6]),
                channel=np.ones((2, 2, 2, 2, 2)) / 4,
            )

    def test_channel_rows_must_normalize(self):
        bad = np.ones((1, 2, 2, 2, 2)) / 4
        bad[0, 0, 0] *= 0.9
        with pytest.raises(NotNormalized):
            DmcSpec(sizes=(1, 1, 2, 2, 2, 2, 2), p_s=np.ones(1), channel=bad)

    def test_aux_joint_must_normalize(self):
        with pytest.raises(NotNormalized):
            AuxJoint(np.full((1, 1, 2, 2, 2), 0.2))


class TestCompose:
    def test_shape_mismatch(self):
        d = binary_pipes_spec()
        with pytest.raises(OutOfRange):
            compose_full(d, AuxJoint(np.full((1, 2, 2, 2, 2), 1 / 16)))

    def test_marginal_must_match_state_law(self):
        rng = np.random.default_rng(0)
        d = _random_spec(rng, (2, 1, 2, 2, 2, 2, 2))
        cells = 8
        cond = rng.dirichlet(np.ones(cells), size=2)
        wrong = AuxJoint((np.array([[0.9], [0.1]]) * cond).reshape(2, 1, 2, 2, 2))
        with pytest.raises(NotNormalized):
            compose_full(d, wrong)

    def test_joint_normalizes_and_factors(self):
        rng = np.random.default_rng(1)
        d = _random_spec(rng, (2, 2, 2, 2, 2, 2, 2))
        a = _random_aux(rng, d)
        joint = compose_full(d, a)
        assert joint.shape == d.sizes
        assert joint.sum() == pytest.approx(1.0, abs=1e-12)
        # p(y1,y2 | s,x1,x2) reproduces the channel wherever defined
        p_front = joint.sum(axis=(5, 6))
        for idx in np.ndindex(2, 2, 2, 2, 2):
            s, _, _, x1, x2 = idx
            mass = p_front[idx]
            if mass < 1e-12:
                continue
            got = joint[idx] / mass
            np.testing.assert_allclose(got, d.channel[s, x1, x2], atol=1e-12)


class TestDiscreteCmi:
    def test_disjointness_required(self):
        joint = np.full((1, 1, 2, 2, 2, 2, 2), 1 / 32)
        with pytest.raises(OutOfRange):
            discrete_cmi(joint, AXES, ["x1"], ["x1"])

    def test_unknown_axis(self):
        joint = np.full((1, 1, 2, 2, 2, 2, 2), 1 / 32)
        with pytest.raises(OutOfRange):
            discrete_cmi(joint, AXES, ["x9"], ["y1"])

    def test_doubled_coin(self):
        # y1 copies x1 under the pipes spec, one bit on a uniform input
        d = binary_pipes_spec()
        aux = AuxJoint(np.full((1, 1, 2, 2, 2), 1 / 8))
        joint = compose_full(d, aux)
        assert discrete_cmi(joint, AXES, ["x1"], ["y1"]) == pytest.approx(
            1.0, abs=1e-12
        )
        assert discrete_cmi(joint, AXES, ["x1"], ["y2"]) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_matches_binary_entropy_formula(self):
        # mixture that correlates u2 with x1: I = 1 - H(eps)
        eps = 0.2
        d = binary_pipes_spec()
        pmf = np.zeros((1, 1, 2, 2, 2))
        for u2 in range(2):
            for x1 in range(2):
                w = (1 - eps) if u2 == x1 else eps
                pmf[0, 0, u2, x1, :] = 0.5 * w / 2
        joint = compose_full(d, AuxJoint(pmf))
        h = -(eps * np.log2(eps) + (1 - eps) * np.log2(1 - eps))
        assert discrete_cmi(joint, AXES, ["u2"], ["y1"]) == pytest.approx(
            1.0 - h, abs=1e-12
        )

    def test_markov_identity_random_joints(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            sizes = tuple(rng.integers(1, 4, size=7))
            d = _random_spec(rng, sizes)
            joint = compose_full(d, _random_aux(rng, d))
            leak = discrete_cmi(
                joint, AXES, ["u1", "u2"], ["y1", "y2"], ["x1", "x2", "s"]
            )
            assert leak <= 1e-10


class TestEvaluators:
    def test_pipes_relay_forwarding(self):
        # u2 mirrors x1, x2 independent: one clean bit on both hops
        d = binary_pipes_spec()
        pmf = np.zeros((1, 1, 2, 2, 2))
        pmf[0, 0, 0, 0, :] = 0.25
        pmf[0, 0, 1, 1, :] = 0.25
        pt = eval_informed_source(d, AuxJoint(pmf))
        assert pt.r02 == pytest.approx(1.0, abs=1e-12)

    def test_both_informed_no_state_penalty(self):
        rng = np.random.default_rng(9)
        d = _random_spec(rng, (1, 2, 2, 2, 2, 2, 2))
        a = _random_aux(rng, d)
        joint = compose_full(d, a)
        pt = eval_informed_both(d, a)
        want_r1 = discrete_cmi(joint, AXES, ["x1"], ["y1"], ["s", "u1", "x2"])
        assert pt.r1 == pytest.approx(want_r1, abs=1e-12)

    def test_rates_are_clamped(self):
        rng = np.random.default_rng(13)
        d = _random_spec(rng, (2, 2, 2, 2, 2, 2, 2))
        for _ in range(10):
            pt = eval_informed_source(d, _random_aux(rng, d))
            assert pt.r1 >= 0.0 and pt.r02 >= 0.0


class TestMaximize:
    def test_pipes_reach_one_bit(self):
        res = dmc_maximize(binary_pipes_spec(), bounds="informed-source", denominator=4)
        assert res.value.r02 == 1.0
        assert res.evaluations == 330

    def test_finer_denominator_never_hurts(self):
        # denominator 8 refines denominator 4, so the optimum is nested
        d = binary_pipes_spec()
        v4 = dmc_maximize(d, bounds="informed-source", denominator=4).value.r02
        v8 = dmc_maximize(d, bounds="informed-source", denominator=8).value.r02
        assert v8 >= v4 - 1e-12

    def test_r1_objective(self):
        res = dmc_maximize(binary_pipes_spec(), bounds="informed-both",
                           denominator=4, objective="r1")
        assert res.value.r1 == 1.0

    def test_candidate_cap(self):
        rng = np.random.default_rng(2)
        d = _random_spec(rng, (4, 4, 4, 4, 4, 2, 2))
        with pytest.raises(TooLarge):
            dmc_maximize(d, denominator=16)

    def test_bad_arguments(self):
        d = binary_pipes_spec()
        with pytest.raises(OutOfRange):
            dmc_maximize(d, bounds="mystery")
        with pytest.raises(OutOfRange):
            dmc_maximize(d, denominator=5)
        with pytest.raises(OutOfRange):
            dmc_maximize(d, objective="r3")

    def test_deterministic(self):
        d = binary_pipes_spec()
        r1 = dmc_maximize(d, bounds="informed-source", denominator=4)
        r2 = dmc_maximize(d, bounds="informed-source", denominator=4)
        assert np.array_equal(r1.best.pmf, r2.best.pmf)
        assert r1.value == r2.value


class TestFactories:
    def test_make_degraded_channel_normalizes(self):
        rng = np.random.default_rng(4)
        p_y1 = rng.dirichlet(np.ones(2), size=(2, 2, 2))
        p_y2 = rng.dirichlet(np.ones(3), size=(2, 2))
        chan = make_degraded_channel(p_y1, p_y2)
        assert chan.shape == (2, 2, 2, 2, 3)
        np.testing.assert_allclose(chan.sum(axis=(3, 4)), 1.0, atol=1e-12)

    def test_make_degraded_channel_checks_rows(self):
        with pytest.raises(NotNormalized):
            make_degraded_channel(
                np.full((1, 2, 2, 2), 0.4), np.full((2, 2, 2), 0.5)
            )

    def test_pipes_spec_shape(self):
        d = binary_pipes_spec()
        assert d.sizes == (1, 1, 2, 2, 2, 2, 2)
        # y1 copies x1 and y2 copies x2, deterministically
        for x1 in range(2):
            for x2 in range(2):
                assert d.channel[0, x1, x2, x1, x2] == 1.0
