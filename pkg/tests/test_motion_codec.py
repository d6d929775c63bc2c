import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morag import skeleton
from morag.errors import (
    ConfigError,
    FrameRangeError,
    InsufficientFramesError,
    ShapeError,
)
from morag.motion import (
    JointMotion,
    compute_foot_contacts,
    decode_features,
    encode_features,
    integrate_root,
    trim,
)
from morag.motion.codec import rotate_about_y

from conftest import random_motion, stationary_motion


def simulate_root(r_a, r_x, r_z, r_y):
    """Step-by-step reference integrator (independent of the vectorized path)."""
    length = len(r_a)
    heading = [0.0]
    pos = [(0.0, r_y[0], 0.0)]
    for t in range(1, length):
        h_prev = heading[-1]
        dx = np.cos(h_prev) * r_x[t - 1] + np.sin(h_prev) * r_z[t - 1]
        dz = -np.sin(h_prev) * r_x[t - 1] + np.cos(h_prev) * r_z[t - 1]
        x, _, z = pos[-1]
        heading.append(h_prev + r_a[t - 1])
        pos.append((x + dx, r_y[t], z + dz))
    return np.array(heading), np.array(pos)


class TestEncode:
    def test_rows_and_width(self, rng):
        m = random_motion(rng, frames=10)
        f = encode_features(m)
        assert f.data.shape == (9, 263)

    def test_slice_boundaries(self):
        assert skeleton.SLICE_BOUNDARIES == (1, 3, 4, 67, 133, 259)
        assert skeleton.FEATURE_WIDTH == 263

    def test_stationary_motion_zero_velocities(self):
        f = encode_features(stationary_motion(frames=8))
        assert np.all(f.root_angular_velocity == 0.0)
        assert np.all(f.root_planar_velocity == 0.0)
        assert np.all(f.joint_velocities == 0.0)

    def test_uniform_translation_constant_velocity(self):
        # World-X translation at v m/s with identity heading: the planar X
        # feature equals the per-frame step v / fps, Z stays zero.
        fps, v, frames = 20.0, 1.5, 15
        base = stationary_motion(frames=frames, fps=fps)
        translation = base.root_translation.copy()
        translation[:, 0] = v * np.arange(frames) / fps
        m = JointMotion(
            root_translation=translation,
            root_heading=base.root_heading,
            joint_positions=base.joint_positions,
            joint_rotations=base.joint_rotations,
            fps=fps,
        )
        f = encode_features(m)
        assert np.allclose(f.root_planar_velocity[:, 0], v / fps, atol=1e-12)
        assert np.allclose(f.root_planar_velocity[:, 1], 0.0, atol=1e-12)
        # every joint translates identically, so joint velocities match too
        vel = f.joint_velocities.reshape(-1, 22, 3)
        assert np.allclose(vel[:, :, 0], v / fps, atol=1e-12)

    def test_insufficient_frames(self):
        with pytest.raises(InsufficientFramesError):
            encode_features(stationary_motion(frames=1))


class TestIntegrateRoot:
    def test_zero_velocities_stationary(self):
        traj = integrate_root(np.zeros(6), np.zeros(6), np.zeros(6), np.full(6, 0.9))
        assert np.all(traj.heading == 0.0)
        assert np.allclose(traj.position, [0.0, 0.9, 0.0])

    def test_constant_x_velocity_closed_form(self):
        length, c = 9, 0.25
        traj = integrate_root(
            np.zeros(length), np.full(length, c), np.zeros(length), np.zeros(length)
        )
        assert traj.position[-1, 0] == pytest.approx((length - 1) * c, abs=1e-12)
        assert np.allclose(traj.position[:, 2], 0.0)

    def test_quarter_turns_match_simulation(self):
        r_a = np.full(3, np.pi / 2)
        r_x = np.ones(3)
        r_z = np.zeros(3)
        r_y = np.zeros(3)
        traj = integrate_root(r_a, r_x, r_z, r_y)
        heading, position = simulate_root(r_a, r_x, r_z, r_y)
        assert np.array_equal(traj.heading, heading)
        assert np.allclose(traj.position, position, atol=1e-12)

    def test_random_inputs_match_simulation_exactly(self, rng):
        for _ in range(50):
            length = int(rng.integers(1, 40))
            args = [rng.normal(0, 1, length) for _ in range(4)]
            traj = integrate_root(*args)
            heading, position = simulate_root(*args)
            assert np.allclose(traj.heading, heading, atol=1e-12)
            assert np.allclose(traj.position, position, atol=1e-9)

    def test_zero_angular_reduces_to_cumsum(self, rng):
        length = 25
        r_x = rng.normal(0, 1, length)
        r_z = rng.normal(0, 1, length)
        traj = integrate_root(np.zeros(length), r_x, r_z, np.zeros(length))
        assert np.allclose(traj.position[1:, 0], np.cumsum(r_x[:-1]), atol=1e-12)
        assert np.allclose(traj.position[1:, 2], np.cumsum(r_z[:-1]), atol=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            integrate_root(np.zeros(3), np.zeros(4), np.zeros(3), np.zeros(3))

    def test_heading_offset_rotates_path_rigidly(self, rng):
        # Adding a constant to the first angular step rotates every later
        # position rigidly about the origin.
        length, delta = 12, 0.7
        r_a = rng.normal(0, 0.2, length)
        r_x = rng.normal(0, 1, length)
        r_z = rng.normal(0, 1, length)
        r_y = np.zeros(length)
        base = integrate_root(r_a, r_x, r_z, r_y)
        shifted = r_a.copy()
        shifted[0] += delta
        rotated = integrate_root(shifted, r_x, r_z, r_y)
        # the offset takes effect after the first step, so the path from
        # position[1] on is rigidly rotated about that point
        pivot = base.position[1]
        expected = pivot + rotate_about_y(
            np.full(length - 1, delta), base.position[1:] - pivot
        )
        assert np.allclose(rotated.position[1:], expected, atol=1e-9)
        assert np.allclose(rotated.heading[1:], base.heading[1:] + delta, atol=1e-12)


class TestFootContacts:
    def test_stationary_all_ones(self):
        contacts = compute_foot_contacts(stationary_motion(frames=6))
        assert contacts.shape == (5, 4)
        assert np.all(contacts == 1.0)

    def test_fast_translation_all_zeros(self):
        frames, fps = 8, 20.0
        base = stationary_motion(frames=frames, fps=fps)
        translation = base.root_translation.copy()
        translation[:, 0] = 2.0 * np.arange(frames)  # 2 m per frame
        m = JointMotion(
            root_translation=translation,
            root_heading=base.root_heading,
            joint_positions=base.joint_positions,
            joint_rotations=base.joint_rotations,
            fps=fps,
        )
        assert np.all(compute_foot_contacts(m) == 0.0)

    def test_planted_vs_swinging_foot(self):
        frames = 10
        base = stationary_motion(frames=frames)
        positions = base.joint_positions.copy()
        # swing the right ankle (8) and right foot (11); keep the left planted
        swing = 0.5 * np.sin(np.linspace(0, 3 * np.pi, frames))
        positions[:, 8, 0] += swing
        positions[:, 11, 0] += swing
        m = JointMotion(
            root_translation=base.root_translation,
            root_heading=base.root_heading,
            joint_positions=positions,
            joint_rotations=base.joint_rotations,
            fps=base.fps,
        )
        contacts = compute_foot_contacts(m, velocity_threshold=1e-3)
        assert np.all(contacts[:, 0] == 1.0)  # left ankle
        assert np.all(contacts[:, 1] == 1.0)  # left foot
        assert contacts[:, 2].sum() < frames - 1  # right ankle leaves the ground
        assert contacts[:, 3].sum() < frames - 1

    def test_nonpositive_threshold(self):
        with pytest.raises(ConfigError):
            compute_foot_contacts(stationary_motion(), velocity_threshold=0.0)


class TestTrim:
    def test_prefix_slice_bit_identical(self, rng):
        m = random_motion(rng, frames=60)
        t = trim(m, 45)
        assert t.frames == 45
        assert np.array_equal(t.root_translation, m.root_translation[:45])
        assert np.array_equal(t.joint_positions, m.joint_positions[:45])
        assert np.array_equal(t.joint_rotations, m.joint_rotations[:45])

    def test_identity(self, rng):
        m = random_motion(rng, frames=12)
        t = trim(m, 12)
        assert np.array_equal(t.root_translation, m.root_translation)

    def test_single_frame(self, rng):
        m = random_motion(rng, frames=9)
        t = trim(m, 1)
        assert t.frames == 1
        assert np.array_equal(t.joint_positions[0], m.joint_positions[0])

    def test_out_of_range(self, rng):
        m = random_motion(rng, frames=5)
        for bad in (0, 6, -1):
            with pytest.raises(FrameRangeError):
                trim(m, bad)

    @given(frames=st.integers(min_value=2, max_value=40), data=st.data())
    @settings(max_examples=30, deadline=None)
    def test_idempotent(self, frames, data):
        m = random_motion(np.random.default_rng(7), frames=frames)
        f = data.draw(st.integers(min_value=1, max_value=frames))
        once = trim(m, f)
        twice = trim(once, f)
        assert np.array_equal(once.root_translation, twice.root_translation)
        assert np.array_equal(once.joint_rotations, twice.joint_rotations)


class TestRoundTrip:
    def test_motion_side(self, rng):
        # decode(encode(m)) reproduces pose fields and root deltas up to the
        # canonical re-anchoring (rotation by the initial heading).
        for _ in range(25):
            m = random_motion(rng)
            dec = decode_features(encode_features(m), m.fps)
            n = dec.frames
            assert n == m.frames - 1
            assert np.allclose(dec.joint_positions, m.joint_positions[:n], atol=1e-5)
            assert np.allclose(dec.joint_rotations, m.joint_rotations[:n], atol=1e-5)
            d_head = np.diff(m.root_heading[:n])
            assert np.allclose(np.diff(dec.root_heading), d_head, atol=1e-5)
            # world deltas agree after undoing the anchor rotation
            d_world = np.diff(m.root_translation[:n], axis=0)
            expected = rotate_about_y(
                np.full(n - 1, -m.root_heading[0]), d_world
            )
            assert np.allclose(np.diff(dec.root_translation, axis=0), expected, atol=1e-5)
            assert np.allclose(dec.root_translation[:, 1], m.root_translation[:n, 1], atol=1e-5)

    def test_feature_side(self, rng):
        # encode(decode(f)) reproduces every non-contact slice of consistent
        # features on the overlapping rows.
        for _ in range(25):
            m = random_motion(rng)
            f = encode_features(m)
            back = encode_features(decode_features(f, m.fps))
            assert back.frames == f.frames - 1
            assert np.allclose(
                back.data[:, :259], f.data[:-1, :259], atol=1e-5
            )

    def test_zero_features_decode_to_stationary_origin(self):
        from morag.motion import FeatureSequence

        f = FeatureSequence(np.zeros((5, 263)))
        m = decode_features(f, 20.0)
        assert m.frames == 5
        assert np.all(m.root_translation == 0.0)
        assert np.all(m.root_heading == 0.0)
        assert np.all(m.joint_positions == 0.0)

    def test_single_row_decodes_to_one_frame(self, rng):
        m = random_motion(rng, frames=2)
        f = encode_features(m)
        dec = decode_features(f, m.fps)
        assert dec.frames == 1
        assert np.allclose(dec.joint_positions[0], m.joint_positions[0], atol=1e-12)


class TestValidation:
    def test_root_row_must_be_zero(self, rng):
        m = random_motion(rng, frames=4)
        positions = m.joint_positions.copy()
        positions[:, 0, 0] = 0.5
        with pytest.raises(ShapeError):
            JointMotion(
                root_translation=m.root_translation,
                root_heading=m.root_heading,
                joint_positions=positions,
                joint_rotations=m.joint_rotations,
                fps=m.fps,
            )

    def test_degenerate_rotation_rejected(self, rng):
        m = random_motion(rng, frames=4)
        rotations = m.joint_rotations.copy()
        rotations[1, 3] = [1.0, 0.0, 0.0, 2.0, 0.0, 0.0]  # parallel columns
        with pytest.raises(ShapeError):
            JointMotion(
                root_translation=m.root_translation,
                root_heading=m.root_heading,
                joint_positions=m.joint_positions,
                joint_rotations=rotations,
                fps=m.fps,
            )

    def test_nonfinite_feature_rejected(self):
        from morag.errors import MalformedFeatureError
        from morag.motion import FeatureSequence

        bad = np.zeros((3, 263))
        bad[1, 10] = np.nan
        with pytest.raises(MalformedFeatureError):
            FeatureSequence(bad)
