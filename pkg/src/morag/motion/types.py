"""Motion containers: skeletal pose sequences and encoded feature matrices."""

from dataclasses import dataclass, field

import numpy as np

from .. import skeleton
from ..errors import MalformedFeatureError, ShapeError

_ROTATION_EPS = 1e-6


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


def rotation_rows_degenerate(rotations: np.ndarray) -> np.ndarray:
    """Flag 6D rotation rows whose two 3-vectors cannot be orthonormalized.

    A row is degenerate when its first column is (near) zero or the second
    column is (near) parallel to the first, i.e. Gram-Schmidt would collapse.
    Accepts (..., 6), returns a boolean array over the leading dimensions.
    """
    rot = np.asarray(rotations, dtype=np.float64)
    a = rot[..., :3]
    b = rot[..., 3:]
    norm_a = np.linalg.norm(a, axis=-1)
    safe = np.where(norm_a > 0, norm_a, 1.0)
    a_hat = a / safe[..., None]
    b_perp = b - np.sum(a_hat * b, axis=-1, keepdims=True) * a_hat
    return (norm_a <= _ROTATION_EPS) | (np.linalg.norm(b_perp, axis=-1) <= _ROTATION_EPS)


@dataclass(frozen=True)
class JointMotion:
    """A skeletal motion: world root trajectory plus root-relative pose.

    ``joint_positions`` are expressed in the root frame (heading removed,
    root translation subtracted), so row 0 -- the root joint itself -- is
    identically zero. ``joint_rotations`` hold one 6D row per non-root joint;
    row ``j - 1`` belongs to joint ``j``.
    """

    root_translation: np.ndarray  # (frames, 3) metres, world frame
    root_heading: np.ndarray      # (frames,) radians about +Y
    joint_positions: np.ndarray   # (frames, 22, 3) root-relative metres
    joint_rotations: np.ndarray   # (frames, 21, 6) continuous 6D
    fps: float = 20.0

    def __post_init__(self):
        trans = _freeze(self.root_translation)
        heading = _freeze(self.root_heading)
        positions = _freeze(self.joint_positions)
        rotations = _freeze(self.joint_rotations)

        if trans.ndim != 2 or trans.shape[1] != 3:
            raise ShapeError(f"root_translation must be (frames, 3), got {trans.shape}")
        frames = trans.shape[0]
        if frames < 1:
            raise ShapeError("motion must have at least one frame")
        if heading.shape != (frames,):
            raise ShapeError(f"root_heading must be ({frames},), got {heading.shape}")
        if positions.shape != (frames, skeleton.NUM_JOINTS, 3):
            raise ShapeError(
                f"joint_positions must be ({frames}, {skeleton.NUM_JOINTS}, 3), "
                f"got {positions.shape}"
            )
        if rotations.shape != (frames, skeleton.NUM_ROTATION_JOINTS, 6):
            raise ShapeError(
                f"joint_rotations must be ({frames}, {skeleton.NUM_ROTATION_JOINTS}, 6), "
                f"got {rotations.shape}"
            )
        for name, arr in (
            ("root_translation", trans),
            ("root_heading", heading),
            ("joint_positions", positions),
            ("joint_rotations", rotations),
        ):
            if not np.isfinite(arr).all():
                raise ShapeError(f"{name} contains non-finite values")
        if not (np.isfinite(self.fps) and self.fps > 0):
            raise ShapeError(f"fps must be positive, got {self.fps}")
        if np.abs(positions[:, 0, :]).max(initial=0.0) > 1e-9:
            raise ShapeError("joint_positions row 0 is the root and must be zero")
        if rotation_rows_degenerate(rotations).any():
            raise ShapeError("joint_rotations contain degenerate 6D rows")

        object.__setattr__(self, "root_translation", trans)
        object.__setattr__(self, "root_heading", heading)
        object.__setattr__(self, "joint_positions", positions)
        object.__setattr__(self, "joint_rotations", rotations)
        object.__setattr__(self, "fps", float(self.fps))

    @property
    def frames(self) -> int:
        return self.root_translation.shape[0]


@dataclass(frozen=True)
class FeatureSequence:
    """Frames x 263 feature matrix; see :mod:`morag.skeleton` for the layout."""

    data: np.ndarray = field()

    def __post_init__(self):
        data = _freeze(self.data)
        if data.ndim != 2 or data.shape[1] != skeleton.FEATURE_WIDTH:
            raise MalformedFeatureError(
                f"feature rows must be {skeleton.FEATURE_WIDTH} wide, got {data.shape}"
            )
        if data.shape[0] < 1:
            raise MalformedFeatureError("feature sequence must have at least one row")
        if not np.isfinite(data).all():
            raise MalformedFeatureError("feature data contains non-finite values")
        contacts = data[:, skeleton.FOOT_CONTACTS]
        if contacts.min(initial=0.0) < 0.0 or contacts.max(initial=0.0) > 1.0:
            raise MalformedFeatureError("foot-contact slots must lie in [0, 1]")
        object.__setattr__(self, "data", data)

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def root_angular_velocity(self) -> np.ndarray:
        return self.data[:, skeleton.ROOT_ANGULAR][:, 0]

    @property
    def root_planar_velocity(self) -> np.ndarray:
        return self.data[:, skeleton.ROOT_PLANAR]

    @property
    def root_height(self) -> np.ndarray:
        return self.data[:, skeleton.ROOT_HEIGHT][:, 0]

    @property
    def joint_positions(self) -> np.ndarray:
        return self.data[:, skeleton.JOINT_POSITIONS]

    @property
    def joint_velocities(self) -> np.ndarray:
        return self.data[:, skeleton.JOINT_VELOCITIES]

    @property
    def joint_rotations(self) -> np.ndarray:
        return self.data[:, skeleton.JOINT_ROTATIONS]

    @property
    def foot_contacts(self) -> np.ndarray:
        return self.data[:, skeleton.FOOT_CONTACTS]


@dataclass(frozen=True)
class RootTrajectory:
    """Integrated root path: per-frame heading (unwrapped) and position."""

    heading: np.ndarray  # (frames,)
    position: np.ndarray  # (frames, 3)

    def __post_init__(self):
        heading = _freeze(self.heading)
        position = _freeze(self.position)
        if heading.ndim != 1 or position.shape != (heading.shape[0], 3):
            raise ShapeError(
                f"trajectory shapes inconsistent: {heading.shape} vs {position.shape}"
            )
        object.__setattr__(self, "heading", heading)
        object.__setattr__(self, "position", position)

    @property
    def frames(self) -> int:
        return self.heading.shape[0]
