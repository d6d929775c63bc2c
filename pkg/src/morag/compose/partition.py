"""Disjoint torso/hands/legs partitions of the 22-joint skeleton."""

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..skeleton import NUM_JOINTS


@dataclass(frozen=True)
class JointPartition:
    """Three disjoint joint index sets covering 0..21.

    Construction rejects any assignment that is not a disjoint complete cover.
    """

    torso: frozenset
    hands: frozenset
    legs: frozenset

    def __post_init__(self):
        torso = frozenset(int(j) for j in self.torso)
        hands = frozenset(int(j) for j in self.hands)
        legs = frozenset(int(j) for j in self.legs)
        union = torso | hands | legs
        total = len(torso) + len(hands) + len(legs)
        if total != len(union):
            raise DataError("partition sets must be pairwise disjoint")
        if union != set(range(NUM_JOINTS)):
            raise DataError(
                f"partition must cover exactly joints 0..{NUM_JOINTS - 1}"
            )
        object.__setattr__(self, "torso", torso)
        object.__setattr__(self, "hands", hands)
        object.__setattr__(self, "legs", legs)

    def indices(self, part: str) -> np.ndarray:
        return np.array(sorted(getattr(self, part)), dtype=np.intp)

    def owner(self, joint: int) -> str:
        for part in ("torso", "hands", "legs"):
            if joint in getattr(self, part):
                return part
        raise DataError(f"joint {joint} outside the skeleton")


def default_partition() -> JointPartition:
    """Standard assignment; the pelvis travels with the legs because the legs
    source also supplies the global orientation and translation."""
    return JointPartition(
        legs=frozenset({0, 1, 2, 4, 5, 7, 8, 10, 11}),
        torso=frozenset({3, 6, 9, 12, 15}),
        hands=frozenset({13, 14, 16, 17, 18, 19, 20, 21}),
    )
