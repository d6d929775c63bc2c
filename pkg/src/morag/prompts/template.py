"""Prompt construction and completion parsing for part descriptions.

A prompt stacks three blocks: task instructions, optional few-shot examples,
and the query carrying the input description. Completions are expected to
label three segments Torso/Hands/Legs; the parser is tolerant about the exact
marker style and ordering.
"""

import hashlib
import re
from dataclasses import dataclass, field

from ..errors import ParseError, UsageError

PLACEHOLDER = "{text}"

TASK_INSTRUCTIONS = (
    "The instructions for this task is to describe the listed body parts' "
    "position and movements in a sentence using simple language. "
    "['Torso',' Hands', 'Legs']"
)

QUERY_PATTERN = (
    "Query: Describe the below body parts position and movements involved in "
    "the action [{text}] in a sentence using simple language. "
    "1) Torso 2) Hands 3) Legs"
)

_FEW_SHOT = (
    (
        "A person is walking forward",
        "1) Torso: The torso stays upright and faces forward, swaying slightly "
        "with each step.\n"
        "2) Hands: The hands swing naturally at the sides, opposite to the legs.\n"
        "3) Legs: The legs step forward one after the other, carrying the body "
        "ahead at a steady pace.",
    ),
    (
        "A person sits down on a chair",
        "1) Torso: The torso leans forward a little and then lowers until it "
        "rests upright on the seat.\n"
        "2) Hands: The hands reach back or rest on the thighs to steady the "
        "body while lowering.\n"
        "3) Legs: The legs bend at the knees and take the body's weight until "
        "it settles onto the chair.",
    ),
    (
        "A person waves with the right hand",
        "1) Torso: The torso stays still and upright, facing ahead.\n"
        "2) Hands: The right hand is raised beside the head and swings side to "
        "side while the left hand hangs down.\n"
        "3) Legs: The legs stand in place, keeping the body balanced on the "
        "ground.",
    ),
)


@dataclass(frozen=True)
class PromptTemplate:
    task_instructions: str = TASK_INSTRUCTIONS
    few_shot_examples: tuple = _FEW_SHOT
    query_pattern: str = QUERY_PATTERN

    def __post_init__(self):
        if not self.task_instructions.strip():
            raise UsageError("task_instructions must be non-empty")
        if self.query_pattern.count(PLACEHOLDER) != 1:
            raise UsageError(
                f"query_pattern must contain exactly one {PLACEHOLDER} placeholder"
            )
        object.__setattr__(self, "few_shot_examples", tuple(tuple(e) for e in self.few_shot_examples))

    def digest(self) -> str:
        blob = "\x1e".join(
            [self.task_instructions]
            + [f"{inp}\x1f{out}" for inp, out in self.few_shot_examples]
            + [self.query_pattern]
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


DEFAULT_TEMPLATE = PromptTemplate()


@dataclass(frozen=True)
class PartDescriptions:
    torso: str
    hands: str
    legs: str
    source: str = ""

    def __post_init__(self):
        for name in ("torso", "hands", "legs"):
            if not getattr(self, name).strip():
                raise ParseError(f"{name} description must be non-empty")

    def as_dict(self) -> dict:
        return {
            "torso": self.torso,
            "hands": self.hands,
            "legs": self.legs,
            "source": self.source,
        }


def build_prompt(text: str, template: PromptTemplate = DEFAULT_TEMPLATE) -> str:
    """Deterministic prompt assembly; the description is substituted verbatim."""
    if not text or not text.strip():
        raise UsageError("input description must be non-empty")
    blocks = [template.task_instructions]
    for example_in, example_out in template.few_shot_examples:
        blocks.append(
            template.query_pattern.replace(PLACEHOLDER, example_in) + "\n" + example_out
        )
    blocks.append(template.query_pattern.replace(PLACEHOLDER, text))
    return "\n\n".join(blocks)


_SEGMENT_RE = re.compile(
    r"(?:^|\n|\s)(?:\d+\s*[).]\s*)?(torso|hands|legs)\s*:",
    re.IGNORECASE,
)


def parse_llm_output(completion: str) -> PartDescriptions:
    """Extract the three labeled segments from a completion.

    Tolerates ``1)``, ``1.`` or bare ``Torso:`` markers in any order and any
    case; segments are matched by label, not position. Fewer than three
    identifiable segments is a parse error carrying the raw completion.
    """
    found = {}
    matches = list(_SEGMENT_RE.finditer(completion or ""))
    for match, nxt in zip(matches, matches[1:] + [None]):
        label = match.group(1).lower()
        end = nxt.start() if nxt is not None else len(completion)
        segment = completion[match.end() : end].strip()
        if label not in found and segment:
            found[label] = segment
    missing = [p for p in ("torso", "hands", "legs") if p not in found]
    if missing:
        raise ParseError(
            f"completion lacks segment(s): {', '.join(missing)}",
            completion=completion or "",
        )
    return PartDescriptions(torso=found["torso"], hands=found["hands"], legs=found["legs"])


def serialize_parts(parts: PartDescriptions) -> str:
    """Canonical textual form; ``parse_llm_output`` inverts it."""
    return (
        f"1) Torso: {parts.torso}\n2) Hands: {parts.hands}\n3) Legs: {parts.legs}"
    )
