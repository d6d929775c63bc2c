"""Bridge from motion datasets and pretrained encoders into engine formats.

This package owns every step that needs a dataset or a model checkpoint; the
retrieval engine itself only ever reads the files written here. Nothing in
this package imports the engine: the binary and JSONL layouts are implemented
from their format contracts so the two sides stay independently testable.
"""

__version__ = "0.1.0"
