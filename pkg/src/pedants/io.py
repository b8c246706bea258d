"""JSONL dataset ingestion, result emission, and report writing.

Dataset files hold one JSON object per line. Lines starting with "#" are
schema/version comments and are skipped. A record needs "question",
"references" (non-empty array), and "candidate"; optional fields are
"label" (0/1), "rating" (Likert 1-5, converted to a label at the cutoff
when "label" is absent), "rule", "qtype", "model_id", "dataset_id", and
"verdicts" (metric name -> bool, for pre-judged evaluation files).
"""

from __future__ import annotations

import csv
import importlib.resources
import json
from pathlib import Path
from typing import Callable, Iterable, Iterator, TextIO

from .errors import DatasetError
from .harness import likert_to_binary
from .pipeline import QAExample

JSONL_HEADER = "# pedants-jsonl v1"
LIKERT_CUTOFF = 4


def example_from_dict(obj: dict) -> QAExample:
    if not isinstance(obj, dict):
        raise ValueError(f"expected a JSON object, got {type(obj).__name__}")
    for key in ("question", "references", "candidate"):
        if key not in obj:
            raise ValueError(f"missing required field {key!r}")
    refs = obj["references"]
    if not isinstance(refs, list) or not refs or not all(isinstance(r, str) for r in refs):
        raise ValueError("'references' must be a non-empty array of strings")
    label = obj.get("label")
    if label is not None and label not in (0, 1, True, False):
        raise ValueError(f"'label' must be 0 or 1, got {label!r}")
    if label is None and obj.get("rating") is not None:
        label = likert_to_binary(obj["rating"], LIKERT_CUTOFF)
    parsed = dict(obj)
    parsed["label"] = label
    parsed.pop("rating", None)
    return QAExample.from_dict(parsed)


def iter_raw(
    path: str | Path,
    skip_bad: bool = False,
    on_skip: Callable[[DatasetError], None] | None = None,
) -> Iterator[tuple[int, dict]]:
    """Stream (line_no, json object) pairs from a JSONL file.

    Malformed lines raise DatasetError with their 1-based line number; with
    ``skip_bad`` they are reported through ``on_skip`` and skipped. Memory
    use is one line at a time.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                obj = json.loads(stripped)
                if not isinstance(obj, dict):
                    raise ValueError(f"expected a JSON object, got {type(obj).__name__}")
            except Exception as exc:
                err = DatasetError(str(exc), path=str(path), line_no=line_no)
                if not skip_bad:
                    raise err from exc
                if on_skip is not None:
                    on_skip(err)
                continue
            yield line_no, obj


def iter_examples(
    path: str | Path,
    skip_bad: bool = False,
    on_skip: Callable[[DatasetError], None] | None = None,
) -> Iterator[tuple[int, QAExample]]:
    """Stream validated (line_no, QAExample) pairs from a JSONL file."""
    for line_no, obj in iter_raw(path, skip_bad=skip_bad, on_skip=on_skip):
        try:
            example = example_from_dict(obj)
        except Exception as exc:
            err = DatasetError(str(exc), path=str(path), line_no=line_no)
            if not skip_bad:
                raise err from exc
            if on_skip is not None:
                on_skip(err)
            continue
        yield line_no, example


def read_examples(path: str | Path, skip_bad: bool = False) -> list[QAExample]:
    return [ex for _, ex in iter_examples(path, skip_bad=skip_bad)]


class DatasetFile:
    """Handle to a JSONL dataset; records validate lazily while streaming."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def records(
        self,
        skip_bad: bool = False,
        on_skip: Callable[[DatasetError], None] | None = None,
    ) -> Iterator[tuple[int, QAExample]]:
        yield from iter_examples(self.path, skip_bad=skip_bad, on_skip=on_skip)

    def __iter__(self) -> Iterator[QAExample]:
        return (example for _, example in self.records())


def write_jsonl(handle: TextIO, records: Iterable[dict], header: str = JSONL_HEADER) -> int:
    """Write records as JSON lines after a schema comment; returns the count."""
    handle.write(header + "\n")
    n = 0
    for record in records:
        handle.write(json.dumps(record) + "\n")
        n += 1
    return n


def load_seed_corpus() -> list[QAExample]:
    """The bundled hand-labeled training corpus (>= 5 examples per rule)."""
    resource = importlib.resources.files("pedants").joinpath("data/seed_corpus.jsonl")
    examples = []
    for line_no, line in enumerate(resource.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        examples.append(example_from_dict(json.loads(stripped)))
    return examples


def write_report_csv(path: str | Path, rows: list[dict]) -> None:
    if not rows:
        raise ValueError("no report rows to write")
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def write_report_json(path: str | Path, rows: list[dict]) -> None:
    Path(path).write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")
