"""Document model and the line-delimited record files stages exchange.

A record file holds one JSON document per line, UTF-8, with the fields
``doc_id``, ``source_url``, ``declared_languages``, ``stage`` and either
``lines`` (before sentence segmentation) or ``sentences`` (after).
Sentences are plain strings; ``len(sentence)`` is the Unicode scalar count.
"""

import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

STAGE_RAW = "raw"
STAGE_CLEANED = "cleaned"
STAGE_SEGMENTED = "segmented"
STAGE_DEDUPED = "deduped"
STAGE_ORDER = (STAGE_RAW, STAGE_CLEANED, STAGE_SEGMENTED, STAGE_DEDUPED)


@dataclass
class Document:
    doc_id: int
    source_url: str
    declared_languages: list[str] = field(default_factory=list)
    stage: str = STAGE_RAW
    lines: list[str] = field(default_factory=list)
    sentences: list[str] = field(default_factory=list)

    def advanced(self, stage: str, **changes) -> "Document":
        """Copy of this document moved forward to `stage`."""
        if STAGE_ORDER.index(stage) < STAGE_ORDER.index(self.stage):
            raise ValueError(f"stage may not move backward: {self.stage} -> {stage}")
        return Document(
            doc_id=self.doc_id,
            source_url=self.source_url,
            declared_languages=list(self.declared_languages),
            stage=stage,
            lines=changes.get("lines", list(self.lines)),
            sentences=changes.get("sentences", list(self.sentences)),
        )


def doc_to_json(doc: Document) -> str:
    obj = {
        "doc_id": doc.doc_id,
        "source_url": doc.source_url,
        "declared_languages": doc.declared_languages,
        "stage": doc.stage,
    }
    if doc.stage in (STAGE_SEGMENTED, STAGE_DEDUPED):
        obj["sentences"] = doc.sentences
    else:
        obj["lines"] = doc.lines
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def doc_from_json(line: str) -> Document:
    obj = json.loads(line)
    return Document(
        doc_id=obj["doc_id"],
        source_url=obj["source_url"],
        declared_languages=obj.get("declared_languages", []),
        stage=obj.get("stage", STAGE_RAW),
        lines=obj.get("lines", []),
        sentences=obj.get("sentences", []),
    )


def write_records(docs: Iterable[Document], fp: IO[str]) -> int:
    n = 0
    for doc in docs:
        fp.write(doc_to_json(doc))
        fp.write("\n")
        n += 1
    return n


def read_records(fp: IO[str]) -> Iterator[Document]:
    for line in fp:
        line = line.strip("\n")
        if line:
            yield doc_from_json(line)


def write_record_file(docs: Iterable[Document], path) -> int:
    with open(path, "w", encoding="utf-8") as fp:
        return write_records(docs, fp)


def read_record_file(path) -> Iterator[Document]:
    with open(path, "r", encoding="utf-8") as fp:
        yield from read_records(fp)
