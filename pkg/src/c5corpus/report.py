"""Per-rule drop counters, mergeable across shards and stages."""

from dataclasses import dataclass, fields

COUNTER_NAMES = (
    "docs_dropped_language",
    "lines_dropped_javascript",
    "lines_whitespace_normalized",
    "sentences_dropped_curly",
    "sentences_dropped_badword",
    "sentences_dropped_short",
    "sentences_dropped_truncation",
    "spans_deduplicated",
)


@dataclass
class CleanReport:
    docs_dropped_language: int = 0
    lines_dropped_javascript: int = 0
    lines_whitespace_normalized: int = 0
    sentences_dropped_curly: int = 0
    sentences_dropped_badword: int = 0
    sentences_dropped_short: int = 0
    sentences_dropped_truncation: int = 0
    spans_deduplicated: int = 0

    def merge(self, other: "CleanReport") -> "CleanReport":
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def as_dict(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in COUNTER_NAMES}


def save_report(report: CleanReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        for name in COUNTER_NAMES:
            fp.write(f"{name}\t{getattr(report, name)}\n")


def load_report(path) -> CleanReport:
    report = CleanReport()
    with open(path, "r", encoding="utf-8") as fp:
        for line in fp:
            line = line.strip()
            if not line:
                continue
            name, value = line.split("\t")
            if name in COUNTER_NAMES:
                setattr(report, name, int(value))
    return report
