"""Exception types raised by the pipeline stages."""


class C5Error(Exception):
    """Base class for all pipeline errors (CLI maps these to exit code 2)."""


class MalformedHeader(C5Error):
    """WET record header could not be parsed; the record is skipped."""


class TruncatedRecord(C5Error):
    """Record payload shorter than Content-Length; the stream is unusable."""


class BadCompression(C5Error):
    """Gzip integrity failure on a compressed input."""


class BadwordListMissing(C5Error):
    """Sentence filtering was invoked without ever loading a badword list."""


class StateCorrupt(C5Error):
    """Persisted dedup state failed its checksum or header validation."""


class MissingSpecials(C5Error):
    """Vocabulary pruning input lacks one of the named special tokens."""


class FormatViolation(C5Error):
    """Pre-training text file breaks the one-sentence-per-line format."""


class ValidationError(C5Error):
    """Full-corpus validator found a violated invariant (exit code 3)."""
