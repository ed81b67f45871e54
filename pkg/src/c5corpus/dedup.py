"""Corpus-global deduplication of four-sentence windows.

Every window of four consecutive sentences (within one document) is hashed
over its blank-stripped concatenation; whenever a window's digest was seen
before, in (doc_id, window start) order, the window's sentences are removed.
Digests are computed on each document's original sentence list, one pass
over the corpus; passes repeat until a full pass removes nothing, so the
output never contains a repeated window.
"""

import hashlib
import os
import struct
import tempfile
from dataclasses import dataclass, field
from typing import Iterable

from . import kernels
from .errors import StateCorrupt
from .records import Document, STAGE_DEDUPED, read_record_file, write_record_file
from .report import CleanReport

WINDOW = 4
DIGEST_SIZE = 16
DIGEST_ALGO_ID = 1  # blake2b-128 keyed with the little-endian 64-bit seed
DEFAULT_SEED = 0

_STATE_MAGIC = b"C5SPANS\x00"
_STATE_VERSION = 1


def _key(seed: int) -> bytes:
    return struct.pack("<Q", seed)


def span_digest(sentences: Iterable[str], seed: int = DEFAULT_SEED) -> bytes:
    """128-bit digest of a window: blanks stripped, then keyed blake2b."""
    norm = kernels.strip_blanks("".join(sentences))
    return hashlib.blake2b(norm.encode("utf-8"), digest_size=DIGEST_SIZE, key=_key(seed)).digest()


def window_digests(doc: Document, seed: int = DEFAULT_SEED) -> list[tuple[int, bytes]]:
    """(start index, digest) for each of the n-3 windows; none for n < 4."""
    sents = doc.sentences
    n = len(sents)
    if n < WINDOW:
        return []
    normed = [kernels.strip_blanks(s) for s in sents]
    key = _key(seed)
    out = []
    for i in range(n - WINDOW + 1):
        data = "".join(normed[i : i + WINDOW]).encode("utf-8")
        out.append((i, hashlib.blake2b(data, digest_size=DIGEST_SIZE, key=key).digest()))
    return out


@dataclass
class DedupState:
    seed: int = DEFAULT_SEED
    seen: set[bytes] = field(default_factory=set)
    spans_seen: int = 0
    spans_removed: int = 0


def save_state(state: DedupState, path) -> None:
    digests = sorted(state.seen)
    header = _STATE_MAGIC + struct.pack(
        "<HHQQ", _STATE_VERSION, DIGEST_ALGO_ID, state.seed, len(digests)
    )
    body = b"".join(digests)
    checksum = hashlib.sha256(header + body).digest()
    with open(path, "wb") as fp:
        fp.write(header)
        fp.write(body)
        fp.write(checksum)


def load_state(path) -> DedupState:
    with open(path, "rb") as fp:
        blob = fp.read()
    if len(blob) < len(_STATE_MAGIC) + 20 + 32 or not blob.startswith(_STATE_MAGIC):
        raise StateCorrupt("state file too short or wrong magic")
    payload, checksum = blob[:-32], blob[-32:]
    if hashlib.sha256(payload).digest() != checksum:
        raise StateCorrupt("state file checksum mismatch")
    version, algo, seed, count = struct.unpack(
        "<HHQQ", payload[len(_STATE_MAGIC) : len(_STATE_MAGIC) + 20]
    )
    if version != _STATE_VERSION or algo != DIGEST_ALGO_ID:
        raise StateCorrupt(f"unsupported state version/algorithm: {version}/{algo}")
    body = payload[len(_STATE_MAGIC) + 20 :]
    if len(body) != count * DIGEST_SIZE:
        raise StateCorrupt("digest block length does not match header count")
    seen = {body[i : i + DIGEST_SIZE] for i in range(0, len(body), DIGEST_SIZE)}
    return DedupState(seed=seed, seen=seen)


def _dedup_pass(
    docs: Iterable[Document], state: DedupState
) -> tuple[list[Document], int]:
    """One canonical pass; returns surviving documents and removed-window count."""
    out = []
    removed_windows = 0
    for doc in docs:
        removed_idx: set[int] = set()
        for start, digest in window_digests(doc, state.seed):
            state.spans_seen += 1
            if digest in state.seen:
                removed_windows += 1
                state.spans_removed += 1
                removed_idx.update(range(start, start + WINDOW))
            else:
                state.seen.add(digest)
        if removed_idx:
            sentences = [s for i, s in enumerate(doc.sentences) if i not in removed_idx]
        else:
            sentences = list(doc.sentences)
        if sentences:
            out.append(doc.advanced(STAGE_DEDUPED, sentences=sentences))
    return out, removed_windows


def dedup_corpus(
    docs: Iterable[Document], state: DedupState | None = None
) -> tuple[list[Document], DedupState, CleanReport]:
    """Deduplicate a doc_id-ordered corpus until no repeated window remains.

    Removing a window can make previously non-adjacent sentences adjacent,
    so a pass can (rarely) leave a fresh duplicate; passes repeat with the
    same base state until one removes nothing.
    """
    if state is None:
        state = DedupState()
    base = frozenset(state.seen)
    current = list(docs)
    report = CleanReport()
    while True:
        state.seen = set(base)
        current, removed = _dedup_pass(current, state)
        report.spans_deduplicated += removed
        if removed == 0:
            break
    return current, state, report


def find_repeated_windows(
    docs: Iterable[Document], seed: int = DEFAULT_SEED
) -> list[tuple[int, int]]:
    """Rescan: (doc_id, start) of every window whose digest occurred before."""
    seen: set[bytes] = set()
    repeats = []
    for doc in docs:
        for start, digest in window_digests(doc, seed):
            if digest in seen:
                repeats.append((doc.doc_id, start))
            else:
                seen.add(digest)
    return repeats


def _shard_of(digest: bytes, shards: int) -> int:
    return int.from_bytes(digest[:2], "big") * shards >> 16


def _two_pass_round(
    read_docs,
    state: DedupState,
    shards: int,
    tmp_dir: str,
) -> tuple[dict[int, set[int]], set[bytes], int]:
    """Disk-sharded equivalent of one `_dedup_pass` over a re-readable corpus.

    Pass 1 spills (digest, doc_id, start) triples into per-shard files, then
    resolves winners per shard in canonical order; pass 2 (done by the
    caller) applies the returned removal map.  Returns (removals, winner
    digests, removed-window count).
    """
    rec = struct.Struct("<16sQI")
    files = [open(os.path.join(tmp_dir, f"shard{j:04d}.bin"), "w+b") for j in range(shards)]
    try:
        for doc in read_docs():
            for start, digest in window_digests(doc, state.seed):
                state.spans_seen += 1
                files[_shard_of(digest, shards)].write(rec.pack(digest, doc.doc_id, start))
        removals: dict[int, set[int]] = {}
        winners: set[bytes] = set()
        removed_windows = 0
        for fp in files:
            fp.seek(0)
            triples = []
            while True:
                chunk = fp.read(rec.size)
                if not chunk:
                    break
                triples.append(rec.unpack(chunk))
            triples.sort(key=lambda t: (t[1], t[2]))  # canonical (doc_id, start)
            first: set[bytes] = set()
            for digest, doc_id, start in triples:
                if digest in state.seen or digest in first:
                    removed_windows += 1
                    state.spans_removed += 1
                    removals.setdefault(doc_id, set()).update(range(start, start + WINDOW))
                else:
                    first.add(digest)
            winners |= first
        return removals, winners, removed_windows
    finally:
        for fp in files:
            name = fp.name
            fp.close()
            os.unlink(name)


def dedup_corpus_two_pass(
    read_docs,
    write_docs,
    state: DedupState | None = None,
    shards: int = 16,
    tmp_dir: str | None = None,
) -> tuple[DedupState, CleanReport]:
    """Sharded two-pass dedup over a corpus re-readable via `read_docs()`.

    `read_docs` is a zero-argument callable yielding documents in doc_id
    order (callable repeatedly); `write_docs` receives the final document
    iterator once.  Output is bit-identical to `dedup_corpus`.
    """
    if state is None:
        state = DedupState()
    shards = max(1, shards)
    base = frozenset(state.seen)
    report = CleanReport()
    own_tmp = tmp_dir is None
    tmp_root = tempfile.mkdtemp(prefix="c5dedup") if own_tmp else tmp_dir

    # Each round rewrites the surviving corpus to a scratch record file so
    # the next round re-reads the reduced corpus.
    scratch = None
    try:
        current_reader = read_docs
        round_no = 0
        while True:
            state.seen = set(base)
            removals, winners, removed = _two_pass_round(
                current_reader, state, shards, tmp_root
            )
            report.spans_deduplicated += removed
            state.seen = set(base) | winners

            def apply(reader=current_reader, removals=removals):
                for doc in reader():
                    idx = removals.get(doc.doc_id)
                    if idx:
                        sentences = [s for i, s in enumerate(doc.sentences) if i not in idx]
                    else:
                        sentences = list(doc.sentences)
                    if sentences:
                        yield doc.advanced(STAGE_DEDUPED, sentences=sentences)

            if removed == 0:
                write_docs(apply())
                return state, report
            round_no += 1
            next_scratch = os.path.join(tmp_root, f"round{round_no}.jsonl")
            write_record_file(apply(), next_scratch)
            if scratch:
                os.unlink(scratch)
            scratch = next_scratch
            current_reader = lambda path=next_scratch: read_record_file(path)
    finally:
        if scratch and os.path.exists(scratch):
            os.unlink(scratch)
        if own_tmp:
            try:
                os.rmdir(tmp_root)
            except OSError:
                pass
