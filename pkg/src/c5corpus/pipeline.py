"""Stage drivers and the full-pipeline orchestrator.

Stages communicate through record files on disk so each one can run (and
be tested) on its own; a run manifest pins the configuration and the
checksum of every artifact.  Worker count is a throughput knob only: all
parallel maps preserve input order, so outputs are byte-identical for any
worker count.
"""

import functools
import hashlib
import json
import multiprocessing
import os
import shutil
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator

from . import dedup as dedup_mod
from .clean import CleanConfig, clean_document
from .corpus import (
    DEFAULT_MAX_FILE_BYTES,
    DEFAULT_RATIOS,
    CorpusStats,
    SplitConfig,
    emit_splits,
)
from .errors import ValidationError
from .ingest import IngestCounters, ingest_files
from .records import Document, read_record_file, write_records
from .report import CleanReport, save_report
from .segment import SegmentConfig, load_badwords, segment_stage, strict_segment_config
from .validate import check_corpus_format, check_deduped, check_segmented


@dataclass
class PipelineConfig:
    inputs: list[str]
    out_dir: str
    badwords_path: str
    gzip_mode: str = "auto"
    min_chinese_ratio: float = 0.5
    trust_language_metadata: bool = True
    min_sentence_len: int = 5
    strict_paper_mode: bool = False
    ratios: tuple[float, float, float] = DEFAULT_RATIOS
    seed: int = 0
    workers: int = 1
    dedup_shards: int = 16
    dedup_two_pass: bool = False
    max_file_bytes: int = DEFAULT_MAX_FILE_BYTES
    manifest_path: str | None = None

    def clean_config(self) -> CleanConfig:
        return CleanConfig(
            min_chinese_ratio=self.min_chinese_ratio,
            language_metadata_trusted=self.trust_language_metadata,
            javascript_case_insensitive=not self.strict_paper_mode,
        )

    def segment_config(self) -> SegmentConfig:
        badwords = load_badwords(self.badwords_path)
        if self.strict_paper_mode:
            return strict_segment_config(badwords, self.min_sentence_len)
        return SegmentConfig(badwords=badwords, min_sentence_len=self.min_sentence_len)


def _atomic_write_records(docs: Iterable[Document], path) -> int:
    tmp = str(path) + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8") as fp:
            count = write_records(docs, fp)
        os.replace(tmp, path)
        return count
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def ordered_pmap(fn: Callable, items: Iterable, workers: int, chunksize: int = 64) -> Iterator:
    """Order-preserving map, fanned out to a process pool when workers > 1."""
    if workers <= 1:
        yield from map(fn, items)
        return
    with multiprocessing.Pool(workers) as pool:
        yield from pool.imap(fn, items, chunksize)


def stage_ingest(inputs, output_path, gzip_mode: str = "auto") -> IngestCounters:
    counters = IngestCounters()
    _atomic_write_records(ingest_files(inputs, gzip_mode, counters), output_path)
    return counters


def _filtering_writer(results, report: CleanReport) -> Iterator[Document]:
    for doc, delta in results:
        report.merge(delta)
        if doc is not None:
            yield doc


def stage_clean(input_path, output_path, cfg: CleanConfig, workers: int = 1) -> CleanReport:
    report = CleanReport()
    fn = functools.partial(clean_document, cfg=cfg)
    results = ordered_pmap(fn, read_record_file(input_path), workers)
    _atomic_write_records(_filtering_writer(results, report), output_path)
    return report


def stage_segment(input_path, output_path, cfg: SegmentConfig, workers: int = 1) -> CleanReport:
    report = CleanReport()
    fn = functools.partial(segment_stage, cfg=cfg)
    results = ordered_pmap(fn, read_record_file(input_path), workers)
    _atomic_write_records(_filtering_writer(results, report), output_path)
    return report


def stage_dedup(
    input_path,
    output_path,
    state_path=None,
    resume: bool = False,
    two_pass: bool = False,
    shards: int = 16,
) -> tuple[dedup_mod.DedupState, CleanReport]:
    state = None
    if resume and state_path and os.path.exists(state_path):
        state = dedup_mod.load_state(state_path)
    if two_pass:
        state, report = dedup_mod.dedup_corpus_two_pass(
            lambda: read_record_file(input_path),
            lambda docs: _atomic_write_records(docs, output_path),
            state=state,
            shards=shards,
        )
    else:
        docs, state, report = dedup_mod.dedup_corpus(read_record_file(input_path), state)
        _atomic_write_records(docs, output_path)
    if state_path:
        dedup_mod.save_state(state, state_path)
    return state, report


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fp:
        for chunk in iter(lambda: fp.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _tree_checksums(root: Path) -> dict[str, str]:
    return {
        str(p.relative_to(root)): sha256_file(p)
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


def run_pipeline(cfg: PipelineConfig) -> tuple[CleanReport, dict[str, CorpusStats], dict]:
    """Execute every stage, validate the artifacts, write manifest + report.

    Raises ValidationError (exit code 3 at the CLI) when any invariant of
    the produced corpus is violated.
    """
    out = Path(cfg.out_dir)
    work = out / "work"
    work.mkdir(parents=True, exist_ok=True)
    raw_path = work / "00.raw.jsonl"
    cleaned_path = work / "01.cleaned.jsonl"
    segmented_path = work / "02.segmented.jsonl"
    deduped_path = work / "03.deduped.jsonl"
    state_path = work / "dedup.state"

    report = CleanReport()
    counters = stage_ingest(cfg.inputs, raw_path, cfg.gzip_mode)
    report.merge(stage_clean(raw_path, cleaned_path, cfg.clean_config(), cfg.workers))
    seg_cfg = cfg.segment_config()
    report.merge(stage_segment(cleaned_path, segmented_path, seg_cfg, cfg.workers))
    _state, dedup_report = stage_dedup(
        segmented_path,
        deduped_path,
        state_path,
        two_pass=cfg.dedup_two_pass,
        shards=cfg.dedup_shards,
    )
    report.merge(dedup_report)

    split_cfg = SplitConfig(ratios=cfg.ratios, seed=cfg.seed)
    for split in ("train", "dev", "test"):
        if (out / split).exists():
            shutil.rmtree(out / split)
    stats = emit_splits(
        read_record_file(deduped_path), out, split_cfg, cfg.max_file_bytes
    )
    save_report(report, out / "report.txt")

    problems = check_segmented(read_record_file(segmented_path), seg_cfg)
    problems += check_deduped(read_record_file(deduped_path))
    for split in ("train", "dev", "test"):
        problems += check_corpus_format(out / split)

    # Echo the configuration minus output-location fields so equal runs in
    # different directories produce byte-identical manifests.
    cfg_echo = asdict(cfg)
    cfg_echo.pop("out_dir")
    cfg_echo.pop("manifest_path")
    manifest = {
        "tool": "c5",
        "config": cfg_echo,
        "ingest": asdict(counters),
        "stages": {
            "raw": sha256_file(raw_path),
            "cleaned": sha256_file(cleaned_path),
            "segmented": sha256_file(segmented_path),
            "deduped": sha256_file(deduped_path),
            "dedup_state": sha256_file(state_path),
        },
        "splits": {
            name: {**stats[name].as_dict(), "files": _tree_checksums(out / name)}
            for name in ("train", "dev", "test")
        },
        "report": report.as_dict(),
        "validation": {"passed": not problems, "problems": problems[:20]},
    }
    manifest_path = cfg.manifest_path or out / "manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fp:
        json.dump(manifest, fp, ensure_ascii=False, indent=2, sort_keys=True)
        fp.write("\n")

    if problems:
        raise ValidationError(problems[0])
    return report, stats, manifest
