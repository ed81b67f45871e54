"""c5corpus: a pipeline that turns Common Crawl WET archives into a clean,
deduplicated, pre-training-ready Chinese text corpus, plus tools for
building and using a compact character vocabulary."""

__version__ = "0.1.0"
