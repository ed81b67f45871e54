"""Independent reference implementations used to pin expected values.

The dedup oracle avoids hashing entirely: it compares normalized window
text pairwise (O(n^2)) and repeats whole passes until nothing changes.
"""

from c5corpus.chartables import BLANK_CHARS

WINDOW = 4


def _norm(text: str) -> str:
    return "".join(c for c in text if c not in BLANK_CHARS)


def brute_force_dedup(docs):
    """First-wins removal of every repeated four-sentence window.

    `docs` is a list of (doc_id, [sentence, ...]) in doc_id order; returns
    the surviving documents in the same shape.
    """
    current = [(doc_id, list(sents)) for doc_id, sents in docs]
    while True:
        windows = []  # (position in `current`, start, normalized text)
        for di, (_, sents) in enumerate(current):
            for i in range(len(sents) - WINDOW + 1):
                windows.append((di, i, _norm("".join(sents[i : i + WINDOW]))))
        removed = [set() for _ in current]
        removed_any = False
        for j in range(len(windows)):
            dj, sj, tj = windows[j]
            for k in range(j):
                if windows[k][2] == tj:
                    removed[dj].update(range(sj, sj + WINDOW))
                    removed_any = True
                    break
        nxt = []
        for (doc_id, sents), rem in zip(current, removed):
            kept = [s for i, s in enumerate(sents) if i not in rem]
            if kept:
                nxt.append((doc_id, kept))
        current = nxt
        if not removed_any:
            return current


def make_random_corpus(rng, max_docs=50, max_sentences=200, dup_prob=0.3):
    """Synthetic corpus with duplicated four-sentence blocks injected."""
    n_docs = rng.randint(1, max_docs)
    total = 0
    docs = []
    blocks = []  # previously emitted 4-sentence runs, for duplication
    for doc_id in range(n_docs):
        if total >= max_sentences:
            break
        n_sents = rng.randint(1, min(12, max_sentences - total))
        sents = []
        while len(sents) < n_sents:
            if blocks and len(sents) + WINDOW <= n_sents and rng.random() < dup_prob:
                block = rng.choice(blocks)
                sents.extend(block)
            else:
                sents.append(
                    "句%d字%d。" % (rng.randint(0, 60), rng.randint(0, 60))
                )
        if len(sents) >= WINDOW and rng.random() < 0.6:
            start = rng.randint(0, len(sents) - WINDOW)
            blocks.append(tuple(sents[start : start + WINDOW]))
        total += len(sents)
        docs.append((doc_id, sents))
    return docs
