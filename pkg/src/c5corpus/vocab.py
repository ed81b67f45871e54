"""BERT-style vocabulary handling: token categorization, pruning to the
compact Chinese vocabulary, and character/WordPiece tokenization.

A vocabulary file is UTF-8, one token surface per line, id = line number.
"""

import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable

from .chartables import BLANK_CHARS, CJK_FIRST, CJK_LAST
from .errors import C5Error, MissingSpecials

CAT_SPECIAL = "Special"
CAT_SIMPLIFIED = "SimplifiedChinese"
CAT_TRADITIONAL = "TraditionalChinese"
CAT_ENGLISH = "English"
CAT_JAPANESE = "Japanese"
CAT_KOREAN = "Korean"
CAT_EMOJI = "Emoji"
CAT_NUMBER = "Number"
CAT_OTHER = "Other"

CATEGORIES = (
    CAT_SIMPLIFIED,
    CAT_TRADITIONAL,
    CAT_ENGLISH,
    CAT_JAPANESE,
    CAT_KOREAN,
    CAT_EMOJI,
    CAT_NUMBER,
    CAT_SPECIAL,
    CAT_OTHER,
)

NAMED_SPECIALS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "<S>", "<T>")
_UNUSED_RE = re.compile(r"\[unused\d+\]\Z")

_EMOJI_RANGES = ((0x1F300, 0x1FAFF), (0x2600, 0x27BF), (0xFE0F, 0xFE0F))
_KANA_RANGES = ((0x3040, 0x30FF),)
_HANGUL_RANGES = ((0xAC00, 0xD7AF), (0x1100, 0x11FF), (0x3130, 0x318F))


def _any_in(text: str, ranges) -> bool:
    return any(lo <= ord(c) <= hi for c in text for lo, hi in ranges)


@lru_cache(maxsize=1)
def trad_to_simp() -> dict[str, str]:
    """Bundled single-character traditional -> simplified mapping."""
    table = {}
    data = resources.files("c5corpus").joinpath("data/t2s_chars.tsv").read_text("utf-8")
    for line in data.splitlines():
        if not line or line.startswith("#"):
            continue
        trad, simp = line.split("\t")
        table[trad] = simp
    return table


def categorize(surface: str) -> str:
    """Deterministic priority classification of one token surface."""
    if surface in NAMED_SPECIALS or _UNUSED_RE.fullmatch(surface):
        return CAT_SPECIAL
    content = surface[2:] if surface.startswith("##") else surface
    if not content:
        return CAT_OTHER
    if _any_in(content, _EMOJI_RANGES):
        return CAT_EMOJI
    if _any_in(content, _KANA_RANGES):
        return CAT_JAPANESE
    if _any_in(content, _HANGUL_RANGES):
        return CAT_KOREAN
    if all(c.isascii() and c.isdigit() for c in content):
        return CAT_NUMBER
    if all(c.isascii() and c.isalpha() for c in content):
        return CAT_ENGLISH
    if len(content) == 1 and CJK_FIRST <= ord(content) <= CJK_LAST:
        if content in trad_to_simp():
            return CAT_TRADITIONAL
        return CAT_SIMPLIFIED
    return CAT_OTHER


@dataclass
class TokenEntry:
    surface: str
    is_suffix: bool
    category: str
    original_id: int


@dataclass
class Vocabulary:
    entries: list[TokenEntry] = field(default_factory=list)
    lookup: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_surfaces(cls, surfaces: Iterable[str]) -> "Vocabulary":
        vocab = cls()
        for i, surface in enumerate(surfaces):
            if not surface:
                raise C5Error(f"empty token surface at position {i}")
            if surface in vocab.lookup:
                raise C5Error(f"duplicate token surface: {surface!r}")
            vocab.lookup[surface] = i
            vocab.entries.append(
                TokenEntry(
                    surface=surface,
                    is_suffix=surface.startswith("##"),
                    category=categorize(surface),
                    original_id=i,
                )
            )
        return vocab

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def unk_id(self) -> int:
        try:
            return self.lookup["[UNK]"]
        except KeyError:
            raise MissingSpecials("vocabulary has no [UNK] token") from None

    def category_counts(self) -> dict[str, int]:
        counts = {cat: 0 for cat in CATEGORIES}
        for entry in self.entries:
            counts[entry.category] += 1
        return counts


def load_vocab(path) -> Vocabulary:
    with open(path, "r", encoding="utf-8") as fp:
        text = fp.read()
    lines = [line.rstrip("\r") for line in text.split("\n")]
    if lines and lines[-1] == "":
        lines.pop()
    return Vocabulary.from_surfaces(lines)


def save_vocab(vocab: Vocabulary, path) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        for entry in vocab.entries:
            fp.write(entry.surface)
            fp.write("\n")


@dataclass(frozen=True)
class PruneRules:
    year_min: int = 1800
    year_max: int = 2030


def _keep_entry(entry: TokenEntry, rules: PruneRules) -> bool:
    cat = entry.category
    if cat == CAT_SPECIAL:
        return True
    content = entry.surface[2:] if entry.is_suffix else entry.surface
    if cat == CAT_SIMPLIFIED:
        # Character tokenization never emits continuation pieces for CJK,
        # so the "##" twins of the simplified characters are dead weight.
        return not entry.is_suffix
    if cat in (CAT_TRADITIONAL, CAT_JAPANESE, CAT_KOREAN, CAT_EMOJI):
        return False
    if cat == CAT_ENGLISH:
        return entry.is_suffix or len(content) == 1
    if cat == CAT_NUMBER:
        if len(content) == 1:
            return True
        return (
            not entry.is_suffix
            and len(content) == 4
            and rules.year_min <= int(content) <= rules.year_max
        )
    # Other: drop when more than two code points are bare symbols
    # (neither letters, digits, nor CJK ideographs).
    symbols = 0
    for c in content:
        cat0 = unicodedata.category(c)
        if not (cat0.startswith("L") or cat0 == "Nd"):
            symbols += 1
    return symbols <= 2


def prune(
    vocab: Vocabulary, rules: PruneRules | None = None
) -> tuple[Vocabulary, dict[str, dict[str, int]]]:
    """Prune to the compact vocabulary; order preserved, ids re-packed.

    Returns the new vocabulary and per-category kept/removed counts.
    """
    if rules is None:
        rules = PruneRules()
    missing = [t for t in NAMED_SPECIALS if t not in vocab.lookup]
    if missing:
        raise MissingSpecials(f"input vocabulary lacks special tokens: {missing}")
    tally = {cat: {"kept": 0, "removed": 0} for cat in CATEGORIES}
    kept_surfaces = []
    for entry in vocab.entries:
        if _keep_entry(entry, rules):
            tally[entry.category]["kept"] += 1
            kept_surfaces.append(entry.surface)
        else:
            tally[entry.category]["removed"] += 1
    return Vocabulary.from_surfaces(kept_surfaces), tally


def _units(text: str) -> list[tuple[str, bool]]:
    """(unit, is_word) pieces: CJK chars and other symbols go alone, maximal
    ASCII alphanumeric runs form words, blanks only separate."""
    units = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in BLANK_CHARS:
            i += 1
            continue
        if CJK_FIRST <= ord(ch) <= CJK_LAST:
            units.append((ch, False))
            i += 1
            continue
        if ch.isascii() and ch.isalnum():
            j = i + 1
            while j < n and text[j].isascii() and text[j].isalnum():
                j += 1
            units.append((text[i:j], True))
            i = j
            continue
        units.append((ch, False))
        i += 1
    return units


def _wordpieces(word: str, vocab: Vocabulary) -> list[int] | None:
    """Greedy longest-match decomposition; None when any position is stuck."""
    ids = []
    start = 0
    n = len(word)
    while start < n:
        end = n
        found = None
        while start < end:
            piece = word[start:end] if start == 0 else "##" + word[start:end]
            piece_id = vocab.lookup.get(piece)
            if piece_id is not None:
                found = piece_id
                break
            end -= 1
        if found is None:
            return None
        ids.append(found)
        start = end
    return ids


def tokenize(text: str, vocab: Vocabulary) -> list[int]:
    """Character tokenization for CJK, greedy WordPiece for ASCII runs."""
    unk = vocab.unk_id
    ids: list[int] = []
    for unit, is_word in _units(text):
        if is_word:
            pieces = _wordpieces(unit, vocab)
            ids.extend(pieces if pieces is not None else [unk])
        else:
            ids.append(vocab.lookup.get(unit, unk))
    return ids


def detokenize(ids: Iterable[int], vocab: Vocabulary) -> str:
    """Inverse of tokenize up to [UNK] substitutions and inter-word spacing."""
    words: list[str] = []
    for token_id in ids:
        surface = vocab.entries[token_id].surface
        if surface.startswith("##") and words:
            words[-1] += surface[2:]
        else:
            words.append(surface)
    out = []
    for k, word in enumerate(words):
        if (
            k > 0
            and out[-1]
            and out[-1][-1].isascii()
            and out[-1][-1].isalnum()
            and word
            and word[0].isascii()
            and word[0].isalnum()
        ):
            out.append(" ")
        out.append(word)
    return "".join(out)
