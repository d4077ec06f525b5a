"""Corpus ingestion, phrase-window retrieval, and co-occurrence counts.

The index is a plain token-position inverted index over a list of
documents (one text file = one document). Phrase retrieval finds every
window of the form

    [0-1 words]  x  [0-3 words]  y  [0-1 words]

where x and y are (possibly multiword) terms matched as contiguous
token runs. Windows never cross document boundaries; the leading and
trailing context words are included when available. Occurrences are
tokens, not types: the same window shape in two places is two results.
"""

from __future__ import annotations

import hashlib
import logging
import pickle
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusError
from .terms import DEFAULT_TOKENIZER, Term, TermPair, Tokenizer

logger = logging.getLogger(__name__)

MAX_PRE = 1
MAX_MID = 3
MAX_POST = 1

_CACHE_MAGIC = "relmap-corpus-index-v1"


@dataclass(frozen=True)
class PhraseOccurrence:
    """One corpus window matching the search template for a term pair.

    Spans are token index ranges into `window` (half-open). `pre`, `mid`
    and `post` count the words outside the two term spans.
    """

    doc: int
    start: int                   # window start offset within the document
    window: tuple[str, ...]
    x_span: tuple[int, int]      # term x, relative to window
    y_span: tuple[int, int]      # term y, relative to window
    pre: int
    mid: int
    post: int

    def __post_init__(self):
        if not (0 <= self.pre <= MAX_PRE and 0 <= self.mid <= MAX_MID
                and 0 <= self.post <= MAX_POST):
            raise ValueError(f"window gaps out of template bounds: "
                             f"pre={self.pre} mid={self.mid} post={self.post}")
        if self.x_span[1] > self.y_span[0]:
            raise ValueError("term spans overlap or are out of order")


@dataclass
class CorpusIndex:
    """Immutable token index: documents, postings, and total token count."""

    documents: list[list[str]] = field(default_factory=list)
    doc_names: list[str] = field(default_factory=list)
    postings: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    total_tokens: int = 0
    digest: str = ""
    tokenizer: Tokenizer = DEFAULT_TOKENIZER

    def occurrences(self, term: Term) -> list[tuple[int, int]]:
        """All (doc, start) positions where the term's token run occurs."""
        first = self.postings.get(term.tokens[0])
        if not first:
            return []
        if len(term.tokens) == 1:
            return list(first)
        out = []
        for doc, pos in first:
            toks = self.documents[doc]
            end = pos + len(term.tokens)
            if end <= len(toks) and tuple(toks[pos:end]) == term.tokens:
                out.append((doc, pos))
        return out


def ingest(paths: list[str | Path], tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> CorpusIndex:
    """Build an index over the given files, in the given order.

    Files must be UTF-8 text; an unreadable or mis-encoded file raises
    CorpusError naming the path. An empty path list yields a valid
    empty index.
    """
    documents: list[list[str]] = []
    doc_names: list[str] = []
    postings: dict[str, list[tuple[int, int]]] = {}
    total = 0
    hasher = hashlib.sha256()
    for path in paths:
        p = Path(path)
        try:
            raw = p.read_bytes()
            text = raw.decode("utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise CorpusError(f"cannot ingest {p}: {exc}") from exc
        hasher.update(hashlib.sha256(raw).digest())
        toks = tokenizer.tokenize(text)
        doc_id = len(documents)
        documents.append(toks)
        doc_names.append(str(p))
        for off, tok in enumerate(toks):
            postings.setdefault(tok, []).append((doc_id, off))
        total += len(toks)
    return CorpusIndex(documents=documents, doc_names=doc_names, postings=postings,
                       total_tokens=total, digest=hasher.hexdigest(), tokenizer=tokenizer)


def corpus_files(corpus_dir: str | Path) -> list[Path]:
    """All .txt files under a directory, recursively, in lexicographic path order."""
    root = Path(corpus_dir)
    if not root.is_dir():
        raise CorpusError(f"corpus directory not found: {root}")
    return sorted(root.rglob("*.txt"), key=lambda p: p.as_posix())


def ingest_dir(corpus_dir: str | Path, tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> CorpusIndex:
    return ingest(corpus_files(corpus_dir), tokenizer=tokenizer)


def search_phrases(index: CorpusIndex, pair: TermPair) -> list[PhraseOccurrence]:
    """Every window where pair.x is followed by pair.y within the template.

    Absent terms simply yield an empty list. The scan is driven by the
    postings of each term's first token; a y match must start 0-3 tokens
    after the x match ends, and up to one token of leading and trailing
    context is included when the document provides it.
    """
    xs = index.occurrences(pair.x)
    if not xs:
        return []
    ys = index.occurrences(pair.y)
    if not ys:
        return []
    y_by_doc: dict[int, list[int]] = {}
    for doc, pos in ys:
        y_by_doc.setdefault(doc, []).append(pos)

    x_len = len(pair.x.tokens)
    y_len = len(pair.y.tokens)
    out = []
    for doc, x_pos in xs:
        positions = y_by_doc.get(doc)
        if not positions:
            continue
        toks = index.documents[doc]
        x_end = x_pos + x_len
        lo = bisect_left(positions, x_end)
        hi = bisect_right(positions, x_end + MAX_MID)
        for y_pos in positions[lo:hi]:
            y_end = y_pos + y_len
            pre = min(MAX_PRE, x_pos)
            post = min(MAX_POST, len(toks) - y_end)
            w_start = x_pos - pre
            w_end = y_end + post
            out.append(PhraseOccurrence(
                doc=doc,
                start=w_start,
                window=tuple(toks[w_start:w_end]),
                x_span=(x_pos - w_start, x_end - w_start),
                y_span=(y_pos - w_start, y_end - w_start),
                pre=pre,
                mid=y_pos - x_end,
                post=post,
            ))
    return out


def cooccurrence_counts(index: CorpusIndex, a: Term, b: Term,
                        window: int) -> tuple[int, int, int]:
    """Occurrence counts of a and b, and of their co-occurrences.

    count_ab counts unordered position pairs whose start offsets lie
    within `window` tokens of each other in the same document. When a
    and b are the same term, pairs of distinct positions are counted.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    occ_a = index.occurrences(a)
    occ_b = index.occurrences(b)
    same = a == b
    b_by_doc: dict[int, list[int]] = {}
    for doc, pos in occ_b:
        b_by_doc.setdefault(doc, []).append(pos)
    count_ab = 0
    for doc, pos in occ_a:
        positions = b_by_doc.get(doc)
        if not positions:
            continue
        lo = bisect_left(positions, pos - window)
        hi = bisect_right(positions, pos + window)
        n = hi - lo
        if same:
            n -= 1  # a position does not co-occur with itself
        count_ab += n
    if same:
        count_ab //= 2  # each unordered pair was seen from both ends
    return len(occ_a), len(occ_b), count_ab


# --- persistence -----------------------------------------------------------

def cache_path(cache_dir: str | Path, digest: str) -> Path:
    return Path(cache_dir) / f"index-{digest}.pkl"


def save_index(index: CorpusIndex, cache_dir: str | Path) -> Path:
    """Persist the index keyed by its corpus content digest."""
    path = cache_path(cache_dir, index.digest)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        pickle.dump({"magic": _CACHE_MAGIC, "index": index}, fh)
    return path


def load_index(path: str | Path) -> CorpusIndex:
    try:
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
    except (OSError, pickle.PickleError) as exc:
        raise CorpusError(f"cannot load index cache {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("magic") != _CACHE_MAGIC:
        raise CorpusError(f"not an index cache file: {path}")
    return payload["index"]


def corpus_digest(paths: list[str | Path]) -> str:
    """Content digest of the corpus files, in the given order."""
    hasher = hashlib.sha256()
    for path in paths:
        p = Path(path)
        try:
            hasher.update(hashlib.sha256(p.read_bytes()).digest())
        except OSError as exc:
            raise CorpusError(f"cannot read {p}: {exc}") from exc
    return hasher.hexdigest()
