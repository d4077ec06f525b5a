"""Wildcard-pattern mining and assembly of the pair-pattern matrix.

A pattern is a tuple of slots: literal lowercase words, the hole
markers "X" and "Y" (exactly one of each, either order), and "*"
which matches any single word. Corpus tokens are lowercase with
punctuation-stripped edges, so the three marker strings can never
collide with a literal.

From a retrieved window, the two term spans become X and Y and every
remaining word is independently kept or wildcarded; the same is done
with the markers exchanged, giving up to 2^(n+1) patterns for n
remaining words. Counts are recorded so that the frequency of a
pattern instantiated with a pair equals the number of windows of that
pair reproducing it: patterns from the direct substitution are
credited to the retrieved pair, patterns from the exchanged
substitution to the reversed pair. This is what makes the matrix rows
of a pair and its reverse mirror images of each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import scipy.sparse as sp

from .corpus import CorpusIndex, PhraseOccurrence, search_phrases
from .errors import ConfigError, DataError, RelmapError
from .problems import MappingProblem
from .terms import TermPair

Pattern = tuple[str, ...]

X_SLOT = "X"
Y_SLOT = "Y"
WILDCARD = "*"


def serialize_pattern(pattern: Pattern) -> str:
    """Canonical report form: slots joined by single spaces."""
    return " ".join(pattern)


def swap_pattern(pattern: Pattern) -> Pattern:
    """The same pattern with the X and Y holes exchanged."""
    return tuple(Y_SLOT if s == X_SLOT else X_SLOT if s == Y_SLOT else s
                 for s in pattern)


def is_template_shaped(pattern: Pattern) -> bool:
    """True if the slot layout could come from a template window."""
    holes = [i for i, s in enumerate(pattern) if s in (X_SLOT, Y_SLOT)]
    if len(holes) != 2 or pattern[holes[0]] == pattern[holes[1]]:
        return False
    first, second = holes
    return first <= 1 and (second - first - 1) <= 3 and (len(pattern) - second - 1) <= 1


def _base_slots(phrase: PhraseOccurrence, pair: TermPair) -> tuple[list[str], list[int]]:
    (xs, xe), (ys, ye) = phrase.x_span, phrase.y_span
    if tuple(phrase.window[xs:xe]) != pair.x.tokens or \
       tuple(phrase.window[ys:ye]) != pair.y.tokens:
        raise RelmapError(f"phrase window does not contain pair {pair.text!r} "
                          f"at the recorded spans")
    slots: list[str] = []
    free: list[int] = []
    i = 0
    while i < len(phrase.window):
        if i == xs:
            slots.append(X_SLOT)
            i = xe
        elif i == ys:
            slots.append(Y_SLOT)
            i = ye
        else:
            free.append(len(slots))
            slots.append(phrase.window[i])
            i += 1
    return slots, free


def _wildcard_variants(slots: list[str], free: list[int]) -> set[Pattern]:
    out: set[Pattern] = set()
    for mask in range(1 << len(free)):
        variant = list(slots)
        for bit, pos in enumerate(free):
            if mask >> bit & 1:
                variant[pos] = WILDCARD
        out.add(tuple(variant))
    return out


def generate_pattern_families(phrase: PhraseOccurrence,
                              pair: TermPair) -> tuple[set[Pattern], set[Pattern]]:
    """(direct, exchanged) pattern sets for one window of `pair`.

    Direct patterns reproduce the window when instantiated with the
    pair as retrieved; exchanged patterns reproduce it when
    instantiated with the reversed pair.
    """
    slots, free = _base_slots(phrase, pair)
    direct = _wildcard_variants(slots, free)
    return direct, {swap_pattern(p) for p in direct}


def generate_patterns(phrase: PhraseOccurrence, pair: TermPair) -> set[Pattern]:
    """All patterns a window contributes, both hole assignments together."""
    direct, swapped = generate_pattern_families(phrase, pair)
    return direct | swapped


def build_pair_list(problems: Iterable[MappingProblem]) -> list[TermPair]:
    """All ordered pairs of distinct terms within each side of each problem.

    Both orders of every pair are included and the result is
    duplicate-free across problems, preserving first-seen order.
    """
    seen: dict[TermPair, None] = {}
    for problem in problems:
        for side in (problem.source, problem.target):
            if len({t for t in side}) != len(side):
                raise DataError(f"problem {problem.id}: duplicate terms in one side")
            for a in side:
                for b in side:
                    if a != b:
                        seen.setdefault(TermPair(a, b))
    return list(seen)


@dataclass
class PatternStats:
    """Occurrence counts per (pair, pattern) plus per-pair phrase totals."""

    counts: dict[TermPair, dict[Pattern, int]] = field(default_factory=dict)
    phrase_counts: dict[TermPair, int] = field(default_factory=dict)

    def add_window(self, pair: TermPair, phrase: PhraseOccurrence) -> None:
        direct, swapped = generate_pattern_families(phrase, pair)
        self.phrase_counts[pair] = self.phrase_counts.get(pair, 0) + 1
        row = self.counts.setdefault(pair, {})
        for p in direct:
            row[p] = row.get(p, 0) + 1
        rrow = self.counts.setdefault(pair.reversed(), {})
        for p in swapped:
            rrow[p] = rrow.get(p, 0) + 1

    def count(self, pair: TermPair, pattern: Pattern) -> int:
        return self.counts.get(pair, {}).get(pattern, 0)

    def generating_pair_counts(self) -> dict[Pattern, int]:
        """Number of distinct pairs with a nonzero count, per pattern."""
        out: dict[Pattern, int] = {}
        for row in self.counts.values():
            for pattern in row:
                out[pattern] = out.get(pattern, 0) + 1
        return out


def mine_patterns(index: CorpusIndex, pairs: list[TermPair],
                  max_phrases_per_pair: Optional[int] = None) -> PatternStats:
    """Retrieve phrases for every pair and accumulate pattern statistics.

    `max_phrases_per_pair` caps the windows processed per ordered pair
    (a guard for degenerate corpora); None means unlimited.
    """
    stats = PatternStats()
    for pair in pairs:
        occs = search_phrases(index, pair)
        if max_phrases_per_pair is not None:
            occs = occs[:max_phrases_per_pair]
        stats.phrase_counts.setdefault(pair, 0)
        for occ in occs:
            stats.add_window(pair, occ)
    return stats


def prune_rows(pairs: list[TermPair],
               phrase_counts: dict[TermPair, int]) -> list[TermPair]:
    """Drop a pair only when neither it nor its reverse retrieved any phrase."""
    return [p for p in pairs
            if phrase_counts.get(p, 0) or phrase_counts.get(p.reversed(), 0)]


def select_columns(stats: PatternStats, t: int, n_r: int) -> list[Pattern]:
    """Top t*n_r patterns by number of distinct generating pairs.

    Ties are broken by ascending lexicographic serialization so the
    selection (and everything downstream) is reproducible.
    """
    if t <= 0:
        raise ConfigError(f"column factor t must be positive, got {t}")
    counts = stats.generating_pair_counts()
    ordered = sorted(counts, key=lambda p: (-counts[p], serialize_pattern(p)))
    return ordered[:min(t * n_r, len(ordered))]


def build_frequency_matrix(rows: list[TermPair], cols: list[Pattern],
                           stats: PatternStats) -> sp.csr_matrix:
    """Assemble the sparse pair-pattern frequency matrix from the records.

    No corpus re-search happens here; entry (i, j) is the number of
    windows of pair i that reproduce pattern j.
    """
    if len(set(rows)) != len(rows):
        raise RelmapError("duplicate row labels in frequency matrix")
    if len(set(cols)) != len(cols):
        raise RelmapError("duplicate column labels in frequency matrix")
    col_index = {c: j for j, c in enumerate(cols)}
    data, ii, jj = [], [], []
    for i, pair in enumerate(rows):
        for pattern, count in stats.counts.get(pair, {}).items():
            j = col_index.get(pattern)
            if j is not None and count:
                ii.append(i)
                jj.append(j)
                data.append(float(count))
    mat = sp.csr_matrix((data, (ii, jj)), shape=(len(rows), len(cols)))
    mat.sum_duplicates()
    mat.eliminate_zeros()
    return mat
