"""Exhaustive bijection search with relational, attributional, and hybrid scores.

All m! mappings of a problem are enumerated in lexicographic order of
the target-index permutation, scored, and the best one returned. When
several mappings tie for the maximum (within an absolute tolerance of
1e-12), one is drawn from the tied set with a seeded generator, so runs
are reproducible; a "first" tie policy is also available for analyses
where both search spaces must break ties identically.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import random

from .errors import BudgetError, DataError
from .problems import Mapping, MappingProblem
from .terms import Term, TermPair

TIE_TOLERANCE = 1e-12
DEFAULT_M_MAX = 10

# scorer contract: prepare(problem) returns score(perm); explain(problem, perm)
# returns labeled contributions that sum to the score.


def enumerate_mappings(m: int, m_max: int = DEFAULT_M_MAX) -> Iterator[tuple[int, ...]]:
    """All m! target-index permutations, lexicographically.

    Refuses outright when m exceeds the budget, naming the m! that
    would have been enumerated.
    """
    if m > m_max:
        raise BudgetError(f"m={m} means {math.factorial(m):,} mappings, "
                          f"over the budget of m <= {m_max}")
    return itertools.permutations(range(m))


class RelationalScorer:
    """Sum of pair similarities over all i < j, via a precomputed table."""

    mode = "relational"

    def __init__(self, space):
        self.space = space

    def _tables(self, problem: MappingProblem):
        # one m x m lookup grid per source pair i < j, indexed by target indices
        m = problem.m
        src, tgt = problem.source, problem.target
        table = []
        for i in range(m):
            for j in range(i + 1, m):
                p = TermPair(src[i], src[j])
                grid = [[self.space.sim_r(p, TermPair(tgt[a], tgt[b])) if a != b else 0.0
                         for b in range(m)] for a in range(m)]
                table.append((i, j, grid))
        return table

    def prepare(self, problem: MappingProblem) -> Callable[[tuple[int, ...]], float]:
        table = self._tables(problem)

        def score(perm: tuple[int, ...]) -> float:
            total = 0.0
            for i, j, grid in table:
                total += grid[perm[i]][perm[j]]
            return total

        return score

    def explain(self, problem: MappingProblem, perm: tuple[int, ...]):
        src, tgt = problem.source, problem.target
        out = []
        for i in range(problem.m):
            for j in range(i + 1, problem.m):
                p = TermPair(src[i], src[j])
                q = TermPair(tgt[perm[i]], tgt[perm[j]])
                out.append((f"{p.text} ~ {q.text}", self.space.sim_r(p, q)))
        return out


class AttributionalScorer:
    """Sum of term similarities between each source term and its image."""

    mode = "attributional"

    def __init__(self, provider):
        self.provider = provider

    def prepare(self, problem: MappingProblem) -> Callable[[tuple[int, ...]], float]:
        m = problem.m
        table = [[self.provider.sim(problem.source[i], problem.target[j])
                  for j in range(m)] for i in range(m)]

        def score(perm: tuple[int, ...]) -> float:
            total = 0.0
            for i, j in enumerate(perm):
                total += table[i][j]
            return total

        return score

    def explain(self, problem: MappingProblem, perm: tuple[int, ...]):
        return [(f"{problem.source[i].text} -> {problem.target[j].text}",
                 self.provider.sim(problem.source[i], problem.target[j]))
                for i, j in enumerate(perm)]


@dataclass
class SolveResult:
    problem: MappingProblem
    mapping: Mapping
    score: float
    tie_count: int
    breakdown: list[tuple[str, float]]
    diagnostics: dict = field(default_factory=dict)

    def assignment(self) -> dict[str, str]:
        return self.mapping.assignment(self.problem)

    def to_text(self) -> str:
        """Tab-separated assignment lines followed by a JSON diagnostics block."""
        import json

        lines = [f"{self.problem.source[i].text}\t->\t{self.problem.target[j].text}"
                 for i, j in enumerate(self.mapping.perm)]
        diag = {"problem": self.problem.id,
                "score": self.score,
                "tie_count": self.tie_count,
                "mode": self.diagnostics.get("mode", ""),
                "seed": self.diagnostics.get("seed")}
        return "\n".join(lines) + "\n" + json.dumps(diag, sort_keys=True) + "\n"


def _pick_tied(tied: list[tuple[int, ...]], seed, problem_id: str,
               tie_policy: str) -> tuple[int, ...]:
    if tie_policy == "first" or len(tied) == 1:
        return tied[0]
    rng = random.Random(f"{seed}:{problem_id}")
    return tied[rng.randrange(len(tied))]


def _argmax_with_ties(perms: Iterable[tuple[int, ...]],
                      score_fn) -> tuple[float, list[tuple[int, ...]], int]:
    best = -math.inf
    tied: list[tuple[int, ...]] = []
    total = 0
    for perm in perms:
        total += 1
        s = score_fn(perm)
        if s > best + TIE_TOLERANCE:
            best = s
            tied = [perm]
        elif s >= best - TIE_TOLERANCE:
            tied.append(perm)
    return best, tied, total


def solve(problem: MappingProblem, scorer, seed=0, *,
          tie_policy: str = "random", m_max: int = DEFAULT_M_MAX) -> SolveResult:
    """Best mapping under the scorer, ties broken per the policy."""
    started = time.perf_counter()
    score_fn = scorer.prepare(problem)
    best, tied, total = _argmax_with_ties(
        enumerate_mappings(problem.m, m_max=m_max), score_fn)
    perm = _pick_tied(tied, seed, problem.id, tie_policy)
    mapping = Mapping(problem_id=problem.id, perm=perm)
    return SolveResult(
        problem=problem,
        mapping=mapping,
        score=best,
        tie_count=len(tied),
        breakdown=scorer.explain(problem, perm),
        diagnostics={"mode": scorer.mode, "seed": seed, "n_mappings": total,
                     "elapsed": time.perf_counter() - started},
    )


def _probabilities(scores: list[float]) -> list[float]:
    """Shift negatives away, then normalize; degenerate fields become uniform."""
    lo = min(scores)
    shifted = [s - lo for s in scores] if lo < 0 else list(scores)
    total = sum(shifted)
    if total <= 0:
        return [1.0 / len(scores)] * len(scores)
    return [s / total for s in shifted]


def solve_hybrid(problem: MappingProblem, space, provider, combine: str = "add",
                 seed=0, *, tie_policy: str = "random",
                 m_max: int = DEFAULT_M_MAX) -> SolveResult:
    """Combine relational and attributional rankings through probabilities.

    Each channel's scores over all m! mappings are normalized to a
    probability distribution (after shifting if any score is negative);
    "add" averages the two probabilities and "multiply" takes their
    product, and the best combined value wins.
    """
    if combine not in ("add", "multiply"):
        raise DataError(f"unknown hybrid combination {combine!r}")
    started = time.perf_counter()
    rel = RelationalScorer(space)
    att = AttributionalScorer(provider)
    rel_fn = rel.prepare(problem)
    att_fn = att.prepare(problem)
    perms = list(enumerate_mappings(problem.m, m_max=m_max))
    prob_r = _probabilities([rel_fn(p) for p in perms])
    prob_a = _probabilities([att_fn(p) for p in perms])
    if combine == "add":
        combined = [(r + a) / 2.0 for r, a in zip(prob_r, prob_a)]
    else:
        combined = [r * a for r, a in zip(prob_r, prob_a)]
    by_perm = dict(zip(perms, combined))
    best, tied, total = _argmax_with_ties(perms, by_perm.__getitem__)
    perm = _pick_tied(tied, seed, problem.id, tie_policy)
    idx = perms.index(perm)
    if combine == "add":
        breakdown = [("relational probability / 2", prob_r[idx] / 2.0),
                     ("attributional probability / 2", prob_a[idx] / 2.0)]
    else:
        breakdown = [("relational x attributional probability", combined[idx])]
    return SolveResult(
        problem=problem,
        mapping=Mapping(problem_id=problem.id, perm=perm),
        score=best,
        tie_count=len(tied),
        breakdown=breakdown,
        diagnostics={"mode": f"hybrid-{'add' if combine == 'add' else 'mul'}",
                     "seed": seed, "n_mappings": total,
                     "prob_r": prob_r[idx], "prob_a": prob_a[idx],
                     "elapsed": time.perf_counter() - started},
    )


def hybrid_probabilities(problem: MappingProblem, space, provider,
                         m_max: int = DEFAULT_M_MAX):
    """(perms, prob_r, prob_a) over the whole search space, for inspection."""
    perms = list(enumerate_mappings(problem.m, m_max=m_max))
    rel_fn = RelationalScorer(space).prepare(problem)
    att_fn = AttributionalScorer(provider).prepare(problem)
    return (perms,
            _probabilities([rel_fn(p) for p in perms]),
            _probabilities([att_fn(p) for p in perms]))


def _constrained_perms(m: int, sub_src: list[int], sub_tgt: list[int]
                       ) -> Iterator[tuple[int, ...]]:
    """Permutations sending the source subset onto the target subset setwise.

    Enumerated with the subset assignment as the major key, so the
    first maximum under a decomposable score has the lexicographically
    first maximal subset assignment.
    """
    rest_src = [i for i in range(m) if i not in set(sub_src)]
    rest_tgt = [j for j in range(m) if j not in set(sub_tgt)]
    for sub_perm in itertools.permutations(sub_tgt):
        base = dict(zip(sub_src, sub_perm))
        for rest_perm in itertools.permutations(rest_tgt):
            full = dict(base)
            full.update(zip(rest_src, rest_perm))
            yield tuple(full[i] for i in range(m))


def solve_constrained(problem: MappingProblem, fixed: dict[str, str], scorer,
                      mode: str = "total", seed=0, *,
                      tie_policy: str = "random",
                      m_max: int = DEFAULT_M_MAX) -> SolveResult:
    """Solve a reduced problem, with or without the surrounding terms.

    `fixed` associates a subset of source terms with an equal-size
    subset of target terms (by normalized text). In "internal" mode the
    subsets are solved as a standalone problem; in "total" mode the
    full problem is searched under the setwise constraint that the
    subset maps onto its counterpart, and the returned result is the
    restriction of the winner to the subset. Either way the result is a
    mapping of the reduced problem, ready for accuracy scoring.
    """
    if mode not in ("total", "internal"):
        raise DataError(f"unknown coherence mode {mode!r}")
    src_index = {t.text: i for i, t in enumerate(problem.source)}
    tgt_index = {t.text: j for j, t in enumerate(problem.target)}
    try:
        sub_src = sorted(src_index[s] for s in fixed)
        sub_tgt = sorted(tgt_index[t] for t in fixed.values())
    except KeyError as exc:
        raise DataError(f"constraint names unknown term {exc.args[0]!r}") from exc
    if len(sub_tgt) != len(set(fixed.values())) or len(sub_src) != len(fixed):
        raise DataError("constraint is not injective")
    if len(sub_src) != len(sub_tgt):
        raise DataError("constraint sides have different sizes")

    sub_intended = {}
    if problem.intended and all(s in problem.intended for s in fixed):
        restricted = {s: problem.intended[s] for s in fixed}
        if set(restricted.values()) == set(fixed.values()):
            sub_intended = restricted
    reduced = MappingProblem(
        id=f"{problem.id}#sub",
        source=tuple(problem.source[i] for i in sub_src),
        target=tuple(problem.target[j] for j in sub_tgt),
        pos_tags=problem.pos_tags,
        intended=sub_intended,
        mnemonic=problem.mnemonic,
    )

    if mode == "internal":
        result = solve(reduced, scorer, seed, tie_policy=tie_policy, m_max=m_max)
        result.diagnostics["mode"] = f"{scorer.mode}-internal"
        result.diagnostics["search_size"] = result.diagnostics.pop("n_mappings")
        return result

    started = time.perf_counter()
    if problem.m > m_max:
        raise BudgetError(f"m={problem.m} means {math.factorial(problem.m):,} "
                          f"mappings, over the budget of m <= {m_max}")
    score_fn = scorer.prepare(problem)
    best, tied, total = _argmax_with_ties(
        _constrained_perms(problem.m, sub_src, sub_tgt), score_fn)
    perm = _pick_tied(tied, seed, problem.id, tie_policy)
    # restrict the full winner to the subset, re-indexed into the reduced problem
    tgt_pos_in_reduced = {j: r for r, j in enumerate(sub_tgt)}
    sub_perm = tuple(tgt_pos_in_reduced[perm[i]] for i in sub_src)
    return SolveResult(
        problem=reduced,
        mapping=Mapping(problem_id=reduced.id, perm=sub_perm),
        score=best,
        tie_count=len(tied),
        breakdown=scorer.explain(problem, perm),
        diagnostics={"mode": f"{scorer.mode}-total", "seed": seed,
                     "search_size": total, "full_perm": list(perm),
                     "elapsed": time.perf_counter() - started},
    )


def evaluate_proportional(space, a1: Term, a2: Term, b1: Term, b2: Term) -> float:
    """Quality of the four-term analogy a1:a2 :: b1:b2."""
    return space.sim_r(TermPair(a1, a2), TermPair(b1, b2))
