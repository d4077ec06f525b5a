"""Batch evaluation, coherence comparisons, and parameter sweeps.

A batch run mines the corpus once across all problems in the dataset,
builds one relation space, solves every problem, and reports per-problem
and average accuracy. Reports serialize to TSV plus a JSON diagnostics
sidecar; everything written is deterministic given (corpus digest,
config, seed).
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import patterns as pt
from . import space as sp
from .attributes import (CombinedSimilarity, PmiIrSimilarity, PosSimilarity,
                         load_external_similarity)
from .config import Config
from .corpus import CorpusIndex
from .dataset import Dataset
from .errors import ConfigError, DataError
from .problems import Mapping, MappingProblem
from .solver import (AttributionalScorer, RelationalScorer, SolveResult,
                     solve, solve_constrained, solve_hybrid)

logger = logging.getLogger(__name__)


def accuracy(predicted: Mapping, intended: Mapping) -> float:
    """Percentage of source terms mapped to their intended targets."""
    if predicted.problem_id != intended.problem_id:
        raise DataError(f"cannot score mapping for {predicted.problem_id!r} "
                        f"against {intended.problem_id!r}")
    if len(predicted.perm) != len(intended.perm):
        raise DataError("mappings cover different numbers of terms")
    m = len(predicted.perm)
    hits = sum(1 for a, b in zip(predicted.perm, intended.perm) if a == b)
    return 100.0 * hits / m


# --- relational pipeline ----------------------------------------------------

def mine_for_problems(index: CorpusIndex, problems: list[MappingProblem],
                      max_phrases_per_pair: Optional[int] = None
                      ) -> tuple[list, pt.PatternStats]:
    pairs = pt.build_pair_list(problems)
    stats = pt.mine_patterns(index, pairs, max_phrases_per_pair=max_phrases_per_pair)
    return pairs, stats


def space_from_stats(pairs: list, stats: pt.PatternStats, *, t: int, k: int,
                     transform: str = sp.PPMIC, svd: bool = True,
                     provenance: Optional[dict] = None
                     ) -> tuple[sp.RelationSpace, dict]:
    """Prune, select columns, weight, smooth; also returns stage diagnostics."""
    rows = pt.prune_rows(pairs, stats.phrase_counts)
    diag = {"n_pairs": len(pairs), "n_r": len(rows)}
    provenance = dict(provenance or {})
    provenance["t"] = t
    if not rows:
        diag.update(n_c=0, f_density=0.0, x_density=0.0)
        empty = sp.RelationSpace(row_index={}, W=np.zeros((0, 1)),
                                 k=k if svd else None, transform=transform,
                                 provenance=provenance)
        return empty, diag
    cols = pt.select_columns(stats, t, len(rows))
    F = pt.build_frequency_matrix(rows, cols, stats)
    diag["n_c"] = len(cols)
    diag["f_density"] = F.nnz / (F.shape[0] * F.shape[1]) if F.shape[1] else 0.0
    if transform == sp.PPMIC:
        X = sp.transform_ppmic(F)
    elif transform == sp.LOG_ENTROPY:
        X, _kept = sp.transform_log_entropy(F)
    else:
        raise ConfigError(f"unknown transform {transform!r}")
    diag["x_density"] = X.nnz / (X.shape[0] * X.shape[1]) if X.shape[1] else 0.0
    space = sp.build_space_from_matrix(
        X, rows, k=k if svd else None, transform=transform, provenance=provenance)
    return space, diag


def build_space_for_problems(index: CorpusIndex, problems: list[MappingProblem],
                             config: Config) -> tuple[sp.RelationSpace, dict]:
    pairs, stats = mine_for_problems(
        index, problems, max_phrases_per_pair=config.max_phrases_per_pair)
    return space_from_stats(
        pairs, stats, t=config.t, k=config.k, transform=config.transform,
        svd=config.svd, provenance={"corpus_digest": index.digest})


# --- providers --------------------------------------------------------------

def make_provider(spec: str, problem: MappingProblem,
                  index: Optional[CorpusIndex], config: Config,
                  pos_tags: Optional[dict[str, str]] = None):
    """Build the attributional provider named by a spec like "pmi-ir+pos".

    The POS component uses the problem's own tags (tags are scoped to a
    problem: the same word can be tagged differently in two problems)
    unless an explicit table is supplied.
    """
    parts = spec.split("+")
    base: list = []
    for part in parts:
        part = part.strip()
        if part == "pos":
            base.append(PosSimilarity(pos_tags if pos_tags is not None
                                      else problem.pos_tags))
        elif part == "pmi-ir":
            if index is None:
                raise ConfigError("provider pmi-ir needs a corpus index")
            base.append(PmiIrSimilarity(index, window=config.pmi_window))
        elif part.startswith("external:"):
            base.append(load_external_similarity(part.split(":", 1)[1]))
        else:
            raise ConfigError(f"unknown provider {part!r}")
    provider = base[0]
    for extra in base[1:]:
        provider = CombinedSimilarity(provider, extra)
    return provider


# --- reports ----------------------------------------------------------------

@dataclass
class ReportRow:
    problem_id: str
    mnemonic: str
    m: int
    accuracy: float
    tie_count: int
    agreement: Optional[float] = None


@dataclass
class Report:
    rows: list[ReportRow]
    average: float
    metadata: dict = field(default_factory=dict)

    def split_averages(self) -> Optional[dict[str, float]]:
        """Mean accuracy for A-prefixed and M-prefixed problems, if both occur."""
        science = [r.accuracy for r in self.rows if r.problem_id.startswith("A")]
        metaphor = [r.accuracy for r in self.rows if r.problem_id.startswith("M")]
        if not science or not metaphor:
            return None
        return {"science": sum(science) / len(science),
                "metaphor": sum(metaphor) / len(metaphor)}

    def to_tsv(self) -> str:
        lines = ["mapping\tsource_target\tm\taccuracy\tagreement"]
        for r in self.rows:
            agreement = f"{r.agreement:.1f}" if r.agreement is not None else ""
            lines.append(f"{r.problem_id}\t{r.mnemonic}\t{r.m}"
                         f"\t{r.accuracy:.1f}\t{agreement}")
        mean_agreement = [r.agreement for r in self.rows if r.agreement is not None]
        avg_agr = (f"{sum(mean_agreement) / len(mean_agreement):.1f}"
                   if len(mean_agreement) == len(self.rows) and self.rows else "")
        lines.append(f"Average\t\t\t{self.average:.1f}\t{avg_agr}")
        return "\n".join(lines) + "\n"

    def sidecar(self) -> str:
        payload = dict(self.metadata)
        payload["average"] = self.average
        split = self.split_averages()
        if split:
            payload["split"] = split
        payload["rows"] = [{"problem": r.problem_id, "accuracy": r.accuracy,
                            "tie_count": r.tie_count} for r in self.rows]
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def solve_one(problem: MappingProblem, config: Config,
               space: Optional[sp.RelationSpace],
               index: Optional[CorpusIndex]) -> SolveResult:
    if config.mode == "relational":
        return solve(problem, RelationalScorer(space), config.seed,
                     m_max=config.m_max)
    if config.mode == "attributional":
        provider = make_provider(config.provider, problem, index, config)
        return solve(problem, AttributionalScorer(provider), config.seed,
                     m_max=config.m_max)
    provider = make_provider(config.provider, problem, index, config)
    combine = "add" if config.mode == "hybrid-add" else "multiply"
    return solve_hybrid(problem, space, provider, combine, config.seed,
                        m_max=config.m_max)


def solve_batch(dataset: Dataset, config: Config,
                index: Optional[CorpusIndex] = None
                ) -> tuple[list[SolveResult], dict]:
    """Solve every problem under one shared relation space; no accuracy."""
    config.validate()
    problems = list(dataset)
    space: Optional[sp.RelationSpace] = None
    diag: dict = {"mode": config.mode, "seed": config.seed}
    if config.mode != "attributional":
        if index is None:
            raise ConfigError(f"mode {config.mode!r} needs an indexed corpus")
        space, stage_diag = build_space_for_problems(index, problems, config)
        diag.update(stage_diag)
        diag["corpus_digest"] = index.digest
    results = [solve_one(p, config, space, index) for p in problems]
    diag["tie_counts"] = {r.problem.id: r.tie_count for r in results}
    return results, diag


def run_batch(dataset: Dataset, config: Config,
              index: Optional[CorpusIndex] = None) -> Report:
    """Solve the whole dataset and score it against the intended mappings."""
    results, diag = solve_batch(dataset, config, index)
    rows = []
    for result in results:
        problem = result.problem
        acc = accuracy(result.mapping, problem.intended_mapping())
        agreement = None
        if problem.agreement:
            values = [problem.agreement[t.text] for t in problem.source]
            agreement = sum(values) / len(values)
        rows.append(ReportRow(problem_id=problem.id, mnemonic=problem.mnemonic,
                              m=problem.m, accuracy=acc,
                              tie_count=result.tie_count, agreement=agreement))
    average = sum(r.accuracy for r in rows) / len(rows) if rows else 0.0
    diag["config"] = config.summary()
    return Report(rows=rows, average=average, metadata=diag)


# --- coherence experiment ---------------------------------------------------

@dataclass
class CoherenceRow:
    problem_id: str
    trials: int
    internal_accuracy: float
    total_accuracy: float


@dataclass
class CoherenceReport:
    rows: list[CoherenceRow]
    internal_average: float
    total_average: float
    metadata: dict = field(default_factory=dict)

    def to_tsv(self) -> str:
        lines = ["mapping\ttrials\tinternal\ttotal"]
        for r in self.rows:
            lines.append(f"{r.problem_id}\t{r.trials}"
                         f"\t{r.internal_accuracy:.1f}\t{r.total_accuracy:.1f}")
        lines.append(f"Average\t{sum(r.trials for r in self.rows)}"
                     f"\t{self.internal_average:.1f}\t{self.total_average:.1f}")
        return "\n".join(lines) + "\n"

    def sidecar(self) -> str:
        payload = dict(self.metadata)
        payload["internal_average"] = self.internal_average
        payload["total_average"] = self.total_average
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _coherence_scorer(config: Config, space, index, problem):
    if config.mode == "relational":
        return RelationalScorer(space)
    if config.mode == "attributional":
        return AttributionalScorer(make_provider(config.provider, problem,
                                                 index, config))
    raise ConfigError(f"coherence experiment supports relational or "
                      f"attributional mode, not {config.mode!r}")


def coherence_experiment(dataset: Dataset, m_prime: int, trials_per_problem: int,
                         seed: int, config: Config,
                         index: Optional[CorpusIndex] = None,
                         tie_policy: str = "random") -> CoherenceReport:
    """Compare solving random subproblems in isolation vs inside the whole.

    For each problem, `trials_per_problem` subsets of size m_prime are
    drawn (uniformly over the index subsets, without replacement inside
    a subset) and their intended images taken as the reduced target
    side. Internal mode searches only the reduced problem; total mode
    searches the full problem under the setwise subset constraint.
    Accuracy is measured on the subproblem either way. m_prime == m
    degenerates to a single full-size trial; larger m_prime skips the
    problem with a warning.
    """
    if m_prime < 2:
        raise ConfigError(f"m_prime must be >= 2, got {m_prime}")
    config.validate()
    space = None
    diag: dict = {"mode": config.mode, "seed": seed, "m_prime": m_prime,
                  "tie_policy": tie_policy}
    problems = [p for p in dataset if p.intended]
    if len(problems) != len(dataset):
        raise DataError("coherence experiment needs intended mappings")
    if config.mode != "attributional":
        if index is None:
            raise ConfigError("relational coherence needs an indexed corpus")
        space, stage_diag = build_space_for_problems(index, problems, config)
        diag.update(stage_diag)
    rows = []
    for problem in problems:
        if m_prime > problem.m:
            logger.warning("skipping %s: m_prime=%d exceeds m=%d",
                           problem.id, m_prime, problem.m)
            continue
        rng = random.Random(f"{seed}:{problem.id}")
        trials = 1 if m_prime == problem.m else trials_per_problem
        internal_scores, total_scores = [], []
        scorer = _coherence_scorer(config, space, index, problem)
        for trial in range(trials):
            indices = sorted(rng.sample(range(problem.m), m_prime))
            fixed = {problem.source[i].text: problem.intended[problem.source[i].text]
                     for i in indices}
            gold = None
            for mode, bucket in (("internal", internal_scores),
                                 ("total", total_scores)):
                result = solve_constrained(
                    problem, fixed, scorer, mode=mode,
                    seed=f"{seed}:{trial}", tie_policy=tie_policy,
                    m_max=config.m_max)
                if gold is None:
                    gold = result.problem.intended_mapping()
                bucket.append(accuracy(result.mapping, gold))
        rows.append(CoherenceRow(
            problem_id=problem.id, trials=trials,
            internal_accuracy=sum(internal_scores) / len(internal_scores),
            total_accuracy=sum(total_scores) / len(total_scores)))
    if not rows:
        raise DataError("coherence experiment: every problem was skipped")
    diag["config"] = config.summary()
    diag["subproblems"] = sum(r.trials for r in rows)
    return CoherenceReport(
        rows=rows,
        internal_average=sum(r.internal_accuracy for r in rows) / len(rows),
        total_average=sum(r.total_accuracy for r in rows) / len(rows),
        metadata=diag)


# --- sensitivity sweep ------------------------------------------------------

@dataclass
class SweepRow:
    label: str
    k: int
    t: int
    n_c: int
    accuracy: float


@dataclass
class SweepReport:
    rows: list[SweepRow]
    metadata: dict = field(default_factory=dict)

    def to_tsv(self) -> str:
        lines = ["experiment\tk\tt\tn_c\taccuracy"]
        for r in self.rows:
            lines.append(f"{r.label}\t{r.k}\t{r.t}\t{r.n_c}\t{r.accuracy:.1f}")
        return "\n".join(lines) + "\n"

    def sidecar(self) -> str:
        payload = dict(self.metadata)
        payload["rows"] = [{"label": r.label, "k": r.k, "t": r.t, "n_c": r.n_c,
                            "accuracy": r.accuracy} for r in self.rows]
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def sensitivity_sweep(dataset: Dataset, config: Config, index: CorpusIndex,
                      k_grid: Optional[list[int]] = None,
                      t_grid: Optional[list[int]] = None,
                      include_no_svd: bool = False,
                      transform_grid: Optional[list[str]] = None) -> SweepReport:
    """One relational batch run per grid point, mining the corpus only once."""
    config.validate()
    problems = list(dataset)
    pairs, stats = mine_for_problems(
        index, problems, max_phrases_per_pair=config.max_phrases_per_pair)

    points: list[tuple[str, dict]] = []
    for k in (k_grid or []):
        points.append(("varying k", {"k": k}))
    for t in (t_grid or []):
        points.append(("varying t", {"t": t}))
    if include_no_svd:
        points.append(("dropping SVD", {"svd": False}))
    for transform in (transform_grid or []):
        points.append((transform, {"transform": transform}))
    if not points:
        points.append(("baseline", {}))

    rows = []
    for label, overrides in points:
        t = overrides.get("t", config.t)
        k = overrides.get("k", config.k)
        svd = overrides.get("svd", config.svd)
        transform = overrides.get("transform", config.transform)
        space, diag = space_from_stats(
            pairs, stats, t=t, k=k, transform=transform, svd=svd,
            provenance={"corpus_digest": index.digest})
        accs = []
        for problem in problems:
            result = solve(problem, RelationalScorer(space), config.seed,
                           m_max=config.m_max)
            accs.append(accuracy(result.mapping, problem.intended_mapping()))
        rows.append(SweepRow(
            label=label,
            k=k if svd else diag["n_r"],
            t=t,
            n_c=diag.get("n_c", 0),
            accuracy=sum(accs) / len(accs) if accs else 0.0))
    return SweepReport(rows=rows, metadata={
        "config": config.summary(), "corpus_digest": index.digest,
        "n_pairs": len(pairs)})
