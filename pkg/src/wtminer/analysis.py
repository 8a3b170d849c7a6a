"""Cycle time efficiency (CTE) and what-if impacts.

CTE is processing time over processing plus waiting time. Processing time is
summed over every activity instance in the log; waiting time exists only at
transitions. The impact of a cause (or a transition) is the CTE the process
would reach if exactly that waiting time disappeared, minus the current CTE.
"""
from __future__ import annotations

from dataclasses import dataclass

from wtminer.decomposition import CAUSES, WtDecomposition
from wtminer.model import EventLog, WtMinerError
from wtminer.transitions import Transition


def compute_cte(total_pt: int, total_wt: int) -> float:
    if total_pt < 0 or total_wt < 0:
        raise ValueError("durations cannot be negative")
    if total_pt + total_wt == 0:
        raise WtMinerError("CTE is undefined: no processing or waiting time observed")
    return total_pt / (total_pt + total_wt)


def cte_if_eliminated(total_pt: int, total_wt: int, removed: int) -> float:
    """CTE after removing `removed` seconds of waiting time."""
    if removed > total_wt:
        raise ValueError("cannot remove more waiting time than exists")
    return compute_cte(total_pt, total_wt - removed)


@dataclass(frozen=True)
class CauseImpact:
    cause: str
    wt_seconds: int
    share_of_wt: float
    cte_if_eliminated: float
    delta: float


@dataclass(frozen=True)
class TransitionImpact:
    source_activity: str
    target_activity: str
    case_frequency: float
    total_frequency: int
    total_wt_seconds: int
    wt_by_cause: dict[str, int]
    cte_if_eliminated: float
    delta: float

    @property
    def label(self) -> tuple[str, str]:
        return (self.source_activity, self.target_activity)

    @property
    def is_self_loop(self) -> bool:
        return self.source_activity == self.target_activity


@dataclass(frozen=True)
class AnalysisResult:
    total_pt_seconds: int
    total_wt_seconds: int
    cte: float
    per_cause: dict[str, CauseImpact]
    per_transition: tuple[TransitionImpact, ...]

    def cause_wt(self, cause: str) -> int:
        return self.per_cause[cause].wt_seconds


def analyze(
    log: EventLog,
    transitions: tuple[Transition, ...],
    decompositions: tuple[WtDecomposition, ...],
) -> AnalysisResult:
    """Fold decompositions into process-level and transition-level impacts."""
    total_pt = sum(inst.processing.duration for inst in log.instances)
    total_wt = sum(t.total_duration for t in transitions)

    n_transition_instances = sum(t.total_frequency for t in transitions)
    if len(decompositions) != n_transition_instances:
        raise ValueError(
            f"{len(decompositions)} decompositions for "
            f"{n_transition_instances} transition instances"
        )

    cte = compute_cte(total_pt, total_wt)

    cause_totals = dict.fromkeys(CAUSES, 0)
    by_label: dict[tuple[str, str], dict[str, int]] = {}
    for dec in decompositions:
        label = (dec.instance.source.activity, dec.instance.target.activity)
        slot = by_label.setdefault(label, dict.fromkeys(CAUSES, 0))
        for cause, duration in dec.cause_durations().items():
            cause_totals[cause] += duration
            slot[cause] += duration

    if sum(cause_totals.values()) != total_wt:
        raise WtMinerError(
            "decomposed waiting time does not add up to the transition total"
        )

    per_cause = {}
    for cause in CAUSES:
        wt_cause = cause_totals[cause]
        after = cte_if_eliminated(total_pt, total_wt, wt_cause)
        per_cause[cause] = CauseImpact(
            cause=cause,
            wt_seconds=wt_cause,
            share_of_wt=wt_cause / total_wt if total_wt else 0.0,
            cte_if_eliminated=after,
            delta=after - cte,
        )

    per_transition = []
    for t in transitions:
        after = cte_if_eliminated(total_pt, total_wt, t.total_duration)
        per_transition.append(
            TransitionImpact(
                source_activity=t.source_activity,
                target_activity=t.target_activity,
                case_frequency=t.case_frequency,
                total_frequency=t.total_frequency,
                total_wt_seconds=t.total_duration,
                wt_by_cause=by_label.get(t.label, dict.fromkeys(CAUSES, 0)),
                cte_if_eliminated=after,
                delta=after - cte,
            )
        )
    return AnalysisResult(
        total_pt_seconds=total_pt,
        total_wt_seconds=total_wt,
        cte=cte,
        per_cause=per_cause,
        per_transition=tuple(per_transition),
    )
