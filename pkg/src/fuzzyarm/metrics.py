"""Stage timing and binary-accuracy accounting for pipeline trials.

The pipeline has four measured stages: speech-to-text (stt), action
extraction (ae), object detection (od) and robot actions (ra). Total trial
time is the stage sum plus a measured overhead term:

    t_total = t_stt + t_ae + t_od + t_ra + overhead

and the identity is maintained bit-exactly by always summing in the same
order (total_time). Accuracy is binary per stage (0 or 100); a stage failure
forces every downstream stage, and the trial, to 0. Failed trials are
attributed to their FIRST failing stage, which partitions the failure set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

STAGES = ("stt", "ae", "od", "ra")

METRIC_ROWS = (
    ("t_stt", "T_STT (s)"),
    ("t_ae", "T_AE (s)"),
    ("t_od", "T_OD (s)"),
    ("t_ra", "T_RA (s)"),
    ("t_total", "T_total (s)"),
    ("a_stt", "A_STT (%)"),
    ("a_ae", "A_AE (%)"),
    ("a_od", "A_OD (%)"),
    ("a_ra", "A_RA (%)"),
    ("a_total", "A_total (%)"),
    ("overhead", "C (s)"),
)


@dataclass(frozen=True)
class StageMetrics:
    t_stt: float
    t_ae: float
    t_od: float
    t_ra: float
    a_stt: int
    a_ae: int
    a_od: int
    a_ra: int

    def __post_init__(self) -> None:
        for name in ("t_stt", "t_ae", "t_od", "t_ra"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        for name in ("a_stt", "a_ae", "a_od", "a_ra"):
            if getattr(self, name) not in (0, 100):
                raise ValueError(f"{name} must be binary (0 or 100)")

    def time(self, stage: str) -> float:
        return getattr(self, f"t_{stage}")

    def accuracy(self, stage: str) -> int:
        return getattr(self, f"a_{stage}")


def total_time(stages: StageMetrics, overhead: float) -> float:
    """The one summation order used everywhere, keeping the identity bit-exact."""
    return ((stages.t_stt + stages.t_ae) + stages.t_od + stages.t_ra) + overhead


@dataclass(frozen=True)
class TrialRecord:
    trial_id: str
    utterance: str
    expected_actions: tuple[dict, ...]
    stages: StageMetrics
    overhead: float
    t_total: float
    a_total: int

    def __post_init__(self) -> None:
        if self.t_total != total_time(self.stages, self.overhead):
            raise ValueError("t_total must equal the stage sum plus overhead, bit-exactly")
        all_ok = all(self.stages.accuracy(s) == 100 for s in STAGES)
        if self.a_total != (100 if all_ok else 0):
            raise ValueError("a_total must be 100 iff every stage accuracy is 100")

    @classmethod
    def build(
        cls,
        trial_id: str,
        utterance: str,
        expected_actions: Iterable[dict],
        stages: StageMetrics,
        overhead: float,
    ) -> "TrialRecord":
        a_total = 100 if all(stages.accuracy(s) == 100 for s in STAGES) else 0
        return cls(
            trial_id=trial_id,
            utterance=utterance,
            expected_actions=tuple(expected_actions),
            stages=stages,
            overhead=overhead,
            t_total=total_time(stages, overhead),
            a_total=a_total,
        )

    def first_failing_stage(self) -> str | None:
        for stage in STAGES:
            if self.stages.accuracy(stage) == 0:
                return stage
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "trial_id": self.trial_id,
            "utterance": self.utterance,
            "expected_actions": list(self.expected_actions),
            "t_stt": self.stages.t_stt,
            "t_ae": self.stages.t_ae,
            "t_od": self.stages.t_od,
            "t_ra": self.stages.t_ra,
            "a_stt": self.stages.a_stt,
            "a_ae": self.stages.a_ae,
            "a_od": self.stages.a_od,
            "a_ra": self.stages.a_ra,
            "overhead": self.overhead,
            "t_total": self.t_total,
            "a_total": self.a_total,
        }


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    sd: float
    lo: float
    hi: float


def summarize(values: Sequence[float]) -> MetricSummary:
    n = len(values)
    if n == 0:
        raise ValueError("cannot summarize zero values")
    mean = sum(values) / n
    if n == 1:
        sd = 0.0
    else:
        sd = (sum((v - mean) ** 2 for v in values) / (n - 1)) ** 0.5
    return MetricSummary(mean, sd, min(values), max(values))


@dataclass(frozen=True)
class ErrorAttribution:
    counts: dict[str, int]
    percentages: dict[str, float]
    total_failures: int
    no_failures: bool


def error_attribution(records: Sequence[TrialRecord]) -> ErrorAttribution:
    """Attribute each failed trial to its first failing stage.

    With zero failures the attribution is all-zero and flagged rather than
    raising, so aggregate reports of clean runs stay well-formed.
    """
    if not records:
        raise ValueError("error attribution needs at least one record")
    counts = {stage: 0 for stage in STAGES}
    failures = 0
    for record in records:
        if record.a_total == 100:
            continue
        failures += 1
        first = record.first_failing_stage()
        assert first is not None
        counts[first] += 1
    if failures == 0:
        return ErrorAttribution(counts, {s: 0.0 for s in STAGES}, 0, no_failures=True)
    pct = {s: 100.0 * counts[s] / failures for s in STAGES}
    return ErrorAttribution(counts, pct, failures, no_failures=False)


@dataclass(frozen=True)
class AggregateReport:
    n_trials: int
    summaries: dict[str, MetricSummary]
    time_contribution_pct: dict[str, float]
    overhead_share_pct: float
    errors: ErrorAttribution


def aggregate(records: Sequence[TrialRecord]) -> AggregateReport:
    """Per-metric mean/SD/range plus stage contribution percentages.

    Re-checks the timing identity on every record; a violation is a
    programming error worth failing loudly over.
    """
    if not records:
        raise ValueError("aggregate needs at least one record")
    for r in records:
        if r.t_total != total_time(r.stages, r.overhead):
            raise ValueError(f"trial {r.trial_id}: timing identity violated")

    columns: dict[str, list[float]] = {key: [] for key, _ in METRIC_ROWS}
    for r in records:
        d = r.to_dict()
        for key, _ in METRIC_ROWS:
            columns[key].append(d[key])

    summaries = {key: summarize(vals) for key, vals in columns.items()}
    mean_total = summaries["t_total"].mean
    time_pct = {
        stage: 100.0 * summaries[f"t_{stage}"].mean / mean_total for stage in STAGES
    }
    overhead_share = 100.0 - sum(time_pct.values())
    return AggregateReport(
        n_trials=len(records),
        summaries=summaries,
        time_contribution_pct=time_pct,
        overhead_share_pct=overhead_share,
        errors=error_attribution(records),
    )


# ---------------------------------------------------------------------------
# Export


def report_csv_lines(report: AggregateReport) -> list[str]:
    """Summary-table CSV: metric, mean, sd, min, max."""
    lines = ["metric,mean,sd,min,max"]
    for key, label in METRIC_ROWS:
        s = report.summaries[key]
        lines.append(f"{label},{s.mean:.6f},{s.sd:.6f},{s.lo:.6f},{s.hi:.6f}")
    return lines


def trials_csv_lines(records: Sequence[TrialRecord]) -> list[str]:
    header = [
        "trial_id", "t_stt", "t_ae", "t_od", "t_ra", "overhead", "t_total",
        "a_stt", "a_ae", "a_od", "a_ra", "a_total",
    ]
    lines = [",".join(header)]
    for r in records:
        d = r.to_dict()
        lines.append(
            ",".join(
                f"{d[k]:.6f}" if isinstance(d[k], float) else str(d[k]) for k in header
            )
        )
    return lines


def report_to_dict(report: AggregateReport) -> dict[str, Any]:
    return {
        "n_trials": report.n_trials,
        "metrics": {
            key: {"mean": s.mean, "sd": s.sd, "min": s.lo, "max": s.hi}
            for key, s in report.summaries.items()
        },
        "time_contribution_pct": report.time_contribution_pct,
        "overhead_share_pct": report.overhead_share_pct,
        "error_contribution_pct": report.errors.percentages,
        "error_counts": report.errors.counts,
        "total_failures": report.errors.total_failures,
        "no_failures": report.errors.no_failures,
    }


def report_to_json(report: AggregateReport, records: Sequence[TrialRecord] | None = None) -> str:
    payload = report_to_dict(report)
    if records is not None:
        payload["trials"] = [r.to_dict() for r in records]
    return json.dumps(payload, indent=2, sort_keys=True)


def format_summary_table(report: AggregateReport) -> str:
    """Human-readable summary in the shape of the benchmark table."""
    width = max(len(label) for _, label in METRIC_ROWS)
    out = [f"{'Metric':<{width}}  {'Mean':>9}  {'SD':>9}  {'Range':>19}"]
    for key, label in METRIC_ROWS:
        s = report.summaries[key]
        out.append(
            f"{label:<{width}}  {s.mean:>9.2f}  {s.sd:>9.2f}  {s.lo:>8.2f}--{s.hi:<8.2f}"
        )
    return "\n".join(out)
