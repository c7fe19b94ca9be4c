"""Ranking evaluation: Kendall tau, monotonicity, averaged tau and improvement.

Scores are compared after rounding to 12 significant digits, so values that
differ only by floating-point noise from long sums are treated as ties.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence, Union

import numpy as np
import numpy.typing as npt
import structlog

from .baselines import ScoreVector
from .errors import ParameterError
from .graph import Graph
from .sir import SirConfig, SirOutcome, spreading_capability

logger = logging.getLogger(__name__)
structured_logger = structlog.get_logger(__name__)

COMPARISON_DIGITS = 12
DEFAULT_DELTA = 0.01
DEFAULT_STEPS = 10
GRID_DECIMALS = 12

Scores = Union[ScoreVector, npt.ArrayLike]


def _values(scores: Scores) -> npt.NDArray[np.float64]:
    if isinstance(scores, ScoreVector):
        return scores.scores
    return np.asarray(scores, dtype=np.float64)


def round_significant(
    values: npt.ArrayLike, digits: int = COMPARISON_DIGITS
) -> npt.NDArray[np.float64]:
    """Round every value to ``digits`` significant decimal digits."""
    spec = f".{digits - 1}e"
    return np.array(
        [float(format(float(x), spec)) for x in np.asarray(values, dtype=np.float64)],
        dtype=np.float64,
    )


def _tied_pairs(values: npt.NDArray[Any]) -> int:
    _, counts = np.unique(values, return_counts=True, axis=0)
    return int(sum(int(c) * (int(c) - 1) // 2 for c in counts))


def _count_inversions(values: npt.NDArray[np.float64]) -> int:
    """Pairs i < j with values[i] > values[j] (Fenwick tree over dense ranks)."""
    _, ranks = np.unique(values, return_inverse=True)
    size = int(ranks.max()) + 1 if len(ranks) else 0
    tree = [0] * (size + 1)
    inversions = 0
    for seen, rank in enumerate(ranks.tolist()):
        # count of earlier values <= this one
        i = rank + 1
        not_greater = 0
        while i > 0:
            not_greater += tree[i]
            i -= i & -i
        inversions += seen - not_greater
        i = rank + 1
        while i <= size:
            tree[i] += 1
            i += i & -i
    return inversions


def concordance_counts(m: Scores, n: Scores) -> tuple[int, int]:
    """Concordant and discordant pair counts.

    Pairs tied in either input count in neither.

    Raises:
        ParameterError: On length mismatch or fewer than 2 items
    """
    x = _values(m)
    y = _values(n)
    if len(x) != len(y):
        raise ParameterError(
            f"score vectors differ in length: {len(x)} vs {len(y)}"
        )
    if len(x) < 2:
        raise ParameterError("kendall tau needs at least 2 items")

    x = round_significant(x)
    y = round_significant(y)
    count = len(x)
    all_pairs = count * (count - 1) // 2
    x_ties = _tied_pairs(x)
    y_ties = _tied_pairs(y)
    joint_ties = _tied_pairs(np.column_stack([x, y]))

    order = np.lexsort((y, x))
    discordant = _count_inversions(y[order])
    untied = all_pairs - x_ties - y_ties + joint_ties
    return untied - discordant, discordant


def kendall_tau(m: Scores, n: Scores) -> float:
    """Kendall tau ``2 (R_a - R_b) / (R (R - 1))`` with R the number of items.

    Tied pairs stay in the denominator (tau-a). Runs in O(R log R).
    """
    concordant, discordant = concordance_counts(m, n)
    count = len(_values(m))
    return 2.0 * (concordant - discordant) / (count * (count - 1))


@dataclass(frozen=True)
class RankingList:
    """Nodes ordered by descending score, grouped into tie classes.

    Attributes:
        entries: (node index, score) in ranking order; equal scores by node index
        tie_classes: Node groups with equal rounded score, best first
    """

    entries: tuple[tuple[int, float], ...]
    tie_classes: tuple[tuple[int, ...], ...]

    @classmethod
    def from_scores(cls, scores: Scores) -> RankingList:
        values = _values(scores)
        rounded = round_significant(values)
        order = np.lexsort((np.arange(len(values)), -rounded))

        entries = tuple((int(i), float(values[i])) for i in order)
        classes: list[tuple[int, ...]] = []
        current: list[int] = []
        previous: float | None = None
        for i in order.tolist():
            if previous is not None and rounded[i] != previous:
                classes.append(tuple(current))
                current = []
            current.append(i)
            previous = float(rounded[i])
        if current:
            classes.append(tuple(current))
        return cls(entries=entries, tie_classes=tuple(classes))

    def __len__(self) -> int:
        return len(self.entries)

    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.tie_classes]

    def ranked_nodes(self) -> list[int]:
        return [node for node, _ in self.entries]


def monotonicity(ranking: RankingList) -> float:
    """``(1 - sum N_i (N_i - 1) / (N (N - 1)))**2`` over tie classes.

    Raises:
        ParameterError: If fewer than 2 nodes are ranked
    """
    total = len(ranking)
    if total < 2:
        raise ParameterError("monotonicity needs at least 2 ranked nodes")
    tied = sum(size * (size - 1) for size in ranking.class_sizes())
    return (1.0 - tied / (total * (total - 1))) ** 2


def score_monotonicity(scores: Scores) -> float:
    """Monotonicity of the ranking induced by ``scores``."""
    return monotonicity(RankingList.from_scores(scores))


def improvement_pct(
    tau_emh: float, tau_other: float, as_printed: bool = False
) -> float:
    """Improvement percentage of ``tau_emh`` over ``tau_other``.

    ``(tau_emh - tau_other) / |tau_other| * 100``, 0 when ``tau_other`` is 0.
    With ``as_printed`` the denominator keeps its sign.
    """
    for name, value in (("tau_emh", tau_emh), ("tau_other", tau_other)):
        if not -1.0 - 1e-9 <= value <= 1.0 + 1e-9:
            raise ParameterError(f"{name} must lie in [-1, 1], got {value}")
    if tau_other == 0.0:
        return 0.0
    denominator = tau_other if as_printed else abs(tau_other)
    return (tau_emh - tau_other) / denominator * 100.0


def _grid_value(value: float) -> float:
    return round(value, GRID_DECIMALS)


def averaging_grid(
    beta_th: float, delta: float = DEFAULT_DELTA, steps: int = DEFAULT_STEPS
) -> list[float]:
    """``beta_th + k * delta`` for k = 1..steps.

    Raises:
        ParameterError: If delta <= 0, steps < 1 or a grid value exceeds 1
    """
    if delta <= 0.0:
        raise ParameterError(f"delta must be positive, got {delta}")
    if steps < 1:
        raise ParameterError(f"steps must be >= 1, got {steps}")
    grid = [_grid_value(beta_th + k * delta) for k in range(1, steps + 1)]
    if grid[-1] > 1.0:
        raise ParameterError(
            f"averaging grid reaches beta={grid[-1]:.4f} > 1",
            details=f"beta_th={beta_th:.6f}, delta={delta}, steps={steps}",
            suggestions=["Reduce --steps or --delta"],
        )
    if grid[0] < 0.0:
        raise ParameterError(f"averaging grid starts below 0 at beta={grid[0]}")
    return grid


def plot_grid(start: float, stop: float, step: float) -> list[float]:
    """Evenly spaced betas from ``start`` to ``stop`` inclusive.

    Raises:
        ParameterError: If the range is empty or outside [0, 1]
    """
    if step <= 0.0:
        raise ParameterError(f"beta grid step must be positive, got {step}")
    if not 0.0 <= start <= stop <= 1.0:
        raise ParameterError(
            f"beta grid must satisfy 0 <= start <= stop <= 1, got {start}:{stop}"
        )
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [_grid_value(start + i * step) for i in range(count)]


def default_plot_grid(beta_th: float, step: float = 0.01) -> list[float]:
    """0.01 to min(1, beta_th + 0.15) in steps of 0.01."""
    return plot_grid(step, min(1.0, max(step, beta_th + 0.15)), step)


def merge_grids(*grids: Sequence[float]) -> list[float]:
    return sorted({_grid_value(b) for grid in grids for b in grid})


def averaged_tau(
    g: Graph,
    measure: ScoreVector,
    beta_th: float,
    delta: float = DEFAULT_DELTA,
    steps: int = DEFAULT_STEPS,
    sir_template: SirConfig | None = None,
    n_jobs: int = 1,
) -> float:
    """Mean Kendall tau of ``measure`` against SIR spread over the averaging grid."""
    measure.check_graph(g)
    grid = averaging_grid(beta_th, delta, steps)
    template = sir_template or SirConfig(beta=0.0)
    taus = []
    for beta in grid:
        outcome = spreading_capability(g, template.with_beta(beta), n_jobs)
        taus.append(kendall_tau(measure, outcome.spread))
    return sum(taus) / len(taus)


@dataclass
class EvalReport:
    """Evaluation of one measure."""

    measure_name: str
    tau_curve: list[tuple[float, float]]
    avg_tau: float
    monotonicity: float
    eta_vs: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "measure": self.measure_name,
            "avg_tau": self.avg_tau,
            "monotonicity": self.monotonicity,
            "eta_vs": dict(self.eta_vs),
            "tau_curve": [{"beta": b, "tau": t} for b, t in self.tau_curve],
        }


@dataclass
class Evaluation:
    """Result of evaluating several measures against shared SIR ground truth."""

    reports: dict[str, EvalReport]
    outcomes: dict[float, SirOutcome]
    eta_curve: list[tuple[str, float, float]]
    beta_grid: list[float]
    averaging_grid: list[float]


def evaluate_measures(
    g: Graph,
    measures: Sequence[ScoreVector],
    beta_grid: Sequence[float],
    averaging_betas: Sequence[float],
    sir_template: SirConfig,
    n_jobs: int = 1,
    reference: str = "EMH",
    eta_as_printed: bool = False,
    on_outcome: Callable[[SirOutcome], None] | None = None,
) -> Evaluation:
    """Score every measure against one SIR run per grid point.

    SIR cost does not depend on the number of measures: each beta in the union
    of ``beta_grid`` and ``averaging_betas`` is simulated exactly once.

    Args:
        g: Graph
        measures: Score vectors to evaluate (distinct names)
        beta_grid: Betas for the tau / eta curves
        averaging_betas: Betas whose taus are averaged
        sir_template: SIR parameters; beta is replaced per grid point
        n_jobs: joblib workers for SIR
        reference: Measure compared against all others by eta
        eta_as_printed: Keep the sign of the denominator in eta
        on_outcome: Called with each SirOutcome as soon as it is available

    Returns:
        Reports per measure, the SIR outcomes and the eta curve rows
    """
    names = [m.measure_name for m in measures]
    if len(set(names)) != len(names):
        raise ParameterError(f"duplicate measure names: {names}")
    for measure in measures:
        measure.check_graph(g)

    full_grid = merge_grids(beta_grid, averaging_betas)
    averaging_keys = {_grid_value(b) for b in averaging_betas}
    taus: dict[str, dict[float, float]] = {name: {} for name in names}
    outcomes: dict[float, SirOutcome] = {}

    for beta in full_grid:
        started = time.perf_counter()
        outcome = spreading_capability(g, sir_template.with_beta(beta), n_jobs)
        outcomes[beta] = outcome
        if on_outcome is not None:
            on_outcome(outcome)
        for measure in measures:
            taus[measure.measure_name][beta] = kendall_tau(measure, outcome.spread)
        structured_logger.info(
            "Grid point evaluated",
            beta=beta,
            measures=len(measures),
            elapsed_ms=round((time.perf_counter() - started) * 1000, 1),
        )

    reports: dict[str, EvalReport] = {}
    for measure in measures:
        curve = taus[measure.measure_name]
        averaged = [curve[b] for b in full_grid if b in averaging_keys]
        reports[measure.measure_name] = EvalReport(
            measure_name=measure.measure_name,
            tau_curve=[(b, curve[b]) for b in full_grid],
            avg_tau=sum(averaged) / len(averaged) if averaged else float("nan"),
            monotonicity=score_monotonicity(measure),
        )

    eta_curve: list[tuple[str, float, float]] = []
    if reference in reports:
        ref = reports[reference]
        ref_curve = taus[reference]
        for name in names:
            if name == reference:
                continue
            ref.eta_vs[name] = improvement_pct(
                ref.avg_tau, reports[name].avg_tau, eta_as_printed
            )
            for beta in full_grid:
                eta_curve.append(
                    (
                        name,
                        beta,
                        improvement_pct(
                            ref_curve[beta], taus[name][beta], eta_as_printed
                        ),
                    )
                )
    elif len(names) > 1:
        logger.warning(f"Reference measure {reference} not evaluated; skipping eta")

    return Evaluation(
        reports=reports,
        outcomes=outcomes,
        eta_curve=eta_curve,
        beta_grid=list(beta_grid),
        averaging_grid=list(averaging_betas),
    )
