"""Trial-log metrics, repeatability, Friedman statistics, Likert summaries.

Trial logs are 100 Hz traces of wrist angle (deg), motor current (mA),
and operator button events.  Invalid samples (non-finite, or angle
outside plausible bounds) are repaired by linear interpolation in time;
trials needing too much repair are rejected.  Metrics per trial are the
abduction/adduction range-of-motion split and the RMS motor-side torque;
across trials the toolkit reports per-spring distributions, trial-pair
repeatability, a Friedman test across spring conditions, and Likert
questionnaire summaries.

Aggregate statistics (means, standard deviations, percentiles) are
always evaluated on value-sorted arrays so that reports are bit-stable
regardless of the order trials were ingested.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TrialRejected
from .stats import chi2_survival
from .transmission import Gearing

BUTTONS = ("", "B2", "B3", "B4")  # B2 abduct, B3 adduct, B4 return to neutral
LOADS = ("unloaded", "loaded_300g")
LIKERT_ITEMS = ("size", "weight", "don_doff")

DEFAULT_ANGLE_BOUNDS = (-60.0, 45.0)  # deg, hardware range plus calibration slack
DEFAULT_MAX_INTERP_FRACTION = 0.05


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrialMeta:
    """Experimental condition identifying one trial."""

    participant: str
    posture: str
    load: str
    spring: str
    trial_index: int

    def __post_init__(self):
        if not self.participant or not self.posture or not self.spring:
            raise DomainError("participant, posture, and spring labels must be non-empty")
        if self.load not in LOADS:
            raise DomainError(f"load must be one of {LOADS}, got {self.load!r}")
        if self.trial_index < 1:
            raise DomainError(f"trial_index must be >= 1, got {self.trial_index}")

    def condition(self) -> tuple:
        """Everything but the trial index; repeated trials share this."""
        return (self.participant, self.posture, self.load, self.spring)


@dataclass(frozen=True)
class TrialLog:
    """Time-aligned angle/current/button channels for one trial."""

    time: np.ndarray        # s, strictly increasing
    angle_deg: np.ndarray
    current_ma: np.ndarray
    button: tuple           # per-sample event label, "" = none
    meta: TrialMeta | None = None

    def __post_init__(self):
        time = np.asarray(self.time, dtype=float)
        angle = np.asarray(self.angle_deg, dtype=float)
        current = np.asarray(self.current_ma, dtype=float)
        object.__setattr__(self, "time", time)
        object.__setattr__(self, "angle_deg", angle)
        object.__setattr__(self, "current_ma", current)
        object.__setattr__(self, "button", tuple(self.button))
        n = time.size
        if time.ndim != 1 or n == 0:
            raise DomainError("trial log must contain at least one sample")
        if angle.shape != time.shape or current.shape != time.shape or len(self.button) != n:
            raise DomainError("trial log channels must have equal length")
        if not np.isfinite(time).all():
            raise DomainError("timestamps must be finite")
        if n > 1 and not (np.diff(time) > 0).all():
            raise DomainError("timestamps must be strictly increasing")
        for b in self.button:
            if b not in BUTTONS:
                raise DomainError(f"button must be one of {BUTTONS}, got {b!r}")

    def __len__(self) -> int:
        return self.time.size


@dataclass(frozen=True)
class TrialMetrics:
    """Scalar outcomes of one cleaned trial."""

    rom_ab: float                 # deg
    rom_ad: float                 # deg
    rom_total: float              # deg
    tau_rms: float                # N*m, motor side
    n_samples: int
    interpolated_fraction: float
    meta: TrialMeta | None = None

    def __post_init__(self):
        if self.rom_ab < 0 or self.rom_ad < 0:
            raise DomainError("ROM components must be >= 0")
        if self.rom_total != self.rom_ab + self.rom_ad:
            raise DomainError("rom_total must equal rom_ab + rom_ad exactly")
        if self.tau_rms < 0:
            raise DomainError("tau_rms must be >= 0")
        if self.n_samples < 1:
            raise DomainError("n_samples must be >= 1")
        if not 0.0 <= self.interpolated_fraction <= 1.0:
            raise DomainError("interpolated_fraction must lie in [0, 1]")


@dataclass(frozen=True)
class RepeatabilityRecord:
    """Absolute total-ROM difference between two repeats of a condition."""

    spring: str
    posture: str
    delta_rom: float  # deg

    def __post_init__(self):
        if self.delta_rom < 0:
            raise DomainError("delta_rom must be >= 0")


@dataclass(frozen=True)
class FriedmanResult:
    chi2: float
    p_value: float
    df: int


@dataclass(frozen=True)
class LikertResponse:
    """One questionnaire answer on the 10-point discomfort/burden scale."""

    participant: str
    item: str
    score: int

    def __post_init__(self):
        if self.item not in LIKERT_ITEMS:
            raise DomainError(f"item must be one of {LIKERT_ITEMS}, got {self.item!r}")
        if int(self.score) != self.score or not 1 <= self.score <= 10:
            raise DomainError(f"score must be an integer in [1, 10], got {self.score}")


# ---------------------------------------------------------------------------
# cleaning
# ---------------------------------------------------------------------------

def clean_interpolate(log: TrialLog,
                      angle_bounds: tuple = DEFAULT_ANGLE_BOUNDS,
                      max_fraction: float = DEFAULT_MAX_INTERP_FRACTION):
    """Repair invalid samples by linear interpolation in time.

    A sample is invalid when its angle or current is non-finite or its
    angle falls outside ``angle_bounds`` (deg).  Interior invalid runs
    are filled channel-wise by linear interpolation between the nearest
    valid neighbors; invalid samples at the very start or end have no
    bracketing neighbors and are dropped instead.

    Returns ``(cleaned_log, fraction)`` where ``fraction`` is the share
    of samples that needed repair.  Raises :class:`TrialRejected` when
    the fraction exceeds ``max_fraction``.
    """
    lo, hi = angle_bounds
    if not lo < hi:
        raise DomainError(f"angle_bounds must satisfy lo < hi, got {angle_bounds}")
    angle = log.angle_deg
    current = log.current_ma
    valid = (np.isfinite(angle) & np.isfinite(current)
             & (angle >= lo) & (angle <= hi))
    n = valid.size
    n_bad = int(n - valid.sum())
    fraction = n_bad / n
    if fraction > max_fraction:
        raise TrialRejected(
            f"{fraction:.1%} of samples invalid, above the {max_fraction:.1%} limit",
            fraction)
    if n_bad == 0:
        return log, 0.0

    if not valid.any():
        raise TrialRejected("no valid samples", fraction)
    idx_valid = np.flatnonzero(valid)
    first, last = idx_valid[0], idx_valid[-1]
    keep = slice(first, last + 1)
    time = log.time[keep]
    angle = angle[keep].copy()
    current = current[keep].copy()
    bad = ~valid[keep]
    if bad.any():
        good_t = time[~bad]
        angle[bad] = np.interp(time[bad], good_t, angle[~bad])
        current[bad] = np.interp(time[bad], good_t, current[~bad])
    cleaned = TrialLog(time, angle, current, log.button[keep], log.meta)
    return cleaned, fraction


# ---------------------------------------------------------------------------
# per-trial metrics
# ---------------------------------------------------------------------------

def rom_metrics(log: TrialLog) -> tuple:
    """(rom_ab, rom_ad, rom_total) in degrees from a cleaned angle trace.

    Abduction ROM is the peak positive excursion, adduction ROM the peak
    negative excursion magnitude; each clamps at zero when the trace
    never crosses to that side.
    """
    angle = log.angle_deg
    if not np.isfinite(angle).all():
        raise DomainError("rom_metrics needs a cleaned log (finite angles)")
    rom_ab = max(float(angle.max()), 0.0)
    rom_ad = max(-float(angle.min()), 0.0)
    return rom_ab, rom_ad, rom_ab + rom_ad


def torque_series(log: TrialLog, gear: Gearing):
    """Motor-side torque trace (t in s, tau in N*m) from logged current."""
    tau = gear.torque_constant * (log.current_ma / 1000.0)
    return log.time.copy(), tau


def rms_torque(log: TrialLog, gear: Gearing) -> float:
    """Root-mean-square motor-side torque (N*m) over the trial."""
    return float(np.sqrt(np.mean(np.square(log.current_ma / 1000.0)))
                 * gear.torque_constant)


def joint_torque_estimate(tau_motor: float, gear: Gearing) -> float:
    """Joint-side torque implied by a motor-side torque through the gearing."""
    if not math.isfinite(tau_motor) or tau_motor < 0:
        raise DomainError(f"tau_motor must be >= 0, got {tau_motor}")
    return tau_motor * gear.ratio * gear.efficiency


def trial_metrics(log: TrialLog, gear: Gearing,
                  interpolated_fraction: float = 0.0) -> TrialMetrics:
    """Bundle ROM and RMS-torque outcomes for one cleaned trial."""
    rom_ab, rom_ad, rom_total = rom_metrics(log)
    return TrialMetrics(rom_ab, rom_ad, rom_total, rms_torque(log, gear),
                        len(log), interpolated_fraction, log.meta)


def repeatability(m1: TrialMetrics, m2: TrialMetrics) -> RepeatabilityRecord:
    """|rom_total difference| between two repeats of the same condition."""
    spring = posture = ""
    if m1.meta is not None and m2.meta is not None:
        if m1.meta.condition() != m2.meta.condition():
            raise DomainError(
                f"trials are from different conditions: "
                f"{m1.meta.condition()} vs {m2.meta.condition()}")
        spring, posture = m1.meta.spring, m1.meta.posture
    elif m1.meta is not None or m2.meta is not None:
        raise DomainError("both metrics need metadata to pair, or neither")
    return RepeatabilityRecord(spring, posture, abs(m1.rom_total - m2.rom_total))


# ---------------------------------------------------------------------------
# statistics across trials
# ---------------------------------------------------------------------------

def _row_ranks(row):
    """Ascending 1-based ranks with average ranks for ties.

    Returns (ranks, tie_group_sizes).
    """
    m = len(row)
    order = sorted(range(m), key=lambda j: row[j])
    ranks = [0.0] * m
    tie_sizes = []
    i = 0
    while i < m:
        j = i
        while j + 1 < m and row[order[j + 1]] == row[order[i]]:
            j += 1
        avg = (i + j + 2) / 2.0  # average of 1-based positions i+1 .. j+1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        tie_sizes.append(j - i + 1)
        i = j + 1
    return ranks, tie_sizes


def friedman_test(data) -> FriedmanResult:
    """Friedman rank test over an n-subjects x m-conditions matrix.

    Each subject's row is ranked ascending (ties take average ranks);
    the statistic is the normalized spread of the column rank sums,
    divided by the standard tie-correction factor, and referred to a
    chi-squared distribution with m - 1 degrees of freedom.  A matrix
    whose every row is fully tied carries no ordering information and
    returns (chi2=0, p=1).
    """
    rows = [list(map(float, row)) for row in data]
    n = len(rows)
    if n < 2:
        raise DomainError(f"need at least 2 subjects, got {n}")
    m = len(rows[0])
    if m < 2:
        raise DomainError(f"need at least 2 conditions, got {m}")
    for row in rows:
        if len(row) != m:
            raise DomainError("all rows must have the same number of conditions")
        if not all(math.isfinite(v) for v in row):
            raise DomainError("matrix cells must be finite (no missing cells)")

    col_sums = [0.0] * m
    tie_sum = 0.0
    for row in rows:
        ranks, tie_sizes = _row_ranks(row)
        for j, r in enumerate(ranks):
            col_sums[j] += r
        for t in tie_sizes:
            tie_sum += t ** 3 - t

    sum_sq = sum(r * r for r in col_sums)
    chi2 = 12.0 * sum_sq / (n * m * (m + 1)) - 3.0 * n * (m + 1)
    correction = 1.0 - tie_sum / (n * (m ** 3 - m))
    df = m - 1
    if correction == 0.0:  # every row fully tied
        return FriedmanResult(0.0, 1.0, df)
    chi2 /= correction
    return FriedmanResult(chi2, chi2_survival(chi2, df), df)


def likert_summary(responses) -> dict:
    """Per-item mean and sample standard deviation of Likert scores.

    Items with no responses are simply absent.  An item with a single
    response gets sd = 0 by convention and a warning, since no spread
    can be estimated.
    """
    by_item = {}
    for resp in responses:
        by_item.setdefault(resp.item, []).append(float(resp.score))
    summary = {}
    for item in sorted(by_item):
        scores = np.sort(np.asarray(by_item[item]))
        if scores.size == 1:
            warnings.warn(f"likert item {item!r} has a single response; sd set to 0",
                          stacklevel=2)
            sd = 0.0
        else:
            sd = float(scores.std(ddof=1))
        summary[item] = {"mean": float(scores.mean()), "sd": sd, "n": int(scores.size)}
    return summary


# ---------------------------------------------------------------------------
# study-level aggregation
# ---------------------------------------------------------------------------

def _five_number(values) -> dict:
    arr = np.sort(np.asarray(values, dtype=float))
    q = np.percentile(arr, [0, 25, 50, 75, 100])
    return {"min": float(q[0]), "q1": float(q[1]), "median": float(q[2]),
            "q3": float(q[3]), "max": float(q[4]), "n": int(arr.size)}


def _mean_sd(values) -> dict:
    arr = np.sort(np.asarray(values, dtype=float))
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return {"mean": float(arr.mean()), "sd": sd, "n": int(arr.size)}


def _friedman_matrix(metrics, value_of):
    """Participant x spring matrix of per-cell means, or None if incomplete."""
    participants = sorted({m.meta.participant for m in metrics})
    springs = sorted({m.meta.spring for m in metrics})
    cells = {}
    for m in metrics:
        cells.setdefault((m.meta.participant, m.meta.spring), []).append(value_of(m))
    matrix = []
    for p in participants:
        row = []
        for s in springs:
            values = cells.get((p, s))
            if not values:
                return None, f"participant {p!r} has no {s!r} trials"
            row.append(float(np.sort(np.asarray(values)).mean()))
        matrix.append(row)
    return matrix, None


def aggregate_report(metrics, gear: Gearing, rejected=(), likert_responses=()) -> dict:
    """Reduce per-trial metrics to the study-level report structure.

    ``metrics`` must all carry metadata.  The report holds per-trial
    records (in the given order), per-spring distribution summaries,
    per-spring-and-posture repeatability of trial pairs, Friedman tests
    across springs on total ROM and RMS torque (omitted with a warning
    when the design is incomplete), Likert summaries when responses are
    given, and the list of rejected trials.
    """
    metrics = list(metrics)
    if not metrics:
        raise DomainError("no usable trials to aggregate")
    for m in metrics:
        if m.meta is None:
            raise DomainError("aggregate_report needs metadata on every trial")

    report = {"n_trials": len(metrics)}
    report["trials"] = [{
        "participant": m.meta.participant,
        "posture": m.meta.posture,
        "load": m.meta.load,
        "spring": m.meta.spring,
        "trial": m.meta.trial_index,
        "rom_ab_deg": m.rom_ab,
        "rom_ad_deg": m.rom_ad,
        "rom_total_deg": m.rom_total,
        "tau_rms_nm": m.tau_rms,
        "joint_torque_nm": joint_torque_estimate(m.tau_rms, gear),
        "n_samples": m.n_samples,
        "interpolated_fraction": m.interpolated_fraction,
    } for m in metrics]

    springs = sorted({m.meta.spring for m in metrics})
    report["rom_total_deg"] = {
        s: _five_number([m.rom_total for m in metrics if m.meta.spring == s])
        for s in springs}
    report["tau_rms_nm"] = {
        s: _five_number([m.tau_rms for m in metrics if m.meta.spring == s])
        for s in springs}

    # repeatability: pair consecutive trial indices within each condition
    by_condition = {}
    for m in metrics:
        by_condition.setdefault(m.meta.condition(), []).append(m)
    records = []
    for condition in sorted(by_condition):
        group = sorted(by_condition[condition], key=lambda m: m.meta.trial_index)
        for first, second in zip(group, group[1:]):
            records.append(repeatability(first, second))
    repeat = {}
    for s in springs:
        of_spring = [r for r in records if r.spring == s]
        if not of_spring:
            continue
        cells = {
            posture: _mean_sd([r.delta_rom for r in of_spring if r.posture == posture])
            for posture in sorted({r.posture for r in of_spring})}
        cells["overall"] = _mean_sd([r.delta_rom for r in of_spring])
        repeat[s] = cells
    report["repeatability"] = repeat

    friedman = {}
    for key, value_of in (("rom_total_deg", lambda m: m.rom_total),
                          ("tau_rms_nm", lambda m: m.tau_rms)):
        matrix, reason = _friedman_matrix(metrics, value_of)
        if matrix is None or len(matrix) < 2 or len(matrix[0]) < 2:
            reason = reason or "need at least 2 participants and 2 springs"
            warnings.warn(f"friedman test on {key} omitted: {reason}", stacklevel=2)
            friedman[key] = {"omitted": reason}
            continue
        result = friedman_test(matrix)
        friedman[key] = {"chi2": result.chi2, "p": result.p_value, "df": result.df}
    report["friedman"] = friedman

    if likert_responses:
        report["likert"] = likert_summary(likert_responses)
    report["rejected"] = [{"file": name, "reason": reason} for name, reason in rejected]
    return report
