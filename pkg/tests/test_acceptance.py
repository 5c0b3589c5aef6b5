"""Release gate: one test per top-level guarantee of the toolkit.

Golden numbers for the spring-sizing workflow, closed-form identities
for the cable drive, statistical reference values, and byte-level
determinism of the analysis pipeline.  Tolerances here are contractual;
do not loosen them to make a change pass.
"""

import json
import math
import random

import numpy as np
import pytest
from pytest import approx

import corpus
import oracles
from wristkit import biomech, cli, fileio, springs, stats, transmission, trials
from wristkit.biomech import TorqueCurve
from wristkit.config import load_config
from wristkit.errors import TrialRejected


@pytest.fixture(scope="module")
def analyze_report_bytes(corpus_dir, tmp_path_factory):
    """First full `analyze` run over the fixture corpus, raw bytes."""
    out = tmp_path_factory.mktemp("analysis_first") / "report.json"
    assert cli.main(["analyze", str(corpus_dir), "--out", str(out)]) == 0
    return out.read_bytes()


def test_spring_derivation_from_sampled_torque_line():
    angles = np.linspace(math.radians(-44.0), math.radians(30.0), 50)
    moments = -0.7054 * angles + 0.4157
    fit = springs.fit_linear(TorqueCurve(angles, moments))
    spring = springs.derive_spring(fit)
    assert spring.stiffness == approx(0.7054, abs=1e-9)
    assert springs.stiffness_to_nmm_per_deg(spring.stiffness) == approx(12.32, abs=0.10)
    assert spring.neutral_angle == approx(0.589, abs=0.005)


def test_catalog_match_for_required_stiffness():
    selection = springs.catalog_match(12.32)
    assert selection.nominal.name == "S2"
    assert selection.softer is not None and selection.softer.name == "S1"
    assert selection.stiffer is not None and selection.stiffer.name == "S3"


def test_chi2_survival_reference_values():
    assert stats.chi2_survival(2.8, 2) == approx(0.2466, abs=1e-3)
    assert stats.chi2_survival(1.2, 2) == approx(0.5488, abs=1e-3)


def test_friedman_unanimous_ranking_is_exact():
    # five subjects all order the three conditions the same way
    data = [(3.0, 2.0, 1.0)] * 5
    result = trials.friedman_test(data)
    assert result.chi2 == 10.0
    assert result.df == 2
    assert result.p_value == approx(math.exp(-5.0), abs=1e-6)


def test_rms_current_to_joint_torque_chain():
    gear = transmission.Gearing()
    n = 600
    log = trials.TrialLog(np.arange(n) / 100.0, np.zeros(n),
                          np.full(n, 476.0), [""] * n)
    tau_rms = trials.rms_torque(log, gear)
    assert tau_rms == approx(4.998e-3, rel=1e-9)
    joint = trials.joint_torque_estimate(tau_rms, gear)
    assert abs(joint - 0.5) / 0.5 <= 0.05
    assert joint == approx(0.499, abs=5e-4)
    ideal = trials.joint_torque_estimate(tau_rms, transmission.Gearing(efficiency=1.0))
    assert ideal == approx(0.640, abs=1e-3)


def test_capstan_identities_composition_and_reference():
    no_wrap = transmission.CableRoute(wrap_angle=0.0)
    no_friction = transmission.CableRoute(friction_mu=0.0)
    for direction in transmission.CAPSTAN_DIRECTIONS:
        assert transmission.capstan_transmit(87.3, no_wrap, direction) == 87.3
        assert transmission.capstan_transmit(87.3, no_friction, direction) == 87.3

    rng = random.Random(2024)
    for _ in range(200):
        mu = rng.uniform(0.0, 0.3)
        a = rng.uniform(0.0, math.pi)
        b = rng.uniform(0.0, math.pi)
        force = rng.uniform(1.0, 200.0)
        whole = transmission.capstan_transmit(
            force, transmission.CableRoute(friction_mu=mu, wrap_angle=a + b), "opposing")
        split = transmission.capstan_transmit(
            transmission.capstan_transmit(
                force, transmission.CableRoute(friction_mu=mu, wrap_angle=a), "opposing"),
            transmission.CableRoute(friction_mu=mu, wrap_angle=b), "opposing")
        assert split == approx(whole, rel=1e-12)

    out = transmission.capstan_transmit(100.0, transmission.CableRoute(), "opposing")
    assert out == approx(113.39, abs=0.01)
    assert out == approx(oracles.capstan(100.0, 0.04, math.pi, True), rel=1e-12)


def test_rom_matches_exhaustive_scan_and_components_sum(corpus_dir):
    rng = random.Random(7)
    for _ in range(1000):
        n = rng.randint(1, 40)
        angles = [rng.uniform(-60.0, 45.0) for _ in range(n)]
        log = trials.TrialLog(np.arange(n, dtype=float), np.array(angles),
                              np.zeros(n), [""] * n)
        assert trials.rom_metrics(log) == oracles.rom_scan(angles)

    n_checked = 0
    for path in sorted(corpus_dir.iterdir()):
        meta = fileio.parse_trial_filename(path.name)
        if meta is None:
            continue
        try:
            cleaned, _ = trials.clean_interpolate(fileio.read_trial_log(path, meta))
        except TrialRejected:
            continue
        rom_ab, rom_ad, rom_total = trials.rom_metrics(cleaned)
        assert rom_total == rom_ab + rom_ad
        n_checked += 1
    assert n_checked == 180


def test_posture_sweeps_near_linear_with_p3_worst_case():
    cfg = load_config()
    curves = [
        biomech.sweep_torque_curve(cfg.segments, posture, cfg.motion, cfg.load,
                                   g=cfg.gravity, convention=cfg.convention)
        for posture in cfg.postures.values()
    ]
    for curve in curves:
        assert springs.fit_linear(curve).r_squared >= 0.9
    assert springs.worst_case_select(curves).posture_label == "P3"


def test_noisy_fit_matches_normal_equations_within_two_percent():
    rng = random.Random(41)
    true_slope, true_intercept = -0.7054, 0.4157
    xs = [-0.7 + 1.3 * i / 99 for i in range(100)]
    ys = [true_slope * x + true_intercept + rng.gauss(0.0, 0.01) for x in xs]
    fit = springs.fit_linear(TorqueCurve(np.array(xs), np.array(ys)))
    oracle_slope, oracle_intercept = oracles.ols_cramer(xs, ys)
    assert fit.slope == approx(oracle_slope, rel=1e-9)
    assert fit.intercept == approx(oracle_intercept, rel=1e-9)
    assert fit.slope == approx(true_slope, rel=0.02)
    assert fit.intercept == approx(true_intercept, rel=0.02)


def test_gap_repair_midpoint_and_rejection_reporting(corpus_dir, analyze_report_bytes):
    n = 40
    t = np.arange(float(n))
    angle = np.linspace(-10.0, 29.0, n)
    current = np.full(n, 250.0)
    angle[17] = np.nan
    cleaned, fraction = trials.clean_interpolate(
        trials.TrialLog(t, angle, current, [""] * n))
    assert fraction == 1.0 / n
    assert cleaned.angle_deg[17] == 7.0  # exact midpoint of the 6.0/8.0 neighbors
    assert cleaned.current_ma[17] == 250.0

    bad = np.linspace(-10.0, 29.0, n)
    bad[5:9] = np.nan  # 10% invalid, above the 5% limit
    with pytest.raises(TrialRejected) as excinfo:
        trials.clean_interpolate(trials.TrialLog(t, bad, current, [""] * n))
    assert excinfo.value.fraction == approx(0.10)
    assert "above the 5.0% limit" in str(excinfo.value)

    meta = fileio.parse_trial_filename(corpus.REJECTED_NAME)
    log = fileio.read_trial_log(corpus_dir / corpus.REJECTED_NAME, meta)
    with pytest.raises(TrialRejected) as rejected:
        trials.clean_interpolate(log)
    assert str(rejected.value) == corpus.REJECTED_REASON

    report = json.loads(analyze_report_bytes)
    assert {"file": corpus.REJECTED_NAME,
            "reason": corpus.REJECTED_REASON} in report["rejected"]


def test_analyze_deterministic_and_matches_ground_truth(
        corpus_dir, analyze_report_bytes, expected_report_text, tmp_path):
    second = tmp_path / "report.json"
    assert cli.main(["analyze", str(corpus_dir), "--out", str(second)]) == 0
    assert second.read_bytes() == analyze_report_bytes
    assert analyze_report_bytes.decode("utf-8") == expected_report_text
