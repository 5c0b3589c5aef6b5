import json
import math

import numpy as np
import pytest

from wristkit.biomech import TorqueCurve
from wristkit.errors import DataError
from wristkit import fileio

import corpus


def test_torque_curve_round_trip(tmp_path):
    curve = TorqueCurve(np.linspace(-0.77, 0.52, 50),
                        np.sin(np.linspace(-0.77, 0.52, 50)) * 0.3, "P2")
    path = tmp_path / "curve.csv"
    fileio.write_torque_curve(path, curve)
    back = fileio.read_torque_curve(path, "P2")
    assert np.array_equal(back.angles, curve.angles)
    assert np.array_equal(back.moments, curve.moments)
    assert back.posture_label == "P2"


def test_torque_curve_header_and_parse_errors(tmp_path):
    bad_header = tmp_path / "h.csv"
    bad_header.write_text("theta,torque\n0,0.1\n")
    with pytest.raises(DataError, match="h.csv:1"):
        fileio.read_torque_curve(bad_header)

    bad_value = tmp_path / "v.csv"
    bad_value.write_text("angle_rad,moment_Nm\n0.0,0.1\noops,0.2\n")
    with pytest.raises(DataError, match="v.csv:3"):
        fileio.read_torque_curve(bad_value)

    empty = tmp_path / "e.csv"
    empty.write_text("")
    with pytest.raises(DataError, match="empty"):
        fileio.read_torque_curve(empty)

    unordered = tmp_path / "u.csv"
    unordered.write_text("angle_rad,moment_Nm\n0.5,0.1\n0.2,0.2\n")
    with pytest.raises(DataError, match="increasing"):
        fileio.read_torque_curve(unordered)

    with pytest.raises(DataError):
        fileio.read_torque_curve(tmp_path / "missing.csv")


def test_spring_catalog(tmp_path):
    path = tmp_path / "catalog.csv"
    path.write_text("name,stiffness_Nmm_per_deg\nS1,10.66\nS2,11.71\nS3,13.2\n")
    entries = fileio.read_spring_catalog(path)
    assert [e.name for e in entries] == ["S1", "S2", "S3"]
    assert entries[2].stiffness == 13.2

    path.write_text("name,stiffness_Nmm_per_deg\nS1,-4\n")
    with pytest.raises(DataError, match="catalog.csv:2"):
        fileio.read_spring_catalog(path)

    path.write_text("name,stiffness_Nmm_per_deg\n")
    with pytest.raises(DataError, match="no entries"):
        fileio.read_spring_catalog(path)


def test_parse_trial_filename():
    meta = fileio.parse_trial_filename("P1_POS1_loaded_300g_S1_T3.csv")
    assert meta is not None
    assert meta.participant == "P1"
    assert meta.posture == "POS1"
    assert meta.load == "loaded_300g"
    assert meta.spring == "S1"
    assert meta.trial_index == 3

    meta = fileio.parse_trial_filename("P12_POS2_unloaded_S3_T1.csv")
    assert meta is not None and meta.participant == "P12" and meta.spring == "S3"

    for name in ("likert.csv", "report.json", "P1_POS1_S1_T1.csv",
                 "P1_POS1_heavy_S1_T1.csv", "P1_POSX_unloaded_S1_T1.csv",
                 "P1_POS1_unloaded_S1_T0.csv"):
        assert fileio.parse_trial_filename(name) is None


def test_read_trial_log(tmp_path):
    path = tmp_path / "P1_POS1_unloaded_S1_T1.csv"
    path.write_text("t_s,angle_deg,current_mA,button\n"
                    "0,-1.5,100,B2\n"
                    "0.01,,110,\n"
                    "0.02,3.5,,B4\n")
    log = fileio.read_trial_log(path, fileio.parse_trial_filename(path.name))
    assert list(log.time) == [0.0, 0.01, 0.02]
    assert log.angle_deg[0] == -1.5 and math.isnan(log.angle_deg[1])
    assert math.isnan(log.current_ma[2])
    assert log.button == ("B2", "", "B4")
    assert log.meta.participant == "P1"


def test_read_trial_log_errors(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("t_s,angle_deg,current_mA,button\n0,1,2,B7\n")
    with pytest.raises(DataError, match="button"):
        fileio.read_trial_log(path)
    path.write_text("t_s,angle_deg,current_mA,button\n")
    with pytest.raises(DataError, match="no samples"):
        fileio.read_trial_log(path)
    path.write_text("t_s,angle_deg,current_mA,button\n0,1,2\n")
    with pytest.raises(DataError, match="t.csv:2"):
        fileio.read_trial_log(path)
    path.write_text("t_s,angle_deg,current_mA,button\n0.02,1,2,\n0.01,1,2,\n")
    with pytest.raises(DataError, match="increasing"):
        fileio.read_trial_log(path)


def test_trial_log_round_trip(tmp_path):
    src = tmp_path / "P3_POS2_unloaded_S2_T1.csv"
    angle, current, buttons = corpus._trace_cents(5000, 420)
    src.write_text(corpus._csv_text(angle, current, buttons, missing=(150,)))
    log = fileio.read_trial_log(src, fileio.parse_trial_filename(src.name))
    dst = tmp_path / "copy.csv"
    fileio.write_trial_log(dst, log)
    again = fileio.read_trial_log(dst)
    assert np.array_equal(log.time, again.time)
    assert np.array_equal(log.angle_deg, again.angle_deg, equal_nan=True)
    assert np.array_equal(log.current_ma, again.current_ma, equal_nan=True)
    assert log.button == again.button


def test_likert_reader(tmp_path):
    path = tmp_path / "likert.csv"
    path.write_text("participant,item,score\nP1,size,3\nP2,weight,7\n")
    responses = fileio.read_likert_responses(path)
    assert len(responses) == 2
    assert responses[1].item == "weight" and responses[1].score == 7
    path.write_text("participant,item,score\nP1,size,high\n")
    with pytest.raises(DataError, match="likert.csv:2"):
        fileio.read_likert_responses(path)
    path.write_text("participant,item,score\nP1,size,12\n")
    with pytest.raises(DataError, match="likert.csv:2"):
        fileio.read_likert_responses(path)


def test_report_rendering_is_deterministic(tmp_path):
    report = {"b": 1.23456789, "a": {"z": [0.1, 2.0]}, "n": 3}
    text1 = fileio.render_report(report)
    text2 = fileio.render_report(json.loads(text1))
    assert text1 == text2
    assert json.loads(text1)["b"] == 1.23457  # six significant digits
    path = tmp_path / "r.json"
    fileio.write_report(path, report)
    assert fileio.read_report(path) == json.loads(text1)
    path.write_text("not json")
    with pytest.raises(DataError, match="malformed"):
        fileio.read_report(path)
    path.write_text("[1, 2]")
    with pytest.raises(DataError, match="object"):
        fileio.read_report(path)


def test_float_rounding_examples():
    rendered = fileio.render_report({
        "x": 0.7975034567, "y": 123456.789, "tiny": 1.2345678e-7, "i": 42})
    data = json.loads(rendered)
    assert data["x"] == 0.797503
    assert data["y"] == 123457.0
    assert data["tiny"] == 1.23457e-7
    assert data["i"] == 42 and isinstance(data["i"], int)


def test_plot_csvs(tmp_path):
    report = {
        "rom_total_deg": {"S1": {"min": 40.0, "q1": 45.0, "median": 50.0,
                                 "q3": 55.0, "max": 60.0, "n": 10}},
        "tau_rms_nm": {"S1": {"min": 0.001, "q1": 0.002, "median": 0.003,
                              "q3": 0.004, "max": 0.005, "n": 10}},
        "repeatability": {"S1": {"POS1": {"mean": 2.5, "sd": 0.5, "n": 5},
                                 "overall": {"mean": 2.5, "sd": 0.5, "n": 5}}},
    }
    written = fileio.write_plot_csvs(report, tmp_path / "plots")
    assert [p.name for p in written] == ["rom_boxplot.csv", "torque_boxplot.csv",
                                         "repeatability.csv"]
    rom_text = (tmp_path / "plots" / "rom_boxplot.csv").read_text()
    assert rom_text.splitlines()[0] == "spring,min,q1,median,q3,max,n"
    assert rom_text.splitlines()[1] == "S1,40,45,50,55,60,10"
    rep_text = (tmp_path / "plots" / "repeatability.csv").read_text()
    assert rep_text.splitlines()[1] == "S1,POS1,2.5,0.5,5"
    assert rep_text.splitlines()[2] == "S1,overall,2.5,0.5,5"
