"""Toolkit configuration: INI-style text with strict validation.

The file is plain ``key = value`` lines under ``[section]`` headers
(read with :mod:`configparser`), chosen so configs diff cleanly and
need no extra dependencies.  Every key has a built-in default; unknown
sections or keys are rejected rather than ignored, so typos fail loudly
at load time.  Angles are written in degrees in the file (matching how
the hardware and protocol are described) and converted to radians here.
"""

import configparser
import math
from dataclasses import dataclass
from pathlib import Path

from .biomech import (BodySegment, KinematicConvention, LoadSpec, MotionProfile,
                      hand_mass_from_body, posture_presets)
from .errors import ConfigError, DataError, DomainError
from .springs import DEFAULT_CATALOG
from .transmission import CableRoute, Gearing
from . import fileio

# Defaults model a ~95 kg adult male arm holding a 0.5 kg object; the
# proximal segments only pose the chain, so only their geometry matters.
DEFAULTS = {
    "segments": {
        "upper_arm_mass_kg": "2.66",
        "upper_arm_length_m": "0.28",
        "upper_arm_com_ratio": "0.44",
        "forearm_mass_kg": "1.54",
        "forearm_length_m": "0.27",
        "forearm_com_ratio": "0.43",
        "hand_mass_kg": "0.6175",
        "hand_length_m": "0.19",
        "hand_com_ratio": "0.5",
        "body_mass_kg": "",        # optional: derive hand mass when set
        "sex": "",                 # male | female, required with body_mass_kg
        "hand_mass_fraction": "",  # optional override of the sex-based fraction
    },
    "kinematics": {
        "axis_obliquity_deg": "50",
        "grip_extension_deg": "20",
        "carrying_angle_deg": "10",
        "gravity_m_s2": "9.81",
    },
    "postures": {
        "p1_shoulder_deg": "30", "p1_elbow_deg": "60", "p1_pronation_deg": "90",
        "p2_shoulder_deg": "45", "p2_elbow_deg": "60", "p2_pronation_deg": "0",
        "p3_shoulder_deg": "75", "p3_elbow_deg": "120", "p3_pronation_deg": "45",
    },
    "motion": {
        "mean_deg": "-7",
        "amplitude_deg": "37",
        "period_s": "4.0",
        "min_angle_deg": "-44",
        "max_angle_deg": "30",
    },
    "load": {
        "handheld_mass_kg": "0.5",
        "grip_offset_m": "0.08",
    },
    "transmission": {
        "lever_radius_m": "0.025",
        "friction_mu": "0.04",
        "wrap_angle_rad": str(math.pi),
        "gear_ratio": "128",
        "efficiency": "0.78",
        "torque_constant_nm_per_a": "0.0105",
    },
    "springs": {
        "catalog_path": "",   # optional CSV; empty = built-in catalog
        "pre_wind_rad": "",   # optional installation wind-up
    },
    "analysis": {
        "angle_min_deg": "-60",
        "angle_max_deg": "45",
        "max_interpolated_fraction": "0.05",
    },
}

_ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class ToolkitConfig:
    """Everything the pipeline needs, validated and in SI units."""

    segments: dict
    convention: KinematicConvention
    gravity: float
    postures: dict
    motion: MotionProfile
    load: LoadSpec
    route: CableRoute
    gearing: Gearing
    catalog: tuple
    pre_wind: float | None
    angle_bounds: tuple
    max_interpolated_fraction: float


def _read_ini(path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    parser.read_dict(DEFAULTS)
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            with path.open(encoding="utf-8") as handle:
                parser.read_file(handle)
        except (configparser.Error, OSError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        user = configparser.ConfigParser(interpolation=None)
        with path.open(encoding="utf-8") as handle:
            user.read_file(handle)
        for section in user.sections():
            if section not in DEFAULTS:
                raise ConfigError(f"{path}: unknown config section [{section}]")
            for key in user[section]:
                if key not in DEFAULTS[section]:
                    raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
    return parser


def _get_float(parser, section, key) -> float:
    raw = parser.get(section, key)
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} must be a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"[{section}] {key} must be finite, got {raw!r}")
    return value


def _get_optional_float(parser, section, key) -> float | None:
    raw = parser.get(section, key).strip()
    if not raw:
        return None
    return _get_float(parser, section, key)


def load_config(path=None) -> ToolkitConfig:
    """Load and validate a config file; ``None`` gives pure defaults.

    Relative paths inside the file (the spring catalog) resolve against
    the config file's own directory.
    """
    parser = _read_ini(path)
    base_dir = Path(path).parent if path is not None else Path.cwd()
    try:
        return _build(parser, base_dir)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _build(parser, base_dir) -> ToolkitConfig:
    sec = "segments"
    hand_mass = _get_float(parser, sec, "hand_mass_kg")
    body_mass = _get_optional_float(parser, sec, "body_mass_kg")
    if body_mass is not None:
        sex = parser.get(sec, "sex").strip()
        fraction = _get_optional_float(parser, sec, "hand_mass_fraction")
        if not sex and fraction is None:
            raise ConfigError("[segments] body_mass_kg needs sex or hand_mass_fraction")
        hand_mass = hand_mass_from_body(body_mass, sex, fraction)
    segments = {
        name: BodySegment(
            name,
            hand_mass if name == "hand" else _get_float(parser, sec, f"{name}_mass_kg"),
            _get_float(parser, sec, f"{name}_length_m"),
            _get_float(parser, sec, f"{name}_com_ratio"),
        )
        for name in ("upper_arm", "forearm", "hand")
    }

    convention = KinematicConvention(
        axis_obliquity=math.radians(_get_float(parser, "kinematics", "axis_obliquity_deg")),
        grip_extension=math.radians(_get_float(parser, "kinematics", "grip_extension_deg")),
        carrying_angle=math.radians(_get_float(parser, "kinematics", "carrying_angle_deg")),
    )
    gravity = _get_float(parser, "kinematics", "gravity_m_s2")
    if gravity <= 0:
        raise ConfigError("[kinematics] gravity_m_s2 must be > 0")

    presets = posture_presets(math.radians(_get_float(parser, "postures", "p3_pronation_deg")))
    postures = {}
    for label, default in presets.items():
        key = label.lower()
        postures[label] = type(default)(
            math.radians(_get_float(parser, "postures", f"{key}_shoulder_deg")),
            math.radians(_get_float(parser, "postures", f"{key}_elbow_deg")),
            math.radians(_get_float(parser, "postures", f"{key}_pronation_deg")),
            label,
        )

    motion = MotionProfile(
        mean_angle=math.radians(_get_float(parser, "motion", "mean_deg")),
        amplitude=math.radians(_get_float(parser, "motion", "amplitude_deg")),
        period=_get_float(parser, "motion", "period_s"),
    )
    limit_lo = math.radians(_get_float(parser, "motion", "min_angle_deg"))
    limit_hi = math.radians(_get_float(parser, "motion", "max_angle_deg"))
    if not limit_lo < limit_hi:
        raise ConfigError("[motion] min_angle_deg must be below max_angle_deg")
    lo, hi = motion.angle_range()
    if lo < limit_lo - _ANGLE_TOL or hi > limit_hi + _ANGLE_TOL:
        raise ConfigError(
            f"[motion] cycle spans [{math.degrees(lo):.2f}, {math.degrees(hi):.2f}] deg, "
            f"outside the joint limits [{math.degrees(limit_lo):.2f}, "
            f"{math.degrees(limit_hi):.2f}] deg")

    load = LoadSpec(
        handheld_mass=_get_float(parser, "load", "handheld_mass_kg"),
        grip_offset=_get_float(parser, "load", "grip_offset_m"),
    )
    route = CableRoute(
        lever_radius=_get_float(parser, "transmission", "lever_radius_m"),
        friction_mu=_get_float(parser, "transmission", "friction_mu"),
        wrap_angle=_get_float(parser, "transmission", "wrap_angle_rad"),
    )
    gearing = Gearing(
        ratio=_get_float(parser, "transmission", "gear_ratio"),
        efficiency=_get_float(parser, "transmission", "efficiency"),
        torque_constant=_get_float(parser, "transmission", "torque_constant_nm_per_a"),
    )

    catalog_path = parser.get("springs", "catalog_path").strip()
    if catalog_path:
        resolved = Path(catalog_path)
        if not resolved.is_absolute():
            resolved = base_dir / resolved
        if not resolved.is_file():
            raise ConfigError(f"[springs] catalog_path not found: {resolved}")
        try:
            catalog = fileio.read_spring_catalog(resolved)
        except DataError as exc:
            raise ConfigError(str(exc)) from exc
    else:
        catalog = DEFAULT_CATALOG
    pre_wind = _get_optional_float(parser, "springs", "pre_wind_rad")

    angle_bounds = (_get_float(parser, "analysis", "angle_min_deg"),
                    _get_float(parser, "analysis", "angle_max_deg"))
    if not angle_bounds[0] < angle_bounds[1]:
        raise ConfigError("[analysis] angle_min_deg must be below angle_max_deg")
    max_fraction = _get_float(parser, "analysis", "max_interpolated_fraction")
    if not 0.0 <= max_fraction <= 1.0:
        raise ConfigError("[analysis] max_interpolated_fraction must lie in [0, 1]")

    return ToolkitConfig(segments, convention, gravity, postures, motion, load,
                         route, gearing, catalog, pre_wind, angle_bounds, max_fraction)
