"""Scenario configuration: one INI file wiring world, robot, pilot, fuzzy.

Every key is optional; anything omitted uses the stock value, so the file
can be as short as a map name.  Section reference:

    [scenario] map duration_limit seed output_dir
    [robot]    body_radius speed_forward speed_turn battery sonar_jitter
               sonar_left sonar_front sonar_right   (offset half_width rays)
               hms_left hms_right                   (offset half_field range)
    [pilot]    wall_setpoint wall_deadband follow_turn_step straight_step
               avoid_deadband end_detect_count end_turn
    [fuzzy]    grid_step input_range output_range input_term.* output_term.*
               rule.FRONT.RIGHT
    [center]   endpoint telemetry_hz video_hz buffer linger
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..fuzzy import FuzzyConfig, default_fuzzy_config, fuzzy_config_from_mapping
from ..pilot import PilotConfig
from ..worldsim import (
    HmsMount,
    Pose,
    RobotState,
    SonarMount,
    WorldMap,
    bundled_map_path,
    load_map,
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RobotConfig:
    body_radius: float = 18.0
    speed_forward: float = 10.0
    speed_turn: float = 30.0
    battery: float = 5400.0
    sonar_jitter: bool = False
    sonar_mounts: tuple[SonarMount, ...] = (
        SonarMount(-65.0, 20.0, 9),
        SonarMount(0.0, 20.0, 9),
        SonarMount(60.0, 20.0, 9),
    )
    hms_mounts: tuple[HmsMount, ...] = (
        HmsMount(-45.0, 60.0, 150.0),
        HmsMount(45.0, 60.0, 150.0),
    )

    def initial_state(self, world: WorldMap) -> RobotState:
        x, y, heading = world.start_pose
        return RobotState(
            pose=Pose(x, y, heading),
            body_radius=self.body_radius,
            battery_remaining=self.battery,
            speed_forward=self.speed_forward,
            speed_turn=self.speed_turn,
            sonar_mounts=self.sonar_mounts,
            hms_mounts=self.hms_mounts,
        )


@dataclass(frozen=True)
class CenterConfig:
    endpoint: str | None = None  # "host:port" enables the agent link
    telemetry_hz: float = 10.0
    video_hz: float = 15.0
    buffer: int = 256
    linger: bool = False  # keep serving after the mission ends


@dataclass(frozen=True)
class ScenarioConfig:
    map_ref: str = "corridor_g2"
    duration_limit: float = 1500.0
    seed: int = 0
    output_dir: Path = Path("runs/latest")
    robot: RobotConfig = field(default_factory=RobotConfig)
    pilot: PilotConfig = field(default_factory=PilotConfig)
    fuzzy: FuzzyConfig = field(default_factory=default_fuzzy_config)
    center: CenterConfig = field(default_factory=CenterConfig)
    base_dir: Path = field(default_factory=Path.cwd, compare=False)

    def __post_init__(self):
        if not self.duration_limit > 0:
            raise ConfigError("duration_limit must be positive")

    def map_path(self) -> Path:
        candidate = Path(self.map_ref)
        if not candidate.is_absolute():
            local = self.base_dir / candidate
            if local.exists():
                return local
        if candidate.exists():
            return candidate
        try:
            return bundled_map_path(self.map_ref)
        except FileNotFoundError:
            raise ConfigError(f"map not found: {self.map_ref!r}") from None

    def load_world(self) -> WorldMap:
        return load_map(self.map_path())


def default_scenario_config(**overrides) -> ScenarioConfig:
    return replace(ScenarioConfig(), **overrides) if overrides else ScenarioConfig()


def _mount3(value: str, key: str) -> tuple[float, float, int]:
    parts = value.split()
    if len(parts) != 3:
        raise ConfigError(f"{key}: expected 'offset half_width rays'")
    return float(parts[0]), float(parts[1]), int(parts[2])


def _hms3(value: str, key: str) -> tuple[float, float, float]:
    parts = value.split()
    if len(parts) != 3:
        raise ConfigError(f"{key}: expected 'offset half_field range'")
    return float(parts[0]), float(parts[1]), float(parts[2])


def load_scenario_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(path.read_text(encoding="utf-8"), source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return scenario_config_from_parser(parser, base_dir=path.parent)


def scenario_config_from_parser(
    parser: configparser.ConfigParser, base_dir: Path
) -> ScenarioConfig:
    def section(name: str) -> dict[str, str]:
        return dict(parser[name]) if parser.has_section(name) else {}

    sc = section("scenario")
    rb = section("robot")
    pl = section("pilot")
    fz = section("fuzzy")
    ct = section("center")

    robot_defaults = RobotConfig()
    sonar = list(robot_defaults.sonar_mounts)
    for i, key in enumerate(("sonar_left", "sonar_front", "sonar_right")):
        if key in rb:
            off, half, rays = _mount3(rb.pop(key), key)
            sonar[i] = SonarMount(off, half, rays)
    hms = list(robot_defaults.hms_mounts)
    for i, key in enumerate(("hms_left", "hms_right")):
        if key in rb:
            off, half, rng = _hms3(rb.pop(key), key)
            hms[i] = HmsMount(off, half, rng)
    robot = RobotConfig(
        body_radius=float(rb.pop("body_radius", robot_defaults.body_radius)),
        speed_forward=float(rb.pop("speed_forward", robot_defaults.speed_forward)),
        speed_turn=float(rb.pop("speed_turn", robot_defaults.speed_turn)),
        battery=float(rb.pop("battery", robot_defaults.battery)),
        sonar_jitter=rb.pop("sonar_jitter", "0").strip() not in ("0", "", "false"),
        sonar_mounts=tuple(sonar),
        hms_mounts=tuple(hms),
    )
    if rb:
        raise ConfigError(f"unknown [robot] keys: {sorted(rb)}")

    pilot_defaults = PilotConfig()
    known = {
        "wall_setpoint": float, "wall_deadband": float, "follow_turn_step": float,
        "straight_step": float, "avoid_deadband": float,
        "end_detect_count": int, "end_turn": float,
    }
    kwargs = {}
    for key, conv in known.items():
        if key in pl:
            kwargs[key] = conv(pl.pop(key))
    if pl:
        raise ConfigError(f"unknown [pilot] keys: {sorted(pl)}")
    pilot = replace(pilot_defaults, **kwargs)

    fuzzy = fuzzy_config_from_mapping(fz) if fz else default_fuzzy_config()

    center = CenterConfig(
        endpoint=ct.get("endpoint", "").strip() or None,
        telemetry_hz=float(ct.get("telemetry_hz", 10.0)),
        video_hz=float(ct.get("video_hz", 15.0)),
        buffer=int(ct.get("buffer", 256)),
        linger=ct.get("linger", "0").strip() not in ("0", "", "false"),
    )

    return ScenarioConfig(
        map_ref=sc.get("map", "corridor_g2"),
        duration_limit=float(sc.get("duration_limit", 1500.0)),
        seed=int(sc.get("seed", 0)),
        output_dir=Path(sc.get("output_dir", "runs/latest")),
        robot=robot,
        pilot=pilot,
        fuzzy=fuzzy,
        center=center,
        base_dir=base_dir,
    )


def describe_config(cfg: ScenarioConfig) -> list[tuple[str, str]]:
    """Flat (section.key, value) pairs that fully determine a run.

    Embedded into trace headers so a replay can rebuild the exact setup.
    """
    out: list[tuple[str, str]] = [
        ("scenario.map", str(cfg.map_path())),
        ("scenario.duration_limit", repr(cfg.duration_limit)),
        ("scenario.seed", repr(cfg.seed)),
    ]
    r = cfg.robot
    out += [
        ("robot.body_radius", repr(r.body_radius)),
        ("robot.speed_forward", repr(r.speed_forward)),
        ("robot.speed_turn", repr(r.speed_turn)),
        ("robot.battery", repr(r.battery)),
        ("robot.sonar_jitter", "1" if r.sonar_jitter else "0"),
    ]
    for name, m in zip(("sonar_left", "sonar_front", "sonar_right"), r.sonar_mounts):
        out.append((f"robot.{name}",
                    f"{m.offset_deg!r} {m.half_width_deg!r} {m.rays}"))
    for name, m in zip(("hms_left", "hms_right"), r.hms_mounts):
        out.append((f"robot.{name}",
                    f"{m.offset_deg!r} {m.half_field_deg!r} {m.range_cm!r}"))
    p = cfg.pilot
    out += [
        ("pilot.wall_setpoint", repr(p.wall_setpoint)),
        ("pilot.wall_deadband", repr(p.wall_deadband)),
        ("pilot.follow_turn_step", repr(p.follow_turn_step)),
        ("pilot.straight_step", repr(p.straight_step)),
        ("pilot.avoid_deadband", repr(p.avoid_deadband)),
        ("pilot.end_detect_count", repr(p.end_detect_count)),
        ("pilot.end_turn", repr(p.end_turn)),
    ]
    f = cfg.fuzzy
    out.append(("fuzzy.grid_step", repr(f.grid_step)))
    out.append(("fuzzy.input_range", f"{f.front.universe[0]!r} {f.front.universe[1]!r}"))
    out.append(("fuzzy.output_range", f"{f.turn.universe[0]!r} {f.turn.universe[1]!r}"))
    for term, mf in f.front.terms.items():
        shape = "tri" if len(mf.breakpoints) == 3 else "trap"
        pts = " ".join(repr(b) for b in mf.breakpoints)
        out.append((f"fuzzy.input_term.{term}", f"{shape} {pts}"))
    for term, mf in f.turn.terms.items():
        shape = "tri" if len(mf.breakpoints) == 3 else "trap"
        pts = " ".join(repr(b) for b in mf.breakpoints)
        out.append((f"fuzzy.output_term.{term}", f"{shape} {pts}"))
    for rule in f.rules.rules:
        out.append((f"fuzzy.rule.{rule.front}.{rule.right}", rule.turn))
    return out


def config_from_pairs(pairs: list[tuple[str, str]]) -> ScenarioConfig:
    """Rebuild a ScenarioConfig from describe_config() output."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    for key, value in pairs:
        section, option = key.split(".", 1)
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, option, value)
    return scenario_config_from_parser(parser, base_dir=Path.cwd())
