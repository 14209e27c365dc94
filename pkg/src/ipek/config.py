"""Scenario configuration and its JSON file format."""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from ipek.context import DEFAULT_IGNORE_RADIUS, ScheduleParams
from ipek.dst import FusionConfig
from ipek.local_trust import TrustParams

SCHEMES = ("ipek", "symmetric_baseline")


class ConfigError(ValueError):
    """Invalid scenario configuration; names the offending field."""

    def __init__(self, field_name: str, message: str, line: Optional[int] = None):
        self.field = field_name
        self.reason = message
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{field_name}{where}: {message}")


@dataclass(frozen=True)
class ScenarioConfig:
    n_vehicles: int = 150
    grid_size: float = 4000.0
    n_events: int = 40
    attacker_ratio: float = 0.15
    event_aware_share: float = 0.5  # rest are location-aware
    theta_event: float = 0.6
    theta_location: float = 0.4
    collusion_low: float = 0.1
    collusion_high: float = 0.9
    gt_update_interval: float = 50.0
    sim_duration: float = 2400.0
    dt: float = 1.0
    seed: int = 0
    scheme: str = "ipek"
    trust: TrustParams = field(default_factory=TrustParams)
    fusion: FusionConfig = field(default_factory=FusionConfig)
    revocation_threshold: float = 0.3
    report_timeout: Optional[float] = None  # defaults to 2 * gt_update_interval
    ignore_radius: Dict[int, float] = field(default_factory=lambda: dict(DEFAULT_IGNORE_RADIUS))
    minute_scale: float = 1.0
    witness_radius: float = 300.0
    speed_range: Tuple[float, float] = (10.0, 20.0)
    entry_window: float = 0.2  # fraction of the run during which vehicles enter
    rebroadcast_period: float = 5.0
    first_appear_stagger: float = 10.0
    passive_lead: Tuple[float, float] = (20.0, 60.0)
    passive_tail: Tuple[float, float] = (20.0, 60.0)
    reappear_gap: Tuple[float, float] = (30.0, 120.0)
    schedule_path: Optional[str] = None

    def __post_init__(self):
        def bad(name, msg):
            raise ConfigError(name, msg)

        if self.n_vehicles < 2:
            bad("n_vehicles", "need at least 2 vehicles")
        if self.n_events < 1:
            bad("n_events", "need at least 1 event")
        if self.grid_size <= 0:
            bad("grid_size", "must be positive")
        if not 0.0 <= self.attacker_ratio < 1.0:
            bad("attacker_ratio", "must be in [0, 1)")
        if not 0.0 <= self.event_aware_share <= 1.0:
            bad("event_aware_share", "must be in [0, 1]")
        for name in ("theta_event", "theta_location", "revocation_threshold", "entry_window"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                bad(name, "must be in [0, 1]")
        if not 0.0 <= self.collusion_low < self.collusion_high <= 1.0:
            bad("collusion_low", "need 0 <= collusion_low < collusion_high <= 1")
        if self.gt_update_interval <= 0:
            bad("gt_update_interval", "must be positive")
        if self.sim_duration <= 0:
            bad("sim_duration", "must be positive")
        if self.dt <= 0:
            bad("dt", "must be positive")
        if self.scheme not in SCHEMES:
            bad("scheme", f"must be one of {SCHEMES}")
        if self.report_timeout is not None and self.report_timeout <= 0:
            bad("report_timeout", "must be positive")
        if sorted(self.ignore_radius) != [1, 2, 3, 4] or min(self.ignore_radius.values()) <= 0:
            bad("ignore_radius", "needs a positive radius for each of types 1-4")
        if self.witness_radius <= 0:
            bad("witness_radius", "must be positive")
        lo, hi = self.speed_range
        if not 0 < lo <= hi:
            bad("speed_range", "need 0 < min <= max")
        if self.rebroadcast_period <= 0:
            bad("rebroadcast_period", "must be positive")
        if self.minute_scale <= 0:
            bad("minute_scale", "must be positive")
        for name in ("passive_lead", "passive_tail", "reappear_gap"):
            a, b = getattr(self, name)
            if not 0 <= a <= b:
                bad(name, "need 0 <= min <= max")

    @property
    def effective_report_timeout(self) -> float:
        if self.report_timeout is None:
            return 2.0 * self.gt_update_interval
        return self.report_timeout

    @property
    def n_attackers(self) -> int:
        return int(round(self.attacker_ratio * self.n_vehicles))

    def schedule_params(self) -> ScheduleParams:
        return ScheduleParams(
            n_events=self.n_events,
            grid_size=self.grid_size,
            horizon=self.sim_duration,
            minute_scale=self.minute_scale,
            first_appear_stagger=self.first_appear_stagger,
            passive_lead=self.passive_lead,
            passive_tail=self.passive_tail,
            reappear_gap=self.reappear_gap,
        )

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        d = dataclasses.asdict(self)
        d["ignore_radius"] = {str(k): v for k, v in self.ignore_radius.items()}
        return d


_NESTED = {"trust": TrustParams, "fusion": FusionConfig}
_PAIRS = ("speed_range", "passive_lead", "passive_tail", "reappear_gap")


def _line_of(text: str, key: str) -> Optional[int]:
    if not text:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def config_from_dict(raw: Dict[str, Any], text: str = "") -> ScenarioConfig:
    """Build a config from parsed JSON; ``text`` is only used for line numbers."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object", 1 if text else None)
    known = {f.name for f in dataclasses.fields(ScenarioConfig)}
    kwargs: Dict[str, Any] = {}
    for key, value in raw.items():
        if key not in known:
            raise ConfigError(key, "unknown field", _line_of(text, key))
        try:
            if key in _NESTED:
                if not isinstance(value, dict):
                    raise ValueError("must be an object")
                nested_known = {f.name for f in dataclasses.fields(_NESTED[key])}
                for sub in value:
                    if sub not in nested_known:
                        raise ConfigError(f"{key}.{sub}", "unknown field", _line_of(text, sub))
                value = _NESTED[key](**value)
            elif key in _PAIRS:
                if not (isinstance(value, (list, tuple)) and len(value) == 2):
                    raise ValueError("must be a [min, max] pair")
                value = (float(value[0]), float(value[1]))
            elif key == "ignore_radius":
                value = {int(k): float(v) for k, v in value.items()}
            elif key in ("n_vehicles", "n_events", "seed"):
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ValueError("must be an integer")
            elif key in ("scheme", "schedule_path"):
                if value is not None and not isinstance(value, str):
                    raise ValueError("must be a string")
            elif value is not None:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ValueError("must be a number")
                value = float(value)
        except ConfigError:
            raise
        except (TypeError, ValueError, AttributeError) as exc:
            raise ConfigError(key, str(exc), _line_of(text, key)) from None
        kwargs[key] = value
    try:
        return ScenarioConfig(**kwargs)
    except ConfigError as exc:
        raise ConfigError(exc.field, exc.reason, _line_of(text, exc.field)) from None


def load_config(path) -> ScenarioConfig:
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<json>", exc.msg, exc.lineno) from None
    return config_from_dict(raw, text)


def dump_config(cfg: ScenarioConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True)
