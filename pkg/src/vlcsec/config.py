"""
TOML configuration: parsing, validation, canonical re-emission.

The file carries physical quantities in conventional units — meters,
degrees, watts, amperes, dBm — under fixed sections.  Beam and FoV
angles are FULL angles as luminaire/photodiode datasheets quote them;
the loader halves both exactly once (a 120 degree beam becomes a
60 degree Lambertian semi-angle).  Noise is specified as average
electrical power in dBm and converted to the standard deviation
sigma = sqrt(10^((dBm - 30) / 10)) used by every metric.

`canonical_toml` re-emits the effective configuration in the same
schema (full angles, original units); load(canonical_toml(load(f)))
is semantically the identity, which the test suite pins.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from importlib import resources

from .experiment import Adaptive, FixedOrder, Mode, RunConfig, Scenario
from .geometry import Luminaire, Receiver, Vec3
from .metrics import QuadratureConfig, UtilityWeights
from .pam import ALLOWED_ORDERS, DriveParams
from .qlearn import BinsConfig, LearnerConfig

REQUIRED_SECTIONS = (
    "room",
    "luminaires",
    "led",
    "pd",
    "noise",
    "modulation",
    "utility",
    "learner",
    "run",
    "scenarios",
)

MODE_NAMES = ("adaptive", "fixed64")


class ConfigError(ValueError):
    """Anything wrong with the configuration file: syntax, sections, values."""


@dataclass(frozen=True)
class ScenarioDef:
    name: str
    bob: tuple[float, float, float]
    eve: tuple[float, float, float]


@dataclass(frozen=True)
class SimConfig:
    """Validated, effective configuration (primitives only, so equality
    comparison and canonical re-emission stay trivial)."""

    room: tuple[float, float, float]  # width, depth, height, meters
    lum_positions: tuple[tuple[float, float, float], ...]
    beam_full_angle_deg: float
    led_power_w: float
    led_conversion: float  # W/A
    pd_area_m2: float
    pd_fov_full_angle_deg: float
    pd_filter_gain: float
    pd_refractive_index: float
    pd_responsivity: float  # A/W
    noise_dbm: float
    orders: tuple[int, ...]
    mod_index: float
    weights: UtilityWeights
    learner: LearnerConfig
    bins: BinsConfig
    quant_levels: int
    num_slots: int
    seed: int
    summary_window: int
    modes: tuple[str, ...]
    quadrature: QuadratureConfig
    clamp_secrecy: bool
    scenarios: tuple[ScenarioDef, ...]

    @property
    def dc_bias(self) -> float:
        """I_DC = transmit power / conversion factor, amperes."""
        return self.led_power_w / self.led_conversion

    @property
    def noise_sigma(self) -> float:
        return math.sqrt(10.0 ** ((self.noise_dbm - 30.0) / 10.0))

    @property
    def semi_angle_deg(self) -> float:
        return self.beam_full_angle_deg / 2.0

    @property
    def fov_half_angle_deg(self) -> float:
        return self.pd_fov_full_angle_deg / 2.0


def default_config_path() -> Path:
    """The bundled configuration with the reference system parameters."""
    return Path(str(resources.files("vlcsec").joinpath("data/defaults.toml")))


def _num(section: str, table: dict, key: str) -> float:
    v = _get(section, table, key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"[{section}] {key} must be a number, got {v!r}")
    return float(v)


def _int(section: str, table: dict, key: str, default: int | None = None) -> int:
    if default is not None and key not in table:
        return default
    v = _get(section, table, key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"[{section}] {key} must be an integer, got {v!r}")
    return v


def _get(section: str, table: dict, key: str):
    if key not in table:
        raise ConfigError(f"[{section}] is missing required key '{key}'")
    return table[key]


def _position(section: str, key: str, v) -> tuple[float, float, float]:
    if (
        not isinstance(v, list)
        or len(v) != 3
        or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in v)
    ):
        raise ConfigError(f"[{section}] {key} must be a 3-element [x, y, z] position")
    return (float(v[0]), float(v[1]), float(v[2]))


def _check_inside_room(
    room: tuple[float, float, float], what: str, p: tuple[float, float, float]
) -> None:
    w, d, h = room
    if abs(p[0]) > w / 2 or abs(p[1]) > d / 2 or not 0.0 <= p[2] <= h:
        raise ConfigError(
            f"{what} position {p} lies outside the room "
            f"(centered {w} x {d}, height {h})"
        )


def load_config(path: str | Path | None = None) -> SimConfig:
    """Parse and validate a configuration file (bundled defaults if None)."""
    p = Path(path) if path is not None else default_config_path()
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {p}: {exc}") from exc
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config parse error in {p}: {exc}") from exc
    return parse_config(doc)


def parse_config(doc: dict) -> SimConfig:
    for section in REQUIRED_SECTIONS:
        if section not in doc:
            raise ConfigError(f"config is missing required section [{section}]")

    room_t = doc["room"]
    room = (
        _num("room", room_t, "width_m"),
        _num("room", room_t, "depth_m"),
        _num("room", room_t, "height_m"),
    )
    if any(v <= 0 for v in room):
        raise ConfigError("[room] dimensions must be positive")

    lum_t = doc["luminaires"]
    positions_raw = _get("luminaires", lum_t, "positions")
    if not isinstance(positions_raw, list) or not positions_raw:
        raise ConfigError("[luminaires] positions must be a non-empty array")
    lum_positions = tuple(
        _position("luminaires", f"positions[{i}]", v) for i, v in enumerate(positions_raw)
    )
    beam_full = _num("luminaires", lum_t, "beam_full_angle_deg")
    if not 0.0 < beam_full < 180.0:
        raise ConfigError("[luminaires] beam_full_angle_deg must lie in (0, 180)")
    for i, p in enumerate(lum_positions):
        _check_inside_room(room, f"luminaire {i}", p)

    led_t = doc["led"]
    led_power = _num("led", led_t, "transmit_power_w")
    led_conv = _num("led", led_t, "conversion_w_per_a")
    if led_power <= 0 or led_conv <= 0:
        raise ConfigError("[led] power and conversion factor must be positive")

    pd_t = doc["pd"]
    pd_area = _num("pd", pd_t, "active_area_m2")
    pd_fov_full = _num("pd", pd_t, "fov_full_angle_deg")
    pd_filter = _num("pd", pd_t, "filter_gain")
    pd_kappa = _num("pd", pd_t, "refractive_index")
    pd_resp = _num("pd", pd_t, "responsivity_a_per_w")
    if not 0.0 < pd_fov_full <= 180.0:
        raise ConfigError("[pd] fov_full_angle_deg must lie in (0, 180]")

    noise_dbm = _num("noise", doc["noise"], "average_power_dbm")

    mod_t = doc["modulation"]
    orders_raw = _get("modulation", mod_t, "orders")
    if not isinstance(orders_raw, list) or not orders_raw:
        raise ConfigError("[modulation] orders must be a non-empty array")
    orders = []
    for m in orders_raw:
        if isinstance(m, bool) or not isinstance(m, int) or m not in ALLOWED_ORDERS:
            raise ConfigError(
                f"[modulation] unsupported order {m!r}; allowed: {list(ALLOWED_ORDERS)}"
            )
        orders.append(m)
    mod_index = _num("modulation", mod_t, "index")
    if not 0.0 < mod_index <= 1.0:
        raise ConfigError("[modulation] index must lie in (0, 1]")

    util_t = doc["utility"]
    try:
        weights = UtilityWeights(
            delta=_num("utility", util_t, "delta"),
            zeta=_num("utility", util_t, "zeta"),
        )
    except ValueError as exc:
        raise ConfigError(f"[utility] {exc}") from exc

    lrn_t = doc["learner"]
    try:
        learner = LearnerConfig(
            learning_rate=_num("learner", lrn_t, "learning_rate"),
            discount=_num("learner", lrn_t, "discount"),
            epsilon_start=_num("learner", lrn_t, "epsilon_start"),
            epsilon_end=_num("learner", lrn_t, "epsilon_end"),
            epsilon_decay_slots=_int("learner", lrn_t, "epsilon_decay_slots"),
        )
        cs_range_raw = lrn_t.get("cs_range", [-1.0, 7.0])
        if not isinstance(cs_range_raw, list) or len(cs_range_raw) != 2:
            raise ConfigError("[learner] cs_range must be [low, high]")
        bins = BinsConfig(
            ber_bins=_int("learner", lrn_t, "ber_bins", default=8),
            ber_underflow=float(lrn_t.get("ber_underflow", 1e-6)),
            cs_bins=_int("learner", lrn_t, "cs_bins", default=8),
            cs_range=(float(cs_range_raw[0]), float(cs_range_raw[1])),
        )
    except ValueError as exc:
        raise ConfigError(f"[learner] {exc}") from exc
    quant_levels = _int("learner", lrn_t, "quant_levels")
    if quant_levels < 1:
        raise ConfigError("[learner] quant_levels must be >= 1")

    run_t = doc["run"]
    num_slots = _int("run", run_t, "num_slots")
    seed = _int("run", run_t, "seed")
    summary_window = _int("run", run_t, "summary_window", default=500)
    if num_slots < 1:
        raise ConfigError("[run] num_slots must be >= 1")
    if not 1 <= summary_window <= num_slots:
        raise ConfigError("[run] summary_window must lie in [1, num_slots]")
    modes_raw = run_t.get("modes", list(MODE_NAMES))
    if not isinstance(modes_raw, list) or not modes_raw:
        raise ConfigError("[run] modes must be a non-empty array")
    for m in modes_raw:
        if m not in MODE_NAMES:
            raise ConfigError(f"[run] unknown mode {m!r}; allowed: {list(MODE_NAMES)}")
    try:
        quadrature = QuadratureConfig(
            half_width_sigmas=float(run_t.get("quad_half_width_sigmas", 10.0)),
            rel_tol=float(run_t.get("quad_rel_tol", 1e-7)),
            max_subdivisions=_int("run", run_t, "quad_max_subdivisions", default=200),
        )
    except ValueError as exc:
        raise ConfigError(f"[run] {exc}") from exc
    clamp = run_t.get("clamp_secrecy", False)
    if not isinstance(clamp, bool):
        raise ConfigError("[run] clamp_secrecy must be a boolean")

    scen_raw = doc["scenarios"]
    if not isinstance(scen_raw, list) or not scen_raw:
        raise ConfigError("config needs at least one [[scenarios]] entry")
    scenarios = []
    seen = set()
    for i, s in enumerate(scen_raw):
        if not isinstance(s, dict):
            raise ConfigError(f"[[scenarios]] entry {i} must be a table")
        name = _get(f"scenarios[{i}]", s, "name")
        if not isinstance(name, str) or not name or not all(
            c.isalnum() or c in "_-" for c in name
        ):
            raise ConfigError(
                f"[[scenarios]] entry {i}: name must be non-empty and use only "
                f"letters, digits, '_' or '-' (it becomes a directory name)"
            )
        if name in seen:
            raise ConfigError(f"duplicate scenario name {name!r}")
        seen.add(name)
        bob = _position(f"scenarios[{i}]", "bob", _get(f"scenarios[{i}]", s, "bob"))
        eve = _position(f"scenarios[{i}]", "eve", _get(f"scenarios[{i}]", s, "eve"))
        _check_inside_room(room, f"scenario {name!r} bob", bob)
        _check_inside_room(room, f"scenario {name!r} eve", eve)
        scenarios.append(ScenarioDef(name=name, bob=bob, eve=eve))

    return SimConfig(
        room=room,
        lum_positions=lum_positions,
        beam_full_angle_deg=beam_full,
        led_power_w=led_power,
        led_conversion=led_conv,
        pd_area_m2=pd_area,
        pd_fov_full_angle_deg=pd_fov_full,
        pd_filter_gain=pd_filter,
        pd_refractive_index=pd_kappa,
        pd_responsivity=pd_resp,
        noise_dbm=noise_dbm,
        orders=tuple(orders),
        mod_index=mod_index,
        weights=weights,
        learner=learner,
        bins=bins,
        quant_levels=quant_levels,
        num_slots=num_slots,
        seed=seed,
        summary_window=summary_window,
        modes=tuple(modes_raw),
        quadrature=quadrature,
        clamp_secrecy=clamp,
        scenarios=tuple(scenarios),
    )


def build_scenario(cfg: SimConfig, sdef: ScenarioDef) -> Scenario:
    """Materialize one scenario's geometry and noise from the config."""
    try:
        lums = tuple(
            Luminaire(position=Vec3(*p), semi_angle_deg=cfg.semi_angle_deg)
            for p in cfg.lum_positions
        )
        drive = DriveParams(
            dc_bias=cfg.dc_bias,
            modulation_index=cfg.mod_index,
            led_conversion=cfg.led_conversion,
            pd_responsivity=cfg.pd_responsivity,
        )

        def rx(pos: tuple[float, float, float]) -> Receiver:
            return Receiver(
                position=Vec3(*pos),
                active_area=cfg.pd_area_m2,
                fov_deg=cfg.fov_half_angle_deg,
                filter_gain=cfg.pd_filter_gain,
                refractive_index=cfg.pd_refractive_index,
            )

        return Scenario(
            name=sdef.name,
            luminaires=lums,
            drive=drive,
            bob=rx(sdef.bob),
            eve=rx(sdef.eve),
            sigma_bob=cfg.noise_sigma,
            sigma_eve=cfg.noise_sigma,
        )
    except ValueError as exc:
        raise ConfigError(f"scenario {sdef.name!r}: {exc}") from exc


def build_scenarios(cfg: SimConfig) -> list[Scenario]:
    return [build_scenario(cfg, sdef) for sdef in cfg.scenarios]


def mode_from_name(name: str) -> Mode:
    if name == "adaptive":
        return Adaptive()
    if name == "fixed64":
        return FixedOrder(64)
    raise ConfigError(f"unknown mode {name!r}; allowed: {list(MODE_NAMES)}")


def run_config(cfg: SimConfig, mode_name: str, seed: int | None = None) -> RunConfig:
    """RunConfig for one (mode, seed) cell of the configured experiment."""
    return RunConfig(
        seed=cfg.seed if seed is None else seed,
        num_slots=cfg.num_slots,
        summary_window=cfg.summary_window,
        mode=mode_from_name(mode_name),
        orders=cfg.orders,
        quant_levels=cfg.quant_levels,
        weights=cfg.weights,
        learner=cfg.learner,
        bins=cfg.bins,
        quadrature=cfg.quadrature,
        clamp_secrecy=cfg.clamp_secrecy,
    )


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return '"' + v + '"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    raise TypeError(f"cannot format {v!r}")


def canonical_toml(cfg: SimConfig) -> str:
    """Re-emit the effective configuration; load(canonical_toml(c)) == c."""
    lines = [
        "[room]",
        f"width_m = {_fmt(cfg.room[0])}",
        f"depth_m = {_fmt(cfg.room[1])}",
        f"height_m = {_fmt(cfg.room[2])}",
        "",
        "[luminaires]",
        f"positions = {_fmt([list(p) for p in cfg.lum_positions])}",
        f"beam_full_angle_deg = {_fmt(cfg.beam_full_angle_deg)}",
        "",
        "[led]",
        f"transmit_power_w = {_fmt(cfg.led_power_w)}",
        f"conversion_w_per_a = {_fmt(cfg.led_conversion)}",
        "",
        "[pd]",
        f"active_area_m2 = {_fmt(cfg.pd_area_m2)}",
        f"fov_full_angle_deg = {_fmt(cfg.pd_fov_full_angle_deg)}",
        f"filter_gain = {_fmt(cfg.pd_filter_gain)}",
        f"refractive_index = {_fmt(cfg.pd_refractive_index)}",
        f"responsivity_a_per_w = {_fmt(cfg.pd_responsivity)}",
        "",
        "[noise]",
        f"average_power_dbm = {_fmt(cfg.noise_dbm)}",
        "",
        "[modulation]",
        f"orders = {_fmt(cfg.orders)}",
        f"index = {_fmt(cfg.mod_index)}",
        "",
        "[utility]",
        f"delta = {_fmt(cfg.weights.delta)}",
        f"zeta = {_fmt(cfg.weights.zeta)}",
        "",
        "[learner]",
        f"learning_rate = {_fmt(cfg.learner.learning_rate)}",
        f"discount = {_fmt(cfg.learner.discount)}",
        f"epsilon_start = {_fmt(cfg.learner.epsilon_start)}",
        f"epsilon_end = {_fmt(cfg.learner.epsilon_end)}",
        f"epsilon_decay_slots = {_fmt(cfg.learner.epsilon_decay_slots)}",
        f"quant_levels = {_fmt(cfg.quant_levels)}",
        f"ber_bins = {_fmt(cfg.bins.ber_bins)}",
        f"ber_underflow = {_fmt(cfg.bins.ber_underflow)}",
        f"cs_bins = {_fmt(cfg.bins.cs_bins)}",
        f"cs_range = {_fmt(cfg.bins.cs_range)}",
        "",
        "[run]",
        f"num_slots = {_fmt(cfg.num_slots)}",
        f"seed = {_fmt(cfg.seed)}",
        f"summary_window = {_fmt(cfg.summary_window)}",
        f"modes = {_fmt(cfg.modes)}",
        f"quad_half_width_sigmas = {_fmt(cfg.quadrature.half_width_sigmas)}",
        f"quad_rel_tol = {_fmt(cfg.quadrature.rel_tol)}",
        f"quad_max_subdivisions = {_fmt(cfg.quadrature.max_subdivisions)}",
        f"clamp_secrecy = {_fmt(cfg.clamp_secrecy)}",
    ]
    for s in cfg.scenarios:
        lines += [
            "",
            "[[scenarios]]",
            f"name = {_fmt(s.name)}",
            f"bob = {_fmt(s.bob)}",
            f"eve = {_fmt(s.eve)}",
        ]
    return "\n".join(lines) + "\n"
