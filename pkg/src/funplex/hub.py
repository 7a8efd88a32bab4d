"""Synthetic single-node energy hub LP generator.

Seven buildable technologies (wind, PV, battery, CHP, heat pump, gas boiler,
thermal storage) plus grid electricity and gas imports serve constant heat
and electricity demand over representative days under an annual CO2 cap.
Capacities are sized in kW (storage in kWh) except PV, which is sized in m2 so
the interest variables span very different magnitudes on purpose.

Profiles are synthetic: a half-sine solar day, a perturbed near-constant wind
band, and flat demands. Extra PV sites take the base profile times a
log-normal noise factor; site 1 always keeps the unnoised base profile so the
single-site model nests inside every multi-site model.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field, replace
from importlib import resources

import numpy as np

from .lp import LpError, StandardFormLP, build_standard_form

TECHNOLOGIES = ("wind", "pv", "battery", "chp", "heat_pump", "gas_boiler", "thermal_storage")

# interest-variable priority; the first four mirror the base benchmark choice
INTEREST_PRIORITY = ("wind", "gas_boiler", "pv", "heat_pump", "battery", "chp", "thermal_storage")


def load_technology_params(path=None, overrides=None) -> dict:
    """The versioned technology dataset, optionally overlaid with overrides."""
    if path is None:
        text = resources.files("funplex.data").joinpath("technologies.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    params = json.loads(text)
    if overrides:
        params = copy.deepcopy(params)
        for key, sub in overrides.items():
            if isinstance(sub, dict):
                params.setdefault(key, {}).update(sub)
            else:
                params[key] = sub
    return params


@dataclass
class HubConfig:
    hours_per_day: int = 24
    n_days: int = 1
    technologies: tuple[str, ...] = TECHNOLOGIES
    heat_demand_kw: float = 1100.0
    elec_demand_kw: float = 440.0
    co2_cap_t: float | None = 1460.0
    lifetime_years: float = 25.0
    discount_rate: float = 0.05
    n_pv_sites: int = 1
    pv_noise_sigma: float = 0.254
    n_interest: int = 4
    seed: int = 42
    day_weights: tuple[float, ...] | None = None
    params_path: str | None = None
    param_overrides: dict | None = None

    def __post_init__(self):
        if not 1 <= self.hours_per_day <= 24:
            raise ValueError("hours_per_day must be in [1, 24]")
        if self.n_days < 1:
            raise ValueError("n_days must be >= 1")
        if self.n_pv_sites < 1:
            raise ValueError("n_pv_sites must be >= 1")
        for name in ("heat_demand_kw", "elec_demand_kw", "lifetime_years"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.pv_noise_sigma < 0:
            raise ValueError("pv_noise_sigma must be nonnegative")
        if self.co2_cap_t is not None and self.co2_cap_t <= 0:
            raise ValueError("co2_cap_t must be positive (or None for no cap)")
        unknown = set(self.technologies) - set(TECHNOLOGIES)
        if unknown:
            raise ValueError(f"unknown technologies: {sorted(unknown)}")
        if self.day_weights is not None and len(self.day_weights) != self.n_days:
            raise ValueError("day_weights length must equal n_days")
        if not 1 <= self.n_interest <= len(self.technologies):
            raise ValueError("n_interest out of range")

    @property
    def n_steps(self) -> int:
        return self.hours_per_day * self.n_days

    @property
    def step_hours(self) -> float:
        """Hours represented by one timestep within its day."""
        return 24.0 / self.hours_per_day

    def weights(self) -> np.ndarray:
        """Days of the year represented by each modeled day (sums to 365)."""
        if self.day_weights is not None:
            return np.asarray(self.day_weights, dtype=float)
        return np.full(self.n_days, 365.0 / self.n_days)


@dataclass
class Profiles:
    """Per-timestep capacity factors and demands; lengths equal n_steps."""

    solar: np.ndarray  # (n_sites, T)
    wind: np.ndarray  # (T,)
    heat: np.ndarray  # (T,)
    elec: np.ndarray  # (T,)

    def __post_init__(self):
        self.solar = np.atleast_2d(np.asarray(self.solar, dtype=float))
        self.wind = np.asarray(self.wind, dtype=float)
        self.heat = np.asarray(self.heat, dtype=float)
        self.elec = np.asarray(self.elec, dtype=float)
        T = self.wind.size
        if self.solar.shape[1] != T or self.heat.size != T or self.elec.size != T:
            raise ValueError("profile lengths disagree")
        for name in ("solar", "wind"):
            arr = getattr(self, name)
            if arr.min() < 0.0 or arr.max() > 1.0:
                raise ValueError(f"{name} capacity factors outside [0, 1]")


def pv_noise_factors(n: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Multiplicative log-normal factors with mean 1 and std `sigma`."""
    if sigma == 0.0:
        return np.ones(n)
    s2 = np.log1p(sigma**2)
    mu = -0.5 * s2
    return rng.lognormal(mean=mu, sigma=np.sqrt(s2), size=n)


def expand_pv_sites(base_profile, n_sites: int, sigma: float,
                    rng: np.random.Generator) -> np.ndarray:
    """Per-site solar profiles; site 1 is the unnoised base, clipped to [0, 1]."""
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    base = np.asarray(base_profile, dtype=float)
    factors = np.ones(n_sites)
    if n_sites > 1:
        factors[1:] = pv_noise_factors(n_sites - 1, sigma, rng)
    return np.clip(base[None, :] * factors[:, None], 0.0, 1.0)


def generate_profiles(config: HubConfig, rng: np.random.Generator | None = None) -> Profiles:
    """Synthetic profiles, deterministic for a given config seed.

    Draw order is fixed: per-day solar factors, wind noise, PV site factors.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    params = load_technology_params(config.params_path, config.param_overrides)
    sp = params["solar_profile"]
    wp = params["wind_profile"]
    T = config.n_steps
    hpd = config.hours_per_day
    # sample each modeled day at evenly spread hour centers so short horizons
    # still see both day and night
    hours = (np.arange(T) % hpd + 0.5) * (24.0 / hpd)
    daylight = (hours > sp["sunrise"]) & (hours < sp["sunset"])
    solar = np.zeros(T)
    solar[daylight] = sp["peak_cf"] * np.sin(
        np.pi * (hours[daylight] - sp["sunrise"]) / (sp["sunset"] - sp["sunrise"])
    )
    day_factor = np.ones(config.n_days)
    if config.n_days > 1:
        day_factor[1:] = np.clip(rng.normal(1.0, 0.15, config.n_days - 1), 0.3, 1.5)
    solar *= np.repeat(day_factor, hpd)
    solar = np.clip(solar, 0.0, 1.0)

    phase = rng.uniform(0.0, 24.0)
    noise = rng.normal(0.0, wp["noise_sigma"], T)
    kernel = np.ones(3) / 3.0
    smooth = np.convolve(noise, kernel, mode="same")
    wind = wp["mean_cf"] + wp["diurnal_amplitude"] * np.sin(2 * np.pi * (hours + phase) / 24.0)
    wind = np.clip(wind + smooth, wp["min_cf"], wp["max_cf"])

    solar_sites = expand_pv_sites(solar, config.n_pv_sites, config.pv_noise_sigma, rng)
    heat = np.full(T, config.heat_demand_kw)
    elec = np.full(T, config.elec_demand_kw)
    return Profiles(solar_sites, wind, heat, elec)


def capital_recovery_factor(rate: float, lifetime_years: float) -> float:
    if rate == 0.0:
        return 1.0 / lifetime_years
    q = (1.0 + rate) ** lifetime_years
    return rate * q / (q - 1.0)


@dataclass
class HubModel:
    """Built LP plus the column maps and emission bookkeeping for one config."""

    lp: StandardFormLP
    config: HubConfig
    profiles: Profiles
    params: dict
    capacity_columns: dict[str, tuple[int, ...]]
    operation_columns: dict[str, np.ndarray]
    co2_row: int | None
    emission_coefficients: np.ndarray

    def emissions(self, x) -> float:
        """Annual tCO2 of a full solution vector."""
        return float(np.dot(self.emission_coefficients, np.asarray(x)[: self.lp.n]))

    def interest_capacity_columns(self) -> dict[str, int]:
        return {
            self.lp.column_names[j]: j for j in self.lp.interest_columns
        }

    def spores_capacity_map(self) -> dict[str, tuple[int, ...]]:
        return dict(self.capacity_columns)


class _Columns:
    def __init__(self):
        self.names: list[str] = []

    def add(self, name: str) -> int:
        self.names.append(name)
        return len(self.names) - 1

    def __len__(self):
        return len(self.names)


def build_hub_lp(config: HubConfig, profiles: Profiles | None = None) -> HubModel:
    """Assemble the hub LP.

    Variables: one capacity per technology (one per PV site), plus per-timestep
    operation (generation, storage charge/discharge/state, conversion inputs,
    imports). Constraints: heat/electricity/gas balances, capacity limits,
    per-day cyclic storage dynamics, and the annual CO2 cap as the final row.
    The objective is annualized investment plus yearly import cost.
    """
    if profiles is None:
        profiles = generate_profiles(config)
    params = load_technology_params(config.params_path, config.param_overrides)
    tech = set(config.technologies)
    T = config.n_steps
    hpd = config.hours_per_day
    if profiles.wind.size != T:
        raise ValueError("profiles do not match the configured horizon")
    if profiles.solar.shape[0] != config.n_pv_sites:
        raise ValueError("profiles do not match n_pv_sites")

    # hour weight: annual hours represented by each timestep
    wt = np.repeat(config.weights(), hpd) * config.step_hours
    crf = capital_recovery_factor(config.discount_rate, config.lifetime_years)
    imports = params["imports"]

    cols = _Columns()
    cap: dict[str, list[int]] = {}
    if "wind" in tech:
        cap["wind"] = [cols.add("cap_wind")]
    if "pv" in tech:
        cap["pv"] = [cols.add(f"cap_pv_s{s}") for s in range(config.n_pv_sites)]
    if "battery" in tech:
        cap["battery"] = [cols.add("cap_battery")]
    if "chp" in tech:
        cap["chp"] = [cols.add("cap_chp")]
    if "heat_pump" in tech:
        cap["heat_pump"] = [cols.add("cap_heat_pump")]
    if "gas_boiler" in tech:
        cap["gas_boiler"] = [cols.add("cap_gas_boiler")]
    if "thermal_storage" in tech:
        cap["thermal_storage"] = [cols.add("cap_thermal_storage")]

    op: dict[str, np.ndarray] = {}

    def add_series(name: str) -> np.ndarray:
        idx = np.array([cols.add(f"{name}_t{t}") for t in range(T)])
        op[name] = idx
        return idx

    if "wind" in tech:
        wind_gen = add_series("wind_gen")
    if "pv" in tech:
        pv_gen = [add_series(f"pv_gen_s{s}") for s in range(config.n_pv_sites)]
    if "battery" in tech:
        bat_in = add_series("bat_charge")
        bat_out = add_series("bat_discharge")
        bat_soc = add_series("bat_soc")
    if "chp" in tech:
        chp_gas = add_series("chp_gas")
    if "heat_pump" in tech:
        hp_elec = add_series("hp_elec")
    if "gas_boiler" in tech:
        boiler_gas = add_series("boiler_gas")
    if "thermal_storage" in tech:
        ts_in = add_series("ts_charge")
        ts_out = add_series("ts_discharge")
        ts_soc = add_series("ts_soc")
    grid_elec = add_series("grid_elec")
    grid_gas = add_series("grid_gas")

    n = len(cols)
    costs = np.zeros(n)
    if "wind" in tech:
        costs[cap["wind"][0]] = crf * params["wind"]["capex_per_kw"]
    if "pv" in tech:
        for j in cap["pv"]:
            costs[j] = crf * params["pv"]["capex_per_m2"]
    if "battery" in tech:
        costs[cap["battery"][0]] = crf * params["battery"]["capex_per_kwh"]
    if "chp" in tech:
        costs[cap["chp"][0]] = crf * params["chp"]["capex_per_kw_elec"]
    if "heat_pump" in tech:
        costs[cap["heat_pump"][0]] = crf * params["heat_pump"]["capex_per_kw_heat"]
    if "gas_boiler" in tech:
        costs[cap["gas_boiler"][0]] = crf * params["gas_boiler"]["capex_per_kw_heat"]
    if "thermal_storage" in tech:
        costs[cap["thermal_storage"][0]] = crf * params["thermal_storage"]["capex_per_kwh"]
    costs[grid_elec] = imports["elec_price_per_kwh"] * wt
    costs[grid_gas] = imports["gas_price_per_kwh"] * wt

    rows = []

    def row(coeffs: dict[int, float], rel: str, rhs: float):
        dense = np.zeros(n)
        for j, v in coeffs.items():
            dense[j] = v
        rows.append((dense, rel, rhs))

    def prev_step(t: int) -> int:
        day = t // hpd
        return day * hpd + (t - 1 - day * hpd) % hpd

    for t in range(T):
        elec: dict[int, float] = {grid_elec[t]: 1.0}
        heat: dict[int, float] = {}
        gas: dict[int, float] = {grid_gas[t]: 1.0}
        if "wind" in tech:
            elec[wind_gen[t]] = 1.0
            row({wind_gen[t]: 1.0, cap["wind"][0]: -profiles.wind[t]}, "<=", 0.0)
        if "pv" in tech:
            ppd = params["pv"]["peak_kw_per_m2"]
            for s in range(config.n_pv_sites):
                elec[pv_gen[s][t]] = 1.0
                row({pv_gen[s][t]: 1.0, cap["pv"][s]: -profiles.solar[s, t] * ppd}, "<=", 0.0)
        if "battery" in tech:
            p = params["battery"]
            elec[bat_out[t]] = 1.0
            elec[bat_in[t]] = -1.0
            row(
                {
                    bat_soc[t]: 1.0,
                    bat_soc[prev_step(t)]: -1.0,
                    bat_in[t]: -p["eta_charge"] * config.step_hours,
                    bat_out[t]: config.step_hours / p["eta_discharge"],
                },
                "=",
                0.0,
            )
            row({bat_soc[t]: 1.0, cap["battery"][0]: -1.0}, "<=", 0.0)
            row({bat_in[t]: 1.0, cap["battery"][0]: -p["max_c_rate"]}, "<=", 0.0)
            row({bat_out[t]: 1.0, cap["battery"][0]: -p["max_c_rate"]}, "<=", 0.0)
        if "chp" in tech:
            p = params["chp"]
            elec[chp_gas[t]] = p["eta_elec"]
            heat[chp_gas[t]] = p["eta_heat"]
            gas[chp_gas[t]] = -1.0
            row({chp_gas[t]: p["eta_elec"], cap["chp"][0]: -1.0}, "<=", 0.0)
        if "heat_pump" in tech:
            p = params["heat_pump"]
            elec[hp_elec[t]] = -1.0
            heat[hp_elec[t]] = p["cop"]
            row({hp_elec[t]: p["cop"], cap["heat_pump"][0]: -1.0}, "<=", 0.0)
        if "gas_boiler" in tech:
            p = params["gas_boiler"]
            heat[boiler_gas[t]] = p["eta"]
            gas[boiler_gas[t]] = -1.0
            row({boiler_gas[t]: p["eta"], cap["gas_boiler"][0]: -1.0}, "<=", 0.0)
        if "thermal_storage" in tech:
            p = params["thermal_storage"]
            heat[ts_out[t]] = 1.0
            heat[ts_in[t]] = -1.0
            row(
                {
                    ts_soc[t]: 1.0,
                    ts_soc[prev_step(t)]: -1.0,
                    ts_in[t]: -p["eta_charge"] * config.step_hours,
                    ts_out[t]: config.step_hours / p["eta_discharge"],
                },
                "=",
                0.0,
            )
            row({ts_soc[t]: 1.0, cap["thermal_storage"][0]: -1.0}, "<=", 0.0)
            row({ts_in[t]: 1.0, cap["thermal_storage"][0]: -p["max_c_rate"]}, "<=", 0.0)
            row({ts_out[t]: 1.0, cap["thermal_storage"][0]: -p["max_c_rate"]}, "<=", 0.0)
        row(elec, "=", profiles.elec[t])
        row(heat, "=", profiles.heat[t])
        row(gas, "=", 0.0)

    emission = np.zeros(n)
    emission[grid_elec] = imports["elec_emission_factor"] * wt
    emission[grid_gas] = imports["gas_emission_factor"] * wt
    co2_row = None
    if config.co2_cap_t is not None:
        coeffs = {int(j): float(emission[j]) for j in np.nonzero(emission)[0]}
        row(coeffs, "<=", config.co2_cap_t)
        co2_row = len(rows) - 1

    interest = []
    for name in INTEREST_PRIORITY:
        if name in cap:
            interest.append(cap[name][0])
        if len(interest) == config.n_interest:
            break
    if len(interest) < config.n_interest:
        raise ValueError("not enough enabled technologies for n_interest")

    lp = build_standard_form(rows, costs, names=cols.names, interest_columns=interest)
    if lp.m != len(rows):
        raise LpError("hub model produced dependent constraint rows")
    emission = np.concatenate([emission, np.zeros(lp.n - n)])  # slacks emit nothing
    return HubModel(
        lp=lp,
        config=config,
        profiles=profiles,
        params=params,
        capacity_columns={k: tuple(v) for k, v in cap.items()},
        operation_columns=op,
        co2_row=co2_row,
        emission_coefficients=emission,
    )


@dataclass(frozen=True)
class HubPreset:
    """A named benchmark configuration, optionally with a sweep grid."""

    config: HubConfig
    epsilon: float = 0.05
    n_objectives: int = 200
    sweep_axis: str | None = None
    sweep_grid: tuple | None = None


def horizon_config(base: HubConfig, total_hours: int) -> HubConfig:
    """Map an operating-horizon length in hours onto (hours_per_day, n_days)."""
    if total_hours <= 24:
        return replace(base, hours_per_day=total_hours, n_days=1)
    if total_hours % 24:
        raise ValueError("horizons beyond a day must be whole days")
    return replace(base, hours_per_day=24, n_days=total_hours // 24)


def hub_presets() -> dict[str, HubPreset]:
    base = HubConfig()
    return {
        "base": HubPreset(config=base),
        "horizon": HubPreset(config=base, sweep_axis="horizon", sweep_grid=(6, 12, 24, 48)),
        "pv_sites": HubPreset(
            config=replace(base, hours_per_day=6),
            sweep_axis="pv_sites",
            sweep_grid=(1, 2, 4, 8),
        ),
        "n_k": HubPreset(config=base, sweep_axis="n_k", sweep_grid=(25, 50, 100, 200, 400)),
        "n_d": HubPreset(config=base, sweep_axis="n_d", sweep_grid=(2, 3, 4, 5, 6, 7)),
    }
