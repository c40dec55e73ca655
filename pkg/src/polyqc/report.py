"""Per-qubit figures of merit and their serialization (table, structured JSON, CSV)."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Optional

from . import perturbation, resonator, spectrum, tline
from .config import RunConfig, Section
from .core import H, EnergyScales, effective_offset, josephson_params
from .dynamics import DriveWaveform, PhaseState, integrate, junction_model, lc_model, oscillation_frequency

SIG_DIGITS = 12

_SCALE = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "fF": 1e-15, "nH": 1e-9, "um": 1e-6, "nA": 1e-9, "s": 1.0, "J": 1.0, "1": 1.0}


def quantity(value: float, unit: str) -> dict:
    """A serialized number with its unit; SI input is rescaled to ``unit``."""
    scaled = value / _SCALE[unit]
    if math.isfinite(scaled):
        scaled = float(f"{scaled:.{SIG_DIGITS}g}")
    return {"value": scaled, "unit": unit}


def _potential(sec: Section, k_max: int):
    variant = sec.get("potential", "cosine")
    if variant == "fourier":
        pot = spectrum.PhasePotential.fourier(sec["fourier"])
    else:
        pot = spectrum.PhasePotential(variant)
    return spectrum.potential_fourier(pot, k_max=sec.get("k_max", k_max))


def qubit_report(name: str, cfg: RunConfig, overrides: Optional[dict] = None) -> dict:
    """Figures of merit for one configured qubit.

    ``overrides`` replaces element values (used by sweeps) without touching
    the parsed config.
    """
    sec = cfg.qubits[name]
    values = dict(sec.values)
    values.update(overrides or {})
    settings = cfg.settings
    n_max = values.get("n_max", cfg.n_max)
    k_max = settings.get("k_max", 32)
    C_q = values["capacitance"]

    scales = EnergyScales.from_elements(
        C_q, inductance=values.get("inductance"), critical_current=values.get("critical_current")
    )
    series = _potential(sec, k_max)
    n_g = effective_offset(values.get("theta", 0.0), C_q, values.get("drive_voltage", 0.0))

    convergence = {"policy": "fixed", "n_max": n_max}
    if "converge" in settings:
        tol = settings["converge"] * H
        n_max = spectrum.converge_truncation(scales, series, n_g, tol)
        convergence = {"policy": "doubling", "n_max": n_max, "tolerance": quantity(settings["converge"], "Hz")}
    spec = spectrum.eigendecompose(spectrum.build_charge_hamiltonian(scales, series, n_g, n_max))
    n01 = spectrum.number_matrix_element(spec, 0, 1)
    f01 = spec.E01 / H

    row = {
        "name": name,
        "label": values.get("label", name),
        "element": "junction" if scales.kind == "junction" else "inductor",
        "potential": sec.get("potential", "cosine"),
        "C_q": quantity(C_q, "fF"),
    }
    if scales.kind == "junction":
        L_J, _ = josephson_params(values["critical_current"])
        row["L"] = quantity(L_J, "nH")
        row["I_c"] = quantity(values["critical_current"], "nA")
    else:
        row["L"] = quantity(values["inductance"], "nH")
    row.update(
        {
            "n_g": quantity(n_g, "1"),
            "E_c": quantity(scales.E_c / H, "MHz"),
            "E_pot": quantity(scales.E_pot / H, "GHz"),
            "ratio": quantity(scales.ratio, "1"),
            "E01": quantity(f01, "GHz"),
            "alpha": quantity(spec.alpha / H, "MHz"),
            "alpha_quartic_pert": quantity(perturbation.transmon_quartic_alpha(scales.E_c) / H, "MHz"),
            "n01": quantity(n01, "1"),
            "convergence": convergence,
        }
    )
    if series.warnings:
        row["warnings"] = list(series.warnings)

    if scales.kind == "inductor":
        # continuum perturbation theory vs exact polymer diagonalization of the arcsin(sin)^2 choice
        pert = perturbation.perturbative_alpha(scales.ratio)
        asin = spectrum.potential_fourier(spectrum.PhasePotential.arcsin_sin_squared(), k_max=k_max)
        exact = spectrum.eigendecompose(spectrum.build_charge_hamiltonian(scales, asin, n_g, max(n_max, asin.bandwidth)))
        row["arcsin_sin_squared"] = {
            "alpha_continuum_pert": quantity(pert.alpha_over_Ec * scales.E_c / H, "MHz"),
            "alpha_polymer_exact": quantity(exact.alpha / H, "MHz"),
            "E01_polymer_exact": quantity(exact.E01 / H, "GHz"),
        }

    if "resonator" in values:
        res = cfg.resonators[values["resonator"]]
        floor = settings.get("detuning_floor", resonator.DETUNING_FLOOR)
        C_qr = values["coupling_capacitance"]
        C_r = res["capacitance"]
        f_lumped = resonator.quarter_wave_frequency(res["inductance"], C_r)
        readout = {"f_r_lumped": quantity(f_lumped, "GHz"), "C_qr": quantity(C_qr, "fF"), "C_r": quantity(C_r, "fF")}
        freqs = {"lumped": f_lumped}
        eps = res.get("eps_eff")
        if eps is None and "substrate_permittivity" in res:
            eps = resonator.effective_dielectric(res["substrate_permittivity"])
        if "length" in res and eps is not None:
            f_an = resonator.quarter_wave_frequency_analytic(res["length"], eps)
            readout["eps_eff"] = quantity(eps, "1")
            readout["f_r_analytic"] = quantity(f_an, "GHz")
            freqs["analytic"] = f_an
        for method, f_r in freqs.items():
            result = resonator.coupling(C_qr, C_q, f_r, C_r, n01, f01, floor=floor)
            readout[f"g_{method}"] = quantity(result.g, "MHz")
            readout[f"chi_{method}"] = quantity(result.chi, "kHz")
        readout["beta"] = quantity(resonator.participation(C_qr, C_q), "1")
        readout["kappa"] = {"value": resonator.KAPPA, "unit": "1", "note": resonator.KAPPA_NOTE}
        row["readout"] = readout
    return row


def run_report(cfg: RunConfig, jobs: int = 1) -> list[dict]:
    names = list(cfg.qubits)
    if jobs > 1 and len(names) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(qubit_report, names, [cfg] * len(names)))
    return [qubit_report(n, cfg) for n in names]


def to_structured(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _v(q, digits=4):
    if q is None:
        return "-"
    return f"{q['value']:.{digits}g}"


def report_table(rows: list[dict]) -> str:
    header = [
        ("qubit", 18), ("C_q(fF)", 8), ("L(nH)", 7), ("ratio", 7), ("E01/h(GHz)", 11),
        ("alpha/h(MHz)", 13), ("pert(MHz)", 10), ("n01", 6), ("f_r(GHz)", 13), ("g(MHz)", 13), ("chi(kHz)", 13),
    ]
    lines = ["  ".join(h.ljust(w) for h, w in header)]
    for row in rows:
        ro = row.get("readout", {})

        def pair(key, digits=4):
            a, b = ro.get(f"{key}_analytic"), ro.get(f"{key}_lumped")
            if a is None and b is None:
                return "-"
            return f"{_v(a, digits)}/{_v(b, digits)}"

        cells = [
            row["name"], _v(row["C_q"]), _v(row["L"], 3), _v(row["ratio"]), _v(row["E01"]),
            _v(row["alpha"]), _v(row["alpha_quartic_pert"]), _v(row["n01"], 3),
            f"{_v(ro.get('f_r_analytic'), 3)}/{_v(ro.get('f_r_lumped'), 3)}" if ro else "-",
            pair("g", 3), pair("chi", 3),
        ]
        lines.append("  ".join(c.ljust(w) for c, (_, w) in zip(cells, header)))
    if any("readout" in r for r in rows):
        lines.append("readout columns: analytic (length-based) / lumped (L_r, C_r) resonator frequency")
        lines.append(resonator.KAPPA_NOTE)
    return "\n".join(lines) + "\n"


CURVE_COLUMNS = ("ratio", "delta0", "delta1", "delta2", "alpha_over_Ec")


def curve_csv(results) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CURVE_COLUMNS + ("error",))
    for r in results:
        writer.writerow([repr(r.ratio), repr(r.delta0), repr(r.delta1), repr(r.delta2), repr(r.alpha_over_Ec), r.error or ""])
    return buf.getvalue()


def tline_report(cfg: RunConfig) -> list[dict]:
    out = []
    for name, sec in cfg.tlines.items():
        rec = tline.mode_report(sec["inductance"], sec["capacitance"], sec.get("cells", tline.JTWPA_CELLS))
        out.append(
            {
                "name": name,
                "N": rec["N"],
                "L": quantity(sec["inductance"], "nH"),
                "C": quantity(sec["capacitance"], "fF"),
                "E_l_line": quantity(rec["E_l_line"] / H, "GHz"),
                "E_c_line": quantity(rec["E_c_line"] / H, "MHz"),
                "line_ratio": quantity(rec["line_ratio"], "1"),
                "E_l_mode": quantity(rec["E_l_mode"] / H, "GHz"),
                "E_c_mode": quantity(rec["E_c_mode"] / H, "Hz"),
                "participation": quantity(rec["participation"], "1"),
                "alpha": quantity(rec["alpha_hz"], "Hz"),
                "notes": rec["notes"],
            }
        )
    return out


TRAJECTORY_COLUMNS = ("t", "n", "phi", "energy")


def classical_run(sec: Section):
    """Integrate one [classical] section; returns (summary dict, Trajectory)."""
    C = sec["capacitance"]
    drive = DriveWaveform(
        sec.get("drive", "zero"),
        amplitude=sec.get("drive_amplitude", 0.0),
        frequency=sec.get("drive_frequency", 0.0),
        phase=sec.get("drive_phase", 0.0),
    )
    if sec["model"] == "lc":
        scales = EnergyScales.from_elements(C, inductance=sec["inductance"])
        model = lc_model(scales, C, drive)
        expected = 1.0 / (2.0 * math.pi * math.sqrt(sec["inductance"] * C))
    else:
        scales = EnergyScales.from_elements(C, critical_current=sec["critical_current"])
        model = junction_model(scales, C, drive)
        expected = model.small_oscillation_frequency()
    steps_per_period = sec.get("steps_per_period", 1000)
    periods = sec.get("periods", 100.0)
    dt = 1.0 / (model.small_oscillation_frequency() * steps_per_period)
    n0 = sec.get("n0", model.offset(0.0) if sec["model"] == "junction" else 0.0)
    traj = integrate(model, PhaseState(n0, sec.get("phi0", 0.1)), dt, int(round(periods * steps_per_period)))
    summary = {
        "name": sec.name,
        "model": sec["model"],
        "drive": drive.kind,
        "dt": quantity(dt, "s"),
        "steps": len(traj) - 1,
        "frequency": quantity(oscillation_frequency(traj), "GHz"),
        "small_oscillation_frequency": quantity(expected, "GHz"),
        "energy_drift_max": quantity(traj.energy_drift(), "1"),
        "energy_drift_secular": quantity(traj.secular_drift(steps_per_period), "1"),
        "notes": list(traj.notes),
    }
    return summary, traj


def trajectory_csv(traj) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRAJECTORY_COLUMNS)
    for row in zip(traj.times, traj.n, traj.phi, traj.energy):
        writer.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


SWEEP_COLUMNS = ("value", "ratio", "E01_GHz", "alpha_MHz", "n01")


def _sweep_point(args):
    name, cfg, param, value = args
    if param == "theta":
        overrides = {"theta": value}
    else:
        overrides = {param: value}
    row = qubit_report(name, _without_readout(cfg, name), overrides)
    return (value, row["ratio"]["value"], row["E01"]["value"], row["alpha"]["value"], row["n01"]["value"])


def _without_readout(cfg: RunConfig, name: str) -> RunConfig:
    import copy

    cfg = copy.deepcopy(cfg)
    cfg.qubits[name].values.pop("resonator", None)
    return cfg


def run_sweep(cfg: RunConfig, name: str, jobs: int = 1) -> str:
    import numpy as np

    sec = cfg.sweeps[name]
    values = np.linspace(sec["start"], sec["stop"], sec["num"])
    tasks = [(sec["qubit"], cfg, sec["parameter"], float(v)) for v in values]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    rows.sort()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow((f"{sec['parameter']}_SI",) + SWEEP_COLUMNS[1:])
    for r in rows:
        writer.writerow([f"{float(x):.12g}" for x in r])
    return buf.getvalue()
