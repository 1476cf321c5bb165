"""Published reference values and side-by-side model tables.

Each row carries the published figure next to the model's value. Column
order per table is fixed by ``COLUMNS``.
"""

from __future__ import annotations

import csv
import io
import json

from .resources import (
    CALIBRATED_IONS,
    SECONDS_PER_YEAR,
    AttackScenario,
    capacity,
    gnfs_mips_years,
    load_species,
    shor_resources,
    wall_clock_years,
)

TABLE1 = {512: 2e4, 1024: 2e12, 2048: 6e22, 4096: 3e36}

TABLE2_YEARS = (1997, 2006, 2015, 2024, 2033, 2042)
TABLE2 = {
    1024: (1e7, 1e5, 2500, 38, 7 / 12, 3 * 86400 / SECONDS_PER_YEAR),
    2048: (3e17, 5e15, 7e13, 1e12, 2e10, 3e8),
    4096: (2e31, 3e29, 4e27, 7e25, 1e24, 2e22),
}

# bits -> (qubits, gates, seconds) as printed
TABLE3 = {
    512: (2564, 3e9, 33.0),
    1024: (5124, 3e10, 4.5 * 60),
    2048: (10244, 2e11, 36 * 60),
    4096: (20484, 2e12, 4.8 * 3600),
}

CAPACITY_BITS = {"Hg+": 5, "Sr+": 6, "Ca+": 6, "Ba+": 10, "Yb+": 5}

COLUMNS = {
    "table1": ["bits", "published_mips_years", "model_mips_years", "ratio"],
    "table2": ["bits", "year", "published_years", "model_years", "ratio"],
    "table3": ["bits", "qubits", "published_qubits", "gates", "published_gates", "time_s", "published_time_s", "ratio"],
    "capacity": [
        "species", "eta", "bound", "max_bits", "published_bits", "u_pulses", "qubits",
        "time_budget_s", "success_probability",
    ],
}


def table1_rows() -> list[dict]:
    rows = []
    for bits, published_value in TABLE1.items():
        model = gnfs_mips_years(bits)
        rows.append({"bits": bits, "published_mips_years": published_value, "model_mips_years": model, "ratio": model / published_value})
    return rows


def table2_rows(workstations: int = 1000, mips: float = 200.0) -> list[dict]:
    rows = []
    for bits, published in TABLE2.items():
        for year, published_value in zip(TABLE2_YEARS, published):
            sc = AttackScenario(year, workstations, mips)
            model = wall_clock_years(bits, sc)
            rows.append({"bits": bits, "year": year, "published_years": published_value, "model_years": model, "ratio": model / published_value})
    return rows


def table3_rows(clock_hz: float = 1e8) -> list[dict]:
    rows = []
    for bits, (pq, pg, pt) in TABLE3.items():
        est = shor_resources(bits, clock_hz)
        rows.append({
            "bits": bits,
            "qubits": est.qubits,
            "published_qubits": pq,
            "gates": est.gates,
            "published_gates": pg,
            "time_s": est.quantum_time,
            "published_time_s": pt,
            "ratio": est.quantum_time / pt,
        })
    return rows


def capacity_rows(eta: float = 0.01, species_path=None, physical: bool = False) -> list[dict]:
    """Per-ion factoring limits; ``physical`` ignores the calibrated bounds."""
    table = load_species(species_path)
    rows = []
    for name in CALIBRATED_IONS:
        sp = table[name].physical() if physical else table[name]
        row = capacity(sp, eta).as_row()
        row["published_bits"] = CAPACITY_BITS[name]
        rows.append({k: row[k] for k in COLUMNS["capacity"]})
    return rows


def _sig(x: float, digits: int = 1) -> str:
    return f"{x:.{digits - 1}e}" if abs(x) >= 1e4 else f"{x:.{digits}g}"


def human_seconds(s: float) -> str:
    for unit, size in (("hours", 3600), ("minutes", 60)):
        if s >= size:
            return f"{s / size:.2g} {unit}"
    return f"{s:.2g} seconds"


def human_years(y: float) -> str:
    if y >= 1:
        return f"{_sig(y, 2)} years"
    if y * 12 >= 1:
        return f"{y * 12:.2g} months"
    return f"{y * SECONDS_PER_YEAR / 86400:.2g} days"


def _pretty(which: str, rows: list[dict]) -> str:
    lines = []
    if which == "table1":
        lines.append(f"{'bits':>6}  {'published (MIPS-yr)':>19}  {'model (MIPS-yr)':>16}")
        for r in rows:
            lines.append(f"{r['bits']:>6}  {_sig(r['published_mips_years']):>19}  {_sig(r['model_mips_years'], 2):>16}")
    elif which == "table2":
        lines.append(f"{'bits':>6}  {'year':>5}  {'published':>18}  {'model':>18}")
        for r in rows:
            lines.append(
                f"{r['bits']:>6}  {r['year']:>5}  {human_years(r['published_years']):>18}  {human_years(r['model_years']):>18}"
            )
    elif which == "table3":
        lines.append(f"{'bits':>6}  {'qubits':>7}  {'gates':>8}  {'published time':>14}  {'model time':>14}")
        for r in rows:
            lines.append(
                f"{r['bits']:>6}  {r['qubits']:>7}  {_sig(r['gates']):>8}  "
                f"{human_seconds(r['published_time_s']):>14}  {human_seconds(r['time_s']):>14}"
            )
    elif which == "capacity":
        lines.append(f"{'ion':>5}  {'eta':>5}  {'bound nL':>9}  {'l_max':>5}  {'publ.':>5}  {'U pulses':>8}  {'L':>4}  {'6tau0/L':>9}")
        for r in rows:
            lines.append(
                f"{r['species']:>5}  {r['eta']:>5}  {_sig(r['bound']):>9}  {r['max_bits']:>5}  {r['published_bits']:>5}  "
                f"{r['u_pulses']:>8}  {r['qubits']:>4}  {r['time_budget_s']:>9.3g}"
            )
    else:
        for r in rows:
            lines.extend(f"{k}: {v}" for k, v in r.items())
            lines.append("")
    return "\n".join(lines) + "\n"


def render(which: str, rows: list[dict], fmt: str = "json") -> str:
    """Serialise ``rows`` as JSON (full precision), CSV or a fixed-width text table."""
    if fmt == "json":
        return json.dumps({"table": which, "rows": rows}, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        cols = COLUMNS.get(which) or list(rows[0])
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
        return buf.getvalue()
    if fmt == "pretty":
        return _pretty(which, rows)
    raise ValueError(f"unknown format {fmt!r}")


def emit_tables(which: str, fmt: str = "json", **kw) -> str:
    builders = {"table1": table1_rows, "table2": table2_rows, "table3": table3_rows, "capacity": capacity_rows}
    if which not in builders:
        raise ValueError(f"unknown table {which!r}")
    return render(which, builders[which](**kw), fmt)
