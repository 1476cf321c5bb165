"""Command-line front end: ``trapion {simulate,compile,factor,rsa,estimate}``.

Exit status is 0 on success, 2 for bad input, 1 for runtime failures.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import rsa, tables
from .circuit import GateCircuit, run_gates
from .compiler import (
    LaserParams,
    PulseSchedule,
    compile_circuit,
    count_u_pulses,
    execute,
    schedule_duration,
    v_pulse_duration,
)
from .errors import InputFormatError, PrecheckFailed, TrapionError
from .qubits import sample_qubit_counts
from .resources import (
    AttackScenario,
    capacity,
    detuning_from_wavelengths,
    gnfs_mips_years,
    load_species,
    shor_resources,
    species_bound,
    wall_clock_years,
)
from .shor import factor_with_report
from .state import RegisterShape, new_ground_state, sample_counts

DEFAULT_SEED = 0


class InputError(Exception):
    pass


def _load_json(path: str, what: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} file {path!r} is not valid JSON: {exc}") from exc


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _species_table(args):
    table = load_species(getattr(args, "species_config", None))
    if getattr(args, "mode", None) == "physical":
        table = {k: v.physical() for k, v in table.items()}
    return table


def _pick_species(args):
    table = _species_table(args)
    if args.species not in table:
        raise InputError(f"unknown species {args.species!r}; known: {', '.join(table)}")
    return table[args.species]


# --- subcommands --------------------------------------------------------------


def cmd_simulate(args) -> dict:
    rng = np.random.default_rng(args.seed)
    if args.pulses:
        if args.backend == "gate":
            raise InputError("--pulses requires --backend pulse")
        schedule = PulseSchedule.from_json(_load_json(args.pulses, "schedule"), args.phonon_dim)
        backend = "pulse"
    else:
        circuit = GateCircuit.from_json(_load_json(args.circuit, "circuit"))
        backend = args.backend
    out = {"backend": backend, "seed": args.seed, "shots": args.shots}
    if backend == "gate":
        qs = run_gates(circuit)
        out["num_ions"] = circuit.num_ions
        out["state"] = qs.to_json()
        out["qubit_amplitudes"] = qs.to_json()["amplitudes"]
        if args.shots:
            out["counts"] = sample_qubit_counts(qs, args.shots, rng)
        return out
    if not args.pulses:
        schedule = compile_circuit(circuit, args.phonon_dim)
    st = new_ground_state(RegisterShape(schedule.shape.num_ions, args.phonon_dim))
    execute(schedule, st)
    out["num_ions"] = st.num_ions
    out["u_pulse_count"] = count_u_pulses(schedule)
    out["state"] = st.to_json()
    out["qubit_amplitudes"] = [[float(z.real), float(z.imag)] for z in st.qubit_amplitudes()]
    out["aux_population"] = st.aux_population()
    out["phonon_populations"] = [float(p) for p in st.phonon_populations()]
    if args.shots:
        out["counts"] = sample_counts(st, args.shots, rng)
    return out


def cmd_compile(args) -> dict:
    circuit = GateCircuit.from_json(_load_json(args.circuit, "circuit"))
    schedule = compile_circuit(circuit, args.phonon_dim)
    laser = LaserParams(args.rabi, args.eta, circuit.num_ions)
    out = schedule.to_json()
    out["duration_s"] = schedule_duration(schedule, laser)
    out["v_duration_s"] = v_pulse_duration(schedule, laser)
    return out


def cmd_factor(args) -> dict:
    rng = np.random.default_rng(args.seed)
    rep = factor_with_report(args.n, rng, args.mode, a_bits=args.a_bits)
    rep["seed"] = args.seed
    return rep


def cmd_rsa(args) -> dict:
    if args.action == "keygen":
        _, priv = rsa.keygen(args.bits, args.e, args.seed)
        return priv.to_json()
    key = rsa.key_from_json(_load_json(args.key, "key"))
    if args.action == "encrypt":
        pub = key.public if isinstance(key, rsa.RsaPrivateKey) else key
        return {"ciphertext": str(rsa.encrypt(pub, args.message))}
    if not isinstance(key, rsa.RsaPrivateKey):
        raise InputError("decryption needs a key file with fields 'p', 'q' and 'd'")
    return {"message": str(rsa.decrypt(key, args.ciphertext))}


def cmd_estimate(args) -> str:
    what, fmt = args.target, args.format
    if what in ("table1", "table2", "table3", "capacity") and not (what == "capacity" and args.species):
        kw = {}
        if what == "table2":
            kw = {"workstations": args.workstations, "mips": args.mips}
        elif what == "table3":
            kw = {"clock_hz": args.clock_hz}
        elif what == "capacity":
            kw = {
                "eta": args.eta if args.eta is not None else 0.01,
                "species_path": args.species_config,
                "physical": args.mode == "physical",
            }
        return tables.emit_tables(what, fmt, **kw)
    if what == "gnfs":
        if args.bits is None:
            return tables.emit_tables("table1", fmt)
        row = {"bits": args.bits, "mips_years": gnfs_mips_years(args.bits)}
        if args.year is not None:
            sc = AttackScenario(args.year, args.workstations, args.mips)
            row["year"] = args.year
            row["wall_clock_years"] = wall_clock_years(args.bits, sc)
        return tables.render("gnfs", [row], fmt)
    if what == "quantum":
        if args.bits is None:
            return tables.emit_tables("table3", fmt, clock_hz=args.clock_hz)
        sp = _pick_species(args) if args.species else None
        est = shor_resources(args.bits, args.clock_hz, sp, args.eta)
        return tables.render("quantum", [est.as_row()], fmt)
    if what == "capacity":
        sp = _pick_species(args)
        return tables.render("capacity-one", [capacity(sp, args.eta, args.delta).as_row()], fmt)
    # bounds
    if not args.species:
        raise InputError("estimate bounds needs --species")
    sp = _pick_species(args)
    eta = sp.eta if args.eta is None else args.eta
    row = {"species": sp.name, "qubit_kind": sp.qubit_kind, "eta": eta, "bound": species_bound(sp, eta, args.delta)}
    if sp.qubit_kind == "metastable" and sp.lambda0 and sp.lambda_ex:
        phys = sp.physical()
        delta = args.delta or detuning_from_wavelengths(sp.lambda0, sp.lambda_ex)
        row["detuning_rad_s"] = delta
        row["bound_from_level_data"] = species_bound(phys, eta, delta)
    return tables.render("bounds", [row], fmt)


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trapion", description="Trapped-ion quantum computer simulator and factoring estimator")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_choices=("json",)):
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--format", choices=fmt_choices, default="json")

    s = sub.add_parser("simulate", help="run a circuit or pulse schedule")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--circuit")
    src.add_argument("--pulses")
    s.add_argument("--backend", choices=("pulse", "gate"), default="pulse")
    s.add_argument("--phonon-dim", type=int, default=2)
    s.add_argument("--shots", type=int, default=0)
    common(s)
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("compile", help="lower a circuit to a pulse schedule")
    c.add_argument("--circuit", required=True)
    c.add_argument("--phonon-dim", type=int, default=2)
    c.add_argument("--rabi", type=float, default=1e8, help="Rabi frequency in rad/s")
    c.add_argument("--eta", type=float, default=0.1, help="Lamb-Dicke parameter")
    common(c)
    c.set_defaults(func=cmd_compile)

    f = sub.add_parser("factor", help="factor N with Shor's algorithm")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--mode", choices=("simulated", "oracle"), default="simulated")
    f.add_argument("--a-bits", type=int, default=None, help="argument register size (default 2l)")
    common(f)
    f.set_defaults(func=cmd_factor)

    r = sub.add_parser("rsa", help="textbook RSA")
    r.add_argument("action", choices=("keygen", "encrypt", "decrypt"))
    r.add_argument("--bits", type=int, default=64)
    r.add_argument("--e", type=int, default=65537)
    r.add_argument("--key")
    r.add_argument("--message", type=int)
    r.add_argument("--ciphertext", type=int)
    common(r)
    r.set_defaults(func=cmd_rsa)

    e = sub.add_parser("estimate", help="resource and runtime models")
    e.add_argument("target", choices=("gnfs", "quantum", "capacity", "bounds", "table1", "table2", "table3"))
    e.add_argument("--bits", type=int)
    e.add_argument("--clock-hz", type=float, default=1e8)
    e.add_argument("--year", type=float)
    e.add_argument("--workstations", type=int, default=1000)
    e.add_argument("--mips", type=float, default=200.0)
    e.add_argument("--species")
    e.add_argument("--species-config", help="species JSON (overrides $TRAPION_SPECIES_CONFIG)")
    e.add_argument("--eta", type=float)
    e.add_argument("--delta", type=float, help="detuning in rad/s")
    e.add_argument("--mode", choices=("calibrated", "physical"), default="calibrated")
    common(e, ("json", "csv", "pretty"))
    e.set_defaults(func=cmd_estimate)
    return p


def _validate(args):
    if args.command == "rsa":
        if args.action != "keygen" and not args.key:
            raise InputError(f"rsa {args.action} needs --key")
        if args.action == "encrypt" and args.message is None:
            raise InputError("rsa encrypt needs --message")
        if args.action == "decrypt" and args.ciphertext is None:
            raise InputError("rsa decrypt needs --ciphertext")


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(args)
        _emit(args, args.func(args))
    except (InputError, InputFormatError, PrecheckFailed, ValueError, KeyError) as exc:
        print(f"trapion: error: {exc}", file=sys.stderr)
        return 2
    except TrapionError as exc:
        print(f"trapion: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
