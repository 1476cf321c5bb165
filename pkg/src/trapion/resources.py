"""Classical and quantum factoring cost models and trapped-ion decoherence bounds.

Units: seconds, metres, angular frequencies in rad/s, work in MIPS-years.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .errors import MissingParameters

SPEED_OF_LIGHT = 2.99792458e8
SECONDS_PER_YEAR = 365.25 * 86400
SPECIES_ENV = "TRAPION_SPECIES_CONFIG"

METASTABLE = "metastable"
RAMAN = "raman"


# --- classical GNFS ------------------------------------------------------


@dataclass(frozen=True)
class GnfsModel:
    """Runtime ``~ exp[c * l^(1/3) (ln l)^(2/3)]`` in the modulus bit length ``l``,
    pinned to ``calibration_cost`` MIPS-years at ``calibration_bits``.

    The default calibration is RSA-130 (130 decimal digits, 500 MIPS-years).
    """

    c: float = 1.923
    calibration_bits: float = 130 * math.log2(10)
    calibration_cost: float = 500.0

    @staticmethod
    def _growth(bits: float) -> float:
        return bits ** (1 / 3) * math.log(bits) ** (2 / 3)

    def mips_years(self, bits: float) -> float:
        if bits < 64:
            raise ValueError("GNFS model is calibrated for moduli of at least 64 bits")
        exponent = self.c * (self._growth(bits) - self._growth(self.calibration_bits))
        return self.calibration_cost * math.exp(exponent)


DEFAULT_GNFS = GnfsModel()


def gnfs_mips_years(bits: float, model: GnfsModel = DEFAULT_GNFS) -> float:
    return model.mips_years(bits)


@dataclass(frozen=True)
class AttackScenario:
    year: float
    workstations: int = 1000
    mips_per_workstation: float = 200.0
    base_year: float = 1997
    doubling_months: float = 18.0

    def __post_init__(self):
        if self.year < self.base_year:
            raise ValueError(f"year {self.year} precedes base year {self.base_year}")
        if self.workstations < 1 or self.mips_per_workstation <= 0 or self.doubling_months <= 0:
            raise ValueError("scenario needs positive workstations, MIPS rating and doubling period")

    def total_mips(self) -> float:
        doublings = (self.year - self.base_year) * 12 / self.doubling_months
        return self.workstations * self.mips_per_workstation * 2.0**doublings


def wall_clock_years(bits: float, scenario: AttackScenario, model: GnfsModel = DEFAULT_GNFS) -> float:
    """Years to factor on the scenario's machines, with Moore's-law speed-up."""
    return model.mips_years(bits) / scenario.total_mips()


# --- Shor resource counts -----------------------------------------------------


def shor_qubits(bits: int) -> int:
    return 5 * bits + 4


def shor_gates(bits: int) -> int:
    return 25 * bits**3


def shor_u_pulses(bits: int) -> int:
    return 96 * bits**3


@dataclass(frozen=True)
class ResourceEstimate:
    bits: int
    qubits: int
    gates: int
    u_pulses: int
    quantum_time: float
    success_probability: Optional[float] = None

    def as_row(self) -> dict:
        return {
            "bits": self.bits,
            "qubits": self.qubits,
            "gates": self.gates,
            "u_pulses": self.u_pulses,
            "time_s": self.quantum_time,
            "success_probability": self.success_probability,
        }


def shor_resources(bits: int, clock_hz: float = 1e8, species: "IonSpecies | None" = None, eta: float | None = None) -> ResourceEstimate:
    """Qubits, logic gates and U pulses for an ``bits``-bit modulus; time is ``gates / clock``.

    With a species, the estimate also carries the decoherence-limited
    success probability of the U-pulse load.
    """
    if bits < 2:
        raise ValueError("bits must be >= 2")
    if clock_hz <= 0:
        raise ValueError("clock must be positive")
    gates = shor_gates(bits)
    prob = None
    if species is not None:
        eta = species.eta if eta is None else eta
        bound = species_bound(species, eta)
        prob = success_probability(species.qubit_kind, shor_u_pulses(bits), shor_qubits(bits), bound)
    return ResourceEstimate(bits, shor_qubits(bits), gates, shor_u_pulses(bits), gates / clock_hz, prob)


def bits_for_quantum_time(seconds: float, clock_hz: float = 1e8) -> float:
    """Modulus size whose ``25 l^3`` gates take ``seconds`` at ``clock_hz``."""
    return (seconds * clock_hz / 25) ** (1 / 3)


# --- ion species --------------------------------------------------------------


@dataclass(frozen=True)
class IonSpecies:
    name: str
    qubit_kind: str
    tau0: Optional[float] = None
    tau_ex: Optional[float] = None
    tau1: Optional[float] = None
    lambda0: Optional[float] = None
    lambda_ex: Optional[float] = None
    eta_default: float = 0.01
    bound_rhs_override: Optional[float] = None

    def __post_init__(self):
        if self.qubit_kind not in (METASTABLE, RAMAN):
            raise ValueError(f"{self.name}: qubit_kind must be '{METASTABLE}' or '{RAMAN}'")
        for attr in ("tau0", "tau_ex", "tau1", "lambda0", "lambda_ex", "bound_rhs_override"):
            v = getattr(self, attr)
            if v is not None and not v > 0:
                raise ValueError(f"{self.name}: {attr} must be positive")
        if not 0 < self.eta_default < 1:
            raise ValueError(f"{self.name}: eta must lie in (0, 1)")

    @property
    def eta(self) -> float:
        return self.eta_default

    @classmethod
    def from_json(cls, name: str, obj: dict) -> IonSpecies:
        return cls(
            name=name,
            qubit_kind=obj["qubit_kind"],
            tau0=obj.get("tau0_s"),
            tau_ex=obj.get("tau_ex_s"),
            tau1=obj.get("tau1_s"),
            lambda0=obj.get("lambda0_m"),
            lambda_ex=obj.get("lambda_ex_m"),
            eta_default=obj.get("eta", 0.01),
            bound_rhs_override=obj.get("bound_rhs_over_eta"),
        )

    def physical(self) -> IonSpecies:
        """Copy without the calibrated bound, so bounds come from the level data."""
        return IonSpecies(
            self.name, self.qubit_kind, self.tau0, self.tau_ex, self.tau1,
            self.lambda0, self.lambda_ex, self.eta_default, None,
        )


def load_species(path: str | os.PathLike | None = None) -> dict[str, IonSpecies]:
    """Species table from ``path``, ``$TRAPION_SPECIES_CONFIG`` or the bundled file."""
    path = path or os.environ.get(SPECIES_ENV)
    if path:
        with open(path) as fh:
            raw = json.load(fh)
    else:
        raw = json.loads(resources.files("trapion").joinpath("data/species.json").read_text())
    return {name: IonSpecies.from_json(name, obj) for name, obj in raw.items()}


CALIBRATED_IONS = ("Hg+", "Sr+", "Ca+", "Ba+", "Yb+")


# --- decoherence bounds -------------------------------------------------------


def metastable_time_budget(num_qubits: int, tau0: float, occupancy: float = 2 / 3) -> float:
    """Upper limit on ``n*t`` from spontaneous decay of ``|1>``: ``4 tau0 / (occupancy L)``.

    At the default occupancy of 2/3 this is ``6 tau0 / L``.
    """
    if num_qubits < 1 or not tau0 > 0 or not 0 < occupancy <= 1:
        raise ValueError("need L >= 1, tau0 > 0 and occupancy in (0, 1]")
    return 4 * tau0 / (occupancy * num_qubits)


def two_level_breakdown(omega_ex: float, delta: float) -> float:
    """Population leaked to an off-resonant extraneous level, ``Omega_ex^2 / (8 Delta^2)``."""
    if not delta > 0:
        raise ValueError("detuning must be positive")
    return omega_ex**2 / (8 * delta**2)


def emission_constraint(n: int, t: float, omega_ex: float, delta: float, tau_ex: float) -> bool:
    """True when fewer than one photon is expected from the extraneous level."""
    if not tau_ex > 0:
        raise ValueError("tau_ex must be positive")
    return n * t * two_level_breakdown(omega_ex, delta) / tau_ex < 1


def detuning_from_wavelengths(lambda0: float, lambda_ex: float) -> float:
    """Angular detuning of a laser on the qubit line from the extraneous transition."""
    return 2 * math.pi * SPEED_OF_LIGHT * abs(1 / lambda_ex - 1 / lambda0)


def metastable_rhs(eta: float, tau_ex: float, delta: float, wavelength_ratio: float = 1.0) -> float:
    """``eta sqrt(20/pi) (lambda0/lambda_ex)^(3/2) tau_ex Delta``."""
    return eta * math.sqrt(20 / math.pi) * wavelength_ratio**1.5 * tau_ex * delta


def metastable_bound(species: IonSpecies, eta: float, delta: float | None = None) -> float:
    """Largest allowed ``n*L`` for a metastable qubit.

    A species carrying ``bound_rhs_override`` returns ``eta * override``.
    Otherwise the bound is evaluated from the level data, with ``delta``
    defaulting to the detuning between the two transitions.
    """
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    if species.bound_rhs_override is not None:
        return eta * species.bound_rhs_override
    if None in (species.tau_ex, species.lambda0, species.lambda_ex):
        raise MissingParameters(f"{species.name}: metastable bound needs tau_ex, lambda0 and lambda_ex")
    if delta is None:
        delta = detuning_from_wavelengths(species.lambda0, species.lambda_ex)
    return metastable_rhs(eta, species.tau_ex, delta, species.lambda0 / species.lambda_ex)


def raman_bound(species: IonSpecies, eta: float, delta: float | None = None) -> float:
    """Largest allowed ``n*sqrt(L)`` for a Raman qubit: ``8 eta tau1 Delta``."""
    if species.bound_rhs_override is not None and delta is None:
        return eta * species.bound_rhs_override
    if species.tau1 is None or delta is None:
        raise MissingParameters(f"{species.name}: Raman bound needs tau1 and a detuning")
    return 8 * eta * species.tau1 * delta


def species_bound(species: IonSpecies, eta: float, delta: float | None = None) -> float:
    if species.qubit_kind == METASTABLE:
        return metastable_bound(species, eta, delta)
    return raman_bound(species, eta, delta)


def algorithmic_load(kind: str, n: float, num_qubits: float) -> float:
    """Left-hand side of the bound: ``n*L`` (metastable) or ``n*sqrt(L)`` (Raman)."""
    if kind == METASTABLE:
        return n * num_qubits
    if kind == RAMAN:
        return n * math.sqrt(num_qubits)
    raise ValueError(f"unknown qubit kind {kind!r}")


def success_probability(kind: str, n: float, num_qubits: float, bound: float) -> float:
    """``exp(-load / bound)``; equals ``1/e`` when the load sits on the bound."""
    if not bound > 0:
        raise ValueError("bound must be positive")
    return math.exp(-algorithmic_load(kind, n, num_qubits) / bound)


def max_factorable_bits(species: IonSpecies, eta: float | None = None, delta: float | None = None) -> int:
    """Largest ``l`` whose Shor load (``96 l^3`` U pulses on ``5l+4`` ions) stays within the bound."""
    eta = species.eta if eta is None else eta
    bound = species_bound(species, eta, delta)
    l = 0
    while algorithmic_load(species.qubit_kind, shor_u_pulses(l + 1), shor_qubits(l + 1)) <= bound:
        l += 1
    return l


@dataclass(frozen=True)
class CapacityRow:
    species: str
    eta: float
    bound: float
    max_bits: int
    u_pulses: int
    qubits: int
    time_budget_s: Optional[float]
    success_probability: float

    def as_row(self) -> dict:
        return dict(self.__dict__)


def capacity(species: IonSpecies, eta: float | None = None, delta: float | None = None) -> CapacityRow:
    eta = species.eta if eta is None else eta
    bound = species_bound(species, eta, delta)
    l = max_factorable_bits(species, eta, delta)
    n, L = shor_u_pulses(l), shor_qubits(l)
    budget = metastable_time_budget(L, species.tau0) if species.tau0 else None
    return CapacityRow(species.name, eta, bound, l, n, L, budget, success_probability(species.qubit_kind, n, L, bound))
