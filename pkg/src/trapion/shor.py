"""Desk-scale Shor factoring on the gate-level backend.

Modular exponentiation is applied as a basis permutation
``|a>|y> -> |a>|y XOR x^a mod N>`` rather than a compiled reversible circuit;
the argument register holds ``2l`` qubits by default and the function register
``l`` qubits, where ``l`` is the bit length of ``N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import gates as G
from .errors import NotCoprime, PrecheckFailed, RegisterTooSmall, RetriesExhausted
from .qubits import QubitState, apply_permutation, apply_qubit_gate, measure_qubits
from .rsa import is_probable_prime, modpow

MAX_RETRIES = 32
MAX_SIMULATED_N = 21


def classical_order(x: int, n: int) -> int:
    """Smallest ``r >= 1`` with ``x**r == 1 (mod n)``, by iteration."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    if math.gcd(x, n) != 1:
        raise NotCoprime(f"gcd({x}, {n}) = {math.gcd(x, n)}")
    r, y = 1, x % n
    while y != 1:
        y = y * x % n
        r += 1
    return r


def _powmod_table(x: int, n: int, count: int) -> np.ndarray:
    """``x**a mod n`` for ``a = 0 .. count-1``."""
    a = np.arange(count, dtype=np.int64)
    result = np.ones(count, dtype=np.int64)
    base = x % n
    while a.any():
        odd = (a & 1).astype(bool)
        result[odd] = result[odd] * base % n
        base = base * base % n
        a >>= 1
    return result % n


def modexp_oracle(x: int, n: int, a_bits: int, f_bits: int) -> np.ndarray:
    """Permutation of basis indices ``a * 2**f_bits + y`` realising ``y -> y XOR (x^a mod n)``."""
    if f_bits < n.bit_length():
        raise RegisterTooSmall(f"function register of {f_bits} bits cannot hold values mod {n}")
    if a_bits < 1:
        raise RegisterTooSmall("argument register needs at least one qubit")
    if n >= 2**31:
        raise RegisterTooSmall(f"modulus {n} too large for a state-vector oracle")
    fvals = _powmod_table(x, n, 2**a_bits)
    y = np.arange(2**f_bits, dtype=np.int64)
    a = np.arange(2**a_bits, dtype=np.int64)
    return (a[:, None] << f_bits | (y[None, :] ^ fvals[:, None])).reshape(-1)


def qft(qstate: QubitState, register, inverse: bool = False) -> QubitState:
    """Discrete Fourier transform of the amplitudes indexed by ``register``.

    ``|j> -> 2**(-m/2) sum_k exp(2 pi i j k / 2**m) |k>`` with the first listed
    qubit most significant.
    """
    register = [int(q) for q in register]
    n, m = qstate.num_qubits, len(register)
    if len(set(register)) != m or any(not 0 <= q < n for q in register):
        raise ValueError(f"bad register {register} for {n} qubits")
    psi = qstate.amplitudes.reshape((2,) * n)
    psi = np.moveaxis(psi, register, range(m)).reshape(2**m, -1)
    if inverse:
        psi = np.fft.fft(psi, axis=0, norm="ortho")
    else:
        psi = np.fft.ifft(psi, axis=0, norm="ortho")
    psi = np.moveaxis(psi.reshape((2,) * n), range(m), register)
    qstate.amplitudes = np.ascontiguousarray(psi).reshape(-1)
    return qstate


def qft_by_gates(qstate: QubitState, register) -> QubitState:
    """Same transform as :func:`qft`, built from Hadamards, controlled phases and swaps."""
    register = list(register)
    m = len(register)
    for i in range(m):
        apply_qubit_gate(qstate, [register[i]], G.HADAMARD)
        for j in range(i + 1, m):
            apply_qubit_gate(qstate, [register[j], register[i]], G.controlled_phase(math.pi / 2 ** (j - i)))
    swap = np.eye(4)[[0, 2, 1, 3]]
    for i in range(m // 2):
        apply_qubit_gate(qstate, [register[i], register[m - 1 - i]], swap)
    return qstate


def convergents(num: int, den: int) -> Iterator[Fraction]:
    """Successive continued-fraction convergents of ``num/den``."""
    h0, h1, k0, k1 = 0, 1, 1, 0
    while den:
        q, r = divmod(num, den)
        h0, h1 = h1, q * h1 + h0
        k0, k1 = k1, q * k1 + k0
        yield Fraction(h1, k1)
        num, den = den, r


def extract_order(measured: int, m: int, x: int, n: int) -> int | None:
    """Recover the order of ``x`` from a Fourier sample ``measured / 2**m``.

    Scans convergents with denominator at most ``n``; the first denominator
    ``q`` with ``x**q == 1`` is reduced to its smallest divisor that still works.
    """
    for c in convergents(measured, 2**m):
        q = c.denominator
        if q > n:
            break
        if modpow(x, q, n) == 1:
            for dvs in range(1, q + 1):
                if q % dvs == 0 and modpow(x, dvs, n) == 1:
                    return dvs
    return None


@dataclass(frozen=True)
class OrderResult:
    order: int | None
    success: bool
    measured_value: int
    register_size: int


def _check_instance(n: int, x: int):
    if n < 3:
        raise ValueError("modulus must be >= 3")
    if math.gcd(x, n) != 1:
        raise NotCoprime(f"gcd({x}, {n}) = {math.gcd(x, n)}")


def run_order_finding(n: int, x: int, rng: np.random.Generator, a_bits: int | None = None) -> OrderResult:
    """One shot of quantum order finding for ``x`` modulo ``n``.

    ``a_bits`` defaults to ``2l``; anything below ``l+1`` is refused.
    """
    _check_instance(n, x)
    l = n.bit_length()
    a_bits = 2 * l if a_bits is None else a_bits
    if a_bits < l + 1:
        raise RegisterTooSmall(f"argument register of {a_bits} qubits is below the minimum {l + 1}")
    reg = list(range(a_bits))
    qs = QubitState(a_bits + l)
    # Hadamards on |0...0> give the uniform superposition over the argument register
    amps = qs.amplitudes.reshape(2**a_bits, 2**l)
    amps[:, 0] = 2 ** (-a_bits / 2)
    apply_permutation(qs, modexp_oracle(x, n, a_bits, l))
    qft(qs, reg)
    meas = measure_qubits(qs, rng, reg)
    r = extract_order(meas.value, a_bits, x, n)
    return OrderResult(r, r is not None, meas.value, a_bits)


def legendre_factor(y: int, n: int) -> tuple[int, int] | None:
    """Factors from a nontrivial square root of unity, ``y**2 == 1 (mod n)``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    y %= n
    if y * y % n != 1 or y in (1, n - 1):
        return None
    a, b = math.gcd(y - 1, n), math.gcd(y + 1, n)
    return (min(a, b), max(a, b))


def _integer_root(n: int, k: int) -> int:
    """Floor of the k-th root of ``n``."""
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def precheck(n: int):
    """Reject moduli Shor's reduction cannot split: even, prime, or a prime power."""
    if n < 3 or n % 2 == 0:
        raise PrecheckFailed(f"{n} is even or too small")
    if is_probable_prime(n):
        raise PrecheckFailed(f"{n} is prime")
    for k in range(2, n.bit_length() + 1):
        base = _integer_root(n, k)
        if base > 1 and base**k == n and is_probable_prime(base):
            raise PrecheckFailed(f"{n} = {base}^{k} is a prime power")


def factor_with_report(
    n: int,
    rng: np.random.Generator,
    mode: str = "simulated",
    max_retries: int = MAX_RETRIES,
    max_simulated_n: int = MAX_SIMULATED_N,
    a_bits: int | None = None,
) -> dict:
    """Run Shor's reduction until a split of ``n`` is found; returns the run report."""
    if mode not in ("simulated", "oracle"):
        raise ValueError(f"unknown mode {mode!r}")
    precheck(n)
    if mode == "simulated" and n > max_simulated_n:
        raise PrecheckFailed(f"{n} exceeds the simulated-mode limit {max_simulated_n}; use oracle mode")
    coprimes = [x for x in range(2, n - 1) if math.gcd(x, n) == 1]
    l = n.bit_length()
    transcript = []
    for attempt in range(1, max_retries + 1):
        x = int(coprimes[rng.integers(len(coprimes))])
        if mode == "simulated":
            res = run_order_finding(n, x, rng, a_bits)
            r, measured, bits = res.order, res.measured_value, res.register_size
        else:
            r, measured, bits = classical_order(x, n), None, 2 * l
        transcript.append({"x": x, "measured": measured, "order": r})
        if r is None or r % 2:
            continue
        y = modpow(x, r // 2, n)
        split = legendre_factor(y, n)
        if split is None:
            continue
        p = split[0]
        return {
            "n": n,
            "x": x,
            "measured": measured,
            "order": r,
            "factors": [p, n // p],
            "register_bits": bits,
            "mode": mode,
            "attempts": attempt,
            "transcript": transcript,
        }
    raise RetriesExhausted(f"no factor of {n} after {max_retries} attempts")


def shor_factor(n: int, rng: np.random.Generator, mode: str = "simulated", **kw) -> tuple[int, int]:
    rep = factor_with_report(n, rng, mode, **kw)
    p, q = rep["factors"]
    return p, q


__all__ = [
    "OrderResult",
    "classical_order",
    "convergents",
    "extract_order",
    "factor_with_report",
    "legendre_factor",
    "modexp_oracle",
    "precheck",
    "qft",
    "qft_by_gates",
    "run_order_finding",
    "shor_factor",
]
