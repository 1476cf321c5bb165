"""Textbook RSA over Python integers: totient, Euler's theorem, keys, encrypt/decrypt.

No padding, no signatures, no side-channel hardening.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import (
    FixedExponentNotCoprime,
    InputFormatError,
    MessageOutOfRange,
    NoInverse,
    NotCoprime,
    TooLargeForBruteForce,
)

BRUTE_TOTIENT_LIMIT = 10**6
MR_ROUNDS = 64

_SMALL_PRIMES = [p for p in range(3, 1000, 2) if all(p % q for q in range(3, int(p**0.5) + 1, 2))]

gcd = math.gcd


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b)``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def modinv(e: int, m: int) -> int:
    g, s, _ = egcd(e % m, m)
    if g != 1:
        raise NoInverse(f"{e} has no inverse modulo {m} (gcd {g})")
    return s % m


def modpow(base: int, exponent: int, modulus: int) -> int:
    """Left-to-right square-and-multiply."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if exponent < 0:
        return modpow(modinv(base, modulus), -exponent, modulus)
    result = 1 % modulus
    base %= modulus
    for bit in bin(exponent)[2:]:
        result = result * result % modulus
        if bit == "1":
            result = result * base % modulus
    return result


def is_probable_prime(n: int, rounds: int = MR_ROUNDS, rng: random.Random | None = None) -> bool:
    """Miller-Rabin with random bases after trial division by small primes."""
    if n < 2:
        return False
    if n in (2, 3):
        return True
    if n % 2 == 0:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    rng = rng or random.Random(n)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def totient(m: int, factors: tuple[int, int] | None = None) -> int:
    """Euler's phi. Counts coprimes directly, or uses ``(p-1)(q-1)`` given distinct primes ``p, q``."""
    if m < 2:
        raise ValueError("totient is defined here for m >= 2")
    if factors is not None:
        p, q = factors
        if p * q != m or p == q:
            raise ValueError(f"{p} * {q} is not a product of distinct factors equal to {m}")
        return (p - 1) * (q - 1)
    if m > BRUTE_TOTIENT_LIMIT:
        raise TooLargeForBruteForce(f"m = {m} exceeds {BRUTE_TOTIENT_LIMIT}; supply its factorisation")
    return int(np.count_nonzero(np.gcd(np.arange(1, m, dtype=np.int64), m) == 1))


def euler_check(x: int, m: int) -> bool:
    if math.gcd(x, m) != 1:
        raise NotCoprime(f"gcd({x}, {m}) = {math.gcd(x, m)}")
    return modpow(x, totient(m), m) == 1 % m


@dataclass(frozen=True)
class RsaPublicKey:
    n: int
    e: int

    def to_json(self) -> dict:
        return {"n": str(self.n), "e": str(self.e)}


@dataclass(frozen=True)
class RsaPrivateKey:
    p: int
    q: int
    e: int
    d: int

    @property
    def n(self) -> int:
        return self.p * self.q

    @property
    def phi(self) -> int:
        return (self.p - 1) * (self.q - 1)

    @property
    def public(self) -> RsaPublicKey:
        return RsaPublicKey(self.n, self.e)

    def to_json(self) -> dict:
        return {"n": str(self.n), "e": str(self.e), "d": str(self.d), "p": str(self.p), "q": str(self.q)}


def key_from_primes(p: int, q: int, e: int) -> tuple[RsaPublicKey, RsaPrivateKey]:
    """Fixed-input key construction; ``e`` must already be coprime to phi(N)."""
    if p == q:
        raise ValueError("p and q must be distinct")
    for r in (p, q):
        if not is_probable_prime(r):
            raise ValueError(f"{r} is not prime")
    phi = (p - 1) * (q - 1)
    if math.gcd(e, phi) != 1:
        raise FixedExponentNotCoprime(f"gcd({e}, {phi}) = {math.gcd(e, phi)}")
    priv = RsaPrivateKey(p, q, e, modinv(e, phi))
    return priv.public, priv


def _random_prime(bits: int, rng: random.Random) -> int:
    lo, hi = 1 << (bits - 1), 1 << bits
    while True:
        cand = rng.randrange(lo, hi) | 1
        if cand < hi and is_probable_prime(cand, rng=rng):
            return cand


def keygen(bits: int, e_preference: int = 65537, rng: random.Random | int | None = None) -> tuple[RsaPublicKey, RsaPrivateKey]:
    """Random key whose modulus has exactly ``bits`` bits.

    If ``e_preference`` shares a factor with phi(N) the exponent is stepped up
    through odd values until it is coprime; the key records the value used.
    """
    if not 8 <= bits <= 2048:
        raise ValueError("bits must be in 8..2048")
    if e_preference < 3:
        raise ValueError("e_preference must be >= 3")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    pbits = (bits + 1) // 2
    qbits = bits - pbits
    while True:
        p = _random_prime(pbits, rng)
        q = _random_prime(qbits, rng)
        if p != q and (p * q).bit_length() == bits:
            break
    phi = (p - 1) * (q - 1)
    e = e_preference | 1
    while math.gcd(e, phi) != 1:
        e += 2
    priv = RsaPrivateKey(p, q, e, modinv(e, phi))
    return priv.public, priv


def encrypt(pub: RsaPublicKey, message: int) -> int:
    if not 0 <= message < pub.n:
        raise MessageOutOfRange(f"message must satisfy 0 <= M < {pub.n}")
    return modpow(message, pub.e, pub.n)


def decrypt(priv: RsaPrivateKey, ciphertext: int) -> int:
    if not 0 <= ciphertext < priv.n:
        raise MessageOutOfRange(f"ciphertext must satisfy 0 <= C < {priv.n}")
    return modpow(ciphertext, priv.d, priv.n)


def key_from_json(obj: dict):
    """Parse a key file; returns the private key when p, q and d are present, else the public key."""
    def field(name):
        v = obj.get(name)
        if not isinstance(v, str) or not v.strip().isdigit():
            raise InputFormatError(f"key: field '{name}' must be a decimal string")
        return int(v)

    if not isinstance(obj, dict):
        raise InputFormatError("key document must be a JSON object")
    n, e = field("n"), field("e")
    if all(k in obj for k in ("p", "q", "d")):
        priv = RsaPrivateKey(field("p"), field("q"), e, field("d"))
        if priv.n != n:
            raise InputFormatError("key: field 'n' does not equal p*q")
        return priv
    return RsaPublicKey(n, e)
