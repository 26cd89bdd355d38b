"""Logistic-map stream cipher with a diffusion measurement harness.

This is a pedagogical construction, not a vetted cryptosystem.  Chaos-based
ciphers over real numbers are known to be hard to realize in practice and
their security has not been analyzed with standard cryptographic tools; no
security guarantee is stated or implied anywhere in this API.

Keystream rule (version 1 of the container format): iterate
x <- mu*x*(1-x) for `warmup` steps from x0, then per output byte iterate
once more and emit the low byte of floor(x * 2**32).  Keystreams are
reproducible across platforms with IEEE-754 double arithmetic
(round-to-nearest-even, no extended precision).
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOrbit, DomainError

CONTAINER_MAGIC = b"CHX1"
CONTAINER_VERSION = 1
_CONTAINER_HEADER = struct.Struct("<4sBIQ")

_TWO32 = 4294967296.0


@dataclass(frozen=True)
class ChaosKey:
    """Cipher key: map parameter, initial condition, and warmup length."""

    mu: float
    x0: float
    warmup: int = 1000

    def __post_init__(self):
        if not (3.57 < self.mu <= 4.0):
            raise DomainError(f"mu must lie in (3.57, 4], got {self.mu}")
        if not (0.0 < self.x0 < 1.0):
            raise DomainError(f"x0 must lie in (0, 1), got {self.x0}")
        if self.x0 == 0.5:
            raise DomainError("x0 = 0.5 is excluded (maps to the orbit maximum)")
        if self.mu == 4.0 and self.x0 == 0.75:
            raise DomainError("x0 = 0.75 is a fixed point when mu = 4")
        if self.warmup < 256:
            raise DomainError(f"warmup must be at least 256, got {self.warmup}")


def _advance(mu: float, x: float, step: int) -> float:
    nxt = mu * x * (1.0 - x)
    if nxt == 0.0:
        raise DegenerateOrbit(f"orbit hit 0 at iterate {step}")
    if nxt == x:
        raise DegenerateOrbit(f"orbit hit the fixed point {x!r} at iterate {step}")
    return nxt


def keystream(key: ChaosKey, n: int) -> bytes:
    """Generate n keystream bytes; deterministic for a given key."""
    if n < 0:
        raise DomainError("n must be non-negative")
    x = key.x0
    for i in range(key.warmup):
        x = _advance(key.mu, x, i + 1)
    out = bytearray(n)
    for i in range(n):
        x = _advance(key.mu, x, key.warmup + i + 1)
        out[i] = int(x * _TWO32) & 0xFF
    return bytes(out)


def _xor(data: bytes, ks: bytes) -> bytes:
    if not data:
        return b""
    a = np.frombuffer(data, dtype=np.uint8)
    b = np.frombuffer(ks, dtype=np.uint8)
    return (a ^ b).tobytes()


def encrypt(key: ChaosKey, plaintext: bytes) -> bytes:
    """XOR the plaintext with the keystream; output length equals input length."""
    return _xor(plaintext, keystream(key, len(plaintext)))


def decrypt(key: ChaosKey, ciphertext: bytes) -> bytes:
    """Inverse of encrypt (XOR is an involution)."""
    return _xor(ciphertext, keystream(key, len(ciphertext)))


def bit_difference(key_a: ChaosKey, key_b: ChaosKey, n_bytes: int) -> float:
    """Fraction of differing bits between the two keys' keystreams."""
    if n_bytes < 1:
        raise DomainError("n_bytes must be positive")
    xored = _xor(keystream(key_a, n_bytes), keystream(key_b, n_bytes))
    bits = np.unpackbits(np.frombuffer(xored, dtype=np.uint8))
    return float(bits.mean())


def avalanche_test(key: ChaosKey, n_bytes: int, trials: int) -> float:
    """Mean keystream bit-difference under one-ulp perturbations of x0.

    Each trial nudges x0 by one unit in the last place, alternating the sign
    across trials, and measures the XOR bit fraction against the unperturbed
    stream.  A well-diffusing map scores close to 0.5.
    """
    if n_bytes < 1024:
        raise DomainError("n_bytes must be at least 1024")
    if trials < 8:
        raise DomainError("trials must be at least 8")
    fractions = []
    for i in range(trials):
        target = 1.0 if i % 2 == 0 else 0.0
        nudged = math.nextafter(key.x0, target)
        other = ChaosKey(mu=key.mu, x0=nudged, warmup=key.warmup)
        fractions.append(bit_difference(key, other, n_bytes))
    return float(np.mean(fractions))


def pack_container(key: ChaosKey, payload: bytes) -> bytes:
    """Encrypt and wrap: magic, version, warmup, payload length, ciphertext.

    The key itself (mu, x0) is never stored.
    """
    body = encrypt(key, payload)
    header = _CONTAINER_HEADER.pack(
        CONTAINER_MAGIC, CONTAINER_VERSION, key.warmup, len(body)
    )
    return header + body


def unpack_container(mu: float, x0: float, data: bytes) -> bytes:
    """Decrypt a container produced by pack_container with the supplied key."""
    if len(data) < _CONTAINER_HEADER.size:
        raise DomainError("truncated cipher container")
    magic, version, warmup, length = _CONTAINER_HEADER.unpack_from(data, 0)
    if magic != CONTAINER_MAGIC:
        raise DomainError(f"bad cipher container magic {magic!r}")
    if version != CONTAINER_VERSION:
        raise DomainError(f"unsupported cipher container version {version}")
    body = data[_CONTAINER_HEADER.size :]
    if len(body) != length:
        raise DomainError(
            f"container length field says {length}, payload has {len(body)} bytes"
        )
    return decrypt(ChaosKey(mu=mu, x0=x0, warmup=warmup), body)
