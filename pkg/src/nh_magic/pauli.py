"""Pauli strings and their matrix-free action on state vectors.

Conventions shared by the whole package:

* qubit ``s`` of a chain is bit ``s`` of the computational-basis index
  (site 0 is the least significant bit);
* ``sigma^z |0> = -|0>`` and ``sigma^z |1> = +|1>``, so in the ``(|0>, |1>)``
  ordering ``Z = diag(-1, 1)``, ``X = [[0, 1], [1, 0]]`` and ``Y = iXZ``;
* a Pauli string is written left to right starting at the first site of the
  region it acts on, e.g. ``"IXZ"`` puts ``X`` on the second site.

Strings are packed two bits per site into a Python int: bit ``2s`` holds the
X (flip) component of site ``s`` and bit ``2s + 1`` the Z (phase) component.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

LETTERS = "IXZY"
_CODE = {letter: i for i, letter in enumerate(LETTERS)}

_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[-1, 0], [0, 1]], dtype=complex),
    "Y": np.array([[0, 1j], [-1j, 0]], dtype=complex),
}


def _spread(mask: int, n: int, shift: int) -> int:
    out = 0
    for s in range(n):
        if (mask >> s) & 1:
            out |= 1 << (2 * s + shift)
    return out


@dataclass(frozen=True)
class PauliString:
    """A length-``length`` word over {I, X, Y, Z}, bit-packed into ``code``."""

    length: int
    code: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("Pauli string must have at least one site")
        if not 0 <= self.code < 4**self.length:
            raise ValueError(f"code {self.code} out of range for length {self.length}")

    @classmethod
    def from_masks(cls, x_mask: int, z_mask: int, length: int) -> "PauliString":
        return cls(length, _spread(x_mask, length, 0) | _spread(z_mask, length, 1))

    @classmethod
    def identity(cls, length: int) -> "PauliString":
        return cls(length, 0)

    def letter(self, site: int) -> str:
        return LETTERS[(self.code >> (2 * site)) & 3]

    def substitute(self, site: int, letter: str) -> "PauliString":
        """Return a copy with the letter at ``site`` replaced."""
        shift = 2 * site
        code = (self.code & ~(3 << shift)) | (_CODE[letter] << shift)
        return PauliString(self.length, code)

    @property
    def x_mask(self) -> int:
        return sum(((self.code >> (2 * s)) & 1) << s for s in range(self.length))

    @property
    def z_mask(self) -> int:
        return sum(((self.code >> (2 * s + 1)) & 1) << s for s in range(self.length))

    @property
    def weight(self) -> int:
        """Number of non-identity letters."""
        return bin(self.x_mask | self.z_mask).count("1")

    def matrix(self) -> np.ndarray:
        """Dense ``2^l x 2^l`` matrix; only meant for small strings and tests."""
        # kron puts its first factor on the most significant bit
        factors = [_MATRICES[self.letter(s)] for s in reversed(range(self.length))]
        return reduce(np.kron, factors)

    def __str__(self) -> str:
        return pauli_render(self)


def pauli_parse(text: str) -> PauliString:
    """Parse a string of I/X/Y/Z letters, first letter on site 0."""
    if not text:
        raise ValueError("empty Pauli string")
    code = 0
    for s, ch in enumerate(text):
        if ch not in _CODE:
            raise ValueError(f"invalid Pauli letter {ch!r} in {text!r}")
        code |= _CODE[ch] << (2 * s)
    return PauliString(len(text), code)


def pauli_render(p: PauliString) -> str:
    return "".join(p.letter(s) for s in range(p.length))


def all_pauli_strings(length: int):
    """Iterate over all ``4^length`` strings in code order."""
    for code in range(4**length):
        yield PauliString(length, code)


def num_qubits(psi: np.ndarray) -> int:
    n = psi.shape[-1]
    L = n.bit_length() - 1
    if n < 2 or 1 << L != n:
        raise ValueError(f"state dimension {n} is not a power of two")
    return L


def normalize(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / norm


def _resolve_sites(p: PauliString, L: int, sites) -> int:
    """Validate ``sites`` against ``p`` and return the first site."""
    if sites is None:
        sites = range(L)
    sites = range(sites[0], sites[-1] + 1) if not isinstance(sites, range) else sites
    if len(sites) != p.length:
        raise ValueError(f"Pauli string of length {p.length} applied to {len(sites)} sites")
    if sites.step != 1 or sites.start < 0 or sites.stop > L:
        raise ValueError(f"sites {sites} are not a contiguous range inside [0, {L})")
    return sites.start


def _phase_data(p: PauliString, start: int, basis: np.ndarray):
    x = p.x_mask << start
    z = p.z_mask << start
    # Y = iXZ and Z|b> = -(-1)^b |b>
    prefactor = 1j ** bin(x & z).count("1") * (-1) ** bin(z).count("1")
    signs = 1 - 2 * (np.bitwise_count(basis & z) & 1).astype(np.int8)
    return x, prefactor, signs


def apply_pauli(p: PauliString, psi: np.ndarray, sites=None) -> np.ndarray:
    """Return ``P|psi>`` for ``P`` acting on the contiguous ``sites``.

    ``sites`` defaults to the full chain. The input is never modified.
    """
    psi = np.asarray(psi)
    L = num_qubits(psi)
    start = _resolve_sites(p, L, sites)
    basis = np.arange(psi.shape[-1])
    x, prefactor, signs = _phase_data(p, start, basis)
    out = np.empty_like(psi, dtype=complex)
    out[basis ^ x] = prefactor * signs * psi
    return out


def pauli_expectation(p: PauliString, psi: np.ndarray, sites=None, *, check: float = 1e-8) -> float:
    """Real expectation value ``<psi|P|psi>`` of a normalized state.

    Raises ``FloatingPointError`` if the imaginary part exceeds ``check``;
    that can only happen for an unnormalized input or a numerics bug.
    """
    psi = np.asarray(psi)
    L = num_qubits(psi)
    start = _resolve_sites(p, L, sites)
    basis = np.arange(psi.shape[-1])
    x, prefactor, signs = _phase_data(p, start, basis)
    value = prefactor * np.vdot(psi[basis ^ x], signs * psi)
    if abs(value.imag) > check:
        raise FloatingPointError(f"<{p}> has imaginary part {value.imag:.3e}")
    return float(value.real)
