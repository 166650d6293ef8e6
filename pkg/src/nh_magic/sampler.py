"""Metropolis-Hastings estimate of M2 by sampling Pauli strings.

Strings are drawn from ``Xi_P = c_P^2 / sum_Q c_Q^2``. Since
``E_Xi[c_P^2] = sum c^4 / sum c^2``, the estimator
``M2 = -log2(mean c_P^2)`` needs the weights only up to normalization.

A single-site move replaces the letter on one uniformly chosen site with one
of the other three letters. On its own this walk is trapped whenever the
support of ``c_P`` has a parity structure: for a real state every string
with an odd number of Y letters has ``c_P = 0``, so the number of Y letters
can never change. A fraction ``pair_fraction`` of the moves therefore
rewrites two distinct sites at once, choosing uniformly among the 15 other
letter pairs. Both moves are symmetric, so the acceptance probability is
``min(1, c_new^2 / c_old^2)``.

Every chain starts at the identity string (``c_I = 1``). Error bars come from
the spread of the per-chain means, propagated through the logarithm.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .pauli import LETTERS, PauliString, _phase_data, _resolve_sites, all_pauli_strings, num_qubits
from .rdm import as_region

PAIR_FRACTION = 0.5


@dataclass(frozen=True)
class SamplerConfig:
    chains: int = 4
    steps: int = 10_000
    burn_in: int = 1_000
    thin: int | None = None
    seed: int = 0
    pair_fraction: float = PAIR_FRACTION

    def __post_init__(self):
        if self.chains < 2:
            raise ValueError("need at least two chains for inter-chain error bars")
        if not 0 <= self.burn_in < self.steps:
            raise ValueError("burn-in must be non-negative and shorter than the chain")
        if self.thin is not None and self.thin < 1:
            raise ValueError("thinning stride must be >= 1")
        if not 0.0 <= self.pair_fraction <= 1.0:
            raise ValueError("pair_fraction must lie in [0, 1]")

    def stride(self, ell: int) -> int:
        return self.thin if self.thin is not None else 2 * ell


@dataclass
class MagicEstimate:
    m2: float
    stderr: float
    per_chain_means: list[float]
    acceptance_rate: float
    samples_per_chain: int = 0
    chain_m2: list[float] = field(default_factory=list)


class PauliWeight:
    """``c_P^2 = <psi|P|psi>^2`` for strings on a fixed region of a frozen state."""

    def __init__(self, psi: np.ndarray, region=None):
        psi = np.asarray(psi, dtype=complex)
        self.L = num_qubits(psi)
        self.region = as_region(region, self.L)
        self.psi = psi / np.linalg.norm(psi)
        self.basis = np.arange(psi.size)
        self.evaluations = 0

    @property
    def length(self) -> int:
        return len(self.region)

    def coefficient(self, p: PauliString) -> float:
        start = _resolve_sites(p, self.L, self.region)
        x, prefactor, signs = _phase_data(p, start, self.basis)
        self.evaluations += 1
        return float((prefactor * np.vdot(self.psi[self.basis ^ x], signs * self.psi)).real)

    def __call__(self, p: PauliString) -> float:
        return self.coefficient(p) ** 2


def propose(current: PauliString, rng: np.random.Generator, pair_fraction: float = PAIR_FRACTION) -> PauliString:
    n = current.length
    if n >= 2 and pair_fraction > 0 and rng.random() < pair_fraction:
        s = int(rng.integers(n))
        t = int(rng.integers(n - 1))
        t += t >= s
        old = 4 * LETTERS.index(current.letter(s)) + LETTERS.index(current.letter(t))
        new = int(rng.integers(15))
        new += new >= old
        return current.substitute(s, LETTERS[new // 4]).substitute(t, LETTERS[new % 4])
    site = int(rng.integers(n))
    old = current.letter(site)
    new = [letter for letter in LETTERS if letter != old][int(rng.integers(3))]
    return current.substitute(site, new)


def accept_probability(w_old: float, w_new: float) -> float:
    if w_new <= 0.0:
        return 0.0
    if w_old <= 0.0 or w_new >= w_old:
        return 1.0
    return w_new / w_old


def metropolis_step(current: PauliString, psi, rng: np.random.Generator, region=None, *, weight=None,
                    current_weight=None, pair_fraction: float = PAIR_FRACTION):
    """One proposal/accept cycle. Returns ``(next_string, accepted)``.

    ``weight`` may be a prebuilt :class:`PauliWeight` for ``psi``;
    ``current_weight`` skips re-evaluating ``c_P^2`` of the current string.
    """
    weight = weight or PauliWeight(psi, region)
    w_old = weight(current) if current_weight is None else current_weight
    candidate = propose(current, rng, pair_fraction)
    w_new = weight(candidate)
    if rng.random() < accept_probability(w_old, w_new):
        return candidate, True
    return current, False


def _run_chain(weight: PauliWeight, cfg: SamplerConfig, rng: np.random.Generator):
    stride = cfg.stride(weight.length)
    current = PauliString.identity(weight.length)
    w_cur = weight(current)
    samples = []
    accepted = 0
    for step in range(cfg.steps):
        candidate = propose(current, rng, cfg.pair_fraction)
        w_new = weight(candidate)
        if rng.random() < accept_probability(w_cur, w_new):
            current, w_cur = candidate, w_new
            accepted += 1
        if step >= cfg.burn_in and (step - cfg.burn_in) % stride == 0:
            samples.append(w_cur)
    return np.array(samples), accepted


def chain_rngs(cfg: SamplerConfig):
    """One independent generator per chain, spawned from the master seed."""
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.chains)]


def estimate_m2(psi, region=None, cfg: SamplerConfig | None = None) -> MagicEstimate:
    cfg = cfg or SamplerConfig()
    weight = PauliWeight(psi, region)
    if weight(PauliString.identity(weight.length)) <= 0:
        raise ValueError("identity string has zero weight; state is not normalizable")
    means, total_accepted, n_samples = [], 0, 0
    for rng in chain_rngs(cfg):
        samples, accepted = _run_chain(weight, cfg, rng)
        means.append(float(samples.mean()))
        total_accepted += accepted
        n_samples = samples.size
    means_arr = np.array(means)
    mu = float(means_arr.mean())
    sem = float(means_arr.std(ddof=1) / math.sqrt(cfg.chains))
    if mu > 0:
        m2 = -math.log2(mu)
        stderr = sem / (mu * math.log(2))
    else:
        warnings.warn("mean Pauli weight underflowed; M2 estimate is not finite", RuntimeWarning)
        m2, stderr = math.inf, math.inf
    chain_m2 = [-math.log2(m) if m > 0 else math.inf for m in means]
    return MagicEstimate(
        m2=m2,
        stderr=stderr,
        per_chain_means=means,
        acceptance_rate=total_accepted / (cfg.chains * cfg.steps),
        samples_per_chain=n_samples,
        chain_m2=chain_m2,
    )


def transition_matrix(psi, region=None, pair_fraction: float = PAIR_FRACTION):
    """Exact Markov kernel over all ``4^l`` strings, rows indexed by string code."""
    weight = PauliWeight(psi, region)
    ell = weight.length
    strings = list(all_pauli_strings(ell))
    w = np.array([weight(p) for p in strings])
    pair = pair_fraction if ell >= 2 else 0.0
    T = np.zeros((len(strings), len(strings)))
    for p in strings:
        for site in range(ell):
            for letter in LETTERS:
                if letter != p.letter(site):
                    q = p.substitute(site, letter)
                    T[p.code, q.code] += (1 - pair) / (3 * ell) * accept_probability(w[p.code], w[q.code])
        if pair:
            for s in range(ell):
                for t in range(ell):
                    if s == t:
                        continue
                    for a in LETTERS:
                        for b in LETTERS:
                            q = p.substitute(s, a).substitute(t, b)
                            if q != p:
                                rate = pair / (ell * (ell - 1) * 15)
                                T[p.code, q.code] += rate * accept_probability(w[p.code], w[q.code])
        T[p.code, p.code] = 0.0
        T[p.code, p.code] = 1.0 - T[p.code].sum()
    return T, w / w.sum()
