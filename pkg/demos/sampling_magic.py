"""
Sampling Pauli strings instead of enumerating them
==================================================

Exact M2 needs all 4^l Pauli strings. A Metropolis walk over strings,
weighted by c_P^2, gets the same number from a few thousand coefficient
evaluations, with an error bar from independent chains.
"""

import math

from nh_magic import IsingParams, SamplerConfig, build_nhti, estimate_m2, exact_magic, ground_state

psi = ground_state(build_nhti(IsingParams(10, 1.2, 0.5))).vector

for region in (None, (2, 7)):
    exact, pur = exact_magic(psi, region)
    est = estimate_m2(psi, region, SamplerConfig(chains=4, steps=10_000, seed=1))
    label = "whole chain" if region is None else f"sites {region[0]}..{region[1]}"
    print(f"{label:12s} exact {exact:.4f} (purity {pur:.3f})  sampled {est.m2:.4f} +- {est.stderr:.4f}"
          f"  acceptance {est.acceptance_rate:.2f}")

# Over repeated seeds nearly all estimates land within three standard errors.
# With only four chains the error bar is itself noisy, so expect a rare miss.
exact, _ = exact_magic(psi)
misses = 0
for seed in range(10):
    est = estimate_m2(psi, cfg=SamplerConfig(chains=4, steps=5_000, seed=100 + seed))
    misses += abs(est.m2 - exact) > 3 * est.stderr
print(f"\n{10 - misses}/10 seeded runs within 3 stderr of {exact:.4f}")
print(f"a single T state: log2(4/3) = {math.log2(4 / 3):.4f}")
