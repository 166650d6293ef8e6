"""
Momentum-space magic of the periodic XX chain
=============================================

With periodic boundaries each momentum pair (k, k - pi) is a two-level
problem, so the ground state is a product of small sector states and its
magic is a sum over sectors. That makes very long chains cheap.
"""

import math

import numpy as np

from nh_magic import KGrid, XXParams, total_magic_density
from nh_magic.kspace import exceptional_line_limit, exceptional_line_quadrature, momentum_resolved_magic, stabilizer_momenta

grid = KGrid(800)

# Coarse map of the magic density over (g, delta).
gs = np.linspace(0.0, 2.0, 9)
print("delta\\g " + " ".join(f"{g:6.2f}" for g in gs))
for delta in np.linspace(0.0, 2.0, 5):
    row = [total_magic_density(XXParams(2, g, delta), grid) for g in gs]
    print(f"  {delta:4.2f}  " + " ".join(f"{m:6.4f}" for m in row))

# Along g at fixed delta the density dips where g = delta.
print()
for g in np.round(np.arange(0.35, 0.66, 0.05), 10):
    print(f"delta=0.5  g={g:4.2f}  density {total_magic_density(XXParams(2, g, 0.5), grid):.6f}")

# On the line g = delta the density saturates as g grows.
print()
for g in (1, 5, 50, 500):
    print(f"g=delta={g:<4d} density {total_magic_density(XXParams(2, g, g), grid):.8f}")
print(f"closed form {exceptional_line_limit():.8f}, quadrature {exceptional_line_quadrature():.8f}")

# Sector magic vanishes at k = pi/2, where the sector matrix is a Jordan
# block, and once more below pi/2 where the sector qubit points along x.
print()
ks, magic = momentum_resolved_magic(XXParams(2, 2.0, 2.0), grid)
print(f"g=delta=2: magic at k=pi/2 is {magic[400]:.1e}")
for k in stabilizer_momenta(XXParams(2, 2.0, 2.0)):
    print(f"           second zero at k={k:.6f} (= {k / math.pi:.4f} pi)")
