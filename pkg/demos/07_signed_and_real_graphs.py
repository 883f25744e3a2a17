"""
Balance in signed graphs and communities in a real network
==========================================================

On a balanced signed graph the signed Laplacian has a kernel vector whose
signs mark the two antagonistic camps.  On Zachary's karate club the Fiedler
vector of the combinatorial Laplacian splits the club into two factions.
"""

import numpy as np

from deform_gsp import graph_core as gc
from deform_gsp.laplacian_ops import combinatorial_laplacian, signed_laplacian
from deform_gsp.spectral import eig_sym

g = gc.signed_balanced((10, 10), p_in=1.0, p_out=0.3, seed=0)
basis = eig_sym(signed_laplacian(g))
v = basis.eigenvectors[:, 0]
print(f"smallest signed-Laplacian eigenvalue: {basis.eigenvalues[0]:.1e}")
print("kernel vector:", np.round(v, 4))
print("balance partition:", gc.balance_partition(g))

k = gc.karate()
fiedler = eig_sym(combinatorial_laplacian(k)).eigenvectors[:, 1]
side = fiedler >= 0
i, j = np.nonzero(np.triu(k.weights, 1))
cut = int(np.count_nonzero(side[i] != side[j]))
print(f"\nkarate club split: {side.sum()} and {(~side).sum()} members, "
      f"{cut} of {len(i)} ties cross the split")
