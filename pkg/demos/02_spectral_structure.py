"""
Graph structure in the polynomial spectrum
==========================================

Solving ``det(L_DF(lam)) = 0`` gives a spectrum that reads off structure:
``lam = 1`` counts connected components, ``lam = -1`` counts bipartite
components and degree-one vertices produce eigenvalues at infinity.
"""

import numpy as np

from deform_gsp import graph_core as gc
from deform_gsp.pep import pep_spectrum, structure_report

graphs = {
    "path on 4 nodes": gc.Graph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]),
    "triangle": gc.Graph.from_edges(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)]),
    "two bipartite components": gc.bipartite(4, 4, 0.5, n_components=2, seed=0),
    "karate club": gc.karate(),
}

for name, g in graphs.items():
    spectrum = pep_spectrum(g)
    rep = structure_report(g)
    print(f"\n{name} ({g.n_nodes} nodes)")
    print(f"  finite eigenvalues: {len(spectrum.finite_eigenvalues)}, "
          f"infinite: {spectrum.infinite_multiplicity} (geometric {spectrum.infinite_geometric})")
    print(f"  multiplicity of +1: {rep.one_multiplicity} "
          f"(components: {rep.connected_components})")
    print(f"  multiplicity of -1: {rep.minus_one_multiplicity} "
          f"(bipartite components: {rep.bipartite_components})")
    print(f"  largest finite modulus: {rep.max_finite_modulus:.6f}")

# The triangle's spectrum is known in closed form: (lam - 1)^2 (lam^2 + lam + 1)^2
print("\ntriangle eigenvalues:", np.round(pep_spectrum(graphs["triangle"]).finite_eigenvalues, 6))
