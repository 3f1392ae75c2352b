"""
Sampling a GIRG and spreading a rumour on it
============================================

Draw one graph, look at its degrees and giant component, then run push-pull
from a random giant vertex and print how many vertices know the rumour after
each round.
"""
import numpy as np

from girgspread import ModelParams, SpreadConfig, giant_component, run_spread, sample_graph
from girgspread.model import degree_stats

# %% sample
params = ModelParams(n=2 ** 14, d=2, tau=2.5, alpha=2.0, seed=1)
g = sample_graph(params)
comp = giant_component(g)
print(f"{g.num_vertices} vertices, {g.num_edges} edges, giant {comp.giant_size}")

# mean degree per dyadic weight bucket grows roughly linearly in the weight
for b in degree_stats(g):
    if b.count >= 20:
        print(f"  weight [{b.lo:6.0f}, {b.hi:6.0f}): {b.count:6d} vertices, mean degree {b.mean:7.2f}")

# %% spread until every giant vertex is informed
tr = run_spread(g, SpreadConfig(fraction=1.0, seed=7))
informed = np.cumsum(tr.new_per_round)
for t, k in enumerate(informed):
    print(f"round {t:3d}: {k:6d} informed")
print("stop:", tr.stop)
