"""
Two k-norms of a frame
======================

The Ky Fan norm sums the top k singular values.  The k-overlap sums their
squares and equals the largest weight tr(p F F*) a rank-k projector can
capture.  Thresholds for k-positivity are written in terms of the overlap.
"""

import numpy as np

from kpos.spectral import ky_fan_norm, ky_fan_overlap, random_frame, top_k_projector

rng = np.random.default_rng(1)
F = random_frame(3, 3, rng)

print("singular values:", np.round(np.linalg.svd(F, compute_uv=False), 6))
for k in (1, 2, 3):
    print(f"k={k}  ky_fan={ky_fan_norm(F, k):.6f}  overlap={ky_fan_overlap(F, k):.6f}")

# the top-k left singular projector attains the overlap
p = top_k_projector(F, 2)
print("tr(p F F*) with optimal p:", np.trace(p @ F @ F.conj().T).real)

# a maximally entangled frame spreads weight evenly: overlap = k/d
d = 4
E = np.eye(d) / np.sqrt(d)
print("I/sqrt(4) overlaps:", [ky_fan_overlap(E, k) for k in range(1, d + 1)])
