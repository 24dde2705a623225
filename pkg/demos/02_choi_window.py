"""
k-positive but not (k+1)-positive
=================================

phi(a) = I tr(a) - lam F1 a F1* has Choi operator I (x) I - lam P1.  With
F1 = I/sqrt(d) the level-k overlap is k/d, so the map is exactly
k-positive for d/(k+1) < lam <= d/k.
"""

import numpy as np

from kpos import choi_of_map, make_generalized_choi, min_block_eigenvalue, positivity_window
from kpos.spectral import maximally_entangled_frame

d = 3
F1 = maximally_entangled_frame(d)

LABEL = {"K_POSITIVE_CERTIFIED": "yes", "NOT_K_POSITIVE_CERTIFIED": "no", "INCONCLUSIVE": "?"}

for lam in (0.9, 1.2, 1.5, 2.0, 3.0, 3.5):
    m = make_generalized_choi(d, lam, F1)
    verdicts = [LABEL[c.verdict.value] for c in positivity_window(m)]
    oracle = [min_block_eigenvalue(choi_of_map(m), k, restarts=8).min_value for k in range(1, d + 1)]
    print(f"lam={lam:<4} k-positive for k=1..3: {verdicts}  oracle min={np.round(oracle, 6).tolist()}")

# the Choi map sits at lam = d/(d-1): (d-1)-positive with a negative Choi eigenvalue
m = make_generalized_choi(d, d / (d - 1), F1)
print("Choi map min eigenvalue:", choi_of_map(m).min_eigenvalue())
