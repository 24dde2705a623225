"""
Certificates against the variational oracle
===========================================

Random single-negative-term maps on C^3 (x) C^3.  Whenever a certificate
fires the oracle must agree: certified levels have non-negative block
minima, refuted levels have a witness at least as low as the certificate's.
"""

import numpy as np

from kpos import certify_k_positive, certify_not_k_positive, choi_of_map, make_generalized_choi, min_block_eigenvalue
from kpos.spectral import ky_fan_overlap, random_frame

rng = np.random.default_rng(7)
agree = fired = 0
for trial in range(40):
    F1 = random_frame(3, 3, rng)
    m = make_generalized_choi(3, float(rng.uniform(1, 8)), F1)
    C = choi_of_map(m)
    for k in (1, 2):
        oracle = min_block_eigenvalue(C, k, restarts=8, seed=trial).min_value
        pos = certify_k_positive(m, k)
        neg = certify_not_k_positive(m, k) if ky_fan_overlap(F1, k) < 1 else None
        if pos.certified:
            fired += 1
            agree += oracle >= -1e-8
        elif neg is not None and neg.refuted:
            fired += 1
            agree += oracle <= neg.witness.value + 1e-8
print(f"{fired} certificates fired, {agree} confirmed by the oracle")
