"""
The reduction map
=================

lam = d gives a -> I tr(a) - a.  It is positive, its level-2 witness has
value 1 - d*(2/d) = -1, and composing it with the transpose gives a PSD
Choi operator.
"""

import numpy as np

from kpos import certify_k_positive, certify_not_k_positive, compose_with_transpose, reduction_map

m = reduction_map(3)
print(certify_k_positive(m, 1).reason)

cert = certify_not_k_positive(m, 2)
print(cert.verdict.value, "mu =", cert.mu, "witness value =", cert.witness.value)

# Schmidt rank of the witness vector is at most 2
print("witness Schmidt coefficients:", np.linalg.svd(cert.witness.xi0.reshape(3, 3), compute_uv=False).round(6))

print("min eigenvalue of the co-composition:", compose_with_transpose(m).min_eigenvalue())
