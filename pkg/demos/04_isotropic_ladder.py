"""
Schmidt numbers of isotropic states
===================================

tr(phi_lam rho_mu) = 1 - lam mu, and the witness with lam just below d/k
is k-positive.  Together they read off SN(rho_mu) = k for
(k-1)/d < mu <= k/d.
"""

import numpy as np

from kpos import classify_rho_mu, make_rho_mu, sn_lower_bound
from kpos.spectral import maximally_entangled_frame

d = 3
F = maximally_entangled_frame(d)
for mu in np.linspace(0.05, 1.0, 12):
    fam = make_rho_mu(d, float(mu))
    print(f"mu={mu:.3f}  SN={classify_rho_mu(fam, [F])}  witness bound={sn_lower_bound(fam.rho, d)}")
