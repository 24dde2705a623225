"""
Positive on separable elements, not positive
============================================

F0 is the normalized antisymmetric projector on C^d (x) C^d.  Its operator
norm squared is 2/(d(d-1)) while product projectors capture only
1/(d(d-1)).  The map lam (I tr - F0 . F0) - F0 . F0 is therefore positive
on separable elements but not positive for lam in
[1/(d(d-1)-1), 2/(d(d-1)-2)).
"""

from kpos import (
    generalized_choi_operator,
    make_F0,
    make_multipartite_example,
    product_block_positivity,
    sep_norm,
    sep_positive_not_positive_window,
)
from kpos.spectral import ky_fan_overlap

d = 3
dims = (d * d, d, d)
F0 = make_F0(d)
print("||F0||^2 =", ky_fan_overlap(F0, 1), " ||F0||_sep^2 =", sep_norm(F0, dims).value)

for lam in (0.15, 0.2, 0.25, 0.45, 0.5, 0.55):
    m = make_multipartite_example(d, lam)
    sep, pos = sep_positive_not_positive_window(m, dims)
    low = product_block_positivity(generalized_choi_operator(m, dims)).min_value
    print(f"lam={lam:<5} sep-positive={sep.certified!s:<5} positive={pos.certified!s:<5} "
          f"product min={low:+.6f}")
