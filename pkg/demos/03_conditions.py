"""
Which results apply?
====================

The uniqueness conditions ask for a pair (p, q) that makes two ess-inf
margins positive.  The search below reports the best pair it finds and the
margins there; a failed search is not a proof that no pair exists.
"""

import numpy as np

from hyperperiodic import assemble_report, make_problem
from hyperperiodic.conditions import coef_plus_margins

cases = {
    "strong damping": make_problem(a=2, b=1, c=1, d=2, r0=0.5, r1=0.5, K=0),
    "no damping": make_problem(a=0, b=1, c=1, d=0, r0=0.5, r1=0.5, K=0),
    "uneven damping": make_problem(a=2, b=1, c=0.5, d=0.5, r0=0.5, r1=0.5, K=0),
    "gain, lossy facets": make_problem(a=-0.5, d=-0.5, r0=0.1, r1=0.1, K=0),
    "weak coupling": make_problem(a=0.1, b=0.01, c=0.01, d=0.1, r0=0.3, r1=0.3, K=0),
}

for name, spec in cases.items():
    rep = assemble_report(spec)
    plus = rep.coef_plus
    print(f"{name}")
    print(f"  plus-condition: best (p, q) = ({plus.p:+.4f}, {plus.q:+.4f}), "
          f"margins ({plus.margin_1:+.4f}, {plus.margin_2:+.4f})")
    for m, w in ((0, rep.coef_minus_m0), (1, rep.coef_minus_m1)):
        print(f"  minus-condition m={m}: margins ({w.margin_1:+.4f}, {w.margin_2:+.4f})")
    print(f"  contraction bound {rep.contraction:.4g}")
    print(f"  applicable: {rep.applicable_theorems or 'none'}\n")

# with uneven damping the second margin is -(1/2)^(2(1-q)) for every q
spec = cases["uneven damping"]
for q in np.linspace(-2, 2, 5):
    print(f"q = {q:+.1f}: margins {coef_plus_margins(spec, 0.5, q)}")
