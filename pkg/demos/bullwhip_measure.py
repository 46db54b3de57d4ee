"""
Bullwhip measure against lead time
==================================

M = Var(orders) / Var(demand) for a retailer running an order-up-to
policy with minimum mean-squared-error forecasts.
"""

from scperf import (
    ArmaModel,
    bullwhip_ar1,
    bullwhip_arma11,
    bullwhip_general,
    bullwhip_increases_at,
    psi_weights,
)

models = {
    "AR(2) -0.2, 0.7": ArmaModel(phi=[-0.2, 0.7]),
    "AR(2)  0.6,-0.4": ArmaModel(phi=[0.6, -0.4]),
    "AR(2)  0.7, 0.2": ArmaModel(phi=[0.7, 0.2]),
}

print("L  " + "  ".join(models))
psis = {k: psi_weights(m, min_n=11) for k, m in models.items()}
for L in range(1, 11):
    print(f"{L:<2} " + "  ".join(f"{bullwhip_general(p, L).m:15.6f}" for p in psis.values()))

# same sign, positive AR terms: M grows with L. Mixed signs: no clear pattern.
p = psis["AR(2) -0.2, 0.7"]
print([bullwhip_increases_at(p, L) for L in range(1, 10)])

# closed forms for the two small cases
print(bullwhip_ar1(0.5, 1).m, bullwhip_ar1(-0.5, 1).m)
print(bullwhip_arma11(0.95, 0.4, 5).m)

# phi + theta = 0 sits exactly on the boundary: no amplification at any L
print([round(bullwhip_arma11(0.3, -0.3, L).m, 12) for L in (1, 2, 7)])
