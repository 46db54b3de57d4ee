"""
MA(inf) weights of an ARMA model
================================

Every stationary ARMA demand can be written as a weighted sum of past
shocks. The weights drive everything else in the package.
"""

import numpy as np

from scperf import ArmaModel, psi_closed_form_arp, psi_weights, validate_model

# ARMA(1,1): psi_j = (phi + theta) phi^(j-1) for j >= 1
model = ArmaModel(phi=[0.95], theta=[0.4])
psi = psi_weights(model)
print(psi.weights[:5])
print("kept", len(psi), "weights, relative tail", psi.tail_bound)

# the tail beyond the cut is added back exactly, so the variance is not
# short by the truncated part
print("sum psi^2 =", psi.sum_sq, " closed form:", (1 + 0.4**2 + 2 * 0.95 * 0.4) / (1 - 0.95**2))

# AR(2) with complex reciprocal roots: weights oscillate
ar2 = ArmaModel(phi=[0.6, -0.4])
print(np.round(psi_weights(ar2, min_n=10).weights[:11], 4))
print(np.round(psi_closed_form_arp(ar2, 10).weights, 4))

# a root inside the unit circle is reported, not silently accepted
bad = validate_model(ArmaModel(phi=[0.5, 0.6]))
print(bad.stationary, bad.ar_root_moduli, bad.problems())
