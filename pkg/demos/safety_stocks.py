"""
Two safety stocks
=================

SS scales the per-period demand spread by sqrt(L). SSLT uses the spread of
the L-period forecast error instead, which is smaller when demand is
strongly autocorrelated and the lead time is short.
"""

from scperf import ArmaModel, safety_stocks, scperf

model = ArmaModel(phi=[0.95], theta=[0.4])

print(" L  Bullwhip      SS    SSLT")
for L in range(1, 11):
    r = scperf(model, L, 0.95)
    print(f"{L:2d}  {r.bullwhip:8.5f}  {r.ss:6.3f}  {r.sslt:6.3f}")

# SSLT overtakes SS between L = 5 and L = 6 for this model
for L in (5, 6):
    ss, sslt = safety_stocks(model, L, 0.95)
    print(L, "SSLT < SS" if sslt < ss else "SSLT > SS")

# at L = 1 the forecast error is just the next shock
ss, sslt = safety_stocks(model, 1, 0.97)
print(f"SL 0.97: SS={ss:.3f} SSLT={sslt:.3f}, saving {100 * (1 - sslt / ss):.2f}%")

report = scperf(model, 2, 0.95)
print(report.to_dict())
