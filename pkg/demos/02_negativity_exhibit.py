"""
The negativity exhibit
======================

Runs the full pigeonhole pipeline over the family d in (D/2, D] at
D = 10^6 and extracts a discriminant whose truncated smoothed character
sum is large and negative.
"""

import resource

from reslab import charsums, resonator

params = resonator.build_params(
    10**6, mode="explicit", L=2.0, x=200.0, B=200.0, Z=200.0**1.5)
table = resonator.build_table(params)
kernel = charsums.PartialSumKernel(table)
signs = resonator.assign_signs(table, kernel.S)
table = table.with_signs(signs).with_support()

# the scan visits every odd squarefree d in (D/2, D], weighting the
# truncated sum T(d) by the resonator square R(d)^2; chunked compensated
# sums make the result identical for any worker count
report = charsums.pigeonhole_extract(params, table, signs, workers=2)

print(f"admissible discriminants: {report.admissible}")
print(f"denominator  Den = sum R(d)^2      = {report.Den:.4f}")
print(f"numerator    N   = sum R(d)^2 T(d) = {report.N:.4f}")
print(f"weighted average N/Den             = {report.ratio:.6f}")

# the pigeonhole: some d must sit at or below the weighted average --
# and the resonator biases that average enough to find a negative one
print(f"\nextremal d* = {report.extremal_d}")
print(f"T(d*) = {report.extremal_value:.6f}  (< 0, <= N/Den)")

# diagnostics: the two sigma terms of the averaged expansion
print(f"\nSigma_1 = {report.sigma1:.6e}  (<= 0 by the sign choice)")
print(f"Sigma_2 = {report.sigma2:.6f}   (= S(x) exactly)")
print(f"Den vs its (2/pi^2) D prod(1 + r'^2) model: "
      f"off-diagonal residue {report.offdiag_bound_observed:.4f} "
      f"per D^(5/6)")

peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
print(f"\npeak memory {peak:.0f} MB")
