"""
Ladder identities for the auxiliary quantities
==============================================

The ladder-operator coefficients of the weight have poles at z = +-1
whose residues R_n(t), r_n(t) satisfy a web of nonlinear identities
tying them to beta_n, p(n,t) and the partial sum H_n = sum_{j<n} R_j.
This demo builds the auxiliary table two independent ways (algebraic
route vs quadrature of the defining integrals) and runs every identity
as a scaled residual.
"""
from mpmath import mp, mpf

from semijacobi import (
    PrecisionContext,
    WeightParams,
    aux_by_integral,
    build_aux_table,
    build_ortho_table,
    identity_map_json,
    identity_residuals,
    tanh_sinh_rule,
)

mp.prec = 300
ctx = PrecisionContext()

params = WeightParams(mpf("0.5"), mpf(1))
table = build_ortho_table(params, 20, ctx, method="split")
aux = build_aux_table(table)

# ----------------------------------------------------------------------
# the auxiliary quantities themselves
# ----------------------------------------------------------------------
print("alpha = 0.5, t = 1\n")
print(f"{'n':>3} {'R_n':>22} {'r_n':>22} {'H_n':>22}")
for n in range(0, 20, 4):
    print(
        f"{n:>3} {mp.nstr(aux.R[n], 16):>22} {mp.nstr(aux.r[n], 16):>22}"
        f" {mp.nstr(aux.H[n], 16):>22}"
    )

# R_n tends to 2n+1+2alpha - t*1 contributions die off; r_n tends to n
print("\nR_19 - (2*19+1+2*0.5) =", mp.nstr(aux.R[19] - 40, 4))
print("r_19 - 19            =", mp.nstr(aux.r[19] - 19, 4))

# ----------------------------------------------------------------------
# quadrature cross-check of the defining integrals (needs alpha > 0)
# ----------------------------------------------------------------------
rule = tanh_sinh_rule(8, 200)
worst = mpf(0)
for n in range(20):
    R_int, r_int = aux_by_integral(table, rule, n)
    worst = max(worst, abs(R_int - aux.R[n]), abs(r_int - aux.r[n]))
print("\nmax |integral route - algebraic route| over n < 20:", mp.nstr(worst, 4))

# ----------------------------------------------------------------------
# the full identity suite as scaled residuals
# ----------------------------------------------------------------------
report = identity_residuals(table, aux)
print("\nidentity suite (max scaled residual over 1 <= n <= 19):")
print(identity_map_json(report, 8))
print("suite tolerance:", mp.nstr(report.tolerance, 3), "passed:", report.passed)
