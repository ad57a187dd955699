"""
Large-n asymptotics of beta_n, p(n,t) and the Hankel determinant
================================================================

The recurrence coefficient admits an expansion 1/4 + a_2/n^2 + ... with
corrections decaying like n^-7 after six terms, the sub-leading
coefficient one with corrections like n^-6, and ln D_n a closed-form
asymptotic whose error decays like n^-4.  The error ladders below halve
the error per doubling at exactly those rates - except at half-integer
alpha, where every correction carries the factor (1 - 4 alpha^2) and
the series collapses to an exact expression.
"""
from mpmath import mp, mpf

from semijacobi import (
    PrecisionContext,
    WeightParams,
    beta_series,
    log_hankel_at_zero,
    log_hankel_ratio_integral,
    order_fit,
    p_series,
    series_error_rows,
)

mp.prec = 300
ctx = PrecisionContext()
ns = (16, 32, 64, 128)


def ladder(params, quantity):
    rows = series_error_rows(params, quantity, ns, ctx)
    print(f"{'n':>5} {'pipeline':>26} {'series':>26} {'abs error':>12}")
    for n, oracle, series, err, _ in rows:
        print(
            f"{n:>5} {mp.nstr(oracle, 18):>26} {mp.nstr(series, 18):>26}"
            f" {mp.nstr(err, 3):>12}"
        )
    slope = order_fit([(n, err) for n, _, _, err, _ in rows])
    print(f"fitted order: {mp.nstr(slope, 5)}\n")


# ----------------------------------------------------------------------
# generic point: algebraic decay at the predicted orders
# ----------------------------------------------------------------------
params = WeightParams(mpf(0), mpf(1))
print("beta_n vs six-term series at alpha = 0, t = 1 (expect order -7):")
ladder(params, "beta")

print("p(n,t) vs series at alpha = 0, t = 1 (expect order -6):")
ladder(params, "p")

print("ln D_n vs asymptotic form at alpha = 0, t = 1 (expect order -4):")
ladder(params, "hankel")

# ----------------------------------------------------------------------
# collapsed regime: alpha = 1/2 kills every correction term
# ----------------------------------------------------------------------
half = WeightParams(mpf("0.5"), mpf(1))
print("correction coefficients at alpha = 1/2:")
print("  beta:", [mp.nstr(c, 5) for c in beta_series(half).coefficients])
print("  p:   ", [mp.nstr(c, 5) for c in p_series(half).coefficients])
rows = series_error_rows(half, "beta", (8, 16, 32), ctx)
print("beta errors at alpha = 1/2 (exponentially small, no power law):")
for n, _, _, err, _ in rows:
    print(f"  n={n}: {mp.nstr(err, 3)}")

# ----------------------------------------------------------------------
# the t = 0 determinant and the integral route for the t-ratio
# ----------------------------------------------------------------------
alpha = mpf("1.5")
n = 12
logD0 = log_hankel_at_zero(WeightParams(alpha, mpf(0)), n, ctx)
ratio = log_hankel_ratio_integral(WeightParams(alpha, mpf(1)), n, ctx)
print(f"\nln D_{n}(0) at alpha = 1.5 (Gamma product, Barnes-checked):", mp.nstr(logD0, 20))
print(f"ln(D_{n}(1)/D_{n}(0)) via the t-integral of beta_n:        ", mp.nstr(ratio, 20))
print(f"so ln D_{n}(1) =", mp.nstr(logD0 + ratio, 20))
