# %% [markdown]
# # Sigma sweep for the hybrid model
#
# For each sigma, lambda is tuned to minimise the ranking score; then the
# best enhanced model is compared with the plain hybrid at sigma = 1.
# Two seeds and a coarse grid keep this to a couple of minutes; the
# acceptance tests run the full 5-seed version.

# %%
from pathlib import Path

from erarec import SweepSpec, improvement_table, ingest, run_sweep, write_sweep
from erarec.harness import frange

root = Path(__file__).resolve().parent.parent
data = ingest(root / "data" / "ml-100k" / "u.data")

spec = SweepSpec(
    "hhp",
    sigma_grid=frange(0.4, 1.2, 0.1),
    lambda_grid=frange(0.0, 1.0, 0.1),
    refine_step=0.02,
    seeds=(1, 2),
)
result = run_sweep(spec, data)
write_sweep(result, root / "out" / "hhp_sweep")

# %%
print(" sigma  lambda*     RS      ep(20)   h(20)")
for row in result.optima:
    print(f"{row.sigma:6.2f} {row.lam:7.2f} {row.rs:9.5f} {row.ep:8.2f} {row.h:8.4f}")

# %%
delta = improvement_table(result, result)
b, e = delta["base"], delta["enhanced"]
print(f"plain   sigma=1.0 lambda={b.lam:.2f}: RS={b.rs:.4f}")
print(f"enhanced sigma={e.sigma:.1f} lambda={e.lam:.2f}: RS={e.rs:.4f}")
print(f"RS {delta['rs']:+.2f}%  ep {delta['ep']:+.2f}%  h {delta['h']:+.2f}%")
