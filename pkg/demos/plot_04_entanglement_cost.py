"""
Entanglement cost
=================

Because E_f is log2(d - 1) for every antisymmetric state and is additive,
the entanglement cost equals log2(d - 1) as well. The report evaluates the
formula and backs it with optimized per-copy values for one and two copies.
"""

# %%
import json

from antisym_ef.eof import EofOptions, entanglement_cost_report

report = entanglement_cost_report(3, opts=EofOptions(restarts=4))
print("E_c for d=3:", report.value)
for n, value in report.per_copy.items():
    print(f"  E_f(rho^{n}) / {n} = {value:.12f}")

# %%
# The same report as JSON, minus the per-restart detail.
payload = report.to_json()
for item in payload["evidence"]:
    item.pop("restart_values")
print(json.dumps(payload, indent=2))
