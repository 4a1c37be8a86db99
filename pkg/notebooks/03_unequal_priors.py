# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Biased priors
#
# With `eta1 != eta2` the symmetric projector is no longer optimal. The
# measured state becomes `(|g> + i gamma |e>)/sqrt(1 + gamma^2)` with `gamma`
# tuned to the prior.

# +
import math

import numpy as np
import matplotlib.pyplot as plt

from jcreceiver import DiscriminationProblem, PriorPair, solve
from jcreceiver.minerr import BIASED_PRIOR_WINDOWS
# -

# Deviation from the Helstrom bound at `|alpha|^2 = 0.5` grows with the bias.

a = math.sqrt(0.5)
for eta1 in (1 / 8, 1 / 4, 1 / 3, 1 / 2):
    r = solve(DiscriminationProblem(a, PriorPair(eta1)))
    print(f"eta1={eta1:.3f}  p_err={r.p_err:.6f}  gap={r.deviation:.3e}  gamma*={r.gamma_star:.4f}")

# Optimal `gamma` against the prior. It reaches one at equal priors, and its
# dependence on the prior weakens as the field gets stronger.

# +
etas = np.linspace(0.05, 0.5, 19)
fig, ax = plt.subplots(figsize=(6, 4))
for alpha in (1.0, 0.5, 0.25):
    g = [solve(DiscriminationProblem(alpha, PriorPair(e), BIASED_PRIOR_WINDOWS)).gamma_star for e in etas]
    ax.plot(etas, g, "o-", ms=3, label=f"alpha = {alpha}")
ax.set_xlabel("eta1")
ax.set_ylabel("gamma_opt")
ax.legend()
# -

# Swapping the priors leaves the error unchanged.

for eta1 in (0.2, 0.8):
    print(eta1, solve(DiscriminationProblem(0.7, PriorPair(eta1))).p_err)
