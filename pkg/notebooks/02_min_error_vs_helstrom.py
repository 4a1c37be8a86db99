# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Single-round error probability
#
# Measuring the atom in `(|g> +- i|e>)/sqrt(2)` after the best coupling gives
# the error `(1 - D_tr)/2`. Here it is compared with the Helstrom bound, the
# homodyne limit and an ideal Kennedy receiver.

# +
import numpy as np
import matplotlib.pyplot as plt

from jcreceiver import DiscriminationProblem, kennedy_error, solve, sql_homodyne

alpha_sq = np.linspace(0.0025, 1.5, 120)
alphas = np.sqrt(alpha_sq)
results = [solve(DiscriminationProblem(a)) for a in alphas]
p_err = np.array([r.p_err for r in results])
helstrom = np.array([r.helstrom for r in results])
# -

# +
fig, ax = plt.subplots(figsize=(7, 4))
ax.semilogy(alpha_sq, p_err, label="atom ancilla")
ax.semilogy(alpha_sq, helstrom, "--", label="Helstrom")
ax.semilogy(alpha_sq, [sql_homodyne(a) for a in alphas], ":", label="homodyne")
ax.semilogy(alpha_sq, [kennedy_error(a) for a in alphas], label="Kennedy")
ax.set_xlabel("|alpha|^2")
ax.set_ylabel("error probability")
ax.legend()
# -

# The gap to the bound stays tiny for weak signals.

for a in (0.1, 0.3, 0.5, 0.85, 1.0, 1.2):
    r = solve(DiscriminationProblem(a))
    print(f"alpha={a:<5} p_err={r.p_err:.6f} helstrom={r.helstrom:.6f} gap={r.deviation:.2e} phi*={r.phi_star:.4f}")

# Beyond `alpha ~ 1.19` the homodyne limit drops below the atom-based
# scheme, because the best achievable trace distance saturates below one
# while the homodyne error keeps falling like `exp(-2 |alpha|^2)`.
