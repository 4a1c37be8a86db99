# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Unambiguous detection with repeated atoms
#
# Displacing by `alpha` maps the signals to `|2 alpha>` and the vacuum. The
# vacuum never excites the atom, so a click is a certain verdict; a no-click
# leaves a thinner field for the next atom.

# +
import math

import numpy as np
import matplotlib.pyplot as plt

from jcreceiver import (KennedyProblem, coherent_amplitudes, idp_limit, kennedy_limit, max_excitation,
                        pnrd_failure, run_unambiguous_chain)
# -

print("first-maximum excitation of |2>:", max_excitation(coherent_amplitudes(2.0)))

# +
alpha_sq = np.linspace(0.05, 1.5, 30)
chains = np.array([[r.cumulative_Q for r in run_unambiguous_chain(KennedyProblem(math.sqrt(x)))]
                   for x in alpha_sq])
fig, ax = plt.subplots(figsize=(7, 4))
for k in range(3):
    ax.semilogy(alpha_sq, chains[:, k], label=f"{k + 1} atom(s)")
ax.semilogy(alpha_sq, [kennedy_limit(math.sqrt(x)) for x in alpha_sq], label="ideal Kennedy")
ax.semilogy(alpha_sq, [idp_limit(math.sqrt(x)) for x in alpha_sq], label="IDP")
ax.semilogy(alpha_sq, [pnrd_failure(math.sqrt(x), det_eff=0.91) for x in alpha_sq], "--", label="PNRD 91%")
ax.set_xlabel("|alpha|^2")
ax.set_ylabel("failure probability Q")
ax.legend()
# -

# Two atoms beat a 91% efficient photon counter only for weak fields.

for x, q in zip(alpha_sq[::5], chains[::5]):
    print(f"|alpha|^2={x:.2f}  Q2={q[1]:.5f}  pnrd(0.91)={pnrd_failure(math.sqrt(x), det_eff=0.91):.5f}")
