# %% [markdown]
# # Active correction of a polarization qubit
#
# A qubit is turned into a horizontally polarized time-bin pair, sent through a
# random birefringent fiber, and restored by the receiver.  We watch it stage
# by stage.

# %%
import math

import numpy as np

from linqec import ChannelParams, new_qubit, postselect, run_fig1_corrector, run_fig2_corrector
from linqec.state import equal_up_to_global_phase

q = new_qubit(0.6, 0.8j)
p = ChannelParams(lambda_phase=0.7, xi_phase=2.2, phi_mix=math.pi / 5)
out, trace = run_fig2_corrector(q, p)
for label in trace.labels():
    print(f"{label:>28}: {trace[label]}")

# %% [markdown]
# The photon leaves on one of two ports.  Whichever it takes, the polarization
# is the one Alice prepared; only the port probabilities depend on the fiber.

# %%
for port in ("1", "2"):
    prob, cond = postselect(out, lambda k: k.port == port)
    print(port, round(prob, 6), cond)
print("cos^2 phi =", math.cos(p.phi_mix) ** 2)

# %% [markdown]
# The larger receiver with the balanced interferometer produces the same state.

# %%
rng = np.random.default_rng(1)
agree = 0
for _ in range(200):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    qq = new_qubit(*v)
    pp = ChannelParams(*rng.uniform(0, 2 * math.pi, 2), rng.uniform(0, math.pi / 2))
    agree += equal_up_to_global_phase(run_fig1_corrector(qq, pp)[0], run_fig2_corrector(qq, pp)[0])
print(f"{agree}/200 random cases agree")
