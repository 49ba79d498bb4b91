# %% [markdown]
# # An entangling probe attack
#
# Eve entangles a probe with each photon.  Her disturbance `p_e` sets both the
# error rate Bob sees and how much she learns.

# %%
import numpy as np

from linqec import ChannelParams
from linqec.protocols import AliceState, FpbConfig, fpb_eve_success_probability, fpb_through_corrector
from linqec.protocols.fpb import conditional_qbers

for pe in np.linspace(0, 0.5, 11):
    print(f"p_e={pe:.2f}  Eve success={fpb_eve_success_probability(pe):.6f}")

# %% [markdown]
# Her best trade-off sits at `p_e = 0.25`.  The corrector does not hide her:
# the error rate on each output port equals `p_e` whatever the fiber does.

# %%
rng = np.random.default_rng(0)
cfg = FpbConfig(0.25)
for _ in range(5):
    p = ChannelParams(*rng.uniform(0, 6.28, 2), rng.uniform(0, 1.57))
    out, _ = fpb_through_corrector(AliceState.PLUS, cfg, p)
    print({k: round(v, 12) for k, v in conditional_qbers(out, AliceState.PLUS).items()})
