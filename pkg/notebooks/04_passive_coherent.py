# %% [markdown]
# # Passive correction of a coherent pulse
#
# No active elements: a coupler builds the time-bin pair and each receiver
# output emits three pulses.  The middle one carries the input polarization.

# %%
import math

from linqec import ChannelParams, run_fig4_passive, select_useful_pulse

alpha, beta = 1.0, 0.5j
p = ChannelParams(0.3, 1.9, 0.6)
out, trace = run_fig4_passive((alpha, beta), p)
for (delay, port), (h, v) in out.slots().items():
    print(f"t={delay} port={port:>7}: H={h:.4f} V={v:.4f}")

# %%
useful = select_useful_pulse(out)
n = abs(alpha) ** 2 + abs(beta) ** 2
print("port 1 fraction", useful.power(port="1") / n, "expected", math.sin(p.phi_mix) ** 2 / 4)
print("port 2 fraction", useful.power(port="2") / n, "expected", math.cos(p.phi_mix) ** 2 / 4)
for port in ("1", "2"):
    h, v = useful.slot(1, port)
    print(port, "V/H =", v / h, "input", beta / alpha)
