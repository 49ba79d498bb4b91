# %% [markdown]
# # BB84 over the corrected fiber
#
# Monte Carlo rounds with and without the attacker.  With one key port and a
# uniformly random mixing angle about a quarter of the rounds end up sifted.

# %%
from linqec.protocols import FpbConfig, run_bb84

clean, _ = run_bb84(20_000, seed=1)
print(clean.metrics())

attacked, records = run_bb84(20_000, FpbConfig(0.25), seed=2)
print(attacked.metrics())

# %% [markdown]
# Folding port 2 onto port 1 one time slot later recovers the other half.

# %%
both, _ = run_bb84(20_000, seed=3, both_ports=True)
print(both.metrics())

# %%
print(records[0])
