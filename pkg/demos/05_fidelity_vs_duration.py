"""Fidelity against total protocol time for the three methods.

The sweep rate is rescaled so the crossing lands at the same relative place
in each window.  Adiabatic passage needs long protocols; both shortcuts reach
the Bell state already at t_total = 2.

    python demos/05_fidelity_vs_duration.py [--plot]
"""
import numpy as np

from bellsta import fidelity_vs_duration

from _plotting import maybe_figure

table = fidelity_vs_duration(np.linspace(2.0, 120.0, 20), workers=4)
print(" t_total  adiabatic        tqd        lri")
for row in table.data:
    print(f"{row[0]:8.2f}  {row[1]:9.5f}  {row[2]:9.7f}  {row[3]:9.7f}")

plt, path = maybe_figure("fidelity_vs_duration")
if plt:
    fig, ax = plt.subplots()
    for name in table.columns[1:]:
        ax.plot(table.column("t_total"), table.column(name), "o-", label=name.split("_")[1])
    ax.set_xlabel("t_total")
    ax.set_ylabel("fidelity")
    ax.legend()
    fig.savefig(path, dpi=120)
    print("figure:", path)
