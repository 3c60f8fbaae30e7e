"""A first walk on the line.

The coined walk alternates a 2x2 unitary on an internal coin with a
coin-conditioned shift.  Starting from the origin with the symmetric coin
state (1, i)/sqrt(2), the Hadamard walk spreads ballistically: its
standard deviation grows linearly in time, against sqrt(t) for the
classical random walk.  A phase defect pinned at the origin changes the
picture completely: for a phase of pi most of the probability stays home.
"""

import numpy as np

from qwalk import (
    DefectMap,
    WalkSpec,
    classical_rw_distribution,
    distribution,
    evolve,
    hadamard,
    variance,
)

STEPS = 30

print("variance growth, quantum vs classical")
print(f"{'t':>4} {'Var quantum':>12} {'Var classical':>14} {'ratio':>7}")
spec = WalkSpec(1, STEPS, hadamard())
for report in evolve(spec):
    t = report.step
    if t % 5 == 0:
        vq = variance(distribution(report.state))
        vc = float(t)
        print(f"{t:>4} {vq:>12.3f} {vc:>14.1f} {vq / vc:>7.2f}")

print()
print(f"asymptotically Var/t^2 -> 1 - 1/sqrt(2) = {1 - 1/np.sqrt(2):.4f}")
final = distribution(list(evolve(WalkSpec(1, 200, hadamard())))[-1].state)
print(f"at t=200 the simulated ratio is       {variance(final) / 200**2:.4f}")

print()
print("a point phase defect at the origin traps the walker")
print(f"{'phase/pi':>9} {'P_30(0)':>9}")
for mult in (0.25, 0.5, 0.75, 1.0):
    reports = list(evolve(WalkSpec(1, STEPS, hadamard(), DefectMap.point(mult * np.pi))))
    p = distribution(reports[-1].state)
    print(f"{mult:>9.2f} {p.at(0):>9.4f}")

print()
print("baseline without a defect:")
p = distribution(list(evolve(spec))[-1].state)
print(f"          P_30(0) = {p.at(0):.4f}")
print()
print(f"classical reference: variance({STEPS} steps) =",
      variance(classical_rw_distribution(STEPS)))
