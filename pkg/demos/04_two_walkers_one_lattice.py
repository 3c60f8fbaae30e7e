"""Two coin-sharing walkers on a line are one walker on a plane.

Two 1D walkers stepping simultaneously, with a joint 4x4 coin acting on
their coin pair, realize exactly the same unitary as a single 2D walker
taking unit steps along one axis per step, after relabeling positions
with (x, y) -> (x + y, x - y) (normalized on the periodic lattice).  The
comparison below is entrywise matrix equality, not an approximation.

The 4x4 coin can entangle the walkers.  The fractional swap interpolates
between leaving the coins alone (tau=0) and exchanging them (tau=1); any
two-coin unitary factors into single-coin rotations and three fractional
swaps.  Composing that bracket at the parameter point that should give a
bare fractional swap actually lands a -(Z x Z) factor away from it; the
report below measures this rather than assuming either form.
"""

import numpy as np

from qwalk import (
    check_decomposition_claims,
    check_translation_equivalence,
    distribution,
    fractional_swap,
    hadamard,
    run_walk,
    tensor,
    verify_isomorphism,
)
from qwalk.coins import random_su2
from qwalk.evolution import WalkSpec
from qwalk.isomorphism import (
    axis_walk_state,
    map_two_walker_distribution,
    random_shared_coin,
)
from qwalk.statespace import symmetric_coin

rng = np.random.default_rng(7)
H2 = tensor(hadamard(), hadamard())

print("step-operator equality after relabeling (max |difference|):")
print(f"{'L':>3} {'shift only':>11} {'H x H':>10} {'swap^0.3':>10} {'random':>10}")
for L in (1, 2, 3):
    devs = (
        check_translation_equivalence(L),
        verify_isomorphism(L, H2),
        verify_isomorphism(L, fractional_swap(0.3)),
        verify_isomorphism(L, random_shared_coin(rng)),
    )
    print(f"{L:>3} " + " ".join(f"{d:>10.1e}" for d in devs))

wrong = check_translation_equivalence(2, pair_map=lambda x, y: (x + y, y - x))
print(f"\nnegative control, wrong relabeling (x+y, y-x): deviation = {wrong:.1f}")

print()
print("the equality also holds with a shared site-dependent phase defect:")
from qwalk import DefectMap  # noqa: E402

dev = verify_isomorphism(2, H2, DefectMap.cross_xy(np.pi))
print(f"  cross defect, phase pi: {dev:.1e}")

print()
print("distribution-level check at t = 8: evolve the pair, relabel the")
print("joint distribution, compare against the directly stepped 2D walk")
for coin, name in ((H2, "H x H"), (fractional_swap(0.5), "swap^0.5")):
    joint = distribution(run_walk(WalkSpec(2, 8, coin)))
    mapped = map_two_walker_distribution(joint)
    direct = distribution(axis_walk_state(8, coin, symmetric_coin(2)))
    dev = np.abs(mapped.probs - direct.probs).max()
    print(f"  {name:>9}: max pointwise deviation = {dev:.1e}")

print()
print("coin decomposition parameter claims:")
report = check_decomposition_claims(trials=100, seed=7)
sep = report["separable"]
print(f"  separable point, {sep['trials']} random trials: "
      f"max deviation {sep['max_deviation']:.1e} "
      f"({'confirmed' if sep['confirmed'] else 'NOT confirmed'})")
ent = report["entangled"]
print("  shared-coin point vs fractional_swap(tau):")
print(f"    exact:            {ent['max_deviation_exact']:.3f}")
print(f"    up to phase:      {ent['max_deviation_global_phase']:.3f}")
print(f"    up to -(Z x Z):   {ent['max_deviation_zz_factor']:.1e}")
print(f"    finding: {ent['finding']}")
tz = report["tau_zero_bracket"]
print(f"  bracket at tau=0 vs identity: deviation {tz['deviation_from_identity']:.3f} "
      f"(equals identity: {tz['equals_identity']})")

print()
print("single random shared coin, checked at matrix level:")
coin = random_su2(rng)
shared = tensor(coin, coin) @ fractional_swap(float(rng.uniform()))
print(f"  deviation = {verify_isomorphism(3, shared):.1e}")
