"""Why inner-product moduli are not enough, and what cycle products add.

Two frames of four vectors share every |<v_j, v_k>| but differ in the
product of inner products around their 4-cycle.  No choice of per-vector
unit scalars can make them agree, and the decision procedure says so by
naming the cycle.
"""

import numpy as np

from frameq import Frame, apply_gauge, determining_set, gram, projective_equiv, random_phases


def cycle_frame(n, z):
    V = np.zeros((n, n), dtype=complex)
    for j in range(n - 1):
        V[j, j] = V[j + 1, j] = 1
    V[n - 1, n - 1] = 1
    V[0, n - 1] = z
    return Frame(V)


plain, twisted = gram(cycle_frame(4, 1)), gram(cycle_frame(4, 1j))
print("same moduli:", np.allclose(np.abs(plain.entries), np.abs(twisted.entries)))

verdict = projective_equiv(plain, twisted)
print("projectively equivalent:", verdict.equivalent)
print("witness:", verdict.witness)

print("stored cycle products:")
for g, name in ((plain, "z = 1"), (twisted, "z = i")):
    for p in determining_set(g).cycle_products:
        print(f"  {name}: D{p.indices} = {p.value:.3g}")

# rescaling each vector by a unit scalar leaves every cycle product alone
rng = np.random.default_rng(0)
gauged = apply_gauge(plain, random_phases(4, rng))
again = projective_equiv(plain, gauged)
print("after a random gauge:", again.equivalent, "phases", np.round(again.phases, 3))
