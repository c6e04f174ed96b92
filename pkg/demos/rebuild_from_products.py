"""Rebuild a Gram matrix from squared norms, moduli and cycle products.

The frame is a standard basis plus a Fourier basis in C^2.  Its frame graph
is a single 4-cycle, so one 4-product pins the class.  Choosing phases on
the tree edges walks through the whole family of representatives.
"""

import numpy as np

from frameq import Frame, determining_set, gram, projective_equiv, reconstruct_from_products

s = 1 / np.sqrt(2)
V = np.array([[1, 0, s, s], [0, 1, s, -s]], dtype=complex)
G = gram(Frame(V))
products = determining_set(G)
print("cycles stored:", [(p.indices, round(p.value.real, 4)) for p in products.cycle_products])

path = [(0, 2), (2, 1), (1, 3)]
rng = np.random.default_rng(3)
for _ in range(3):
    a, b, c = np.exp(2j * np.pi * rng.random(3))
    H = reconstruct_from_products(products, {(0, 2): a, (2, 1): np.conj(b), (1, 3): c}, forest=path)
    z = np.conj(H.entries[0, 3] / s)
    print(f"a={a:.2f} b={b:.2f} c={c:.2f} -> z={z:.3f}, -ac/b={-a * c / b:.3f}, "
          f"equivalent to the original: {projective_equiv(G, H).equivalent}")
