"""Count harmonic frames from cyclic groups, coarse to fine.

Orbit counts under translations, automorphisms and affine maps give upper
bounds.  The exact census compares Gram matrices directly, allowing any
reindexing.
"""

from frameq import CSV_HEADER, anomaly_flags, census

print(CSV_HEADER)
for n, d in [(5, 2), (7, 2), (8, 3), (8, 4), (9, 3)]:
    row = census(n, d, mode="exact")
    flags = anomaly_flags(row)
    print(row.csv() + ("  flags: " + ", ".join(flags) if flags else ""))
