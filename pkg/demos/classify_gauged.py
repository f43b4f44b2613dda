"""
Recovering a normal form after a change of coordinates
======================================================

Take a table entry, hide it behind a random linear gauge, and let the
classifier find it again together with the gauge chain that undoes it.
"""

import random
from fractions import Fraction as F

from affsurf import GaugeLinear, apply_linear, classify, make, serialize

rng = random.Random(11)
while True:
    P = tuple(tuple(F(rng.randint(-3, 3)) for _ in range(2)) for _ in range(2))
    if P[0][0] * P[1][1] - P[0][1] * P[1][0]:
        break

hidden = apply_linear(make("thm4-6", {"omega": F(1, 2), "epsilon": -1, "eta": 3}), GaugeLinear(P))
print("gauge P =", [[str(v) for v in row] for row in P])
print(serialize(hidden))

res = classify(hidden)
print(res.summary())
print("rho signature:", res.signature)
print("witness:", res.witness.describe())
for note in res.notes:
    print("note:", note)

# the witness moves the connection back onto the table
back = res.witness.apply(hidden)
print(serialize(back))
