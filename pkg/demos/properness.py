"""Sequences of Fuchsian points and what bending does along them.

A curve pinched as 1/i: bending by pi/2 blows up, bending by pi stays bounded
(its successive differences shrink like i^-3), and adding one full twist per
step makes the pi-bend blow up too. A growing non-separating curve makes the
framed characters diverge.
"""
import math

from quakebend.experiments import framed_properness_sweep, growth_family, pinch_experiment, pinch_family

for label, w, twisting in (("w = pi/2", math.pi / 2, False), ("w = pi", math.pi, False), ("w = pi, twisting", math.pi, True)):
    rep = pinch_experiment(*pinch_family(w, twisting))
    print(f"pinch {label:18s} {rep.verdict:10s} last sup {rep.sup_norms[-1]:.3e}  last step {rep.cauchy[-1]:.3e}")

P, seq = growth_family()
rep = framed_properness_sweep(P, 0, math.pi / 2, seq)
print(f"growing curve, framed     {rep.verdict:10s} last sup {rep.sup_norms[-1]:.3e}")
