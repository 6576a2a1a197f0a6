"""Fuchsian holonomy of a genus-2 surface, then a bend along one curve.

Checks the two ways of computing the bend (rotation insertions vs a complex
twist) against each other and prints a few traces.
"""
import math

from quakebend import (
    FNCoordinates,
    FramedRep,
    WeightedMultiloop,
    bend,
    character,
    fn_to_rep,
    quakebend,
    standard_pants,
)

P = standard_pants(2, "chain")
fn = FNCoordinates([1.0, 1.5, 2.0], [0.5, -1.0, 2.0])
rep = fn_to_rep(P, fn)
print(f"relation residual of the holonomy: {rep.relation_residual:.2e}")

chi = character(rep)
for label, value in list(zip(chi.words.labels(), chi.values))[:6]:
    print(f"  tr^2 {label:>6} = {value.real:.6f}")

M = WeightedMultiloop.single(0, math.pi / 3)
bent = bend(FramedRep.canonical(rep, M))
twisted = quakebend(P, fn, M)
gap = character(bent).distance(character(twisted))
print(f"bent rep relation residual {bent.relation_residual:.2e}")
print(f"bend vs complex twist, sup distance of characters: {gap:.2e}")
