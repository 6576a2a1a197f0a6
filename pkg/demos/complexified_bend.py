"""The paired bend: +w in one factor, -w in the other, and the way back."""
import numpy as np

from quakebend import (
    FNCoordinates,
    FramedRep,
    WeightedMultiloop,
    character,
    complexified_bend,
    fn_to_rep,
    standard_pants,
    support_axes,
    unbend,
)

P = standard_pants(2, "theta")
rep = fn_to_rep(P, FNCoordinates([1.2, 0.8, 2.5], [0.3, 1.0, -0.4]))
fr = FramedRep.canonical(rep, WeightedMultiloop((0, 2), (0.9, 1.7)))

pair = complexified_bend(fr)
c1, c2 = pair.characters
print("second factor vs conjugate of the first:", float(np.max(np.abs(c2.values - np.conj(c1.values)))))

back = unbend(pair, support_axes(pair))
print("unbent vs original character:", character(back.rep).distance(character(rep)))
