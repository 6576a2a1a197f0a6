"""When one side of a separating curve is abelian, the framing stops mattering."""
from quakebend.experiments import noninjectivity_witness
from quakebend.surface import standard_pants

rep = noninjectivity_witness(standard_pants(2, "theta"), 0, weight=1.0, framings=10, seed=0)
print(f"spread of paired characters over {rep.n_framings} framings: {rep.spread:.2e}")
print(f"Fuchsian control, canonical vs swapped framing:   {rep.control_spread:.2e}")
