"""Piecewise geodesics in hyperbolic 3-space: certificate vs sampled oracle."""
import math

from quakebend.hyperbolic import PiecewiseGeodesic, certify_quasigeodesic, empirical_qi_constants, shortcut_curve

long_zigzag = PiecewiseGeodesic.zigzag(8, 50.0, math.pi / 2)
cert = certify_quasigeodesic(long_zigzag, eps=0.5, min_angle=math.pi / 3, samples=10_000)
print(f"long zigzag: {cert.status}, P = {cert.P}, Q = {cert.Q:.3f}, needs segments > {cert.R:.3f}")
print("  sampled Q at that P:", empirical_qi_constants(long_zigzag, 10_000, P=cert.P).Q)

short_zigzag = PiecewiseGeodesic.zigzag(300, 0.1, math.pi / 2)
cert = certify_quasigeodesic(short_zigzag, eps=0.1, min_angle=math.pi / 3, samples=10_000)
print(f"short zigzag: {cert.status}, violating pair {cert.witness}")

cut = shortcut_curve(PiecewiseGeodesic.zigzag(6, 1.0, math.pi / 2), 0.2)
print(f"corners cut at 0.2: smallest angle {min(cut.angles()):.4f}, length {cut.total_length:.4f} (was 6)")
