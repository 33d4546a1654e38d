"""
Distances in a finite plane
===========================

The "distance" between two points of F_q^2 is the field element
(x1 - y1)^2 + (x2 - y2)^2.  This walk-through builds a couple of fields,
looks at circles, and shows how isotropic lines make distinct points sit
at distance zero.
"""

from ffgeom import (PointSet, circle_points, distance, distance_set, isotropic_directions, make_field,
                    pinned_nonzero_distances, sphere_histogram)

# F_5: -1 = 4 = 2^2 is a square, so there are isotropic directions
F5 = make_field(5)
print("F_5 isotropic directions:", sorted(isotropic_directions(F5)))
print("||(0,0) - (1,2)|| =", distance(F5, (0, 0), (1, 2)))

# every nonzero radius gives a circle of q - eta(-1) points; radius 0 gives two crossing lines
for delta in range(5):
    C = circle_points(F5, (0, 0), delta, full_plane=True)
    print(f"radius {delta}: {C.n} points")

# F_3: -1 is not a square, the zero circle is a single point
F3 = make_field(3)
plane = PointSet.full_plane(F3)
print("F_3 distance set:", sorted(distance_set(plane)))
print("pinned at the origin:", sorted(pinned_nonzero_distances((0, 0), plane)))
print("histogram:", sphere_histogram((0, 0), plane).counts)

# extension fields work the same way; elements are ranks c0 + c1*p
F9 = make_field(3, 2)
print("F_9 modulus (low degree first):", F9.modulus_poly, "eta(-1) =", F9.eta_minus_one)
print("circle sizes in F_9^2:", [circle_points(F9, (0, 0), d, full_plane=True).n for d in range(9)])
