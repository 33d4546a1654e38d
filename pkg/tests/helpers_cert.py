"""Certificate mutations used by the checker tests."""
import copy

from ffgeom import PointSet


def inflate_bound(cert, exact_of):
    """Raise one pin's bound to one above its exact count; keep the minimum consistent."""
    c = copy.deepcopy(cert)
    x = next(iter(c.pins))
    c.pin_bounds[x] = exact_of(x) + 1
    c.per_pin_bound = min(c.pin_bounds.values())
    return c


def overlap_pools(cert):
    """Make two recorded sub-pools share a point; None if the certificate has no usable pools."""
    c = copy.deepcopy(cert)
    for node in c.root.walk():
        names = [n for n, P in node.subpools.items() if P.n]
        if len(names) >= 2:
            a, b = node.subpools[names[0]], node.subpools[names[1]]
            node.subpools[names[1]] = b.union(PointSet(a.ctx, [a[0]]))
            return c
    for trace in c.bound_traces.values():
        for node in trace.walk():
            pools = [P for P in node.subpools if P.n]
            if len(pools) >= 2:
                i = node.subpools.index(pools[1])
                node.subpools[i] = pools[1].union(PointSet(pools[0].ctx, [pools[0][0]]))
                return c
    return None
