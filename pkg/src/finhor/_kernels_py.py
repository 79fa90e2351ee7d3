"""Pure-Python (numpy) versions of the inner-loop kernels.

Signatures and results match the compiled ``_kernels`` module exactly; the
package picks whichever is importable (see :mod:`finhor.kernels`).
"""
import numpy as np


def expand(queue, served, caps_bits, inv_if_bits, q0, tol_q):
    """Generate every child of a search node.

    Returns ``(child_queue, child_served, h, goal, frac)``. ``h`` is the
    interference-free heuristic of each child (0 for goals) and ``frac`` the
    final-slot cost max_n q0/served, meaningful only where ``goal`` is set.
    """
    child_q = queue[None, :] - caps_bits
    child_q[child_q <= tol_q] = 0.0
    child_s = served[None, :] + caps_bits
    goal = ~(child_q > 0.0).any(axis=1)
    h = (child_q * inv_if_bits[None, :]).max(axis=1)
    frac = np.zeros(len(caps_bits))
    active = q0 > 0.0
    if active.any() and goal.any():
        ratios = q0[active][None, :] / child_s[goal][:, active]
        frac[goal] = np.minimum(ratios.max(axis=1), 1.0)
    h[goal] = 0.0
    return child_q, child_s, h, goal.astype(np.uint8), frac


def prune_dominated(served_buf, depth_buf, alive, n_used, sel_served, t1, tol):
    """Kill live nodes at depth >= t1 whose cumulative service is
    componentwise no larger than ``sel_served``; return how many died."""
    sl = slice(0, n_used)
    mask = (alive[sl] != 0) & (depth_buf[sl] >= t1)
    if not mask.any():
        return 0
    mask &= (served_buf[sl] <= sel_served[None, :] + tol).all(axis=1)
    count = int(mask.sum())
    alive[sl][mask] = 0
    return count


def nondominated_mask(points, order, tol):
    """Scan points in ``order`` keeping each one not tol-dominated by an
    already kept point. ``order`` should be non-increasing in coordinate sum."""
    m, n = points.shape
    keep = np.zeros(m, dtype=np.uint8)
    kept = np.empty((m, n))
    k = 0
    for i in order:
        p = points[i]
        if k and (kept[:k] >= p - tol).all(axis=1).any():
            continue
        kept[k] = p
        k += 1
        keep[i] = 1
    return keep
