# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner-loop kernels; see _kernels_py for the reference versions."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def expand(const double[::1] queue, const double[::1] served,
           const double[:, ::1] caps_bits, const double[::1] inv_if_bits,
           const double[::1] q0, double tol_q):
    cdef Py_ssize_t k = caps_bits.shape[0], n = caps_bits.shape[1]
    cdef Py_ssize_t i, j
    cdef double v, hv, fv, r
    cdef bint is_goal
    child_q_arr = np.empty((k, n))
    child_s_arr = np.empty((k, n))
    h_arr = np.zeros(k)
    goal_arr = np.zeros(k, dtype=np.uint8)
    frac_arr = np.zeros(k)
    cdef double[:, ::1] child_q = child_q_arr
    cdef double[:, ::1] child_s = child_s_arr
    cdef double[::1] h = h_arr
    cdef unsigned char[::1] goal = goal_arr
    cdef double[::1] frac = frac_arr
    for i in range(k):
        is_goal = True
        hv = 0.0
        for j in range(n):
            v = queue[j] - caps_bits[i, j]
            if v <= tol_q:
                v = 0.0
            else:
                is_goal = False
            child_q[i, j] = v
            child_s[i, j] = served[j] + caps_bits[i, j]
            r = v * inv_if_bits[j]
            if r > hv:
                hv = r
        if is_goal:
            goal[i] = 1
            fv = 0.0
            for j in range(n):
                if q0[j] > 0.0:
                    r = q0[j] / child_s[i, j]
                    if r > fv:
                        fv = r
            frac[i] = fv if fv < 1.0 else 1.0
        else:
            h[i] = hv
    return child_q_arr, child_s_arr, h_arr, goal_arr, frac_arr


def prune_dominated(const double[:, ::1] served_buf, const long[::1] depth_buf,
                    unsigned char[::1] alive, Py_ssize_t n_used,
                    const double[::1] sel_served, long t1, double tol):
    cdef Py_ssize_t i, j, n = served_buf.shape[1]
    cdef Py_ssize_t count = 0
    cdef bint dominated
    for i in range(n_used):
        if alive[i] == 0 or depth_buf[i] < t1:
            continue
        dominated = True
        for j in range(n):
            if served_buf[i, j] > sel_served[j] + tol:
                dominated = False
                break
        if dominated:
            alive[i] = 0
            count += 1
    return count


def nondominated_mask(const double[:, ::1] points, const long[::1] order, double tol):
    cdef Py_ssize_t m = points.shape[0], n = points.shape[1]
    cdef Py_ssize_t a, b, j, i, k = 0
    cdef bint covered, ge
    keep_arr = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[::1] keep = keep_arr
    cdef long[::1] kept = np.empty(m, dtype=np.int_)
    for a in range(order.shape[0]):
        i = order[a]
        covered = False
        for b in range(k):
            ge = True
            for j in range(n):
                if points[kept[b], j] < points[i, j] - tol:
                    ge = False
                    break
            if ge:
                covered = True
                break
        if not covered:
            kept[k] = i
            k += 1
            keep[i] = 1
    return keep_arr
