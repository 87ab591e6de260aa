# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled chain enumeration kernel; same contract as ``gjl._chain_py.scan``."""

from cpython.mem cimport PyMem_Malloc, PyMem_Free


def scan(const int[:] ops, const int[:] a, const int[:] b, const int[:] roots,
         int goal, int n_atoms, int top, int mode):
    cdef Py_ssize_t n = ops.shape[0]
    cdef Py_ssize_t nr = roots.shape[0]
    cdef Py_ssize_t k, i
    cdef int op, x, y, lo, g
    cdef bint bad
    cdef int *vals = <int *> PyMem_Malloc((n + 1) * sizeof(int))
    cdef int *lev = <int *> PyMem_Malloc((n_atoms + 1) * sizeof(int))
    if vals == NULL or lev == NULL:
        PyMem_Free(vals)
        PyMem_Free(lev)
        raise MemoryError()
    try:
        for i in range(n_atoms):
            lev[i] = 0
        while True:
            for k in range(n):
                op = ops[k]
                if op == 1:
                    vals[k] = lev[a[k]]
                elif op == 2:
                    x = vals[a[k]]
                    y = vals[b[k]]
                    vals[k] = x if x < y else y
                elif op == 3:
                    x = vals[a[k]]
                    y = vals[b[k]]
                    vals[k] = y if x > y else top
                else:
                    vals[k] = 0
            lo = top
            for k in range(nr):
                if vals[roots[k]] < lo:
                    lo = vals[roots[k]]
            g = vals[goal]
            if mode == 0:
                bad = lo > g
            else:
                bad = lo == top and g < top
            if bad:
                return [lev[i] for i in range(n_atoms)]
            i = n_atoms - 1
            while i >= 0 and lev[i] == top:
                lev[i] = 0
                i -= 1
            if i < 0:
                return None
            lev[i] += 1
    finally:
        PyMem_Free(vals)
        PyMem_Free(lev)
