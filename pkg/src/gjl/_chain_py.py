"""Pure-Python chain enumeration kernel (fallback for the compiled extension).

A query is compiled to a node array in children-first order.  Node ``k`` has
opcode ``ops[k]`` (0 bottom, 1 atom, 2 and, 3 implies) and arguments
``a[k]``, ``b[k]``; for an atom ``a[k]`` is the atom position.  Truth values
are integer levels ``0..top``.
"""

BOTTOM, ATOM, AND, IMPLIES = 0, 1, 2, 3


def scan(ops, a, b, roots, goal, n_atoms, top, mode):
    """First level vector (first atom most significant) refuting the query, or None.

    ``mode`` 0 fails when min(premises) > goal; mode 1 fails when every premise
    is at ``top`` and the goal is below it.
    """
    n = len(ops)
    ops, a, b, roots = list(ops), list(a), list(b), list(roots)
    vals = [0] * n
    lev = [0] * n_atoms
    while True:
        for k in range(n):
            op = ops[k]
            if op == ATOM:
                vals[k] = lev[a[k]]
            elif op == AND:
                x, y = vals[a[k]], vals[b[k]]
                vals[k] = x if x < y else y
            elif op == IMPLIES:
                x, y = vals[a[k]], vals[b[k]]
                vals[k] = y if x > y else top
            else:
                vals[k] = 0
        lo = top
        for r in roots:
            if vals[r] < lo:
                lo = vals[r]
        g = vals[goal]
        if (lo > g) if mode == 0 else (lo == top and g < top):
            return lev[:]
        i = n_atoms - 1
        while i >= 0 and lev[i] == top:
            lev[i] = 0
            i -= 1
        if i < 0:
            return None
        lev[i] += 1
