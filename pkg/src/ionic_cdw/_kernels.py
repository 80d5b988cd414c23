"""Hot loops: fermionic monomial action on the occupation basis and connected-set
enumeration on a torus.

Each kernel has a compiled variant and a numpy/python variant; ``USE_NUMBA``
(env ``IONIC_CDW_NUMBA``) picks which one the public wrappers call.
"""
import numpy as np

from ._accel import USE_NUMBA, njit, py_func


# ---------------------------------------------------------------------------
# fermion monomials
# ---------------------------------------------------------------------------

@njit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit
def _monomial_action_nb(modes, daggers, dim):
    """Apply ``o_1 o_2 ... o_m`` (rightmost first) to every basis state.

    Returns ``(target, sign)``; ``target[s] = -1`` where the product kills ``s``.
    """
    target = np.empty(dim, dtype=np.int64)
    sign = np.empty(dim, dtype=np.int8)
    m = modes.shape[0]
    for s in range(dim):
        state = s
        sg = 1
        alive = True
        for p in range(m - 1, -1, -1):
            k = modes[p]
            bit = 1 << k
            occ = (state & bit) != 0
            if daggers[p]:
                if occ:
                    alive = False
                    break
            else:
                if not occ:
                    alive = False
                    break
            if _popcount(state & (bit - 1)) & 1:
                sg = -sg
            state ^= bit
        if alive:
            target[s] = state
            sign[s] = sg
        else:
            target[s] = -1
            sign[s] = 0
    return target, sign


def _monomial_action_np(modes, daggers, dim):
    state = np.arange(dim, dtype=np.int64)
    sign = np.ones(dim, dtype=np.int8)
    alive = np.ones(dim, dtype=bool)
    for k, dag in zip(modes[::-1], daggers[::-1]):
        bit = np.int64(1) << int(k)
        occ = (state & bit) != 0
        alive &= ~occ if dag else occ
        odd = (np.bitwise_count(state & (bit - 1)) & 1).astype(bool)
        sign[odd] = -sign[odd]
        state = state ^ bit
    target = np.where(alive, state, -1)
    sign = np.where(alive, sign, 0).astype(np.int8)
    return target, sign


def monomial_action(modes, daggers, dim, use_numba=None):
    modes = np.asarray(modes, dtype=np.int64)
    daggers = np.asarray(daggers, dtype=np.bool_)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        return _monomial_action_nb(modes, daggers, dim)
    return _monomial_action_np(modes, daggers, dim)


@njit
def _occupations_nb(nmodes):
    dim = 1 << nmodes
    out = np.empty((dim, nmodes), dtype=np.int8)
    for s in range(dim):
        for k in range(nmodes):
            out[s, k] = (s >> k) & 1
    return out


def _occupations_np(nmodes):
    s = np.arange(1 << nmodes, dtype=np.int64)
    return ((s[:, None] >> np.arange(nmodes)) & 1).astype(np.int8)


def occupations(nmodes, use_numba=None):
    """``out[s, k]`` = occupation of mode ``k`` in basis state ``s``."""
    if use_numba is None:
        use_numba = USE_NUMBA
    return _occupations_nb(nmodes) if use_numba else _occupations_np(nmodes)


# ---------------------------------------------------------------------------
# connected sets (Redelmeier's algorithm, explicit stack)
# ---------------------------------------------------------------------------

@njit
def _redelmeier(nbr, deg, root, forbid_below, max_size, size_cap, out, hist):
    """Enumerate connected vertex sets containing ``root``, each exactly once.

    ``nbr`` is an ``(n, 4)`` table of distinct neighbours padded with -1.  With
    ``forbid_below`` only sets whose smallest vertex is ``root`` are produced.
    Sets larger than ``size_cap`` are neither recorded nor extended.
    ``hist[size, boundary]`` is incremented for every set; if ``out`` has rows
    the member lists are written there (row overflow is signalled by a return
    value larger than ``out.shape[0]``).
    """
    n = nbr.shape[0]
    in_set = np.zeros(n, dtype=np.bool_)
    seen = np.zeros(n, dtype=np.bool_)
    width = 4 * max_size + 2
    untried = np.empty((max_size + 1, width), dtype=np.int64)
    ucount = np.zeros(max_size + 1, dtype=np.int64)
    added = np.empty((max_size + 1, 4), dtype=np.int64)
    nadded = np.zeros(max_size + 1, dtype=np.int64)
    members = np.empty(max_size + 1, dtype=np.int64)
    bsum = np.zeros(max_size + 1, dtype=np.int64)
    cap = out.shape[0]

    if forbid_below:
        for v in range(root):
            seen[v] = True
    seen[root] = True
    untried[0, 0] = root
    ucount[0] = 1
    depth = 0  # current set size; untried[depth] is the pool for the next vertex
    found = 0
    while depth >= 0:
        if ucount[depth] == 0:
            # level exhausted: undo the vertex that opened it
            for a in range(nadded[depth]):
                seen[added[depth, a]] = False
            nadded[depth] = 0
            if depth == 0:
                break
            depth -= 1
            in_set[members[depth]] = False
            continue
        ucount[depth] -= 1
        v = untried[depth, ucount[depth]]
        in_set[v] = True
        members[depth] = v
        inner = 0
        for a in range(deg[v]):
            if in_set[nbr[v, a]]:
                inner += 1
        b = deg[v] - 2 * inner
        if depth > 0:
            b += bsum[depth - 1]
        bsum[depth] = b
        size = depth + 1
        if size <= size_cap:
            hist[size, b] += 1
            if cap > 0:
                if found < cap:
                    for p in range(size):
                        out[found, p] = members[p]
                    for p in range(size, out.shape[1]):
                        out[found, p] = -1
            found += 1
        if size < max_size and size < size_cap:
            # open the next level: remaining pool plus new neighbours of v
            nu = ucount[depth]
            for p in range(nu):
                untried[size, p] = untried[depth, p]
            na = 0
            for a in range(deg[v]):
                w = nbr[v, a]
                if not seen[w]:
                    seen[w] = True
                    untried[size, nu] = w
                    nu += 1
                    added[size, na] = w
                    na += 1
            ucount[size] = nu
            nadded[size] = na
            depth = size
        else:
            in_set[v] = False
    return found


def redelmeier(nbr, deg, root, forbid_below, max_size, size_cap, out, hist, use_numba=None):
    if use_numba is None:
        use_numba = USE_NUMBA
    f = _redelmeier if use_numba else py_func(_redelmeier)
    return f(nbr, deg, root, forbid_below, max_size, size_cap, out, hist)
