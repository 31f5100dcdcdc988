"""JIT-compiled inner loops: counter-based clocks, the PCF event loop and
the union-find helpers it needs."""
import numpy as np
from numba import cfunc, njit, types
from scipy import LowLevelCallable

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_TWO53 = 1.0 / 9007199254740992.0

_RADIX_BITS = 11
_RADIX = 1 << _RADIX_BITS

EDGE_STREAM = 0
VERTEX_STREAM = 1


@njit(cache=True, nogil=True)
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def stream_key(seed, stream_id, kind):
    k = mix64(np.uint64(seed) ^ _GOLDEN)
    k = mix64(k + np.uint64(stream_id) * _GOLDEN)
    return mix64(k + np.uint64(kind) + _ONE)


@njit(cache=True, nogil=True)
def exp_at(key, index, rate):
    """Exp(rate) variate at position ``index`` of the stream ``key``."""
    x = mix64(key + (np.uint64(index) + _ONE) * _GOLDEN)
    u = (np.float64(x >> _S11) + 0.5) * _TWO53
    return -np.log(u) / rate


@njit(cache=True, nogil=True)
def fill_exp(key, rate, out):
    for i in range(out.shape[0]):
        out[i] = exp_at(key, i, rate)


@njit(cache=True, nogil=True)
def fill_stream(seed, stream_id, kind, rate, out):
    fill_exp(stream_key(seed, stream_id, kind), rate, out)


@njit(cache=True, nogil=True)
def find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True)
def _radix_argsort(keys, order):
    """Stable LSD radix argsort of ``keys`` (uint64, consumed) into ``order``,
    which arrives as ``0..n-1`` and fixes the index dtype."""
    total = keys.shape[0]
    if total <= 64:
        for i in range(1, total):
            x = order[i]
            kx = keys[x]
            j = i - 1
            while j >= 0 and keys[order[j]] > kx:
                order[j + 1] = order[j]
                j -= 1
            order[j + 1] = x
        return order
    ktmp = np.empty(total, dtype=np.uint64)
    tmp = np.empty_like(order)
    counts = np.empty(_RADIX + 1, dtype=np.int64)
    mask = np.uint64(_RADIX - 1)
    for shift in range(0, 64, _RADIX_BITS):
        sh = np.uint64(shift)
        counts[:] = 0
        for i in range(total):
            counts[((keys[i] >> sh) & mask) + 1] += 1
        if counts.max() == total:
            continue  # every key shares this digit
        for b in range(_RADIX):
            counts[b + 1] += counts[b]
        # keys travel with the indices so every read is sequential
        for i in range(total):
            dgt = (keys[i] >> sh) & mask
            pos = counts[dgt]
            tmp[pos] = order[i]
            ktmp[pos] = keys[i]
            counts[dgt] = pos + 1
        order, tmp = tmp, order
        keys, ktmp = ktmp, keys
    return order


@njit(cache=True, nogil=True)
def stable_argsort_nonneg(times):
    """Stable argsort of non-negative floats (``inf`` allowed).

    The bit patterns of non-negative IEEE doubles sort like the values, so an
    LSD radix sort on them is exact and stable.
    """
    return _radix_argsort(times.view(np.uint64).copy(), np.arange(times.shape[0]))


@njit(cache=True, nogil=True)
def event_order(eclock, vclock):
    """Processing order of ``[edges..., vertices...]`` as int32 indices:
    stable in time, which gives the (time, edge first, index) tie rule."""
    keys = np.concatenate((eclock, vclock)).view(np.uint64)
    total = keys.shape[0]
    if total >= 2**31:
        raise ValueError("too many events for int32 indices; use event_order_wide")
    return _radix_argsort(keys, np.arange(0, total, 1, np.int32))


@njit(cache=True, nogil=True)
def event_order_wide(eclock, vclock):
    """:func:`event_order` with int64 indices."""
    keys = np.concatenate((eclock, vclock)).view(np.uint64)
    return _radix_argsort(keys, np.arange(keys.shape[0]))


@njit(cache=True, nogil=True)
def simulate(n, eu, ev, rank, vclock, eclock, boundary, warm, t_max, order, record):
    """Process clock events in ``order`` up to ``t_max``.

    Returns ``(open_time, freeze_time, root_sizes, root_touch, root_size, n_events,
    log_t, log_kind, log_index, log_label)``; ``log_*`` have zero length
    unless ``record`` is set.
    """
    m = eu.shape[0]
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    label = np.arange(n)          # min-rank vertex of each root's component
    frozen = np.zeros(n, dtype=np.bool_)
    touch = boundary.copy()
    root_freeze = np.full(n, np.inf)
    open_time = np.full(m, np.inf)
    cap = n + m if record else 0
    log_t = np.empty(cap)
    log_kind = np.empty(cap, dtype=np.int8)
    log_index = np.empty(cap, dtype=np.int64)
    log_label = np.empty(cap, dtype=np.int64)
    count = 0
    for idx in order:
        if idx < m:
            t = eclock[idx]
            if t > t_max:
                break
            a = find(parent, eu[idx])
            b = find(parent, ev[idx])
            if frozen[a] or frozen[b]:
                continue
            open_time[idx] = t
            if a != b:
                if size[a] < size[b]:
                    a, b = b, a
                parent[b] = a
                size[a] += size[b]
                if rank[label[b]] < rank[label[a]]:
                    label[a] = label[b]
                touch[a] = touch[a] or touch[b]
            if record:
                log_t[count] = t
                log_kind[count] = 0
                log_index[count] = idx
                log_label[count] = label[a]
            count += 1
        else:
            v = idx - m
            t = vclock[v]
            if t > t_max:
                break
            r = find(parent, v)
            # only the label vertex's clock governs the component: its clock
            # has not fired yet, so by memorylessness nothing is resampled
            if frozen[r] or label[r] != v:
                continue
            if warm and touch[r]:
                continue
            frozen[r] = True
            root_freeze[r] = t
            if record:
                log_t[count] = t
                log_kind[count] = 1
                log_index[count] = v
                log_label[count] = v
            count += 1
    freeze_time = np.empty(n)
    is_root = np.zeros(n, dtype=np.bool_)
    for v in range(n):
        r = find(parent, v)
        freeze_time[v] = root_freeze[r]
        if r == v:
            is_root[v] = True
    sizes = size[is_root]
    r0 = find(parent, 0)
    return (open_time, freeze_time, sizes, touch[r0], size[r0], count,
            log_t[:count], log_kind[:count], log_index[:count], log_label[:count])


@njit(cache=True, nogil=True)
def batch_final_masks(n, eu, ev, rank, alpha, seed, first_stream, count, boundary, warm):
    """Final open-edge bitmask for ``count`` replicas of a small graph.

    Replica ``i`` uses stream ``first_stream + i``; requires ``E <= 62``.
    """
    m = eu.shape[0]
    out = np.empty(count, dtype=np.int64)
    eclock = np.empty(m)
    vclock = np.empty(n)
    for i in range(count):
        sid = first_stream + i
        fill_exp(stream_key(seed, sid, EDGE_STREAM), 1.0, eclock)
        fill_exp(stream_key(seed, sid, VERTEX_STREAM), alpha, vclock)
        order = event_order(eclock, vclock)
        res = simulate(n, eu, ev, rank, vclock, eclock, boundary, warm, np.inf, order, False)
        open_time = res[0]
        mask = 0
        for e in range(m):
            if open_time[e] < np.inf:
                mask |= 1 << e
        out[i] = mask
    return out


@njit(cache=True, nogil=True)
def tree_root_cluster(d, depth, alpha, seed, stream_id, stack_v, stack_d, size_cap):
    """Root cluster of PCF on the truncated rooted d-ary tree, explored lazily.

    Child ``c`` of ``x`` joins the root cluster iff its parent edge fires no
    later than both the child's clock and the root's clock; that is exactly
    what the full event loop does under breadth-first priorities.  Clocks are
    read from the same counter streams as ``simulate``, so results match a
    full run bit for bit.  Exploration stops once the size exceeds
    ``size_cap``.  Returns ``(size, touched_boundary, censored)`` where a
    censored size is only a lower bound.
    """
    ekey = stream_key(seed, stream_id, EDGE_STREAM)
    vkey = stream_key(seed, stream_id, VERTEX_STREAM)
    x_root = exp_at(vkey, 0, alpha)
    stack_cap = stack_v.shape[0]
    stack_v[0] = 0
    stack_d[0] = 0
    top = 1
    size = 1
    touched = depth == 0
    while top > 0:
        top -= 1
        x = stack_v[top]
        lvl = stack_d[top]
        if lvl == depth:
            continue
        for j in range(d):
            c = d * x + 1 + j
            xe = exp_at(ekey, c - 1, 1.0)
            if xe <= x_root and xe <= exp_at(vkey, c, alpha):
                size += 1
                if lvl + 1 == depth:
                    touched = True
                if size > size_cap or top >= stack_cap:
                    return size, touched, True
                stack_v[top] = c
                stack_d[top] = lvl + 1
                top += 1
    return size, touched, False


@njit(cache=True, nogil=True)
def batch_tree_root_clusters(d, depth, alpha, seed, first_stream, count, stack_cap, size_cap):
    sizes = np.empty(count, dtype=np.int64)
    touched = np.empty(count, dtype=np.bool_)
    censored = np.empty(count, dtype=np.bool_)
    stack_v = np.empty(stack_cap, dtype=np.int64)
    stack_d = np.empty(stack_cap, dtype=np.int64)
    for i in range(count):
        s, t, c = tree_root_cluster(d, depth, alpha, seed, first_stream + i, stack_v, stack_d,
                                    size_cap)
        sizes[i] = s
        touched[i] = t
        censored[i] = c
    return sizes, touched, censored


@njit(cache=True, nogil=True)
def lr_crossing(n, eu, ev, edge_open, left, right):
    """Union-find with two virtual terminals (n: left, n+1: right)."""
    parent = np.arange(n + 2)
    for v in left:
        parent[find(parent, v)] = find(parent, n)
    for v in right:
        a = find(parent, v)
        b = find(parent, n + 1)
        if a != b:
            parent[a] = b
    if find(parent, n) == find(parent, n + 1):
        return True
    for e in range(eu.shape[0]):
        if edge_open[e]:
            a = find(parent, eu[e])
            b = find(parent, ev[e])
            if a != b:
                parent[a] = b
    return find(parent, n) == find(parent, n + 1)


@njit(cache=True, nogil=True)
def batch_crossings(n, eu, ev, rank, alpha, seed, first_stream, count, boundary, warm,
                    t_max, percolation, left, right):
    """Left-right crossing indicator of the final configuration for ``count``
    replicas.  With ``percolation`` set, vertex clocks are ignored and edges
    open iff their clock is at most ``t_max``."""
    m = eu.shape[0]
    out = np.empty(count, dtype=np.bool_)
    eclock = np.empty(m)
    vclock = np.empty(n)
    for i in range(count):
        sid = first_stream + i
        fill_exp(stream_key(seed, sid, EDGE_STREAM), 1.0, eclock)
        if percolation:
            out[i] = lr_crossing(n, eu, ev, eclock <= t_max, left, right)
            continue
        fill_exp(stream_key(seed, sid, VERTEX_STREAM), alpha, vclock)
        order = event_order(eclock, vclock)
        res = simulate(n, eu, ev, rank, vclock, eclock, boundary, warm, t_max, order, False)
        out[i] = lr_crossing(n, eu, ev, res[0] < np.inf, left, right)
    return out


@cfunc(types.double(types.intc, types.CPointer(types.double)), cache=True)
def _cluster_integrand(n, xx):
    # xx = (s, a, b, log_peak, 1/exponent of s, q): p(s)^a (1-p(s))^b / peak
    s = xx[0]
    a = xx[1]
    b = xx[2]
    p = (1.0 - s ** xx[4]) * xx[5]
    if p <= 0.0:
        return 1.0 if a == 0.0 else 0.0
    return np.exp(a * np.log(p) + b * np.log1p(-p) - xx[3])


cluster_integrand = LowLevelCallable(_cluster_integrand.ctypes)
