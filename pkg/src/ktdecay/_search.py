"""Batched grid search with golden-section polishing.

Every sup/inf in the package reduces to maximising a smooth-ish objective
of one real variable over an interval, for many independent rows at once
(one row per epsilon, per theta, per side of a curve ...).  Rows share the
same objective callable, which receives the row index of every sample.
"""

import numpy as np

INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def log_nodes(lo, hi, per_decade):
    """Logarithmic nodes from ``lo`` to ``hi`` inclusive, ``per_decade`` per decade.

    Nodes are anchored at ``lo`` so that doubling ``per_decade`` yields a
    superset of the previous nodes.
    """
    lo = float(lo)
    hi = float(hi)
    if hi <= lo:
        return np.array([lo])
    step = np.log(10.0) / per_decade
    count = int(np.floor(np.log(hi / lo) / step * (1 + 1e-14)))
    nodes = lo * np.exp(step * np.arange(count + 1))
    if hi / nodes[-1] - 1.0 > 1e-12:
        nodes = np.append(nodes, hi)
    else:
        nodes[-1] = hi
    return nodes


def padded_log_rows(lows, hi, per_decade):
    """Stack of log-parameter rows ``log(lows[k]) .. log(hi)``, NaN padded."""
    lows = np.atleast_1d(np.asarray(lows, dtype=float))
    rows = [np.log(log_nodes(lo, hi, per_decade)) for lo in lows]
    width = max(len(r) for r in rows)
    out = np.full((len(rows), width), np.nan)
    for k, r in enumerate(rows):
        out[k, : len(r)] = r
    return out


def _local_max_mask(values):
    """Discrete local maxima of each row; plateaus count once, at their left end."""
    v = np.where(np.isnan(values), -np.inf, values)
    left = np.full_like(v, -np.inf)
    left[:, 1:] = v[:, :-1]
    right = np.full_like(v, -np.inf)
    right[:, :-1] = v[:, 1:]
    return np.isfinite(v) & (v > left) & (v >= right)


def golden_max(obj, rows, a, b, xtol=1e-12, maxiter=200):
    """Vectorised golden-section maximisation of ``obj(rows, x)`` on ``[a, b]``.

    Returns the best abscissa and value seen, including the bracket ends.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = obj(rows, c)
    fd = obj(rows, d)
    best_x = np.where(fc >= fd, c, d)
    best_f = np.maximum(fc, fd)
    for _ in range(maxiter):
        if np.all(b - a <= xtol * np.maximum(1.0, np.abs(a))):
            break
        left = fc >= fd
        a, b = np.where(left, a, c), np.where(left, d, b)
        c, d = (np.where(left, b - INV_PHI * (b - a), d),
                np.where(left, c, a + INV_PHI * (b - a)))
        x_new = np.where(left, c, d)
        f_new = obj(rows, x_new)
        fc, fd = np.where(left, f_new, fd), np.where(left, fc, f_new)
        better = f_new > best_f
        best_x = np.where(better, x_new, best_x)
        best_f = np.where(better, f_new, best_f)
    for x_end in (a, b):
        f_end = obj(rows, x_end)
        better = f_end > best_f
        best_x = np.where(better, x_end, best_x)
        best_f = np.where(better, f_end, best_f)
    return best_x, best_f


def grid_max(obj, nodes, xtol=1e-12):
    """Maximise ``obj(row, x)`` over each row of the NaN-padded ``nodes`` matrix.

    The objective is sampled on every node, then every discrete local
    maximum is polished by golden section inside its neighbouring nodes.
    Returns ``(best_value, best_x)`` per row.  Ties resolve to the smallest
    node position, i.e. the leftmost column.
    """
    nodes = np.atleast_2d(nodes)
    nrows, width = nodes.shape
    valid = ~np.isnan(nodes)
    row_idx = np.broadcast_to(np.arange(nrows)[:, None], nodes.shape)
    values = np.full(nodes.shape, np.nan)
    values[valid] = obj(row_idx[valid], nodes[valid])

    filled = np.where(valid, values, -np.inf)
    arg = np.argmax(filled, axis=1)
    best_f = filled[np.arange(nrows), arg]
    best_x = nodes[np.arange(nrows), arg]

    cand_r, cand_i = np.nonzero(_local_max_mask(np.where(valid, values, np.nan)))
    if cand_r.size:
        last = valid.sum(axis=1) - 1
        lo_i = np.maximum(cand_i - 1, 0)
        hi_i = np.minimum(cand_i + 1, last[cand_r])
        a = nodes[cand_r, lo_i]
        b = nodes[cand_r, hi_i]
        usable = b > a
        if np.any(usable):
            rows = cand_r[usable]
            rx, rf = golden_max(obj, rows, a[usable], b[usable], xtol=xtol)
            # best candidate per row; ties go to the leftmost bracket
            order = np.lexsort((a[usable], -rf, rows))
            first = order[np.unique(rows[order], return_index=True)[1]]
            r = rows[first]
            improve = rf[first] > best_f[r]
            best_f[r[improve]] = rf[first][improve]
            best_x[r[improve]] = rx[first][improve]
    return best_f, best_x
