"""Pure-Python CIDEr similarity kernel, used when the extension is not built."""

import math


def _segment_dot(a_ids, a_w, a0, a1, b_ids, b_w, b0, b1, clip):
    acc = 0.0
    i, j = a0, b0
    while i < a1 and j < b1:
        ai, bj = a_ids[i], b_ids[j]
        if ai < bj:
            i += 1
        elif ai > bj:
            j += 1
        else:
            ca, rb = a_w[i], b_w[j]
            if clip and ca > rb:
                ca = rb
            acc += ca * rb
            i += 1
            j += 1
    return acc


def reference_similarity(c_ids, c_w, c_off, c_norm, c_len,
                         r_ids, r_w, r_off, r_norm, r_len,
                         sigma, clip, use_penalty):
    """Mean over references and orders of the (clipped) cosine similarity.

    Arguments are the packed arrays built by ``cider.PackedVector`` /
    ``cider.PackedReferences``; numpy arrays are converted to lists once so
    the merge loop runs on Python scalars.
    """
    c_ids, c_w, c_off, c_norm = c_ids.tolist(), c_w.tolist(), c_off.tolist(), c_norm.tolist()
    r_ids, r_w, r_off, r_norm = r_ids.tolist(), r_w.tolist(), r_off.tolist(), r_norm.tolist()
    r_len = r_len.tolist()
    n_orders = len(c_norm)
    n_refs = len(r_len)
    if n_refs == 0:
        raise ValueError("no references")
    two_sigma_sq = 2.0 * sigma * sigma
    total = 0.0
    for j in range(n_refs):
        ref_total = 0.0
        for n in range(n_orders):
            seg = j * n_orders + n
            if c_norm[n] == 0.0 or r_norm[seg] == 0.0:
                continue
            dot = _segment_dot(c_ids, c_w, c_off[n], c_off[n + 1],
                               r_ids, r_w, r_off[seg], r_off[seg + 1], clip)
            # cosine <= 1; clamp rounding overshoot
            ref_total += min(1.0, dot / (c_norm[n] * r_norm[seg]))
        if use_penalty:
            delta = float(c_len - r_len[j])
            ref_total *= math.exp(-(delta * delta) / two_sigma_sq)
        total += ref_total
    return total / (n_refs * n_orders)
