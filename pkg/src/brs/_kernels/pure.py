"""Pure numpy implementations of the hot kernels.

Three operations dominate runtime: orbit discrepancy scans, torus
multiplicity counting along orbits, and transfer-surface crossing counts.
The compiled backend (`brs._kernels._fast`) implements the same entry points;
this module is the always-available fallback and the reference the compiled
code is tested against.

Membership specs are plain dicts:
  {"kind": "intervals1d", "a": (n,), "b": (n,)}                     d = 1
  {"kind": "ppiped", "origin": (d,), "binv": (d,d), "ks": (K,d)}    any d
  {"kind": "convex_polygon", "px": (n,2), "ex": (n,2), "ks": (K,2)} d = 2
  {"kind": "polygon", "pts": (n,2), "ks": (K,2)}                    d = 2
  {"kind": "cylinder", "v": (d,), "off": (d,), "sigma": spec, "ks": (K,d)}
  {"kind": "union", "parts": [spec, ...]}
The "ks" array lists the candidate integer translates for points in [0,1)^d.
"""
from __future__ import annotations

import numpy as np

BACKEND = "pure"

CHUNK = 1 << 16


def indicator(spec, Y: np.ndarray) -> np.ndarray:
    """Vectorized indicator of the raw set in R^d at points Y (n, d)."""
    kind = spec["kind"]
    if kind == "intervals1d":
        y = Y[:, 0]
        out = np.zeros(len(Y), dtype=bool)
        for a, b in zip(spec["a"], spec["b"]):
            out |= (a <= y) & (y < b)
        return out
    if kind == "ppiped":
        T = (Y - spec["origin"]) @ spec["binv"].T
        return np.all((T >= 0.0) & (T < 1.0), axis=1)
    if kind == "convex_polygon":
        out = np.ones(len(Y), dtype=bool)
        for p, e in zip(spec["px"], spec["ex"]):
            rx = Y[:, 0] - p[0]
            ry = Y[:, 1] - p[1]
            out &= (e[0] * ry - e[1] * rx) >= 0.0
        return out
    if kind == "polygon":
        pts = spec["pts"]
        x, y = Y[:, 0], Y[:, 1]
        inside = np.zeros(len(Y), dtype=bool)
        n = len(pts)
        for i in range(n):
            x1, y1 = pts[i]
            x2, y2 = pts[(i + 1) % n]
            mask = (y1 <= y) != (y2 <= y)
            if not mask.any():
                continue
            xs = x1 + (y[mask] - y1) * (x2 - x1) / (y2 - y1)
            upd = np.zeros(len(Y), dtype=bool)
            upd[mask] = x[mask] < xs
            inside ^= upd
        return inside
    if kind == "cylinder":
        v = spec["v"]
        Z = Y - spec["off"]
        t = Z[:, -1] / v[-1]
        ok = (t >= 0.0) & (t < 1.0)
        X = Z[:, :-1] - t[:, None] * v[:-1][None, :]
        sub = np.zeros(len(Y), dtype=bool)
        if ok.any():
            sub[ok] = indicator(spec["sigma"], X[ok])
        return ok & sub
    if kind == "union":
        out = np.zeros(len(Y), dtype=bool)
        for part in spec["parts"]:
            out |= indicator(part, Y)
        return out
    raise ValueError(f"unknown spec kind {kind!r}")


def multiplicity_batch(spec, X: np.ndarray) -> np.ndarray:
    """chi_S at torus points X (n, d): translate enumeration over spec['ks']."""
    kind = spec["kind"]
    if kind == "intervals1d":
        x = X[:, 0]
        counts = np.zeros(len(X), dtype=np.int64)
        for a, b in zip(spec["a"], spec["b"]):
            counts += (np.ceil(b - x) - np.ceil(a - x)).astype(np.int64)
        return counts
    if kind == "union":
        counts = np.zeros(len(X), dtype=np.int64)
        for part in spec["parts"]:
            counts += multiplicity_batch(part, X)
        return counts
    counts = np.zeros(len(X), dtype=np.int64)
    for k in spec["ks"]:
        counts += indicator(spec, X + k[None, :]).astype(np.int64)
    return counts


def orbit_block(base: np.ndarray, alpha: np.ndarray, n: int) -> np.ndarray:
    """Positions frac(base + j*alpha), j = 0..n-1, as an (n, d) array."""
    j = np.arange(n, dtype=float)[:, None]
    return np.mod(base[None, :] + j * alpha[None, :], 1.0)


def discrepancy_scan(spec, vol: float, bases: np.ndarray, alpha: np.ndarray,
                     N: int, checkpoints) -> np.ndarray:
    """Running max of |D_n|, n <= N, recorded at the given checkpoints.

    ``bases`` has one row per chunk of CHUNK orbit steps: row i is the
    high-precision reduction of x0 + (i*CHUNK)*alpha, which bounds float
    drift inside each chunk.  The discrepancy value itself is carried across
    chunks (it stays O(1) for bounded remainder sets, so no large-number
    cancellation occurs).
    """
    checkpoints = np.asarray(checkpoints, dtype=np.int64)
    out = np.zeros(len(checkpoints), dtype=float)
    running_max = 0.0
    d_end = 0.0
    done = 0
    ci = 0
    nchunks = (N + CHUNK - 1) // CHUNK
    for c in range(nchunks):
        n = min(CHUNK, N - done)
        pos = orbit_block(bases[c], alpha, n)
        counts = multiplicity_batch(spec, pos)
        csum = np.cumsum(counts, dtype=float)
        # D_{done+j+1} = d_end + (counts partial sum) - (j+1)*vol
        D = d_end + csum - np.arange(1, n + 1, dtype=float) * vol
        prefmax = np.maximum.accumulate(np.abs(D))
        while ci < len(checkpoints) and checkpoints[ci] <= done + n:
            idx = int(checkpoints[ci] - done) - 1
            out[ci] = max(running_max, float(prefmax[idx])) if idx >= 0 else running_max
            ci += 1
        running_max = max(running_max, float(prefmax[-1]))
        d_end = float(D[-1])
        done += n
    while ci < len(checkpoints):
        out[ci] = running_max
        ci += 1
    return out


def transfer_crossings_batch(targets: np.ndarray, x0: np.ndarray, facets,
                             tol: float = 1e-12):
    """Signed crossing counts of straight paths x0 -> target with a facet
    collection, plus a per-target degeneracy mask.

    ``facets`` is a list of dicts with keys:
      base (d,), normal (d,) unit, upinv (d-1, d), sign (+-1), ms (M, d)
    where ms lists the integer translates to test.  A target is flagged
    degenerate when a crossing lands within ``tol`` of a facet boundary, when
    the path is near-tangent to a nearby facet plane, or when an endpoint
    lies on a facet plane.
    """
    n, d = targets.shape
    dirs = targets - x0[None, :]
    counts = np.zeros(n, dtype=np.int64)
    degen = np.zeros(n, dtype=bool)
    for f in facets:
        nf = f["normal"]
        dn = dirs @ nf
        c0 = float(x0 @ nf)
        base = f["base"]
        upinv = f["upinv"]
        sgn_f = f["sign"]
        for m in f["ms"]:
            cm = float((base + m) @ nf)
            rel = cm - c0
            with np.errstate(divide="ignore", invalid="ignore"):
                s = rel / dn
            # near-tangent: direction almost parallel to the plane while the
            # path passes close to it
            parallel = (np.abs(dn) < tol) & (np.abs(rel) < tol)
            # endpoint on the plane (start handled by the x0 choice; the end
            # must be perturbed by the caller)
            end_on_plane = np.abs(rel - dn) < tol * np.maximum(1.0, np.abs(dn))
            hit = np.isfinite(s) & (s > tol) & (s < 1.0 - tol)
            s_edge = np.isfinite(s) & ((np.abs(s) <= tol) | (np.abs(s - 1.0) <= tol))
            cand = hit | s_edge | end_on_plane
            if not cand.any():
                degen |= parallel
                continue
            idx = np.where(hit)[0]
            if len(idx):
                P = x0[None, :] + s[idx, None] * dirs[idx]
                T = (P - (base + m)[None, :]) @ upinv.T
                inside = np.all((T > tol) & (T < 1.0 - tol), axis=1)
                on_edge = (np.all((T > -tol) & (T < 1.0 + tol), axis=1)
                           & ~inside)
                counts[idx[inside]] += np.where(dn[idx[inside]] > 0,
                                                sgn_f, -sgn_f)
                degen[idx[on_edge]] = True
            # endpoints / tangencies near THIS translate: only degenerate if
            # the foot point lies within the facet patch (loosely)
            for mask in (s_edge, end_on_plane & (np.abs(dn) >= tol)):
                j = np.where(mask)[0]
                if len(j):
                    sj = np.clip(np.nan_to_num(s[j], nan=0.0), 0.0, 1.0)
                    P = x0[None, :] + sj[:, None] * dirs[j]
                    T = (P - (base + m)[None, :]) @ upinv.T
                    close = np.all((T > -0.05) & (T < 1.05), axis=1)
                    degen[j[close]] = True
            degen |= parallel
    return counts, degen
