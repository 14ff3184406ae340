"""Normal-form reduction kernels.

The two hot loops of the package (Smith and column-Hermite reduction) are
written once, in a numba-compilable subset of numpy, and used two ways:

* fast path: ``@njit``-compiled over int64 arrays, with an overflow sentinel
  (any intermediate above ``INT64_SAFE`` aborts the run, because one further
  elimination step could wrap);
* exact path: the same source executed as plain Python over object-dtype
  arrays holding arbitrary-precision ints.

Both paths follow identical pivot rules, so outputs are identical entry by
entry.  The exact path is selected by ``TWISTKIT_PURE_NUMPY=1``, by numba
being unavailable, or automatically when the fast path reports overflow.
"""

from __future__ import annotations

import os

import numpy as np

# A single elimination step forms x - q*y with |q| <= max|entry|, so the
# worst new entry is bounded by L + L^2.  With L = 2^31 that stays below
# 2^63, hence the post-step check can never be reached via a wrapped value.
INT64_SAFE = 1 << 31

_PURE_ENV = os.environ.get("TWISTKIT_PURE_NUMPY", "") not in ("", "0")

OVERFLOW = 1
OK = 0


def _snf_core(D, U, V, track_u, track_v, limit):
    """Reduce D in place to Smith form; accumulate U (rows) and V (cols).

    On entry U and V are identities (or 1x1 dummies when untracked).
    Maintains D = U0 @ D_in @ V0 with U0, V0 unimodular.  Returns OK or
    OVERFLOW (the latter only when limit > 0).
    """
    r, c = D.shape
    t = 0
    while t < r and t < c:
        # First (row-major) entry of minimal absolute value in D[t:, t:].
        sub = D[t:, t:]
        absd = np.abs(sub)
        top = np.max(absd)
        if top == 0:
            break
        sent = absd.copy()
        sent[:, :] = top + 1
        masked = absd + (sub == 0) * sent
        flat = int(np.argmin(masked))
        w = c - t
        pi = t + flat // w
        pj = t + flat % w
        if pi != t:
            tmp = D[pi, :].copy()
            D[pi, :] = D[t, :]
            D[t, :] = tmp
            if track_u:
                tmp = U[pi, :].copy()
                U[pi, :] = U[t, :]
                U[t, :] = tmp
        if pj != t:
            tmp = D[:, pj].copy()
            D[:, pj] = D[:, t]
            D[:, t] = tmp
            if track_v:
                tmp = V[:, pj].copy()
                V[:, pj] = V[:, t]
                V[:, t] = tmp
        while True:
            if D[t, t] < 0:
                D[t, :] = -D[t, :]
                if track_u:
                    U[t, :] = -U[t, :]
            # Row ops until column t is clean below the pivot.
            while True:
                swapped = False
                d = D[t, t]
                for i in range(t + 1, r):
                    if D[i, t] != 0:
                        q = D[i, t] // d
                        if q != 0:
                            D[i, t:] -= q * D[t, t:]
                            if limit > 0 and np.max(np.abs(D[i, t:])) > limit:
                                return OVERFLOW
                            if track_u:
                                U[i, :] -= q * U[t, :]
                                if limit > 0 and np.max(np.abs(U[i, :])) > limit:
                                    return OVERFLOW
                        if D[i, t] != 0:
                            # Remainder in (0, d): promote it to the pivot.
                            tmp = D[i, :].copy()
                            D[i, :] = D[t, :]
                            D[t, :] = tmp
                            if track_u:
                                tmp = U[i, :].copy()
                                U[i, :] = U[t, :]
                                U[t, :] = tmp
                            swapped = True
                            break
                if not swapped:
                    break
            # Column ops until row t is clean right of the pivot.  Plain
            # column ops cannot dirty column t (its sub-pivot entries are
            # already zero); only a column swap can.
            col_swapped = False
            while True:
                swapped = False
                d = D[t, t]
                for j in range(t + 1, c):
                    if D[t, j] != 0:
                        q = D[t, j] // d
                        if q != 0:
                            D[:, j] -= q * D[:, t]
                            if limit > 0 and np.max(np.abs(D[:, j])) > limit:
                                return OVERFLOW
                            if track_v:
                                V[:, j] -= q * V[:, t]
                                if limit > 0 and np.max(np.abs(V[:, j])) > limit:
                                    return OVERFLOW
                        if D[t, j] != 0:
                            tmp = D[:, j].copy()
                            D[:, j] = D[:, t]
                            D[:, t] = tmp
                            if track_v:
                                tmp = V[:, j].copy()
                                V[:, j] = V[:, t]
                                V[:, t] = tmp
                            swapped = True
                            col_swapped = True
                            break
                if not swapped:
                    break
            if col_swapped:
                continue
            # Both the row and the column of the pivot are clean here.
            # Enforce divisibility of the trailing block by the pivot; a
            # failing entry is mixed into row t and the phases rerun, which
            # strictly shrinks the pivot (gcd step).
            d = D[t, t]
            fixed = True
            if d > 1 and t + 1 < r and t + 1 < c:
                rem = D[t + 1:, t + 1:] % d
                if np.any(rem != 0):
                    fixed = False
                    done = False
                    for i in range(t + 1, r):
                        for j in range(t + 1, c):
                            if D[i, j] % d != 0:
                                D[t, t:] += D[i, t:]
                                if limit > 0 and np.max(np.abs(D[t, t:])) > limit:
                                    return OVERFLOW
                                if track_u:
                                    U[t, :] += U[i, :]
                                    if limit > 0 and np.max(np.abs(U[t, :])) > limit:
                                        return OVERFLOW
                                done = True
                                break
                        if done:
                            break
            if fixed:
                break
        t += 1
    return OK


def _hnf_core(H, V, pivot_rows, track_v, limit):
    """Column-echelon Hermite reduction in place: H_out = H_in @ V0.

    Pivot columns come first, with strictly increasing pivot rows recorded
    in pivot_rows[:k]; pivots are positive; entries left of a pivot in its
    row are reduced into [0, pivot).  Trailing columns are zero.  Returns
    (status, k).
    """
    r, c = H.shape
    k = 0
    for row in range(r):
        if k == c:
            break
        while True:
            # Minimal-|entry| column among the active ones at this row.
            strip = H[row, k:]
            absd = np.abs(strip)
            top = np.max(absd)
            if top == 0:
                break
            sent = absd.copy()
            sent[:] = top + 1
            masked = absd + (strip == 0) * sent
            j = k + int(np.argmin(masked))
            if j != k:
                tmp = H[:, j].copy()
                H[:, j] = H[:, k]
                H[:, k] = tmp
                if track_v:
                    tmp = V[:, j].copy()
                    V[:, j] = V[:, k]
                    V[:, k] = tmp
            if H[row, k] < 0:
                H[:, k] = -H[:, k]
                if track_v:
                    V[:, k] = -V[:, k]
            d = H[row, k]
            any_rem = False
            for j in range(k + 1, c):
                if H[row, j] != 0:
                    q = H[row, j] // d
                    if q != 0:
                        H[:, j] -= q * H[:, k]
                        if limit > 0 and np.max(np.abs(H[:, j])) > limit:
                            return OVERFLOW, k
                        if track_v:
                            V[:, j] -= q * V[:, k]
                            if limit > 0 and np.max(np.abs(V[:, j])) > limit:
                                return OVERFLOW, k
                    if H[row, j] != 0:
                        any_rem = True
            if not any_rem:
                break
        if k < c and H[row, k] != 0:
            d = H[row, k]
            for l in range(k):
                q = H[row, l] // d
                if q != 0:
                    H[:, l] -= q * H[:, k]
                    if limit > 0 and np.max(np.abs(H[:, l])) > limit:
                        return OVERFLOW, k
                    if track_v:
                        V[:, l] -= q * V[:, k]
                        if limit > 0 and np.max(np.abs(V[:, l])) > limit:
                            return OVERFLOW, k
            pivot_rows[k] = row
            k += 1
    return OK, k


_snf_fast = None
_hnf_fast = None
_NUMBA_OK = False

if not _PURE_ENV:
    try:
        import numba

        _snf_fast = numba.njit(cache=True)(_snf_core)
        _hnf_fast = numba.njit(cache=True)(_hnf_core)
        _NUMBA_OK = True
    except ImportError:  # pragma: no cover - exercised via the env flag
        _NUMBA_OK = False


def fast_path_available() -> bool:
    return _NUMBA_OK


def backend_name() -> str:
    return "numba-int64" if _NUMBA_OK else "numpy-object"
