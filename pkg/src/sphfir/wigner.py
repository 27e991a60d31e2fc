"""Wigner little-d and D matrices.

``D_l^{mn}(alpha, beta, gamma) = exp(-1j m alpha) d_l^{mn}(beta) exp(-1j n gamma)``
with row index ``m`` and column index ``n`` both running ``-l..l``. With
this convention ``D_l(R S) = D_l(R) D_l(S)`` and the coefficient row vector
of ``u -> f(R u)`` is ``F_l @ D_l(R)``.
"""

from __future__ import annotations

from math import factorial, lgamma

import numpy as np

from .sphere import EulerAngles, Rotation, rotation_from_euler


def _log_binom(n: int, k: np.ndarray) -> np.ndarray:
    return np.array([lgamma(n + 1) - lgamma(int(j) + 1) - lgamma(n - int(j) + 1) for j in k])


def _boundary_seeds(ell: int, cb: np.ndarray, sb: np.ndarray) -> dict[str, np.ndarray]:
    """Closed forms on the edges of the degree-``ell`` matrix.

    Returns the four edges (top row m=l, bottom row m=-l, right column n=l,
    left column n=-l), each indexed by the free order ``k = -l..l``.
    """
    k = np.arange(-ell, ell + 1)
    root = np.exp(0.5 * _log_binom(2 * ell, ell + k))
    p_plus = (ell + k)[:, None]
    p_minus = (ell - k)[:, None]
    sign = np.where((ell - k) % 2 == 0, 1.0, -1.0)[:, None]
    root = root[:, None]
    top = sign * root * cb**p_plus * sb**p_minus  # d^{l, k}
    bottom = root * cb**p_minus * sb**p_plus  # d^{-l, k}
    right = root * cb**p_plus * sb**p_minus  # d^{k, l}
    left = sign * root * cb**p_minus * sb**p_plus  # d^{k, -l}
    return {"top": top, "bottom": bottom, "right": right, "left": left}


def little_d_batch(L: int, beta) -> list[np.ndarray]:
    """Little-d matrices for every degree ``l < L`` and every angle in ``beta``.

    Element ``l`` of the result has shape ``(K, 2l+1, 2l+1)`` for ``K``
    angles. Interior entries come from the three-term recursion in degree,
    which stays accurate well past ``l = 100``.
    """
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    K = beta.size
    if L <= 0:
        return []
    size = 2 * L - 1
    c = L - 1
    idx = np.arange(-c, c + 1)
    m = idx[:, None]
    n = idx[None, :]
    J = np.maximum(np.abs(m), np.abs(n))
    cosb = np.cos(beta)
    cb = np.cos(beta / 2.0)[None, :]
    sb = np.sin(beta / 2.0)[None, :]

    prev = np.zeros((size, size, K))
    cur = np.zeros((size, size, K))
    cur[c, c] = 1.0
    out = [np.ones((K, 1, 1))]
    mm = (m * n).astype(float)
    for ell in range(1, L):
        new = np.zeros_like(cur)
        inner = J < ell
        l2 = float(ell * ell)
        denom = np.sqrt(np.clip((l2 - m * m) * (l2 - n * n), 1e-300, None))
        a = ell * (2 * ell - 1) / denom
        if ell > 1:
            shift = mm / (ell * (ell - 1))
            lm1 = float((ell - 1) ** 2)
            b = ell * np.sqrt(np.clip((lm1 - m * m) * (lm1 - n * n), 0.0, None)) / ((ell - 1) * denom)
        else:
            shift = np.zeros_like(mm)
            b = np.zeros_like(mm)
        rec = a[..., None] * (cosb[None, None, :] - shift[..., None]) * cur - b[..., None] * prev
        new[inner] = rec[inner]

        seeds = _boundary_seeds(ell, cb, sb)
        lo, hi = c - ell, c + ell + 1
        new[hi - 1, lo:hi] = seeds["top"]
        new[lo, lo:hi] = seeds["bottom"]
        new[lo:hi, hi - 1] = seeds["right"]
        new[lo:hi, lo] = seeds["left"]
        prev, cur = cur, new
        out.append(np.moveaxis(cur[lo:hi, lo:hi], -1, 0).copy())
    at_zero = beta == 0.0
    if np.any(at_zero):
        # exact identity; the recursion leaves ~1e-14 residue
        for ell, d in enumerate(out):
            d[at_zero] = np.eye(2 * ell + 1)
    return out


def little_d(ell: int, beta: float) -> np.ndarray:
    """Real orthogonal matrix ``d_l(beta)``, rows and columns ordered ``-l..l``."""
    return little_d_batch(ell + 1, beta)[ell][0]


def little_d_sum(ell: int, beta: float) -> np.ndarray:
    """Slow reference: explicit factorial sum for every entry. Meant for small degree."""
    cb, sb = np.cos(beta / 2.0), np.sin(beta / 2.0)
    out = np.zeros((2 * ell + 1, 2 * ell + 1))
    f = factorial
    for i, mp in enumerate(range(-ell, ell + 1)):
        for k, m in enumerate(range(-ell, ell + 1)):
            pref = np.sqrt(float(f(ell + mp) * f(ell - mp) * f(ell + m) * f(ell - m)))
            total = 0.0
            for s in range(max(0, m - mp), min(ell + m, ell - mp) + 1):
                den = f(ell + m - s) * f(s) * f(mp - m + s) * f(ell - mp - s)
                total += (-1) ** (mp - m + s) / den * cb ** (2 * ell + m - mp - 2 * s) * sb ** (mp - m + 2 * s)
            out[i, k] = pref * total
    return out


def _phases(ell: int, angle: np.ndarray) -> np.ndarray:
    k = np.arange(-ell, ell + 1)
    return np.exp(-1j * np.multiply.outer(np.atleast_1d(angle), k))


def wigner_D_batch(L: int, angles: np.ndarray) -> list[np.ndarray]:
    """D matrices for ``K`` rotations given as an array of Euler angles, shape ``(K, 3)``.

    Element ``l`` has shape ``(K, 2l+1, 2l+1)``.
    """
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    ds = little_d_batch(L, angles[:, 1])
    out = []
    for ell, d in enumerate(ds):
        pa = _phases(ell, angles[:, 0])
        pg = _phases(ell, angles[:, 2])
        out.append(pa[:, :, None] * d * pg[:, None, :])
    return out


def wigner_D_all(L: int, e: EulerAngles | Rotation) -> list[np.ndarray]:
    """``[D_0, ..., D_{L-1}]`` for one rotation."""
    if isinstance(e, Rotation):
        e = e.to_euler()
    if not isinstance(e, EulerAngles):
        e = EulerAngles(*e)
    return [D[0] for D in wigner_D_batch(L, np.array([e.as_tuple()]))]


def wigner_D(ell: int, e: EulerAngles | tuple[float, float, float]) -> np.ndarray:
    """Unitary matrix ``D_l`` for a rotation given by z-y-z Euler angles."""
    return wigner_D_all(ell + 1, e)[ell]


def wigner_D_from_rotation(ell: int, R: Rotation) -> np.ndarray:
    """``D_l(R)`` for a rotation matrix; gimbal lock resolved with gamma = 0."""
    return wigner_D_all(ell + 1, R.to_euler())[ell]


def rotation_angles(rotations) -> np.ndarray:
    """Stack Euler angles of an iterable of rotations (or angle triples) into ``(K, 3)``."""
    rows = []
    for r in rotations:
        if isinstance(r, Rotation):
            r = r.to_euler()
        elif not isinstance(r, EulerAngles):
            r = rotation_from_euler(r).to_euler()
        rows.append(r.as_tuple())
    return np.array(rows, dtype=float).reshape(-1, 3)
