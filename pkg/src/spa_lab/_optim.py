"""Alternating eigenvector search for extremal product-vector overlaps."""

from __future__ import annotations

import numpy as np


def _unit_rows(m: np.ndarray) -> np.ndarray:
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def extremal_product_value(mat, dims: tuple[int, int], *, maximize: bool = True,
                           restarts: int = 16, alternations: int = 20,
                           rng=None) -> tuple[float, np.ndarray, np.ndarray]:
    """Optimize ⟨e⊗f| M |e⊗f⟩ over unit product vectors by alternating eigensteps.

    Fixing f makes the objective a Hermitian quadratic form in e (and vice
    versa), so each half-step is an extremal eigenvector.  All restarts are
    batched.  Returns (value, e, f) for the best restart; a heuristic, not
    a certificate.
    """
    da, db = dims
    m4 = np.asarray(mat, dtype=complex).reshape(da, db, da, db)
    rng = np.random.default_rng(rng)
    e = _unit_rows(rng.standard_normal((restarts, da)) + 1j * rng.standard_normal((restarts, da)))
    f = _unit_rows(rng.standard_normal((restarts, db)) + 1j * rng.standard_normal((restarts, db)))
    col = -1 if maximize else 0
    for _ in range(alternations):
        a = np.einsum("ajbl,rj,rl->rab", m4, f.conj(), f, optimize=True)
        a = (a + a.conj().transpose(0, 2, 1)) / 2
        e = np.linalg.eigh(a)[1][:, :, col]
        b = np.einsum("ajbl,ra,rb->rjl", m4, e.conj(), e, optimize=True)
        b = (b + b.conj().transpose(0, 2, 1)) / 2
        f = np.linalg.eigh(b)[1][:, :, col]
    vals = np.einsum("ajbl,ra,rj,rb,rl->r", m4, e.conj(), f.conj(), e, f, optimize=True).real
    k = int(np.argmax(vals) if maximize else np.argmin(vals))
    return float(vals[k]), e[k], f[k]
