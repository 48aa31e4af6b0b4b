"""Dense complex linear algebra on bipartite operator spaces.

Operators act on C^dA (x) C^dB with the flat-index convention
|i⟩|j⟩ ↦ i*dB + j.  Everything here is a pure function of its inputs;
`HermitianOp` instances are immutable and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_ATOL = 1e-12


def _locked(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class HermitianOp:
    """Hermitian operator on a bipartite space, with dimension metadata.

    The matrix is symmetrized on construction; asymmetry beyond
    ``HERMITICITY_ATOL`` (absolute, per entry) is an error rather than
    something to fix silently.
    """

    mat: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        da, db = (int(x) for x in self.dims)
        if da < 1 or db < 1:
            raise ValueError(f"dims must be positive, got {self.dims}")
        mat = np.asarray(self.mat, dtype=complex)
        n = da * db
        if mat.shape != (n, n):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {da}x{db}")
        asym = float(np.abs(mat - mat.conj().T).max()) if n else 0.0
        if asym > HERMITICITY_ATOL:
            raise ValueError(f"matrix is not Hermitian: max |X - X^dag| = {asym:.3e}")
        object.__setattr__(self, "mat", _locked((mat + mat.conj().T) / 2))
        object.__setattr__(self, "dims", (da, db))

    @property
    def d(self) -> int:
        da, db = self.dims
        return da * db

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def __array__(self, dtype=None):
        return np.asarray(self.mat, dtype=dtype)


def as_matrix(x) -> np.ndarray:
    """Plain complex ndarray view of an operator or array-like."""
    if isinstance(x, HermitianOp):
        return x.mat
    return np.asarray(x, dtype=complex)


@dataclass(frozen=True)
class EigResult:
    """Ascending eigenvalues and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def kron(a, b) -> np.ndarray:
    """Tensor product in the |ij⟩ ↦ i*dB + j convention."""
    return np.kron(as_matrix(a), as_matrix(b))


def basis_vector(d: int, i: int) -> np.ndarray:
    e = np.zeros(d, dtype=complex)
    e[i] = 1.0
    return e


def partial_transpose(x: HermitianOp, subsystem: str = "B") -> HermitianOp:
    """Transpose one tensor factor: (X^Γ)_{ij,kl} = X_{il,kj} for subsystem B.

    An involution; preserves trace and Frobenius norm exactly (it is an
    entry permutation).
    """
    da, db = x.dims
    x4 = x.mat.reshape(da, db, da, db)
    if subsystem == "B":
        y = x4.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        y = x4.transpose(2, 1, 0, 3)
    else:
        raise ValueError("subsystem must be 'A' or 'B'")
    return HermitianOp(y.reshape(da * db, da * db), x.dims)


def partial_trace(x: HermitianOp, subsystem: str = "B") -> np.ndarray:
    """Trace out the named factor, returning a matrix on the other one."""
    da, db = x.dims
    x4 = x.mat.reshape(da, db, da, db)
    if subsystem == "B":
        return np.einsum("ijkj->ik", x4)
    if subsystem == "A":
        return np.einsum("ijil->jl", x4)
    raise ValueError("subsystem must be 'A' or 'B'")


def flip(d: int) -> HermitianOp:
    """Swap operator F|ψ⟩|φ⟩ = |φ⟩|ψ⟩ on C^d (x) C^d."""
    if d < 2:
        raise ValueError("flip needs d >= 2")
    f = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            f[i * d + j, j * d + i] = 1.0
    return HermitianOp(f, (d, d))


def max_entangled_vector(d: int) -> np.ndarray:
    """(1/sqrt d) sum_i |ii⟩."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / np.sqrt(d)
    return v


def max_entangled_projector(d: int) -> HermitianOp:
    """Rank-1 projector onto the maximally entangled vector; unit trace."""
    if d < 2:
        raise ValueError("need d >= 2")
    v = max_entangled_vector(d)
    return HermitianOp(np.outer(v, v.conj()), (d, d))


def symplectic_j(d: int) -> np.ndarray:
    """Canonical skew-symmetric unitary: 2x2 blocks [[0,1],[-1,0]] pairing (0,1),(2,3),..."""
    if d % 2 != 0 or d < 2:
        raise ValueError("symplectic form needs even d >= 2")
    j = np.zeros((d, d), dtype=complex)
    for k in range(0, d, 2):
        j[k, k + 1] = 1.0
        j[k + 1, k] = -1.0
    return j


def interleaved_pair(p_aa: HermitianOp | np.ndarray, q_bb: HermitianOp | np.ndarray,
                     da: int, db: int) -> np.ndarray:
    """Operator acting as P on the (A,A') pair and Q on (B,B').

    P lives on C^dA (x) C^dA, Q on C^dB (x) C^dB; the result lives on
    (A B):(A' B') with each side flattened as a*dB + b.
    """
    p = as_matrix(p_aa)
    q = as_matrix(q_bb)
    big = np.kron(p, q)  # index order (a, a', b, b')
    big = big.reshape(da, da, db, db, da, da, db, db)
    big = big.transpose(0, 2, 1, 3, 4, 6, 5, 7)  # -> (a, b, a', b')
    n = (da * db) ** 2
    return big.reshape(n, n)


def _phase_fix(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    top = mags.max()
    if top < 1e-300:
        return v
    k = int(np.nonzero(mags >= top * (1 - 1e-12))[0][0])
    ph = v[k] / abs(v[k])
    return v / ph


def _canonical_block_basis(block: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of span(block columns).

    Gram-Schmidt on the projections of the canonical basis vectors, taken
    in index order, so the result depends only on the subspace.
    """
    n, m = block.shape
    proj = block @ block.conj().T
    cols: list[np.ndarray] = []
    thresh = 1e-6
    while len(cols) < m:
        for k in range(n):
            v = proj[:, k].copy()
            for c in cols:
                v -= c * (c.conj() @ v)
            nv = np.linalg.norm(v)
            if nv > thresh:
                cols.append(v / nv)
                if len(cols) == m:
                    break
        else:
            thresh /= 100.0
            if thresh < 1e-14:  # numerically degenerate projector; keep input basis
                return block
    return np.column_stack(cols)


def herm_eig(x, atol: float = HERMITICITY_ATOL, degen_tol: float = 1e-10) -> EigResult:
    """Eigendecomposition with a deterministic eigenvector convention.

    Eigenvalues ascend.  Within a degenerate cluster the basis is re-fixed
    by ordered Gram-Schmidt on the canonical basis, and every vector gets
    a phase fix, so identical input bits give identical output on a given
    platform.
    """
    mat = as_matrix(x)
    asym = float(np.abs(mat - mat.conj().T).max())
    if asym > atol:
        raise ValueError(f"input is not Hermitian within {atol:g}: deviation {asym:.3e}")
    h = (mat + mat.conj().T) / 2
    w, v = np.linalg.eigh(h)
    n = len(w)
    scale = max(1.0, float(np.abs(w).max())) if n else 1.0
    out = v.copy()
    i = 0
    while i < n:
        j = i + 1
        while j < n and w[j] - w[j - 1] <= degen_tol * scale:
            j += 1
        if j - i > 1:
            out[:, i:j] = _canonical_block_basis(out[:, i:j])
        for k in range(i, j):
            out[:, k] = _phase_fix(out[:, k])
        i = j
    return EigResult(_locked(w.copy()), _locked(out))


def min_eigenvalue(x) -> float:
    mat = as_matrix(x)
    h = (mat + mat.conj().T) / 2
    return float(np.linalg.eigvalsh(h)[0])


def max_eigenvalue(x) -> float:
    mat = as_matrix(x)
    h = (mat + mat.conj().T) / 2
    return float(np.linalg.eigvalsh(h)[-1])


def takagi(sym: np.ndarray, atol: float = 1e-11) -> tuple[np.ndarray, np.ndarray]:
    """Autonne-Takagi factorization A = U diag(lam) U^T of a complex symmetric A.

    Returns (lam, U): lam real nonnegative descending, U unitary.  Uses the
    real embedding M = [[Re A, Im A], [Im A, -Re A]]: an eigenvector (x;y)
    of M with eigenvalue s >= 0 gives u = x + iy with A conj(u) = s u.  The
    kernel of M pairs up under (x;y) -> (-y;x); one vector per pair is kept.
    """
    a = np.asarray(sym, dtype=complex)
    a = (a + a.T) / 2
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex)
    m = np.block([[a.real, a.imag], [a.imag, -a.real]])
    w, q = np.linalg.eigh(m)
    scale = max(1.0, float(np.abs(w).max()))
    tol = atol * scale
    for _ in range(4):
        pos = np.nonzero(w > tol)[0]
        zero = np.nonzero(np.abs(w) <= tol)[0]
        if len(pos) + len(zero) // 2 == n and len(zero) % 2 == 0:
            break
        tol *= 4
    else:
        raise np.linalg.LinAlgError("could not split the Takagi spectrum into pairs")

    vecs = [q[:, k] for k in pos]
    lams = [float(w[k]) for k in pos]
    rest = q[:, zero]
    needed = len(zero) // 2
    for _ in range(needed):
        z = rest[:, 0]
        z = z / np.linalg.norm(z)
        jz = np.concatenate([-z[n:], z[:n]])
        vecs.append(z)
        lams.append(0.0)
        if rest.shape[1] <= 1:
            break
        b = rest[:, 1:]
        for basis in (z, jz):
            b = b - np.outer(basis, basis @ b)
        u, s, _ = np.linalg.svd(b, full_matrices=False)
        rest = u[:, s > 1e-7]

    us = np.column_stack([v[:n] + 1j * v[n:] for v in vecs])
    lam = np.asarray(lams)
    order = np.argsort(-lam)
    return lam[order], us[:, order]


def op_to_json_dict(x: HermitianOp) -> dict:
    """Matrix exchange format: {"dims":[dA,dB],"re":[[...]],"im":[[...]]}, row-major."""
    return {
        "dims": [int(x.dims[0]), int(x.dims[1])],
        "re": x.mat.real.tolist(),
        "im": x.mat.imag.tolist(),
    }


def op_from_json_dict(d: dict) -> HermitianOp:
    da, db = (int(v) for v in d["dims"])
    mat = np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)
    return HermitianOp(mat, (da, db))
