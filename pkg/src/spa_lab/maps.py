"""Linear maps between operator spaces, witness conversions, and the map catalog.

A map Λ: B(C^d_in) -> B(C^d_out) is stored through its Choi operator
E_Λ = (1 ⊗ Λ)(P+) with P+ the normalized maximally entangled projector on
C^d_in ⊗ C^d_in.  The inverse direction is Λ_E(ρ) = d_in · tr_A[E (ρ^T ⊗ 1)],
and E_{Λ_E} = E.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._optim import extremal_product_value
from .linalg import (
    HermitianOp,
    as_matrix,
    basis_vector,
    flip,
    interleaved_pair,
    kron,
    max_entangled_projector,
    partial_transpose,
    symplectic_j,
)


@dataclass(frozen=True)
class MapRep:
    """A linear map stored in Choi form with input/output dimensions."""

    d_in: int
    d_out: int
    choi: HermitianOp
    label: str = ""

    def __post_init__(self):
        if self.choi.dims != (self.d_in, self.d_out):
            raise ValueError(
                f"choi dims {self.choi.dims} do not match ({self.d_in}, {self.d_out})"
            )


def map_to_witness(m: MapRep) -> HermitianOp:
    """The operator (1 ⊗ Λ)(P+), i.e. the stored Choi operator."""
    return m.choi


def choi_from_action(action, d_in: int, d_out: int, label: str = "") -> MapRep:
    """Build a MapRep by applying Λ to the matrix units of the input space."""
    p = 1.0 / d_in
    blocks = np.zeros((d_in, d_in, d_out, d_out), dtype=complex)
    for i in range(d_in):
        for k in range(d_in):
            unit = np.zeros((d_in, d_in), dtype=complex)
            unit[i, k] = 1.0
            blocks[i, k] = np.asarray(action(unit), dtype=complex)
    choi = p * blocks.transpose(0, 2, 1, 3).reshape(d_in * d_out, d_in * d_out)
    return MapRep(d_in, d_out, HermitianOp(choi, (d_in, d_out)), label)


def witness_to_map(e: HermitianOp, label: str = "") -> MapRep:
    """Map whose action is ρ ↦ d_A tr_A[E (ρ^T ⊗ 1)]; its Choi form equals E."""
    da, db = e.dims

    def action(rho):
        return apply_witness_as_map(e, rho)

    return choi_from_action(action, da, db, label)


def apply_witness_as_map(e: HermitianOp, rho) -> np.ndarray:
    da, db = e.dims
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (da, da):
        raise ValueError(f"state shape {rho.shape} does not match d_in={da}")
    e4 = e.mat.reshape(da, db, da, db)
    return da * np.einsum("ijkl,ik->jl", e4, rho, optimize=True)


def apply_map(m: MapRep, rho) -> np.ndarray:
    """Λ(ρ) evaluated from the Choi form; linear in ρ."""
    return apply_witness_as_map(m.choi, rho)


def apply_to_b_factor(m: MapRep, x: HermitianOp) -> HermitianOp:
    """(1 ⊗ Λ)(X) for a bipartite X whose B factor matches the map input."""
    da, db = x.dims
    if db != m.d_in:
        raise ValueError(f"map input dim {m.d_in} does not match B dim {db}")
    x4 = x.mat.reshape(da, db, da, db)
    kern = m.d_in * m.choi.mat.reshape(m.d_in, m.d_out, m.d_in, m.d_out).transpose(1, 3, 0, 2)
    out = np.einsum("imkn,jlmn->ijkl", x4, kern, optimize=True)
    n = da * m.d_out
    return HermitianOp(out.reshape(n, n), (da, m.d_out))


# ---------------------------------------------------------------------------
# catalog constructors (each returns the witness with the printed
# normalization, i.e. a unit-trace Choi operator)
# ---------------------------------------------------------------------------

def transposition_witness(d: int) -> HermitianOp:
    """Choi operator of matrix transposition: F/d."""
    return HermitianOp(flip(d).mat / d, (d, d))


def transposition(d: int) -> MapRep:
    return MapRep(d, d, transposition_witness(d), "transpose")


def reduction_witness(d: int) -> HermitianOp:
    """Choi operator of ρ ↦ [tr(ρ)1 − ρ]/(d−1):  (1 − d·P+)/(d(d−1))."""
    if d < 2:
        raise ValueError("reduction map needs d >= 2")
    mat = (np.eye(d * d) - d * max_entangled_projector(d).mat) / (d * (d - 1))
    return HermitianOp(mat, (d, d))


def reduction(d: int) -> MapRep:
    return MapRep(d, d, reduction_witness(d), "reduction")


def choi3_witness() -> HermitianOp:
    """Choi operator of the Choi map on 3x3 (indices mod 3, |i−1⟩ = |(i+2) mod 3⟩)."""
    d = 3
    mat = np.zeros((9, 9), dtype=complex)
    for i in range(d):
        mat[i * d + i, i * d + i] += 2.0
        j = (i + 2) % d
        mat[i * d + j, i * d + j] += 1.0
    mat -= 3 * max_entangled_projector(d).mat
    return HermitianOp(mat / 6.0, (d, d))


def choi3() -> MapRep:
    def action(rho):
        out = -np.asarray(rho, dtype=complex).copy()
        for i in range(3):
            out[i, i] += 2 * rho[i, i]
            j = (i + 2) % 3
            out[j, j] += rho[i, i]
        return out / 2.0

    return choi_from_action(action, 3, 3, "choi")


def breuer_hall_witness(d: int, u: np.ndarray | None = None) -> HermitianOp:
    """Choi operator of ρ ↦ [tr(ρ)1 − ρ − Uρ^T U†]/(d−2), U skew-symmetric unitary."""
    if d % 2 != 0 or d < 4:
        raise ValueError("Breuer-Hall map needs even d >= 4")
    if u is None:
        u = symplectic_j(d)
    u = np.asarray(u, dtype=complex)
    if np.abs(u.conj().T @ u - np.eye(d)).max() > 1e-10:
        raise ValueError("U must be unitary")
    if np.abs(u.T + u).max() > 1e-10:
        raise ValueError("U must be skew-symmetric (U^T = -U)")
    one_u = kron(np.eye(d), u)
    mat = (
        np.eye(d * d) / d
        - max_entangled_projector(d).mat
        - one_u @ flip(d).mat @ one_u.conj().T / d
    ) / (d - 2)
    return HermitianOp(mat, (d, d))


def breuer_hall(d: int, u: np.ndarray | None = None) -> MapRep:
    return MapRep(d, d, breuer_hall_witness(d, u), "breuer-hall")


# ---------------------------------------------------------------------------
# unextendible product bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UpbSpec:
    """Orthogonal product vectors x_i ⊗ y_i with no product vector orthogonal to all."""

    dims: tuple[int, int]
    xs: tuple[np.ndarray, ...]
    ys: tuple[np.ndarray, ...]
    label: str = ""

    def __post_init__(self):
        da, db = self.dims
        n = len(self.xs)
        if n != len(self.ys):
            raise ValueError("xs and ys must have the same length")
        if n >= da * db:
            raise ValueError("a UPB must have fewer than dA*dB vectors")
        xs = tuple(np.asarray(x, dtype=complex) / np.linalg.norm(x) for x in self.xs)
        ys = tuple(np.asarray(y, dtype=complex) / np.linalg.norm(y) for y in self.ys)
        vs = [np.kron(x, y) for x, y in zip(xs, ys)]
        gram = np.array([[abs(np.vdot(v, w)) for w in vs] for v in vs])
        if np.abs(gram - np.eye(n)).max() > 1e-10:
            raise ValueError("UPB vectors must be pairwise orthogonal")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return len(self.xs)

    def vectors(self) -> list[np.ndarray]:
        return [np.kron(x, y) for x, y in zip(self.xs, self.ys)]

    def projector_sum(self) -> np.ndarray:
        vs = self.vectors()
        return sum(np.outer(v, v.conj()) for v in vs)


def tiles_upb() -> UpbSpec:
    """The 3x3 Tiles basis (5 vectors)."""
    e = [basis_vector(3, i) for i in range(3)]
    xs = [e[0], e[2], (e[0] - e[1]), (e[1] - e[2]), e[0] + e[1] + e[2]]
    ys = [(e[0] - e[1]), (e[1] - e[2]), e[2], e[0], e[0] + e[1] + e[2]]
    return UpbSpec((3, 3), tuple(xs), tuple(ys), "tiles")


def pyramid_upb() -> UpbSpec:
    """The 3x3 Pyramid basis: v_j ⊗ v_{2j mod 5} with apex vectors on a cone."""
    h = np.sqrt(1 + np.sqrt(5)) / 2
    norm = 2 / np.sqrt(5 + np.sqrt(5))
    vs = [
        norm * np.array([np.cos(2 * np.pi * j / 5), np.sin(2 * np.pi * j / 5), h])
        for j in range(5)
    ]
    xs = [vs[j] for j in range(5)]
    ys = [vs[(2 * j) % 5] for j in range(5)]
    return UpbSpec((3, 3), tuple(xs), tuple(ys), "pyramid")


def min_product_overlap(upb: UpbSpec, *, restarts: int = 24, alternations: int = 40,
                        seed: int = 7) -> float:
    """Heuristic minimum over product states of Σ_i |⟨v_i|e⊗f⟩|².

    A multistart alternating minimization; a strictly positive result is
    evidence (not proof) of unextendibility, since 0 would mean a product
    vector orthogonal to the whole basis.
    """
    val, _, _ = extremal_product_value(
        upb.projector_sum(), upb.dims, maximize=False,
        restarts=restarts, alternations=alternations, rng=seed,
    )
    return max(val, 0.0)


def upb_state(upb: UpbSpec) -> HermitianOp:
    """The PPT entangled state on the complement of the UPB span."""
    da, db = upb.dims
    n = upb.n
    mat = (np.eye(da * db) - upb.projector_sum()) / (da * db - n)
    return HermitianOp(mat, upb.dims)


def upb_witness(upb: UpbSpec, eps: float | None = None) -> HermitianOp:
    """Witness (Σ_i |v_i⟩⟨v_i| − ε·1)/(n − ε·dA·dB) detecting the UPB state.

    Any 0 < ε below the minimal product overlap keeps the witness property;
    the default is 0.9 times the heuristic estimate of that minimum.
    """
    da, db = upb.dims
    n = upb.n
    if eps is None:
        eps = 0.9 * min_product_overlap(upb)
    if not 0 < eps < n / (da * db):
        raise ValueError(f"eps must lie in (0, {n / (da * db)}), got {eps}")
    mat = (upb.projector_sum() - eps * np.eye(da * db)) / (n - eps * da * db)
    return HermitianOp(mat, upb.dims)


def decomposable_from_q(q: HermitianOp) -> HermitianOp:
    """The decomposable witness Q^Γ built from a positive operator Q."""
    return partial_transpose(q, "B")


def id_tensor_t_witness(d_a: int, d_b: int, p: float) -> HermitianOp:
    """Choi operator of the noisy one-sided transposition on C^dA ⊗ C^dB.

    Lives on the doubled space (AB):(A'B'):
    p/(dA dB)² · 1 + (1−p)/dB · P+^{AA'} ⊗ F^{BB'}.
    """
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    dd = d_a * d_b
    signal = interleaved_pair(max_entangled_projector(d_a), flip(d_b), d_a, d_b)
    mat = (p / dd**2) * np.eye(dd * dd) + ((1 - p) / d_b) * signal
    return HermitianOp(mat, (dd, dd))


def nonoptimal_2x2_witness(a: float, b: float) -> HermitianOp:
    """Two-qubit decomposable witness Q1 + Q2^Γ with rank-one Q1, Q2.

    Q2 = a·|Φ⟩⟨Φ| on span{|00⟩,|11⟩} (unnormalized), Q1 = b·|Ψ⟩⟨Ψ| on
    span{|01⟩,|10⟩}.  Not optimal for b > 0; its noisy versions can be
    completely positive yet entangled (NPT) when a < b.
    """
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    q2 = np.zeros((4, 4))
    q2[np.ix_([0, 3], [0, 3])] = a
    q1 = np.zeros((4, 4))
    q1[np.ix_([1, 2], [1, 2])] = b
    q2g = partial_transpose(HermitianOp(q2, (2, 2)), "B").mat
    return HermitianOp(q1 + q2g, (2, 2))


def nonoptimal_2x2_spa(a: float, b: float, p: float) -> HermitianOp:
    """Explicit entries of p/4·1 + (1−p)(Q1 + Q2^Γ) for the family above."""
    ap, bp, c = (1 - p) * a, (1 - p) * b, p / 4
    mat = np.array(
        [
            [ap + c, 0, 0, 0],
            [0, bp + c, bp + ap, 0],
            [0, bp + ap, bp + c, 0],
            [0, 0, 0, ap + c],
        ]
    )
    return HermitianOp(mat, (2, 2))


# ---------------------------------------------------------------------------
# name registry for the command line
# ---------------------------------------------------------------------------

CATALOG_NAMES = (
    "transpose", "reduction", "choi", "breuer-hall",
    "upb-tiles", "upb-pyramid", "id-tensor-t", "q-gamma",
)


def catalog_witness(name: str, dims: tuple[int, int] | None = None,
                    q: HermitianOp | None = None) -> HermitianOp:
    """Witness for a catalog name; `dims` where the family needs it."""
    if name == "transpose":
        d = _square_dim(dims, default=3)
        return transposition_witness(d)
    if name == "reduction":
        d = _square_dim(dims, default=3)
        return reduction_witness(d)
    if name == "choi":
        if dims not in (None, (3, 3)):
            raise ValueError("the Choi map is fixed at 3x3")
        return choi3_witness()
    if name == "breuer-hall":
        d = _square_dim(dims, default=4)
        return breuer_hall_witness(d)
    if name == "upb-tiles":
        return upb_witness(tiles_upb())
    if name == "upb-pyramid":
        return upb_witness(pyramid_upb())
    if name == "id-tensor-t":
        if dims is None:
            dims = (2, 2)
        return id_tensor_t_witness(dims[0], dims[1], 0.0)
    if name == "q-gamma":
        if q is None:
            raise ValueError("q-gamma needs a positive operator Q")
        w = decomposable_from_q(q)
        return HermitianOp(w.mat / w.trace(), w.dims)
    raise ValueError(f"unknown catalog name {name!r}; choose from {CATALOG_NAMES}")


def _square_dim(dims, default):
    if dims is None:
        return default
    if dims[0] != dims[1]:
        raise ValueError(f"this family needs equal dimensions, got {dims}")
    return dims[0]
