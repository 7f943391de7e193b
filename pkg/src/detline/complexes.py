"""Finite-dimensional cochain complexes and their determinant lines.

A complex is a dimension vector together with differentials
d_j : C^j -> C^{j+1} satisfying d_{j+1} d_j = 0.  Each C^j carries the
standard Hermitian inner product of its coordinates.  The main tool is the
orthogonal decomposition C^j = B^j + H^j + A^j into exact, harmonic and
coexact parts computed by SVD; it induces the canonical isomorphism ``phi``
between the determinant line of the complex and the determinant line of its
cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .gradedlinalg import DetElement, GradedDims

__all__ = [
    "RANK_RTOL",
    "RANK_ATOL",
    "CochainComplex",
    "CohomologyFrame",
    "CohomologyElement",
    "cohomology_frame",
    "sign_N",
    "phi",
    "dual_complex",
    "direct_sum",
    "alpha_cohomology",
]

# Rank decisions: singular values below RANK_RTOL * sigma_max count as zero;
# when sigma_max itself vanishes the absolute floor RANK_ATOL applies.
RANK_RTOL = 1e-8
RANK_ATOL = 1e-12


def _as_matrix(m, rows: int, cols: int) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.shape != (rows, cols):
        raise ValidationError(
            f"differential has shape {a.shape}, expected {(rows, cols)}")
    return a


@dataclass(frozen=True)
class CochainComplex:
    """Cochain complex of standard coordinate spaces.

    ``partial[j]`` is the matrix of d_j : C^j -> C^{j+1}; the list has one
    entry per degree 0..d-1.
    """

    dims: GradedDims
    partial: tuple[np.ndarray, ...]

    def __post_init__(self):
        d = self.dims.d
        if len(self.partial) != d:
            raise ValidationError(
                f"expected {d} differentials, got {len(self.partial)}")
        mats = tuple(
            _as_matrix(self.partial[j], self.dims.dims[j + 1], self.dims.dims[j])
            for j in range(d))
        object.__setattr__(self, "partial", mats)

    @property
    def d(self) -> int:
        return self.dims.d

    def differential_residual(self) -> float:
        """Largest entry of any d_{j+1} d_j, relative to the scale of d."""
        scale = max([1.0] + [np.abs(m).max() if m.size else 0.0
                             for m in self.partial])
        worst = 0.0
        for j in range(self.d - 1):
            prod = self.partial[j + 1] @ self.partial[j]
            if prod.size:
                worst = max(worst, float(np.abs(prod).max()))
        return worst / (scale * scale)

    def validate(self, tol: float = 1e-10) -> None:
        res = self.differential_residual()
        if res > tol:
            raise ValidationError(
                f"d.d residual {res:.3e} exceeds tolerance {tol:.3e}")


def _rank_threshold(s: np.ndarray) -> float:
    if s.size == 0 or s[0] == 0.0:
        return RANK_ATOL
    # the absolute floor keeps numerically-zero matrices at rank zero
    return max(RANK_RTOL * float(s[0]), RANK_ATOL)


def _range_null(mat: np.ndarray):
    """Orthonormal bases (columns) of the range and the null space of mat."""
    rows, cols = mat.shape
    if rows == 0 or cols == 0:
        return (np.zeros((rows, 0), dtype=complex), np.eye(cols, dtype=complex))
    u, s, vh = np.linalg.svd(mat, full_matrices=True)
    thr = _rank_threshold(s)
    rank = int(np.sum(s > thr))
    return u[:, :rank], vh[rank:, :].conj().T


@dataclass(frozen=True)
class CohomologyFrame:
    """Orthonormal frames of the decomposition C^j = B^j + H^j + A^j.

    B^j is the image of d_{j-1}, H^j the orthogonal complement of B^j inside
    ker d_j (the harmonic space), and A^j the orthogonal complement of the
    kernel.  ``betti[j]`` is dim H^j.
    """

    complex: CochainComplex
    B: tuple[np.ndarray, ...]
    H: tuple[np.ndarray, ...]
    A: tuple[np.ndarray, ...]

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(h.shape[1] for h in self.H)

    @property
    def acyclic(self) -> bool:
        return all(b == 0 for b in self.betti)


def cohomology_frame(c: CochainComplex) -> CohomologyFrame:
    """Compute the orthogonal B/H/A decomposition of every degree by SVD."""
    d = c.d
    n = c.dims.dims
    ranges = []
    kernels = []
    coexact = []
    for j in range(d):
        rng, nul = _range_null(c.partial[j])
        ranges.append(rng)
        kernels.append(nul)
        u, s, vh = np.linalg.svd(c.partial[j]) if min(c.partial[j].shape) \
            else (None, np.zeros(0), None)
        thr = _rank_threshold(s)
        rank = int(np.sum(s > thr))
        if min(c.partial[j].shape):
            coexact.append(vh[:rank, :].conj().T)
        else:
            coexact.append(np.zeros((n[j], 0), dtype=complex))
    B, H, A = [], [], []
    for j in range(d + 1):
        bmat = ranges[j - 1] if j > 0 else np.zeros((n[0], 0), dtype=complex)
        ker = kernels[j] if j < d else np.eye(n[d], dtype=complex)
        amat = coexact[j] if j < d else np.zeros((n[d], 0), dtype=complex)
        # harmonic part: project the exact directions out of the kernel
        proj = ker - bmat @ (bmat.conj().T @ ker)
        if proj.size:
            u, s, _ = np.linalg.svd(proj, full_matrices=False)
            hmat = u[:, s > 0.5]
        else:
            hmat = np.zeros((n[j], 0), dtype=complex)
        if hmat.shape[1] != ker.shape[1] - bmat.shape[1]:
            raise ValidationError(
                f"degree {j}: image of d is not contained in the kernel "
                f"(is this a complex?)")
        B.append(bmat)
        H.append(hmat)
        A.append(amat)
    return CohomologyFrame(c, tuple(B), tuple(H), tuple(A))


def sign_N(frame: CohomologyFrame) -> int:
    """Parity of (1/2) sum_j dim A^j (dim A^j + (-1)^{j+1}).

    This is the sign the canonical map ``phi`` carries.
    """
    total = 0
    for j, a in enumerate(frame.A):
        k = a.shape[1]
        total += (k * (k + (-1) ** (j + 1))) // 2
    return total % 2


@dataclass(frozen=True)
class CohomologyElement:
    """Element of the determinant line of cohomology, as a coefficient
    against the wedge of the frame's orthonormal harmonic bases."""

    coeff: complex
    frame: CohomologyFrame = field(repr=False)

    @property
    def betti(self) -> tuple[int, ...]:
        return self.frame.betti


def phi(x: DetElement, frame: CohomologyFrame) -> CohomologyElement:
    """Canonical isomorphism Det(C) -> Det(H(C)).

    Decomposing the standard wedge of C^j through the frame gives the change
    of basis T_j = [d(A^{j-1}) | H^j | A^j]; the coefficient transforms by
    prod_j det(T_j)^{(-1)^{j+1}} together with the sign (-1)^N.
    """
    c = frame.complex
    if x.dims != c.dims or x.dualized:
        raise ValidationError("element does not live on this complex's line")
    coeff = complex(x.coeff)
    for j in range(c.d + 1):
        blocks = []
        if j > 0 and frame.A[j - 1].shape[1]:
            blocks.append(c.partial[j - 1] @ frame.A[j - 1])
        if frame.H[j].shape[1]:
            blocks.append(frame.H[j])
        if frame.A[j].shape[1]:
            blocks.append(frame.A[j])
        nj = c.dims.dims[j]
        t = np.hstack(blocks) if blocks else np.zeros((nj, 0), dtype=complex)
        if t.shape[1] != nj:
            raise ValidationError(f"degree {j}: frame does not span C^{j}")
        det = np.linalg.det(t) if nj else 1.0
        coeff *= det ** (1 if j % 2 else -1)
    if sign_N(frame):
        coeff = -coeff
    return CohomologyElement(coeff, frame)


def dual_complex(c: CochainComplex) -> CochainComplex:
    """Dual complex: degree j holds the anti-dual of C^{d-j}, and the
    differential is the conjugate transpose of d_{d-j-1}."""
    dims = c.dims.reversed()
    partial = tuple(c.partial[c.d - j - 1].conj().T for j in range(c.d))
    return CochainComplex(dims, partial)


def direct_sum(c1: CochainComplex, c2: CochainComplex) -> CochainComplex:
    """Degreewise direct sum, first summand's coordinates first."""
    if c1.d != c2.d:
        raise ValidationError("degree mismatch in direct sum")
    dims = c1.dims + c2.dims
    partial = []
    for j in range(c1.d):
        a, b = c1.partial[j], c2.partial[j]
        m = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]),
                     dtype=complex)
        m[:a.shape[0], :a.shape[1]] = a
        m[a.shape[0]:, a.shape[1]:] = b
        partial.append(m)
    return CochainComplex(dims, tuple(partial))


def alpha_cohomology(x: CohomologyElement,
                     frame_hat: CohomologyFrame) -> CohomologyElement:
    """Anti-linear duality on cohomology determinant lines.

    Identifies H^j of the dual complex with the anti-dual of H^{d-j} through
    the evaluation pairing of harmonic representatives, then applies the
    graded duality map.  The result is expressed against the harmonic frame
    of the dual complex.
    """
    frame = x.frame
    d = frame.complex.d
    if d % 2 == 0:
        raise ValidationError("duality on cohomology needs odd top degree")
    betti = frame.betti
    betti_hat = frame_hat.betti
    if tuple(betti_hat) != tuple(betti[::-1]):
        raise ValidationError("frames are not dual to each other")
    parity = 0
    for j in range(1, d + 1):
        for k in range(j):
            parity += betti[j] * betti[k]
    parity += sum(betti[k] for k in range(0, d + 1, 2))
    coeff = complex(x.coeff).conjugate()
    if parity % 2:
        coeff = -coeff
    for j in range(d + 1):
        if betti_hat[j] == 0:
            continue
        # pairing of degree-j dual harmonics against degree-(d-j) harmonics
        p = frame_hat.H[j].T @ frame.H[d - j].conj()
        coeff *= np.linalg.det(p) ** (1 if j % 2 else -1)
    return CohomologyElement(coeff, frame_hat)
