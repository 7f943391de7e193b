"""The odd signature operator of a chiral complex and its graded determinant.

For a complex (C, d) with chirality Gamma the signature operator is
B = Gamma d + d Gamma.  Its square preserves degrees, which allows splitting
the complex along the spectrum of B^2, and the graded determinant of the even
part of B recovers the refined torsion.  Log-determinants are taken along a
chosen branch cut (an Agmon angle) and combine with the finite-dimensional
eta invariant.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .complexes import (RANK_ATOL, RANK_RTOL, CochainComplex,
                        CohomologyElement, CohomologyFrame, cohomology_frame)
from .errors import SpectralBoundaryError, ValidationError
from .gradedlinalg import GradedDims
from .torsion import ChiralityOp, refined_torsion, validate_chirality

__all__ = [
    "SignatureOp",
    "build_signature",
    "plus_minus_split",
    "graded_det_finite",
    "SpectralPart",
    "SpectralSplit",
    "spectral_split",
    "torsion_via_split",
    "log_det_cut",
    "EtaData",
    "eta_finite",
    "det_eta_check",
    "pick_agmon_angle",
    "graded_det_via_xi_eta",
]

_RAY_TOL = 1e-10  # angular distance below which an eigenvalue sits on a cut
_CLUSTER_RTOL = 1e-8  # relative gap required between lambda and |spec(B^2)|


def _gd_block(c: CochainComplex, g: ChiralityOp, j: int) -> np.ndarray:
    """(Gamma d)|_{C^j} : C^j -> C^{d-j-1}; zero map in top degree."""
    d = c.d
    if j >= d:
        return np.zeros((c.dims.dims[0], c.dims.dims[d]), dtype=complex)
    return g.gamma[j + 1] @ c.partial[j]


def _dg_block(c: CochainComplex, g: ChiralityOp, j: int) -> np.ndarray:
    """(d Gamma)|_{C^j} : C^j -> C^{d-j+1}; zero map in degree zero."""
    d = c.d
    if j == 0:
        return np.zeros((c.dims.dims[d], c.dims.dims[0]), dtype=complex)
    return c.partial[d - j] @ g.gamma[j]


def _bsq_block(c: CochainComplex, g: ChiralityOp, j: int) -> np.ndarray:
    """B^2 restricted to C^j: (Gamma d)^2 + (d Gamma)^2."""
    d = c.d
    n = c.dims.dims
    out = np.zeros((n[j], n[j]), dtype=complex)
    if j < d:
        out += g.gamma[d - j] @ c.partial[d - j - 1] @ g.gamma[j + 1] @ c.partial[j]
    if j > 0:
        out += c.partial[j - 1] @ g.gamma[d - j + 1] @ c.partial[d - j] @ g.gamma[j]
    return out


def _parity_matrix(c: CochainComplex, g: ChiralityOp, parity: int):
    """Matrix of B on the sum of degrees of the given parity, plus offsets."""
    d = c.d
    n = c.dims.dims
    degs = [j for j in range(d + 1) if j % 2 == parity]
    offs = {}
    pos = 0
    for j in degs:
        offs[j] = pos
        pos += n[j]
    mat = np.zeros((pos, pos), dtype=complex)
    for j in degs:
        tgt = d - j - 1
        if 0 <= tgt <= d and tgt % 2 == parity:
            mat[offs[tgt]:offs[tgt] + n[tgt], offs[j]:offs[j] + n[j]] += \
                _gd_block(c, g, j)
        tgt = d - j + 1
        if 0 <= tgt <= d and tgt % 2 == parity:
            mat[offs[tgt]:offs[tgt] + n[tgt], offs[j]:offs[j] + n[j]] += \
                _dg_block(c, g, j)
    return mat, degs, offs


@dataclass(frozen=True)
class SignatureOp:
    """B = Gamma d + d Gamma packaged with its even and odd matrices."""

    complex: CochainComplex
    chirality: ChiralityOp
    b_even: np.ndarray
    b_odd: np.ndarray

    def bsq_block(self, j: int) -> np.ndarray:
        return _bsq_block(self.complex, self.chirality, j)


def build_signature(c: CochainComplex, g: ChiralityOp) -> SignatureOp:
    validate_chirality(c, g)
    even, _, _ = _parity_matrix(c, g, 0)
    odd, _, _ = _parity_matrix(c, g, 1)
    return SignatureOp(c, g, even, odd)


def _null_basis(mat: np.ndarray) -> np.ndarray:
    rows, cols = mat.shape
    if rows == 0 or cols == 0:
        return np.eye(cols, dtype=complex)
    u, s, vh = np.linalg.svd(mat, full_matrices=True)
    thr = RANK_ATOL if s.size == 0 or s[0] == 0 else \
        max(RANK_RTOL * float(s[0]), RANK_ATOL)
    rank = int(np.sum(s > thr))
    return vh[rank:, :].conj().T


def _restrict(basis: np.ndarray, image: np.ndarray, what: str,
              tol: float = 1e-8) -> np.ndarray:
    """Coordinates of image's columns in the span of basis, with a residual
    check that the span really contains them."""
    if basis.shape[1] == 0:
        if image.size and np.abs(image).max() > tol:
            raise ValidationError(f"{what}: image does not lie in the subspace")
        return np.zeros((0, image.shape[1]), dtype=complex)
    x, *_ = np.linalg.lstsq(basis, image, rcond=None)
    res = basis @ x - image
    scale = max(1.0, float(np.abs(image).max()) if image.size else 0.0)
    if res.size and float(np.abs(res).max()) > tol * scale:
        raise ValidationError(f"{what}: subspace is not invariant "
                              f"(residual {np.abs(res).max():.3e})")
    return x


def plus_minus_split(c: CochainComplex, g: ChiralityOp):
    """Bases of C^j_+ = ker(d Gamma) and C^j_- = ker(d) in every degree.

    Raises SpectralBoundaryError unless the two intersect trivially and span,
    which is the bijectivity condition for B.
    """
    d = c.d
    plus, minus = [], []
    for j in range(d + 1):
        p = _null_basis(_dg_block(c, g, j))
        m = _null_basis(c.partial[j]) if j < d else \
            np.eye(c.dims.dims[d], dtype=complex)
        if p.shape[1] + m.shape[1] != c.dims.dims[j]:
            raise SpectralBoundaryError(
                f"degree {j}: ker(dGamma) + ker(d) does not split C^{j} "
                f"(B is not bijective)")
        if p.shape[1] and m.shape[1]:
            smallest = np.linalg.svd(np.hstack([p, m]), compute_uv=False)[-1]
            if smallest < 1e-10:
                raise SpectralBoundaryError(
                    f"degree {j}: the +/- subspaces are numerically dependent")
        plus.append(p)
        minus.append(m)
    return plus, minus


def _block_diag_basis(bases, degs):
    cols = [bases[j] for j in degs]
    rows = [b.shape[0] for b in cols]
    width = [b.shape[1] for b in cols]
    out = np.zeros((sum(rows), sum(width)), dtype=complex)
    r = c0 = 0
    for b in cols:
        out[r:r + b.shape[0], c0:c0 + b.shape[1]] = b
        r += b.shape[0]
        c0 += b.shape[1]
    return out


def graded_det_finite(c: CochainComplex, g: ChiralityOp) -> complex:
    """Graded determinant det(B+_even) / det(-B-_even) of a bijective even
    part, computed in explicit bases of the +/- subspaces."""
    plus, minus = plus_minus_split(c, g)
    b_even, degs, _ = _parity_matrix(c, g, 0)
    p = _block_diag_basis(plus, degs)
    m = _block_diag_basis(minus, degs)
    num = _restrict(p, b_even @ p, "B+ even")
    den = _restrict(m, -b_even @ m, "B- even")
    det_num = np.linalg.det(num) if num.size else 1.0
    det_den = np.linalg.det(den) if den.size else 1.0
    if det_den == 0 or det_num == 0:
        raise SpectralBoundaryError("B_even is not bijective")
    return complex(det_num / det_den)


@dataclass(frozen=True)
class SpectralPart:
    """A B^2-invariant piece of a chiral complex, with the embedding bases
    (orthonormal columns) and the restricted differentials and chirality."""

    bases: tuple[np.ndarray, ...]
    complex: CochainComplex
    chirality: ChiralityOp


@dataclass(frozen=True)
class SpectralSplit:
    lam: float
    small: SpectralPart
    large: SpectralPart


def _part_from_bases(c: CochainComplex, g: ChiralityOp, bases) -> SpectralPart:
    d = c.d
    dims = GradedDims(tuple(b.shape[1] for b in bases))
    partial = tuple(
        _restrict(bases[j + 1], c.partial[j] @ bases[j], f"d restricted, degree {j}")
        for j in range(d))
    gamma = tuple(
        _restrict(bases[d - j], g.gamma[j] @ bases[j], f"Gamma restricted, degree {j}")
        for j in range(d + 1))
    return SpectralPart(tuple(bases), CochainComplex(dims, partial),
                        ChiralityOp(gamma))


def spectral_split(c: CochainComplex, g: ChiralityOp,
                   lam: float) -> SpectralSplit:
    """Split the complex along the spectrum of B^2 at level lam >= 0.

    The small part collects the generalized eigenspaces with |eigenvalue|
    at most lam (for lam = 0: the numerically zero eigenvalues); the large
    part is its B^2-invariant complement.  Raises SpectralBoundaryError when
    lam falls inside an eigenvalue cluster.
    """
    if lam < 0:
        raise ValidationError("split level must be nonnegative")
    validate_chirality(c, g)
    d = c.d
    small_bases, large_bases = [], []
    for j in range(d + 1):
        bsq = _bsq_block(c, g, j)
        n = bsq.shape[0]
        if n == 0:
            z = np.zeros((0, 0), dtype=complex)
            small_bases.append(z)
            large_bases.append(z)
            continue
        eigs = np.linalg.eigvals(bsq)
        scale = max(1.0, float(np.abs(eigs).max()))
        cut = lam if lam > 0 else RANK_RTOL * scale
        if lam > 0:
            gap = np.min(np.abs(np.abs(eigs) - lam))
            if gap <= _CLUSTER_RTOL * max(lam, scale):
                raise SpectralBoundaryError(
                    f"degree {j}: split level {lam} inside an eigenvalue "
                    f"cluster (gap {gap:.3e})")
        small = lambda z: abs(z) <= cut
        _, zs, sdim = scipy.linalg.schur(bsq, output="complex", sort=small)
        _, zl, ldim = scipy.linalg.schur(
            bsq, output="complex", sort=lambda z: abs(z) > cut)
        if sdim + ldim != n:
            raise SpectralBoundaryError(
                f"degree {j}: spectral split did not exhaust C^{j}")
        small_bases.append(zs[:, :sdim])
        large_bases.append(zl[:, :ldim])
    return SpectralSplit(lam,
                         _part_from_bases(c, g, small_bases),
                         _part_from_bases(c, g, large_bases))


def torsion_via_split(c: CochainComplex, g: ChiralityOp, lam: float,
                      frame: CohomologyFrame | None = None) -> CohomologyElement:
    """Refined torsion computed through a spectral split at level lam:
    graded determinant of the large part times the torsion of the small part,
    mapped into the cohomology frame of the full complex."""
    if frame is None:
        frame = cohomology_frame(c)
    split = spectral_split(c, g, lam)
    large, small = split.large, split.small
    det_large = graded_det_finite(large.complex, large.chirality)
    small_frame = cohomology_frame(small.complex)
    if small_frame.betti != frame.betti:
        raise SpectralBoundaryError(
            "small part does not carry the full cohomology")
    rho_small = refined_torsion(small.complex, small.chirality, small_frame)
    coeff = det_large * rho_small.coeff
    for j in range(c.d + 1):
        if frame.betti[j] == 0:
            continue
        w = frame.H[j].conj().T @ small.bases[j] @ small_frame.H[j]
        coeff *= np.linalg.det(w) ** (-1 if j % 2 else 1)
    return CohomologyElement(coeff, frame)


def _eig_input(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim == 2:
        if a.shape[0] != a.shape[1]:
            raise ValidationError("matrix must be square")
        if a.shape[0] == 0:
            return np.zeros(0, dtype=complex)
        return np.linalg.eigvals(a)
    return a.ravel()


def _split_zero(eigs: np.ndarray):
    if eigs.size == 0:
        return eigs, 0
    scale = float(np.abs(eigs).max())
    thr = RANK_ATOL if scale == 0 else RANK_RTOL * scale
    nonzero = eigs[np.abs(eigs) > thr]
    return nonzero, int(eigs.size - nonzero.size)


def _arg_in_window(z: complex, theta: float) -> float:
    """Argument of z in the window (theta, theta + 2*pi]."""
    a = cmath.phase(z)
    while a <= theta:
        a += 2 * math.pi
    while a > theta + 2 * math.pi:
        a -= 2 * math.pi
    return a


def log_det_cut(m, theta: float) -> complex:
    """Log-determinant over the nonzero spectrum with the branch cut along
    the ray of angle theta: sum of log|z| + i arg(z), arg in (theta, theta+2pi).

    Accepts a square matrix or a vector of eigenvalues.  Raises
    SpectralBoundaryError when an eigenvalue sits on the cut.
    """
    eigs, _ = _split_zero(_eig_input(m))
    total = 0.0 + 0.0j
    for z in eigs:
        a = _arg_in_window(z, theta)
        if min(a - theta, theta + 2 * math.pi - a) < _RAY_TOL:
            raise SpectralBoundaryError(
                f"eigenvalue {z} lies on the branch cut at angle {theta}")
        total += math.log(abs(z)) + 1j * a
    return complex(total)


@dataclass(frozen=True)
class EtaData:
    eta: float
    asymmetry: int  # count(Re > 0) - count(Re < 0)
    m_plus: int
    m_minus: int
    m_zero: int


def eta_finite(m) -> EtaData:
    """Finite-dimensional eta invariant of a spectrum:
    (asymmetry + m_plus - m_minus + m_zero) / 2, where m_plus / m_minus count
    eigenvalues on the positive / negative imaginary axis."""
    eigs = _eig_input(m)
    nonzero, m_zero = _split_zero(eigs)
    pos = neg = m_plus = m_minus = 0
    for z in nonzero:
        if abs(z.real) <= _RAY_TOL * abs(z):
            if z.imag > 0:
                m_plus += 1
            else:
                m_minus += 1
        elif z.real > 0:
            pos += 1
        else:
            neg += 1
    asym = pos - neg
    return EtaData((asym + m_plus - m_minus + m_zero) / 2.0,
                   asym, m_plus, m_minus, m_zero)


def det_eta_check(m, theta: float) -> float:
    """Residual of the branch arithmetic identity

        LDet_theta(D) = (1/2) LDet_{2 theta}(D^2)
                        - i pi (eta(D) - (N_nonzero + m_zero) / 2),

    where N_nonzero counts nonzero eigenvalues of D^2 (the value of the
    finite-dimensional zeta function of D^2 at zero).
    """
    eigs = _eig_input(m)
    lhs = log_det_cut(eigs, theta)
    nonzero, m_zero = _split_zero(eigs)
    half = 0.5 * log_det_cut(nonzero ** 2, 2 * theta)
    eta = eta_finite(eigs)
    rhs = half - 1j * math.pi * (eta.eta - (nonzero.size + m_zero) / 2.0)
    return abs(lhs - rhs)


def pick_agmon_angle(m, lo: float = -math.pi / 2, hi: float = 0.0) -> float:
    """Deterministic Agmon angle in (lo, hi) for the det/eta identities.

    Both sectors swept by the identity, (lo, theta] and (lo + pi, theta + pi],
    must stay free of the spectrum, which pins theta below the smallest
    obstruction; the midpoint of the remaining arc is returned.
    """
    eigs, _ = _split_zero(_eig_input(m))
    bound = hi
    for z in eigs:
        a = cmath.phase(z)  # (-pi, pi]
        for cand in (a, a - math.pi, a + math.pi):
            if lo < cand < bound:
                bound = cand
    if bound - lo < 1e-8:
        raise SpectralBoundaryError(
            "no admissible branch angle in the requested arc")
    return (lo + bound) / 2.0


def graded_det_via_xi_eta(c: CochainComplex, g: ChiralityOp, lam: float,
                          theta: float | None = None) -> complex:
    """Graded determinant of B_even over the part of the spectrum above lam,
    assembled from half log-determinants of (Gamma d)^2 on the + subspaces
    and the eta invariant of B_even:

        exp(xi - i pi eta + i pi (N+ - N-) / 2),

    xi = (1/2) sum_{j<d} (-1)^j LDet_{2 theta}((Gamma d)^2 | C^j_+), and
    N+/- the even-degree dimensions of the +/- subspaces.  The correction
    term carries the finite-dimensional zeta(0) values (eigenvalue counts).
    """
    split = spectral_split(c, g, lam)
    cl, gl = split.large.complex, split.large.chirality
    d = cl.d
    plus, minus = plus_minus_split(cl, gl)
    b_even, degs, _ = _parity_matrix(cl, gl, 0)
    if theta is None:
        theta = pick_agmon_angle(b_even)
    xi = 0.0 + 0.0j
    for j in range(d):
        p = plus[j]
        if p.shape[1] == 0:
            continue
        gd_sq = _gd_block(cl, gl, d - j - 1) @ _gd_block(cl, gl, j)
        rest = _restrict(p, gd_sq @ p, f"(Gamma d)^2 on C^{j}_+")
        xi += 0.5 * (-1) ** j * log_det_cut(rest, 2 * theta)
    eta = eta_finite(b_even).eta
    n_plus = sum(plus[j].shape[1] for j in degs)
    n_minus = sum(minus[j].shape[1] for j in degs)
    return complex(cmath.exp(xi - 1j * math.pi * eta
                             + 1j * math.pi * (n_plus - n_minus) / 2.0))
