"""Refined torsion of a cochain complex with a chirality operator.

A chirality operator on a complex of odd top degree d is a degreewise map
Gamma_j : C^j -> C^{d-j} squaring to the identity.  It singles out an element
c_Gamma of the determinant line of the complex; its image under the canonical
map phi is the refined torsion, an element of the determinant line of
cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import (CochainComplex, CohomologyElement, CohomologyFrame,
                        alpha_cohomology, cohomology_frame, dual_complex, phi)
from .errors import ValidationError
from .gradedlinalg import DetElement

__all__ = [
    "ChiralityOp",
    "validate_chirality",
    "sign_R",
    "c_gamma",
    "refined_torsion",
    "torsion_norm",
    "supertrace",
    "variation_check",
    "dual_chirality",
    "dual_torsion_check",
]


@dataclass(frozen=True)
class ChiralityOp:
    """Degreewise blocks gamma[j] of Gamma_j : C^j -> C^{d-j}."""

    gamma: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "gamma", tuple(np.asarray(g, dtype=complex) for g in self.gamma))

    @property
    def d(self) -> int:
        return len(self.gamma) - 1


def validate_chirality(c: CochainComplex, g: ChiralityOp,
                       tol: float = 1e-10) -> None:
    """Check shapes, odd top degree and Gamma_{d-j} Gamma_j = identity."""
    d = c.d
    if d % 2 == 0:
        raise ValidationError("chirality requires odd top degree")
    if g.d != d:
        raise ValidationError("chirality degree does not match the complex")
    n = c.dims.dims
    for j in range(d + 1):
        if g.gamma[j].shape != (n[d - j], n[j]):
            raise ValidationError(
                f"Gamma_{j} has shape {g.gamma[j].shape}, "
                f"expected {(n[d - j], n[j])}")
    for j in range(d + 1):
        prod = g.gamma[d - j] @ g.gamma[j]
        res = float(np.abs(prod - np.eye(n[j])).max()) if n[j] else 0.0
        if res > tol:
            raise ValidationError(
                f"Gamma^2 - 1 residual {res:.3e} in degree {j} exceeds {tol:.3e}")


def sign_R(c: CochainComplex) -> int:
    """Parity of (1/2) sum_{j<r} dim C^j (dim C^j + (-1)^{r+j}), r = (d+1)/2."""
    r = (c.d + 1) // 2
    total = 0
    for j in range(r):
        k = c.dims.dims[j]
        total += (k * (k + (-1) ** (r + j))) // 2
    return total % 2


def c_gamma(c: CochainComplex, g: ChiralityOp) -> DetElement:
    """The distinguished element of Det(C) attached to the chirality.

    Filling the upper slots with standard wedges and the lower slots with
    their Gamma images yields, against standard wedges throughout, the
    coefficient (-1)^R prod_{j<r} det(Gamma_j)^{(-1)^{j+1}}.
    """
    validate_chirality(c, g)
    r = (c.d + 1) // 2
    coeff = complex(-1 if sign_R(c) else 1)
    for j in range(r):
        det = np.linalg.det(g.gamma[j]) if c.dims.dims[j] else 1.0
        coeff *= det ** (1 if j % 2 else -1)
    return DetElement(coeff, c.dims)


def refined_torsion(c: CochainComplex, g: ChiralityOp,
                    frame: CohomologyFrame | None = None) -> CohomologyElement:
    """Refined torsion rho = phi(c_Gamma) in the cohomology determinant line."""
    if frame is None:
        frame = cohomology_frame(c)
    return phi(c_gamma(c, g), frame)


def torsion_norm(c: CochainComplex, g: ChiralityOp) -> float:
    """Norm of the refined torsion in the metric for which phi is an isometry.

    Standard wedges have norm one for the standard inner products, so this is
    the modulus of the c_Gamma coefficient.  For a unitary self-adjoint
    chirality it equals one.
    """
    return abs(c_gamma(c, g).coeff)


def supertrace(blocks) -> complex:
    """Alternating trace sum_j (-1)^j tr(blocks[j]) of a degreewise operator."""
    total = 0.0 + 0.0j
    for j, b in enumerate(blocks):
        b = np.asarray(b)
        t = np.trace(b) if b.size else 0.0
        total += (-1) ** j * t
    return complex(total)


def _gamma_dot_gamma_blocks(g: ChiralityOp, g_dot: ChiralityOp):
    """Blocks of (dGamma/dt) Gamma on each C^j."""
    d = g.d
    return [g_dot.gamma[d - j] @ g.gamma[j] for j in range(d + 1)]


def variation_check(c: CochainComplex, gamma_of_t, t0: float,
                    h: float = 1e-4) -> float:
    """Residual of the variation identity for an acyclic family Gamma(t):

        d/dt log rho(t) = (1/2) Tr_s(Gamma'(t) Gamma(t)).

    Both sides are formed to second order: log rho by a central difference of
    the torsion coefficients (acyclic, so rho is a scalar), Gamma' by a
    central difference of the blocks.
    """
    frame = cohomology_frame(c)
    if not frame.acyclic:
        raise ValidationError("variation identity requires an acyclic complex")

    def rho(t):
        return refined_torsion(c, gamma_of_t(t), frame).coeff

    lhs = (np.log(rho(t0 + h)) - np.log(rho(t0 - h))) / (2 * h)
    gp, gm = gamma_of_t(t0 + h), gamma_of_t(t0 - h)
    g0 = gamma_of_t(t0)
    g_dot = ChiralityOp(tuple((a - b) / (2 * h)
                              for a, b in zip(gp.gamma, gm.gamma)))
    rhs = 0.5 * supertrace(_gamma_dot_gamma_blocks(g0, g_dot))
    return abs(lhs - rhs)


def dual_chirality(g: ChiralityOp) -> ChiralityOp:
    """Chirality on the dual complex: degree-j block is the conjugate
    transpose of Gamma_j."""
    d = g.d
    return ChiralityOp(tuple(g.gamma[j].conj().T for j in range(d + 1)))


def dual_torsion_check(c: CochainComplex, g: ChiralityOp) -> float:
    """Relative residual of the duality identity

        rho(dual complex, dual chirality) = alpha(rho(C, Gamma)),

    with alpha the anti-linear duality on cohomology determinant lines.
    """
    frame = cohomology_frame(c)
    chat = dual_complex(c)
    frame_hat = cohomology_frame(chat)
    lhs = refined_torsion(chat, dual_chirality(g), frame_hat).coeff
    rho = refined_torsion(c, g, frame)
    rhs = alpha_cohomology(rho, frame_hat).coeff
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale
