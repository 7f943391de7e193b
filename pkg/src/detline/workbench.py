"""Test-instance generators and JSON serialization of chiral complexes.

Documents are plain JSON: dimensions, row-major differential matrices and
(optionally) chirality matrices, with every complex number written as a
two-element array [re, im].  Serialization is canonical - fixed key order,
no whitespace variance, floats at 17 significant digits - so that
serialize(deserialize(serialize(x))) is byte identical.
"""

from __future__ import annotations

import json

import numpy as np

from .complexes import CochainComplex, cohomology_frame
from .errors import ValidationError
from .gradedlinalg import GradedDims
from .torsion import ChiralityOp, validate_chirality

__all__ = [
    "gen_elementary",
    "gen_harmonic",
    "gen_random",
    "chiral_direct_sum",
    "random_profile",
    "serialize_document",
    "deserialize_document",
]

# ---------------------------------------------------------------------------
# generators


def _empty(d: int):
    dims = [0] * (d + 1)
    return dims


def _zeros(dims):
    d = len(dims) - 1
    return [np.zeros((dims[j + 1], dims[j]), dtype=complex) for j in range(d)]


def gen_elementary(d: int, j: int, z: complex):
    """Elementary acyclic block: z : C^j -> C^{j+1} together with its mirror
    in degrees (d-j-1, d-j), the two paired by identity chirality blocks.
    When the mirror coincides with the block (j = (d-1)/2) a single copy is
    produced.  Requires 0 <= j < (d+1)/2 and z != 0."""
    if d % 2 == 0 or d < 1:
        raise ValidationError("top degree must be odd")
    r = (d + 1) // 2
    if not 0 <= j < r:
        raise ValidationError(f"block degree {j} out of range [0, {r})")
    if z == 0:
        raise ValidationError("acyclic block needs z != 0")
    dims = _empty(d)
    dims[j] += 1
    dims[j + 1] += 1
    mirrored = (d - j - 1) != j
    if mirrored:
        dims[d - j - 1] += 1
        dims[d - j] += 1
    partial = _zeros(dims)
    partial[j][0, 0] = z
    if mirrored:
        partial[d - j - 1][-1, -1] = z
    gamma = [np.zeros((dims[d - q], dims[q]), dtype=complex)
             for q in range(d + 1)]
    # identity pairing: degree q standard vector <-> degree d-q standard vector
    for q in (j, j + 1, d - j - 1, d - j):
        for col in range(dims[q]):
            gamma[q][dims[d - q] - 1 - col if dims[d - q] > 1 else 0, col] = 1.0
    c = CochainComplex(GradedDims(tuple(dims)), tuple(partial))
    g = ChiralityOp(tuple(gamma))
    validate_chirality(c, g)
    c.validate()
    return c, g


def gen_harmonic(d: int, k: int):
    """One-dimensional harmonic summands in degrees k and d-k (one copy when
    k = d-k is impossible for odd d), zero differential, identity pairing."""
    if d % 2 == 0:
        raise ValidationError("top degree must be odd")
    if not 0 <= k <= d:
        raise ValidationError("degree out of range")
    dims = _empty(d)
    dims[k] += 1
    if d - k != k:
        dims[d - k] += 1
    gamma = [np.zeros((dims[d - q], dims[q]), dtype=complex)
             for q in range(d + 1)]
    for q in (k, d - k):
        for col in range(dims[q]):
            gamma[q][col, col] = 1.0
    return (CochainComplex(GradedDims(tuple(dims)), tuple(_zeros(dims))),
            ChiralityOp(tuple(gamma)))


def chiral_direct_sum(parts):
    """Direct sum of (complex, chirality) pairs with matching top degree."""
    cs = [p[0] for p in parts]
    gs = [p[1] for p in parts]
    d = cs[0].d
    dims = [sum(c.dims.dims[q] for c in cs) for q in range(d + 1)]
    partial = _zeros(dims)
    gamma = [np.zeros((dims[d - q], dims[q]), dtype=complex)
             for q in range(d + 1)]
    row = [[0] * (d + 1) for _ in cs]
    pos = [0] * (d + 1)
    for i, c in enumerate(cs):
        for q in range(d + 1):
            row[i][q] = pos[q]
            pos[q] += c.dims.dims[q]
    for i, (c, g) in enumerate(zip(cs, gs)):
        for q in range(d):
            nq, nq1 = c.dims.dims[q], c.dims.dims[q + 1]
            partial[q][row[i][q + 1]:row[i][q + 1] + nq1,
                       row[i][q]:row[i][q] + nq] = c.partial[q]
        for q in range(d + 1):
            nq, nt = c.dims.dims[q], c.dims.dims[d - q]
            gamma[q][row[i][d - q]:row[i][d - q] + nt,
                     row[i][q]:row[i][q] + nq] = g.gamma[q]
    return (CochainComplex(GradedDims(tuple(dims)), tuple(partial)),
            ChiralityOp(tuple(gamma)))


def _well_conditioned(rng: np.random.Generator, n: int,
                      unitary: bool) -> np.ndarray:
    """Random invertible n x n matrix with condition number below ~3."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q1, _ = np.linalg.qr(a)
    if unitary:
        return q1
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q2, _ = np.linalg.qr(b)
    sing = rng.uniform(0.7, 1.5, size=n)
    return q1 @ np.diag(sing) @ q2


def random_profile(rng: np.random.Generator, d: int, acyclic: bool = True,
                   max_blocks: int = 3) -> dict:
    """Draw a generation profile: elementary blocks (degree, z) and harmonic
    summand degrees."""
    r = (d + 1) // 2
    nblocks = int(rng.integers(1, max_blocks + 1))
    blocks = []
    for _ in range(nblocks):
        j = int(rng.integers(0, r))
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        while abs(z) < 0.2:
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        blocks.append((j, z))
    harmonic = []
    if not acyclic:
        for _ in range(int(rng.integers(1, 3))):
            harmonic.append(int(rng.integers(0, d + 1)))
    return {"blocks": blocks, "harmonic": harmonic}


def gen_random(seed: int, d: int, profile: dict | None = None,
               unitary: bool = False):
    """Random chiral complex: a direct sum of elementary blocks and harmonic
    summands per profile, conjugated degreewise by random well-conditioned
    matrices (unitary ones when ``unitary`` is set, which keeps the chirality
    self-adjoint).  The generator is numpy's default PCG64 stream seeded with
    ``seed``; identical seeds give bit-identical output."""
    rng = np.random.default_rng(seed)
    if profile is None:
        profile = random_profile(rng, d)
    parts = [gen_elementary(d, j, z) for j, z in profile.get("blocks", [])]
    parts += [gen_harmonic(d, k) for k in profile.get("harmonic", [])]
    if not parts:
        raise ValidationError("profile generates an empty complex")
    c, g = chiral_direct_sum(parts)
    p = [_well_conditioned(rng, n, unitary) for n in c.dims.dims]
    pinv = [np.linalg.inv(m) if m.size else m for m in p]
    if unitary:
        pinv = [m.conj().T for m in p]
    partial = tuple(p[q + 1] @ c.partial[q] @ pinv[q] for q in range(d))
    gamma = tuple(p[d - q] @ g.gamma[q] @ pinv[q] for q in range(d + 1))
    return (CochainComplex(c.dims, partial), ChiralityOp(gamma))


# ---------------------------------------------------------------------------
# canonical JSON documents


def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValidationError("non-finite number in document")
    # adding 0.0 folds negative zero into plain zero for a canonical text
    return format(float(x) + 0.0, ".17g")


def _fmt_matrix(m: np.ndarray) -> str:
    rows = []
    for r in range(m.shape[0]):
        cells = ",".join(
            f"[{_fmt_float(m[r, c].real)},{_fmt_float(m[r, c].imag)}]"
            for c in range(m.shape[1]))
        rows.append(f"[{cells}]")
    return "[" + ",".join(rows) + "]"


def serialize_document(c: CochainComplex, g: ChiralityOp | None = None,
                       metadata: dict | None = None) -> str:
    """Canonical JSON text of a complex and optional chirality."""
    parts = [f'"d":{c.d}',
             f'"dims":[{",".join(str(n) for n in c.dims.dims)}]',
             '"differential":[' + ",".join(_fmt_matrix(m) for m in c.partial) + "]"]
    if g is not None:
        parts.append('"chirality":[' + ",".join(_fmt_matrix(m) for m in g.gamma) + "]")
    meta = metadata or {}
    meta_items = ",".join(
        json.dumps(str(k)) + ":" + json.dumps(str(meta[k]))
        for k in sorted(meta))
    parts.append('"metadata":{' + meta_items + "}")
    return "{" + ",".join(parts) + "}"


def _parse_matrix(raw, rows: int, cols: int, what: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != rows:
        raise ValidationError(f"{what}: expected {rows} rows")
    out = np.zeros((rows, cols), dtype=complex)
    for r, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != cols:
            raise ValidationError(f"{what}: row {r} must have {cols} entries")
        for cidx, cell in enumerate(row):
            if (not isinstance(cell, list) or len(cell) != 2
                    or not all(isinstance(v, (int, float)) for v in cell)):
                raise ValidationError(f"{what}: entries must be [re, im] pairs")
            out[r, cidx] = complex(cell[0], cell[1])
    return out


def deserialize_document(text: str):
    """Parse a document; returns (complex, chirality-or-None, metadata)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("document must be a JSON object")
    try:
        d = int(doc["d"])
        dims = [int(n) for n in doc["dims"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"missing or bad d/dims: {exc}") from exc
    if len(dims) != d + 1:
        raise ValidationError("dims length must be d+1")
    raw_diff = doc.get("differential")
    if not isinstance(raw_diff, list) or len(raw_diff) != d:
        raise ValidationError("differential must list d matrices")
    partial = tuple(
        _parse_matrix(raw_diff[j], dims[j + 1], dims[j], f"differential[{j}]")
        for j in range(d))
    c = CochainComplex(GradedDims(tuple(dims)), partial)
    c.validate()
    g = None
    if doc.get("chirality") is not None:
        raw_g = doc["chirality"]
        if not isinstance(raw_g, list) or len(raw_g) != d + 1:
            raise ValidationError("chirality must list d+1 matrices")
        g = ChiralityOp(tuple(
            _parse_matrix(raw_g[q], dims[d - q], dims[q], f"chirality[{q}]")
            for q in range(d + 1)))
        validate_chirality(c, g)
    metadata = doc.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise ValidationError("metadata must be an object")
    return c, g, metadata
