"""Dense row reduction over GF(q) on code arrays.

Matrices are 2-D int64 arrays of field codes (see :mod:`gradedpi.ff`).
Reduced row echelon form is canonical for a row space, so two routes that
generate the same subspace in different orders produce identical bases.
"""

from __future__ import annotations

import numpy as np

from .ff import FieldSpec


def rref(spec: FieldSpec, m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns; zero rows dropped."""
    r = np.array(m, dtype=np.int64, copy=True)
    if r.ndim != 2:
        raise ValueError("rref expects a 2-D array")
    nrows, ncols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        lead = int(r[row, col])
        if lead != 1:
            r[row] = spec.vmul(r[row], int(spec.inv_table[lead]))
        others = np.nonzero(r[:, col])[0]
        others = others[others != row]
        if others.size:
            factors = r[others, col]
            r[others] = spec.vsub(r[others], spec.vmul(factors[:, None], r[row][None, :]))
        pivots.append(col)
        row += 1
    return r[:row], pivots


def rank(spec: FieldSpec, m) -> int:
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    return len(rref(spec, m)[1])


class EchelonBasis:
    """Incrementally maintained RREF basis of a subspace of GF(q)^ncols."""

    def __init__(self, spec: FieldSpec, ncols: int):
        self.spec = spec
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vecs) -> np.ndarray:
        """Remainders of ``vecs`` after eliminating every pivot column."""
        v = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
        if not self.pivots or v.size == 0:
            return v.copy()
        coeffs = v[:, self.pivots]
        return self.spec.vsub(v, self.spec.matmul(coeffs, self.rows))

    def add(self, vecs, chunk: int = 512) -> int:
        """Add rows to the span; returns the rank increase."""
        v = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
        before = self.rank
        for start in range(0, v.shape[0], chunk):
            block = self.reduce(v[start:start + chunk])
            block = block[block.any(axis=1)]
            if block.shape[0] == 0:
                continue
            new_rows, new_piv = rref(self.spec, block)
            if not new_piv:
                continue
            old = self.rows
            if old.shape[0]:
                old = self.spec.vsub(old, self.spec.matmul(old[:, new_piv], new_rows))
            rows = np.vstack([old, new_rows])
            piv = self.pivots + new_piv
            order = np.argsort(piv, kind="stable")
            self.rows = rows[order]
            self.pivots = [piv[i] for i in order]
        return self.rank - before

    def contains(self, vec) -> bool:
        return not self.reduce(vec).any()

    def copy(self) -> EchelonBasis:
        out = EchelonBasis(self.spec, self.ncols)
        out.rows = self.rows.copy()
        out.pivots = list(self.pivots)
        return out


def solve_in_span(spec: FieldSpec, gens, target, fixed: EchelonBasis | None = None):
    """Find c with ``target - c @ gens`` in the span of ``fixed``.

    Returns the coefficient vector, or None if no solution exists.  The
    solution is the one with free coordinates set to zero.
    """
    gens = np.atleast_2d(np.asarray(gens, dtype=np.int64))
    target = np.asarray(target, dtype=np.int64).reshape(1, -1)
    ng = gens.shape[0]
    if fixed is not None:
        gens_r = fixed.reduce(gens) if ng else gens
        target_r = fixed.reduce(target)
    else:
        gens_r, target_r = gens, target
    # columns: ambient coordinates; augment gens with identity to track combos
    aug = np.hstack([gens_r, np.eye(ng, dtype=np.int64)]) if ng else np.zeros((0, target.shape[1]), np.int64)
    ncols = target.shape[1]
    if ng == 0:
        return np.zeros(0, dtype=np.int64) if not target_r.any() else None
    red, piv = rref(spec, aug)
    amb_piv = [(i, c) for i, c in enumerate(piv) if c < ncols]
    residual = target_r[0].copy()
    combo = np.zeros(ng, dtype=np.int64)
    for i, c in amb_piv:
        a = int(residual[c])
        if a:
            residual = spec.vsub(residual, spec.vmul(red[i, :ncols], a))
            combo = spec.vadd(combo, spec.vmul(red[i, ncols:], a))
    if residual.any():
        return None
    return combo
