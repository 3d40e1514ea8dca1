"""Exact dense linear algebra over F_{p^m}, with elements encoded as integers.

An element sum c_i x^i is encoded as sum c_i p^i in [0, q).  Addition is a
table lookup; multiplication goes through discrete log/exp tables relative to
the field generator.  Intended for the moderate systems arising from tail
functionals (a few thousand rows); tables require q <= 4096.
"""
from __future__ import annotations

import numpy as np

from .field import Field, FieldElement

_TABLE_LIMIT = 4096
_CACHE = {}


class GF:
    """Table-backed arithmetic for vectorized row operations over F_q."""

    def __init__(self, field: Field):
        if field.q > _TABLE_LIMIT:
            raise ValueError("GF tables limited to q <= %d (got %d)" % (_TABLE_LIMIT, field.q))
        self.field = field
        self.p, self.m, self.q = field.p, field.m, field.q
        p, m, q = self.p, self.m, self.q
        # digit decomposition of all indices
        digits = np.zeros((q, m), dtype=np.int64)
        v = np.arange(q)
        for i in range(m):
            digits[:, i] = v % p
            v = v // p
        self._digits = digits
        pows = p ** np.arange(m)
        self.ADD = ((digits[:, None, :] + digits[None, :, :]) % p @ pows).astype(np.int32)
        self.NEG = ((-digits) % p @ pows).astype(np.int32)
        g = field.generator()
        exp = np.zeros(2 * (q - 1), dtype=np.int32)
        log = np.zeros(q, dtype=np.int64)
        x = field.one()
        for k in range(q - 1):
            idx = x.index()
            exp[k] = idx
            exp[k + q - 1] = idx
            log[idx] = k
            x = x * g
        self.EXP = exp
        self.LOG = log

    def encode_rows(self, rows: np.ndarray) -> np.ndarray:
        """(n, m) coefficient rows -> (n,) encoded indices."""
        pows = self.p ** np.arange(self.m)
        return (np.asarray(rows, dtype=np.int64) % self.p) @ pows

    def decode(self, idx: np.ndarray) -> np.ndarray:
        return self._digits[np.asarray(idx, dtype=np.int64)]

    def encode_elt(self, x: FieldElement) -> int:
        return x.index()

    def decode_elt(self, i: int) -> FieldElement:
        return self.field.from_index(int(i))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.EXP[self.LOG[a] + self.LOG[b]].astype(np.int64)
        return np.where((a == 0) | (b == 0), 0, out)

    def add(self, a, b):
        return self.ADD[np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)].astype(np.int64)

    def sub(self, a, b):
        return self.add(a, self.NEG[np.asarray(b, dtype=np.int64)].astype(np.int64))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverting zero")
        return self.EXP[(self.q - 1) - self.LOG[a]].astype(np.int64)

    # -- gaussian elimination ---------------------------------------------------
    def rref(self, mat: np.ndarray):
        """Reduced row echelon form; returns (R, pivot_columns)."""
        R = np.array(mat, dtype=np.int64)
        nr, nc = R.shape
        pivots = []
        r = 0
        for c in range(nc):
            if r >= nr:
                break
            col = R[r:, c]
            nz = np.flatnonzero(col)
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                R[[r, i]] = R[[i, r]]
            R[r] = self.mul(np.full(nc, self.inv(R[r, c])), R[r])
            rows = np.flatnonzero(R[:, c])
            rows = rows[rows != r]
            if rows.size:
                factors = R[rows, c]
                upd = self.mul(factors[:, None], R[r][None, :])
                R[rows] = self.sub(R[rows], upd)
            pivots.append(c)
            r += 1
        return R[:r], pivots

    def rank(self, mat) -> int:
        return self.rref(mat)[0].shape[0]

    def nullspace(self, mat: np.ndarray) -> np.ndarray:
        """Basis of the right kernel, rows = basis vectors."""
        mat = np.asarray(mat, dtype=np.int64)
        nc = mat.shape[1]
        R, pivots = self.rref(mat)
        free = [c for c in range(nc) if c not in pivots]
        basis = np.zeros((len(free), nc), dtype=np.int64)
        for k, fc in enumerate(free):
            basis[k, fc] = 1
            for r, pc in enumerate(pivots):
                basis[k, pc] = self.NEG[R[r, fc]]
        return basis

    def solve(self, A: np.ndarray, b: np.ndarray):
        """One solution x of A x = b, or None; also returns the kernel basis."""
        A = np.asarray(A, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
        aug = np.concatenate([A, b], axis=1)
        R, pivots = self.rref(aug)
        nc = A.shape[1]
        if nc in pivots:
            return None, self.nullspace(A)
        x = np.zeros(nc, dtype=np.int64)
        for r, pc in enumerate(pivots):
            x[pc] = R[r, nc]
        return x, self.nullspace(A)

    def row_space_contains(self, R_pivots, vec) -> bool:
        """Membership of vec in a row space given by (rref, pivots)."""
        R, pivots = R_pivots
        v = np.array(vec, dtype=np.int64)
        for r, pc in enumerate(pivots):
            if v[pc]:
                v = self.sub(v, self.mul(np.full(v.shape, v[pc]), R[r]))
        return not v.any()

    def span_equal(self, A, B) -> bool:
        A = np.asarray(A, dtype=np.int64).reshape(-1, A.shape[-1] if hasattr(A, "shape") else len(A[0]))
        B = np.asarray(B, dtype=np.int64).reshape(-1, B.shape[-1] if hasattr(B, "shape") else len(B[0]))
        if A.shape[1] != B.shape[1]:
            return False
        ra, pa = self.rref(A)
        rb, pb = self.rref(B)
        return ra.shape == rb.shape and pa == pb and bool(np.array_equal(ra, rb))


def gf(field: Field) -> GF:
    key = field.key
    if key not in _CACHE:
        _CACHE[key] = GF(field)
    return _CACHE[key]
