"""Complex block-matrix ambients, Hilbert-Schmidt orthonormal spans, and
multiplicative closure of matrix algebras and ideals.

Everything here is dense and desk-scale (N <= 64 or so).  Matrices are plain
complex ndarrays; an :class:`Ambient` records the block-diagonal pattern they
must respect.  Subspaces are :class:`AlgebraSpan` objects holding an
orthonormal basis under the Hilbert-Schmidt inner product
``<x, y> = trace(x* y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Two-tier tolerances: rank decisions use the tighter cutoff so that
# accumulated products cannot flip them; membership uses the looser one.
RANK_TOL = 1e-9
MEMBER_TOL = 1e-8

# optional global cap on generation sweeps (CLI --max-words); None means the
# dimension-based bound N^2 + 1
MAX_WORD_ROUNDS = None


class AmbientMismatch(ValueError):
    """Matrix does not fit the ambient (wrong shape or off-block entries)."""


class NotInSpan(ValueError):
    """Element has residual above tolerance against a span."""


@dataclass(frozen=True)
class Ambient:
    """Block-diagonal matrix ambient: a direct sum of full matrix algebras.

    Elements are N x N complex matrices (N = sum of block dims) that vanish
    outside the diagonal blocks.
    """

    block_dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.block_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError("block_dims must be non-empty positive integers")
        object.__setattr__(self, "block_dims", dims)

    @property
    def dim(self):
        return sum(self.block_dims)

    def mask(self):
        """Boolean N x N mask of the allowed block pattern."""
        N = self.dim
        m = np.zeros((N, N), dtype=bool)
        off = 0
        for d in self.block_dims:
            m[off:off + d, off:off + d] = True
            off += d
        return m

    def identity(self):
        return np.eye(self.dim, dtype=complex)

    def zero(self):
        return np.zeros((self.dim, self.dim), dtype=complex)

    def off_block_norm(self, mat):
        return float(np.linalg.norm(np.where(self.mask(), 0.0, mat)))

    def check(self, mat, tol=MEMBER_TOL):
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (self.dim, self.dim):
            raise AmbientMismatch(
                f"expected shape {(self.dim, self.dim)}, got {mat.shape}")
        r = self.off_block_norm(mat)
        if r > tol:
            raise AmbientMismatch(f"off-block residual {r:.3e} above {tol:.1e}")
        return mat

    def element(self, entries, tol=MEMBER_TOL):
        """Validate and return an element of this ambient."""
        return self.check(entries, tol=tol)

    def matrix_unit(self, r, c):
        m = self.zero()
        m[r, c] = 1.0
        return self.check(m)

    def embed_block(self, k, mat):
        """Place a small matrix into the k-th diagonal block."""
        mat = np.asarray(mat, dtype=complex)
        d = self.block_dims[k]
        if mat.shape != (d, d):
            raise AmbientMismatch(f"block {k} has size {d}, got {mat.shape}")
        off = sum(self.block_dims[:k])
        out = self.zero()
        out[off:off + d, off:off + d] = mat
        return out

    def block_of(self, mat, k):
        off = sum(self.block_dims[:k])
        d = self.block_dims[k]
        return np.asarray(mat, dtype=complex)[off:off + d, off:off + d]

    def direct_sum(self, other):
        return Ambient(self.block_dims + other.block_dims)


def direct_sum(*mats):
    """Block-diagonal direct sum of square matrices."""
    mats = [np.asarray(m, dtype=complex) for m in mats]
    N = sum(m.shape[0] for m in mats)
    out = np.zeros((N, N), dtype=complex)
    off = 0
    for m in mats:
        d = m.shape[0]
        out[off:off + d, off:off + d] = m
        off += d
    return out


def hs_inner(x, y):
    """Hilbert-Schmidt inner product trace(x* y)."""
    return complex(np.vdot(x, y))


def operator_norm(x):
    """Largest singular value."""
    x = np.asarray(x, dtype=complex)
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, 2))


def hs_orthonormalize(mats, rank_tol=RANK_TOL):
    """Orthonormal basis (as a (d, N, N) stack) of the span of `mats`.

    Rank is decided by singular values against `rank_tol` (relative to the
    largest singular value, floored at 1).  Deterministic for a fixed input
    order.
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    if not mats:
        return np.zeros((0, 0, 0), dtype=complex)
    shape = mats[0].shape
    flat = np.array([m.ravel() for m in mats])
    gram = flat @ flat.conj().T
    if np.abs(gram - np.eye(len(mats))).max() < rank_tol:
        # already orthonormal; keep the given order (stable golden outputs)
        return np.array(mats)
    _, s, vh = np.linalg.svd(flat, full_matrices=False)
    cutoff = rank_tol * max(1.0, float(s[0]) if len(s) else 1.0)
    keep = s > cutoff
    return vh[keep].reshape(-1, *shape)


@dataclass
class AlgebraSpan:
    """A subspace of an ambient with an HS-orthonormal basis.

    The closure flags are promises checked by :meth:`verify`, not enforced on
    construction; the generation routines below produce spans whose flags
    hold by construction.
    """

    ambient: Ambient
    basis: np.ndarray  # (dim, N, N), HS-orthonormal
    self_adjoint: bool = False
    unital: bool = False
    ideal_in: "AlgebraSpan | None" = None
    _flat: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        N = self.ambient.dim
        b = b.reshape(-1, N, N)
        self.basis = b
        self._flat = b.reshape(len(b), N * N)

    @property
    def dim(self):
        return len(self.basis)

    def project(self, x):
        x = np.asarray(x, dtype=complex)
        if self.dim == 0:
            return np.zeros_like(x)
        c = self._flat.conj() @ x.ravel()
        return (c @ self._flat).reshape(x.shape)

    def residual(self, x):
        return float(np.linalg.norm(np.asarray(x, dtype=complex) - self.project(x)))

    def contains(self, x, tol=MEMBER_TOL):
        return self.residual(x) <= tol

    def coeffs(self, x, tol=MEMBER_TOL):
        """Coefficients of x against the basis; raises NotInSpan if the
        residual exceeds tol."""
        x = np.asarray(x, dtype=complex)
        c = self._flat.conj() @ x.ravel() if self.dim else np.zeros(0, complex)
        r = float(np.linalg.norm(x.ravel() - c @ self._flat)) if self.dim \
            else float(np.linalg.norm(x))
        if r > tol:
            raise NotInSpan(f"residual {r:.3e} above {tol:.1e}")
        return c

    def from_coeffs(self, c):
        return (np.asarray(c, dtype=complex) @ self._flat).reshape(
            self.ambient.dim, self.ambient.dim)

    def contains_span(self, other, tol=MEMBER_TOL):
        return all(self.contains(b, tol) for b in other.basis)

    def identity_residual(self):
        return self.residual(self.ambient.identity())

    def verify(self, tol=MEMBER_TOL):
        """Return a list of violated invariants (empty when all hold)."""
        bad = []
        g = self._flat @ self._flat.conj().T if self.dim else np.zeros((0, 0))
        if self.dim and np.abs(g - np.eye(self.dim)).max() > tol:
            bad.append("basis not HS-orthonormal")
        for b in self.basis:
            if self.ambient.off_block_norm(b) > tol:
                bad.append("basis leaves ambient block pattern")
                break
        for a in self.basis:
            for b in self.basis:
                if self.residual(a @ b) > tol:
                    bad.append("not closed under multiplication")
                    break
            else:
                continue
            break
        if self.self_adjoint:
            if any(self.residual(b.conj().T) > tol for b in self.basis):
                bad.append("not closed under adjoint")
        if self.unital and self.identity_residual() > tol:
            bad.append("does not contain the ambient identity")
        if self.ideal_in is not None:
            C = self.ideal_in
            for c in C.basis:
                for b in self.basis:
                    if self.residual(c @ b) > tol or self.residual(b @ c) > tol:
                        bad.append("not an ideal in the enclosing algebra")
                        break
                else:
                    continue
                break
        return bad


def orthonormal_span(ambient, mats, rank_tol=RANK_TOL):
    """Orthonormalized subspace span of the given ambient elements."""
    mats = [ambient.check(m) for m in mats]
    return AlgebraSpan(ambient, hs_orthonormalize(mats, rank_tol)
                       if mats else np.zeros((0, ambient.dim, ambient.dim), complex))


def _closure_rounds(ambient, seed_mats, extend, max_rounds=None):
    """Iterate span <- orthonormalize(span + extend(span)) to a fixed dim."""
    N = ambient.dim
    if max_rounds is None:
        max_rounds = MAX_WORD_ROUNDS if MAX_WORD_ROUNDS is not None \
            else N * N + 1
    basis = hs_orthonormalize(seed_mats) if seed_mats else \
        np.zeros((0, N, N), complex)
    for _ in range(max_rounds):
        new = extend(basis)
        if not new:
            break
        grown = hs_orthonormalize(list(basis) + new)
        if len(grown) == len(basis):
            basis = grown
            break
        basis = grown
    return basis


def generate_algebra(ambient, gens, self_adjoint=False, unital=True):
    """Smallest multiplicatively closed subspace containing the generators
    (plus the identity when unital, adjoints when self_adjoint).

    One multiplication sweep per round with re-orthonormalization; terminates
    because the ambient is finite-dimensional.
    """
    gens = [ambient.check(g) for g in gens]
    seed = list(gens)
    if unital:
        seed.append(ambient.identity())
    if self_adjoint:
        seed += [g.conj().T for g in gens]

    def extend(basis):
        out = [a @ b for a in basis for b in basis]
        if self_adjoint:
            out += [b.conj().T for b in basis]
        return out

    basis = _closure_rounds(ambient, seed, extend)
    return AlgebraSpan(ambient, basis, self_adjoint=self_adjoint, unital=unital)


def generate_ideal(C, gens, tol=MEMBER_TOL):
    """Smallest subspace of C containing `gens` that is a two-sided ideal,
    closed under adjoint.  Generators must already lie in C."""
    gens = [np.asarray(g, dtype=complex) for g in gens]
    for g in gens:
        if not C.contains(g, tol):
            raise NotInSpan("ideal generator not in the enclosing algebra")
    seed = [g for g in gens if np.linalg.norm(g) > tol]
    seed += [g.conj().T for g in seed]

    def extend(basis):
        out = []
        for b in basis:
            out.append(b.conj().T)
            for c in C.basis:
                out.append(c @ b)
                out.append(b @ c)
        return out

    basis = _closure_rounds(C.ambient, seed, extend)
    return AlgebraSpan(C.ambient, basis, self_adjoint=True, ideal_in=C)


def support_isometry(mats, N, tol=RANK_TOL):
    """Isometry V (N x m) onto the joint support of the given matrices, or
    None when the support is full.  Coordinate selection when the support
    projection is diagonal (keeps matrix units exact)."""
    T = np.zeros((N, N), dtype=complex)
    for b in mats:
        T += b @ b.conj().T + b.conj().T @ b
    offdiag = T - np.diag(np.diag(T))
    scale = max(1.0, float(np.abs(T).max()) if T.size else 1.0)
    if offdiag.size == 0 or np.abs(offdiag).max() < tol * scale:
        keep = np.where(np.real(np.diag(T)) > tol * scale)[0]
        if len(keep) == N:
            return None
        V = np.zeros((N, len(keep)), dtype=complex)
        V[keep, np.arange(len(keep))] = 1.0
        return V
    w, U = np.linalg.eigh((T + T.conj().T) / 2)
    keep = w > tol * max(1.0, float(w[-1]))
    if keep.all():
        return None
    return U[:, keep]


def compress_span(span, tol=RANK_TOL):
    """Compress a span onto its joint support.

    Returns (compressed span, isometry V or None).  When V is a coordinate
    selection the ambient block pattern is carried over (empty blocks
    dropped); otherwise the compressed ambient is a single full block.
    """
    amb = span.ambient
    N = amb.dim
    V = support_isometry(list(span.basis), N, tol)
    if V is None:
        return span, None
    m = V.shape[1]
    is_selection = np.all((V == 0) | (V == 1)) and np.all(V.sum(axis=0) == 1)
    if is_selection:
        keep = np.where(V.sum(axis=1) > 0.5)[0]
        dims, off = [], 0
        for d in amb.block_dims:
            c = int(np.sum((keep >= off) & (keep < off + d)))
            if c:
                dims.append(c)
            off += d
        new_amb = Ambient(tuple(dims))
    else:
        new_amb = Ambient((m,))
    basis = np.array([V.conj().T @ b @ V for b in span.basis])
    out = AlgebraSpan(new_amb, basis, self_adjoint=span.self_adjoint,
                      unital=False)
    if span.self_adjoint and out.residual(new_amb.identity()) <= MEMBER_TOL:
        out.unital = True
    return out, V


def intersect_spans(V, W):
    """Orthonormal basis stack of the intersection of two spans."""
    if V.dim == 0 or W.dim == 0:
        return np.zeros((0, V.ambient.dim, V.ambient.dim), complex)
    # rows: components of V's basis orthogonal to W
    M = V._flat - (V._flat @ W._flat.conj().T) @ W._flat
    u, s, _ = np.linalg.svd(M, full_matrices=True)
    cutoff = RANK_TOL * max(1.0, float(s[0]) if len(s) else 1.0)
    rank = int(np.sum(s > cutoff))
    null = u[:, rank:]  # combinations c with sum_i c_i (1 - P_W) v_i = 0
    mats = [(null[:, k].conj() @ V._flat).reshape(V.ambient.dim, V.ambient.dim)
            for k in range(null.shape[1])]
    return hs_orthonormalize(mats)


def diagonal(A):
    """The diagonal A `intersect` A* of an operator algebra span, as a
    self-adjoint span (the largest C*-subalgebra of A)."""
    adj = AlgebraSpan(A.ambient, np.conj(np.transpose(A.basis, (0, 2, 1))))
    basis = intersect_spans(A, adj)
    return AlgebraSpan(A.ambient, basis, self_adjoint=True, unital=A.unital)
