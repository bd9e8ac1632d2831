"""Finite-dimensional C*-algebras as explicit block matrix-unit algebras.

An FdAlgebra is a direct sum of full matrix blocks M_{d_1} (+) ... (+) M_{d_K}
with its canonical basis of matrix units e^{(i)}_{kl}.  Elements are
coefficient vectors over that basis; the algebra also carries a faithful
concrete realization as block-diagonal N x N matrices (N = sum d_i) which
makes products, involution and tensor-square products cheap and exact.

Abstract presentations (structure constants + involution + unit + a
positive GNS functional) are brought to this canonical form by
wedderburn_realize.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    GramDegenerate,
    MismatchedParent,
    NotSemisimple,
    NotStarClosed,
    WkaError,
)
from .report import VerificationReport
from .tensorkit import (
    Tolerance,
    as_tol,
    dagger,
    max_abs,
    nullspace,
    orthonormal_columns,
    subspace_contains,
)

__all__ = [
    "FdAlgebra",
    "AlgElement",
    "Functional",
    "SubalgebraBasis",
    "StarAlgebraData",
    "WedderburnRealization",
    "make_algebra",
    "regular_trace",
    "block_trace",
    "commutant",
    "center",
    "minimal_central_projections",
    "wedderburn_realize",
    "check_conditional_expectation",
]


class FdAlgebra:
    """Block matrix-unit algebra with basis e^{(i)}_{kl}.

    Basis order: blocks in order, rows before columns within a block, so
    index(i, k, l) = offset_i + k * d_i + l with 0-based k, l.
    """

    def __init__(self, block_shape):
        shape = tuple(int(d) for d in block_shape)
        if not shape or any(d < 1 for d in shape):
            raise ValueError(f"invalid block shape {shape}")
        self.block_shape = shape
        self.nblocks = len(shape)
        self.dim = int(sum(d * d for d in shape))
        self.matrix_size = int(sum(shape))  # N of the concrete realization
        self.basis_offsets = np.cumsum([0] + [d * d for d in shape])[:-1]
        self.row_offsets = np.cumsum([0] + list(shape))[:-1]

        blocks, rows, cols, labels = [], [], [], []
        for i, d in enumerate(shape):
            for k in range(d):
                for l in range(d):
                    blocks.append(i)
                    rows.append(self.row_offsets[i] + k)
                    cols.append(self.row_offsets[i] + l)
                    labels.append(f"e{i + 1}[{k + 1},{l + 1}]")
        self.basis_block = np.array(blocks)
        self.basis_row = np.array(rows)
        self.basis_col = np.array(cols)
        self.labels = labels

        self._prod = self._build_prod()
        # involution permutes matrix units: (e^{(i)}_{kl})* = e^{(i)}_{lk}
        self.star_index = self._prod_star_index()
        self.star_matrix = np.zeros((self.dim, self.dim))
        self.star_matrix[self.star_index, np.arange(self.dim)] = 1.0
        self.unit = np.zeros(self.dim, dtype=complex)
        self.unit[self.basis_row == self.basis_col] = 1.0
        self._lten = None
        self._rten = None
        self._mult = None

    def _build_prod(self):
        prod = -np.ones((self.dim, self.dim), dtype=np.int64)
        for i, d in enumerate(self.block_shape):
            base = self.basis_offsets[i]
            ks = np.arange(d)
            for t in range(d):
                a = base + ks * d + t  # e_{k t}
                b = base + t * d + ks  # e_{t n}
                prod[np.ix_(a, b)] = base + ks[:, None] * d + ks[None, :]
        return prod

    def _prod_star_index(self):
        idx = np.empty(self.dim, dtype=np.int64)
        for i, d in enumerate(self.block_shape):
            base = self.basis_offsets[i]
            for k in range(d):
                for l in range(d):
                    idx[base + k * d + l] = base + l * d + k
        return idx

    # -- canonical structure data -------------------------------------

    @property
    def prod_table(self) -> np.ndarray:
        """prod_table[a, b] = basis index of b_a b_b, or -1 when zero."""
        return self._prod

    def mult_tensor(self) -> np.ndarray:
        """Dense structure constants mult[a, b, c] with b_a b_b = sum_c mult[a,b,c] b_c."""
        if self._mult is None:
            m = np.zeros((self.dim, self.dim, self.dim))
            a, b = np.nonzero(self._prod >= 0)
            m[a, b, self._prod[a, b]] = 1.0
            m.setflags(write=False)
            self._mult = m
        return self._mult

    def left_tensor(self) -> np.ndarray:
        """lten[a, m, c] = coefficient of b_m in b_a b_c."""
        if self._lten is None:
            t = np.zeros((self.dim, self.dim, self.dim))
            a, c = np.nonzero(self._prod >= 0)
            t[a, self._prod[a, c], c] = 1.0
            t.setflags(write=False)
            self._lten = t
        return self._lten

    def right_tensor(self) -> np.ndarray:
        """rten[a, m, c] = coefficient of b_m in b_c b_a."""
        if self._rten is None:
            t = np.zeros((self.dim, self.dim, self.dim))
            c, a = np.nonzero(self._prod >= 0)
            t[a, self._prod[c, a], c] = 1.0
            t.setflags(write=False)
            self._rten = t
        return self._rten

    # -- conversions ----------------------------------------------------

    def to_matrix(self, coeffs) -> np.ndarray:
        x = np.zeros((self.matrix_size, self.matrix_size), dtype=complex)
        x[self.basis_row, self.basis_col] = np.asarray(coeffs, dtype=complex)
        return x

    def from_matrix(self, mat) -> np.ndarray:
        return np.asarray(mat, dtype=complex)[self.basis_row, self.basis_col]

    def to_matrix2(self, coeff_matrix) -> np.ndarray:
        """Concrete N^2 x N^2 matrix of an element of M (x) M."""
        n = self.matrix_size
        x4 = np.zeros((n, n, n, n), dtype=complex)
        r, c = self.basis_row, self.basis_col
        x4[r[:, None], r[None, :], c[:, None], c[None, :]] = np.asarray(
            coeff_matrix, dtype=complex
        )
        return x4.reshape(n * n, n * n)

    def from_matrix2(self, mat2) -> np.ndarray:
        n = self.matrix_size
        x4 = np.asarray(mat2, dtype=complex).reshape(n, n, n, n)
        r, c = self.basis_row, self.basis_col
        return x4[r[:, None], r[None, :], c[:, None], c[None, :]]

    # -- operations -----------------------------------------------------

    def mul(self, x, y) -> np.ndarray:
        return self.from_matrix(self.to_matrix(x) @ self.to_matrix(y))

    def mul2(self, cx, cy) -> np.ndarray:
        """Product of two elements of M (x) M given as coefficient matrices."""
        return self.from_matrix2(self.to_matrix2(cx) @ self.to_matrix2(cy))

    def star(self, coeffs) -> np.ndarray:
        return np.conj(np.asarray(coeffs, dtype=complex))[self.star_index]

    def lmat(self, x) -> np.ndarray:
        """Matrix of left multiplication by x on coefficient vectors."""
        return np.tensordot(np.asarray(x, dtype=complex), self.left_tensor(), (0, 0))

    def rmat(self, x) -> np.ndarray:
        """Matrix of right multiplication by x on coefficient vectors."""
        return np.tensordot(np.asarray(x, dtype=complex), self.right_tensor(), (0, 0))

    # -- distinguished elements ------------------------------------------

    def basis_element(self, a: int) -> "AlgElement":
        c = np.zeros(self.dim, dtype=complex)
        c[a] = 1.0
        return AlgElement(self, c)

    def unit_element(self) -> "AlgElement":
        return AlgElement(self, self.unit.copy())

    def block_identity(self, i: int) -> np.ndarray:
        c = np.zeros(self.dim, dtype=complex)
        sel = (self.basis_block == i) & (self.basis_row == self.basis_col)
        c[sel] = 1.0
        return c

    def matrix_unit_index(self, block: int, k: int, l: int) -> int:
        return int(self.basis_offsets[block] + k * self.block_shape[block] + l)

    def __eq__(self, other):
        return isinstance(other, FdAlgebra) and self.block_shape == other.block_shape

    def __hash__(self):
        return hash(self.block_shape)

    def __repr__(self):
        return f"FdAlgebra{self.block_shape}"


def make_algebra(block_shape) -> FdAlgebra:
    """Canonical matrix-unit algebra with the given block sizes."""
    return FdAlgebra(block_shape)


@dataclass
class AlgElement:
    """Element of an FdAlgebra as a coefficient vector over matrix units."""

    parent: FdAlgebra
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.parent.dim,):
            raise ValueError("coefficient vector has wrong length")

    def _check(self, other):
        if self.parent != other.parent:
            raise MismatchedParent(
                f"{self.parent!r} vs {other.parent!r}"
            )

    def __add__(self, other):
        self._check(other)
        return AlgElement(self.parent, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return AlgElement(self.parent, self.coeffs - other.coeffs)

    def __neg__(self):
        return AlgElement(self.parent, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            self._check(other)
            return AlgElement(self.parent, self.parent.mul(self.coeffs, other.coeffs))
        return AlgElement(self.parent, self.coeffs * complex(other))

    def __rmul__(self, scalar):
        return AlgElement(self.parent, complex(scalar) * self.coeffs)

    def star(self) -> "AlgElement":
        return AlgElement(self.parent, self.parent.star(self.coeffs))

    def to_matrix(self) -> np.ndarray:
        return self.parent.to_matrix(self.coeffs)

    def norm_max(self) -> float:
        return max_abs(self.coeffs)

    def isclose(self, other, tol=None) -> bool:
        self._check(other)
        return max_abs(self.coeffs - other.coeffs) <= as_tol(tol).abs_tol


@dataclass
class Functional:
    """Linear functional on an FdAlgebra, stored as a covector."""

    parent: FdAlgebra
    vec: np.ndarray

    def __post_init__(self):
        self.vec = np.asarray(self.vec, dtype=complex)

    def __call__(self, x) -> complex:
        coeffs = x.coeffs if isinstance(x, AlgElement) else np.asarray(x, dtype=complex)
        return complex(self.vec @ coeffs)

    def gram(self) -> np.ndarray:
        """Gram[a, b] = phi(b_a* b_b); Hermitian PSD iff phi is positive."""
        alg = self.parent
        prod, sidx = alg.prod_table, alg.star_index
        g = np.zeros((alg.dim, alg.dim), dtype=complex)
        p = prod[sidx, :]  # p[a, b] = index of b_a* b_b
        mask = p >= 0
        g[mask] = self.vec[p[mask]]
        return g

    def is_faithful_positive(self, tol=None) -> bool:
        g = self.gram()
        if max_abs(g - dagger(g)) > as_tol(tol).abs_tol * 100:
            return False
        w = np.linalg.eigvalsh((g + dagger(g)) / 2)
        return bool(w[0] > as_tol(tol).rank_cutoff(g.shape, max(w[-1], 1.0)))


def regular_trace(alg: FdAlgebra) -> Functional:
    """theta(x) = Tr L_x on the algebra itself; theta(e^{(i)}_{kk}) = d_i."""
    counts = np.sum(alg.prod_table == np.arange(alg.dim)[None, :], axis=1)
    return Functional(alg, counts.astype(complex))


def block_trace(alg: FdAlgebra, weights=None) -> Functional:
    """Sum of block traces; weights (one per block) default to 1."""
    w = np.ones(alg.nblocks) if weights is None else np.asarray(weights, dtype=complex)
    vec = np.where(alg.basis_row == alg.basis_col, w[alg.basis_block], 0.0)
    return Functional(alg, vec.astype(complex))


class SubalgebraBasis:
    """Subspace of an FdAlgebra, stored as orthonormal coefficient columns."""

    def __init__(self, parent: FdAlgebra, vectors, tol=None, orthonormalize=True):
        self.parent = parent
        vs = np.asarray(vectors, dtype=complex)
        if vs.ndim == 1:
            vs = vs[:, None]
        self.basis = orthonormal_columns(vs, as_tol(tol)) if orthonormalize else vs

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ dagger(self.basis)

    def contains(self, vectors) -> float:
        return subspace_contains(self.basis, vectors)

    def closure_residual(self) -> float:
        """Residual of closedness under products, star and containing 1."""
        alg, b = self.parent, self.basis
        prods = [
            alg.mul(b[:, i], b[:, j])
            for i in range(b.shape[1])
            for j in range(b.shape[1])
        ]
        stars = [alg.star(b[:, i]) for i in range(b.shape[1])]
        vecs = np.stack(prods + stars + [alg.unit], axis=1)
        return self.contains(vecs)

    def element(self, i: int) -> AlgElement:
        return AlgElement(self.parent, self.basis[:, i])

    def structure_constants(self):
        """(mult, star, unit_coords) of the subalgebra in this basis.

        Requires the span to be a unital *-subalgebra; products are
        projected onto the span, so use closure_residual() first.
        """
        alg, b = self.parent, self.basis
        k = b.shape[1]
        bh = dagger(b)
        mult = np.zeros((k, k, k), dtype=complex)
        for i in range(k):
            for j in range(k):
                mult[i, j] = bh @ alg.mul(b[:, i], b[:, j])
        star = np.stack([bh @ alg.star(b[:, i]) for i in range(k)], axis=1)
        unit = bh @ alg.unit
        return mult, star, unit


def commutant(sub: SubalgebraBasis, tol=None) -> SubalgebraBasis:
    """Elements commuting with every generator of the given subspace."""
    alg = sub.parent
    rows = []
    for i in range(sub.dim):
        v = sub.basis[:, i]
        rows.append(alg.lmat(v) - alg.rmat(v))
    ns = nullspace(np.vstack(rows), as_tol(tol))
    return SubalgebraBasis(alg, ns, tol, orthonormalize=False)


def center(alg: FdAlgebra) -> SubalgebraBasis:
    """Center of the algebra: exact span of the block identities."""
    vecs = np.stack([alg.block_identity(i) for i in range(alg.nblocks)], axis=1)
    return SubalgebraBasis(alg, vecs)


def minimal_central_projections(alg: FdAlgebra) -> list:
    """Block identities P_i, exactly."""
    return [AlgElement(alg, alg.block_identity(i)) for i in range(alg.nblocks)]


# ---------------------------------------------------------------------------
# Wedderburn realization of abstract presentations
# ---------------------------------------------------------------------------


@dataclass
class StarAlgebraData:
    """Abstract *-algebra presentation over a finite basis.

    mult: structure constants, b_a b_b = sum_c mult[a, b, c] b_c
    star: matrix of the antilinear involution, (x*)_m = sum_j star[m, j] conj(x_j)
    unit: coefficient vector of 1
    gns:  covector of a positive functional phi with phi(x* x) > 0 for x != 0
    """

    mult: np.ndarray
    star: np.ndarray
    unit: np.ndarray
    gns: np.ndarray

    def __post_init__(self):
        self.mult = np.asarray(self.mult, dtype=complex)
        self.star = np.asarray(self.star, dtype=complex)
        self.unit = np.asarray(self.unit, dtype=complex)
        self.gns = np.asarray(self.gns, dtype=complex)

    @property
    def dim(self) -> int:
        return self.unit.shape[0]

    def mul(self, x, y) -> np.ndarray:
        return np.einsum("a,b,abc->c", x, y, self.mult)

    def star_of(self, x) -> np.ndarray:
        return self.star @ np.conj(x)

    def lmult(self, x) -> np.ndarray:
        return np.tensordot(x, self.mult, (0, 0)).T  # [c, b] -> [out, in]

    def rmult(self, x) -> np.ndarray:
        return np.tensordot(x, self.mult.transpose(1, 0, 2), (0, 0)).T


@dataclass
class WedderburnRealization:
    """*-isomorphism from an abstract presentation onto a canonical algebra.

    to_canonical maps abstract coefficient vectors to canonical ones;
    from_canonical is its inverse.
    """

    algebra: FdAlgebra
    to_canonical: np.ndarray
    from_canonical: np.ndarray
    residual: float

    def push_element(self, x) -> np.ndarray:
        return self.to_canonical @ np.asarray(x, dtype=complex)

    def pull_element(self, x) -> np.ndarray:
        return self.from_canonical @ np.asarray(x, dtype=complex)


def _validate_star_algebra(data: StarAlgebraData, tol: Tolerance, rng):
    dim = data.dim
    res_unit = max(
        max_abs(np.tensordot(data.unit, data.mult, (0, 0)) - np.eye(dim)),
        max_abs(np.tensordot(data.unit, data.mult.transpose(1, 0, 2), (0, 0)) - np.eye(dim)),
    )
    if res_unit > 100 * tol.abs_tol:
        raise WkaError(f"unit fails by {res_unit:.2e}")
    res_star = max_abs(data.star @ np.conj(data.star) - np.eye(dim))
    probes = rng.standard_normal((3, 2, dim)) + 1j * rng.standard_normal((3, 2, dim))
    res_anti = 0.0
    res_assoc = 0.0
    for x, y in probes:
        res_anti = max(
            res_anti,
            max_abs(data.star_of(data.mul(x, y)) - data.mul(data.star_of(y), data.star_of(x))),
        )
        z = probes[0][0]
        res_assoc = max(
            res_assoc,
            max_abs(data.mul(data.mul(x, y), z) - data.mul(x, data.mul(y, z))),
        )
    scale = max(1.0, max_abs(data.mult))
    if max(res_star, res_anti) > 1e-6 * scale * max(1.0, scale):
        raise NotStarClosed(f"involution fails by {max(res_star, res_anti):.2e}")
    if res_assoc > 1e-6 * scale * scale:
        raise WkaError(f"associativity fails by {res_assoc:.2e}")


def _cluster(eigvals: np.ndarray, gap: float):
    """Group sorted eigenvalues into clusters split at gaps larger than gap."""
    order = np.argsort(eigvals)
    clusters, current = [], [order[0]]
    for prev, nxt in zip(order[:-1], order[1:]):
        if eigvals[nxt] - eigvals[prev] > gap:
            clusters.append(current)
            current = []
        current.append(nxt)
    clusters.append(current)
    return clusters


def wedderburn_realize(
    data: StarAlgebraData, tol=None, seed: int = 0
) -> WedderburnRealization:
    """Find block sizes and explicit matrix units for an abstract *-algebra.

    Strategy: GNS-orthonormalize with the supplied positive form so left
    multiplication becomes a faithful *-representation; split the center
    with the spectral projections of a seeded random self-adjoint central
    element; inside each block, spectral projections of a random
    self-adjoint element give minimal projections, and polar-normalized
    corner elements q_1 r q_k complete them to matrix units.

    Raises NotSemisimple when the GNS form is degenerate and NotStarClosed
    when the involution axioms fail.
    """
    tol = as_tol(tol)
    rng = np.random.default_rng((0x5EED, seed))
    dim = data.dim
    _validate_star_algebra(data, tol, rng)

    # gram[a, b] = phi(b_a* b_b) with b_a* = sum_c star[c, a] b_c
    gram = np.einsum("ca,cbm,m->ab", data.star, data.mult, data.gns)
    herm_res = max_abs(gram - dagger(gram))
    if herm_res > 1e-7 * max(1.0, max_abs(gram)):
        raise NotSemisimple(f"GNS form not hermitian (residual {herm_res:.2e})")
    gram = (gram + dagger(gram)) / 2
    evals = np.linalg.eigvalsh(gram)
    if evals[0] <= tol.rank_cutoff(gram.shape, max(evals[-1], 1.0)):
        raise NotSemisimple(f"GNS form degenerate (min eigenvalue {evals[0]:.2e})")
    chol = np.linalg.cholesky(gram)

    # pi(x) = chol^H  L_x  chol^{-H} is a faithful *-representation
    chol_h = dagger(chol)
    chol_h_inv = np.linalg.inv(chol_h)
    pis = np.stack(
        [chol_h @ data.lmult(_basis_vec(dim, a)) @ chol_h_inv for a in range(dim)]
    )
    pimat = pis.reshape(dim, dim * dim).T  # columns = vec(pi(b_a))

    def represent(x):
        return np.tensordot(x, pis, (0, 0))

    def unrepresent(op, what: str):
        x, *_ = np.linalg.lstsq(pimat, op.reshape(-1), rcond=None)
        res = max_abs(pimat @ x - op.reshape(-1))
        if res > 1e-6 * max(1.0, max_abs(op)):
            raise WkaError(f"{what}: operator not in the algebra ({res:.2e})")
        return x

    # center: null space of stacked commutators with all basis elements
    rows = [data.lmult(_basis_vec(dim, a)) - data.rmult(_basis_vec(dim, a)) for a in range(dim)]
    cbasis = nullspace(np.vstack(rows), tol)
    nblocks = cbasis.shape[1]

    # split the center with a random self-adjoint central element
    blocks = None
    for _ in range(24):
        z = cbasis @ (rng.standard_normal(nblocks) + 1j * rng.standard_normal(nblocks))
        z = z + data.star_of(z)
        zop = represent(z)
        zop = (zop + dagger(zop)) / 2
        w, v = np.linalg.eigh(zop)
        spread = max(w[-1] - w[0], 1.0)
        clusters = _cluster(w, 1e-6 * spread)
        if len(clusters) != nblocks:
            continue
        try:
            blocks = []
            for cl in clusters:
                q = v[:, cl] @ dagger(v[:, cl])
                p = unrepresent(q, "central projection")
                p = (p + data.star_of(p)) / 2
                if max_abs(data.mul(p, p) - p) > 1e-7:
                    raise WkaError("central idempotent drifted")
                blocks.append((float(np.mean(w[cl])), p))
            break
        except WkaError:
            blocks = None
            continue
    if blocks is None:
        raise NotSemisimple("could not separate central idempotents")

    # matrix units inside each block
    found = []
    for z_eig, p in blocks:
        cols = np.stack([data.mul(p, _basis_vec(dim, a)) for a in range(dim)], axis=1)
        vi = orthonormal_columns(cols, tol)
        bdim = vi.shape[1]
        d = int(round(np.sqrt(bdim)))
        if d * d != bdim:
            raise NotSemisimple(f"block dimension {bdim} is not a square")
        units = _block_matrix_units(data, p, vi, d, represent, unrepresent, rng)
        found.append((d, z_eig, units))

    found.sort(key=lambda t: (t[0], t[1]))
    shape = tuple(t[0] for t in found)
    target = make_algebra(shape)
    cols = []
    for _, _, units in found:
        cols.extend(units)
    wmat = np.stack(cols, axis=1)  # abstract coords of canonical units
    winv = np.linalg.inv(wmat)

    residual = _realization_residual(data, target, wmat, winv)
    if residual > 1e-7:
        raise WkaError(f"realization round-trip residual {residual:.2e}")
    return WedderburnRealization(
        algebra=target, to_canonical=winv, from_canonical=wmat, residual=residual
    )


def _basis_vec(dim, a):
    v = np.zeros(dim, dtype=complex)
    v[a] = 1.0
    return v


def _block_matrix_units(data, p, vi, d, represent, unrepresent, rng):
    """Matrix units of the block p*M, ordered e_{00}, e_{01}, ..., e_{d-1,d-1}."""
    bdim = vi.shape[1]
    qs = None
    for _ in range(24):
        v = vi @ (rng.standard_normal(bdim) + 1j * rng.standard_normal(bdim))
        a = v + data.star_of(v)
        aop = represent(a)
        aop = (aop + dagger(aop)) / 2
        shift = float(np.max(np.abs(np.linalg.eigvalsh(aop)))) + 1.0
        aop_s = aop + shift * ((represent(p) + dagger(represent(p))) / 2)
        w, vec = np.linalg.eigh(aop_s)
        inside = w > 0.5
        if not np.any(inside):
            continue
        win = w[inside]
        clusters = _cluster(win, 1e-6 * max(win[-1] - win[0], 1.0))
        if len(clusters) != d:
            continue
        try:
            qs = []
            vin = vec[:, inside]
            for cl in clusters:
                q = vin[:, cl] @ dagger(vin[:, cl])
                qc = unrepresent(q, "minimal projection")
                qc = (qc + data.star_of(qc)) / 2
                if max_abs(data.mul(qc, qc) - qc) > 1e-7:
                    raise WkaError("minimal idempotent drifted")
                qs.append(qc)
            break
        except WkaError:
            qs = None
            continue
    if qs is None:
        raise NotSemisimple("could not split a block into minimal projections")

    us = None
    for _ in range(24):
        r = vi @ (rng.standard_normal(bdim) + 1j * rng.standard_normal(bdim))
        us = [qs[0]]
        ok = True
        for k in range(1, d):
            w = data.mul(data.mul(qs[0], r), qs[k])
            ww = data.mul(data.star_of(w), w)
            denom = float(np.real(np.vdot(qs[k], qs[k])))
            c = complex(np.vdot(qs[k], ww)) / denom
            if np.real(c) < 1e-8 or max_abs(ww - c * qs[k]) > 1e-6 * abs(c):
                ok = False
                break
            us.append(w / np.sqrt(np.real(c)))
        if ok:
            break
        us = None
    if us is None:
        raise NotSemisimple("could not build partial isometries in a block")

    units = []
    for k in range(d):
        for l in range(d):
            units.append(data.mul(data.star_of(us[k]), us[l]))
    return units


def _realization_residual(data, target, wmat, winv):
    """Max difference between transported and canonical structure data."""
    s1 = np.einsum("pqm,pa->aqm", data.mult, wmat)
    s2 = np.einsum("aqm,qb->abm", s1, wmat)
    trans = np.einsum("abm,cm->abc", s2, winv)
    res = max_abs(trans - target.mult_tensor())
    star_trans = winv @ data.star @ np.conj(wmat)
    res = max(res, max_abs(star_trans - target.star_matrix))
    res = max(res, max_abs(winv @ data.unit - target.unit))
    return res


def check_conditional_expectation(
    emat: np.ndarray,
    target: SubalgebraBasis,
    trace: Functional | None = None,
    tol=None,
    seed: int = 0,
) -> VerificationReport:
    """Verify that the linear map emat is a conditional expectation onto target.

    Checks: unital, idempotent with range exactly the target span, identity
    on the target, *-preserving, bimodular over the target, positive
    (sampled), faithful (Gram criterion), and optionally trace-preserving.
    """
    tol = as_tol(tol)
    alg = target.parent
    emat = np.asarray(emat, dtype=complex)
    rep = VerificationReport("conditional expectation", tol)
    rep.add("unital", max_abs(emat @ alg.unit - alg.unit))
    rep.add("idempotent", max_abs(emat @ emat - emat), scale=10)
    rep.add("range_in_target", target.contains(emat))
    rep.add("identity_on_target", max_abs(emat @ target.basis - target.basis))
    svals = np.linalg.svd(emat, compute_uv=False)
    rank = int(np.sum(svals > tol.rank_cutoff(emat.shape, max(svals[0], 1.0))))
    rep.add_flag("range_equals_target", rank == target.dim, f"rank {rank} vs {target.dim}")
    rep.add(
        "star_preserving",
        max_abs(emat @ alg.star_matrix - alg.star_matrix @ np.conj(emat)),
    )

    worst = 0.0
    lmats = [alg.lmat(target.basis[:, i]) for i in range(target.dim)]
    rmats = [alg.rmat(target.basis[:, i]) for i in range(target.dim)]
    for ln in lmats:
        for rn in rmats:
            mixed = ln @ rn
            worst = max(worst, max_abs(emat @ mixed - mixed @ emat))
    rep.add("bimodular", worst, scale=100)

    rng = np.random.default_rng((0xE4, seed))
    min_eig = np.inf
    for _ in range(20):
        x = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
        x /= max_abs(x)
        pos = emat @ alg.mul(alg.star(x), x)
        w = np.linalg.eigvalsh(
            (alg.to_matrix(pos) + dagger(alg.to_matrix(pos))) / 2
        )
        min_eig = min(min_eig, float(w[0]))
    rep.add("positive_sampled", max(0.0, -min_eig), note=f"min eig {min_eig:.2e}", scale=100)

    tau = block_trace(alg)
    p = alg.prod_table[alg.star_index, :]
    fgram = np.zeros((alg.dim, alg.dim), dtype=complex)
    mask = p >= 0
    tvec = tau.vec @ emat
    fgram[mask] = tvec[p[mask]]
    wf = np.linalg.eigvalsh((fgram + dagger(fgram)) / 2)
    rep.add_flag(
        "faithful",
        bool(wf[0] > tol.rank_cutoff(fgram.shape, max(wf[-1], 1.0))),
        f"min eig {wf[0]:.2e}",
    )
    if trace is not None:
        rep.add("trace_preserving", max_abs(trace.vec @ emat - trace.vec))
    return rep
