"""Counital representation, fusion ring, and counital quotient.

The classes of nondegenerate representations of the algebra M of a weak
Kac algebra form a ring: direct sum, and the product rho_1 x rho_2 =
(rho_1 (x) rho_2) o Delta cut to the support of e.  Classes are
determined by characters, so the whole ring lives in character
coordinates: block characters chi_i are a basis, and the product
decomposes through the coproduct tensor.

The counit eps is positive and its GNS representation pi_eps acts on the
target Cartan subalgebra N_t carrying the scalar product (x, y) =
eps(y* x), by pi_eps(x) eps_t(y) = eps_t(x y).  Its character is
chi_eps = eps o mu o Delta.  This representation is the unit of the
ring, is multiplicity free, and its irreducible constituents (the
counital support) select the central blocks whose sum is the minimal
quotient weak Kac algebra of M.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import FdAlgebra
from .errors import GramDegenerate, NonIntegralMultiplicity
from .report import VerificationReport
from .tensorkit import as_tol, dagger, max_abs
from .weakkac import WeakKac, check_morphism, restrict_to_blocks, verify_weak_kac, _cartan_spans

__all__ = [
    "block_characters",
    "counital_character",
    "CounitalRepresentation",
    "counital_representation",
    "FusionRing",
    "fusion_ring",
    "counital_quotient",
    "dual_fusion_consistency",
]


def block_characters(alg: FdAlgebra) -> np.ndarray:
    """chi[a, i] = chi_i(b_a): block characters over the matrix-unit basis."""
    chi = np.zeros((alg.dim, alg.nblocks), dtype=complex)
    diag = alg.basis_row == alg.basis_col
    chi[np.arange(alg.dim)[diag], alg.basis_block[diag]] = 1.0
    return chi


def counital_character(w: WeakKac) -> np.ndarray:
    """Character of the counital representation, chi_eps = eps o mu o Delta."""
    eps_mult = np.einsum("mnk,k->mn", w.algebra.mult_tensor(), w.counit)
    return np.einsum("amn,mn->a", w.coproduct, eps_mult)


def _support_multiplicities(w: WeakKac, tol):
    """Multiplicity vector of chi_eps over the block characters."""
    chi = block_characters(w.algebra)
    target = counital_character(w)
    nu, *_ = np.linalg.lstsq(chi, target, rcond=None)
    residual = max_abs(chi @ nu - target)
    return nu, residual, chi


@dataclass
class CounitalRepresentation:
    """GNS representation of the counit on the target Cartan subalgebra.

    basis: orthonormal coefficient columns spanning N_t; gram[r, s] =
    eps(y_r* y_s) is the GNS scalar product; matrices[a] represents basis
    element a on those coordinates; support lists the blocks of M whose
    irreducible representations constitute pi_eps (each once).
    """

    basis: np.ndarray
    gram: np.ndarray
    matrices: np.ndarray
    character: np.ndarray
    support: tuple
    multiplicities: np.ndarray


def counital_representation(w: WeakKac, tol=None):
    """Build pi_eps explicitly and verify its textbook properties.

    Returns (CounitalRepresentation, report).  Checks: the GNS form is
    positive definite on N_t (else GramDegenerate), pi_eps is a unital
    *-representation, its character matches eps o mu o Delta, the
    multiplicities of its irreducible constituents are 0/1, the
    constituents are self-conjugate, and their dimensions sum to dim N_t.
    """
    tol = as_tol(tol)
    alg = w.algebra
    eps = w.counit_functional()
    rep = VerificationReport("counital representation", tol)

    _, nt, _, _ = _cartan_spans(w, tol)
    b = nt.basis
    k = nt.dim
    stars = np.stack([alg.star(b[:, r]) for r in range(k)], axis=1)
    gram = np.array(
        [[eps(alg.mul(stars[:, r], b[:, s])) for s in range(k)] for r in range(k)]
    )
    herm = max_abs(gram - dagger(gram))
    gram = (gram + dagger(gram)) / 2
    evals = np.linalg.eigvalsh(gram)
    if herm > 100 * tol.abs_tol or evals[0] <= tol.rank_cutoff(
        gram.shape, max(float(evals[-1]), 1.0)
    ):
        raise GramDegenerate(
            f"counit is not faithful positive on N_t"
            f" (hermiticity {herm:.2e}, min eigenvalue {evals[0]:.2e})"
        )

    et = w.eps_t_matrix
    images = np.stack(
        [
            np.stack([et @ alg.mul(np.eye(alg.dim)[a], b[:, s]) for s in range(k)], axis=1)
            for a in range(alg.dim)
        ]
    )  # [a, coeff, s]
    pis = np.einsum("cr,acs->ars", np.conj(b), images, optimize=True)
    rep.add(
        "action_lands_in_cartan",
        max_abs(np.einsum("cr,ars->acs", b, pis, optimize=True) - images),
        scale=10,
    )
    rep.add("unital", max_abs(np.tensordot(alg.unit, pis, (0, 0)) - np.eye(k)))
    prod = np.einsum("abm,mrs->abrs", alg.mult_tensor(), pis, optimize=True)
    comp = np.einsum("arm,bms->abrs", pis, pis, optimize=True)
    rep.add("multiplicative", max_abs(prod - comp), scale=10)
    star_lhs = pis[alg.star_index]
    star_rhs = np.linalg.solve(gram, np.einsum("asr,sm->arm", np.conj(pis), gram))
    rep.add("star_representation", max_abs(star_lhs - star_rhs), scale=10)

    character = counital_character(w)
    rep.add("character_formula", max_abs(np.einsum("arr->a", pis) - character), scale=10)

    nu, residual, chi = _support_multiplicities(w, tol)
    rep.add("character_decomposes_over_blocks", residual, scale=10)
    nu_int = np.round(np.real(nu)).astype(int)
    rep.add("multiplicities_integral", max_abs(nu - nu_int))
    rep.add_flag(
        "multiplicity_free",
        bool(np.all((nu_int == 0) | (nu_int == 1))),
        note=f"multiplicities {nu_int.tolist()}",
    )
    support = tuple(int(i) for i in np.nonzero(nu_int)[0])
    dims = [int(alg.block_shape[i]) for i in support]
    rep.add_flag(
        "support_dimensions_sum_to_cartan",
        sum(dims) == k,
        note=f"blocks {support} with dims {dims}, dim N_t = {k}",
    )
    conj_chi = w.antipode.T @ chi
    self_conj = max(
        float(max_abs(conj_chi[:, i] - chi[:, i])) for i in support
    ) if support else 0.0
    rep.add("support_blocks_self_conjugate", self_conj)

    data = CounitalRepresentation(b, gram, pis, character, support, nu_int)
    return data, rep


@dataclass
class FusionRing:
    """Integer fusion table of the representation ring.

    table[i, j, k] is the multiplicity of block k in the product of the
    irreducible representations of blocks i and j; support lists the
    constituents of the unit pi_eps; involution is the permutation
    rho -> rho* induced by chi -> chi o S.
    """

    table: np.ndarray
    support: tuple
    involution: tuple
    characters: np.ndarray

    @property
    def nblocks(self) -> int:
        return self.table.shape[0]


def fusion_ring(w: WeakKac, tol=None):
    """Fusion table N_ij^k of the representation ring, with verification.

    Products are decomposed in character coordinates: the character of
    pi_i x pi_j is (chi_i (x) chi_j) o Delta, expanded over the block
    characters.  Raises NonIntegralMultiplicity when the decomposition is
    not a nonnegative integer table.  Returns (FusionRing, report) with
    checks: decomposition residual, integrality, associativity, pi_eps
    two-sided unit, involution anti-automorphism, and chi_eps = sum of
    support characters.
    """
    tol = as_tol(tol)
    alg = w.algebra
    rep = VerificationReport("fusion ring", tol)
    chi = block_characters(alg)
    nblocks = alg.nblocks

    v = np.einsum("amn,mi,nj->aij", w.coproduct, chi, chi, optimize=True)
    coeffs, *_ = np.linalg.lstsq(chi, v.reshape(alg.dim, -1), rcond=None)
    residual = max_abs(chi @ coeffs - v.reshape(alg.dim, -1))
    rep.add("character_decomposition", residual, scale=10)
    n_float = coeffs.reshape(nblocks, nblocks, nblocks).transpose(1, 2, 0)
    table = np.round(np.real(n_float)).astype(int)
    drift = max_abs(n_float - table)
    rep.add("multiplicities_integral", drift, scale=1000)
    if drift > 1e-6 or np.any(table < 0):
        raise NonIntegralMultiplicity(
            f"fusion multiplicities are not nonnegative integers (drift {drift:.2e})"
        )

    conj_chi = w.antipode.T @ chi
    involution = []
    invol_res = 0.0
    for i in range(nblocks):
        dists = [float(max_abs(conj_chi[:, i] - chi[:, k])) for k in range(nblocks)]
        k = int(np.argmin(dists))
        involution.append(k)
        invol_res = max(invol_res, dists[k])
    rep.add("involution_permutes_characters", invol_res)
    rep.add_flag(
        "involution_is_involution",
        all(involution[involution[i]] == i for i in range(nblocks)),
        note=f"involution {involution}",
    )
    inv = np.asarray(involution)
    rep.add_flag(
        "involution_antiautomorphism",
        bool(np.array_equal(table, table[np.ix_(inv, inv)].transpose(1, 0, 2)[:, :, inv])),
    )

    assoc_l = np.einsum("ijm,mkl->ijkl", table, table)
    assoc_r = np.einsum("jkm,iml->ijkl", table, table)
    rep.add_flag("associative", bool(np.array_equal(assoc_l, assoc_r)))

    nu, chi_res, _ = _support_multiplicities(w, tol)
    support = tuple(int(i) for i in np.nonzero(np.round(np.real(nu)).astype(int))[0])
    rep.add("counital_character_decomposition", chi_res, scale=10)
    unit_rows = table[list(support)].sum(axis=0) if support else np.zeros((nblocks, nblocks), int)
    unit_cols = table[:, list(support)].sum(axis=1) if support else np.zeros((nblocks, nblocks), int)
    eye = np.eye(nblocks, dtype=int)
    rep.add_flag("unit_left", bool(np.array_equal(unit_rows, eye)))
    rep.add_flag("unit_right", bool(np.array_equal(unit_cols, eye)))

    return FusionRing(table, support, tuple(involution), chi), rep


def counital_quotient(w: WeakKac, tol=None):
    """Minimal quotient weak Kac algebra carried by the counital support.

    Compression to P_eps = sum of the support blocks is a surjective
    morphism of weak Kac algebras.  Returns (quotient, pi, report) where
    pi is the compression matrix; the report verifies the morphism and
    the quotient's axioms.
    """
    tol = as_tol(tol)
    nu, residual, _ = _support_multiplicities(w, tol)
    support = [int(i) for i in np.nonzero(np.round(np.real(nu)).astype(int))[0]]
    wq, pi = restrict_to_blocks(w, support)
    rep = VerificationReport("counital quotient", tol)
    rep.add("support_identification", residual, scale=10)
    rep.extend(check_morphism(w, wq, pi, tol), prefix="morphism.")
    rep.extend(verify_weak_kac(wq, tol), prefix="quotient.")
    return wq, pi, rep


def dual_fusion_consistency(w: WeakKac, tol=None) -> VerificationReport:
    """Cross-check the dual's fusion table against the primal product.

    The block characters of the dual algebra are functionals on it, i.e.
    elements of the primal algebra through the pairing; the fusion rule
    chi_i x chi_j = sum_k N_ij^k chi_k is then literally a product
    decomposition in M.  Verifies that the concrete fusion table of
    dual(w) equals the decomposition of those element products.
    """
    tol = as_tol(tol)
    from .duality import dual  # deferred: duality builds on haar, not on fusion

    rep = VerificationReport("dual fusion consistency", tol)
    dw = dual(w, tol)
    ring, ring_rep = fusion_ring(dw, tol)
    rep.extend(ring_rep, prefix="dual.")

    chi_hat = block_characters(dw.algebra)
    carried = dw.meta["to_canonical"].T @ chi_hat  # columns: elements of M
    nb = dw.algebra.nblocks
    alg = w.algebra
    prods = np.stack(
        [
            [alg.mul(carried[:, i], carried[:, j]) for j in range(nb)]
            for i in range(nb)
        ],
        axis=0,
    )  # [i, j, coeff]
    coeffs, *_ = np.linalg.lstsq(carried, prods.reshape(-1, alg.dim).T, rcond=None)
    lam = coeffs.T.reshape(nb, nb, nb)
    rep.add(
        "products_decompose_over_characters",
        max_abs(np.einsum("ijk,ak->ija", lam, carried) - prods),
        scale=10,
    )
    rep.add("matches_dual_fusion_table", max_abs(lam - ring.table), scale=10)
    return rep
