"""Dual weak Kac algebra and the Haar-trace route back to a counit.

The dual of a weak Kac algebra W = (M, Delta, S, eps) lives on the linear
dual M^ with multiplication (alpha beta)(x) = (alpha (x) beta)(Delta x),
unit eps, coproduct dual to the product, antipode transpose to S and
involution alpha*(x) = conj(alpha(S(x)*)).  In the coefficient conventions
used here (elements as coordinate vectors over a fixed basis, the dual
basis indexed by the same labels) every dual structure tensor is an axis
permutation of a primal one, and the dual Haar trace is evaluation at the
primal Haar projection.  `dual` realizes this abstract presentation
concretely as block matrices and keeps the change of basis in `meta`, so
the pairing between the dual and its primal stays available; `check_pairing`
verifies all of the defining identities through that pairing.

The reverse direction starts from a generalized Kac algebra (M, Delta, S)
with a normalized Haar trace phi and no counit: the convolution algebra
carried by M^ then has a unit, and evaluating it recovers the counit.
`convolution_unit`, `counit_from_haar` and `generalized_to_weak` implement
that recovery, and `biduality_isomorphism` exhibits the canonical
isomorphism of a weak Kac algebra with its double dual.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import AlgElement, Functional, StarAlgebraData, wedderburn_realize
from .constructors import (
    Groupoid,
    groupoid_algebra,
    groupoid_function_algebra,
    transported_weak_kac,
)
from .errors import GramDegenerate, NotCounital, NoUnit
from .haar import _as_weak_kac, haar_projection, normalized_haar_trace, trace_pairing_matrix
from .report import VerificationReport
from .tensorkit import Inconsistent, as_tol, dagger, max_abs, solve_affine_space
from .weakkac import WeakKac, check_morphism, _cartan_spans

__all__ = [
    "dual",
    "dual_element",
    "dual_functional",
    "check_pairing",
    "biduality_isomorphism",
    "convolution_unit",
    "counit_from_haar",
    "generalized_to_weak",
    "GroupoidDuality",
    "groupoid_dual_isomorphisms",
]


def dual(w: WeakKac, tol=None, seed: int = 0) -> WeakKac:
    """Concrete realization of the dual weak Kac algebra of w.

    Over the dual basis the structure constants are re-indexings of the
    primal ones: with T = w.coproduct and mult the primal product,

        (b^a b^b)_c = T[c, a, b]          unit^ = eps
        Delta^(b^c)  = mult[:, :, c]      counit^ = evaluation at 1
        S^           = S transpose        b^a* = sum_c S[star a, c] b^c

    The GNS form used to split M^ into matrix blocks is the dual Haar
    trace, which is evaluation at the primal Haar projection.  The
    returned algebra carries meta entries `to_canonical`/`from_canonical`
    (abstract dual coordinates <-> concrete block coordinates) and
    `primal`, so the pairing with w remains computable.

    Raises NotCounital when w has no counit and GramDegenerate when the
    dual GNS form fails to be positive definite, which signals that w
    does not satisfy the weak Kac axioms to working precision.
    """
    tol = as_tol(tol)
    if w.counit is None:
        raise NotCounital(
            "dual construction needs a counit; recover one with counit_from_haar"
        )
    alg = w.algebra
    mult_hat = np.ascontiguousarray(w.coproduct.transpose(1, 2, 0))
    star_hat = w.antipode.T @ alg.star_matrix
    unit_hat = np.asarray(w.counit, dtype=complex)
    gns = haar_projection(w, tol).coeffs

    gram = np.einsum("ca,cbm,m->ab", star_hat, mult_hat, gns, optimize=True)
    gram = (gram + dagger(gram)) / 2
    evals = np.linalg.eigvalsh(gram)
    if evals[0] <= tol.rank_cutoff(gram.shape, max(float(evals[-1]), 1.0)):
        raise GramDegenerate(
            f"dual Haar trace is not faithful (min gram eigenvalue {evals[0]:.2e})"
        )

    data = StarAlgebraData(mult_hat, star_hat, unit_hat, gns)
    realization = wedderburn_realize(data, tol, seed=seed)
    t_abs = np.ascontiguousarray(alg.mult_tensor().transpose(2, 0, 1))
    s_abs = w.antipode.T
    eps_abs = alg.unit
    meta = {"kind": "dual", "primal": w}
    return transported_weak_kac(realization, t_abs, s_abs, eps_abs, meta)


def _pairing_matrix(dw: WeakKac) -> np.ndarray:
    """F with F[p, i] = <e_i, b_p> for concrete dual basis e_i and primal b_p."""
    return dw.meta["from_canonical"]


def _primal_of(dw: WeakKac) -> WeakKac:
    primal = dw.meta.get("primal")
    if primal is None:
        raise KeyError("not a dual-constructed algebra: meta lacks 'primal'")
    return primal


def dual_functional(dw: WeakKac, element) -> Functional:
    """The linear functional on the primal algebra represented by a concrete
    element of the dual."""
    coeffs = element.coeffs if isinstance(element, AlgElement) else np.asarray(element)
    return Functional(_primal_of(dw).algebra, _pairing_matrix(dw) @ coeffs)


def dual_element(dw: WeakKac, functional) -> AlgElement:
    """The concrete dual element representing a linear functional on the
    primal algebra."""
    vec = functional.vec if isinstance(functional, Functional) else np.asarray(functional)
    return AlgElement(dw.algebra, dw.meta["to_canonical"] @ vec)


def check_pairing(w: WeakKac, dw: WeakKac, tol=None) -> VerificationReport:
    """Verify every dual structure map against the pairing with the primal.

    Checks, for all basis elements: <Delta^ alpha, x (x) y> = <alpha, xy>,
    <alpha beta, x> = <alpha (x) beta, Delta x>, <S^ alpha, x> = <alpha, Sx>,
    <alpha*, x> = conj <alpha, S(x)*>, counit^ = evaluation at 1, unit^ = eps,
    that the Cartan dimensions swap sides, and that the Haar structures
    trade places: the primal Haar trace is the dual Haar projection and the
    dual Haar trace is evaluation at the primal Haar projection.
    """
    tol = as_tol(tol)
    alg = w.algebra
    rep = VerificationReport("pairing with the dual", tol)
    f = _pairing_matrix(dw)
    mult = alg.mult_tensor()

    lhs = np.einsum("imn,am,bn->iab", dw.coproduct, f, f, optimize=True)
    rhs = np.einsum("abc,ci->iab", mult, f, optimize=True)
    rep.add("coproduct_pairs_with_product", max_abs(lhs - rhs), scale=10)

    lhs = np.einsum("ijk,ck->ijc", dw.algebra.mult_tensor(), f, optimize=True)
    rhs = np.einsum("cab,ai,bj->ijc", w.coproduct, f, f, optimize=True)
    rep.add("product_pairs_with_coproduct", max_abs(lhs - rhs), scale=10)

    rep.add("antipode_transposes", max_abs(f @ dw.antipode - w.antipode.T @ f), scale=10)
    rep.add(
        "star_conjugates",
        max_abs(f @ dw.algebra.star_matrix - w.antipode.T @ alg.star_matrix @ np.conj(f)),
        scale=10,
    )
    rep.add("counit_evaluates_at_unit", max_abs(dw.counit - alg.unit @ f))
    rep.add("unit_pairs_as_counit", max_abs(f @ dw.algebra.unit - w.counit))

    ns_w, nt_w, _, _ = _cartan_spans(w, tol)
    ns_d, nt_d, _, _ = _cartan_spans(dw, tol)
    rep.add_flag(
        "cartan_dimensions_swap",
        ns_d.dim == nt_w.dim and nt_d.dim == ns_w.dim,
        note=f"dual (N_s, N_t) dims ({ns_d.dim}, {nt_d.dim}) vs primal ({ns_w.dim}, {nt_w.dim})",
    )

    p = haar_projection(w, tol)
    phi_hat = normalized_haar_trace(dw, tol)
    rep.add(
        "dual_haar_trace_evaluates_at_projection",
        max_abs(dw.meta["to_canonical"].T @ phi_hat.vec - p.coeffs),
        scale=10,
    )
    phi = normalized_haar_trace(w, tol)
    p_hat = haar_projection(dw, tol)
    rep.add(
        "haar_trace_is_dual_haar_projection",
        max_abs(f @ p_hat.coeffs - phi.vec),
        scale=10,
    )
    return rep


def biduality_isomorphism(w: WeakKac, tol=None, seed: int = 0):
    """Canonical isomorphism of w onto its double dual.

    Evaluation at x defines a functional on the dual; expressed in the
    double dual's concrete coordinates this is the matrix

        iota = (to_canonical of dual(dual w)) @ (from_canonical of dual w)^T.

    Returns (iota, double_dual, report) where the report runs the full
    morphism check plus bijectivity.
    """
    tol = as_tol(tol)
    dw = dual(w, tol, seed=seed)
    ddw = dual(dw, tol, seed=seed)
    iota = ddw.meta["to_canonical"] @ dw.meta["from_canonical"].T
    rep = check_morphism(w, ddw, iota, tol)
    sing = np.linalg.svd(iota, compute_uv=False)
    cutoff = tol.rank_cutoff(iota.shape, float(sing[0]))
    rank = int(np.count_nonzero(sing > cutoff))
    rep.add_flag(
        "bijective",
        rank == w.dim and ddw.dim == w.dim,
        note=f"rank {rank} of {w.dim}, double dual dim {ddw.dim}",
    )
    return iota, ddw, rep


# ---------------------------------------------------------------------------
# recovering the counit of a generalized Kac algebra from its Haar trace
# ---------------------------------------------------------------------------


def _convolution_unit_system(w: WeakKac, phi: Functional, tol):
    """Solve for the convolution unit of the dual in trace coordinates.

    Functionals phi(b_j . ) span the dual when phi is faithful, so the unit
    conditions 1^ * alpha = alpha * 1^ = alpha reduce to the linear system

        sum_{c,d} T[a,c,d] v_c Phi[d,j] = Phi[a,j]   (left)
        sum_{c,d} T[a,c,d] Phi[c,j] v_d = Phi[a,j]   (right)

    for the value vector v_a = 1^(b_a), with Phi[a,b] = phi(b_a b_b).
    Returns (u, v) where u solves Phi u = v, the element of M representing
    the unit through phi.  Raises NoUnit when the system is inconsistent,
    underdetermined, or the resulting element is not S- and *-fixed.
    """
    alg = w.algebra
    dim = alg.dim
    phim = trace_pairing_matrix(w, phi)
    t = w.coproduct
    left = np.einsum("acd,dj->jac", t, phim, optimize=True).reshape(dim * dim, dim)
    right = np.einsum("acd,cj->jad", t, phim, optimize=True).reshape(dim * dim, dim)
    rhs = phim.T.reshape(-1)
    try:
        space = solve_affine_space(
            [(np.vstack((left, right)), np.concatenate((rhs, rhs)))], tol
        )
    except Inconsistent as exc:
        raise NoUnit(f"convolution algebra has no unit: {exc}") from exc
    if not space.unique:
        raise NoUnit(
            f"convolution unit underdetermined ({space.null.shape[1]} free directions);"
            " the trace is not faithful"
        )
    v = space.particular
    u = np.linalg.solve(phim, v)
    res = max(
        max_abs(w.antipode @ u - u),
        max_abs(AlgElement(alg, u).star().coeffs - u),
    )
    if res > 100 * tol.abs_tol:
        raise NoUnit(f"convolution unit is not S- and *-fixed (residual {res:.2e})")
    return u, v


def convolution_unit(data, phi: Functional, tol=None) -> AlgElement:
    """Element of M representing the unit of the dual convolution algebra
    through the trace phi, i.e. phi(u b_a) = 1^(b_a) for all a.  The input
    may be a WeakKac or an (algebra, coproduct, antipode) triple."""
    tol = as_tol(tol)
    w = _as_weak_kac(data)
    u, _ = _convolution_unit_system(w, phi, tol)
    return AlgElement(w.algebra, u)


def counit_from_haar(data, phi: Functional, tol=None) -> Functional:
    """Counit of a generalized Kac algebra, recovered as the unit of the
    dual convolution algebra.  phi must be the normalized Haar trace."""
    tol = as_tol(tol)
    w = _as_weak_kac(data)
    _, v = _convolution_unit_system(w, phi, tol)
    return Functional(w.algebra, v)


def generalized_to_weak(data, phi: Functional, tol=None) -> WeakKac:
    """Promote a generalized Kac algebra (M, Delta, S) with normalized Haar
    trace phi to a weak Kac algebra by recovering its counit."""
    w = _as_weak_kac(data)
    eps = counit_from_haar(w, phi, tol)
    meta = {**w.meta, "recovered_counit": True}
    return WeakKac(w.algebra, w.coproduct, w.antipode, eps.vec, meta)


# ---------------------------------------------------------------------------
# the two weak Kac algebras of a groupoid are each other's duals
# ---------------------------------------------------------------------------


@dataclass
class GroupoidDuality:
    """Natural isomorphisms dual(CG) -> C(G) and dual(C(G)) -> CG.

    convolution / functions are the groupoid algebra and function algebra;
    to_functions and to_convolution are concrete morphism matrices out of
    their duals, verified in report under the prefixes `functions.` and
    `convolution.`.
    """

    convolution: WeakKac
    functions: WeakKac
    dual_of_convolution: WeakKac
    dual_of_functions: WeakKac
    to_functions: np.ndarray
    to_convolution: np.ndarray
    report: VerificationReport


def groupoid_dual_isomorphisms(gpd: Groupoid, tol=None, seed: int = 0) -> GroupoidDuality:
    """Realize the duality between the groupoid algebra and the function
    algebra of a finite groupoid.

    The pairing <delta^g, h> = [g = h] identifies the abstract dual basis
    of CG with the indicator basis of C(G) and vice versa; composing the
    stored changes of basis gives concrete isomorphism matrices, which are
    then verified as weak Kac isomorphisms.
    """
    tol = as_tol(tol)
    wg = groupoid_algebra(gpd, tol, seed=seed)
    wf = groupoid_function_algebra(gpd)
    dwg = dual(wg, tol, seed=seed)
    dwf = dual(wf, tol, seed=seed)
    # the function algebra is built directly on its canonical basis, so its
    # change of basis defaults to the identity
    wg_can = wg.meta.get("to_canonical", np.eye(wg.dim))
    wf_can = wf.meta.get("to_canonical", np.eye(wf.dim))
    to_functions = wf_can @ wg_can.T @ dwg.meta["from_canonical"]
    to_convolution = wg_can @ wf_can.T @ dwf.meta["from_canonical"]
    rep = VerificationReport("groupoid duality", as_tol(tol))
    rep.extend(check_morphism(dwg, wf, to_functions, tol), prefix="functions.")
    rep.extend(check_morphism(dwf, wg, to_convolution, tol), prefix="convolution.")
    for name, mat in (("functions", to_functions), ("convolution", to_convolution)):
        sing = np.linalg.svd(mat, compute_uv=False)
        cutoff = as_tol(tol).rank_cutoff(mat.shape, float(sing[0]))
        rep.add_flag(
            f"{name}.bijective",
            int(np.count_nonzero(sing > cutoff)) == mat.shape[0] == mat.shape[1],
        )
    return GroupoidDuality(wg, wf, dwg, dwf, to_functions, to_convolution, rep)
