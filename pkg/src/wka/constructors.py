"""Constructions of weak Kac algebras: finite groupoids and their two
algebras, elementary weak Kac algebras on a full matrix block, coproduct
twists, crossed products by finite group actions, the n^3-dimensional
family built from the principal groupoid, and sums and tensor products.

All constructors return WeakKac objects over canonical matrix-unit
algebras; abstract presentations (groupoid algebras, crossed products)
are realized through wedderburn_realize and the structure tensors are
transported along the resulting isomorphism, which is kept in .meta.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    FdAlgebra,
    StarAlgebraData,
    WedderburnRealization,
    make_algebra,
    wedderburn_realize,
)
from .errors import InvalidAction, InvalidCocycle, InvalidGroupoid
from .tensorkit import Tolerance, as_tol, max_abs
from .weakkac import WeakKac

__all__ = [
    "Group",
    "Groupoid",
    "pair_groupoid",
    "cyclic_groupoid",
    "disjoint_union",
    "groupoid_algebra",
    "groupoid_function_algebra",
    "elementary",
    "random_cocycle",
    "elementary_twist",
    "untwist_isomorphism",
    "dual_elementary",
    "GroupAction",
    "validate_action",
    "cyclic_shift_action",
    "crossed_product",
    "cube_family",
    "cube_crossed_isomorphism",
    "direct_sum",
    "tensor_product",
    "transported_weak_kac",
]


# ---------------------------------------------------------------------------
# finite groups and groupoids
# ---------------------------------------------------------------------------


class Group:
    """Finite group given by its Cayley table g h = table[g, h]."""

    def __init__(self, table, labels=None):
        self.table = np.asarray(table, dtype=int)
        n = self.table.shape[0]
        if self.table.shape != (n, n):
            raise ValueError("Cayley table must be square")
        self.size = n
        units = [
            u
            for u in range(n)
            if all(self.table[u, g] == g and self.table[g, u] == g for g in range(n))
        ]
        if len(units) != 1:
            raise ValueError("Cayley table has no unique unit")
        self.unit = units[0]
        self.inverse = np.full(n, -1, dtype=int)
        for g in range(n):
            hs = np.nonzero(self.table[g] == self.unit)[0]
            if len(hs) != 1 or self.table[hs[0], g] != self.unit:
                raise ValueError(f"element {g} has no two-sided inverse")
            self.inverse[g] = hs[0]
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a, b], c] != self.table[a, self.table[b, c]]:
                        raise ValueError("Cayley table is not associative")
        self.labels = list(labels) if labels else [f"g{g}" for g in range(n)]

    @classmethod
    def cyclic(cls, n: int) -> "Group":
        table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
        return cls(table, labels=[f"a^{k}" for k in range(n)])

    def __repr__(self):
        return f"Group(order={self.size})"


class Groupoid:
    """Finite groupoid: a partial composition table over morphisms.

    compose[g, h] is the index of g h when source(g) = target(h) and -1
    otherwise; units lists the identity morphisms.  Source, target and
    inverse maps are derived and the category axioms are validated.
    """

    def __init__(self, compose, units, labels=None):
        comp = np.asarray(compose, dtype=int)
        n = comp.shape[0]
        if comp.shape != (n, n):
            raise InvalidGroupoid("composition table must be square")
        self.compose = comp
        self.size = n
        self.units = sorted(int(u) for u in units)
        self.labels = list(labels) if labels else [f"m{g}" for g in range(n)]
        if len(self.labels) != n:
            raise InvalidGroupoid("label count does not match morphism count")
        self._validate_units()
        self.target = np.array([self._unique_unit(g, left=True) for g in range(n)])
        self.source = np.array([self._unique_unit(g, left=False) for g in range(n)])
        self._validate_composability()
        self._validate_associativity()
        self.inverse = np.array([self._find_inverse(g) for g in range(n)])

    def _validate_units(self):
        for u in self.units:
            if self.compose[u, u] != u:
                raise InvalidGroupoid(f"unit {u} is not idempotent")
        for u in self.units:
            for g in range(self.size):
                if self.compose[u, g] not in (-1, g) or self.compose[g, u] not in (-1, g):
                    raise InvalidGroupoid(f"unit {u} does not act as identity on {g}")

    def _unique_unit(self, g, left: bool):
        hits = [
            u
            for u in self.units
            if (self.compose[u, g] if left else self.compose[g, u]) == g
        ]
        if len(hits) != 1:
            side = "target" if left else "source"
            raise InvalidGroupoid(f"morphism {g} has no unique {side} unit")
        return hits[0]

    def _validate_composability(self):
        for g in range(self.size):
            for h in range(self.size):
                defined = self.compose[g, h] >= 0
                should = self.source[g] == self.target[h]
                if defined != should:
                    raise InvalidGroupoid(
                        f"composability pattern wrong at ({g}, {h})"
                    )
                if defined:
                    k = self.compose[g, h]
                    if self.target[k] != self.target[g] or self.source[k] != self.source[h]:
                        raise InvalidGroupoid(f"composition ({g}, {h}) breaks source/target")

    def _validate_associativity(self):
        n = self.size
        for g in range(n):
            for h in range(n):
                gh = self.compose[g, h]
                if gh < 0:
                    continue
                for k in range(n):
                    hk = self.compose[h, k]
                    lhs = self.compose[gh, k]
                    rhs = -1 if hk < 0 else self.compose[g, hk]
                    if lhs != rhs:
                        raise InvalidGroupoid(f"associativity fails at ({g}, {h}, {k})")

    def _find_inverse(self, g):
        hits = [
            h
            for h in range(self.size)
            if self.compose[g, h] == self.target[g] and self.compose[h, g] == self.source[g]
        ]
        if len(hits) != 1:
            raise InvalidGroupoid(f"morphism {g} has no unique inverse")
        return hits[0]

    @property
    def n_units(self) -> int:
        return len(self.units)

    def is_group(self) -> bool:
        return self.n_units == 1

    def __repr__(self):
        return f"Groupoid(morphisms={self.size}, units={self.n_units})"


def pair_groupoid(n: int) -> Groupoid:
    """Transitive principal groupoid on n points: morphisms (i, j) : j -> i
    with (i, j)(j, k) = (i, k)."""
    comp = np.full((n * n, n * n), -1, dtype=int)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                comp[i * n + j, j * n + k] = i * n + k
    units = [i * n + i for i in range(n)]
    labels = [f"({i},{j})" for i in range(n) for j in range(n)]
    return Groupoid(comp, units, labels)


def cyclic_groupoid(n: int) -> Groupoid:
    """The cyclic group Z/n viewed as a one-unit groupoid."""
    comp = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return Groupoid(comp, [0], labels=[f"a^{k}" for k in range(n)])


def disjoint_union(g1: Groupoid, g2: Groupoid) -> Groupoid:
    n1, n2 = g1.size, g2.size
    comp = np.full((n1 + n2, n1 + n2), -1, dtype=int)
    comp[:n1, :n1] = g1.compose
    shifted = g2.compose.copy()
    shifted[shifted >= 0] += n1
    comp[n1:, n1:] = shifted
    units = list(g1.units) + [u + n1 for u in g2.units]
    labels = [f"L{x}" for x in g1.labels] + [f"R{x}" for x in g2.labels]
    return Groupoid(comp, units, labels)


# ---------------------------------------------------------------------------
# transport of structure tensors along a realization
# ---------------------------------------------------------------------------


def transported_weak_kac(
    realization: WedderburnRealization, t_abs, s_abs, eps_abs, meta=None
) -> WeakKac:
    """Push abstract (coproduct, antipode, counit) tensors onto the
    canonical algebra of a Wedderburn realization."""
    w2c, c2a = realization.to_canonical, realization.from_canonical
    t_can = np.einsum("gi,gab,pa,qb->ipq", c2a, t_abs, w2c, w2c, optimize=True)
    s_can = w2c @ s_abs @ c2a
    eps_can = np.asarray(eps_abs, dtype=complex) @ c2a
    meta = dict(meta or {})
    meta.setdefault("to_canonical", w2c)
    meta.setdefault("from_canonical", c2a)
    return WeakKac(realization.algebra, t_can, s_can, eps_can, meta)


def _regular_trace_of(mult: np.ndarray) -> np.ndarray:
    return np.einsum("acc->a", mult)


# ---------------------------------------------------------------------------
# the two weak Kac algebras of a finite groupoid
# ---------------------------------------------------------------------------


def groupoid_algebra(gpd: Groupoid, tol=None, seed: int = 0) -> WeakKac:
    """Groupoid algebra CG: span of morphisms with g h = composition (0 when
    undefined), g* = g^{-1}, Delta(g) = g (x) g, S(g) = g^{-1}, eps(g) = 1."""
    tol = as_tol(tol)
    n = gpd.size
    mult = np.zeros((n, n, n), dtype=complex)
    g_idx, h_idx = np.nonzero(gpd.compose >= 0)
    mult[g_idx, h_idx, gpd.compose[g_idx, h_idx]] = 1.0
    star = np.zeros((n, n), dtype=complex)
    star[gpd.inverse, np.arange(n)] = 1.0
    unit = np.zeros(n, dtype=complex)
    unit[gpd.units] = 1.0
    data = StarAlgebraData(mult, star, unit, _regular_trace_of(mult))
    real = wedderburn_realize(data, tol, seed=seed)

    t_abs = np.zeros((n, n, n), dtype=complex)
    t_abs[np.arange(n), np.arange(n), np.arange(n)] = 1.0
    eps_abs = np.ones(n, dtype=complex)
    return transported_weak_kac(
        real,
        t_abs,
        star.copy(),  # S acts like * on the real basis: g -> g^{-1}
        eps_abs,
        meta={"kind": "groupoid_algebra", "groupoid": gpd, "name": f"C[{gpd!r}]"},
    )


def groupoid_function_algebra(gpd: Groupoid) -> WeakKac:
    """Function algebra C(G): point masses delta_g with pointwise product,
    Delta(delta_g) = sum over factorizations g = h k of delta_h (x) delta_k,
    S(delta_g) = delta_{g^{-1}}, eps(delta_g) = [g is a unit]."""
    n = gpd.size
    alg = make_algebra((1,) * n)
    t = np.zeros((n, n, n), dtype=complex)
    h_idx, k_idx = np.nonzero(gpd.compose >= 0)
    t[gpd.compose[h_idx, k_idx], h_idx, k_idx] = 1.0
    s = np.zeros((n, n), dtype=complex)
    s[gpd.inverse, np.arange(n)] = 1.0
    eps = np.zeros(n, dtype=complex)
    eps[gpd.units] = 1.0
    return WeakKac(
        alg, t, s, eps, meta={"kind": "groupoid_functions", "groupoid": gpd,
                              "name": f"C({gpd!r})"}
    )


# ---------------------------------------------------------------------------
# elementary weak Kac algebras and their twists
# ---------------------------------------------------------------------------


def _composite_index_maps(shape):
    """Row labels (alpha, i, j) of the full matrix algebra M_n, n = dim A."""
    shape = tuple(int(x) for x in shape)
    offsets = np.concatenate([[0], np.cumsum([d * d for d in shape])])
    n = int(offsets[-1])

    def row(alpha, i, j):
        return int(offsets[alpha] + i * shape[alpha] + j)

    return shape, n, row


def elementary(shape, tol=None) -> WeakKac:
    """The unique elementary weak Kac algebra on M_n with Cartan subalgebras
    isomorphic to A = concrete algebra with the given block shape (n = dim A).

    Matrix units are indexed by pairs of row labels (alpha, i, j), i, j
    ranging over the alpha-th block size; the coproduct spreads the inner
    index, the antipode transposes both labels and the counit pairs them.
    """
    shape, n, row = _composite_index_maps(shape)
    alg = make_algebra((n,))
    dim = n * n

    def idx(r, c):
        return r * n + c

    t = np.zeros((dim, dim, dim), dtype=complex)
    s = np.zeros((dim, dim), dtype=complex)
    eps = np.zeros(dim, dtype=complex)
    for alpha, na in enumerate(shape):
        for beta, nb in enumerate(shape):
            scale = 1.0 / np.sqrt(na * nb)
            for i in range(na):
                for j in range(na):
                    for k in range(nb):
                        for l in range(nb):
                            a = idx(row(alpha, i, j), row(beta, k, l))
                            for u in range(na):
                                for v in range(nb):
                                    t[a, idx(row(alpha, i, u), row(beta, k, v)),
                                      idx(row(alpha, u, j), row(beta, v, l))] = scale
                            s[idx(row(beta, l, k), row(alpha, j, i)), a] = 1.0
                            if i == j and k == l:
                                eps[a] = np.sqrt(na * nb)
    # block-pair labels per basis element, used by twists
    pair_of = np.zeros((dim, 2), dtype=int)
    for alpha, na in enumerate(shape):
        for beta, nb in enumerate(shape):
            for i in range(na):
                for j in range(na):
                    for k in range(nb):
                        for l in range(nb):
                            a = idx(row(alpha, i, j), row(beta, k, l))
                            pair_of[a] = (alpha, beta)
    return WeakKac(
        alg, t, s, eps,
        meta={"kind": "elementary", "cartan_shape": shape, "block_pairs": pair_of,
              "name": f"M({shape})"},
    )


def random_cocycle(nblocks: int, seed: int = 0) -> np.ndarray:
    """Random hermitian unimodular cocycle lambda[a, b] = mu_a conj(mu_b)."""
    rng = np.random.default_rng((0xC0C, seed))
    mu = np.exp(2j * np.pi * rng.random(nblocks))
    lam = np.outer(mu, np.conj(mu))
    return lam


def _validate_cocycle(lam: np.ndarray, nblocks: int):
    lam = np.asarray(lam, dtype=complex)
    if lam.shape != (nblocks, nblocks):
        raise InvalidCocycle(f"expected shape {(nblocks, nblocks)}, got {lam.shape}")
    if max_abs(np.abs(lam) - 1.0) > 1e-9:
        raise InvalidCocycle("entries must be unimodular")
    if max_abs(lam - np.conj(lam).T) > 1e-9:
        raise InvalidCocycle("must satisfy lambda[b,a] = conj(lambda[a,b])")
    for a in range(nblocks):
        for b in range(nblocks):
            for c in range(nblocks):
                if abs(lam[a, b] * lam[b, c] - lam[a, c]) > 1e-9:
                    raise InvalidCocycle(f"cocycle identity fails at {(a, b, c)}")
    return lam


def elementary_twist(w: WeakKac, lam) -> WeakKac:
    """Twist an elementary weak Kac algebra by a unimodular cocycle:
    Delta -> lambda Delta, S -> lambda^-2 S, eps -> lambda^-1 eps on the
    basis element of Cartan-block pair (alpha, beta)."""
    if "block_pairs" not in w.meta:
        raise InvalidCocycle("twisting requires an elementary weak Kac algebra")
    pairs = w.meta["block_pairs"]
    lam = _validate_cocycle(lam, int(pairs.max()) + 1 if len(pairs) else 1)
    lam_of = lam[pairs[:, 0], pairs[:, 1]]
    t = w.coproduct * lam_of[:, None, None]
    s = w.antipode * (lam_of ** -2)[None, :]
    eps = w.counit * (lam_of ** -1)
    meta = dict(w.meta)
    meta.update({"kind": "twisted_elementary", "cocycle": lam,
                 "untwist": np.diag(np.conj(lam_of)),
                 "name": meta.get("name", "M(?)") + "~twist"})
    return WeakKac(w.algebra, t, s, eps, meta)


def untwist_isomorphism(wt: WeakKac) -> np.ndarray:
    """Matrix of the isomorphism from a twisted elementary weak Kac algebra
    onto the standard one: the basis element of block pair (alpha, beta) is
    scaled by conj(lambda[alpha, beta])."""
    if "untwist" not in wt.meta:
        raise InvalidCocycle("not a twisted elementary weak Kac algebra")
    return wt.meta["untwist"]


def dual_elementary(shape) -> WeakKac:
    """Direct model of the dual of elementary(shape): the block algebra
    over pairs (alpha, beta) with block size n_alpha n_beta, built from
    comatrix units realized as scaled matrix units."""
    shape = tuple(int(x) for x in shape)
    nb = len(shape)
    alg = make_algebra(tuple(shape[a] * shape[b] for a in range(nb) for b in range(nb)))
    dim = alg.dim

    def idx(alpha, beta, i, k, j, l):
        # block (alpha, beta), row (i, k), column (j, l)
        block = alpha * nb + beta
        nbeta = shape[beta]
        return alg.matrix_unit_index(block, i * nbeta + k, j * nbeta + l)

    t = np.zeros((dim, dim, dim), dtype=complex)
    s = np.zeros((dim, dim), dtype=complex)
    eps = np.zeros(dim, dtype=complex)
    for alpha, na in enumerate(shape):
        for beta, nbta in enumerate(shape):
            for i in range(na):
                for k in range(nbta):
                    for j in range(na):
                        for l in range(nbta):
                            a = idx(alpha, beta, i, k, j, l)
                            for gamma, ng in enumerate(shape):
                                for p in range(ng):
                                    for q in range(ng):
                                        t[a,
                                          idx(alpha, gamma, i, p, j, q),
                                          idx(gamma, beta, p, k, q, l)] += 1.0 / ng
                            s[idx(beta, alpha, l, j, k, i), a] = 1.0
                            if alpha == beta and i == k and j == l:
                                eps[a] = na
    return WeakKac(
        alg, t, s, eps,
        meta={"kind": "dual_elementary", "cartan_shape": shape,
              "name": f"M({shape})^"},
    )


# ---------------------------------------------------------------------------
# group actions and crossed products
# ---------------------------------------------------------------------------


class GroupAction:
    """Right action of a finite group on a weak Kac algebra: mats[g] is the
    coefficient-space matrix of x -> x <| g, so mats[gh] = mats[h] mats[g]."""

    def __init__(self, group: Group, mats):
        self.group = group
        self.mats = np.asarray(mats, dtype=complex)
        if self.mats.shape[0] != group.size:
            raise InvalidAction("need one matrix per group element")

    def __getitem__(self, g: int) -> np.ndarray:
        return self.mats[g]


def validate_action(w: WeakKac, action: GroupAction, tol=None):
    """Raise InvalidAction unless every mats[g] is a *-automorphism of the
    algebra commuting with the weak Kac structure and g -> mats[g] reverses
    products (a right action)."""
    tol = as_tol(tol)
    alg, grp = w.algebra, action.group
    limit = 1e3 * tol.abs_tol
    if max_abs(action[grp.unit] - np.eye(alg.dim)) > limit:
        raise InvalidAction("unit must act trivially")
    for g in range(grp.size):
        ag = action[g]
        if max_abs(ag @ alg.unit - alg.unit) > limit:
            raise InvalidAction(f"action of {g} is not unital")
        if max_abs(ag @ alg.star_matrix - alg.star_matrix @ np.conj(ag)) > limit:
            raise InvalidAction(f"action of {g} does not preserve *")
        mats = np.stack([alg.to_matrix(ag[:, a]) for a in range(alg.dim)])
        prods = np.einsum("aij,bjk->abik", mats, mats, optimize=True)
        rhs = prods[:, :, alg.basis_row, alg.basis_col]
        lhs = np.zeros_like(rhs)
        prod = alg.prod_table
        a_idx, b_idx = np.nonzero(prod >= 0)
        lhs[a_idx, b_idx, :] = ag[:, prod[a_idx, b_idx]].T
        if max_abs(lhs - rhs) > limit:
            raise InvalidAction(f"action of {g} is not multiplicative")
        lhs_d = np.einsum("ma,iab,nb->imn", ag, w.coproduct, ag, optimize=True)
        rhs_d = np.einsum("mi,mab->iab", ag, w.coproduct, optimize=True)
        if max_abs(lhs_d - rhs_d) > limit:
            raise InvalidAction(f"action of {g} does not commute with the coproduct")
        if max_abs(ag @ w.antipode - w.antipode @ ag) > limit:
            raise InvalidAction(f"action of {g} does not commute with the antipode")
        if max_abs(w.counit @ ag - w.counit) > limit:
            raise InvalidAction(f"action of {g} does not preserve the counit")
        for h in range(grp.size):
            if max_abs(
                action[grp.table[g, h]] - action.mats[h] @ action.mats[g]
            ) > limit:
                raise InvalidAction(f"not a right action at pair {(g, h)}")


def cyclic_shift_action(n: int) -> tuple:
    """The Z/n action on the function algebra of the principal groupoid on n
    points shifting both legs: delta_(i,j) <| a = delta_(i+1, j+1)."""
    gpd = pair_groupoid(n)
    w = groupoid_function_algebra(gpd)
    grp = Group.cyclic(n)
    mats = np.zeros((n, n * n, n * n))
    for s in range(n):
        for i in range(n):
            for j in range(n):
                mats[s, ((i + s) % n) * n + (j + s) % n, i * n + j] = 1.0
    return w, GroupAction(grp, mats)


def crossed_product(w: WeakKac, action: GroupAction, tol=None, seed: int = 0) -> WeakKac:
    """Crossed product weak Kac algebra of a right group action.

    On generators m (x) g: (m (x) g)(n (x) h) = (m <| h) n (x) gh,
    (m (x) g)* = (m <| g^-1)* (x) g^-1, the coproduct duplicates the group
    leg, S(m (x) g) = S(m <| g^-1) (x) g^-1 and eps(m (x) g) = eps(m).
    """
    tol = as_tol(tol)
    validate_action(w, action, tol)
    alg, grp = w.algebra, action.group
    dm, ng = alg.dim, grp.size
    dim = dm * ng

    def idx(a, g):
        return a * ng + g

    mult = np.zeros((dim, dim, dim), dtype=complex)
    for h in range(ng):
        ah = action[h]
        for a in range(dm):
            acted = ah[:, a]
            lm = alg.lmat(acted)
            for g in range(ng):
                gh = grp.table[g, h]
                for b in range(dm):
                    col = lm[:, b]
                    nz = np.nonzero(np.abs(col) > 0)[0]
                    for c in nz:
                        mult[idx(a, g), idx(b, h), idx(c, gh)] = col[c]

    star = np.zeros((dim, dim), dtype=complex)
    smat = alg.star_matrix
    for g in range(ng):
        ginv = grp.inverse[g]
        block = smat @ np.conj(action[ginv])
        for a in range(dm):
            star[np.arange(dm) * ng + ginv, idx(a, g)] = block[:, a]

    unit = np.zeros(dim, dtype=complex)
    unit[np.arange(dm) * ng + grp.unit] = alg.unit

    data = StarAlgebraData(mult, star, unit, _regular_trace_of(mult))
    real = wedderburn_realize(data, tol, seed=seed)

    t_abs = np.zeros((dim, dim, dim), dtype=complex)
    for g in range(ng):
        t_abs[
            np.arange(dm)[:, None, None] * ng + g,
            np.arange(dm)[None, :, None] * ng + g,
            np.arange(dm)[None, None, :] * ng + g,
        ] = w.coproduct
    s_abs = np.zeros((dim, dim), dtype=complex)
    for g in range(ng):
        ginv = grp.inverse[g]
        block = w.antipode @ action[ginv]
        for a in range(dm):
            s_abs[np.arange(dm) * ng + ginv, idx(a, g)] = block[:, a]
    eps_abs = np.zeros(dim, dtype=complex)
    for g in range(ng):
        eps_abs[np.arange(dm) * ng + g] = w.counit

    return transported_weak_kac(
        real, t_abs, s_abs, eps_abs,
        meta={"kind": "crossed_product", "base": w, "action": action,
              "name": f"{w.meta.get('name', 'W')}#Z{ng}"},
    )


# ---------------------------------------------------------------------------
# the n^3-dimensional family
# ---------------------------------------------------------------------------


def cube_family(n: int) -> WeakKac:
    """Weak Kac algebra of dimension n^3 on the algebra (+)_k M_n, given by
    closed formulas on matrix units f[k]_ij (block k, row i, column j):

        Delta f[k]_ij = sum_r f[r]_ij (x) f[k-r]_{i+r, j+r}
        S f[k]_ij     = f[-k]_{j+k, i+k}
        eps f[k]_ij   = [k = 0]

    with all index arithmetic mod n.  Isomorphic to the crossed product of
    the principal groupoid function algebra by the cyclic shift.
    """
    alg = make_algebra((n,) * n)
    dim = n ** 3

    def idx(k, i, j):
        return alg.matrix_unit_index(k % n, i % n, j % n)

    t = np.zeros((dim, dim, dim), dtype=complex)
    s = np.zeros((dim, dim), dtype=complex)
    eps = np.zeros(dim, dtype=complex)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                a = idx(k, i, j)
                for r in range(n):
                    t[a, idx(r, i, j), idx(k - r, i + r, j + r)] = 1.0
                s[idx(-k, j + k, i + k), a] = 1.0
                if k == 0:
                    eps[a] = 1.0
    return WeakKac(alg, t, s, eps, meta={"kind": "cube_family", "n": n,
                                         "name": f"cube({n})"})


def cube_crossed_isomorphism(n: int, crossed: WeakKac) -> np.ndarray:
    """Canonical-coordinates matrix of the isomorphism from the crossed
    product of the principal groupoid by the cyclic shift onto cube_family(n):
    delta_(a,b) (x) alpha^s  ->  f[b-a]_{a-s, a}."""
    cube_alg = make_algebra((n,) * n)
    dm, ng = n * n, n
    pi_abs = np.zeros((n ** 3, dm * ng), dtype=complex)
    for a in range(n):
        for b in range(n):
            for s in range(n):
                pi_abs[
                    cube_alg.matrix_unit_index((b - a) % n, (a - s) % n, a),
                    (a * n + b) * ng + s,
                ] = 1.0
    return pi_abs @ crossed.meta["from_canonical"]


# ---------------------------------------------------------------------------
# sums and tensor products
# ---------------------------------------------------------------------------


def direct_sum(w1: WeakKac, w2: WeakKac) -> WeakKac:
    """Block-diagonal direct sum; the summand identities span a nontrivial
    hyper-center."""
    a1, a2 = w1.algebra, w2.algebra
    alg = make_algebra(a1.block_shape + a2.block_shape)
    d1, d2 = a1.dim, a2.dim
    t = np.zeros((d1 + d2,) * 3, dtype=complex)
    t[:d1, :d1, :d1] = w1.coproduct
    t[d1:, d1:, d1:] = w2.coproduct
    s = np.zeros((d1 + d2, d1 + d2), dtype=complex)
    s[:d1, :d1] = w1.antipode
    s[d1:, d1:] = w2.antipode
    eps = np.concatenate([w1.counit, w2.counit])
    name = f"{w1.meta.get('name', 'W1')}(+){w2.meta.get('name', 'W2')}"
    return WeakKac(alg, t, s, eps, meta={"kind": "direct_sum", "name": name,
                                         "parts": (w1, w2)})


def tensor_product(w1: WeakKac, w2: WeakKac) -> WeakKac:
    """Tensor product weak Kac algebra on M1 (x) M2 with the leg-exchanged
    coproduct, S1 (x) S2 and eps1 (x) eps2."""
    a1, a2 = w1.algebra, w2.algebra
    d1, d2 = a1.dim, a2.dim
    shape = tuple(
        p * q for p in a1.block_shape for q in a2.block_shape
    )
    alg = make_algebra(shape)
    nb2 = a2.nblocks
    perm = np.zeros(d1 * d2, dtype=int)
    for a in range(d1):
        i = int(a1.basis_block[a])
        r1 = int(a1.basis_row[a] - a1.row_offsets[i])
        c1 = int(a1.basis_col[a] - a1.row_offsets[i])
        for b in range(d2):
            j = int(a2.basis_block[b])
            r2 = int(a2.basis_row[b] - a2.row_offsets[j])
            c2 = int(a2.basis_col[b] - a2.row_offsets[j])
            block = i * nb2 + j
            dj = a2.block_shape[j]
            perm[a * d2 + b] = alg.matrix_unit_index(
                block, r1 * dj + r2, c1 * dj + c2
            )
    inv = np.argsort(perm)
    t12 = np.einsum("ace,bdf->abcdef", w1.coproduct, w2.coproduct, optimize=True)
    t12 = t12.reshape(d1 * d2, d1 * d2, d1 * d2)
    t = t12[np.ix_(inv, inv, inv)]
    s12 = np.kron(w1.antipode, w2.antipode)
    s = s12[np.ix_(inv, inv)]
    eps = np.kron(w1.counit, w2.counit)[inv]
    name = f"{w1.meta.get('name', 'W1')}(x){w2.meta.get('name', 'W2')}"
    return WeakKac(alg, t, s, eps, meta={"kind": "tensor_product", "name": name,
                                         "parts": (w1, w2)})
