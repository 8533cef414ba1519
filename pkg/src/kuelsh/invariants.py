"""Center, commutators, symmetrizing forms and Külshammer ideals.

For a symmetric algebra A over a field of characteristic p with
symmetrizing form Ψ, the spaces ``T_n = {x : x^(p^n) ∈ K(A)}`` contain the
commutator space K(A); their orthogonal complements form a descending
chain of ideals of Z(A) whose dimensions are derived invariants.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import (
    BadForm,
    ChainNotDescending,
    DegenerateForm,
    NotAnIdeal,
    NotCentralForm,
    NotCentralInput,
    NotSymmetricAlgebra,
    SearchExhausted,
    SocleMismatch,
    XiNotCentral,
)
from .linalg import BilinearForm, Subspace, kernel, orthogonal_complement, rank, semilinear_kernel, solve
from .presentation import Presentation
from .rewrite import AlgebraTable, dim_and_cartan

DEFAULT_N_MAX = 8
SWEEP_LIMIT = 2**16
RANDOM_ATTEMPTS = 1000
DEFAULT_SEED = 0


# ----------------------------------------------------------------------
# subspaces attached to the table


def _generators(t: AlgebraTable) -> list[int]:
    """Idempotents and arrows; they generate A as an algebra."""
    return [i for i, g in enumerate(t.grading) if g <= 1]


def center(t: AlgebraTable) -> Subspace:
    F, d, C = t.field, t.dim, t.mul
    gens = _generators(t)
    # row (g, k), column j: coefficient of b_k in b_j b_g - b_g b_j
    blocks = [F.vsub(C[:, g, :].T, C[g, :, :].T) for g in gens]
    m = np.vstack(blocks) if blocks else F.zeros((0, d))
    return kernel(F, m)


def commutator_subspace(t: AlgebraTable) -> Subspace:
    """Span of all [b_i, b_j].

    [xy, z] = [x, yz] + [y, zx], so commutators with generators suffice.
    """
    F, d, C = t.field, t.dim, t.mul
    rows = [F.vsub(C[g, :, :], C[:, g, :]) for g in _generators(t)]
    return Subspace.span(F, d, np.vstack(rows) if rows else F.zeros((0, d)))


def commutator_subspace_full(t: AlgebraTable) -> Subspace:
    F, d, C = t.field, t.dim, t.mul
    rows = [F.vsub(C[i, j], C[j, i]) for i in range(d) for j in range(i + 1, d)]
    return Subspace.span(F, d, np.array(rows, dtype=F.dtype) if rows else F.zeros((0, d)))


def radical(t: AlgebraTable) -> Subspace:
    F = t.field
    rows = [t.unit_vector(i) for i, g in enumerate(t.grading) if g >= 1]
    return Subspace.span(F, t.dim, np.array(rows, dtype=F.dtype) if rows else F.zeros((0, t.dim)))


def _annihilator(t: AlgebraTable, side: str) -> Subspace:
    F, d, C = t.field, t.dim, t.mul
    arrows = [i for i, g in enumerate(t.grading) if g == 1]
    if not arrows:
        return Subspace.full(F, d)
    if side == "left":  # x * a = 0
        m = np.vstack([C[:, a, :].T for a in arrows])
    else:  # a * x = 0
        m = np.vstack([C[a, :, :].T for a in arrows])
    return kernel(F, m)


def socle(t: AlgebraTable) -> Subspace:
    left = _annihilator(t, "left")
    right = _annihilator(t, "right")
    if left != right:
        raise SocleMismatch(
            f"left and right socles differ (dims {left.dim} and {right.dim}); the algebra is not selfinjective",
            left_dim=left.dim,
            right_dim=right.dim,
        )
    return left


# ----------------------------------------------------------------------
# symmetrizing forms


@dataclass(frozen=True, eq=False)
class SymmetrizingForm:
    psi: np.ndarray
    gram: BilinearForm
    origin: str = "given"

    def to_dict(self, t: AlgebraTable) -> dict:
        F = t.field
        return {
            "origin": self.origin,
            "values": {t.names[i]: F.format(int(c)) for i, c in enumerate(self.psi.tolist()) if c},
        }


def gram_matrix(t: AlgebraTable, psi) -> np.ndarray:
    F, d = t.field, t.dim
    psi = np.asarray(psi, dtype=F.dtype)
    return F.matmul(t.mul.reshape(d * d, d), psi[:, None]).reshape(d, d)


def form_validate(t: AlgebraTable, psi, origin: str = "given") -> SymmetrizingForm:
    F = t.field
    psi = np.asarray(psi, dtype=F.dtype)
    G = gram_matrix(t, psi)
    bad = np.argwhere(G != G.T)
    if len(bad):
        i, j = (int(x) for x in bad[0])
        a, b = t.names[i], t.names[j]
        raise NotCentralForm(
            f"Psi({a}*{b}) = {F.format(int(G[i, j]))} but Psi({b}*{a}) = {F.format(int(G[j, i]))}",
            witness=[a, b],
            values=[int(G[i, j]), int(G[j, i])],
        )
    ker = kernel(F, G)
    if ker.dim:
        v = ker.basis[0]
        raise DegenerateForm(
            f"Gram matrix is singular; {t.format_vector(v)} pairs to zero with everything",
            kernel_vector=[int(x) for x in v],
        )
    return SymmetrizingForm(psi, BilinearForm(F, G), origin)


def form_from_presentation(t: AlgebraTable, pres: Presentation) -> np.ndarray:
    """Ψ as a vector on the basis, from the presentation's ``form`` lines."""
    F = t.field
    if pres.form is None:
        raise BadForm("presentation has no form lines")
    psi = F.zeros(t.dim)
    sys = t.system
    for expr, coeff in pres.form:
        nf = sys.nf_path(sys.path_of(expr))
        if len(nf) != 1:
            raise BadForm(f"form path {expr} is not a basis path up to scalar")
        (m, c), = nf.items()
        psi[t.index[m]] = F.div(coeff.value, c)
    return psi


def central_forms(t: AlgebraTable) -> Subspace:
    """Linear forms vanishing on K(A), as coefficient vectors on the basis."""
    K = commutator_subspace(t)
    if K.dim == 0:
        return Subspace.full(t.field, t.dim)
    return kernel(t.field, K.basis)


def _seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("KUELSH_SEED")
    return int(env) if env else DEFAULT_SEED


def form_search(t: AlgebraTable, seed: int | None = None) -> SymmetrizingForm:
    F = t.field
    space = central_forms(t)
    m = space.dim
    if m == 0:
        raise NotSymmetricAlgebra("no nonzero linear form vanishes on the commutator space")
    # later RREF rows carry the socle duals; put them on the low digits so
    # the sweep reaches a nondegenerate combination early
    rows = space.basis[::-1]
    grams = [gram_matrix(t, r) for r in rows]

    def attempt(coeffs):
        psi = F.zeros(t.dim)
        G = F.zeros((t.dim, t.dim))
        for c, r, g in zip(coeffs, rows, grams):
            if c:
                psi = F.vadd(psi, F.vscale(c, r))
                G = F.vadd(G, F.vscale(c, g))
        if rank(F, G) == t.dim:
            return SymmetrizingForm(psi, BilinearForm(F, G), "search")
        return None

    if F.q**m <= SWEEP_LIMIT:
        for n in range(1, F.q**m):
            coeffs = [(n // F.q**i) % F.q for i in range(m)]
            found = attempt(coeffs)
            if found is not None:
                return found
        raise NotSymmetricAlgebra(
            f"none of the {F.q**m - 1} nonzero central forms is nondegenerate", candidates=F.q**m - 1
        )
    rng = np.random.default_rng(_seed(seed))
    for _ in range(RANDOM_ATTEMPTS):
        coeffs = [int(x) for x in rng.integers(0, F.q, size=m)]
        found = attempt(coeffs)
        if found is not None:
            return found
    raise SearchExhausted(
        f"{RANDOM_ATTEMPTS} random central forms were all degenerate; try a larger field extension",
        attempts=RANDOM_ATTEMPTS,
    )


def resolve_form(t: AlgebraTable, pres: Presentation | None, mode: str = "auto", seed: int | None = None) -> SymmetrizingForm:
    """The presentation's own form if it has one, else a searched one."""
    if mode == "search" or pres is None or pres.form is None:
        return form_search(t, seed)
    return form_validate(t, form_from_presentation(t, pres), origin="presentation")


# ----------------------------------------------------------------------
# Külshammer spaces


def _powers_mod(t: AlgebraTable, e: int, K: Subspace) -> np.ndarray:
    return np.array([K.reduce(t.power(t.unit_vector(i), e)) for i in range(t.dim)], dtype=t.field.dtype)


def t_space(t: AlgebraTable, n: int) -> Subspace:
    """T_n = {x : x^(p^n) ∈ K(A)}.

    x -> x^(p^n) mod K is additive and p^n-semilinear, so T_n is the root
    of a linear kernel.
    """
    K = commutator_subspace(t)
    if n == 0:
        return K
    e = t.field.p**n
    images = _powers_mod(t, e, K)
    return semilinear_kernel(t.field, images, e, ambient=t.dim)


@dataclass
class KuelshammerReport:
    ideals: list
    dims: list
    codims: list
    stable_index: int
    socle_dim: int
    inclusion_codims: tuple  # (dim T1^⊥ - dim soc, dim Z - dim T1^⊥)
    t_dims: list = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "dims": self.dims,
            "codims": self.codims,
            "stable_index": self.stable_index,
            "t_dims": self.t_dims,
            "socle_to_T1perp": self.inclusion_codims[0],
            "T1perp_to_center": self.inclusion_codims[1],
            "ideals": [s.to_lists() for s in self.ideals],
        }


def _is_ideal_of_center(t: AlgebraTable, ideal: Subspace, Z: Subspace) -> bool:
    for z in Z.basis:
        for w in ideal.basis:
            if not ideal.contains(t.multiply(z, w)):
                return False
    return True


def kuelshammer_sequence(t: AlgebraTable, form: SymmetrizingForm, n_max: int = DEFAULT_N_MAX) -> KuelshammerReport:
    Z = center(t)
    ideals, t_dims = [], []
    stable = n_max
    for n in range(n_max + 1):
        T = t_space(t, n)
        perp = orthogonal_complement(T, form.gram)
        if ideals and not ideals[-1].contains(perp):
            raise ChainNotDescending(f"T_{n}^perp is not contained in T_{n - 1}^perp")
        if not Z.contains(perp) or not _is_ideal_of_center(t, perp, Z):
            raise NotAnIdeal(f"T_{n}^perp is not an ideal of the center")
        ideals.append(perp)
        t_dims.append(T.dim)
        if n and perp == ideals[-2]:
            stable = n - 1
            break
    dims = [s.dim for s in ideals]
    soc = socle(t)
    t1 = dims[1] if len(dims) > 1 else dims[0]
    return KuelshammerReport(
        ideals=ideals,
        dims=dims,
        codims=[a - b for a, b in zip(dims, dims[1:])],
        stable_index=stable,
        socle_dim=soc.dim,
        inclusion_codims=(t1 - soc.dim, dims[0] - t1),
        t_dims=t_dims,
    )


def xi_map(t: AlgebraTable, form: SymmetrizingForm, n: int, z) -> np.ndarray:
    """The w with (w, x)^(p^n) = (z, x^(p^n)) for every basis element x."""
    F = t.field
    z = np.asarray(z, dtype=F.dtype)
    Z = center(t)
    if not Z.contains(z):
        raise NotCentralInput("xi_n is only defined on central elements")
    e = F.p**n
    G = form.gram.gram
    zG = F.matmul(z[None, :], G)[0]
    rhs = np.array([F.dot(zG, t.power(t.unit_vector(j), e)) for j in range(t.dim)], dtype=F.dtype)
    rhs = F.vfrob_inv(rhs, n)
    # (w, b_j) = sum_i w_i G[i, j], i.e. G^T w = rhs
    w = solve(F, G.T, rhs)
    if not Z.contains(w):
        raise XiNotCentral(f"xi_{n}({t.format_vector(z)}) = {t.format_vector(w)} is not central")
    return w


def xi_image(t: AlgebraTable, form: SymmetrizingForm, n: int) -> Subspace:
    Z = center(t)
    return Subspace.span(t.field, t.dim, np.array([xi_map(t, form, n, z) for z in Z.basis], dtype=t.field.dtype))


# ----------------------------------------------------------------------
# fingerprints


def fingerprint(
    t: AlgebraTable,
    form: SymmetrizingForm | None,
    n_max: int = DEFAULT_N_MAX,
    hh_degrees: tuple = (),
) -> dict:
    """Invariant bundle; ``form=None`` marks a non-symmetric algebra."""
    dim, cartan = dim_and_cartan(t)
    Z = center(t)
    fp = {
        "num_simples": t.vertex_count,
        "dim": dim,
        "cartan": cartan,
        "dim_center": Z.dim,
        "dim_commutator": commutator_subspace(t).dim,
        "symmetric": form is not None,
    }
    if form is not None:
        ks = kuelshammer_sequence(t, form, n_max)
        fp.update(
            dim_socle=ks.socle_dim,
            kuelshammer_dims=ks.dims,
            kuelshammer_codims=ks.codims,
            kuelshammer_inclusions=list(ks.inclusion_codims),
            stable_index=ks.stable_index,
            form_used=form.to_dict(t),
        )
    else:
        try:
            fp["dim_socle"] = socle(t).dim
        except SocleMismatch:
            fp["dim_socle"] = None
        fp.update(kuelshammer_dims=None, kuelshammer_codims=None, kuelshammer_inclusions=None, stable_index=None, form_used=None)
    if hh_degrees:
        from .hochschild import hh_dims

        for n, v in sorted(hh_dims(t, tuple(hh_degrees)).items()):
            fp[f"hh{n}_dim"] = v
    return fp


# derived invariants eligible as witnesses, in reporting priority;
# dim, Cartan matrix and socle dimension are not derived invariants
WITNESS_ORDER = ("num_simples", "dim_center", "kuelshammer_codims", "hh2_dim", "hh1_dim", "hh0_dim", "symmetric")


def compare_fingerprints(a: dict, b: dict) -> dict:
    agree, differ = [], []
    for key in WITNESS_ORDER:
        if key not in a or key not in b:
            continue
        va, vb = a[key], b[key]
        if va is None or vb is None:
            continue  # not computable on one side (e.g. no symmetrizing form)
        (agree if va == vb else differ).append({"invariant": key, "a": va, "b": vb})
    witness = differ[0]["invariant"] if differ else None
    verdict = (
        f"NOT DERIVED EQUIVALENT (witness: {witness})" if witness else "INDISTINGUISHABLE BY COMPUTED INVARIANTS"
    )
    return {
        "agree": [d["invariant"] for d in agree],
        "differ": differ,
        "witness": witness,
        "verdict": verdict,
    }


def sweep_all(F, d: int):
    """Every vector of F^d, in encoding order (brute-force oracles)."""
    for digits in itertools.product(range(F.q), repeat=d):
        yield np.array(digits[::-1], dtype=F.dtype)
