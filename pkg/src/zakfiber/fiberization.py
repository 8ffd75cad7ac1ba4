"""Fiberization of L2(G) over a transversal of the dual quotient.

The transform Z maps a signal f on G to a family of fibers, one complex
vector of length |C| per omega in Omega, where Omega is a transversal of
the dual group modulo the annihilator of Gamma and C is a transversal of
G modulo Gamma:

    Zf(omega)(c) = |Gamma|^(-1/2) * sum_{t in Gamma} f(c + t) * pairing(t, omega)

With counting measure (weight 1 per point) on every index set this is a
unitary map from C^|G| onto the |Omega| x |C| fiber space, and it turns
translation by t in Gamma into multiplication by the character values
pairing(t, omega).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import (
    GroupSpec,
    Subgroup,
    Transversal,
    annihilator,
    as_signal,
    pairing,
    transversal,
)

REL_TOL = 1e-10
ABS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FiberContext:
    """The stage on which the fiberization lives.

    Bundles the subgroup Gamma, its annihilator, the two transversals and the
    normalization constant, plus precomputed index/phase tables so that the
    transform is a couple of matrix products.
    """

    group: GroupSpec
    gamma: Subgroup
    gamma_star: Subgroup
    omega: Transversal
    c_section: Transversal
    normalization: float
    _phase: np.ndarray = field(init=False, repr=False)
    _coset_plus: np.ndarray = field(init=False, repr=False)
    _gamma_index: dict = field(init=False, repr=False)
    _zak_matrix: list = field(init=False, repr=False)

    def __post_init__(self) -> None:
        g = self.group
        gamma_elts = self.gamma.elements
        phase = np.array(
            [[pairing(g, t, w) for t in gamma_elts] for w in self.omega.reps],
            dtype=complex,
        )
        coset_plus = np.array(
            [[g.index(g.add(c, t)) for t in gamma_elts] for c in self.c_section.reps]
        )
        object.__setattr__(self, "_phase", phase)
        object.__setattr__(self, "_coset_plus", coset_plus)
        object.__setattr__(self, "_gamma_index", {t: i for i, t in enumerate(gamma_elts)})
        object.__setattr__(self, "_zak_matrix", [None])

    @property
    def n_omega(self) -> int:
        return self.omega.size

    @property
    def n_c(self) -> int:
        return self.c_section.size

    def fiber_shape(self) -> tuple[int, int]:
        return (self.n_omega, self.n_c)


def fiber_context(g: GroupSpec, gamma: Subgroup) -> FiberContext:
    """Compute the annihilator and both transversals for a subgroup of g."""
    gamma_star = annihilator(g, gamma)
    omega = transversal(g, gamma_star)
    c_section = transversal(g, gamma)
    ctx = FiberContext(
        group=g,
        gamma=gamma,
        gamma_star=gamma_star,
        omega=omega,
        c_section=c_section,
        normalization=1.0 / np.sqrt(gamma.size),
    )
    if omega.size != gamma.size or omega.size * c_section.size != g.size:
        raise RuntimeError("transversal sizes violate the quotient counting identity")
    # section property: restricting the |Gamma| chosen characters to Gamma must
    # give all characters of Gamma exactly once, i.e. the rows of the phase
    # table are orthogonal with squared norm |Gamma|.
    gram = ctx._phase @ ctx._phase.conj().T
    if not np.allclose(gram, gamma.size * np.eye(omega.size), atol=1e-9):
        raise RuntimeError("omega transversal is not a section of the dual quotient")
    return ctx


def zak(ctx: FiberContext, f) -> np.ndarray:
    """Fiberize a signal; rows are fibers indexed by omega, columns by C."""
    f = as_signal(ctx.group, f)
    samples = f[ctx._coset_plus]  # (|C|, |Gamma|)
    return ctx.normalization * (ctx._phase @ samples.T)


def as_fibered(ctx: FiberContext, fibers) -> np.ndarray:
    """Coerce to a complex |Omega| x |C| fiber array."""
    arr = np.asarray(fibers, dtype=complex)
    if arr.shape != ctx.fiber_shape():
        raise ValueError(f"fibered vector has shape {arr.shape}, expected {ctx.fiber_shape()}")
    return arr


def zak_inverse(ctx: FiberContext, fibers) -> np.ndarray:
    """Invert the fiberization; exact inverse of :func:`zak` up to rounding."""
    fibers = as_fibered(ctx, fibers)
    vals = ctx.normalization * (fibers.T @ ctx._phase.conj())  # (|C|, |Gamma|)
    out = np.empty(ctx.group.size, dtype=complex)
    out[ctx._coset_plus] = vals
    return out


def zak_matrix(ctx: FiberContext) -> np.ndarray:
    """The unitary matrix of the fiberization, rows flattened as omega*|C| + c.

    Cached on the context; do not mutate the returned array.
    """
    if ctx._zak_matrix[0] is None:
        n = ctx.group.size
        nc = ctx.n_c
        mat = np.zeros((n, n), dtype=complex)
        rows = np.arange(nc)[:, None]
        for wi in range(ctx.n_omega):
            block = mat[wi * nc : (wi + 1) * nc]
            block[rows, ctx._coset_plus] = ctx.normalization * ctx._phase[wi][None, :]
        ctx._zak_matrix[0] = mat
    return ctx._zak_matrix[0]


def determining_function(ctx: FiberContext, gamma_elt) -> np.ndarray:
    """Values of the character of gamma_elt on the omega transversal.

    These |Gamma| functions span all complex functions on Omega, which is the
    finite counterpart of being a determining set.
    """
    t = ctx.group.validate(gamma_elt)
    if t not in ctx.gamma:
        raise ValueError(f"{t!r} is not a member of the translation subgroup")
    return ctx._phase[:, ctx._gamma_index[t]].copy()
