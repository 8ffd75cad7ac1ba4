"""Translation-commuting operators and their fiberwise block form.

An operator on signals commutes with all translations by the subgroup
exactly when its conjugate under the fiberization is block diagonal over
omega. The block family (one |C| x |C| matrix per omega, stored extended by
zero off the fiber subspace) is the range operator field; the functions here
detect the commutation property, extract and apply fields, synthesize
operators from fields, and verify the norm, Hilbert-Schmidt, trace, isometry,
self-adjointness and rank correspondences between the two pictures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fiberization import FiberContext, determining_function, zak, zak_matrix
from .groups import translation_matrix
from .spaces import RangeFunction, numerical_rank, space_from_range

COMMUTE_TOL = 1e-10
SOLVE_TOL = 1e-8
DOMAIN_TOL = 1e-10
STRUCT_TOL = 1e-9
NORM_TOL = 1e-8
HS_TOL = 1e-8
POSITIVITY_TOL = 1e-9


class NotTranslationPreservingError(Exception):
    """The operator does not commute with the subgroup translations."""

    def __init__(self, verdict: "CommutationVerdict"):
        self.verdict = verdict
        super().__init__(
            f"operator does not commute with translation by {verdict.witness_gamma!r} "
            f"(max commutator entry {verdict.residual:.3e} at {verdict.witness_entry})"
        )


class RangeSolveError(Exception):
    """No fiber field reproduces the operator on the space (off-fiber leakage)."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"fiber solve failed: off-fiber residual {residual:.3e}")


@dataclass(frozen=True)
class CommutationVerdict:
    preserving: bool
    residual: float
    witness_gamma: tuple | None = None
    witness_entry: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.preserving


@dataclass(frozen=True)
class MultiplicationVerdict:
    preserving: bool
    mode: str
    residual: float
    witness: object | None = None

    def __bool__(self) -> bool:
        return self.preserving


@dataclass(frozen=True, eq=False)
class RangeOperatorField:
    """One |C| x |C| matrix per omega, zero on the orthocomplement of its fiber."""

    matrices: tuple[np.ndarray, ...]

    @property
    def sup_operator_norm(self) -> float:
        return max((_opnorm(m) for m in self.matrices), default=0.0)


@dataclass
class VerificationReport:
    """Named residuals, values and verdicts for one identity check."""

    passed: bool
    verdicts: dict
    residuals: dict
    values: dict
    witness: object | None = None
    skipped: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "verdicts": {k: bool(v) for k, v in self.verdicts.items()},
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "values": _jsonable(self.values),
            "witness": _jsonable(self.witness),
            "skipped": list(self.skipped),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj


def _opnorm(mat: np.ndarray) -> float:
    if mat.size == 0:
        return 0.0
    return float(np.linalg.norm(mat, 2))


def as_operator(ctx: FiberContext, u) -> np.ndarray:
    """Coerce to a square complex matrix acting on signals."""
    mat = np.asarray(u, dtype=complex)
    n = ctx.group.size
    if mat.shape != (n, n):
        raise ValueError(f"operator has shape {mat.shape}, expected ({n}, {n})")
    if not np.isfinite(mat).all():
        raise ValueError("operator has non-finite entries")
    return mat


def check_translation_preserving(ctx: FiberContext, u, tol: float = COMMUTE_TOL) -> CommutationVerdict:
    """Max-entry commutator test against the subgroup generators.

    Commuting with the generators implies commuting with every subgroup
    element, so generators are the only probes needed.
    """
    u = as_operator(ctx, u)
    probes = ctx.gamma.generators or ctx.gamma.elements
    worst = 0.0
    for t in probes:
        tmat = translation_matrix(ctx.group, t)
        comm = u @ tmat - tmat @ u
        r = float(np.abs(comm).max())
        if r > tol:
            i, j = np.unravel_index(int(np.argmax(np.abs(comm))), comm.shape)
            return CommutationVerdict(False, r, t, (int(i), int(j)))
        worst = max(worst, r)
    return CommutationVerdict(True, worst)


def solve_range_field(ctx: FiberContext, u, rangefn: RangeFunction):
    """Fiberwise solve for the field of u on the given range function.

    Returns ``(field, residual)`` where residual is the largest off-fiber
    leakage of u applied to the fiber-supported canonical basis. A residual
    at rounding scale certifies that the field reproduces u on the space;
    a large residual means no field exists.
    """
    u = as_operator(ctx, u)
    basis = space_from_range(ctx, rangefn)
    matrices = [np.zeros((ctx.n_c, ctx.n_c), dtype=complex) for _ in range(ctx.n_omega)]
    residual = 0.0
    col = 0
    for wi, fiber_basis in enumerate(rangefn.bases):
        d = fiber_basis.shape[1]
        if d == 0:
            continue
        images = np.empty((ctx.n_c, d), dtype=complex)
        for j in range(d):
            fibers = zak(ctx, u @ basis[:, col])
            col += 1
            images[:, j] = fibers[wi]
            off = np.delete(fibers, wi, axis=0)
            if off.size:
                residual = max(residual, float(np.abs(off).max()))
        matrices[wi] = images @ fiber_basis.conj().T
    return RangeOperatorField(tuple(matrices)), residual


def extract_range_operator(
    ctx: FiberContext,
    u,
    rangefn: RangeFunction,
    tol: float = SOLVE_TOL,
    commute_tol: float = COMMUTE_TOL,
) -> RangeOperatorField:
    """The field R with zak(U f)(omega) = R(omega) zak(f)(omega) on the space.

    Raises :class:`NotTranslationPreservingError` (with the commutator
    witness) when u fails the commutation test, and :class:`RangeSolveError`
    when the fiber solve leaves an off-fiber residual above tol.
    """
    verdict = check_translation_preserving(ctx, u, tol=commute_tol)
    if not verdict:
        raise NotTranslationPreservingError(verdict)
    field, residual = solve_range_field(ctx, u, rangefn)
    if residual > tol:
        raise RangeSolveError(residual)
    return field


def synthesize_operator(
    ctx: FiberContext,
    field: RangeOperatorField,
    rangefn: RangeFunction,
    domain_tol: float = DOMAIN_TOL,
) -> np.ndarray:
    """Conjugate the block-diagonal field back to an operator on signals.

    The result acts as the field on the space of the range function and as
    zero on its orthocomplement; it always commutes with the subgroup
    translations, and extracting its field recovers the input.
    """
    n = ctx.group.size
    nc = ctx.n_c
    if len(field.matrices) != ctx.n_omega:
        raise ValueError(f"field has {len(field.matrices)} fibers, expected {ctx.n_omega}")
    big = np.zeros((n, n), dtype=complex)
    for wi, (mat, fiber_basis) in enumerate(zip(field.matrices, rangefn.bases)):
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (nc, nc):
            raise ValueError(f"fiber matrix {wi} has shape {mat.shape}, expected ({nc}, {nc})")
        proj = fiber_basis @ fiber_basis.conj().T
        leak = np.abs(mat @ (np.eye(nc) - proj)).max() if nc else 0.0
        if leak > domain_tol:
            raise ValueError(
                f"fiber matrix {wi} does not vanish on the fiber orthocomplement "
                f"(residual {leak:.3e})"
            )
        big[wi * nc : (wi + 1) * nc, wi * nc : (wi + 1) * nc] = mat
    zmat = zak_matrix(ctx)
    return zmat.conj().T @ big @ zmat


def multiplication_preserving_check(
    ctx: FiberContext,
    uhat,
    mode: str = "determining-set",
    tol: float = COMMUTE_TOL,
) -> MultiplicationVerdict:
    """Commutation test for an operator on the flattened fiber space.

    ``determining-set`` probes multiplication by every restricted character;
    ``full`` probes every omega-indicator, which is the same as requiring the
    matrix to be block diagonal over omega. The two modes agree on every
    input away from the tolerance edge.
    """
    n = ctx.group.size
    nc = ctx.n_c
    uhat = np.asarray(uhat, dtype=complex)
    if uhat.shape != (n, n):
        raise ValueError(f"fibered operator has shape {uhat.shape}, expected ({n}, {n})")
    if mode == "determining-set":
        worst = 0.0
        for t in ctx.gamma.elements:
            diag = np.repeat(determining_function(ctx, t), nc)
            comm = uhat * diag[None, :] - diag[:, None] * uhat
            r = float(np.abs(comm).max())
            if r > tol:
                return MultiplicationVerdict(False, mode, r, t)
            worst = max(worst, r)
        return MultiplicationVerdict(True, mode, worst)
    if mode == "full":
        worst = 0.0
        witness = None
        for wi in range(ctx.n_omega):
            for wj in range(ctx.n_omega):
                if wi == wj:
                    continue
                block = uhat[wi * nc : (wi + 1) * nc, wj * nc : (wj + 1) * nc]
                r = float(np.abs(block).max()) if block.size else 0.0
                if r > worst:
                    worst, witness = r, (wi, wj)
        if worst > tol:
            return MultiplicationVerdict(False, mode, worst, witness)
        return MultiplicationVerdict(True, mode, worst)
    raise ValueError(f"unknown mode {mode!r}; expected 'determining-set' or 'full'")


def norm_identity_report(
    ctx: FiberContext,
    u,
    field: RangeOperatorField,
    rangefn: RangeFunction,
    tol: float = NORM_TOL,
) -> VerificationReport:
    """Operator norm on the space versus the largest fiber operator norm."""
    u = as_operator(ctx, u)
    basis = space_from_range(ctx, rangefn)
    op_norm = _opnorm(u @ basis)
    fiber_norms = [_opnorm(mat @ fb) for mat, fb in zip(field.matrices, rangefn.bases)]
    fiber_max = max(fiber_norms, default=0.0)
    witness = int(np.argmax(fiber_norms)) if fiber_norms else None
    gap = abs(op_norm - fiber_max)
    ok = gap <= tol * max(1.0, op_norm)
    return VerificationReport(
        passed=ok,
        verdicts={"norm_identity": ok},
        residuals={"norm_gap": gap},
        values={
            "operator_norm": op_norm,
            "max_fiber_norm": fiber_max,
            "fiber_norms": fiber_norms,
        },
        witness=witness,
    )


def hs_trace_report(
    ctx: FiberContext,
    u,
    field: RangeOperatorField,
    rangefn: RangeFunction,
    frame,
    tol: float = HS_TOL,
    frame_tol: float = 1e-9,
    positivity_tol: float = POSITIVITY_TOL,
) -> VerificationReport:
    """Hilbert-Schmidt norm and trace computed three independent ways.

    The squared HS norm of u restricted to the space is computed entrywise,
    as a sum over the supplied Parseval frame, and as a sum of fiber HS norms.
    When u restricted to the space passes the positivity gate the trace is
    compared the same three ways; otherwise the trace clause is skipped and
    flagged. The frame must have frame operator equal to the projection onto
    the space (checked; this is what Parseval means here).
    """
    u = as_operator(ctx, u)
    basis = space_from_range(ctx, rangefn)
    frame = [np.asarray(y, dtype=complex) for y in frame]
    proj = basis @ basis.conj().T
    frame_op = np.zeros_like(proj)
    for y in frame:
        frame_op += np.outer(y, y.conj())
    frame_residual = float(np.abs(frame_op - proj).max())
    if frame_residual > frame_tol:
        raise ValueError(
            f"frame is not Parseval for the space (frame operator residual {frame_residual:.3e})"
        )

    restricted = u @ basis
    hs_entry = float(np.linalg.norm(restricted) ** 2)
    hs_frame = float(sum(np.linalg.norm(u @ y) ** 2 for y in frame))
    hs_fiber_terms = [
        float(np.linalg.norm(mat @ fb) ** 2) for mat, fb in zip(field.matrices, rangefn.bases)
    ]
    hs_fiber = float(sum(hs_fiber_terms))
    hs_values = {"entrywise": hs_entry, "frame": hs_frame, "fiber": hs_fiber}
    hs_res = _pairwise_gap(hs_values.values())
    hs_ok = hs_res <= tol * max(1.0, hs_entry)

    verdicts = {"hs_agree": hs_ok}
    residuals = {"hs_pairwise_gap": hs_res, "frame_operator": frame_residual}
    values: dict = {"hs_squared": hs_values, "hs_fiber_terms": hs_fiber_terms}
    skipped: tuple[str, ...] = ()

    compressed = basis.conj().T @ restricted
    herm_gap = float(np.abs(compressed - compressed.conj().T).max()) if compressed.size else 0.0
    lam_min = (
        float(np.linalg.eigvalsh((compressed + compressed.conj().T) / 2.0).min())
        if compressed.size
        else 0.0
    )
    positive = herm_gap <= positivity_tol and lam_min >= -positivity_tol * max(1.0, _opnorm(restricted))
    values["positivity"] = {"hermitian_gap": herm_gap, "min_eigenvalue": lam_min, "positive": positive}

    if positive:
        tr_basis = float(np.trace(compressed).real)
        tr_frame = float(sum(np.vdot(y, u @ y).real for y in frame))
        tr_fiber_terms = [
            float(np.trace(fb.conj().T @ mat @ fb).real)
            for mat, fb in zip(field.matrices, rangefn.bases)
        ]
        tr_fiber = float(sum(tr_fiber_terms))
        tr_values = {"basis": tr_basis, "frame": tr_frame, "fiber": tr_fiber}
        values["trace_fiber_terms"] = tr_fiber_terms
        tr_res = _pairwise_gap(tr_values.values())
        tr_ok = tr_res <= tol * max(1.0, abs(tr_basis))
        verdicts["trace_agree"] = tr_ok
        residuals["trace_pairwise_gap"] = tr_res
        values["trace"] = tr_values
    else:
        skipped = ("trace",)

    return VerificationReport(
        passed=all(verdicts.values()),
        verdicts=verdicts,
        residuals=residuals,
        values=values,
        skipped=skipped,
    )


def _pairwise_gap(values) -> float:
    vals = list(values)
    return max(
        (abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1 :]),
        default=0.0,
    )


def structural_flags(
    ctx: FiberContext,
    u,
    field: RangeOperatorField,
    rangefn: RangeFunction,
    tol: float = STRUCT_TOL,
) -> VerificationReport:
    """Isometry, self-adjointness and rank compared between the two pictures.

    The report passes when the operator-level and fiber-level verdicts agree
    (both ways of each biconditional) and the rank on the space equals the
    sum of the fiber ranks.
    """
    u = as_operator(ctx, u)
    basis = space_from_range(ctx, rangefn)
    d = basis.shape[1]
    restricted = u @ basis

    gram = restricted.conj().T @ restricted
    iso_res_op = float(np.abs(gram - np.eye(d)).max()) if d else 0.0
    iso_fiber_res = 0.0
    for mat, fb in zip(field.matrices, rangefn.bases):
        dw = fb.shape[1]
        if dw == 0:
            continue
        rb = mat @ fb
        iso_fiber_res = max(iso_fiber_res, float(np.abs(rb.conj().T @ rb - np.eye(dw)).max()))
    iso_op = iso_res_op <= tol
    iso_fib = iso_fiber_res <= tol

    compressed = basis.conj().T @ restricted
    sa_res_op = float(np.abs(compressed - compressed.conj().T).max()) if d else 0.0
    sa_fiber_res = 0.0
    for mat, fb in zip(field.matrices, rangefn.bases):
        if fb.shape[1] == 0:
            continue
        block = fb.conj().T @ mat @ fb
        sa_fiber_res = max(sa_fiber_res, float(np.abs(block - block.conj().T).max()))
    sa_op = sa_res_op <= tol
    sa_fib = sa_fiber_res <= tol

    rank_op = numerical_rank(restricted)
    fiber_ranks = [numerical_rank(mat @ fb) for mat, fb in zip(field.matrices, rangefn.bases)]
    rank_fib = int(sum(fiber_ranks))

    verdicts = {
        "isometry_operator": iso_op,
        "isometry_fibers": iso_fib,
        "isometry_agree": iso_op == iso_fib,
        "selfadjoint_operator": sa_op,
        "selfadjoint_fibers": sa_fib,
        "selfadjoint_agree": sa_op == sa_fib,
        "rank_agree": rank_op == rank_fib,
    }
    return VerificationReport(
        passed=verdicts["isometry_agree"] and verdicts["selfadjoint_agree"] and verdicts["rank_agree"],
        verdicts=verdicts,
        residuals={
            "isometry_operator": iso_res_op,
            "isometry_fibers": iso_fiber_res,
            "selfadjoint_operator": sa_res_op,
            "selfadjoint_fibers": sa_fiber_res,
        },
        values={"rank_operator": rank_op, "rank_fiber_sum": rank_fib, "fiber_ranks": fiber_ranks},
    )
