"""JSON schemas for the external interfaces.

Complex numbers are always serialized as ``[re, im]`` pairs, matrices
row-major, and group elements as integer arrays in enumeration order.
"""

from __future__ import annotations

import numpy as np

from .fiberization import FiberContext, as_fibered
from .groups import GroupSpec, Subgroup, make_group, subgroup_from_generators
from .operators import RangeOperatorField, as_operator
from .spaces import RangeFunction


def complex_to_pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def pair_to_complex(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ValueError(f"expected a [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def matrix_to_json(mat: np.ndarray) -> list:
    return [[complex_to_pair(z) for z in row] for row in np.asarray(mat, dtype=complex)]


def matrix_from_json(rows, shape=None) -> np.ndarray:
    if not isinstance(rows, list):
        raise ValueError("matrix must be a list of rows")
    mat = np.array([[pair_to_complex(z) for z in row] for row in rows], dtype=complex)
    if mat.ndim == 1:  # empty matrix edge: shape it explicitly
        mat = mat.reshape(0, 0)
    if shape is not None and mat.shape != tuple(shape):
        raise ValueError(f"matrix has shape {mat.shape}, expected {tuple(shape)}")
    return mat


def group_spec_to_json(g: GroupSpec, gamma: Subgroup) -> dict:
    return {
        "orders": list(g.orders),
        "gamma_generators": [list(t) for t in gamma.generators],
    }


def group_spec_from_json(obj) -> tuple[GroupSpec, Subgroup]:
    """Parse ``{"orders": [...], "gamma_generators": [[...], ...]}``."""
    if not isinstance(obj, dict):
        raise ValueError("group spec must be a JSON object")
    if "orders" not in obj:
        raise ValueError("group spec is missing 'orders'")
    g = make_group(obj["orders"])
    gens = obj.get("gamma_generators", [])
    if not isinstance(gens, list):
        raise ValueError("'gamma_generators' must be a list of element arrays")
    gamma = subgroup_from_generators(g, [tuple(t) for t in gens])
    return g, gamma


def fibered_to_json(ctx: FiberContext, fibers) -> dict:
    fibers = as_fibered(ctx, fibers)
    return {
        "omega_reps": [list(w) for w in ctx.omega.reps],
        "c_reps": [list(c) for c in ctx.c_section.reps],
        "fibers": [[complex_to_pair(z) for z in row] for row in fibers],
    }


def fibered_from_json(ctx: FiberContext, obj) -> np.ndarray:
    if not isinstance(obj, dict) or "fibers" not in obj:
        raise ValueError("fibered vector JSON must contain 'fibers'")
    if [tuple(w) for w in obj.get("omega_reps", [])] != list(ctx.omega.reps):
        raise ValueError("omega_reps do not match the context")
    if [tuple(c) for c in obj.get("c_reps", [])] != list(ctx.c_section.reps):
        raise ValueError("c_reps do not match the context")
    fibers = np.array(
        [[pair_to_complex(z) for z in row] for row in obj["fibers"]], dtype=complex
    )
    return as_fibered(ctx, fibers)


def range_function_to_json(rangefn: RangeFunction) -> dict:
    return {
        "dims": list(rangefn.dims),
        "bases": [matrix_to_json(b) for b in rangefn.bases],
    }


def range_function_from_json(ctx: FiberContext, obj, ortho_tol: float = 1e-10) -> RangeFunction:
    if not isinstance(obj, dict) or "bases" not in obj or "dims" not in obj:
        raise ValueError("range function JSON must contain 'dims' and 'bases'")
    dims = [int(d) for d in obj["dims"]]
    if len(dims) != ctx.n_omega:
        raise ValueError(f"range function has {len(dims)} fibers, expected {ctx.n_omega}")
    bases = []
    for wi, (d, rows) in enumerate(zip(dims, obj["bases"])):
        mat = matrix_from_json(rows)
        if mat.size == 0:
            mat = np.zeros((ctx.n_c, 0), dtype=complex)
        if mat.shape != (ctx.n_c, d):
            raise ValueError(f"fiber {wi} basis has shape {mat.shape}, expected ({ctx.n_c}, {d})")
        if d and np.abs(mat.conj().T @ mat - np.eye(d)).max() > ortho_tol:
            raise ValueError(f"fiber {wi} basis columns are not orthonormal")
        bases.append(mat)
    return RangeFunction(tuple(bases))


def operator_to_json(mat) -> dict:
    return {"matrix": matrix_to_json(np.asarray(mat, dtype=complex))}


def operator_from_json(ctx: FiberContext, obj) -> np.ndarray:
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ValueError("operator JSON must contain 'matrix'")
    return as_operator(ctx, matrix_from_json(obj["matrix"]))


def field_to_json(field: RangeOperatorField, rangefn: RangeFunction) -> dict:
    """Field serialization mirrors the range function layout and adds the
    per-omega matrices."""
    out = range_function_to_json(rangefn)
    out["matrices"] = [matrix_to_json(m) for m in field.matrices]
    return out


def field_from_json(ctx: FiberContext, obj) -> tuple[RangeOperatorField, RangeFunction]:
    rangefn = range_function_from_json(ctx, obj)
    if "matrices" not in obj:
        raise ValueError("field JSON must contain 'matrices'")
    mats = []
    for wi, rows in enumerate(obj["matrices"]):
        mat = matrix_from_json(rows, shape=(ctx.n_c, ctx.n_c))
        mats.append(mat)
    if len(mats) != ctx.n_omega:
        raise ValueError(f"field has {len(mats)} fibers, expected {ctx.n_omega}")
    return RangeOperatorField(tuple(mats)), rangefn
