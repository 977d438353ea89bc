"""Multipartite state containers, reference families and JSON persistence.

Sites are ordered big-endian: site 0 is the most significant factor of the
flat index, so for qubits the basis label of ``|b0 b1 ... b_{n-1}>`` is the
integer with binary digits b0 b1 ... b_{n-1}.
"""

from __future__ import annotations

import json
import math
import string
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    FormatError,
    NormalizationError,
    ParameterError,
    StateValidationError,
    WeightError,
)
from .linalg import (
    DEFAULT_DENSITY_TOL,
    UNIT_NORM_TOL,
    DensityDiagnostics,
    check_density,
    kron_all,
)

WEIGHT_SUM_TOL = 1e-12


def _checked_dims(dims) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out:
        raise ParameterError("need at least one site")
    if any(d < 2 for d in out):
        raise ParameterError(f"every site dimension must be >= 2, got {out}")
    return out


@dataclass(frozen=True)
class DensityMatrix:
    """A density matrix together with its per-site dimensions.

    Construction checks shapes and finiteness only; the hermiticity, trace
    and positivity invariants are verified on demand via ``diagnostics`` or
    ``validate`` because the eigensolve is costly for large systems.
    """

    dims: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self):
        dims = _checked_dims(self.dims)
        object.__setattr__(self, "dims", dims)
        mat = np.array(self.mat, dtype=np.complex128)
        d = math.prod(dims)
        if mat.shape != (d, d):
            raise DimensionError(
                f"matrix shape {mat.shape} does not match dims {dims} (D={d})"
            )
        if not np.all(np.isfinite(mat)):
            raise ParameterError("matrix entries must be finite")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def site_count(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def diagnostics(self, tol: float = DEFAULT_DENSITY_TOL) -> DensityDiagnostics:
        return check_density(self.mat, tol)

    def validate(self, tol: float = DEFAULT_DENSITY_TOL) -> None:
        """Raise StateValidationError unless this is a density matrix within tol."""
        diag = self.diagnostics(tol)
        if not diag.accepted:
            raise StateValidationError(
                "not a valid density matrix: "
                f"hermiticity defect {diag.hermiticity_defect:.3e}, "
                f"trace defect {diag.trace_defect:.3e}, "
                f"min eigenvalue {diag.min_eigenvalue:.3e} (tol {tol:.1e})",
                diagnostics=diag,
            )


@dataclass(frozen=True)
class PureState:
    """A unit vector together with its per-site dimensions."""

    dims: tuple[int, ...]
    vec: np.ndarray

    def __post_init__(self):
        dims = _checked_dims(self.dims)
        object.__setattr__(self, "dims", dims)
        vec = np.array(self.vec, dtype=np.complex128)
        d = math.prod(dims)
        if vec.shape != (d,):
            raise DimensionError(
                f"vector shape {vec.shape} does not match dims {dims} (D={d})"
            )
        if not np.all(np.isfinite(vec)):
            raise ParameterError("vector entries must be finite")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise NormalizationError(f"state vector norm {norm!r} is not 1")
        vec.setflags(write=False)
        object.__setattr__(self, "vec", vec)

    @property
    def site_count(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.vec.shape[0]

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(self.dims, np.outer(self.vec, self.vec.conj()))


def ghz(n: int, d: int = 2) -> PureState:
    """Uniform superposition of the n-fold repeated basis labels 0..d-1."""
    if n < 2:
        raise ParameterError(f"need at least two sites, got n={n}")
    if d < 2:
        raise ParameterError(f"site dimension must be >= 2, got d={d}")
    dim = d**n
    vec = np.zeros(dim, dtype=np.complex128)
    amp = 1.0 / math.sqrt(d)
    stride = (dim - 1) // (d - 1)  # index of |j j ... j> is j * (d^n-1)/(d-1)
    for j in range(d):
        vec[j * stride] = amp
    return PureState((d,) * n, vec)


def w_state(n: int) -> PureState:
    """Single-excitation superposition on n qubits."""
    if n < 2:
        raise ParameterError(f"need at least two sites, got n={n}")
    vec = np.zeros(2**n, dtype=np.complex128)
    amp = 1.0 / math.sqrt(n)
    for site in range(n):
        vec[1 << (n - 1 - site)] = amp  # site 0 is most significant
    return PureState((2,) * n, vec)


def product_pure(site_vecs) -> PureState:
    """Product state from per-site unit vectors."""
    factors = [np.asarray(v, dtype=np.complex128) for v in site_vecs]
    if not factors:
        raise ParameterError("need at least one site vector")
    dims = []
    for m, f in enumerate(factors):
        if f.ndim != 1:
            raise DimensionError(f"site {m} factor has shape {f.shape}, expected a vector")
        norm = float(np.linalg.norm(f))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise NormalizationError(f"site {m} factor norm {norm!r} is not 1")
        dims.append(f.shape[0])
    return PureState(tuple(dims), kron_all(factors))


def partition_product_pure(dims, blocks, block_vecs) -> PureState:
    """Pure state that factorizes across the given site partition.

    ``blocks`` are disjoint site tuples covering 0..n-1; ``block_vecs[i]``
    is a unit vector on the tensor factor of ``blocks[i]``, its axes ordered
    as the sites appear in the block tuple.
    """
    dims = _checked_dims(dims)
    n = len(dims)
    if n > len(string.ascii_lowercase):
        raise ParameterError(f"at most {len(string.ascii_lowercase)} sites supported")
    sites = [s for block in blocks for s in block]
    if sorted(sites) != list(range(n)):
        raise ParameterError("blocks must partition the sites 0..n-1")
    if len(blocks) != len(block_vecs):
        raise DimensionError(
            f"{len(blocks)} blocks but {len(block_vecs)} block vectors"
        )
    tensors = []
    for idx, (block, vec) in enumerate(zip(blocks, block_vecs)):
        arr = np.asarray(vec, dtype=np.complex128).reshape(-1)
        want = math.prod(dims[m] for m in block)
        if arr.shape[0] != want:
            raise DimensionError(
                f"block {idx} vector has dimension {arr.shape[0]}, expected {want}"
            )
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise NormalizationError(f"block {idx} vector norm {norm!r} is not 1")
        tensors.append(arr.reshape([dims[m] for m in block]))
    letters = string.ascii_lowercase
    subscripts = (
        ",".join("".join(letters[m] for m in block) for block in blocks)
        + "->"
        + letters[:n]
    )
    full = np.einsum(subscripts, *tensors).reshape(-1)
    return PureState(dims, full)


def mix(components) -> DensityMatrix:
    """Convex mixture of density matrices from (weight, state) pairs."""
    comps = list(components)
    if not comps:
        raise WeightError("mixture needs at least one component")
    weights = [float(w) for w, _ in comps]
    states = [s for _, s in comps]
    for w in weights:
        if w < 0.0:
            raise WeightError(f"negative weight {w!r}")
    total = math.fsum(weights)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise WeightError(f"weights sum to {total!r}, expected 1")
    dims = states[0].dims
    for s in states[1:]:
        if s.dims != dims:
            raise DimensionError(f"mixture mixes dims {dims} and {s.dims}")
    acc = np.zeros_like(states[0].mat)
    for w, s in zip(weights, states):
        acc = acc + w * s.mat
    return DensityMatrix(dims, acc)


def maximally_mixed(dims) -> DensityMatrix:
    dims = _checked_dims(dims)
    d = math.prod(dims)
    return DensityMatrix(dims, np.eye(d, dtype=np.complex128) / d)


def white_noise(target: DensityMatrix, p: float) -> DensityMatrix:
    """Interpolate between the maximally mixed state (p=0) and target (p=1)."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"noise parameter p={p!r} outside [0, 1]")
    d = target.dim
    mat = p * target.mat + ((1.0 - p) / d) * np.eye(d, dtype=np.complex128)
    return DensityMatrix(target.dims, mat)


def random_pure(dims, rng: np.random.Generator) -> PureState:
    """Haar-like random unit vector: normalized standard complex Gaussians."""
    dims = _checked_dims(dims)
    d = math.prod(dims)
    raw = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(dims, raw / np.linalg.norm(raw))


def random_product_pure(dims, rng: np.random.Generator) -> PureState:
    """Sitewise random unit vectors, combined into a product state."""
    dims = _checked_dims(dims)
    factors = []
    for d in dims:
        raw = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        factors.append(raw / np.linalg.norm(raw))
    return product_pure(factors)


def random_density(dims, rng: np.random.Generator) -> DensityMatrix:
    """Full-rank random density matrix G G^dagger / tr, G complex Gaussian."""
    dims = _checked_dims(dims)
    d = math.prod(dims)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    mat = g @ g.conj().T
    mat /= np.trace(mat).real
    return DensityMatrix(dims, mat)


# --- JSON persistence -------------------------------------------------------
#
# {"dims": [2, 2], "matrix": [[[re, im], ...], ...]}   dense density matrix
# {"dims": [2, 2], "vector": [[re, im], ...]}          pure state, stored as
#                                                      its outer product on load
# Floats are written via Python's repr, the shortest round-trip decimal, so
# save followed by load reproduces the matrix bit for bit.


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def save_state(state: DensityMatrix, path) -> None:
    """Write a density matrix as JSON (see the format note above)."""
    doc = {
        "dims": list(state.dims),
        "matrix": [[_pair(z) for z in row] for row in state.mat],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def _parse_pair(entry, where: str) -> complex:
    if (
        not isinstance(entry, (list, tuple))
        or len(entry) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
    ):
        raise FormatError(f"{where}: expected a [re, im] pair, got {entry!r}")
    return complex(float(entry[0]), float(entry[1]))


def load_state(path, tol: float = DEFAULT_DENSITY_TOL) -> DensityMatrix:
    """Read a state file, validate it and return the density matrix.

    Raises FormatError for anything that fails to parse and
    StateValidationError (carrying diagnostics) when the parsed matrix is
    not a density matrix within ``tol``.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    except OSError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: top level must be an object")
    dims_field = doc.get("dims")
    if (
        not isinstance(dims_field, list)
        or not dims_field
        or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims_field)
    ):
        raise FormatError(f"{path}: field 'dims' must be a nonempty list of integers")
    if any(d < 2 for d in dims_field):
        raise FormatError(f"{path}: field 'dims' entries must be >= 2, got {dims_field}")
    dims = tuple(dims_field)
    d = math.prod(dims)

    if "matrix" in doc:
        rows = doc["matrix"]
        if not isinstance(rows, list) or len(rows) != d:
            got = len(rows) if isinstance(rows, list) else type(rows).__name__
            raise FormatError(f"{path}: field 'matrix' must be a {d}x{d} array, got {got} rows")
        mat = np.empty((d, d), dtype=np.complex128)
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != d:
                raise FormatError(f"{path}: matrix row {i} must have {d} entries")
            for j, entry in enumerate(row):
                mat[i, j] = _parse_pair(entry, f"{path}: matrix entry ({i}, {j})")
    elif "vector" in doc:
        entries = doc["vector"]
        if not isinstance(entries, list) or len(entries) != d:
            got = len(entries) if isinstance(entries, list) else type(entries).__name__
            raise FormatError(f"{path}: field 'vector' must have {d} entries, got {got}")
        vec = np.empty(d, dtype=np.complex128)
        for i, entry in enumerate(entries):
            vec[i] = _parse_pair(entry, f"{path}: vector entry {i}")
        mat = np.outer(vec, vec.conj())
    else:
        raise FormatError(f"{path}: expected a 'matrix' or 'vector' field")

    diag = check_density(mat, tol)
    if not diag.accepted:
        raise StateValidationError(
            f"{path}: not a valid density matrix: "
            f"hermiticity defect {diag.hermiticity_defect:.3e}, "
            f"trace defect {diag.trace_defect:.3e}, "
            f"min eigenvalue {diag.min_eigenvalue:.3e} (tol {tol:.1e})",
            diagnostics=diag,
        )
    return DensityMatrix(dims, mat)
