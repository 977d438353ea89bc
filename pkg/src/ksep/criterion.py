"""Two-copy permutation test for non-k-separability.

For a density matrix rho on n sites and a probe pair of product vectors
(phi1 = u_0 x ... x u_{n-1},  phi2 = v_0 x ... x v_{n-1}) the test value is

    lhs = |<phi1| rho |phi2>|
          - sum over partitions alpha of the sites into k blocks of
            ( prod over merged swap sets s of alpha of
              (<x1_s| rho |x1_s> <x2_s| rho |x2_s>)^multiplicity )^(1 / (2 k^2))

where (x1_s, x2_s) is the probe pair with the factors on the sites in s
exchanged between the two copies.  Every k-separable state keeps
lhs <= 0 for every product probe, so lhs > tolerance certifies that rho is
not k-separable (k = 2: genuine multipartite entanglement).

Each swapped expectation value is a bilinear form on the original D x D
matrix; the two-copy operators are never materialized here (see ``oracle``
for the explicit route).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionError, NormalizationError, NumericalError, ParameterError
from .linalg import UNIT_NORM_TOL, kron_all
from .partitions import KPartition, enumerate_kpartitions, swap_sets
from .states import DensityMatrix

DEFAULT_TOLERANCE = 1e-9
# diagonal expectation values this far below zero are treated as rounding
DIAG_CLAMP = -1e-12

NOT_K_SEPARABLE = "not_k_separable"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ProductProbe:
    """A pair of fully product vectors, stored as per-site unit factors."""

    u: tuple[np.ndarray, ...]
    v: tuple[np.ndarray, ...]

    def __post_init__(self):
        u = tuple(np.array(f, dtype=np.complex128) for f in self.u)
        v = tuple(np.array(f, dtype=np.complex128) for f in self.v)
        if not u or len(u) != len(v):
            raise DimensionError(
                f"probe copies have {len(u)} and {len(v)} factors, expected equal and >= 1"
            )
        for copy_name, factors in (("u", u), ("v", v)):
            for m, f in enumerate(factors):
                if f.ndim != 1 or f.shape[0] < 2:
                    raise DimensionError(
                        f"probe factor {copy_name}[{m}] has shape {f.shape}, expected a vector of dimension >= 2"
                    )
                norm = float(np.linalg.norm(f))
                if abs(norm - 1.0) > UNIT_NORM_TOL:
                    raise NormalizationError(
                        f"probe factor {copy_name}[{m}] has norm {norm!r}, expected 1"
                    )
        for m, (fu, fv) in enumerate(zip(u, v)):
            if fu.shape != fv.shape:
                raise DimensionError(
                    f"probe factors at site {m} have dimensions {fu.shape[0]} and {fv.shape[0]}"
                )
        for factors in (u, v):
            for f in factors:
                f.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.shape[0] for f in self.u)

    @property
    def site_count(self) -> int:
        return len(self.u)

    def copy_vectors(self) -> tuple[np.ndarray, np.ndarray]:
        """The two full probe vectors (Kronecker chains of the factors)."""
        return kron_all(self.u), kron_all(self.v)

    def swapped(self) -> "ProductProbe":
        """The probe with the two copies exchanged."""
        return ProductProbe(self.v, self.u)


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of one criterion evaluation.

    ``lhs`` equals ``first_term`` minus the sum of the partition terms, the
    terms listed in enumeration order of the partitions.
    """

    k: int
    lhs: float
    first_term: float
    partition_terms: tuple[tuple[KPartition, float], ...]
    probe: ProductProbe
    verdict: str
    tolerance: float

    @property
    def detected(self) -> bool:
        return self.verdict == NOT_K_SEPARABLE

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "lhs": self.lhs,
            "first_term": self.first_term,
            "terms": [
                {"partition": part.notation(), "value": value}
                for part, value in self.partition_terms
            ],
            "verdict": self.verdict,
            "tolerance": self.tolerance,
        }


def apply_swap(probe: ProductProbe, sites) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Factor lists of the probe after exchanging the copies on ``sites``.

    Returns (x1, x2) with x1[m] = v[m] on swapped sites and u[m] elsewhere,
    x2[m] the other way around.  Pure index bookkeeping, no arithmetic.
    """
    return _apply_swap(probe.u, probe.v, frozenset(sites))


def _apply_swap(u, v, sites):
    x1 = [v[m] if m in sites else u[m] for m in range(len(u))]
    x2 = [u[m] if m in sites else v[m] for m in range(len(u))]
    return x1, x2


def _clamped_diag(rho_mat: np.ndarray, x: np.ndarray) -> float:
    """<x| rho |x> as a real weight, clamping tiny negative rounding to 0."""
    value = complex(np.vdot(x, rho_mat @ x)).real
    if value < 0.0:
        if value < DIAG_CLAMP:
            raise NumericalError(
                f"diagonal expectation value {value!r} is more negative than "
                f"rounding allows ({DIAG_CLAMP}); the state is not positive semidefinite"
            )
        value = 0.0
    return value


def _diag_pair(rho_mat, u, v, sites, all_sites, cache):
    """Cached pair (<x1|rho|x1>, <x2|rho|x2>) for one swap set.

    The complementary set exchanges the roles of x1 and x2, so its pair is
    seeded into the cache for free.
    """
    pair = cache.get(sites)
    if pair is None:
        x1, x2 = _apply_swap(u, v, sites)
        pair = (
            _clamped_diag(rho_mat, kron_all(x1)),
            _clamped_diag(rho_mat, kron_all(x2)),
        )
        cache[sites] = pair
        cache.setdefault(all_sites - sites, (pair[1], pair[0]))
    return pair


def _partition_value(rho_mat, u, v, sets, k, all_sites, cache):
    """One partition term: multiplicity-weighted product of swapped diagonal
    pairs under the global 1/(2 k^2) root.

    The root is applied factor by factor, which is algebraically identical
    to rooting the full product but immune to underflow for large k.  A
    factor that is exactly zero short-circuits the whole term to zero.
    """
    root = 1.0 / (2.0 * k * k)
    value = 1.0
    for _i, _j, sites, mult in sets:
        a, b = _diag_pair(rho_mat, u, v, sites, all_sites, cache)
        if a == 0.0 or b == 0.0:
            return 0.0
        value *= (a * b) ** (mult * root)
    return value


@lru_cache(maxsize=64)
def _partition_plan(n: int, k: int):
    """All partitions of n sites into k blocks with their merged swap sets."""
    return tuple((part, tuple(swap_sets(part))) for part in enumerate_kpartitions(n, k))


def _first_value(rho_mat, u, v, cache):
    first = cache.get("first")
    if first is None:
        first = abs(complex(np.vdot(kron_all(u), rho_mat @ kron_all(v))))
        cache["first"] = first
    return first


def _first_and_terms(rho_mat, u, v, plan, cache=None):
    """Fast-path evaluation core shared by evaluate and the probe search."""
    if cache is None:
        cache = {}
    all_sites = frozenset(range(len(u)))
    first = _first_value(rho_mat, u, v, cache)
    terms = [
        _partition_value(rho_mat, u, v, sets, part.k, all_sites, cache)
        for part, sets in plan
    ]
    return first, terms


def _reduce_lhs(first: float, terms) -> float:
    # summation order is the enumeration order; keep it fixed so that the
    # serial and parallel paths agree bit for bit
    total = 0.0
    for t in terms:
        total += t
    return first - total


def _check_compatible(rho: DensityMatrix, probe: ProductProbe) -> None:
    if probe.dims != rho.dims:
        raise DimensionError(
            f"probe dims {probe.dims} do not match state dims {rho.dims}"
        )


def first_term(rho: DensityMatrix, probe: ProductProbe) -> float:
    """|<phi1| rho |phi2>|, the square root of the total-permutation term."""
    _check_compatible(rho, probe)
    return _first_value(rho.mat, probe.u, probe.v, {})


def partition_term(
    rho: DensityMatrix,
    probe: ProductProbe,
    partition: KPartition,
    cache: dict | None = None,
) -> float:
    """The subtracted term contributed by one partition.

    ``cache`` may be shared between calls that use the same (rho, probe) to
    avoid recomputing swapped diagonal weights; never share it across
    different states or probes.
    """
    _check_compatible(rho, probe)
    if partition.n != rho.site_count:
        raise DimensionError(
            f"partition covers {partition.n} sites, state has {rho.site_count}"
        )
    all_sites = frozenset(range(partition.n))
    return _partition_value(
        rho.mat,
        probe.u,
        probe.v,
        swap_sets(partition),
        partition.k,
        all_sites,
        {} if cache is None else cache,
    )


def _make_report(rho, probe, k, tolerance, plan, first, terms) -> CriterionReport:
    lhs = _reduce_lhs(first, terms)
    verdict = NOT_K_SEPARABLE if lhs > tolerance else INCONCLUSIVE
    return CriterionReport(
        k=k,
        lhs=lhs,
        first_term=first,
        partition_terms=tuple((part, t) for (part, _), t in zip(plan, terms)),
        probe=probe,
        verdict=verdict,
        tolerance=tolerance,
    )


def evaluate(
    rho: DensityMatrix,
    probe: ProductProbe,
    k: int,
    tolerance: float = DEFAULT_TOLERANCE,
    cache: dict | None = None,
) -> CriterionReport:
    """Evaluate the k-separability test for one state and probe.

    A verdict of ``not_k_separable`` requires lhs > tolerance; anything
    else is ``inconclusive`` (the test is one-sided).  ``rho`` is assumed
    to satisfy the density-matrix invariants; run ``rho.validate()`` first
    when the input is untrusted.  ``cache`` as in ``partition_term``.
    """
    _check_compatible(rho, probe)
    n = rho.site_count
    if not 1 <= k <= n:
        raise ParameterError(f"block count k={k} outside 1..{n}")
    plan = _partition_plan(n, k)
    first, terms = _first_and_terms(rho.mat, probe.u, probe.v, plan, cache)
    return _make_report(rho, probe, k, tolerance, plan, first, terms)


def evaluate_parallel(
    rho: DensityMatrix,
    probe: ProductProbe,
    k: int,
    tolerance: float = DEFAULT_TOLERANCE,
    max_workers: int | None = None,
) -> CriterionReport:
    """Same report as ``evaluate``, computing partition terms concurrently.

    Terms are reduced in enumeration order whatever the completion order,
    and each term is computed by the same scalar operations as in the
    serial path, so the result is identical bit for bit.
    """
    _check_compatible(rho, probe)
    n = rho.site_count
    if not 1 <= k <= n:
        raise ParameterError(f"block count k={k} outside 1..{n}")
    plan = _partition_plan(n, k)
    cache: dict = {}
    all_sites = frozenset(range(n))
    first = _first_value(rho.mat, probe.u, probe.v, cache)
    # worker threads share the cache; a racing recompute produces the same
    # floats, so the reduction below is schedule-independent
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        terms = list(
            pool.map(
                lambda entry: _partition_value(
                    rho.mat, probe.u, probe.v, entry[1], entry[0].k, all_sites, cache
                ),
                plan,
            )
        )
    return _make_report(rho, probe, k, tolerance, plan, first, terms)
