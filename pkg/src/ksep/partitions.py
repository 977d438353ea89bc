"""Partitions of site indices into a fixed number of nonempty blocks.

A partition of ``n`` sites into ``k`` blocks is encoded as a restricted
growth string: entry ``m`` is the block label of site ``m``, labels appear
in first-use order starting at 0, so the encoding is canonical and two
partitions are equal iff their strings are equal.  Enumeration is
lexicographic in the string, which makes every listing deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import ParameterError

# a swap set is just the set of site indices exchanged between the two copies
SwapSet = frozenset


@dataclass(frozen=True)
class KPartition:
    """A partition of sites 0..n-1 into exactly k nonempty blocks."""

    n: int
    k: int
    rgs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rgs", tuple(int(x) for x in self.rgs))
        if self.n < 1:
            raise ParameterError(f"need at least one site, got n={self.n}")
        if not 1 <= self.k <= self.n:
            raise ParameterError(f"block count k={self.k} outside 1..{self.n}")
        if len(self.rgs) != self.n:
            raise ParameterError(
                f"label string has length {len(self.rgs)}, expected n={self.n}"
            )
        top = -1
        for pos, label in enumerate(self.rgs):
            if label < 0 or label > top + 1:
                raise ParameterError(
                    f"not a restricted growth string: label {label} at position {pos}"
                )
            if label > top:
                top = label
        if top != self.k - 1:
            raise ParameterError(f"string uses {top + 1} blocks, expected k={self.k}")

    def blocks(self) -> list[tuple[int, ...]]:
        """Blocks as site tuples, each ascending, ordered by first occurrence."""
        out: list[list[int]] = [[] for _ in range(self.k)]
        for site, label in enumerate(self.rgs):
            out[label].append(site)
        return [tuple(block) for block in out]

    def notation(self) -> str:
        """Compact block notation, e.g. ``"0,1|2"``."""
        return "|".join(",".join(str(s) for s in block) for block in self.blocks())

    @classmethod
    def from_blocks(cls, blocks) -> "KPartition":
        """Build from explicit blocks (any order); sites must cover 0..n-1."""
        sites = [s for block in blocks for s in block]
        n = len(sites)
        if sorted(sites) != list(range(n)):
            raise ParameterError("blocks must partition the sites 0..n-1")
        label_of = {}
        for idx, block in enumerate(blocks):
            if not block:
                raise ParameterError("blocks must be nonempty")
            for s in block:
                label_of[s] = idx
        # relabel in first-occurrence order to get the canonical string
        relabel: dict[int, int] = {}
        rgs = []
        for site in range(n):
            raw = label_of[site]
            if raw not in relabel:
                relabel[raw] = len(relabel)
            rgs.append(relabel[raw])
        return cls(n=n, k=len(blocks), rgs=tuple(rgs))


def enumerate_kpartitions(n: int, k: int) -> Iterator[KPartition]:
    """Yield every partition of n sites into k blocks, lexicographic in rgs."""
    if n < 1:
        raise ParameterError(f"need at least one site, got n={n}")
    if not 1 <= k <= n:
        raise ParameterError(f"block count k={k} outside 1..{n}")
    return _generate(n, k)


def _generate(n: int, k: int) -> Iterator[KPartition]:
    labels = [0] * n

    def rec(pos: int, used: int) -> Iterator[KPartition]:
        if pos == n:
            yield KPartition(n=n, k=k, rgs=tuple(labels))
            return
        top = min(used, k - 1)
        for label in range(top + 1):
            nxt = used + 1 if label == used else used
            # prune branches that can no longer reach k blocks
            if k - nxt <= n - pos - 1:
                labels[pos] = label
                yield from rec(pos + 1, nxt)

    return rec(0, 0)


def swap_sets(partition: KPartition) -> list[tuple[int, int, SwapSet, int]]:
    """Merged copy-swap site sets for every ordered block pair of ``partition``.

    The ordered pair (i, j) exchanges the sites of block i and block j
    between the two state copies, i.e. it acts on the union of the two
    blocks (block i alone when i = j).  The two orders of a distinct pair
    act on the same union, so they are merged and carry multiplicity 2;
    diagonal pairs carry multiplicity 1.  Multiplicities sum to k^2.

    Returns a list of (i, j, sites, multiplicity) with i <= j, diagonal
    entries first.
    """
    blocks = [frozenset(block) for block in partition.blocks()]
    out: list[tuple[int, int, SwapSet, int]] = [
        (i, i, blocks[i], 1) for i in range(partition.k)
    ]
    for i in range(partition.k):
        for j in range(i + 1, partition.k):
            out.append((i, j, blocks[i] | blocks[j], 2))
    return out


def stirling2(n: int, k: int) -> int:
    """Number of partitions of n items into k nonempty blocks.

    Tabulated independently of the enumerator via the standard recurrence
    S(n, k) = k * S(n-1, k) + S(n-1, k-1).
    """
    if n < 0 or k < 0:
        raise ParameterError("n and k must be nonnegative")
    if k > n:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    row = [1] + [0] * k  # S(0, 0..k)
    for m in range(1, n + 1):
        new = [0] * (k + 1)
        for j in range(1, min(m, k) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]
