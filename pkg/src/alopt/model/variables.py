"""Flat variable layout for the placement variables y[k, j]."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from alopt.exceptions import DimensionError
from alopt.model.geometry import bin_domain
from alopt.types import Assignment, Container, Payload


class VariableMap:
    """Bijection (k, j) <-> flat index.

    Containers are laid out in blocks: every size-1 container (N columns
    each), then size-2 (N columns), then size-3 (N-1 columns), keeping payload
    order inside each size class.
    """

    def __init__(self, containers: Sequence[Container], bin_count: int) -> None:
        self.bin_count = bin_count
        self.containers: tuple[Container, ...] = tuple(containers)
        self._start: dict[int, int] = {}
        ids: list[int] = []
        bins: list[int] = []
        slots: list[int] = []
        var = 0
        for slot, container in enumerate(self.containers):
            self._start[container.id] = var
            domain = bin_domain(container.size, bin_count)
            ids.extend([container.id] * len(domain))
            bins.extend(domain)
            slots.extend([slot] * len(domain))
            var += len(domain)
        self.ids: npt.NDArray[np.int64] = np.asarray(ids, dtype=np.int64)
        self.bins: npt.NDArray[np.int64] = np.asarray(bins, dtype=np.int64)
        self.slots: npt.NDArray[np.int64] = np.asarray(slots, dtype=np.int64)
        self.masses: npt.NDArray[np.int64] = np.asarray(
            [self.containers[s].mass for s in slots], dtype=np.int64
        )
        self.sizes: npt.NDArray[np.int64] = np.asarray(
            [self.containers[s].size for s in slots], dtype=np.int64
        )

    @classmethod
    def for_payload(cls, payload: Payload, bin_count: int) -> VariableMap:
        ordered = sorted(payload.containers, key=lambda c: c.size)
        return cls(ordered, bin_count)

    def __len__(self) -> int:
        return int(self.ids.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VariableMap):
            return NotImplemented
        return self.bin_count == other.bin_count and self.containers == other.containers

    def __hash__(self) -> int:
        return hash((self.bin_count, self.containers))

    def __repr__(self) -> str:
        return f"VariableMap(n={len(self.containers)}, N={self.bin_count}, vars={len(self)})"

    def container(self, k: int) -> Container:
        start = self._start.get(k)
        if start is None:
            raise DimensionError(f"Container {k} is not part of the payload")
        return self.containers[int(self.slots[start])]

    def block(self, k: int) -> range:
        """Flat indices of all columns of container k."""
        container = self.container(k)
        start = self._start[k]
        return range(start, start + len(bin_domain(container.size, self.bin_count)))

    def index(self, k: int, j: int) -> int:
        container = self.container(k)
        if j not in bin_domain(container.size, self.bin_count):
            raise DimensionError(
                f"Bin {j} is outside the domain of container {k} (size {container.size})"
            )
        return self._start[k] + j - 1

    def pair(self, index: int) -> tuple[int, int]:
        return int(self.ids[index]), int(self.bins[index])

    def to_vector(self, assignment: Assignment) -> npt.NDArray[np.bool_]:
        """Dense 0/1 vector of an assignment.

        Raises:
            DimensionError: If a pair names an unknown container or bin
        """
        x = np.zeros(len(self), dtype=np.bool_)
        for k, j in assignment.pairs:
            x[self.index(k, j)] = True
        return x

    def to_assignment(self, x: npt.ArrayLike) -> Assignment:
        active = np.flatnonzero(np.asarray(x))
        return Assignment.from_pairs(self.pair(int(i)) for i in active)
