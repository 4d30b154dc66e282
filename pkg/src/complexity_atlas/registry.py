"""Deterministic code registries shared by all matrix types.

Codes are stored sorted lexicographically so index assignment is stable
across runs and across machines; downstream eigenvectors and JSON output
depend on this ordering.
"""

from __future__ import annotations

from typing import Iterable, Iterator


class Registry:
    """Immutable ordered set of string codes with O(1) index lookup."""

    __slots__ = ("codes", "_index")

    def __init__(self, codes: Iterable[str]):
        self.codes: tuple[str, ...] = tuple(sorted(set(codes)))
        self._index = {c: i for i, c in enumerate(self.codes)}

    def index(self, code: str) -> int:
        return self._index[code]

    def __contains__(self, code: object) -> bool:
        return code in self._index

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self) -> Iterator[str]:
        return iter(self.codes)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Registry) and self.codes == other.codes

    def __hash__(self) -> int:
        return hash(self.codes)

    def __repr__(self) -> str:
        return f"Registry({len(self.codes)} codes)"

    def subset(self, keep: Iterable[str]) -> "Registry":
        keep = set(keep)
        return Registry(c for c in self.codes if c in keep)
