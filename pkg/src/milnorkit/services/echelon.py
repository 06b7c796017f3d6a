"""
Sparse row echelon forms over the chain rings Z/p^K.

K = 1 is Gaussian elimination over F_p (the equal-characteristic engine);
K > 1 keeps a Howell basis so the size of the row span, and hence the
length of the quotient, is read off the pivot valuations.
"""
from __future__ import annotations

import heapq
from typing import Any, Dict, Hashable, Optional, Tuple

Row = Dict[Tuple, int]
Combination = Dict[Hashable, int]


class ChainEchelon:
    """
    Incremental echelon form of rows with sortable column keys.

    The pivot of a row is its smallest column. Pivot entries are normalized
    to exactly p^v; each pivot row with v > 0 is closed by inserting
    p^(K - v) times itself.
    """

    def __init__(self, p: int, exponent: int = 1, track: bool = False):
        self.p = p
        self.exponent = exponent
        self.modulus = p ** exponent
        self.track = track
        self.pivots: Dict[Tuple, Tuple[Row, Combination, int]] = {}
        self._powers = [p ** k for k in range(exponent + 1)]

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------
    def _valuation(self, value: int) -> int:
        v = 0
        while value % self.p == 0:
            value //= self.p
            v += 1
        return v

    def _scaled(self, data: Dict, factor: int) -> Dict:
        mod = self.modulus
        out = {}
        for key, value in data.items():
            scaled = (value * factor) % mod
            if scaled:
                out[key] = scaled
        return out

    def _axpy(self, target: Dict, source: Dict, factor: int, heap: Optional[list] = None, skip=None):
        """target -= factor * source, keeping the heap of live columns current."""
        mod = self.modulus
        for key, value in source.items():
            if key == skip:
                continue
            current = target.get(key)
            updated = ((current or 0) - factor * value) % mod
            if updated:
                target[key] = updated
                if current is None and heap is not None:
                    heapq.heappush(heap, key)
            elif current is not None:
                del target[key]

    # ------------------------------------------------------------------
    # Public API
    # ------------------------------------------------------------------
    def insert(self, row: Row, label: Any = None) -> bool:
        """
        Add a row to the span.

        Args:
            row: Mapping column -> coefficient (reduced or not)
            label: Provenance label recorded in combinations when tracking

        Returns:
            True if a new pivot was created
        """
        combo = {label: 1} if (self.track and label is not None) else {}
        pending = [({k: v % self.modulus for k, v in row.items() if v % self.modulus}, combo)]
        created = False
        while pending:
            work, combo = pending.pop()
            column = self._reduce_to_leading(work, combo)
            if column is None:
                continue
            value = work[column]
            v = self._valuation(value)
            existing = self.pivots.get(column)
            if existing is not None:
                pending.append((existing[0], existing[1]))
            inverse = pow(value // self._powers[v], -1, self.modulus)
            work = self._scaled(work, inverse)
            combo = self._scaled(combo, inverse) if self.track else combo
            self.pivots[column] = (work, combo, v)
            created = True
            if v > 0:
                factor = self._powers[self.exponent - v]
                closure = self._scaled(work, factor)
                if closure:
                    pending.append((closure, self._scaled(combo, factor) if self.track else {}))
        return created

    def _reduce_to_leading(self, work: Row, combo: Combination) -> Optional[Tuple]:
        """Eliminate leading columns in place; return the first column that stays."""
        heap = list(work)
        heapq.heapify(heap)
        while heap:
            column = heapq.heappop(heap)
            value = work.get(column)
            if value is None:
                continue
            pivot = self.pivots.get(column)
            if pivot is None:
                return column
            prow, pcombo, pv = pivot
            step = self._powers[pv]
            if value % step:
                return column
            factor = value // step
            del work[column]
            self._axpy(work, prow, factor, heap, skip=column)
            if self.track:
                self._axpy(combo, pcombo, factor)
        return None

    def reduce(self, vector: Row, stop: Optional[int] = None) -> Tuple[Row, Combination]:
        """
        Normal form of a vector against the pivots.

        Args:
            vector: Mapping column -> coefficient
            stop: Drop every column whose first key component is >= stop

        Returns:
            (remainder, combination) with vector = remainder + sum(combination * rows)
        """
        work = {k: v % self.modulus for k, v in vector.items() if v % self.modulus}
        remainder: Row = {}
        combo: Combination = {}
        heap = list(work)
        heapq.heapify(heap)
        while heap:
            column = heapq.heappop(heap)
            value = work.pop(column, None)
            if value is None:
                continue
            if stop is not None and column[0] >= stop:
                continue
            pivot = self.pivots.get(column)
            if pivot is None:
                remainder[column] = value
                continue
            prow, pcombo, pv = pivot
            step = self._powers[pv]
            factor, rest = divmod(value, step)
            if factor:
                self._axpy(work, prow, factor, heap, skip=column)
                if self.track:
                    self._axpy(combo, pcombo, -factor)
            if rest:
                remainder[column] = rest
        return remainder, combo

    def valuation_at(self, column: Tuple) -> Optional[int]:
        pivot = self.pivots.get(column)
        return None if pivot is None else pivot[2]

    def __len__(self) -> int:
        return len(self.pivots)
