#!/usr/bin/env python3
"""
Формальные степенные ряды по константе связи с коэффициентами-функционалами
"""

from typing import Callable, Dict, Iterator, Mapping, Tuple

from functionals.algebra import Functional, star_product, time_ordered_product
from functionals.coefficients import Number
from utils.errors import ParameterError

Product = Callable[[Functional, Functional], Functional]


class FormalSeries:
    """Σ_{k ≤ K} g^k F_k; порядки выше K отсутствуют, арифметика обрезает на min(K)"""

    __slots__ = ("_coefficients", "max_order")

    def __init__(self, coefficients: Mapping[int, Functional], max_order: int):
        if max_order < 0:
            raise ParameterError(f"max order must be >= 0, got {max_order}")
        extra = [k for k in coefficients if k < 0 or k > max_order]
        if extra:
            raise ParameterError(f"orders {sorted(extra)} outside 0..{max_order}")
        self.max_order = int(max_order)
        self._coefficients: Dict[int, Functional] = {
            k: f for k, f in coefficients.items() if not f.is_zero
        }

    @classmethod
    def constant(cls, value: Functional, max_order: int) -> "FormalSeries":
        return cls({0: value}, max_order)

    @classmethod
    def unit(cls, max_order: int) -> "FormalSeries":
        return cls.constant(Functional.unit(), max_order)

    def __getitem__(self, k: int) -> Functional:
        if k < 0 or k > self.max_order:
            raise ParameterError(f"order {k} outside the truncation 0..{self.max_order}")
        return self._coefficients.get(k, Functional.zero())

    def orders(self) -> range:
        return range(self.max_order + 1)

    def items(self) -> Iterator[Tuple[int, Functional]]:
        for k in self.orders():
            yield k, self[k]

    def truncate(self, max_order: int) -> "FormalSeries":
        if max_order > self.max_order:
            raise ParameterError(f"cannot extend a series truncated at {self.max_order} to {max_order}")
        return FormalSeries({k: f for k, f in self._coefficients.items() if k <= max_order}, max_order)

    def map(self, fn: Callable[[Functional], Functional]) -> "FormalSeries":
        return FormalSeries({k: fn(f) for k, f in self._coefficients.items()}, self.max_order)

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        K = min(self.max_order, other.max_order)
        return FormalSeries({k: self[k] + other[k] for k in range(K + 1)}, K)

    def __neg__(self) -> "FormalSeries":
        return self.map(lambda f: -f)

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        return self + (-other)

    def scale(self, factor: Number) -> "FormalSeries":
        return self.map(lambda f: f.scale(factor))

    def convolve(self, other: "FormalSeries", product: Product) -> "FormalSeries":
        """(A ∘ B)_k = Σ_{j} product(A_j, B_{k-j})"""
        K = min(self.max_order, other.max_order)
        out = {}
        for k in range(K + 1):
            total = Functional.zero()
            for j in range(k + 1):
                a = self[j]
                b = other[k - j]
                if a.is_zero or b.is_zero:
                    continue
                total = total + product(a, b)
            out[k] = total
        return FormalSeries(out, K)

    def star(self, other: "FormalSeries") -> "FormalSeries":
        return self.convolve(other, star_product)

    def time_ordered(self, other: "FormalSeries") -> "FormalSeries":
        return self.convolve(other, time_ordered_product)

    def is_unit(self) -> bool:
        return self == FormalSeries.unit(self.max_order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.max_order == other.max_order and self._coefficients == other._coefficients

    def __hash__(self) -> int:
        return hash((self.max_order, tuple(sorted(self._coefficients.items(), key=lambda kv: kv[0]))))

    def __repr__(self) -> str:
        sizes = ", ".join(f"{k}:{len(self[k])}" for k in self.orders())
        return f"FormalSeries(K={self.max_order}; terms per order {sizes})"

    def to_dict(self) -> dict:
        return {"max_order": self.max_order,
                "orders": {str(k): self[k].to_dict() for k in self.orders()}}
