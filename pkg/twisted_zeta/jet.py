"""Truncated power series with exact rational coefficients."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

Scalar = Fraction | int


@dataclass(frozen=True, slots=True)
class Jet:
    """c_0 + c_1 u + ... + c_order u^order, arithmetic truncated at ``order``."""

    order: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValueError(f"jet order must be >= 0, got {self.order}")
        if len(self.coefficients) != self.order + 1:
            raise ValueError(
                f"jet of order {self.order} needs {self.order + 1} coefficients, "
                f"got {len(self.coefficients)}"
            )

    @classmethod
    def from_coefficients(cls, order: int, coefficients: Iterable[Scalar]) -> Jet:
        """Build a jet, padding with zeros or truncating to ``order``."""
        coeffs = [Fraction(c) for c in coefficients][: order + 1]
        coeffs.extend(Fraction(0) for _ in range(order + 1 - len(coeffs)))
        return cls(order, tuple(coeffs))

    @classmethod
    def constant(cls, order: int, value: Scalar) -> Jet:
        return cls.from_coefficients(order, [value])

    @classmethod
    def linear(cls, order: int, c0: Scalar, c1: Scalar = 1) -> Jet:
        """The jet of c0 + c1 u."""
        return cls.from_coefficients(order, [c0, c1])

    def __getitem__(self, index: int) -> Fraction:
        return self.coefficients[index]

    def __len__(self) -> int:
        return self.order + 1

    def _check_order(self, other: Jet) -> None:
        if other.order != self.order:
            raise ValueError(f"jet orders differ: {self.order} != {other.order}")

    def __add__(self, other: Jet | Scalar) -> Jet:
        if not isinstance(other, Jet):
            return Jet(self.order, (self[0] + other, *self.coefficients[1:]))
        self._check_order(other)
        return Jet(
            self.order,
            tuple(
                a + b
                for a, b in zip(self.coefficients, other.coefficients, strict=True)
            ),
        )

    __radd__ = __add__

    def __neg__(self) -> Jet:
        return Jet(self.order, tuple(-c for c in self.coefficients))

    def __sub__(self, other: Jet | Scalar) -> Jet:
        return self + (-other)

    def __mul__(self, other: Jet | Scalar) -> Jet:
        if not isinstance(other, Jet):
            factor = Fraction(other)
            return Jet(self.order, tuple(c * factor for c in self.coefficients))
        self._check_order(other)
        a, b = self.coefficients, other.coefficients
        out = [
            sum((a[i] * b[m - i] for i in range(m + 1)), Fraction(0))
            for m in range(self.order + 1)
        ]
        return Jet(self.order, tuple(out))

    __rmul__ = __mul__

    def mul_linear(self, c0: Scalar, c1: Scalar = 1) -> Jet:
        """Multiply by (c0 + c1 u) in O(order) operations."""
        a = self.coefficients
        out = [a[0] * c0]
        out.extend(a[m] * c0 + a[m - 1] * c1 for m in range(1, self.order + 1))
        return Jet(self.order, tuple(out))

    def reciprocal(self) -> Jet:
        """Return 1/self; requires a nonzero constant term."""
        a = self.coefficients
        if a[0] == 0:
            raise ZeroDivisionError("jet reciprocal needs a nonzero constant term")
        inv0 = 1 / a[0]
        out = [inv0]
        for m in range(1, self.order + 1):
            acc = sum((a[i] * out[m - i] for i in range(1, m + 1)), Fraction(0))
            out.append(-acc * inv0)
        return Jet(self.order, tuple(out))

    def __truediv__(self, other: Jet | Scalar) -> Jet:
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1 / Fraction(other))

    def __pow__(self, exponent: int) -> Jet:
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        result = Jet.constant(self.order, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result


def product_of_linear(order: int, shifts: Sequence[Scalar], scale: Scalar = 1) -> Jet:
    """Return scale * prod (c + u) over c in ``shifts`` as a jet."""
    jet = Jet.constant(order, scale)
    for c in shifts:
        jet = jet.mul_linear(c)
    return jet
