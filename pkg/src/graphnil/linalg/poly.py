"""Univariate polynomials over the rationals, characteristic polynomials."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .matrix import Matrix, q


class Polynomial:
    """Coefficients lowest degree first, trailing zeros stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [q(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial([q(other) * c for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        d = other.degree
        lc = other.leading()
        quo = [Fraction(0)] * max(len(r) - d, 0)
        for k in range(len(r) - 1, d - 1, -1):
            c = r[k] / lc
            if c:
                quo[k - d] = c
                for j, b in enumerate(other.coeffs):
                    r[k - d + j] -= c * b
        return Polynomial(quo), Polynomial(r[:d] if d > 0 else [])

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[0]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (1 / self.leading())

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def lowest_degree(self) -> int:
        """Multiplicity of 0 as a root."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise ValueError("zero polynomial")

    def shift_down(self, k: int) -> "Polynomial":
        """Divide by x**k; the low coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError(f"polynomial is not divisible by x^{k}")
        return Polynomial(self.coeffs[k:])

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        return self.format("x")

    def format(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def is_squarefree(p: Polynomial) -> bool:
    if p.is_zero():
        raise ValueError("squarefreeness of the zero polynomial is undefined")
    return poly_gcd(p, p.derivative()).degree == 0


def char_poly(a: Matrix) -> Polynomial:
    """det(x I - a) by the Faddeev-LeVerrier recursion."""
    if not a.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = a.nrows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = Matrix.identity(n)
    m = Matrix.zeros(n)
    for k in range(1, n + 1):
        m = a @ m + ident * coeffs[n - k + 1]
        coeffs[n - k] = -(a @ m).trace() / k
    return Polynomial(coeffs)


def evaluate_at_matrix(p: Polynomial, a: Matrix) -> Matrix:
    """Horner evaluation of p at a square matrix."""
    n = a.nrows
    acc = Matrix.zeros(n)
    ident = Matrix.identity(n)
    for c in reversed(p.coeffs):
        acc = a @ acc + ident * c
    return acc
