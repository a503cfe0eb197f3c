"""Integer Laurent polynomials in one variable ``x``."""

from __future__ import annotations

from typing import Iterable, Mapping


class LaurentPoly:
    """Finite-support map ``exponent -> coefficient`` with zeros pruned.

    Immutable; equality is equality of the support maps.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for e, v in items:
            c[int(e)] = c.get(int(e), 0) + v
        self._c = {e: v for e, v in sorted(c.items()) if v != 0}

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> LaurentPoly:
        return cls({exponent: coeff})

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls({0: 1})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def coeff(self, exponent: int) -> int:
        return self._c.get(exponent, 0)

    def __getitem__(self, exponent: int) -> int:
        return self._c.get(exponent, 0)

    def __iter__(self):
        return iter(self._c.items())

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    @property
    def degree(self) -> int | None:
        return max(self._c) if self._c else None

    @property
    def valuation(self) -> int | None:
        return min(self._c) if self._c else None

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(tuple(self._c.items()))

    def __add__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        return LaurentPoly(list(self._c.items()) + list(other._c.items()))

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        return self + (-other)

    def __rsub__(self, other: int) -> LaurentPoly:
        return LaurentPoly({0: other}) - self

    def __mul__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            return LaurentPoly({e: v * other for e, v in self._c.items()})
        out: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + v1 * v2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials have Laurent-polynomial inverses")
            (e, v), = self._c.items()
            if v not in (1, -1):
                raise ValueError("monomial with non-unit coefficient is not invertible")
            return LaurentPoly({e * n: 1 if n % 2 == 0 else v})
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``x**k``."""
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def window(self, lo: int, hi: int) -> LaurentPoly:
        """Terms with ``lo <= exponent <= hi``."""
        return LaurentPoly({e: v for e, v in self._c.items() if lo <= e <= hi})

    def mirror(self) -> LaurentPoly:
        """Substitute ``x -> 1/x``."""
        return LaurentPoly({-e: v for e, v in self._c.items()})

    def __repr__(self) -> str:
        if not self._c:
            return "LaurentPoly(0)"
        return f"LaurentPoly({self._c})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items(), reverse=True):
            if e == 0:
                mono = str(v)
            else:
                xs = "x" if e == 1 else f"x^{e}"
                mono = xs if v == 1 else ("-" + xs if v == -1 else f"{v}*{xs}")
            parts.append(mono)
        return " + ".join(parts).replace("+ -", "- ")
