"""Multivariate power series over Q truncated at a total degree.

Exponent vectors are packed into a single integer (base ``order + 1``
digits, variable 0 least significant) so that multiplying monomials is
integer addition. Total degree never exceeds the order, so no digit ever
carries.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from numbers import Rational
from typing import Iterable, Mapping, Sequence


def _norm(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    if isinstance(x, Rational):
        return _norm(Fraction(x))
    raise TypeError(f"inexact coefficient {x!r}")


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class TruncSeries:
    """Power series in ``nvars`` variables, exact through total degree ``order``."""

    __slots__ = ("nvars", "order", "_base", "_c")

    def __init__(
        self,
        nvars: int,
        order: int,
        coeffs: Mapping[tuple[int, ...], object] | Iterable[tuple[tuple[int, ...], object]] = (),
    ):
        if nvars < 0 or order < 0:
            raise ValueError("nvars and order must be non-negative")
        self.nvars = nvars
        self.order = order
        self._base = order + 1
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, object] = {}
        for exps, v in items:
            exps = tuple(exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent {exps} for {nvars} variables")
            if sum(exps) > order:
                continue
            k = self._pack(exps)
            c[k] = c.get(k, 0) + _norm(v)
        self._c = {k: _norm(v) for k, v in c.items() if v != 0}

    @classmethod
    def _raw(cls, nvars: int, order: int, base: int, packed: dict[int, object]) -> TruncSeries:
        s = cls.__new__(cls)
        s.nvars, s.order, s._base = nvars, order, base
        s._c = packed
        return s

    # -- packing ----------------------------------------------------------
    def _pack(self, exps: Sequence[int]) -> int:
        k = 0
        for e in reversed(exps):
            k = k * self._base + e
        return k

    def _unpack(self, k: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.nvars):
            k, e = divmod(k, self._base)
            out.append(e)
        return tuple(out)

    def _deg(self, k: int) -> int:
        d = 0
        while k:
            k, e = divmod(k, self._base)
            d += e
        return d

    def _rebased(self, base: int, order: int) -> TruncSeries:
        if base == self._base and order >= self.order:
            return self
        out = {}
        for k, v in self._c.items():
            exps = self._unpack(k)
            if sum(exps) <= order:
                kk = 0
                for e in reversed(exps):
                    kk = kk * base + e
                out[kk] = v
        return TruncSeries._raw(self.nvars, min(order, self.order), base, out)

    def _coerce(self, other) -> tuple[TruncSeries, TruncSeries]:
        if not isinstance(other, TruncSeries):
            other = TruncSeries.constant(self.nvars, self.order, other)
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        order = min(self.order, other.order)
        base = max(self._base, other._base)
        return self._rebased(base, order), other._rebased(base, order)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, order: int) -> TruncSeries:
        return cls(nvars, order)

    @classmethod
    def constant(cls, nvars: int, order: int, value) -> TruncSeries:
        return cls(nvars, order, {(0,) * nvars: value})

    @classmethod
    def one(cls, nvars: int, order: int) -> TruncSeries:
        return cls.constant(nvars, order, 1)

    @classmethod
    def variable(cls, nvars: int, order: int, i: int) -> TruncSeries:
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, order, {tuple(exps): 1})

    @classmethod
    def variables(cls, nvars: int, order: int) -> list[TruncSeries]:
        return [cls.variable(nvars, order, i) for i in range(nvars)]

    # -- inspection -------------------------------------------------------
    def coeff(self, exps: Sequence[int]):
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent length mismatch")
        if sum(exps) > self.order:
            raise ValueError(f"degree {sum(exps)} beyond truncation order {self.order}")
        return self._c.get(self._pack(exps), 0)

    @property
    def constant_term(self):
        return self._c.get(0, 0)

    def items(self) -> list[tuple[tuple[int, ...], object]]:
        """Nonzero terms sorted by (total degree, exponent vector)."""
        out = [(self._unpack(k), v) for k, v in self._c.items()]
        out.sort(key=lambda t: (sum(t[0]), t[0]))
        return out

    def as_dict(self) -> dict[tuple[int, ...], object]:
        return dict(self.items())

    def __len__(self) -> int:
        return len(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = TruncSeries.constant(self.nvars, self.order, other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if (self.nvars, self.order) != (other.nvars, other.order):
            return False
        return self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash((self.nvars, self.order, tuple(self.items())))

    def first_difference(self, other: TruncSeries):
        """``(exponent, mine, theirs)`` at the lowest differing term, or None.

        Compared through the smaller of the two orders.
        """
        a, b = self._coerce(other)
        diff = [k for k in set(a._c) | set(b._c) if a._c.get(k, 0) != b._c.get(k, 0)]
        if not diff:
            return None
        exps = min((a._unpack(k) for k in diff), key=lambda e: (sum(e), e))
        return exps, a.coeff(exps), b.coeff(exps)

    def truncate(self, order: int) -> TruncSeries:
        if order >= self.order:
            return self
        return TruncSeries._raw(
            self.nvars, order, self._base, {k: v for k, v in self._c.items() if self._deg(k) <= order}
        )

    # -- arithmetic -------------------------------------------------------
    def __neg__(self) -> TruncSeries:
        return TruncSeries._raw(self.nvars, self.order, self._base, {k: -v for k, v in self._c.items()})

    def __add__(self, other) -> TruncSeries:
        a, b = self._coerce(other)
        out = dict(a._c)
        for k, v in b._c.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = _norm(s)
            else:
                out.pop(k, None)
        return TruncSeries._raw(a.nvars, a.order, a._base, out)

    __radd__ = __add__

    def __sub__(self, other) -> TruncSeries:
        return self + (-other if isinstance(other, TruncSeries) else -_norm(other))

    def __rsub__(self, other) -> TruncSeries:
        return (-self) + other

    def scale(self, c) -> TruncSeries:
        c = _norm(c)
        if c == 0:
            return TruncSeries._raw(self.nvars, self.order, self._base, {})
        return TruncSeries._raw(self.nvars, self.order, self._base, {k: _norm(v * c) for k, v in self._c.items()})

    def __mul__(self, other) -> TruncSeries:
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        a, b = self._coerce(other)
        order = a.order
        bd = sorted(((b._deg(k), k, v) for k, v in b._c.items()), key=lambda t: t[0])
        out: dict[int, object] = {}
        get = out.get
        for ka, va in a._c.items():
            lim = order - a._deg(ka)
            for db, kb, vb in bd:
                if db > lim:
                    break
                k = ka + kb
                out[k] = get(k, 0) + va * vb
        out = {k: _norm(v) for k, v in out.items() if v != 0}
        return TruncSeries._raw(a.nvars, order, a._base, out)

    def __rmul__(self, other) -> TruncSeries:
        return self.scale(other)

    def __truediv__(self, other) -> TruncSeries:
        if isinstance(other, TruncSeries):
            return self * other.inverse()
        return self.scale(Fraction(other) ** -1)

    def inverse(self) -> TruncSeries:
        c0 = self.constant_term
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        inv_c0 = _norm(Fraction(1) / Fraction(c0))
        # self = c0 * (1 + g);  1/(1+g) = 1 - g + g^2 - ...
        g = self.scale(inv_c0) - 1
        result = TruncSeries.one(self.nvars, self.order)
        for _ in range(self.order):
            result = 1 - g * result
        return result.scale(inv_c0)

    def __pow__(self, n: int) -> TruncSeries:
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncSeries.one(self.nvars, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self, i: int) -> TruncSeries:
        """Partial derivative in variable ``i``; exact only through ``order - 1``."""
        if not 0 <= i < self.nvars:
            raise IndexError(i)
        step = self._base ** i
        out = {}
        for k, v in self._c.items():
            e = (k // step) % self._base
            if e:
                out[k - step] = v * e
        res = TruncSeries._raw(self.nvars, self.order, self._base, out)
        return res.truncate(max(self.order - 1, 0))

    def __repr__(self) -> str:
        return f"TruncSeries(nvars={self.nvars}, order={self.order}, {self.as_dict()})"

    def __str__(self) -> str:
        if not self._c:
            return f"0 + O({self.order + 1})"
        terms = []
        for exps, v in self.items():
            mono = "*".join(
                (f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}") for i, e in enumerate(exps) if e
            )
            terms.append(f"{v}" if not mono else (mono if v == 1 else f"{v}*{mono}"))
        return " + ".join(terms) + f" + O({self.order + 1})"


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def series_pow_int(a: TruncSeries, n: int) -> TruncSeries:
    return a ** n


def series_inverse(a: TruncSeries) -> TruncSeries:
    return a.inverse()


def series_jacobian(fs: Sequence[TruncSeries]) -> TruncSeries:
    """``det(d f_i / d x_j)`` by Leibniz expansion; small ``len(fs)`` only."""
    n = len(fs)
    if n == 0:
        raise ValueError("empty map")
    if any(f.nvars != n for f in fs):
        raise ValueError("Jacobian needs as many functions as variables")
    d = [[f.derivative(j) for j in range(n)] for f in fs]
    order = min(f.order for f in fs) - 1
    total = TruncSeries.zero(n, max(order, 0))
    for p in permutations(range(n)):
        term = TruncSeries.constant(n, max(order, 0), _perm_sign(p))
        for i in range(n):
            term = term * d[i][p[i]]
        total = total + term
    return total


def series_solve_v(l: int, order: int) -> list[TruncSeries]:
    """Solve ``v_i = w_i * prod_k (1 - v_k)^(2 min(i, k))`` for ``v`` as series in ``w``.

    Fixed-point iteration from ``v = w``; each pass fixes one more degree.
    """
    if l < 1 or order < 1:
        raise ValueError("need l >= 1 and order >= 1")
    w = TruncSeries.variables(l, order)
    v = list(w)
    for _ in range(order + 1):
        one_minus = [1 - vk for vk in v]
        new = []
        for i in range(1, l + 1):
            prod = w[i - 1]
            for k in range(1, l + 1):
                prod = prod * one_minus[k - 1] ** (2 * min(i, k))
            new.append(prod)
        if new == v:
            break
        v = new
    return v

