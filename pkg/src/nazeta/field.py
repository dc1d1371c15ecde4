"""Finite fields F_{p^k} = F_p[u]/(m(u)) for odd p.

Elements are length-k coefficient tuples (ascending powers of u). The
``v*`` helpers work on integer arrays of shape (n, k) and are what the
point counter uses; the scalar functions are thin wrappers over them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from sympy import isprime

from .errors import InputError

DEFAULT_BUDGET = 2**32


def _pmod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic m over F_p."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    a = a[:dm]
    while a and a[-1] == 0:
        a.pop()
    return a


def is_irreducible(m: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..k//2."""
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _pmod(list(m), list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus: tuple[int, ...]
    _red: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.p < 3 or not isprime(self.p):
            raise InputError("invalid characteristic")
        mod = tuple(int(c) % self.p for c in self.modulus)
        if self.k < 1 or len(mod) != self.k + 1 or mod[-1] != 1:
            raise InputError("modulus must be monic of degree k")
        if not is_irreducible(mod, self.p):
            raise InputError("modulus is reducible")
        object.__setattr__(self, "modulus", mod)
        # red[j] = u^(k+j) reduced, for j = 0..k-2
        red = np.zeros((max(self.k - 1, 0), self.k), dtype=np.int64)
        for j in range(self.k - 1):
            r = _pmod([0] * (self.k + j) + [1], mod, self.p)
            red[j, : len(r)] = r
        object.__setattr__(self, "_red", red)

    @property
    def q(self) -> int:
        return self.p**self.k

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d: dict) -> "FieldSpec":
        return cls(int(d["p"]), int(d["k"]), tuple(d["modulus"]))

    # vectorized arithmetic on (n, k) int arrays
    def vadd(self, a, b):
        return (a + b) % self.p

    def vsub(self, a, b):
        return (a - b) % self.p

    def vmul(self, a, b):
        k, p = self.k, self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        n = max(a.shape[0], b.shape[0])
        prod = np.zeros((n, 2 * k - 1), dtype=np.int64)
        for i in range(k):
            prod[:, i : i + k] += a[:, i : i + 1] * b
            prod %= p
        out = prod[:, :k].copy()
        if k > 1:
            out += prod[:, k:] @ self._red
        return out % p

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros_like(a)
        out[:, 0] = 1
        base = a
        while e:
            if e & 1:
                out = self.vmul(out, base)
            e >>= 1
            if e:
                base = self.vmul(base, base)
        return out

    def vindex(self, a) -> np.ndarray:
        """Integer label sum c_i p^i of each row."""
        w = self.p ** np.arange(self.k, dtype=np.int64)
        return np.asarray(a, dtype=np.int64) @ w

    def elements(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Rows for labels start..stop-1, in label order."""
        stop = self.q if stop is None else stop
        idx = np.arange(start, stop, dtype=np.int64)
        out = np.empty((idx.size, self.k), dtype=np.int64)
        for i in range(self.k):
            out[:, i] = idx % self.p
            idx //= self.p
        return out

    def const(self, c: int, n: int = 1) -> np.ndarray:
        out = np.zeros((n, self.k), dtype=np.int64)
        out[:, 0] = c % self.p
        return out


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]

    def row(self) -> np.ndarray:
        return np.asarray([self.coeffs], dtype=np.int64)


def make_field(p: int, k: int = 1, budget: int = DEFAULT_BUDGET) -> FieldSpec:
    """F_{p^k} with the lexicographically smallest monic irreducible modulus."""
    if p < 3 or not isprime(p):
        raise InputError("invalid characteristic")
    if k < 1:
        raise InputError("k must be positive")
    if p**k > budget:
        raise InputError("field too large")
    for low in itertools.product(range(p), repeat=k):
        m = tuple(low) + (1,)
        if is_irreducible(m, p):
            return FieldSpec(p, k, m)
    raise AssertionError("unreachable: irreducibles exist in every degree")


def element(spec: FieldSpec, coeffs) -> FieldElement:
    if isinstance(coeffs, int):
        coeffs = [coeffs]
    cs = [int(c) % spec.p for c in coeffs]
    if len(cs) > spec.k:
        raise InputError("too many coefficients for this field")
    return FieldElement(tuple(cs + [0] * (spec.k - len(cs))))


def _wrap(row) -> FieldElement:
    return FieldElement(tuple(int(c) for c in row))


def add(a: FieldElement, b: FieldElement, spec: FieldSpec) -> FieldElement:
    return _wrap(spec.vadd(a.row(), b.row())[0])


def sub(a: FieldElement, b: FieldElement, spec: FieldSpec) -> FieldElement:
    return _wrap(spec.vsub(a.row(), b.row())[0])


def mul(a: FieldElement, b: FieldElement, spec: FieldSpec) -> FieldElement:
    return _wrap(spec.vmul(a.row(), b.row())[0])


def power(a: FieldElement, e: int, spec: FieldSpec) -> FieldElement:
    return _wrap(spec.vpow(a.row(), e)[0])


def inv(a: FieldElement, spec: FieldSpec) -> FieldElement:
    if not any(a.coeffs):
        raise InputError("division by zero")
    return power(a, spec.q - 2, spec)


def field_ops(a: FieldElement, b: FieldElement, spec: FieldSpec, op: str) -> FieldElement:
    if op == "inv":
        return inv(a, spec)
    return {"add": add, "sub": sub, "mul": mul}[op](a, b, spec)


def vcharacter(spec: FieldSpec, a) -> np.ndarray:
    """Quadratic character per row: 0, 1 or -1."""
    a = np.asarray(a, dtype=np.int64)
    e = spec.vpow(a, (spec.q - 1) // 2)
    zero = ~a.any(axis=1)
    one = (e[:, 0] == 1) & ~e[:, 1:].any(axis=1)
    return np.where(zero, 0, np.where(one, 1, -1))


def is_square(a: FieldElement, spec: FieldSpec) -> str:
    chi = int(vcharacter(spec, a.row())[0])
    return {0: "zero", 1: "square", -1: "nonsquare"}[chi]


def enumerate_field(spec: FieldSpec) -> Iterator[FieldElement]:
    chunk = 1 << 16
    for start in range(0, spec.q, chunk):
        for row in spec.elements(start, min(start + chunk, spec.q)):
            yield _wrap(row)


def embedding(small: FieldSpec, big: FieldSpec) -> np.ndarray:
    """Images of u^0..u^(k-1) of ``small`` inside ``big``.

    Picks the root of small.modulus with the least label, so the map is
    deterministic. Returns an array of shape (k_small, k_big).
    """
    if small.p != big.p or big.k % small.k:
        raise InputError("no embedding between these fields")
    if small.k == 1:
        return big.const(1)
    chunk = 1 << 16
    for start in range(0, big.q, chunk):
        xs = big.elements(start, min(start + chunk, big.q))
        val = big.const(0, len(xs))
        for c in reversed(small.modulus):
            val = big.vadd(big.vmul(val, xs), big.const(c, len(xs)))
        hits = np.flatnonzero(~val.any(axis=1))
        if hits.size:
            root = xs[hits[0] : hits[0] + 1]
            imgs = [big.const(1)]
            for _ in range(small.k - 1):
                imgs.append(big.vmul(imgs[-1], root))
            return np.vstack(imgs)
    raise AssertionError("modulus has a root in every extension of its degree")


def embed(rows, emb: np.ndarray, p: int) -> np.ndarray:
    """Map (n, k_small) rows into the big field via the embedding matrix."""
    return (np.asarray(rows, dtype=np.int64) @ emb) % p
