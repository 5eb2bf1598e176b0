"""Exact dense linear algebra: determinant, Pfaffian, permanent.

Entries are held as ``Fraction`` when every entry is real and as ``Scalar``
otherwise, so the common real case avoids complex bookkeeping.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .scalar import Scalar, as_scalar


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError("matrix is not rectangular")

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        entries = tuple(tuple(as_scalar(x) for x in r) for r in rows)
        return Matrix(len(rows), ncols, entries)

    @staticmethod
    def zeros(n: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        return Matrix(n, m, tuple(tuple(Scalar(0) for _ in range(m)) for _ in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[Scalar]]:
        return [list(r) for r in self.entries]

    def is_skew(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == -self.entries[j][i]
            for i in range(self.rows) for j in range(i, self.cols))


def _field_rows(m) -> tuple[list[list], bool]:
    """Copy ``m`` into mutable rows over Fraction (real) or Scalar (complex)."""
    rows = m.tolist() if isinstance(m, Matrix) else [list(r) for r in m]
    real = True
    for r in rows:
        for x in r:
            if isinstance(x, Scalar) and x.im != 0:
                real = False
            elif isinstance(x, complex):
                raise TypeError("floating entries are not allowed")
    if real:
        out = [[x.re if isinstance(x, Scalar) else Fraction(x) for x in r] for r in rows]
    else:
        out = [[as_scalar(x) for x in r] for r in rows]
    return out, real


def _square(rows):
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError(f"expected a square matrix, got {n}x{len(rows[0]) if rows else 0}")
    return n


def determinant(m) -> Scalar:
    a, _ = _field_rows(m)
    n = _square(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Scalar(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        pk = a[k][k]
        det = det * pk
        rowk = a[k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                f = a[i][k] / pk
                ri = a[i]
                for j in range(k + 1, n):
                    if rowk[j] != 0:
                        ri[j] = ri[j] - f * rowk[j]
    return as_scalar(det)


def determinant_laplace(m) -> Scalar:
    """Cofactor expansion along the first row; an independent oracle."""
    a, _ = _field_rows(m)
    _square(a)

    def rec(rows, cols):
        if not rows:
            return Fraction(1)
        r = rows[0]
        total = Fraction(0)
        for idx, c in enumerate(cols):
            if a[r][c] != 0:
                sub = rec(rows[1:], cols[:idx] + cols[idx + 1:])
                term = a[r][c] * sub
                total = total + term if idx % 2 == 0 else total - term
        return total

    return as_scalar(rec(list(range(len(a))), list(range(len(a)))))


def pfaffian(m) -> Scalar:
    """Pfaffian by skew-symmetric elimination with pivoting.

    Pivot: the first nonzero entry of the working row.  Each step peels off
    the 2x2 block ``[[0, b], [-b, 0]]`` and replaces the rest by its Schur
    complement, which stays skew-symmetric.
    """
    a, _ = _field_rows(m)
    n = _square(a)
    if n % 2:
        raise DimensionError("Pfaffian needs an even dimension")
    for i in range(n):
        if a[i][i] != 0:
            raise ValueError("matrix is not skew-symmetric")
        for j in range(i + 1, n):
            if a[i][j] != -a[j][i]:
                raise ValueError("matrix is not skew-symmetric")
    return as_scalar(_pfaffian_inplace(a))


def _pfaffian_inplace(a):
    n = len(a)
    pf = Fraction(1)
    for k in range(0, n - 1, 2):
        piv = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k + 1:
            j = piv
            a[k + 1], a[j] = a[j], a[k + 1]
            for row in a:
                row[k + 1], row[j] = row[j], row[k + 1]
            pf = -pf
        b = a[k][k + 1]
        pf = pf * b
        rk, rk1 = a[k], a[k + 1]
        idx = [i for i in range(k + 2, n) if rk[i] != 0 or rk1[i] != 0]
        if not idx:
            continue
        inv = 1 / b
        u = {i: rk[i] * inv for i in idx}
        v = {i: rk1[i] for i in idx}
        # A'[i][j] = A[i][j] + (A[k+1][i] A[k][j] - A[k][i] A[k+1][j]) / b
        for i in idx:
            ri = a[i]
            vi, ui = v[i], u[i]
            for j in idx:
                if j != i:
                    ri[j] = ri[j] + vi * u[j] - ui * v[j]
    return pf


def permanent(m) -> Scalar:
    """Ryser's formula with a Gray-code walk over column subsets."""
    a, _ = _field_rows(m)
    n = _square(a)
    if n == 0:
        return Scalar(1)
    row_sums = [Fraction(0)] * n if isinstance(a[0][0], Fraction) else [Scalar(0)] * n
    total = 0
    prev_gray = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        changed = gray ^ prev_gray
        j = changed.bit_length() - 1
        if gray & changed:
            for i in range(n):
                row_sums[i] = row_sums[i] + a[i][j]
        else:
            for i in range(n):
                row_sums[i] = row_sums[i] - a[i][j]
        prev_gray = gray
        prod = 1
        for s in row_sums:
            prod = prod * s
            if prod == 0:
                break
        if bin(gray).count("1") % 2 == n % 2:
            total = total + prod
        else:
            total = total - prod
    return as_scalar(total)


def permanent_naive(m) -> Scalar:
    a, _ = _field_rows(m)
    n = _square(a)
    total = 0
    for sigma in itertools.permutations(range(n)):
        prod = 1
        for i in range(n):
            prod = prod * a[i][sigma[i]]
            if prod == 0:
                break
        total = total + prod
    return as_scalar(total)


def perm_det_mod2_check(m) -> bool:
    a, _ = _field_rows(m)
    for r in a:
        for x in r:
            if x not in (0, 1):
                raise ValueError("perm_det_mod2_check expects a 0/1 matrix")
    p = permanent(a).re
    d = determinant(a).re
    return (p.numerator - d.numerator) % 2 == 0


def permanent_mod(m, modulus: int) -> int:
    """Permanent of an integer matrix reduced modulo ``modulus``."""
    a, _ = _field_rows(m)
    for r in a:
        for x in r:
            if not isinstance(x, Fraction) or x.denominator != 1:
                raise ValueError("modular permanent needs integer entries")
    return permanent(a).re.numerator % modulus


# ---------------------------------------------------------------------------
# Multi-modular Pfaffian of integer skew matrices.  Used by the FKT evaluator
# on large gadget graphs where rational elimination is too slow.  The result
# is exact: enough primes are used to cover the Hadamard bound.

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_stream():
    p = (1 << 31) - 1
    while True:
        if _is_prime(p):
            yield p
        p -= 2


_PRIMES: list[int] = []


def _primes(count: int) -> list[int]:
    if len(_PRIMES) < count:
        gen = _prime_stream()
        _PRIMES.clear()
        for _ in range(count):
            _PRIMES.append(next(gen))
    return _PRIMES[:count]


def _pfaffian_mod_p(a: np.ndarray, p: int) -> int:
    a = a % p
    n = a.shape[0]
    pf = 1
    for k in range(0, n - 1, 2):
        row = a[k, k + 1:]
        nz = np.flatnonzero(row)
        if nz.size == 0:
            return 0
        j = k + 1 + int(nz[0])
        if j != k + 1:
            a[[k + 1, j], :] = a[[j, k + 1], :]
            a[:, [k + 1, j]] = a[:, [j, k + 1]]
            pf = -pf
        b = int(a[k, k + 1])
        pf = pf * b % p
        if k + 2 >= n:
            continue
        binv = pow(b, p - 2, p)
        u = a[k, k + 2:] * binv % p
        v = a[k + 1, k + 2:]
        if not u.any() and not v.any():
            continue
        upd = (np.outer(v, u) % p - np.outer(u, v) % p) % p
        a[k + 2:, k + 2:] = (a[k + 2:, k + 2:] + upd) % p
    return pf % p


def pfaffian_integer(a: Sequence[Sequence[int]]) -> int:
    """Exact Pfaffian of a skew integer matrix via CRT over 31-bit primes."""
    n = len(a)
    if n % 2:
        raise DimensionError("Pfaffian needs an even dimension")
    if n == 0:
        return 1
    # |Pf|^4 = det^2 <= prod ||row||^2
    h = 1
    for r in a:
        s = sum(int(x) * int(x) for x in r)
        if s == 0:
            return 0
        h *= s
    arr = np.array(a, dtype=np.int64) if max(abs(int(x)) for r in a for x in r) < (1 << 62) else None
    if arr is None:
        return int(_pfaffian_inplace([[Fraction(int(x)) for x in r] for r in a]))
    residues, moduli = [], []
    prod = 1
    count = 0
    while prod ** 4 <= 16 * h:
        count += 1
        p = _primes(count)[-1]
        residues.append(_pfaffian_mod_p(arr.copy(), p))
        moduli.append(p)
        prod *= p
    x = 0
    for r, p in zip(residues, moduli):
        q = prod // p
        x += r * q * pow(q, -1, p)
    x %= prod
    if x > prod // 2:
        x -= prod
    return x
