"""Vertex signatures f : {0,1}^d -> Scalar.

Bit i of an assignment belongs to the i-th incident (or dangling) edge and
is written left to right, so PASS(1010) means N and S active.  The table
index of a bit string is its big-endian value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .scalar import Scalar, as_scalar

Bits = tuple  # tuple of 0/1 ints


class ArityError(ValueError):
    pass


def bits_to_index(bits: Bits) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    return idx


def index_to_bits(idx: int, d: int) -> Bits:
    return tuple((idx >> (d - 1 - i)) & 1 for i in range(d))


def parse_bits(text: str) -> Bits:
    text = text.replace(" ", "").replace("_", "")
    if any(c not in "01" for c in text):
        raise ValueError(f"not a bit string: {text!r}")
    return tuple(int(c) for c in text)


def bits_str(bits: Bits) -> str:
    return "".join(str(b) for b in bits)


class Signature:
    arity: int

    def __call__(self, bits: Bits) -> Scalar:
        bits = tuple(bits)
        if len(bits) != self.arity:
            raise ArityError(f"signature of arity {self.arity} evaluated on {len(bits)} bits")
        return self._eval(bits)

    def _eval(self, bits: Bits) -> Scalar:
        raise NotImplementedError

    def support(self) -> Iterator[tuple[Bits, Scalar]]:
        """Nonzero entries.  Subclasses override with something faster."""
        for bits in itertools.product((0, 1), repeat=self.arity):
            val = self._eval(bits)
            if not val.is_zero():
                yield bits, val

    def table(self) -> "DenseTable":
        vals = [Scalar(0)] * (1 << self.arity)
        for bits, val in self.support():
            vals[bits_to_index(bits)] = val
        return DenseTable(tuple(vals))


@dataclass(frozen=True)
class DenseTable(Signature):
    values: tuple

    def __post_init__(self):
        n = len(self.values)
        if n == 0 or n & (n - 1):
            raise ArityError(f"table length {n} is not a power of two")
        object.__setattr__(self, "values", tuple(as_scalar(v) for v in self.values))

    @property
    def arity(self) -> int:
        return len(self.values).bit_length() - 1

    def _eval(self, bits):
        return self.values[bits_to_index(bits)]

    def support(self):
        d = self.arity
        for idx, val in enumerate(self.values):
            if not val.is_zero():
                yield index_to_bits(idx, d), val

    def table(self):
        return self


_PASS = {
    (0, 0, 0, 0): 1,
    (1, 0, 1, 0): 1,
    (0, 1, 0, 1): 1,
    (1, 1, 1, 1): -1,
}


def _pre_table() -> dict:
    t = {y + (0, 0): v for y, v in _PASS.items()}
    # switch states: edge 5 carries the top half, edge 6 the bottom half
    t[(1, 0, 1, 0, 1, 1)] = 1   # NS 11
    t[(1, 1, 1, 1, 1, 1)] = 1   # NSWE 11
    t[(1, 0, 0, 0, 0, 1)] = 1   # N 01
    t[(1, 1, 0, 1, 0, 1)] = 1   # NWE 01
    t[(0, 0, 1, 0, 1, 0)] = 1   # S 10
    t[(0, 1, 1, 1, 1, 0)] = 1   # SWE 10
    return t


def _act_table() -> dict:
    t = {y + (0, 0): v for y, v in _PASS.items()}
    t[(1, 0, 1, 0, 1, 1)] = 1
    t[(1, 1, 1, 1, 1, 1)] = 1
    return t


_FIXED = {"PASS": (4, _PASS), "PRE": (6, _pre_table()), "ACT": (6, _act_table())}
BUILTIN_NAMES = ("HW=1", "HW=0", "EVEN", "ODD", "PASS", "PRE", "ACT")


@dataclass(frozen=True)
class Builtin(Signature):
    name: str
    arity: int = field(default=-1)

    def __post_init__(self):
        if self.name not in BUILTIN_NAMES:
            raise ValueError(f"unknown builtin signature {self.name!r}")
        if self.name in _FIXED:
            fixed = _FIXED[self.name][0]
            if self.arity == -1:
                object.__setattr__(self, "arity", fixed)
            elif self.arity != fixed:
                raise ArityError(f"{self.name} has arity {fixed}, not {self.arity}")
        elif self.arity < 0:
            raise ArityError(f"{self.name} needs an explicit arity")

    def _eval(self, bits):
        name = self.name
        if name in _FIXED:
            return Scalar(_FIXED[name][1].get(bits, 0))
        hw = sum(bits)
        if name == "HW=1":
            return Scalar(int(hw == 1))
        if name == "HW=0":
            return Scalar(int(hw == 0))
        if name == "EVEN":
            return Scalar(int(hw % 2 == 0))
        return Scalar(int(hw % 2 == 1))

    def support(self):
        d, name = self.arity, self.name
        if name in _FIXED:
            for bits, v in _FIXED[name][1].items():
                yield bits, Scalar(v)
        elif name == "HW=1":
            for i in range(d):
                yield tuple(int(j == i) for j in range(d)), Scalar(1)
        elif name == "HW=0":
            yield (0,) * d, Scalar(1)
        else:
            want = 0 if name == "EVEN" else 1
            for bits in itertools.product((0, 1), repeat=d):
                if sum(bits) % 2 == want:
                    yield bits, Scalar(1)


def HW1(d: int) -> Builtin:
    return Builtin("HW=1", d)


PASS = Builtin("PASS")
PRE = Builtin("PRE")
ACT = Builtin("ACT")


# ---------------------------------------------------------------------------
# Cell signatures of arity 4n.  Inputs decompose as x = x_N x_E x_S x_W, each
# block n bits.  A block is "one-hot at u" when only its u-th bit (1-based)
# is set.

def split_blocks(bits: Bits, n: int) -> tuple[Bits, Bits, Bits, Bits]:
    return bits[:n], bits[n:2 * n], bits[2 * n:3 * n], bits[3 * n:]


def one_hot_index(block: Bits) -> int | None:
    if sum(block) != 1:
        return None
    return block.index(1) + 1


def one_hot(u: int, n: int) -> Bits:
    return tuple(int(i == u - 1) for i in range(n))


def phi_one(bits: Bits, n: int) -> bool:
    xn, _, _, xw = split_blocks(bits, n)
    return sum(xn) == 1 and sum(xw) == 1


def phi_prop(bits: Bits, n: int) -> bool:
    xn, xe, xs, xw = split_blocks(bits, n)
    return xn == xs and xw == xe


def cell_input(u: int, v: int, n: int, *, south: int | None = None, east: int | None = None) -> Bits:
    """The input with x_W one-hot at row u and x_N one-hot at column v.

    ``south``/``east`` override the S and E blocks (default: propagate).
    """
    s = v if south is None else south
    e = u if east is None else east
    xs = one_hot(s, n) if s else (0,) * n
    xe = one_hot(e, n) if e else (0,) * n
    return one_hot(v, n) + xe + xs + one_hot(u, n)


@dataclass(frozen=True)
class CellSignature(Signature):
    """Lazy f_kappa (PROPAGATE) or g_kappa (PROPAGATE_CHECK with set A).

    Values outside phi_one are fixed to 0.
    """

    n: int
    kind: str = "PROPAGATE"
    A: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in ("PROPAGATE", "PROPAGATE_CHECK"):
            raise ValueError(f"unknown cell signature kind {self.kind!r}")
        object.__setattr__(self, "A", frozenset(tuple(p) for p in self.A))

    @property
    def arity(self) -> int:
        return 4 * self.n

    def _eval(self, bits):
        n = self.n
        if not (phi_one(bits, n) and phi_prop(bits, n)):
            return Scalar(0)
        if self.kind == "PROPAGATE":
            return Scalar(1)
        u = one_hot_index(split_blocks(bits, n)[3])
        v = one_hot_index(split_blocks(bits, n)[0])
        return Scalar(int((u, v) in self.A))

    def support(self):
        n = self.n
        for u in range(1, n + 1):
            for v in range(1, n + 1):
                if self.kind == "PROPAGATE" or (u, v) in self.A:
                    yield cell_input(u, v, n), Scalar(1)


def hw(bits: Bits) -> int:
    return sum(bits)


def all_inputs(d: int) -> Iterator[Bits]:
    return itertools.product((0, 1), repeat=d)


def phi_one_inputs(n: int) -> Iterator[Bits]:
    """All x in {0,1}^{4n} with x_N and x_W one-hot."""
    for v in range(1, n + 1):
        for u in range(1, n + 1):
            for xe in all_inputs(n):
                for xs in all_inputs(n):
                    yield one_hot(v, n) + tuple(xe) + tuple(xs) + one_hot(u, n)


def signature_equal(f: Signature, g: Signature) -> bool:
    if f.arity != g.arity:
        return False
    a, b = dict(f.support()), dict(g.support())
    return a == b
