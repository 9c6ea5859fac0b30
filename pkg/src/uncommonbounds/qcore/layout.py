"""Named tensor-factor layouts for dense state vectors and density matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

import numpy as np


class DimensionError(ValueError):
    """Raised when array shapes or register dimensions are incompatible."""


RegisterSpec = Union[Tuple[str, int], Sequence]


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered list of named registers.

    The flat basis index is row-major over the registers in declared order, so
    for registers ``(A, B, R)`` the index of ``|a b r>`` is
    ``(a * dim_B + b) * dim_R + r``.
    """

    registers: Tuple[Tuple[str, int], ...]

    def __init__(self, registers: Iterable[RegisterSpec]):
        regs = tuple((str(name), int(dim)) for name, dim in registers)
        if not regs:
            raise ValueError("a layout needs at least one register")
        names = [n for n, _ in regs]
        if len(set(names)) != len(names):
            raise ValueError(f"register names must be unique, got {names}")
        for name, dim in regs:
            if dim < 1:
                raise DimensionError(f"register {name!r} has dimension {dim} < 1")
        object.__setattr__(self, "registers", regs)

    @classmethod
    def of(cls, **dims: int) -> "RegisterLayout":
        """Shorthand: ``RegisterLayout.of(A=2, B=2, R=4)``."""
        return cls(dims.items())

    @classmethod
    def qubits(cls, **n_qubits: int) -> "RegisterLayout":
        return cls((name, 2**n) for name, n in n_qubits.items())

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.registers)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(d for _, d in self.registers)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    def dim(self, name: str) -> int:
        return self.dims[self.position(name)]

    def position(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown register {name!r}; layout has {self.names}") from None

    def positions(self, names: Iterable[str]) -> Tuple[int, ...]:
        """Positions of ``names`` sorted into declared order."""
        return tuple(sorted(self.position(n) for n in set(names)))

    def subset(self, names: Iterable[str]) -> "RegisterLayout":
        return RegisterLayout(self.registers[p] for p in self.positions(names))

    def concat(self, other: "RegisterLayout") -> "RegisterLayout":
        clash = set(self.names) & set(other.names)
        if clash:
            raise ValueError(f"register name collision: {sorted(clash)}")
        return RegisterLayout(self.registers + other.registers)

    def flat_index(self, digits: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(digits), self.dims))

    def to_dict(self) -> list:
        return [{"name": n, "dim": d} for n, d in self.registers]

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}:{d}" for n, d in self.registers)
        return f"RegisterLayout({inner})"
