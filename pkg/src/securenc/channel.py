"""Matrix-level network channel: Y = A X + Z seen by the receiver, W = B X
seen by the eavesdropper.

The network is reduced to its transfer matrices.  A is a uniformly random
nonsingular C x C matrix (random linear network coding conditioned on
success), B picks what the adversary overhears, and Z is whatever the
adversary injects, restricted to rank at most Z_O.  The adversary chooses Z
after seeing W.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .fields import BaseField, field_for_order
from .linalg import Matrix, random_matrix, random_nonsingular, random_rank_bounded, rank


class ContractViolation(RuntimeError):
    """An adversary produced an injection outside its rank budget."""


@dataclass(frozen=True)
class CodeParams:
    """Network and code parameters.

    C is the min-cut, Z_I / Z_O the eavesdropped / jammed link counts, q the
    base field size and n the packet length in base symbols.  ``modulus``
    overrides the default irreducible polynomial of GF(q).
    """

    C: int
    Z_I: int
    Z_O: int
    q: int
    n: int
    modulus: int | None = None

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if self.Z_I < 0 or self.Z_O < 0:
            raise ValueError("Z_I and Z_O must be nonnegative")
        if self.n < self.C:
            raise ValueError(f"packet length n={self.n} must be at least C={self.C}")
        field_for_order(self.q, self.modulus)

    @property
    def secret_bit_feasible(self) -> bool:
        return self.C > self.Z_I + self.Z_O

    @property
    def positive_rate(self) -> bool:
        return self.C - self.Z_O - self.Z_I >= 1

    @property
    def field(self) -> BaseField:
        return field_for_order(self.q, self.modulus)


@dataclass(frozen=True)
class ChannelRealization:
    A: Matrix
    B: Matrix
    Z: Matrix


# An injection rule sees only the wiretap view and the adversary's own rng.
Injector = Callable[[Matrix, np.random.Generator], Matrix]


@dataclass(frozen=True)
class AdversaryStrategy:
    """How the adversary taps and jams.

    ``tap_rows`` makes the wiretap read those rows of A (edges of a cut);
    otherwise B is uniform.  ``inject`` maps (W, rng) to Z.
    """

    kind: str
    inject: Injector | None = None
    tap_rows: tuple[int, ...] | None = None
    jam_rows: tuple[int, ...] = field(default=())


def no_adversary() -> AdversaryStrategy:
    return AdversaryStrategy("none")


def random_jam_strategy(params: CodeParams) -> AdversaryStrategy:
    """Uniform wiretap plus a random injection L @ V of rank <= Z_O."""
    F = params.field

    def inject(W, rng):
        return random_rank_bounded(params.C, W.ncols, params.Z_O, F, rng)

    return AdversaryStrategy("random_jam", inject)


def cut_attack_strategy(params: CodeParams, rng: np.random.Generator) -> AdversaryStrategy:
    """Jam Z_O edges of a cut with random packets and tap Z_I others.

    The edges of the cut are the rows of A X; ``rng`` picks which rows play
    which role.
    """
    if params.Z_O + params.Z_I > params.C:
        raise ValueError("cut attack needs Z_O + Z_I <= C")
    order = rng.permutation(params.C).tolist()
    jam = tuple(sorted(order[:params.Z_O]))
    tap = tuple(order[params.Z_O:params.Z_O + params.Z_I])
    F = params.field

    def inject(W, rng):
        Z = Matrix.zeros(F, params.C, W.ncols)
        for i in jam:
            Z.rows[i] = F.random(rng, W.ncols)
        return Z

    return AdversaryStrategy("cut_attack", inject, tap_rows=tap, jam_rows=jam)


def custom_strategy(inject: Injector, name: str = "custom") -> AdversaryStrategy:
    return AdversaryStrategy(name, inject)


def transmit(X: Matrix, params: CodeParams, strategy: AdversaryStrategy,
             rng: np.random.Generator) -> tuple[Matrix, Matrix, ChannelRealization]:
    """One channel use; returns ``(Y, W, realization)``."""
    if X.nrows != params.C:
        raise ValueError(f"X must have C={params.C} rows, got {X.nrows}")
    F = X.field
    A = random_nonsingular(params.C, F, rng)
    if strategy.tap_rows is not None:
        B = A.take_rows(strategy.tap_rows)
    else:
        B = random_matrix(params.Z_I, params.C, F, rng)
    W = B @ X if params.Z_I else Matrix.zeros(F, 0, X.ncols)
    if strategy.inject is None:
        Z = Matrix.zeros(F, params.C, X.ncols)
    else:
        # the adversary draws from its own child stream
        Z = strategy.inject(W, rng.spawn(1)[0])
        if Z.shape != (params.C, X.ncols):
            raise ContractViolation(f"injection has shape {Z.shape}, expected {(params.C, X.ncols)}")
        if rank(Z) > params.Z_O:
            raise ContractViolation(f"injection rank {rank(Z)} exceeds Z_O={params.Z_O}")
    Y = A @ X + Z
    return Y, W, ChannelRealization(A, B, Z)


def strategy_by_name(name: str, params: CodeParams, rng: np.random.Generator) -> AdversaryStrategy:
    if name == "none":
        return no_adversary()
    if name == "random_jam":
        return random_jam_strategy(params)
    if name == "cut_attack":
        return cut_attack_strategy(params, rng)
    raise ValueError(f"unknown adversary {name!r}")
