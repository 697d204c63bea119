"""
Weakly coupled symmetric tent maps.

The p-dimensional recurrence is X_{n+1} = A . f(X_n), where f applies the
tent map 1 - a|x| to every component and A is the row-stochastic coupling
matrix with diagonal 1 - (p - 1) eps_i and off-diagonal eps_i in row i.
"""
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np
import numpy.typing as npt
from numba import njit

from cprng.config.settings import get_settings
from cprng.schemas.coupling import CouplingConfig
from cprng.utils.exceptions import CouplingError, NumericalCorruptionError, OutOfRangeError
from cprng.utils.logger import get_logger

logger = get_logger(__name__)

StateVector = npt.NDArray[np.float64]

RANGE_TOLERANCE = 2.0 ** -40
STATE_LOW = -1.0 - RANGE_TOLERANCE
STATE_HIGH = 1.0 + RANGE_TOLERANCE


def tent(x: float, a: float = 2.0) -> float:
    """Symmetric tent map f_a(x) = 1 - a|x|."""
    return 1.0 - a * abs(x)


@njit(cache=True)
def apply_step(x, a, diag, eps, f):
    """
    One in-place step; ``f`` is scratch space.

    Returns False if the new state left range, leaving ``x`` untouched.
    """
    p = x.shape[0]
    s = 0.0
    for j in range(p):
        fj = 1.0 - a * abs(x[j])
        f[j] = fj
        s += fj
    for j in range(p):
        # equal off-diagonals: A.f reduces to d_j f_j + eps_j (S - f_j)
        v = diag[j] * f[j] + eps[j] * (s - f[j])
        if not (v >= STATE_LOW and v <= STATE_HIGH):
            return False
        f[j] = v
    for j in range(p):
        x[j] = f[j]
    return True


@njit(cache=True)
def _advance(x, a, diag, eps, count, out):
    """
    Advance ``x`` in place by ``count`` steps.

    Row k of ``out`` receives the state after step k + 1 unless ``out`` has
    no rows. Returns the number of completed steps; fewer than ``count``
    means a component left [STATE_LOW, STATE_HIGH] or became NaN.
    """
    p = x.shape[0]
    f = np.empty(p)
    store = out.shape[0] > 0
    for k in range(count):
        if not apply_step(x, a, diag, eps, f):
            return k
        if store:
            for j in range(p):
                out[k, j] = x[j]
    return count


@dataclass(frozen=True)
class CouplingMatrix:
    """p x p coupling matrix; row i is eps_i off the diagonal."""

    entries: npt.NDArray[np.float64]

    @property
    def p(self) -> int:
        return self.entries.shape[0]

    @property
    def diagonal(self) -> npt.NDArray[np.float64]:
        return np.ascontiguousarray(np.diag(self.entries))

    @property
    def off_diagonal(self) -> npt.NDArray[np.float64]:
        """The per-row coupling constant (0 for p = 1)."""
        if self.p == 1:
            return np.zeros(1)
        return np.ascontiguousarray(self.entries[np.arange(self.p), (np.arange(self.p) + 1) % self.p])

    def apply(self, values: Sequence[float]) -> npt.NDArray[np.float64]:
        """Plain matrix-vector product, used as a reference."""
        return self.entries @ np.asarray(values, dtype=np.float64)


def build_coupling_matrix(config: CouplingConfig) -> CouplingMatrix:
    """
    Build the coupling matrix of a configuration.

    Raises:
        CouplingError: If p < 1 or a coupling constant lies outside [0, 1/(p-1))
    """
    p = config.p
    if p < 1:
        raise CouplingError(f"dimension p={p} must be >= 1")
    eps = np.asarray(config.eps_vector, dtype=np.float64)
    if eps.shape != (p,):
        raise CouplingError(f"expected {p} coupling constants, got {eps.size}")
    if not np.all(eps >= 0.0):
        raise CouplingError("coupling constants must be >= 0")

    diagonal = 1.0 - (p - 1) * eps
    if not np.all(diagonal > 0.0):
        raise CouplingError(f"coupling constants must be < 1/(p-1) for p={p}")

    entries = np.repeat(eps[:, np.newaxis], p, axis=1)
    np.fill_diagonal(entries, diagonal)
    return CouplingMatrix(entries=entries)


class GeneratorState:
    """
    Sequential stream of state vectors of the coupled system.

    The first ``q`` steps form the transient: they are taken but never
    emitted by ``iterate``/``iterate_chunks``. A generator must not be shared
    mutably between threads; create one per worker instead.
    """

    def __init__(
        self,
        config: CouplingConfig,
        x0: Sequence[float],
        transient: Optional[int] = None,
    ):
        """
        Initialize from a configuration and an explicit initial vector.

        Args:
            config: Coupling configuration
            x0: Initial state, p components in [-1, 1]
            transient: Steps discarded before emission (default from settings)
        """
        self.config = config
        self.matrix = build_coupling_matrix(config)
        self.current = check_state(x0, config.p)
        self.n = 0
        self.q = get_settings().DEFAULT_TRANSIENT if transient is None else int(transient)
        if self.q < 0:
            raise ValueError("transient must be >= 0")
        self._a = float(config.a)
        self._diag = self.matrix.diagonal
        self._eps = self.matrix.off_diagonal
        self._no_rows = np.empty((0, config.p))

    @property
    def p(self) -> int:
        return self.config.p

    @property
    def kernel_params(self):
        """(a, diagonal, off-diagonal) as handed to the compiled kernels."""
        return self._a, self._diag, self._eps

    @property
    def emitted(self) -> int:
        """Number of post-transient steps taken so far."""
        return max(0, self.n - self.q)

    def _run(self, count: int, out: npt.NDArray[np.float64]) -> None:
        done = _advance(self.current, self._a, self._diag, self._eps, count, out)
        self.n += done
        if done != count:
            raise NumericalCorruptionError(
                f"state left [-1, 1] or became non-finite at step {self.n + 1}: {self.current.tolist()}",
                step=self.n + 1,
            )

    def step(self) -> StateVector:
        """Take one step and return a copy of the new state."""
        self._run(1, self._no_rows)
        return self.current.copy()

    def advance(self, count: int) -> None:
        """Take ``count`` steps without recording them."""
        if count < 0:
            raise ValueError("count must be >= 0")
        self._run(count, self._no_rows)

    def warm_up(self) -> None:
        """Consume whatever is left of the transient."""
        remaining = self.q - self.n
        if remaining > 0:
            logger.debug(f"Discarding {remaining} transient steps")
            self.advance(remaining)

    def iterate_chunks(self, count: int, chunk_size: Optional[int] = None) -> Iterator[npt.NDArray[np.float64]]:
        """
        Take ``count`` steps, yielding the emitted states in (k, p) blocks.

        The first max(0, q - n) steps are transient and not yielded.
        """
        if count < 0:
            raise ValueError("count must be >= 0")
        chunk_size = chunk_size or get_settings().CHUNK_SIZE

        skip = min(count, max(0, self.q - self.n))
        if skip:
            self.advance(skip)
        remaining = count - skip
        while remaining > 0:
            k = min(chunk_size, remaining)
            out = np.empty((k, self.p))
            self._run(k, out)
            remaining -= k
            yield out

    def iterate(self, count: int) -> npt.NDArray[np.float64]:
        """Take ``count`` steps and return the emitted states as one (m, p) array."""
        blocks = list(self.iterate_chunks(count))
        if not blocks:
            return np.empty((0, self.p))
        return np.concatenate(blocks)

    def stream(self, total: int, chunk_size: Optional[int] = None) -> Iterator[npt.NDArray[np.float64]]:
        """Warm up, then yield ``total`` post-transient states in blocks."""
        self.warm_up()
        return self.iterate_chunks(total, chunk_size)


def check_state(x: Sequence[float], p: int) -> StateVector:
    """
    Copy and validate a state vector.

    Raises:
        OutOfRangeError: If the vector has the wrong length or leaves [-1, 1]
    """
    state = np.array(x, dtype=np.float64)
    if state.shape != (p,):
        raise OutOfRangeError(f"expected {p} components, got {state.size}")
    if not np.all(np.isfinite(state)) or np.any(np.abs(state) > 1.0):
        raise OutOfRangeError(f"initial components must lie in [-1, 1]: {state.tolist()}")
    return state
