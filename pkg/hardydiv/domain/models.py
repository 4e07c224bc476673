"""
Core data models for hardydiv.

Models use dataclasses and provide to_dict() for JSON serialization.
Sequence weights are stored as natural logarithms of their terms: power-type
weights such as C r^i underflow in linear space long before N = 10^3.
"""

import hashlib
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Callable, Optional

import numpy as np

from hardydiv.core.errors import DataError, DomainError

LogGenerator = Callable[[np.ndarray], np.ndarray]


class Verdict(str, Enum):
    """Finiteness verdict for a truncated supremum."""
    FINITE = "finite"
    DIVERGENT = "divergent"
    UNDETERMINED = "undetermined"


class WeightKind(str, Enum):
    """Weight family."""
    POWER = "power"
    LOG_POWER = "log_power"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class Exponents:
    """Conjugate exponents p, q > 1 with 1/p + 1/q = 1."""
    p: float
    q: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.p) and self.p > 1.0):
            raise DomainError(f"Exponent p must be finite and > 1, got {self.p}", parameter="p")
        if abs(1.0 / self.p + 1.0 / self.q - 1.0) > 1e-14:
            raise DomainError(
                f"Exponents {self.p}, {self.q} are not conjugate", parameter="q"
            )

    @classmethod
    def from_p(cls, p: float) -> "Exponents":
        if not (np.isfinite(p) and p > 1.0):
            raise DomainError(f"Exponent p must be finite and > 1, got {p}", parameter="p")
        q = 2.0 if p == 2.0 else p / (p - 1.0)
        return cls(p=float(p), q=float(q))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class SequenceWeight:
    """
    Positive weight sequence w_1, w_2, ... held in log space.

    Either a generator (indices -> log terms, indices start at 1) or a fixed
    table of log terms. `truncation` is the default N used by callers that do
    not pass one explicitly.
    """
    truncation: int
    log_generator: Optional[LogGenerator] = None
    log_table: Optional[np.ndarray] = None
    label: str = ""
    # (ln scale, ln ratio) when the terms are exactly scale * ratio^i
    log_geometric: Optional[tuple[float, float]] = None

    def __post_init__(self) -> None:
        if self.truncation < 1:
            raise DomainError(
                f"Truncation must be >= 1, got {self.truncation}", parameter="N"
            )
        if (self.log_generator is None) == (self.log_table is None):
            raise DataError("SequenceWeight needs exactly one of generator or table")
        if self.log_table is not None:
            table = np.asarray(self.log_table, dtype=float)
            _validate_log_terms(table, self.label)
            object.__setattr__(self, "log_table", table)

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Any, label: str = "") -> "SequenceWeight":
        """Tabulated weight from linear-space terms (all must be positive)."""
        values = np.asarray(terms, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DataError("Weight terms must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            bad = int(np.flatnonzero(~(np.isfinite(values) & (values > 0.0)))[0]) + 1
            raise DataError(
                f"Weight term {bad} is not strictly positive and finite",
                details={"index": bad, "label": label},
            )
        return cls(truncation=values.size, log_table=np.log(values), label=label)

    @classmethod
    def from_log_terms(cls, log_terms: Any, label: str = "") -> "SequenceWeight":
        table = np.asarray(log_terms, dtype=float)
        if table.ndim != 1 or table.size == 0:
            raise DataError("Weight log terms must be a non-empty 1-D sequence")
        return cls(truncation=table.size, log_table=table, label=label)

    @classmethod
    def from_log_generator(
        cls, generator: LogGenerator, truncation: int, label: str = ""
    ) -> "SequenceWeight":
        return cls(truncation=truncation, log_generator=generator, label=label)

    @classmethod
    def constant(cls, value: float, truncation: int, label: str = "") -> "SequenceWeight":
        if not (np.isfinite(value) and value > 0.0):
            raise DataError(f"Constant weight must be positive, got {value}")
        log_value = float(np.log(value))
        return cls.from_log_generator(
            lambda idx: np.full(idx.shape, log_value), truncation, label or f"const({value})"
        )

    @classmethod
    def geometric(
        cls, scale: float, ratio: float, truncation: int, label: str = ""
    ) -> "SequenceWeight":
        """Terms scale * ratio^i."""
        if not (scale > 0.0 and ratio > 0.0):
            raise DataError("Geometric weight needs positive scale and ratio")
        return cls.from_log_geometric(
            float(np.log(scale)),
            float(np.log(ratio)),
            truncation,
            label or f"geometric({scale:g}, {ratio:g})",
        )

    @classmethod
    def from_log_geometric(
        cls, log_scale: float, log_ratio: float, truncation: int, label: str = ""
    ) -> "SequenceWeight":
        """Terms exp(log_scale + i log_ratio); sums over them have closed forms."""
        return cls(
            truncation=truncation,
            log_generator=lambda idx: log_scale + idx * log_ratio,
            label=label,
            log_geometric=(float(log_scale), float(log_ratio)),
        )

    @classmethod
    def power(cls, exponent: float, truncation: int, label: str = "") -> "SequenceWeight":
        """Terms i^exponent."""
        return cls.from_log_generator(
            lambda idx: exponent * np.log(idx), truncation, label or f"i^{exponent:g}"
        )

    # ------------------------------------------------------------------
    # Access
    # ------------------------------------------------------------------

    @property
    def is_tabulated(self) -> bool:
        return self.log_table is not None

    def available(self, n: int) -> bool:
        """Whether n terms can be produced."""
        return self.log_table is None or n <= self.log_table.size

    def log_terms(self, n: Optional[int] = None) -> np.ndarray:
        """ln w_i for i = 1..n."""
        n = self.truncation if n is None else int(n)
        if n < 1:
            raise DomainError(f"Truncation must be >= 1, got {n}", parameter="N")
        if self.log_table is not None:
            if n > self.log_table.size:
                raise DataError(
                    f"Tabulated weight has {self.log_table.size} terms, {n} requested",
                    details={"label": self.label},
                )
            return self.log_table[:n]
        indices = np.arange(1, n + 1, dtype=float)
        values = np.asarray(self.log_generator(indices), dtype=float)  # type: ignore[misc]
        if values.shape != indices.shape:
            values = np.broadcast_to(values, indices.shape).copy()
        _validate_log_terms(values, self.label)
        return values

    def terms(self, n: Optional[int] = None) -> np.ndarray:
        """Linear-space terms (may underflow to 0 for fast-decaying weights)."""
        return np.exp(self.log_terms(n))

    def scaled(self, factor: float) -> "SequenceWeight":
        """Weight multiplied by a positive constant."""
        if not factor > 0.0:
            raise DataError(f"Scale factor must be positive, got {factor}")
        shift = float(np.log(factor))
        if self.log_table is not None:
            return SequenceWeight(
                truncation=self.truncation, log_table=self.log_table + shift, label=self.label
            )
        base = self.log_generator
        return SequenceWeight(
            truncation=self.truncation,
            log_generator=lambda idx: base(idx) + shift,  # type: ignore[misc]
            label=self.label,
            log_geometric=(
                None
                if self.log_geometric is None
                else (self.log_geometric[0] + shift, self.log_geometric[1])
            ),
        )

    def with_truncation(self, n: int) -> "SequenceWeight":
        return SequenceWeight(
            truncation=n,
            log_generator=self.log_generator,
            log_table=self.log_table,
            label=self.label,
            log_geometric=self.log_geometric,
        )


def _validate_log_terms(log_terms: np.ndarray, label: str) -> None:
    # -inf is a zero term, +inf an infinite one; nan anything else
    bad = ~np.isfinite(log_terms)
    if np.any(bad):
        index = int(np.flatnonzero(bad)[0]) + 1
        raise DataError(
            f"Weight term {index} is not strictly positive and finite",
            details={"index": index, "label": label},
        )


@dataclass(frozen=True)
class StarShapeCert:
    """
    Star-shape certificate for one strip of the cusp partition.

    The strip lies in a ball of radius R and is star-shaped with respect to
    the ball of radius r around `center`.
    """
    gamma: float
    i: int
    R: float
    r: float
    rho: float
    center: tuple[float, float]

    @property
    def radius_ratio(self) -> float:
        return self.R / self.r

    @property
    def cd_bound(self) -> float:
        """Constant 2R/r of the local divergence estimate."""
        return 2.0 * self.R / self.r

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["center"] = list(self.center)
        data["cd_bound"] = self.cd_bound
        return data


@dataclass
class WeightSpec:
    """
    Weight omega(x1) > 0 depending on x1 only.

    Power: x1^beta. LogPower: (1 - ln x1)^alpha. Tabulated: samples over (0, 1].
    """
    kind: WeightKind
    beta: Optional[float] = None
    alpha: Optional[float] = None
    table_x: Optional[np.ndarray] = field(default=None, repr=False)
    table_w: Optional[np.ndarray] = field(default=None, repr=False)
    label: str = ""

    @property
    def key(self) -> tuple:
        """Hashable identity used for cache keys and report rows."""
        if self.kind is WeightKind.POWER:
            return (self.kind.value, float(self.beta))  # type: ignore[arg-type]
        if self.kind is WeightKind.LOG_POWER:
            return (self.kind.value, float(self.alpha))  # type: ignore[arg-type]
        digest = hashlib.sha256(self.table_x.tobytes() + self.table_w.tobytes()).hexdigest()[:16]  # type: ignore[union-attr]
        return (self.kind.value, digest)

    def describe(self) -> str:
        if self.label:
            return self.label
        if self.kind is WeightKind.POWER:
            return f"x1^{self.beta:g}"
        if self.kind is WeightKind.LOG_POWER:
            return f"(1-ln x1)^{self.alpha:g}"
        return f"tabulated[{len(self.table_x)}]"  # type: ignore[arg-type]

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"kind": self.kind.value, "label": self.describe()}
        if self.beta is not None:
            data["beta"] = self.beta
        if self.alpha is not None:
            data["alpha"] = self.alpha
        if self.table_x is not None:
            data["samples"] = int(len(self.table_x))
        return data
