"""Deformation functions f(n), generalized factorials, commutator weights.

The deformed ladder algebra acts as A|n> = sqrt(n) f(n) |n-1> and
A†|n> = sqrt(n+1) f(n+1) |n+1>.  Every series downstream pulls its
f-dependence from here, in log space: the generalized factorial
f(n)! = f(1) f(2) ... f(n) overflows as a raw product near n ~ 150.

Three kinds are supported: the harmonic limit f ≡ 1, the Pöschl-Teller
well f(n) = sqrt(n + lambda + kappa), and a user-supplied positive table.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import TruncationError

HARMONIC = "harmonic"
POSCHL_TELLER = "poschl_teller"
CUSTOM = "custom"


@dataclass(frozen=True)
class Nonlinearity:
    """Descriptor of a deformation function f(n).

    Use the factory classmethods; the constructor validates but does not
    fill defaults.  pt_lambda/pt_kappa are the potential-well parameters
    (both must be >= 1/2); custom_table lists f(1), f(2), ... explicitly.
    """

    kind: str
    pt_lambda: float | None = None
    pt_kappa: float | None = None
    custom_table: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in (HARMONIC, POSCHL_TELLER, CUSTOM):
            raise ValueError(f"unknown nonlinearity kind {self.kind!r}")
        if self.kind == POSCHL_TELLER:
            if self.pt_lambda is None or self.pt_kappa is None:
                raise ValueError("poschl_teller needs pt_lambda and pt_kappa")
            if self.pt_lambda < 0.5 or self.pt_kappa < 0.5:
                raise ValueError("poschl_teller requires pt_lambda >= 1/2 and pt_kappa >= 1/2")
        if self.kind == CUSTOM:
            if not self.custom_table:
                raise ValueError("custom kind needs a nonempty table of f values")
            if any(v <= 0 for v in self.custom_table):
                raise ValueError("custom f values must all be positive")
            # Cache cumulative log-products: entry j is ln f(1)...f(j).
            cum = np.concatenate([[0.0], np.cumsum(np.log(self.custom_table))])
            cum.flags.writeable = False
            object.__setattr__(self, "_log_cum", cum)

    @classmethod
    def harmonic(cls) -> "Nonlinearity":
        """Undeformed oscillator, f(n) = 1 for all n."""
        return cls(HARMONIC)

    @classmethod
    def poschl_teller(cls, pt_lambda: float = 1.5, pt_kappa: float = 1.5) -> "Nonlinearity":
        """Trigonometric Pöschl-Teller well, f(n) = sqrt(n + lambda + kappa)."""
        return cls(POSCHL_TELLER, pt_lambda=float(pt_lambda), pt_kappa=float(pt_kappa))

    @classmethod
    def custom(cls, values) -> "Nonlinearity":
        """Arbitrary deformation from an explicit table of f(1), f(2), ..."""
        return cls(CUSTOM, custom_table=tuple(float(v) for v in values))

    @property
    def pt_sum(self) -> float:
        """lambda + kappa, the shift appearing throughout the PT formulas."""
        if self.kind != POSCHL_TELLER:
            raise ValueError("pt_sum is defined for the poschl_teller kind only")
        return self.pt_lambda + self.pt_kappa

    def describe(self) -> dict:
        """JSON-friendly metadata for output sidecars."""
        out = {"kind": self.kind}
        if self.kind == POSCHL_TELLER:
            out["pt_lambda"] = self.pt_lambda
            out["pt_kappa"] = self.pt_kappa
        if self.kind == CUSTOM:
            out["table_length"] = len(self.custom_table)
        return out


def _check_custom_range(nl: Nonlinearity, n_max: int):
    table_len = len(nl.custom_table)
    if n_max > table_len:
        raise TruncationError(
            f"custom f table has {table_len} entries but f({n_max}) is required",
            required=int(n_max),
        )


def f_value_array(nl: Nonlinearity, n) -> np.ndarray:
    """f(n) for an array of indices n >= 0.

    Custom tables take f(0) = 1 by convention; the value never enters a
    series because every f(n) occurrence is weighted by n or starts at 1.
    """
    n = np.asarray(n)
    if n.size and n.min() < 0:
        raise ValueError("n must be nonnegative")
    if nl.kind == HARMONIC:
        return np.ones(n.shape)
    if nl.kind == POSCHL_TELLER:
        return np.sqrt(n + nl.pt_sum)
    if n.size:
        _check_custom_range(nl, int(n.max()))
    table = np.concatenate([[1.0], nl.custom_table])
    return table[np.asarray(n, dtype=np.int64)]


def f_value(nl: Nonlinearity, n: int) -> float:
    """f(n) for a single index n >= 0."""
    return float(f_value_array(nl, np.array([n]))[0])


def log_f_factorial_array(nl: Nonlinearity, n) -> np.ndarray:
    """ln[f(1) f(2) ... f(n)] for an array of indices; n = 0 gives 0."""
    n = np.asarray(n)
    if n.size and n.min() < 0:
        raise ValueError("n must be nonnegative")
    if nl.kind == HARMONIC:
        return np.zeros(n.shape)
    if nl.kind == POSCHL_TELLER:
        s = nl.pt_sum
        # sum_{j=1..n} 0.5 ln(j+s) telescopes through the gamma function.
        return 0.5 * (gammaln(n + 1.0 + s) - gammaln(1.0 + s))
    if n.size:
        _check_custom_range(nl, int(n.max()))
    return nl._log_cum[np.asarray(n, dtype=np.int64)]


def log_f_factorial(nl: Nonlinearity, n: int) -> float:
    """ln[f(1) ... f(n)] for a single index."""
    return float(log_f_factorial_array(nl, np.array([n]))[0])


def commutator_weight(nl: Nonlinearity, n: int) -> float:
    """Fock-diagonal weight of [A, A†]: (n+1) f²(n+1) − n f²(n)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    up = f_value(nl, n + 1)
    if n == 0:
        return up * up
    down = f_value(nl, n)
    return (n + 1) * up * up - n * down * down
