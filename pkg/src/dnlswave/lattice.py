"""Discrete nonlinear Schroedinger (DNLS) rings with variable interaction radius.

The model is a system of ODEs for complex amplitudes psi_n on a ring of N
sites, each site coupled to its Nc neighbours on either side:

    i dpsi_n/dt = sum_{j=1..Nc} kappa_j (psi_{n+j} - 2 psi_n + psi_{n-j})
                  + F(|psi_n|^2) psi_n,        indices mod N.

The nonlinearity F is continuous with F(0) = 0 and polynomially bounded,
|F(x)| <= a (1 + x^b).  The flow conserves the power  P = sum |psi_n|^2
and the energy  H = sum_n [ G(|psi_n|^2)
                            - sum_j kappa_j |psi_{n+j} - psi_n|^2 ],
with G the antiderivative of F and each ordered pair (n, n+j) counted once.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad


@dataclass(frozen=True)
class Nonlinearity:
    """On-site nonlinearity F(|psi|^2) together with its antiderivative G.

    `a` and `b` are the growth constants of the bound |F(x)| <= a(1 + x^b);
    they feed the frequency-threshold and containment estimates downstream.
    Both F and G must accept numpy arrays.
    """

    kind: str
    F: Callable
    G: Callable
    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("growth constants a, b must be positive")
        if float(self.F(0.0)) != 0.0:
            raise ValueError("nonlinearity must satisfy F(0) = 0 exactly")

    @classmethod
    def cubic(cls) -> "Nonlinearity":
        """Standard DNLS nonlinearity F(x) = x."""
        return cls(kind="cubic", F=lambda x: np.asarray(x, dtype=float) + 0.0,
                   G=lambda x: np.asarray(x, dtype=float) ** 2 / 2.0, a=1.0, b=1.0)

    @classmethod
    def saturable(cls) -> "Nonlinearity":
        """Saturable nonlinearity F(x) = x / (1 + x)."""
        x_ = lambda x: np.asarray(x, dtype=float)
        return cls(kind="saturable", F=lambda x: x_(x) / (1.0 + x_(x)),
                   G=lambda x: x_(x) - np.log1p(x_(x)), a=1.0, b=1.0)

    @classmethod
    def power(cls, sigma: float) -> "Nonlinearity":
        """Pure power nonlinearity F(x) = x**sigma, sigma > 0."""
        if sigma <= 0:
            raise ValueError("power exponent sigma must be positive")
        x_ = lambda x: np.asarray(x, dtype=float)
        return cls(kind="power", F=lambda x: x_(x) ** sigma,
                   G=lambda x: x_(x) ** (sigma + 1.0) / (sigma + 1.0),
                   a=1.0, b=float(sigma))

    @classmethod
    def from_callable(cls, F: Callable, a: float, b: float,
                      G: Callable | None = None, kind: str = "custom") -> "Nonlinearity":
        """Wrap a user-supplied F; G defaults to adaptive quadrature of F."""
        if G is None:
            def G_scalar(x):
                val, _ = quad(F, 0.0, x, epsabs=1e-10, epsrel=1e-10, limit=200)
                return val
            G = np.vectorize(G_scalar, otypes=[float])
        return cls(kind=kind, F=F, G=G, a=float(a), b=float(b))

    def growth_bound_ok(self, x_max: float = 1e6, n: int = 400) -> bool:
        """Check |F(x)| <= a(1 + x^b) on a logarithmic grid in [0, x_max]."""
        xs = np.concatenate([[0.0], np.geomspace(1e-12, x_max, n)])
        fx = np.abs(np.asarray(self.F(xs), dtype=float))
        return bool(np.all(fx <= self.a * (1.0 + xs ** self.b) * (1.0 + 1e-12)))


@dataclass(frozen=True)
class LatticeConfig:
    """Ring geometry: N sites, interaction radius Nc, couplings kappa_1..kappa_Nc."""

    N: int
    kappa: tuple
    Nc: int | None = None
    kappa_bar: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "kappa", tuple(float(k) for k in self.kappa))
        if self.Nc is None:
            object.__setattr__(self, "Nc", len(self.kappa))
        if self.N < 3 or int(self.N) != self.N:
            raise ValueError("ring size N must be an integer >= 3")
        if not 1 <= self.Nc <= (self.N - 1) // 2:
            raise ValueError("interaction radius Nc must satisfy 1 <= Nc <= (N-1)//2")
        if len(self.kappa) != self.Nc:
            raise ValueError("need exactly Nc coupling coefficients")
        object.__setattr__(self, "kappa_bar", float(sum(self.kappa)))


@dataclass(frozen=True)
class LatticeState:
    """N complex site amplitudes at time t."""

    psi: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        psi = np.array(self.psi, dtype=complex)
        if psi.ndim != 1:
            raise ValueError("psi must be a one-dimensional array")
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)


def eval_rhs(state: LatticeState, config: LatticeConfig, nl: Nonlinearity) -> np.ndarray:
    """Time derivative dpsi/dt of the ring system.

    Returns -i [ sum_j kappa_j (psi_{n+j} - 2 psi_n + psi_{n-j})
                 + F(|psi_n|^2) psi_n ], with indices wrapping mod N.
    """
    psi = state.psi
    if len(psi) != config.N:
        raise ValueError(f"state has {len(psi)} sites, config expects {config.N}")
    acc = np.zeros_like(psi)
    for j, k in enumerate(config.kappa, start=1):
        acc += k * (np.roll(psi, -j) - 2.0 * psi + np.roll(psi, j))
    return -1j * (acc + nl.F(np.abs(psi) ** 2) * psi)


def power(state: LatticeState) -> float:
    """Conserved power P = sum |psi_n|^2."""
    return float(np.sum(np.abs(state.psi) ** 2))


def energy(state: LatticeState, config: LatticeConfig, nl: Nonlinearity) -> float:
    """Conserved energy H = sum_n [G(|psi_n|^2) - sum_j kappa_j |psi_{n+j} - psi_n|^2]."""
    psi = state.psi
    if len(psi) != config.N:
        raise ValueError(f"state has {len(psi)} sites, config expects {config.N}")
    h = float(np.sum(nl.G(np.abs(psi) ** 2)))
    for j, k in enumerate(config.kappa, start=1):
        h -= k * float(np.sum(np.abs(np.roll(psi, -j) - psi) ** 2))
    return h


def plane_wave_frequency(K: float, A: float, config: LatticeConfig, nl: Nonlinearity) -> float:
    """Exact frequency of the plane wave psi_n = A exp(i(K n - Omega t)).

    Substituting the plane wave into the ring system gives
    Omega = F(A^2) - 4 sum_j kappa_j sin^2(K j / 2).
    """
    s = sum(k * np.sin(K * j / 2.0) ** 2 for j, k in enumerate(config.kappa, start=1))
    return float(nl.F(A ** 2) - 4.0 * s)


def plane_wave_state(K: float, A: float, config: LatticeConfig, nl: Nonlinearity,
                     t: float = 0.0) -> LatticeState:
    """Plane-wave state A exp(i(K n - Omega t)) with its exact frequency."""
    Omega = plane_wave_frequency(K, A, config, nl)
    n = np.arange(config.N)
    return LatticeState(A * np.exp(1j * (K * n - Omega * t)), t=t)
