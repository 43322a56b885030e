"""N-atom Bloch (atomic coherent) states in the two-mode Fock basis.

Basis index ``k`` stands for ``|N_a = N - k, N_b = k>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

__all__ = [
    "BlochState",
    "BlochVector",
    "bloch_to_fock",
    "bloch_vector",
    "population_imbalance",
    "angular_momentum_ops",
    "angular_expectations",
    "bloch_overlap",
    "uncertainty_product",
]


@dataclass(frozen=True)
class BlochState:
    """State ``exp(-i global_phase) |r, phi>`` of ``n_atoms`` bosons.

    ``global_phase`` is the full accumulated N*phi_N in radians, not reduced
    mod 2 pi.
    """

    n_atoms: int
    r: float
    phi: float
    global_phase: float = 0.0

    def __post_init__(self):
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise ValueError("n_atoms must be a positive integer")
        if not -1e-12 <= self.r <= math.pi + 1e-12:
            raise ValueError("r must lie in [0, pi]")


@dataclass(frozen=True)
class BlochVector:
    nx: float
    ny: float
    nz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz])


def _log_binom(n: int, k: np.ndarray) -> np.ndarray:
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def bloch_to_fock(s: BlochState) -> np.ndarray:
    """Fock amplitudes sqrt(C(N,k)) cos^(N-k)(r/2) sin^k(r/2) e^(i k phi), times e^(-i global_phase)."""
    n = int(s.n_atoms)
    k = np.arange(n + 1)
    c, sn = math.cos(s.r / 2), math.sin(s.r / 2)
    if n <= 20:
        binom = np.array([math.comb(n, int(j)) for j in k], dtype=float)
        mag = np.sqrt(binom) * c ** (n - k) * sn**k
    else:
        # log space keeps C(N, k) finite; 0 * log(0) must count as 0
        with np.errstate(divide="ignore", invalid="ignore"):
            la = np.where(n - k == 0, 0.0, (n - k) * np.log(c))
            lb = np.where(k == 0, 0.0, k * np.log(sn))
        mag = np.exp(0.5 * _log_binom(n, k) + la + lb)
    return mag * np.exp(1j * (k * s.phi - s.global_phase))


def bloch_vector(s: BlochState) -> BlochVector:
    return BlochVector(math.sin(s.r) * math.cos(s.phi), math.sin(s.r) * math.sin(s.phi), math.cos(s.r))


def population_imbalance(s: BlochState) -> float:
    """N_a - N_b expectation, N cos r."""
    return s.n_atoms * math.cos(s.r)


def angular_momentum_ops(n: int):
    """Schwinger operators (Jx, Jy, Jz) as dense (n+1)x(n+1) matrices."""
    k = np.arange(n + 1)
    # a^dagger b |N-k, k> = sqrt((N-k+1) k) |N-k+1, k-1>
    ab = np.zeros((n + 1, n + 1))
    ab[k[1:] - 1, k[1:]] = np.sqrt((n - k[1:] + 1) * k[1:])
    jx = 0.5 * (ab + ab.T)
    jy = (ab - ab.T) / 2j
    jz = np.diag(0.5 * (n - 2 * k)).astype(complex)
    return jx.astype(complex), jy, jz


def angular_expectations(f: np.ndarray) -> tuple[float, float, float]:
    f = np.asarray(f, dtype=complex)
    jx, jy, jz = angular_momentum_ops(f.size - 1)
    return tuple(float(np.real(np.vdot(f, op @ f))) for op in (jx, jy, jz))


def bloch_overlap(s1: BlochState, s2: BlochState) -> complex:
    """<s1|s2> in closed form."""
    if s1.n_atoms != s2.n_atoms:
        raise ValueError("overlap between states of different atom number")
    single = (math.cos(s1.r / 2) * math.cos(s2.r / 2)
              + np.exp(1j * (s2.phi - s1.phi)) * math.sin(s1.r / 2) * math.sin(s2.r / 2))
    return complex(single**s1.n_atoms * np.exp(-1j * (s2.global_phase - s1.global_phase)))


def _rotated_ops(n: int, r: float, phi: float):
    jx, jy, jz = angular_momentum_ops(n)
    ez = np.array([math.sin(r) * math.cos(phi), math.sin(r) * math.sin(phi), math.cos(r)])
    ex = np.array([math.cos(r) * math.cos(phi), math.cos(r) * math.sin(phi), -math.sin(r)])
    ey = np.cross(ez, ex)
    ops = (jx, jy, jz)
    return tuple(sum(e[i] * ops[i] for i in range(3)) for e in (ex, ey, ez))


def uncertainty_product(s: BlochState, f: np.ndarray | None = None) -> tuple[float, float]:
    """Both sides of <dJx'^2><dJy'^2> >= |<Jz'>|^2 / 4 in the frame whose z' is (r, phi).

    ``f`` overrides the Fock vector (the frame is still taken from ``s``),
    which lets a non-coherent state be tested in the same frame.
    """
    if f is None:
        f = bloch_to_fock(s)
    jxp, jyp, jzp = _rotated_ops(s.n_atoms, s.r, s.phi)

    def mean(op):
        return np.real(np.vdot(f, op @ f))

    var_x = mean(jxp @ jxp) - mean(jxp) ** 2
    var_y = mean(jyp @ jyp) - mean(jyp) ** 2
    return float(var_x * var_y), float(abs(mean(jzp)) ** 2 / 4)
