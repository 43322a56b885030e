"""Regime tags selecting the detuning law and the closed-form solution family."""

from __future__ import annotations

from dataclasses import dataclass

KINDS = ("on_resonant", "off_resonant", "constant_r", "external_symmetric", "external_asymmetric")


@dataclass(frozen=True)
class Regime:
    """Which relation links the detuning Delta(t) to the effective frequency.

    * ``on_resonant``: Delta = omega
    * ``off_resonant``: Delta = omega - varpi, constant Rabi frequency
    * ``constant_r``: no coupling (g = 0), r frozen
    * ``external_symmetric``: double well, delta = 0, omega = 0
    * ``external_asymmetric``: double well, delta = 0, constant omega
    """

    kind: str = "on_resonant"
    varpi: float | None = None
    omega: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown regime {self.kind!r}; expected one of {KINDS}")
        if self.kind == "off_resonant" and not self.varpi:
            raise ValueError("off-resonant regime needs a non-zero varpi")
        if self.kind == "external_asymmetric" and not self.omega:
            raise ValueError("asymmetric wells need a non-zero omega")

    @classmethod
    def on_resonant(cls):
        return cls("on_resonant")

    @classmethod
    def off_resonant(cls, varpi: float):
        return cls("off_resonant", varpi=float(varpi))

    @classmethod
    def constant_r(cls):
        return cls("constant_r")

    @classmethod
    def external_symmetric(cls):
        return cls("external_symmetric")

    @classmethod
    def external_asymmetric(cls, omega: float):
        return cls("external_asymmetric", omega=float(omega))

    @property
    def uses_off_resonant_solution(self) -> bool:
        return self.kind in ("off_resonant", "external_asymmetric")

    @property
    def rotating_frame_detuning(self) -> float:
        """omega - Delta, the constant precession rate about z in the delta frame."""
        if self.kind == "off_resonant":
            return self.varpi
        if self.kind == "external_asymmetric":
            return self.omega
        return 0.0
