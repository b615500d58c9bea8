"""Proof constants evaluated in log10 space.

The values are far below float range (log10 eps is around -10^4 already for
Delta = 3), so every quantity is carried as its base-10 logarithm and only
rendered as a decimal string for display.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import InvalidInput

# The z margin is zero in exact arithmetic; in floats it is a difference of
# numbers of size |log10 eps|, so the tolerance scales with that.
_Z_TOL = 1e-12


def render(log10_value: float) -> str:
    """Scientific notation for 10**log10_value without leaving log space."""
    e = math.floor(log10_value)
    mant = 10 ** (log10_value - e)
    if mant >= 9.9995:
        mant, e = 1.0, e + 1
    return f"{mant:.3f}e{e:+d}"


@dataclass(frozen=True)
class ParameterSet:
    delta_cap: int
    k: int
    c2: float
    M_reg: float
    n_reg: float | None
    n_even: float
    n_benevides: float
    log_base: float
    log10_eps: float
    log10_beta: float
    log10_xi: float
    log10_gamma: float
    log10_d: float
    log10_c: float
    log10_m_reg: float
    log10_n0: float

    def log10_z(self, n: int, num_chords: int) -> float:
        """log10 of eps^2 n / (M_reg |D|)."""
        if n < 1 or num_chords < 1:
            raise InvalidInput("z needs n >= 1 and a nonempty chord set")
        return 2 * self.log10_eps + math.log10(n) - math.log10(self.M_reg) - math.log10(num_chords)

    def z(self, n: int, num_chords: int) -> float:
        """z as a float; 0.0 when it underflows."""
        return 10 ** self.log10_z(n, num_chords) if self.log10_z(n, num_chords) > -300 else 0.0

    def log10_chord_cap(self, n: int) -> float:
        """log10 of c*n, the largest admissible |D|."""
        return self.log10_c + math.log10(n)

    def z_margin_at_cap(self) -> float:
        """log10(z / (16 M_reg)) in the worst case |D| = c n (zero up to rounding)."""
        return 2 * self.log10_eps - math.log10(self.M_reg) - self.log10_c - math.log10(16 * self.M_reg)

    def checks(self) -> dict:
        margin_d = -40 * math.log10(self.delta_cap) - self.log10_d
        margin_z = self.z_margin_at_cap()
        return {
            "d_below_delta_pow_minus_40": margin_d > 0,
            "log10_margin_d": margin_d,
            "z_at_least_16_M_reg_when_D_le_cn": margin_z >= -_Z_TOL * max(1.0, abs(self.log10_eps)),
            "log10_margin_z": margin_z,
            "d_below_half": self.log10_d < math.log10(0.5),
            "xi_below_16_pow_minus_10": self.log10_xi < -10 * math.log10(16),
        }

    def to_json(self) -> dict:
        out = asdict(self)
        for name in ("eps", "beta", "xi", "gamma", "d", "c", "m_reg", "n0"):
            out[name] = render(out[f"log10_{name}"])
        out["checks"] = self.checks()
        return out


def paper_constants(
    delta: int,
    k: int = 1,
    c2: float = 1.0,
    M_reg: float = 100.0,
    n_even: float = 1.0,
    n_benevides: float = 1.0,
    *,
    n_reg: float | None = None,
    log_base: float = 2.0,
) -> ParameterSet:
    """Derived constants for maximum degree ``delta`` and index ``k``.

    ``c2``, ``M_reg``, ``n_reg``, ``n_even`` and ``n_benevides`` come from
    cited results with no closed form and are taken as given.  ``log_base``
    is the base of the logarithm in the exponent of eps.
    """
    if delta <= 2:
        raise InvalidInput("delta must exceed 2")
    if k < 1:
        raise InvalidInput("k must be at least 1")
    if c2 < 1:
        raise InvalidInput("c2 must be at least 1")
    if M_reg < 1:
        raise InvalidInput("M_reg must be at least 1")
    if n_even <= 0 or n_benevides <= 0:
        raise InvalidInput("n_even and n_benevides must be positive")
    lg = math.log(delta, log_base)
    exponent = 4000 * c2 * delta * lg * lg
    log10_eps = -(math.log10(200 * k) + exponent * math.log10(delta))
    log10_beta = log10_eps / 5
    log10_xi = log10_eps / 100
    log10_d = math.log10(4) + max(log10_xi, (math.log10(8 * delta) + log10_eps) / delta)
    log10_c = 2 * log10_eps - math.log10(16) - 2 * math.log10(M_reg)
    log10_m_reg = math.log10(n_even) - 6 * log10_eps
    log10_n0 = (
        math.log10(M_reg)
        + math.log10(n_benevides)
        - math.log10(4)
        - log10_eps / 2
        - math.log10(-math.expm1(log10_eps * math.log(10)))
    )
    return ParameterSet(
        delta_cap=delta,
        k=k,
        c2=c2,
        M_reg=M_reg,
        n_reg=n_reg,
        n_even=n_even,
        n_benevides=n_benevides,
        log_base=log_base,
        log10_eps=log10_eps,
        log10_beta=log10_beta,
        log10_xi=log10_xi,
        log10_gamma=log10_beta,
        log10_d=log10_d,
        log10_c=log10_c,
        log10_m_reg=log10_m_reg,
        log10_n0=log10_n0,
    )
