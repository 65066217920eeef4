"""Markov incidence matrix and stretch-factor verification.

The constructed homeomorphism carries a Markov decomposition whose
incidence matrix is block diagonal with two copies of the input matrix
(one copy per side of the doubled surface).  The stretch factor of the
map equals the spectral radius of that incidence matrix, which by block
structure equals the spectral radius of the input matrix itself.  This
module builds the incidence matrix and certifies the spectral claim.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import VerificationError
from .spectral import IntMatrix, spectral_radius_exact


def incidence_matrix(M: IntMatrix, doubled: bool = True) -> IntMatrix:
    """Incidence matrix of the Markov decomposition induced by the map.

    With ``doubled=True`` (the constructed surface is a double) the
    result is the block-diagonal matrix ``[[M, 0], [0, M]]``; otherwise
    it is ``M`` itself.
    """
    if not doubled:
        return M
    n = M.n
    rows = []
    for i in range(n):
        rows.append(list(M.entries[i]) + [0] * n)
    for i in range(n):
        rows.append([0] * n + list(M.entries[i]))
    return IntMatrix.from_rows(rows)


@dataclass(frozen=True)
class IncidenceReport:
    """Certificate comparing the incidence spectral radius to a target."""

    incidence: IntMatrix
    spectral_radius: float
    target_lambda: float
    relative_error: float

    def to_json_dict(self) -> dict:
        return {
            "incidence": self.incidence.to_lists(),
            "spectral_radius": "%.15g" % self.spectral_radius,
            "target_lambda": "%.15g" % self.target_lambda,
            "relative_error": "%.6g" % self.relative_error,
        }


def verify_stretch(M: IntMatrix, report, tol: float = 1e-9) -> IncidenceReport:
    """Check that the incidence matrix realizes the reported stretch factor.

    ``report`` is a surface report exposing ``stretch_factor`` and
    ``doubled``.  The spectral radius of the (possibly doubled)
    incidence matrix is computed by exact bisection on the
    characteristic polynomial and compared against the reported
    stretch factor.  A relative mismatch beyond ``tol`` raises
    :class:`VerificationError` carrying both values.
    """
    target_lambda = float(report.stretch_factor)
    inc = incidence_matrix(M, doubled=bool(report.doubled))
    rho = spectral_radius_exact(inc)
    rel = abs(rho - target_lambda) / target_lambda
    if rel > tol:
        raise VerificationError(
            "incidence spectral radius does not match the target stretch factor",
            expected=target_lambda,
            actual=rho,
        )
    return IncidenceReport(
        incidence=inc,
        spectral_radius=rho,
        target_lambda=target_lambda,
        relative_error=rel,
    )
