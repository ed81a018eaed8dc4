"""Linear shift-invariant graph filters as polynomials in the Laplacian.

A filter is a tap vector h = (h_0, ..., h_M): the operator is
H = h_0 I + h_1 L + ... + h_M L^M. Every such polynomial commutes with
the shift S = I - L, and conversely (when each distinct eigenvalue of L
has a one-dimensional eigenspace) every operator commuting with the
shift is such a polynomial. Application is offered in the vertex domain
(Horner, M matrix-vector products) and in the spectral domain (scalar
multiplication per coefficient, with the triangular correction terms on
Jordan blocks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyTapsError
from .graph import signal_values
from .linalg import (
    SpectralDecomposition,
    cluster_eigenvalues,
    matrix_polynomial,
    matrix_polynomial_apply,
)
from .spectral import as_laplacian, gft, igft

# Relative commutator size below which an operator counts as shift invariant.
COMMUTATOR_TOL = 1e-10


@dataclass(frozen=True)
class LsiFilter:
    """Polynomial filter taps, lowest order first: taps[m] multiplies L^m."""

    taps: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.taps, dtype=complex).ravel().copy()
        if t.size == 0:
            raise EmptyTapsError("a filter needs at least one tap")
        t.flags.writeable = False
        object.__setattr__(self, "taps", t)

    @property
    def order(self) -> int:
        """Degree of the polynomial as given (trailing zeros included)."""
        return int(self.taps.size - 1)

    def trimmed(self) -> "LsiFilter":
        """Drop trailing exactly-zero taps; the constant tap always stays."""
        t = self.taps
        last = t.size - 1
        while last > 0 and t[last] == 0:
            last -= 1
        return LsiFilter(t[: last + 1])


def _as_filter(h) -> LsiFilter:
    return h if isinstance(h, LsiFilter) else LsiFilter(np.asarray(h))


def apply_vertex_domain(lap, h, f) -> np.ndarray:
    """Run the filter as repeated shifts: Horner in L against the signal.

    Costs exactly ``order`` matrix-vector products and never forms the
    operator matrix.
    """
    lap = as_laplacian(lap)
    filt = _as_filter(h)
    return matrix_polynomial_apply(lap.matrix, filt.taps, signal_values(f, lap.n))


def materialize(lap, h) -> np.ndarray:
    """The filter as an explicit operator matrix h(L)."""
    lap = as_laplacian(lap)
    return matrix_polynomial(lap.matrix, _as_filter(h).taps)


def _derivative_weights(taps: np.ndarray, lam: complex, size: int) -> list[complex]:
    """h(lam), h'(lam), h''(lam)/2!, ... up to the block size.

    Weight k is sum over m >= k of C(m, k) * taps[m] * lam^(m-k), the
    k-th Taylor coefficient of the tap polynomial at lam.
    """
    weights = []
    for k in range(size):
        acc = 0j
        for m in range(k, taps.size):
            acc += math.comb(m, k) * complex(taps[m]) * lam ** (m - k)
        weights.append(acc)
    return weights


def filter_response(decomposition: SpectralDecomposition, h) -> np.ndarray:
    """The filter acting on spectral coefficients: the matrix h(J).

    Diagonal when the Laplacian is diagonalizable (entry r is the scalar
    response h(lambda_r)); on a Jordan block of size s the response is
    upper triangular Toeplitz with the k-th derivative weights of the tap
    polynomial on the k-th superdiagonal, which is how a chain's
    coefficients leak into the coefficients above them.
    """
    filt = _as_filter(h)
    n = decomposition.n
    out = np.zeros((n, n), dtype=complex)
    for b in decomposition.blocks:
        weights = _derivative_weights(filt.taps, complex(b.eigenvalue), b.size)
        for i in range(b.size):
            for k in range(b.size - i):
                out[b.start + i, b.start + i + k] = weights[k]
    return out


def apply_spectral_domain(decomposition: SpectralDecomposition, h, f) -> np.ndarray:
    """Filter through the spectral domain: analyze, scale, synthesize.

    Agrees with :func:`apply_vertex_domain` up to roundoff (exactly the
    same linear map, factored differently).
    """
    f_hat = gft(decomposition, f)
    return igft(decomposition, filter_response(decomposition, h) @ f_hat)


def commutator_residual(lap, operator: np.ndarray) -> float:
    """Frobenius norm of L H - H L for a candidate operator H."""
    m = as_laplacian(lap).matrix
    op = np.asarray(operator, dtype=complex)
    return float(np.linalg.norm(m @ op - op @ m))


@dataclass(frozen=True)
class ShiftInvariance:
    """Commutation verdict with the evidence: residual and its bound.

    Truthy exactly when ``invariant`` is, so the result drops into any
    boolean context while still exposing ``residual`` (the Frobenius norm
    of L H - H L) and the ``bound`` it was compared against.
    """

    invariant: bool
    residual: float
    bound: float

    def __bool__(self) -> bool:
        return self.invariant


def is_shift_invariant(
    lap, operator: np.ndarray, tol: float = COMMUTATOR_TOL
) -> ShiftInvariance:
    """Whether an operator commutes with the graph shift.

    S = I - L commutes with H exactly when L does, so the test runs on
    the Laplacian directly. The residual is compared against
    ``tol * ||L||_F * ||H||_F``.
    """
    m = as_laplacian(lap).matrix
    op = np.asarray(operator, dtype=complex)
    bound = tol * float(np.linalg.norm(m)) * float(np.linalg.norm(op))
    residual = commutator_residual(lap, op)
    return ShiftInvariance(invariant=residual <= bound, residual=residual, bound=bound)


@dataclass(frozen=True)
class EigenvalueMultiplicity:
    eigenvalue: complex
    algebraic: int
    geometric: int


@dataclass(frozen=True)
class MultiplicityReport:
    """Geometric multiplicity per distinct eigenvalue, plus the verdict.

    ``polynomials_span_commutant`` means every distinct eigenvalue has a
    one-dimensional eigenspace, the condition under which the polynomial
    filters are the whole algebra of shift-invariant operators. A failed
    check is purely diagnostic: polynomial filters still work, they just
    no longer span everything that commutes with the shift.
    """

    entries: tuple[EigenvalueMultiplicity, ...]
    polynomials_span_commutant: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "polynomials_span_commutant",
            all(e.geometric == 1 for e in self.entries),
        )


def check_lsi_preconditions(decomposition: SpectralDecomposition) -> MultiplicityReport:
    """Group the decomposition's blocks by eigenvalue and count eigenspaces.

    Geometric multiplicity of a distinct eigenvalue is the number of
    blocks carrying it; algebraic is the total of their sizes. Distinct
    means separated by more than the decomposition's clustering tolerance.
    """
    block_values = [complex(b.eigenvalue) for b in decomposition.blocks]
    entries = []
    for cluster in cluster_eigenvalues(block_values, decomposition.cluster_tol):
        members = [decomposition.blocks[i] for i in cluster]
        entries.append(
            EigenvalueMultiplicity(
                eigenvalue=complex(np.mean([b.eigenvalue for b in members])),
                algebraic=sum(b.size for b in members),
                geometric=len(members),
            )
        )
    entries.sort(key=lambda e: (abs(e.eigenvalue), e.eigenvalue.real, e.eigenvalue.imag))
    return MultiplicityReport(entries=tuple(entries))
