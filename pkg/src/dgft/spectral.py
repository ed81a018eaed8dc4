"""Graph Fourier transform, shift, variation, and frequency ordering.

The basis comes from the directed Laplacian: decompose L = V J V^{-1}
(diagonal J when a full eigenvector basis exists, Jordan blocks when not)
and expand signals in the columns of V. The analysis map is f_hat =
V^{-1} f, synthesis is f = V f_hat. For undirected graphs the basis is
orthonormal and real, and the symmetric fast path keeps it that way.

Frequency is |lambda|: total variation of a proper eigenvector under the
shift S = I - L equals |lambda| times its 1-norm, so magnitude ordering
ranks the basis from smoothest to most oscillatory.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotSymmetricError
from .graph import DirectedLaplacian, Graph, directed_laplacian, signal_values
from .linalg import (
    DEFAULT_RANK_TOL,
    DEFAULT_TIE_TOL,
    SYMMETRY_TOL,
    SpectralDecomposition,
    jordan_decompose,
    matrix_polynomial_apply,
    order_with_ties,
    symmetric_eigen_decompose,
)

# (identity tap, first-difference tap): S f = f - L f.
SHIFT_TAPS = (1.0, -1.0)


def as_laplacian(source) -> DirectedLaplacian:
    """Coerce a Graph, DirectedLaplacian, or raw matrix to a Laplacian."""
    if isinstance(source, DirectedLaplacian):
        return source
    if isinstance(source, Graph):
        return directed_laplacian(source)
    return DirectedLaplacian(np.asarray(source))


def shift(lap, f) -> np.ndarray:
    """Apply the graph shift S = I - L to a signal.

    Implemented as the two-tap polynomial (1, -1) in L through the same
    Horner routine the filter module uses, so a shift and the filter
    h = [1, -1] produce bit-identical output. On the directed cycle this
    is the classical delay: integer-valued signals come back exactly
    rotated by one position.
    """
    lap = as_laplacian(lap)
    return matrix_polynomial_apply(lap.matrix, SHIFT_TAPS, signal_values(f, lap.n))


def shift_operator(lap) -> np.ndarray:
    """Materialize S = I - L as a dense matrix."""
    lap = as_laplacian(lap)
    return np.eye(lap.n, dtype=complex) - lap.matrix


def total_variation(lap, f) -> float:
    """TV(f) = sum of |(L f)_i|: the 1-norm of the signal's local differences.

    Zero exactly on constants; for a unit proper eigenvector at lambda it
    equals |lambda| times the eigenvector's 1-norm.
    """
    lap = as_laplacian(lap)
    return float(np.sum(np.abs(lap.matrix @ signal_values(f, lap.n))))


def quadratic_form(lap, f) -> float:
    """Quadratic (2-Dirichlet) smoothness: half the squared 2-norm of L f."""
    lap = as_laplacian(lap)
    diff = lap.matrix @ signal_values(f, lap.n)
    return 0.5 * float(np.real(np.vdot(diff, diff)))


@dataclass(frozen=True)
class FrequencyOrdering:
    """Permutation of spectral indices from lowest to highest frequency.

    ``order[k]`` is the spectral index holding frequency rank ``k``;
    ``ranks`` is the inverse permutation. ``magnitudes`` holds the
    eigenvalue magnitudes sorted ascending, so it is non-decreasing by
    construction and ``magnitudes[k]`` belongs to rank ``k`` up to
    sub-tolerance noise inside a tie. ``tie_groups`` lists the groups of
    two or more indices whose magnitudes coincide within tolerance
    (conjugate pairs, for one), already in their deterministic resolved
    order: real part ascending, then imaginary part ascending, so the
    negative-imaginary half of a pair comes first.
    """

    order: tuple[int, ...]
    ranks: tuple[int, ...]
    magnitudes: tuple[float, ...]
    tie_groups: tuple[tuple[int, ...], ...]


def order_frequencies(eigenvalues, tie_tol: float = DEFAULT_TIE_TOL) -> FrequencyOrdering:
    """Rank eigenvalues by |lambda|, breaking ties by (real, imaginary).

    Magnitudes agreeing within ``tie_tol`` relative form a tie and are
    resolved by (real, imaginary) regardless of sub-tolerance magnitude
    noise. The underlying sort is stable, so repeated eigenvalues (Jordan
    chains share one value across their columns) keep their original
    relative order and chains stay contiguous, head first.
    """
    w = np.asarray(eigenvalues, dtype=complex).ravel()
    order, tie_groups = order_with_ties(w, tie_tol)
    ranks = [0] * w.size
    for rank, idx in enumerate(order):
        ranks[idx] = rank
    return FrequencyOrdering(
        order=tuple(order),
        ranks=tuple(ranks),
        magnitudes=tuple(float(m) for m in np.sort(np.abs(w))),
        tie_groups=tuple(tie_groups),
    )


@dataclass(frozen=True)
class Spectrum:
    """A signal's expansion in the graph Fourier basis.

    Entry r pairs ``eigenvalues[r]`` with coefficient ``coefficients[r]``;
    ``ordering`` ranks the entries by frequency. Rows are in spectral
    (basis column) order, not rank order.
    """

    eigenvalues: np.ndarray
    coefficients: np.ndarray
    ordering: FrequencyOrdering
    n: int = field(init=False)

    def __post_init__(self):
        w = np.asarray(self.eigenvalues, dtype=complex).ravel()
        c = np.asarray(self.coefficients, dtype=complex).ravel()
        if w.shape != c.shape:
            raise ValueError("eigenvalues and coefficients must have equal length")
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "coefficients", c)
        w.flags.writeable = False
        c.flags.writeable = False
        object.__setattr__(self, "n", int(w.size))

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.coefficients)


def gft(decomposition: SpectralDecomposition, f) -> np.ndarray:
    """Analysis: coefficients of ``f`` in the graph Fourier basis."""
    return decomposition.v_inv @ signal_values(f, decomposition.n)


def igft(decomposition: SpectralDecomposition, f_hat) -> np.ndarray:
    """Synthesis: rebuild the vertex-domain signal from its coefficients."""
    return decomposition.v @ signal_values(f_hat, decomposition.n)


def spectrum(decomposition: SpectralDecomposition, f) -> Spectrum:
    """GFT of ``f`` packaged with its eigenvalues and frequency ranking."""
    return Spectrum(
        eigenvalues=decomposition.eigenvalues.copy(),
        coefficients=gft(decomposition, f),
        ordering=order_frequencies(decomposition.eigenvalues),
    )


def _is_real_symmetric(m: np.ndarray) -> bool:
    if float(np.max(np.abs(m.imag), initial=0.0)) > SYMMETRY_TOL:
        return False
    return float(np.max(np.abs(m - m.T), initial=0.0)) <= SYMMETRY_TOL


def decompose(
    source,
    tol: float = DEFAULT_RANK_TOL,
    *,
    cluster_tol: float | None = None,
    normalize: bool = True,
    snap_constant: bool = True,
) -> SpectralDecomposition:
    """Spectral decomposition of a graph's Laplacian, picking the right path.

    Real symmetric Laplacians (undirected graphs) go through the
    orthonormal symmetric solver; everything else gets the Jordan
    treatment. Both return the same SpectralDecomposition shape, so
    callers never branch. ``normalize`` and ``snap_constant`` control the
    deterministic basis convention (unit scale, pivot phase, constant
    eigenvector snapped to ones over root n); clearing them returns the
    backend's raw columns.
    """
    lap = as_laplacian(source)
    m = lap.matrix
    if _is_real_symmetric(m):
        try:
            return symmetric_eigen_decompose(
                m, tol=tol, normalize=normalize, snap_constant=snap_constant
            )
        except NotSymmetricError:  # pragma: no cover - guarded by the check above
            pass
    return jordan_decompose(
        m, tol, cluster_tol=cluster_tol, normalize=normalize, snap_constant=snap_constant
    )
