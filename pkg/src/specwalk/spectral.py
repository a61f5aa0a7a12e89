"""Dense eigendecomposition of Laplacians, degeneracy clustering, DOS histograms.

Everything here works on the full spectrum: the graphs of interest stay
below a few thousand nodes, where a dense symmetric solve is cheap and,
unlike iterative methods, deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

RESIDUAL_RTOL = 1e-9


def default_cluster_tol(eigenvalues) -> float:
    """Degeneracy tolerance: 1e-8 * max(1, largest eigenvalue).

    Sits well below the integer gaps of the star/dendrimer spectra and
    well above accumulated eigensolver error.
    """
    lam_max = float(eigenvalues[-1]) if len(eigenvalues) else 0.0
    return 1e-8 * max(1.0, lam_max)


@dataclass(frozen=True)
class Spectrum:
    """Sorted Laplacian eigenvalues, optionally with orthonormal eigenvectors.

    Column k of `eigenvectors` pairs with `eigenvalues[k]`. Vector signs
    follow the convention that the first component of magnitude above
    1e-12 is positive, which keeps downstream matrices reproducible.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def has_vectors(self) -> bool:
        return self.eigenvectors is not None

    def zero_multiplicity(self, cluster_tol: float | None = None) -> int:
        """Size of the near-zero cluster; equals the number of components."""
        tol = default_cluster_tol(self.eigenvalues) if cluster_tol is None else cluster_tol
        return int(np.sum(np.abs(self.eigenvalues) <= tol))


def _fix_signs(vecs):
    v = vecs.copy()
    for k in range(v.shape[1]):
        col = v[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            v[:, k] = -col
    return v


def decompose(lap: np.ndarray, with_vectors: bool = False) -> Spectrum:
    """Eigendecompose a symmetric Laplacian, ascending eigenvalues.

    When vectors are requested the residual ||L v - lam v|| is checked
    against 1e-9 * ||L||_2 per pair; a violation or a LAPACK failure
    raises NumericalError with the matrix size.
    """
    lap = np.asarray(lap, dtype=float)
    if lap.ndim != 2 or lap.shape[0] != lap.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {lap.shape}")
    if not np.allclose(lap, lap.T, rtol=0, atol=1e-12):
        raise ValueError("matrix is not symmetric")
    try:
        if with_vectors:
            vals, vecs = np.linalg.eigh(lap)
        else:
            vals = np.linalg.eigvalsh(lap)
            vecs = None
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"symmetric eigensolver failed on a {lap.shape[0]}x{lap.shape[0]} matrix: {exc}"
        ) from exc
    if vecs is not None:
        vecs = _fix_signs(vecs)
        scale = max(1.0, float(np.abs(vals).max()))
        resid = np.linalg.norm(lap @ vecs - vecs * vals, axis=0).max()
        if resid > RESIDUAL_RTOL * scale:
            raise NumericalError(
                f"eigenpair residual {resid:.3e} exceeds {RESIDUAL_RTOL:.0e} * ||L|| "
                f"for a {lap.shape[0]}x{lap.shape[0]} matrix"
            )
    return Spectrum(eigenvalues=vals, eigenvectors=vecs)


def degeneracy_table(spectrum: Spectrum, cluster_tol: float | None = None):
    """Cluster near-equal eigenvalues; returns [(mean value, multiplicity), ...].

    A value joins the current cluster while it stays within cluster_tol of
    the running cluster mean. Multiplicities sum to n.
    """
    if cluster_tol is None:
        cluster_tol = default_cluster_tol(spectrum.eigenvalues)
    if cluster_tol <= 0:
        raise ValueError(f"cluster tolerance must be positive, got {cluster_tol}")
    table = []
    run_sum = 0.0
    run_count = 0
    for lam in spectrum.eigenvalues:
        if run_count and abs(lam - run_sum / run_count) <= cluster_tol:
            run_sum += lam
            run_count += 1
        else:
            if run_count:
                table.append((run_sum / run_count, run_count))
            run_sum, run_count = lam, 1
    if run_count:
        table.append((run_sum / run_count, run_count))
    return table


def cluster_slices(spectrum: Spectrum, cluster_tol: float | None = None):
    """Index ranges [(start, stop), ...] of the degeneracy clusters."""
    table = degeneracy_table(spectrum, cluster_tol)
    out = []
    start = 0
    for _, mult in table:
        out.append((start, start + mult))
        start += mult
    return out


@dataclass(frozen=True)
class DOSHistogram:
    """Normalized eigenvalue histogram: sum(counts * widths) = 1."""

    bin_edges: np.ndarray
    counts: np.ndarray

    def bin_mass(self) -> np.ndarray:
        return self.counts * np.diff(self.bin_edges)


def dos_histogram(spectrum: Spectrum, bins: int) -> DOSHistogram:
    if bins < 1:
        raise ValueError(f"need at least one bin, got {bins}")
    counts, edges = np.histogram(spectrum.eigenvalues, bins=bins, density=True)
    return DOSHistogram(bin_edges=edges, counts=counts)


# -- CSV export ---------------------------------------------------------------

def spectrum_csv(spectrum: Spectrum) -> str:
    lines = ["index,eigenvalue"]
    lines.extend(f"{k},{repr(float(v))}" for k, v in enumerate(spectrum.eigenvalues))
    return "\n".join(lines) + "\n"


def degeneracies_csv(spectrum: Spectrum, cluster_tol: float | None = None) -> str:
    lines = ["value,multiplicity"]
    lines.extend(f"{repr(float(v))},{m}" for v, m in degeneracy_table(spectrum, cluster_tol))
    return "\n".join(lines) + "\n"
