"""Complexity scores: ECI/PCI (second eigenvector), Fitness, entropy, HHI.

The country coupling matrix is
    Mtilde_cc' = (1/k_c0) * sum_p M_cp * M_c'p / k_p0
which is row-stochastic with leading eigenvalue 1 and a constant leading
eigenvector. The country score K is the eigenvector of the second-largest
eigenvalue; ECI standardizes K to mean 0 / std 1 and orients the sign so
that ECI correlates non-negatively with diversity. PCI is the product-side
analogue with the opposite orientation (anti-ubiquity).

Mtilde = D^-1 S with D = diag(k_c0) and the symmetric PSD matrix
S = M diag(1/k_p0) M^T, so Mtilde is similar to the symmetric matrix
A = D^-1/2 S D^-1/2. All eigenvalues are therefore real and in [0, 1],
and both solver paths work on A:
- dense: full symmetric eigendecomposition (default for n <= 512),
- power: power iteration after deflating the known leading eigenpair
  (u1 = D^1/2 1 normalized, lambda1 = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AtlasError, ConvergenceError, DegenerateEigenvalueError
from .matrix import AdvantageMatrix, ShareMatrix
from .registry import Registry

DENSE_MAX_N = 512
POWER_TOL = 1e-12
POWER_MAX_ITER = 10_000
# Gap below which the second eigenvalue is treated as non-simple.
DEGENERACY_GAP = 1e-10


@dataclass
class CouplingMatrix:
    """Row-stochastic coupling matrix with its ranking eigenpair."""

    codes: Registry  # countries (ECI) or products (PCI), component only
    mtilde: np.ndarray
    eigenvector: np.ndarray
    eigenvalue: float

    def __post_init__(self):
        residual = float(np.abs(self.mtilde.sum(axis=1) - 1.0).max())
        if residual > 1e-9:
            raise AtlasError(
                f"coupling matrix is not row-stochastic (residual {residual:.3e})",
                code="internal_invariant",
            )


@dataclass
class EigResult:
    coupling: CouplingMatrix
    scores: dict[str, float | None]  # standardized; None outside the component
    excluded: tuple[str, ...]  # codes outside the largest connected component


@dataclass
class FitnessResult:
    fitness: dict[str, float]
    product_quality: dict[str, float]
    iterations: int
    converged: bool


def _connected_components(adjacency: np.ndarray) -> list[list[int]]:
    n = adjacency.shape[0]
    seen = np.zeros(n, dtype=bool)
    components = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.nonzero(adjacency[i])[0]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        components.append(sorted(comp))
    return components


def _largest_component(adjacency: np.ndarray) -> list[int]:
    comps = _connected_components(adjacency)
    # Ties broken by the smallest contained index: deterministic.
    return max(comps, key=lambda c: (len(c), [-i for i in c]))


def _second_eigenpair_dense(sym: np.ndarray) -> tuple[float, np.ndarray, float]:
    """(lambda2, v2, gap to lambda3) of a symmetric matrix via full eigh."""
    eigvals, eigvecs = np.linalg.eigh(sym)
    order = np.argsort(eigvals)[::-1]
    lam2 = float(eigvals[order[1]])
    v2 = eigvecs[:, order[1]]
    gap = lam2 - float(eigvals[order[2]]) if len(order) > 2 else np.inf
    return lam2, v2, gap


def _power_deflated(
    sym: np.ndarray,
    deflate: list[tuple[float, np.ndarray]],
    tol: float,
    max_iter: int,
) -> tuple[float, np.ndarray]:
    """Dominant eigenpair of sym minus the given rank-one deflations."""
    n = sym.shape[0]
    # Deterministic start: spread over all coordinates, then orthogonalize.
    x = np.cos(np.arange(1, n + 1, dtype=float))
    for _, u in deflate:
        x -= (u @ x) * u
    norm = np.linalg.norm(x)
    if norm == 0:
        x = np.ones(n)
        for _, u in deflate:
            x -= (u @ x) * u
        norm = np.linalg.norm(x)
    x /= norm

    def apply(v: np.ndarray) -> np.ndarray:
        y = sym @ v
        for lam, u in deflate:
            y -= lam * (u @ v) * u
        return y

    lam = 0.0
    residual = np.inf
    for _ in range(max_iter):
        y = apply(x)
        y_norm = np.linalg.norm(y)
        if y_norm == 0:
            break
        x_new = y / y_norm
        lam = float(x_new @ apply(x_new))
        residual = float(np.linalg.norm(apply(x_new) - lam * x_new))
        x = x_new
        if residual < tol:
            return lam, x
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations "
        f"(residual norm {residual:.3e})",
        residual=residual,
    )


def _second_eigenpair(
    sym: np.ndarray, leading: np.ndarray, method: str
) -> tuple[float, np.ndarray]:
    """Second eigenpair of sym given its known unit leading eigenvector."""
    n = sym.shape[0]
    if n < 3:
        if n < 2:
            raise AtlasError("need at least 2 connected codes for a ranking")
        lam2, v2, _ = _second_eigenpair_dense(sym)
        return lam2, v2
    use_dense = method == "dense" or (method == "auto" and n <= DENSE_MAX_N)
    if use_dense:
        lam2, v2, gap = _second_eigenpair_dense(sym)
    else:
        lam2, v2 = _power_deflated(sym, [(1.0, leading)], POWER_TOL, POWER_MAX_ITER)
        lam3, _ = _power_deflated(
            sym, [(1.0, leading), (lam2, v2)], POWER_TOL, POWER_MAX_ITER
        )
        gap = lam2 - lam3
    if gap < DEGENERACY_GAP:
        raise DegenerateEigenvalueError(
            "second eigenvalue is (numerically) degenerate: "
            f"lambda2={lam2:.12g}, gap={gap:.3e}; ranking not identified",
            eigenvalue=lam2,
            gap=gap,
        )
    return lam2, v2


def _standardize(k: np.ndarray) -> np.ndarray:
    return (k - k.mean()) / k.std()


def _orient(scores: np.ndarray, reference: np.ndarray, anti: bool = False) -> np.ndarray:
    """Flip sign so cov(scores, reference) >= 0 (<= 0 when anti).

    When the covariance is numerically indistinguishable from zero (for
    example a constant reference marginal) the orientation is not
    identified by the rule, so fall back to a deterministic convention
    that is stable under eigenvector round-off: make the first entry with
    at least half the maximum magnitude positive.
    """
    ref = reference.astype(float)
    k = scores
    cov = float((k - k.mean()) @ (ref - ref.mean()))
    denom = float(np.linalg.norm(k - k.mean()) * np.linalg.norm(ref - ref.mean()))
    if anti:
        cov = -cov
    if denom > 0 and abs(cov) > 1e-9 * denom:
        return -k if cov < 0 else k
    # Unidentified orientation: project on a fixed incommensurate probe so
    # the sign cannot sit on a knife edge for structured eigenvectors.
    probe = np.cos(np.arange(1, len(k) + 1, dtype=float))
    t = float(probe @ k)
    return -k if t < 0 else k


def _ranking(
    m: np.ndarray, codes: Registry, reference: np.ndarray, anti: bool, method: str
) -> EigResult:
    """Shared ECI/PCI path: component, coupling, eigenpair, standardize."""
    adjacency = (m @ m.T) > 0
    comp = _largest_component(adjacency)
    excluded = tuple(c for i, c in enumerate(codes) if i not in set(comp))

    rows = np.asarray(comp)
    cols = np.nonzero(m[rows].sum(axis=0) > 0)[0]
    sub = m[np.ix_(rows, cols)]
    k0 = sub.sum(axis=1).astype(float)  # diversity-like marginal on component
    q0 = sub.sum(axis=0).astype(float)  # ubiquity-like marginal on component
    mtilde = (sub / k0[:, None]) @ (sub / q0[None, :]).T

    d_half = np.sqrt(k0)
    sym = mtilde * (d_half[:, None] / d_half[None, :])
    sym = (sym + sym.T) / 2  # remove round-off asymmetry
    leading = d_half / np.linalg.norm(d_half)

    lam2, v2 = _second_eigenpair(sym, leading, method)
    k = v2 / d_half  # back to the eigenvector of mtilde
    scores_comp = _orient(_standardize(k), reference[comp], anti=anti)

    comp_codes = Registry(codes.codes[i] for i in comp)
    coupling = CouplingMatrix(comp_codes, mtilde, k, lam2)
    scores: dict[str, float | None] = {c: None for c in codes}
    for local, i in enumerate(comp):
        scores[codes.codes[i]] = float(scores_comp[local])
    return EigResult(coupling, scores, excluded)


def eci(adv: AdvantageMatrix, method: str = "auto") -> EigResult:
    """Economic Complexity Index per country.

    Requires a trimmed advantage matrix (no zero-diversity country, no
    zero-ubiquity product). If the country co-export graph is disconnected
    the ranking is computed on the largest component and the remaining
    countries are reported as excluded with a None score.
    """
    _require_trimmed(adv)
    return _ranking(adv.m, adv.countries, adv.diversity, anti=False, method=method)


def pci(adv: AdvantageMatrix, method: str = "auto") -> EigResult:
    """Product Complexity Index: product-side analogue, anti-ubiquity sign."""
    _require_trimmed(adv)
    return _ranking(adv.m.T, adv.products, adv.ubiquity, anti=True, method=method)


def _require_trimmed(adv: AdvantageMatrix) -> None:
    if (adv.diversity == 0).any() or (adv.ubiquity == 0).any():
        raise AtlasError(
            "advantage matrix has zero-diversity countries or zero-ubiquity "
            "products; trim before computing complexity",
            code="untrimmed_matrix",
        )


def fitness(
    adv: AdvantageMatrix, tol: float = 1e-10, max_iter: int = 2000
) -> FitnessResult:
    """Fitness/quality fixed point over the binary advantage matrix.

    Simultaneous update from F = Q = 1:
        F~_c = sum_p M_cp Q_p
        Q~_p = 1 / sum_c M_cp (1 / F_c)
    with both vectors renormalized to mean 1 each iteration. Stops when the
    max relative change of both vectors falls below tol; the convergence
    flag is reported rather than raised.
    """
    _require_trimmed(adv)
    m = adv.m.astype(float)
    n_c, n_p = m.shape
    f = np.ones(n_c)
    q = np.ones(n_p)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        f_new = m @ q
        q_new = 1.0 / (m.T @ (1.0 / f))
        if not (np.isfinite(f_new).all() and np.isfinite(q_new).all()):
            raise ConvergenceError(
                f"non-finite fitness intermediate at iteration {iterations}",
                iteration=iterations,
            )
        f_new /= f_new.mean()
        q_new /= q_new.mean()
        delta = max(
            float((np.abs(f_new - f) / f).max()),
            float((np.abs(q_new - q) / q).max()),
        )
        f, q = f_new, q_new
        if delta < tol:
            converged = True
            break
    return FitnessResult(
        fitness={c: float(f[i]) for i, c in enumerate(adv.countries)},
        product_quality={p: float(q[j]) for j, p in enumerate(adv.products)},
        iterations=iterations,
        converged=converged,
    )


def entropy(s: ShareMatrix) -> dict[str, float]:
    """Shannon entropy of each country's export shares, in nats (0 ln 0 = 0)."""
    v = s.values
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(v > 0, v * np.log(v), 0.0)
    h = -terms.sum(axis=1)
    return {c: float(h[i]) for i, c in enumerate(s.countries)}


def hhi(s: ShareMatrix) -> dict[str, float]:
    """Herfindahl-Hirschman concentration: sum of squared export shares."""
    h = (s.values**2).sum(axis=1)
    return {c: float(h[i]) for i, c in enumerate(s.countries)}
