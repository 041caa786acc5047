"""Independent cross-check by brute force: finite differences plus bisection.

The dimensionless Hamiltonian is discretized on a symmetric grid with
Dirichlet walls, the contact term entering as a single on-site spike of
size g over the grid spacing.  Eigenvalues come from Sturm-sequence
bisection and eigenvectors from inverse iteration, with no machinery
shared with the analytic solver; agreement between the two routes is the
point of this module, so nothing here may import from spectrum or
wavefunction.
"""

import dataclasses
import math

import numpy as np

from .errors import ConvergenceError

_EPS = math.ulp(1.0)
_BISECT_TOL = 1e-10
_RNG_SEED = 0x5EED


@dataclasses.dataclass(frozen=True)
class OracleConfig:
    """Discretization knobs: window half-width, interval count, state count."""

    half_width: float = 8.0
    n_intervals: int = 4000
    n_eigen: int = 8

    def __post_init__(self):
        if self.half_width < 6.0:
            raise ValueError("half_width below 6 truncates the states under test")
        if self.n_intervals < 4 or self.n_intervals % 2 != 0:
            raise ValueError("n_intervals must be even (origin on a node) and >= 4")
        if self.n_eigen < 1:
            raise ValueError("n_eigen must be at least 1")


@dataclasses.dataclass(frozen=True)
class Tridiagonal:
    """Symmetric tridiagonal operator; delta_y records the grid it came from."""

    diag: np.ndarray
    off: np.ndarray
    delta_y: float = math.nan

    def __post_init__(self):
        diag = np.array(self.diag, dtype=float)
        off = np.array(self.off, dtype=float)
        if diag.ndim != 1 or diag.size < 1:
            raise ValueError("diag must be a nonempty vector")
        if off.shape != (diag.size - 1,):
            raise ValueError("off must be one element shorter than diag")
        diag.setflags(write=False)
        off.setflags(write=False)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "off", off)

    @property
    def size(self):
        return self.diag.size


@dataclasses.dataclass(frozen=True)
class OracleSpectrum:
    """Sorted eigenvalues with parity labels and the spacing that made them."""

    epsilons: tuple
    parities: tuple
    delta_y: float

    def __post_init__(self):
        eps = tuple(float(x) for x in self.epsilons)
        par = tuple(self.parities)
        # empty parities mark an eigenvalue-only run (classification skipped)
        if par and len(eps) != len(par):
            raise ValueError("epsilons and parities must have equal length")
        if any(b <= a for a, b in zip(eps, eps[1:])):
            raise ValueError("epsilons must be strictly increasing")
        if any(p not in ("even", "odd") for p in par):
            raise ValueError("parities must be 'even' or 'odd'")
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "parities", par)


def build_hamiltonian(g, cfg=None):
    """Finite-difference Hamiltonian, already scaled so eigenvalues are epsilon.

    Interior nodes only (Dirichlet walls at +-half_width): diagonal
    1/dy^2 + y^2/2 with g/dy added on the origin node, off-diagonal
    -1/(2 dy^2).
    """
    cfg = OracleConfig() if cfg is None else cfg
    if not math.isfinite(g):
        raise ValueError("coupling must be finite")
    n = cfg.n_intervals
    delta = 2.0 * cfg.half_width / n
    ys = (np.arange(1, n) - n // 2) * delta
    diag = 1.0 / delta**2 + 0.5 * ys * ys
    diag[n // 2 - 1] += g / delta
    off = np.full(n - 2, -0.5 / delta**2)
    return Tridiagonal(diag, off, delta)


def count_below(h, x):
    """Number of eigenvalues of h strictly below x, by Sturm sign counting."""
    d = h.diag
    e = h.off
    pivmin = _EPS * max(1.0, float(np.max(np.abs(d - x))), float(np.max(np.abs(e))) if e.size else 0.0)
    # a pivot inside the pivmin band counts as negative (the standard
    # convention: it keeps the count monotone in x)
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    count = 1 if q < 0.0 else 0
    for i in range(1, d.size):
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def _gershgorin(h):
    pad = np.zeros(h.size)
    if h.size > 1:
        radius = np.abs(h.off)
        pad[:-1] += radius
        pad[1:] += radius
    return float(np.min(h.diag - pad)), float(np.max(h.diag + pad))


def _apply(h, v):
    out = h.diag * v
    if h.size > 1:
        out[:-1] += h.off * v[1:]
        out[1:] += h.off * v[:-1]
    return out


def _solve_shifted(h, shift, rhs):
    # tridiagonal Gaussian elimination with partial pivoting; the shifted
    # matrix is nearly singular on purpose, so pivoting is not optional.
    # Pivoted rows reach two places right of the diagonal, hence p, q, r.
    n = h.size
    diag = h.diag
    off = h.off
    pivmin = _EPS * max(1.0, float(np.max(np.abs(diag - shift))))
    p = np.empty(n)
    q = np.zeros(n)
    r = np.zeros(n)
    x = np.array(rhs, dtype=float)
    cur_p = diag[0] - shift
    cur_q = off[0] if n > 1 else 0.0
    cur_r = 0.0
    for i in range(n - 1):
        nxt_lead = off[i]
        nxt_q = diag[i + 1] - shift
        nxt_r = off[i + 1] if i + 1 < n - 1 else 0.0
        if abs(nxt_lead) > abs(cur_p):
            cur_p, cur_q, cur_r, nxt_lead, nxt_q, nxt_r = (
                nxt_lead, nxt_q, nxt_r, cur_p, cur_q, cur_r,
            )
            x[i], x[i + 1] = x[i + 1], x[i]
        if abs(cur_p) < pivmin:
            cur_p = pivmin if cur_p >= 0.0 else -pivmin
        m = nxt_lead / cur_p
        p[i], q[i], r[i] = cur_p, cur_q, cur_r
        cur_p = nxt_q - m * cur_q
        cur_q = nxt_r - m * cur_r
        cur_r = 0.0
        x[i + 1] -= m * x[i]
    if abs(cur_p) < pivmin:
        cur_p = pivmin if cur_p >= 0.0 else -pivmin
    p[n - 1] = cur_p
    x[n - 1] /= p[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - q[n - 2] * x[n - 1]) / p[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - q[i] * x[i + 1] - r[i] * x[i + 2]) / p[i]
    return x


def _unit(w):
    # peak-rescale before the norm: the solve can amplify past 1e154,
    # where the sum of squares overflows even though entries are finite
    peak = float(np.max(np.abs(w)))
    if not math.isfinite(peak) or peak == 0.0:
        return None
    w = w / peak
    return w / float(np.linalg.norm(w))


def _inverse_iteration(h, lam, rng, neighbors):
    scale = max(1.0, float(np.max(np.abs(h.diag))))
    for _restart in range(3):
        v = _unit(rng.standard_normal(h.size))
        rho = lam
        degenerate = False
        for _ in range(3):
            w = _unit(_solve_shifted(h, lam, v))
            if w is not None:
                for u in neighbors:
                    w = _unit(w - (u @ w) * u)
                    if w is None:
                        break
            if w is None:
                degenerate = True
                break
            rho_new = float(w @ _apply(h, w))
            v = w
            if abs(rho_new - rho) < 1e-12:
                rho = rho_new
                break
            rho = rho_new
        if degenerate:
            continue
        residual = float(np.max(np.abs(_apply(h, v) - rho * v)))
        if residual <= 1e-10 * scale:
            return v
    raise ConvergenceError(
        f"inverse iteration failed near eigenvalue {lam!r} after 3 restarts"
    )


def eigen_lowest(h, k, classify=True):
    """The k smallest eigenvalues, with parity labels unless classify is off.

    Bisection on the Sturm count brackets each eigenvalue to 1e-10
    absolute; inverse iteration (fixed seed, so runs are reproducible)
    recovers a vector per eigenvalue for the parity call.  Vectors are
    reorthogonalized against neighbors closer than 1e-6, which this
    problem does not produce but costs nothing to guard against.
    Matrices without mirror symmetry have no parity to report; pass
    classify=False to get the eigenvalues alone.
    """
    if not 1 <= k <= h.size:
        raise ValueError(f"need 1 <= k <= {h.size}, got {k}")
    glo, ghi = _gershgorin(h)
    eigenvalues = []
    lo_start = glo
    for j in range(1, k + 1):
        lo, hi = lo_start, ghi
        while hi - lo > _BISECT_TOL:
            mid = 0.5 * (lo + hi)
            if count_below(h, mid) >= j:
                hi = mid
            else:
                lo = mid
        eigenvalues.append(0.5 * (lo + hi))
        lo_start = lo
    if not classify:
        return OracleSpectrum(tuple(eigenvalues), (), h.delta_y)
    rng = np.random.default_rng(_RNG_SEED)
    vectors = []
    parities = []
    for j, lam in enumerate(eigenvalues):
        neighbors = [vectors[i] for i in range(j) if abs(eigenvalues[i] - lam) < 1e-6]
        vec = _inverse_iteration(h, lam, rng, neighbors)
        vectors.append(vec)
        parities.append(classify_parity(vec))
    return OracleSpectrum(tuple(eigenvalues), tuple(parities), h.delta_y)


def classify_parity(vector):
    """Label a vector on a symmetric grid by its dominant mirror symmetry."""
    v = np.asarray(vector, dtype=float)
    mirrored = v[::-1]
    even_defect = float(np.sum(np.abs(v - mirrored)))
    odd_defect = float(np.sum(np.abs(v + mirrored)))
    scale = max(even_defect, odd_defect)
    if scale == 0.0 or abs(even_defect - odd_defect) < 0.01 * scale:
        raise ValueError("vector has no dominant parity; eigenstates should")
    return "even" if even_defect < odd_defect else "odd"
