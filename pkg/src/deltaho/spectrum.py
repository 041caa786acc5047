"""Bound-state spectrum of the oscillator with a contact term at the origin.

Even-parity levels solve a transcendental equation built from reciprocal
Gamma factors; odd-parity levels vanish at the origin and stay at their
unperturbed positions.  States are labeled by the real quantum number nu,
with dimensionless energy epsilon = nu + 1/2 in oscillator units.
"""

import dataclasses
import math

from .errors import BracketError, ConvergenceError
from .specfun import log_gamma, reciprocal_gamma

_EPS = math.ulp(1.0)
_MAX_DOUBLINGS = 60


@dataclasses.dataclass(frozen=True)
class EigenSolution:
    """One stationary state: parity branch, quantum label, spectral position."""

    parity: str
    nu: float
    index: int

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.index < 0:
            raise ValueError("index must be nonnegative")
        if self.parity == "odd":
            n = int(self.nu)
            if self.nu != n or n < 1 or n % 2 == 0:
                raise ValueError("odd-parity nu must be a positive odd integer")

    @property
    def epsilon(self):
        """Dimensionless energy, exactly nu + 1/2."""
        return self.nu + 0.5


@dataclasses.dataclass(frozen=True)
class SolverConfig:
    """Root-finding knobs; the defaults are final for ordinary use."""

    root_tol: float = 1e-10
    max_iter: int = 200
    nu_min: float | None = None
    n_states: int = 5

    def __post_init__(self):
        if not self.root_tol > 0.0:
            raise ValueError("root_tol must be positive")
        if self.max_iter < 10:
            raise ValueError("max_iter must be at least 10")
        if self.n_states < 1:
            raise ValueError("n_states must be at least 1")
        if self.nu_min is not None and not self.nu_min < 0.0:
            raise ValueError("nu_min must be negative when given")


def eigen_equation(nu, g):
    """Pole-free form of the even-parity eigenvalue condition.

    Returns nu/Gamma(1 - nu/2) - g/Gamma(1/2 - nu/2).  The ratio form
    nu - g*Gamma(1-nu/2)/Gamma(1/2-nu/2) has poles at even integers,
    exactly where roots pile up as g -> 0; multiplying through by the
    entire function 1/Gamma(1-nu/2) removes them without moving any root
    the search brackets can see.
    """
    return nu * reciprocal_gamma(1.0 - 0.5 * nu) - g * reciprocal_gamma(0.5 - 0.5 * nu)


def _bound_equation(nu, g):
    # log-Gamma form of the same condition, for nu <= 0 only.  The
    # reciprocal-Gamma form underflows to a flat zero once the bound state
    # sinks past nu ~ -350, destroying the sign information bisection
    # needs; this form stays O(|nu|) at any depth.  Both Gamma arguments
    # are positive here, and on nu <= 0 the two forms differ by a strictly
    # positive factor, so roots and signs agree.
    return nu - g * math.exp(log_gamma(1.0 - 0.5 * nu) - log_gamma(0.5 - 0.5 * nu))


def _bound_lower_edge(g, nu_min):
    lo = nu_min if nu_min is not None else -2.0 * max(1.0, g * g)
    if not math.isfinite(lo):
        # the bound level sits near -g^2, past the double range
        raise BracketError(
            f"bound-state search edge overflows for g={g!r}; "
            "the coupling is too strong to represent the lowest level"
        )
    for _ in range(_MAX_DOUBLINGS):
        if _bound_equation(lo, g) < 0.0:
            return lo
        lo *= 2.0
    raise BracketError(
        f"no sign change below the bound state at g={g!r} after "
        f"{_MAX_DOUBLINGS} doublings; this is a solver bug, not a physics case"
    )


def bracket_even_roots(g, n_states, nu_min=None):
    """Disjoint intervals, one per even-parity root, lowest first.

    For g > 0 the k-th root sits strictly inside (2k, 2k+1).  For g < 0
    there is a single negative root, bracketed by doubling down from
    -2*max(1, g^2); the remaining roots sit in (2k-1, 2k).
    """
    if not math.isfinite(g) or g == 0.0:
        raise ValueError("bracketing needs a finite nonzero coupling")
    if n_states < 1:
        raise ValueError("n_states must be at least 1")
    if g > 0.0:
        return [(2.0 * k, 2.0 * k + 1.0) for k in range(n_states)]
    out = [(_bound_lower_edge(g, nu_min), 0.0)]
    out.extend((2.0 * k - 1.0, 2.0 * k) for k in range(1, n_states))
    return out


def _refine_root(func, lo, hi, cfg):
    """Bisection with interleaved secant steps, confined to the bracket.

    Even-numbered steps always bisect, so the width at least halves every
    other step regardless of how the secant behaves.  Stops at a width of
    a few ulps; cfg.root_tol is the width still accepted if the iteration
    cap strikes first.
    """
    f_lo = func(lo)
    f_hi = func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]")
    for step in range(cfg.max_iter):
        if hi - lo <= 6.0 * _EPS * max(1.0, abs(lo), abs(hi)):
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if step % 2 == 1:
            cand = lo - f_lo * (hi - lo) / (f_hi - f_lo)
            if lo < cand < hi:
                mid = cand
        f_mid = func(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_hi > 0.0):
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    if hi - lo <= cfg.root_tol:
        return 0.5 * (lo + hi)
    raise ConvergenceError(
        f"bracket still {hi - lo:.3e} wide after {cfg.max_iter} refinement steps"
    )


def solve_even(g, cfg=None):
    """Lowest even-parity solutions for coupling g, ordered by energy.

    Returns cfg.n_states records carrying full-spectrum indices 0, 2, 4,
    since one odd level falls between consecutive even ones.  g = 0 is an
    exact special case: the equation degenerates and the unperturbed
    labels 0, 2, 4, ... are returned without root finding.
    """
    cfg = SolverConfig() if cfg is None else cfg
    if not math.isfinite(g):
        raise ValueError("coupling must be finite")
    if g == 0.0:
        return [EigenSolution("even", 2.0 * k, 2 * k) for k in range(cfg.n_states)]
    solutions = []
    for k, (lo, hi) in enumerate(bracket_even_roots(g, cfg.n_states, cfg.nu_min)):
        if g < 0.0 and k == 0:
            func = lambda nu: _bound_equation(nu, g)
        else:
            func = lambda nu: eigen_equation(nu, g)
        solutions.append(EigenSolution("even", _refine_root(func, lo, hi, cfg), 2 * k))
    return solutions


def solve_odd(n_states):
    """Odd-parity levels nu = 1, 3, 5, ...; the contact term cannot shift them."""
    if n_states < 1:
        raise ValueError("n_states must be at least 1")
    return [EigenSolution("odd", 2.0 * j + 1.0, 2 * j + 1) for j in range(n_states)]


def full_spectrum(g, cfg=None):
    """Lowest cfg.n_states states of both parities, ordered by energy.

    Along the merged list the parity alternates even, odd, even, ...; a
    violation would mean an even root escaped its bracket, so the pattern
    is checked rather than assumed.
    """
    cfg = SolverConfig() if cfg is None else cfg
    n = cfg.n_states
    merged = solve_even(g, dataclasses.replace(cfg, n_states=(n + 1) // 2))
    if n >= 2:
        merged = merged + solve_odd(n // 2)
    merged.sort(key=lambda s: s.epsilon)
    for position, sol in enumerate(merged):
        if sol.index != position:
            raise BracketError(
                f"state ordering broke at position {position}: expected "
                f"index {position}, found {sol.parity} nu={sol.nu!r}"
            )
    return merged


def bound_state_asymptote(g):
    """Deep-well energy estimate epsilon = -g*g/2 for attractive coupling."""
    if not g < 0.0:
        raise ValueError("the asymptote applies to attractive coupling only (g < 0)")
    return -0.5 * g * g
