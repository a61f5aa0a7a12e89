"""Analytic density-of-states families and their transport integrals.

Two families cover the cases of interest: a bounded power-of-semicircle
density on [0, lam_max], and an unbounded density with an exp(-1/lam)
low-eigenvalue suppression (Lifshits tail) and an algebraic lam**-b high
tail. The classical return probability is the Laplace transform of the
density, the quantum bound the squared modulus of its Fourier transform.

Numerics: bounded supports use QUADPACK directly, with the oscillatory
(QAWO) weights for the Fourier case. The Lifshits Fourier integral is
evaluated on the complex ray lam = r * exp(-i pi/4), which passes through
the saddle of the phase; there the integrand magnitude matches the result
magnitude, so the catastrophic cancellation that kills real-axis
quadrature beyond t of a few hundred never appears. On the ray the
integrand is analytic, both endpoints decay, and adaptive quadrature in
pure relative mode stays accurate down to results of order 1e-280.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import NumericalError, ParseError
from .transport import TimeGrid

_SQRT2 = math.sqrt(2.0)
# log-magnitude below which integrand values flush to zero (double underflow)
_LOG_TINY = -740.0


@dataclass(frozen=True)
class PowerSemicircle:
    """Density proportional to (lam * lam_max - lam**2)**nu on [0, lam_max].

    nu = -1/2 is the one-dimensional lattice band edge law, nu = 1/2 the
    semicircle of a large random matrix; general nu > -1 interpolates the
    spectral-dimension family d_s = 2 * (1 + nu).
    """

    nu: float
    lam_max: float

    def __post_init__(self):
        if not self.nu > -1:
            raise ValueError(f"need nu > -1, got {self.nu}")
        if not self.lam_max > 0:
            raise ValueError(f"need lam_max > 0, got {self.lam_max}")

    @property
    def log_norm(self) -> float:
        # integral of (lam*(lam_max - lam))**nu over [0, lam_max]
        return (2 * self.nu + 1) * math.log(self.lam_max) + \
            float(special.betaln(self.nu + 1, self.nu + 1))

    def density(self, lam):
        lam = np.asarray(lam, dtype=float)
        inside = (lam > 0) & (lam < self.lam_max)
        out = np.zeros_like(lam)
        x = lam[inside]
        out[inside] = np.exp(self.nu * (np.log(x) + np.log(self.lam_max - x))
                             - self.log_norm)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class Lifshits:
    """Density proportional to lam**-b * exp(-1/lam) on (0, inf), b > 1.

    The normalization constant has the closed form Gamma(b - 1) under
    u = 1/lam, so no quadrature is needed to normalize.
    """

    b: float

    def __post_init__(self):
        if not self.b > 1:
            raise ValueError(f"need b > 1, got {self.b}")

    @property
    def log_norm(self) -> float:
        return float(special.gammaln(self.b - 1))

    def density(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros_like(lam)
        pos = lam > 0
        x = lam[pos]
        logv = -self.b * np.log(x) - 1.0 / x - self.log_norm
        out[pos] = np.where(logv > _LOG_TINY, np.exp(np.clip(logv, _LOG_TINY, None)), 0.0)
        return out if out.ndim else float(out)


ContinuousDOS = PowerSemicircle | Lifshits


# -- quadrature helpers -------------------------------------------------------

def _scalar_density(dos):
    """Plain-math scalar density closure; QUADPACK calls it millions of times,
    so the vectorized ndarray path is too slow there."""
    if isinstance(dos, PowerSemicircle):
        nu, lam_max, log_norm = dos.nu, dos.lam_max, dos.log_norm

        def f(lam):
            if lam <= 0.0 or lam >= lam_max:
                return 0.0
            return math.exp(nu * (math.log(lam) + math.log(lam_max - lam)) - log_norm)

        return f
    if isinstance(dos, Lifshits):
        b, log_norm = dos.b, dos.log_norm

        def f(lam):
            if lam <= 0.0:
                return 0.0
            logv = -b * math.log(lam) - 1.0 / lam - log_norm
            return math.exp(logv) if logv > _LOG_TINY else 0.0

        return f
    density = dos.density
    return lambda lam: float(density(lam))


def _quad(f, a, b, t, **kw):
    """quad wrapper that turns a flagged, materially inaccurate result into
    NumericalError naming the offending time."""
    res = integrate.quad(f, a, b, full_output=1, **kw)
    val, abserr = res[0], res[1]
    if len(res) > 3 and abserr > 1e-8:
        raise NumericalError(
            f"quadrature failed at t={t!r}: {res[3].splitlines()[0]} "
            f"(estimated error {abserr:.2e})"
        )
    return val


def _classical_finite(density, hi, t):
    # at large t all mass sits near lam=0; an explicit split keeps QUADPACK
    # honest there (a `points` hint silently loses singular-endpoint mass
    # once the scales separate by several orders of magnitude)
    if t == 0:
        return 1.0
    f = lambda lam: density(lam) * math.exp(-lam * t)
    kw = dict(limit=400, epsabs=1e-300, epsrel=1e-10)
    split = 20.0 / t
    if split >= hi / 2:
        return _quad(f, 0.0, hi, t, **kw)
    return _quad(f, 0.0, split, t, **kw) + _quad(f, split, hi, t, **kw)


def _quantum_finite(density, hi, t):
    if t == 0:
        return 1.0 + 0.0j
    re = _quad(density, 0.0, hi, t, weight="cos", wvar=t, limit=2000,
               epsabs=1e-13, epsrel=1e-10)
    im = _quad(density, 0.0, hi, t, weight="sin", wvar=t, limit=2000,
               epsabs=1e-13, epsrel=1e-10)
    return complex(re, -im)


def _classical_lifshits(b, t):
    # u = 1/lam maps the integral to int u**(b-2) exp(-u - t/u) du / Gamma(b-1),
    # a smooth bump peaked at u = sqrt(t); split there so quad cannot miss it.
    if t == 0:
        return 1.0
    log_norm = float(special.gammaln(b - 1))

    def f(u):
        if u <= 0.0:
            return 0.0
        logv = (b - 2) * math.log(u) - u - t / u - log_norm
        return math.exp(logv) if logv > _LOG_TINY else 0.0

    split = math.sqrt(t)
    kw = dict(limit=400, epsabs=1e-300, epsrel=1e-11)
    lo = _quad(f, 0.0, split, t, **kw)
    hi = _quad(f, split, np.inf, t, **kw)
    return lo + hi


def _quantum_lifshits(b, t):
    # Fourier transform on the ray lam = r exp(-i pi/4): the exponent
    # -1/lam - i lam t has real part -(r t + 1/r)/sqrt(2), peaked at the
    # saddle r = 1/sqrt(t) with height exp(-sqrt(2 t)), the size of the
    # answer itself, so the evaluation keeps relative accuracy at any t.
    if t == 0:
        return 1.0 + 0.0j
    w = complex(math.cos(math.pi / 4), -math.sin(math.pi / 4))
    log_norm = float(special.gammaln(b - 1))

    def g(r):
        if r <= 0.0:
            return 0.0j
        if -b * math.log(r) - (r * t + 1.0 / r) / _SQRT2 - log_norm < _LOG_TINY:
            return 0.0j
        lam = r * w
        return lam**-b * np.exp(-1.0 / lam - 1j * lam * t) * w / math.exp(log_norm)

    split = 1.0 / math.sqrt(t)
    kw = dict(limit=800, epsabs=1e-300, epsrel=1e-9)
    total = 0.0j
    for lo, hi in ((0.0, split), (split, np.inf)):
        re = _quad(lambda r: g(r).real, lo, hi, t, **kw)
        im = _quad(lambda r: g(r).imag, lo, hi, t, **kw)
        total += complex(re, im)
    return total


# -- public operations --------------------------------------------------------

def classical_return_continuum(dos, grid: TimeGrid) -> np.ndarray:
    """Laplace transform of the density on the grid: p_bar(t), with p_bar(0)=1."""
    if isinstance(dos, Lifshits):
        return np.array([_classical_lifshits(dos.b, t) for t in grid.times])
    density = _scalar_density(dos)
    return np.array([_classical_finite(density, dos.lam_max, t)
                     for t in grid.times])


def quantum_amplitude_continuum(dos, grid: TimeGrid) -> np.ndarray:
    """Complex average amplitude: Fourier transform of the density."""
    if isinstance(dos, Lifshits):
        return np.array([_quantum_lifshits(dos.b, t) for t in grid.times])
    density = _scalar_density(dos)
    return np.array([_quantum_finite(density, dos.lam_max, t)
                     for t in grid.times])


def quantum_return_bound_continuum(dos, grid: TimeGrid) -> np.ndarray:
    """|alpha_bar(t)|^2 for a continuous density; values clipped to [0, 1]."""
    amp = quantum_amplitude_continuum(dos, grid)
    return np.clip(np.abs(amp) ** 2, 0.0, 1.0)


def lattice_return_1d_product(d: int, grid: TimeGrid) -> np.ndarray:
    """Quantum return of the infinite d-dimensional torus: J0(2t)**(2d)."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return special.j0(2.0 * grid.times) ** (2 * d)


# -- closed-form large-t laws -------------------------------------------------

@dataclass(frozen=True)
class PowerLawDecay:
    """value ~ t**exponent, valid for t >> 1."""

    exponent: float
    note: str = "t >> 1"


@dataclass(frozen=True)
class StretchedExpDecay:
    """value ~ t**prefactor_exponent * exp(-decay_coeff * t**stretch), t >> 1."""

    prefactor_exponent: float
    decay_coeff: float
    stretch: float = 0.5
    note: str = "t >> 1"


def asymptotic_law(dos, which: str):
    """Large-t decay law for 'classical' p_bar or the 'quantum' envelope.

    Bounded power densities give power laws whose quantum exponent doubles
    the classical one; the Lifshits family gives stretched exponentials
    exp(-2 sqrt(t)) classically and exp(-2 sqrt(2 t)) quantum mechanically,
    each times a power prefactor.
    """
    if which not in ("classical", "quantum"):
        raise ValueError(f"which must be 'classical' or 'quantum', got {which!r}")
    if isinstance(dos, PowerSemicircle):
        base = 1.0 + dos.nu
        return PowerLawDecay(-base if which == "classical" else -2.0 * base)
    if isinstance(dos, Lifshits):
        if which == "classical":
            return StretchedExpDecay((2 * dos.b - 3) / 4.0, 2.0)
        return StretchedExpDecay((2 * dos.b - 3) / 2.0, 2.0 * _SQRT2)
    raise TypeError(f"unknown DOS family: {type(dos).__name__}")


# -- spec-string parsing ------------------------------------------------------

def parse_dos_spec(spec: str) -> ContinuousDOS:
    """Parse 'semicircle:nu=0.5,lmax=2' or 'lifshits:b=2'."""
    if ":" not in spec:
        raise ParseError("expected '<family>:<key>=<value>,...'", text=spec,
                         position=len(spec))
    family, _, params = spec.partition(":")
    family = family.strip().lower()
    kv = {}
    for part in params.split(","):
        key, eq, val = part.partition("=")
        if not eq:
            raise ParseError("parameters must be key=value", text=spec,
                             position=spec.find(part))
        try:
            kv[key.strip()] = float(val)
        except ValueError as exc:
            raise ParseError(f"bad numeric value {val!r}", text=spec,
                             position=spec.find(val)) from exc
    try:
        if family == "semicircle":
            if set(kv) != {"nu", "lmax"}:
                raise ParseError("semicircle takes nu=<v>,lmax=<v>", text=spec,
                                 position=len(family) + 1)
            return PowerSemicircle(nu=kv["nu"], lam_max=kv["lmax"])
        if family == "lifshits":
            if set(kv) != {"b"}:
                raise ParseError("lifshits takes b=<v>", text=spec,
                                 position=len(family) + 1)
            return Lifshits(b=kv["b"])
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), text=spec, position=len(family) + 1) from exc
    raise ParseError(f"unknown DOS family {family!r}", text=spec, position=0)
