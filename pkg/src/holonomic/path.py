"""Closed paths (alpha(t), beta(t)) on the parameter sphere.

alpha is the polar angle and beta the azimuth of a point on the unit sphere. A
path is a sequence of contiguous segments, each carrying vectorized callables
for alpha, beta and their time derivatives. Segment ownership is left-closed at
t = 0 and right-closed afterwards, so a breakpoint belongs to the segment that
ends there.
"""
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .errors import PathError

TWO_PI = 2 * np.pi

CYCLIC_TOL = 1e-12
CONTINUITY_TOL = 1e-10
QUAD_ABS_TOL = 1e-10

Func = Callable[[np.ndarray], np.ndarray]


def const(value):
    """Vectorized constant function of time."""
    return lambda t: np.full(np.shape(t), float(value))


def wrap_angle(x):
    """Map an angle into (-pi, pi]."""
    return float(np.pi - np.mod(np.pi - x, TWO_PI))


class PathPoint(NamedTuple):
    alpha: float
    beta: float
    dalpha: float
    dbeta: float
    at_breakpoint: bool


@dataclass(frozen=True)
class Segment:
    """One smooth piece of a path on ``[t_start, t_end]``."""

    t_start: float
    t_end: float
    alpha: Func
    beta: Func
    dalpha: Func
    dbeta: Func
    # interior points where derivatives are only piecewise smooth (quadrature hints)
    knots: tuple = ()

    @property
    def duration(self):
        return self.t_end - self.t_start

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        return self.alpha(t), self.beta(t), self.dalpha(t), self.dbeta(t)


@dataclass(frozen=True)
class PathSpec:
    segments: tuple
    name: str = "custom"
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def tau(self):
        return self.segments[-1].t_end

    @property
    def breakpoints(self):
        return tuple(s.t_end for s in self.segments[:-1])

    def segment_index(self, t):
        """Index of the segment owning time ``t`` (vectorized)."""
        ends = np.array([s.t_end for s in self.segments[:-1]])
        return np.searchsorted(ends, np.asarray(t, dtype=float), side="left")

    def _check_domain(self, t):
        t = np.asarray(t, dtype=float)
        slack = 1e-12 * max(1.0, self.tau)
        if np.any(t < -slack) or np.any(t > self.tau + slack):
            raise PathError(f"time outside [0, {self.tau}]")
        return np.clip(t, 0.0, self.tau)

    def sample(self, t):
        """Vectorized ``(alpha, beta, dalpha, dbeta)`` at times ``t``."""
        t = self._check_domain(t)
        idx = self.segment_index(t)
        out = [np.empty(t.shape) for _ in range(4)]
        for k, seg in enumerate(self.segments):
            mask = idx == k
            if np.any(mask):
                for arr, val in zip(out, seg.evaluate(t[mask])):
                    arr[mask] = val
        return tuple(out)

    def invariant_residuals(self, samples=1001):
        """Residuals of the path invariants, without raising."""
        a0 = self.segments[0].evaluate(0.0)[0]
        a1 = self.segments[-1].evaluate(self.tau)[0]
        jumps_a, jumps_b, gaps = [0.0], [0.0], [abs(self.segments[0].t_start)]
        for left, right in zip(self.segments, self.segments[1:]):
            gaps.append(abs(left.t_end - right.t_start))
            la, lb = left.evaluate(left.t_end)[:2]
            ra, rb = right.evaluate(right.t_start)[:2]
            jumps_a.append(abs(float(la - ra)))
            # beta is an azimuth, so continuity is modulo 2 pi
            jumps_b.append(abs(wrap_angle(float(lb - rb))))
        alpha = self.sample(np.linspace(0.0, self.tau, samples))[0]
        range_violation = max(0.0, float(-alpha.min()), float(alpha.max() - np.pi))
        return {
            "alpha_start": abs(float(a0)),
            "alpha_end": abs(float(a1)),
            "alpha_jump": max(jumps_a),
            "beta_jump": max(jumps_b),
            "segment_gap": max(gaps),
            "alpha_range": range_violation,
        }

    def validate(self):
        """Raise :class:`PathError` unless the path is closed, continuous and in range."""
        if not self.segments:
            raise PathError("path has no segments")
        for seg in self.segments:
            if not seg.t_end > seg.t_start:
                raise PathError(f"segment [{seg.t_start}, {seg.t_end}] is empty")
        r = self.invariant_residuals()
        if r["segment_gap"] > CONTINUITY_TOL:
            raise PathError("segments are not contiguous from t = 0")
        if r["alpha_start"] > CYCLIC_TOL or r["alpha_end"] > CYCLIC_TOL:
            raise PathError(
                f"path is not cyclic: alpha(0) = {r['alpha_start']:.3g}, "
                f"alpha(tau) = {r['alpha_end']:.3g}")
        if r["alpha_jump"] > CONTINUITY_TOL or r["beta_jump"] > CONTINUITY_TOL:
            raise PathError("path is discontinuous at a breakpoint")
        if r["alpha_range"] > CYCLIC_TOL:
            raise PathError("alpha leaves [0, pi]")
        return self


def eval_path(p, t):
    """Evaluate ``p`` at a scalar time.

    At a breakpoint the left segment's values are returned and
    ``at_breakpoint`` is set, since the derivatives may jump there.

    Raises
    ------
    PathError
        If ``t`` lies outside ``[0, tau]``.
    """
    if not 0.0 <= t <= p.tau:
        raise PathError(f"t = {t} outside [0, {p.tau}]")
    k = int(p.segment_index(t))
    a, b, da, db = p.segments[k].evaluate(t)
    scale = max(1.0, p.tau)
    on_break = any(abs(t - bp) <= 1e-12 * scale for bp in p.breakpoints)
    return PathPoint(float(a), float(b), float(da), float(db), on_break)


def segment_integral(seg, fn):
    """Adaptive quadrature of the scalar function ``fn`` over ``seg``, split at
    its knots so that no kink is ever straddled."""
    edges = (seg.t_start, *seg.knots, seg.t_end)
    tol = QUAD_ABS_TOL / (len(edges) - 1)
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        val, _ = quad(fn, a, b, epsabs=tol, epsrel=1e-13, limit=200)
        total += val
    return total


def solid_angle(p):
    """Half the solid angle enclosed by the path, ``(1/2) \\oint (1 - cos alpha) d beta``,
    integrated segment by segment."""
    total = 0.0
    for seg in p.segments:
        def integrand(t, seg=seg):
            a, _, _, db = seg.evaluate(t)
            return float((1.0 - np.cos(a)) * db)

        total += segment_integral(seg, integrand)
    return 0.5 * total


def _check_durations(tau1, tau2, tau):
    if not 0.0 < tau1 < tau2 < tau:
        raise PathError(f"need 0 < tau1 < tau2 < tau, got {tau1}, {tau2}, {tau}")


def make_cap_loop(alpha0, tau1=0.25, tau2=0.75, tau=1.0, name="cap_loop"):
    """Three-segment loop: north pole -> (alpha0, 0), one turn at fixed
    colatitude alpha0, back to the pole along beta = 0.

    The radial legs use ``alpha0 * sin(pi t / (2 tau1))`` and its mirror, so
    ``dalpha`` vanishes at both junctions; beta sweeps linearly through 2 pi.
    """
    _check_durations(tau1, tau2, tau)
    if not 0.0 < alpha0 <= np.pi:
        raise PathError(f"alpha0 must lie in (0, pi], got {alpha0}")
    w1 = np.pi / (2 * tau1)
    w3 = np.pi / (2 * (tau - tau2))
    rate = TWO_PI / (tau2 - tau1)
    zero = const(0.0)
    up = Segment(
        0.0, tau1,
        alpha=lambda t: alpha0 * np.sin(w1 * t),
        beta=zero,
        dalpha=lambda t: alpha0 * w1 * np.cos(w1 * t),
        dbeta=zero,
    )
    loop = Segment(
        tau1, tau2,
        alpha=const(alpha0),
        beta=lambda t: rate * (np.asarray(t) - tau1),
        dalpha=zero,
        dbeta=const(rate),
    )
    down = Segment(
        tau2, tau,
        alpha=lambda t: alpha0 * np.sin(w3 * (tau - np.asarray(t))),
        beta=zero,
        dalpha=lambda t: -alpha0 * w3 * np.cos(w3 * (tau - np.asarray(t))),
        dbeta=zero,
    )
    meta = {"kind": name, "alpha0": float(alpha0), "tau1": tau1, "tau2": tau2, "tau": tau}
    return PathSpec((up, loop, down), name=name, metadata=meta).validate()


def make_hadamard_path(tau1=0.25, tau2=0.75, tau=1.0):
    """The Hadamard loop: ``alpha = (pi/2) sin(pi t / 2 tau1)`` up, a full beta
    turn at ``alpha = pi/2``, and ``alpha = (pi/2) sin(pi (tau - t) / 2 (tau - tau2))`` down."""
    return make_cap_loop(np.pi / 2, tau1, tau2, tau, name="hadamard")


def path_from_samples(t, alpha, beta, validate=True, name="custom"):
    """Single-segment path from sampled tables using monotone cubic (PCHIP)
    interpolation; derivatives come from the interpolant itself."""
    t = np.asarray(t, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if t.ndim != 1 or len(t) < 3 or alpha.shape != t.shape or beta.shape != t.shape:
        raise PathError("need at least three (t, alpha, beta) samples of equal length")
    if abs(t[0]) > 1e-12 or np.any(np.diff(t) <= 0):
        raise PathError("t must start at 0 and be strictly increasing")
    ia = PchipInterpolator(t, alpha)
    ib = PchipInterpolator(t, beta)
    da, db = ia.derivative(), ib.derivative()
    seg = Segment(
        0.0, float(t[-1]),
        alpha=lambda s: ia(s), beta=lambda s: ib(s),
        dalpha=lambda s: da(s), dbeta=lambda s: db(s),
        knots=tuple(float(x) for x in t[1:-1]),
    )
    p = PathSpec((seg,), name=name, metadata={"kind": "custom", "tau": float(t[-1])})
    return p.validate() if validate else p


def load_path_csv(source, validate=True):
    """Read a ``t,alpha,beta`` CSV (header required) into a single-segment path."""
    with open(source, newline="") as fh:
        header = fh.readline().strip().replace(" ", "")
        if header != "t,alpha,beta":
            raise PathError(f"{source}: expected header 't,alpha,beta', got {header!r}")
        try:
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise PathError(f"{source}: {exc}") from None
    if data.shape[1] != 3:
        raise PathError(f"{source}: expected three columns")
    return path_from_samples(data[:, 0], data[:, 1], data[:, 2], validate=validate)


@dataclass(frozen=True)
class GateSpec:
    """Rotation axis (theta, phi) and rotation angle phi_tau of a one-qubit gate."""

    theta: float
    phi: float
    phi_tau: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < TWO_PI:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")
        if not 0.0 <= self.phi_tau < TWO_PI:
            raise ValueError(f"phi_tau must lie in [0, 2 pi), got {self.phi_tau}")

    @property
    def axis(self):
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    @classmethod
    def for_path(cls, theta, phi, path):
        """Gate realized by ``path``: the rotation angle is its half solid angle."""
        angle = float(np.mod(solid_angle(path), TWO_PI))
        if TWO_PI - angle < 1e-12:
            angle = 0.0
        return cls(theta, float(np.mod(phi, TWO_PI)), angle)
