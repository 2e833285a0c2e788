"""
Numeric witnesses for Gamma_H^n meeting V.

The pipeline follows the density argument: take a regular point a of V at
which the fibres of theta(x, y) = y / exp(x) meet V transversally, round
theta(a) into H, and move the point onto y = h exp(x) by parameter
continuation and Gauss-Newton.
"""
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple

import mpmath
import numpy as np

from gwb.config import DEFAULT_SETTINGS, Settings
from gwb.errors import (MaxRestartsExceeded, NewtonDiverged,
                        NoTransversalPoint, ParseError, PointNotOnVariety,
                        PrecisionUnreachable, PreconditionViolated,
                        SingularLocusOnly, UnsupportedHSpec)
from gwb.gamma import HSpec
from gwb.geometry import GSubvariety, dimension
from gwb.numbers import (format_complex, format_rat, gauss_parts, parse_complex,
                         parse_rat)
from gwb.picklers import Pickler
from gwb.polynomials import CompiledSystem
from gwb.relations import best_rationals, fraction_mpf, qlin_dim, two_pi
from gwb.serialization import object_id
from gwb.state_machine import PersistentStateMachine

log = logging.getLogger(__name__)

Exponents = Tuple[Tuple[Fraction, Fraction], ...]

# Residual allowed for a point handed in as lying on V, relative to tol.
ON_VARIETY_FACTOR = 1e3
# Multiplicative coordinates closer to 0 than this are rejected.
MIN_UNIT = 1e-8


@dataclass(frozen=True)
class CPoint:
    """
    A point of G^n(C): n additive and n multiplicative coordinates, finite,
    with every y_i nonzero.
    """
    x: Tuple[complex, ...]
    y: Tuple[complex, ...]

    def __post_init__(self):
        x = tuple(complex(v) for v in self.x)
        y = tuple(complex(v) for v in self.y)
        if len(x) != len(y):
            raise PreconditionViolated(
                f"A point of G^n has as many x's as y's, got {len(x)} and {len(y)}.")
        if not np.all(np.isfinite(np.array(x + y, dtype=np.complex128))):
            raise PreconditionViolated("Point coordinates must be finite.")
        if any(v == 0 for v in y):
            raise PreconditionViolated("Multiplicative coordinates must be nonzero.")
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'y', y)

    @property
    def n(self) -> int:
        return len(self.x)

    def vector(self) -> np.ndarray:
        return np.array(self.x + self.y, dtype=np.complex128)

    @classmethod
    def from_vector(cls, z: np.ndarray, n: int) -> 'CPoint':
        return cls(x=tuple(complex(v) for v in z[:n]),
                   y=tuple(complex(v) for v in z[n:2 * n]))

    def theta(self) -> Tuple[complex, ...]:
        return tuple(y / np.exp(x) for x, y in zip(self.x, self.y))

    def to_json(self) -> dict:
        return {'x': [format_complex(v) for v in self.x],
                'y': [format_complex(v) for v in self.y]}

    @classmethod
    def from_json(cls, data) -> 'CPoint':
        if not isinstance(data, dict) or 'x' not in data or 'y' not in data:
            raise ParseError("A point needs 'x' and 'y' lists.")
        return cls(x=tuple(parse_complex(v) for v in data['x']),
                   y=tuple(parse_complex(v) for v in data['y']))


@dataclass(frozen=True)
class WitnessReport:
    """
    A point of V with y_i = h_i exp(x_i) up to the residuals, where
    h_i = exp(p/q + (r/s) 2 pi i) for h_exponents[i] = (p/q, r/s).
    """
    point: CPoint
    h_exponents: Exponents
    residual_variety: float
    residual_gamma: float
    jacobian_condition: float
    iterations: int
    seed: int
    tol: float
    qmax: int
    status: str = 'success'
    settings: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            'status': self.status,
            'point': self.point.to_json(),
            'h_exponents': [[format_rat(a), format_rat(b)]
                            for a, b in self.h_exponents],
            'residual_variety': self.residual_variety,
            'residual_gamma': self.residual_gamma,
            'jacobian_condition': self.jacobian_condition,
            'iterations': self.iterations,
            'seed': self.seed,
            'tol': self.tol,
            'qmax': self.qmax,
            'settings': dict(self.settings),
        }

    @classmethod
    def from_json(cls, data) -> 'WitnessReport':
        try:
            return cls(
                point=CPoint.from_json(data['point']),
                h_exponents=tuple((parse_rat(a), parse_rat(b))
                                  for a, b in data['h_exponents']),
                residual_variety=float(data['residual_variety']),
                residual_gamma=float(data['residual_gamma']),
                jacobian_condition=float(data['jacobian_condition']),
                iterations=int(data['iterations']),
                seed=int(data['seed']),
                tol=float(data['tol']),
                qmax=int(data['qmax']),
                status=data.get('status', 'success'),
                settings=dict(data.get('settings') or {}))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed witness report: {e}.") from e


def numerical_rank(matrix: np.ndarray, rank_tol: float) -> int:
    """
    Number of singular values above rank_tol times the largest one.
    """
    if matrix.size == 0:
        return 0
    values = np.linalg.svd(matrix, compute_uv=False)
    if values[0] == 0:
        return 0
    return int(np.sum(values > rank_tol * values[0]))


def gauss_newton(residual: Callable, jacobian: Callable, z0: np.ndarray,
                 tol: float, settings: Settings) -> Tuple[np.ndarray, int, bool]:
    """
    Least-squares Newton iteration with steps capped at the trust radius.

    Returns:
    The final iterate, the number of iterations and whether the largest
    residual ended below tol.
    """
    z = np.array(z0, dtype=np.complex128)
    iterations = 0
    for iterations in range(1, settings.newton_iterations + 1):
        F = residual(z)
        if not np.all(np.isfinite(F)):
            return z, iterations, False
        if F.size == 0 or np.max(np.abs(F)) < tol * 1e-3:
            break
        step = np.linalg.lstsq(jacobian(z), -F, rcond=None)[0]
        norm = np.linalg.norm(step)
        if norm > settings.trust_radius:
            step *= settings.trust_radius / norm
        z = z + step
        if norm < 1e-15 * (1 + np.linalg.norm(z)):
            break
    F = residual(z)
    converged = bool(np.all(np.isfinite(F)) and
                     (F.size == 0 or np.max(np.abs(F)) < tol))
    return z, iterations, converged


def _rng(*key: int) -> np.random.Generator:
    return np.random.default_rng(list(key))


def _gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def find_regular_point(V: GSubvariety, seed: int,
                       settings: Settings = DEFAULT_SETTINGS,
                       tol: Optional[float] = None, stream: int = 0) -> CPoint:
    """
    Finds a smooth point of V by slicing with dim V random affine hyperplanes
    and running Gauss-Newton from random complex starts.

    Keyword arguments:
    V -- the variety, of any dimension.
    seed -- non-negative seed; the same seed gives the same point.
    tol -- residual tolerance, settings.tol by default.
    stream -- selects an independent family of slicings for the same seed.

    Returns:
    A point with residual below tol at which the Jacobian of the defining
    polynomials has numerical rank 2n - dim V. Slicings are tried in order,
    and starts in order within a slicing; the first good point wins.
    """
    if seed < 0 or stream < 0:
        raise PreconditionViolated("Seeds must be non-negative integers.")
    tol = tol or settings.tol
    system = CompiledSystem(V.ideal.generators, V.ring)
    width = 2 * V.n
    d = dimension(V, settings)
    expected_rank = width - d
    converged = 0
    for s in range(settings.slicings):
        slicing = _rng(seed, stream, s)
        A = _gaussian(slicing, (d, width))
        b = _gaussian(slicing, d)

        def residual(z):
            return np.concatenate([system(z), A @ z - b])

        def jacobian(z):
            return np.vstack([system.jacobian(z), A])

        for t in range(settings.starts):
            z0 = _gaussian(_rng(seed, stream, s, t), width)
            z, iterations, ok = gauss_newton(residual, jacobian, z0, tol, settings)
            if not ok or np.min(np.abs(z[V.n:]), initial=np.inf) < MIN_UNIT:
                continue
            converged += 1
            rank = numerical_rank(system.jacobian(z), settings.rank_tol)
            if rank == expected_rank:
                log.debug(f"Regular point at slicing {s}, start {t} after "
                          f"{iterations} iterations.")
                return CPoint.from_vector(z, V.n)
            log.debug(f"Slicing {s}, start {t}: Jacobian rank {rank}, "
                      f"expected {expected_rank}.")
    if converged:
        raise SingularLocusOnly(
            f"All {converged} converged samples lie on the singular locus.")
    raise MaxRestartsExceeded(
        f"No start converged in {settings.slicings} slicings of "
        f"{settings.starts} starts.")


def sample_points(V: GSubvariety, count: int, seed: int,
                  settings: Settings = DEFAULT_SETTINGS) -> Tuple[CPoint, ...]:
    """
    `count` regular points of V drawn from independent slicing families.
    """
    return tuple(find_regular_point(V, seed, settings, stream=k)
                 for k in range(count))


def _residual_on(V: GSubvariety, system: CompiledSystem, a: CPoint,
                 settings: Settings):
    if a.n != V.n:
        raise PreconditionViolated(f"The point lives in G^{a.n}, not G^{V.n}.")
    values = system(a.vector())
    residual = float(np.max(np.abs(values))) if values.size else 0.0
    if residual > ON_VARIETY_FACTOR * settings.tol:
        raise PointNotOnVariety(
            f"The point is off V by {residual:.3e}.")


def _fibre_stack(system: CompiledSystem, a: CPoint) -> np.ndarray:
    """
    The Jacobian of V at a stacked with the rows dy_i - y_i dx_i cutting out
    the tangent space of the theta-fibre through a.
    """
    n = a.n
    fibre = np.zeros((n, 2 * n), dtype=np.complex128)
    for i, y in enumerate(a.y):
        fibre[i, i] = -y
        fibre[i, n + i] = 1
    return np.vstack([system.jacobian(a.vector()), fibre])


def _transversality_rank(system: CompiledSystem, a: CPoint,
                         settings: Settings) -> int:
    return numerical_rank(_fibre_stack(system, a), settings.rank_tol)


@dataclass(frozen=True)
class AxCheck:
    """
    Tangent data of the theta-fibre through a point a of V.

    fibre_dim -- d, the dimension of T_a V meet T_a(fibre).
    local_dim -- dimension of V at a, an upper bound for td(x, y/C) along
                 the fibre.
    x_rank -- rank of the x-parts of the common tangent directions, a lower
              bound for ldim_Q(x/C) along the fibre.

    Along a d-dimensional piece of the fibre inside V, Ax's theorem gives
    td(x, y/C) - ldim_Q(x/C) >= d, hence local_dim - x_rank >= fibre_dim.
    When the bound fails, the tangent spaces meet without the fibre having
    dimension d there: a is a tangency rather than a point of a fibre family.
    """
    fibre_dim: int
    local_dim: int
    x_rank: int

    @property
    def holds(self) -> bool:
        return self.local_dim - self.x_rank >= self.fibre_dim

    def to_json(self) -> dict:
        return {'fibre_dim': self.fibre_dim, 'local_dim': self.local_dim,
                'x_rank': self.x_rank, 'holds': self.holds}


def ax_check(V: GSubvariety, a: CPoint,
             settings: Settings = DEFAULT_SETTINGS) -> AxCheck:
    system = CompiledSystem(V.ideal.generators, V.ring)
    _residual_on(V, system, a, settings)
    return _ax_check(system, a, settings)


def _ax_check(system: CompiledSystem, a: CPoint, settings: Settings) -> AxCheck:
    n = a.n
    stacked = _fibre_stack(system, a)
    rank = numerical_rank(stacked, settings.rank_tol)
    jacobian = system.jacobian(a.vector())
    local_dim = 2 * n - numerical_rank(jacobian, settings.rank_tol)
    if rank == 2 * n:
        return AxCheck(fibre_dim=0, local_dim=local_dim, x_rank=0)
    kernel = np.linalg.svd(stacked)[2][rank:].conj().T
    return AxCheck(fibre_dim=2 * n - rank, local_dim=local_dim,
                   x_rank=numerical_rank(kernel[:n], settings.rank_tol))


def check_fiber_transversality(V: GSubvariety, a: CPoint,
                               settings: Settings = DEFAULT_SETTINGS) -> bool:
    """
    True iff the tangent space of V at a meets the tangent space of the
    theta-fibre {(x, t exp x)} through a only in 0: the Jacobian of V stacked
    with the rows dy_i - y_i dx_i has full rank 2n.
    """
    system = CompiledSystem(V.ideal.generators, V.ring)
    _residual_on(V, system, a, settings)
    return _transversality_rank(system, a, settings) == 2 * V.n


def approximate_in_H(t: Sequence[complex], H: HSpec, qmax: int, eps: float,
                     settings: Settings = DEFAULT_SETTINGS) -> Exponents:
    """
    Rounds each t_i into H: the principal log t_i = alpha + beta 2 pi i is
    approximated by (p/q, r/s) with denominators at most qmax.

    Returns:
    The exponent pairs; raises PrecisionUnreachable with the best achievable
    error when some approximation misses by eps or more.
    """
    if not H.is_dense():
        raise UnsupportedHSpec(f"H of kind {H.kind} is not dense in Gm(C).")
    if qmax < 1:
        raise PreconditionViolated(f"qmax must be at least 1, got {qmax}.")
    exponents = []
    worst = 0.0
    with mpmath.workdps(settings.precision):
        for value in t:
            value = mpmath.mpc(complex(value))
            if value == 0:
                raise PreconditionViolated("Cannot round 0 into H.")
            log_t = mpmath.log(value)
            alpha, beta = best_rationals(log_t, qmax)
            error = abs(log_t - (fraction_mpf(alpha) + fraction_mpf(beta) * two_pi() * 1j))
            worst = max(worst, float(error))
            exponents.append((alpha, beta))
    if worst >= eps:
        raise PrecisionUnreachable(
            f"Denominators up to {qmax} reach an error of {worst:.3e}, not "
            f"below {eps}.", best_eps=worst)
    return tuple(exponents)


def _log_h(exponents: Exponents) -> np.ndarray:
    return np.array([float(a) + float(b) * 2j * np.pi for a, b in exponents],
                    dtype=np.complex128)


def _gamma_system(system: CompiledSystem, n: int, log_h: np.ndarray):
    h = np.exp(log_h)

    def residual(z):
        return np.concatenate([system(z), z[n:] - h * np.exp(z[:n])])

    def jacobian(z):
        gamma = np.zeros((n, 2 * n), dtype=np.complex128)
        for i in range(n):
            gamma[i, i] = -h[i] * np.exp(z[i])
            gamma[i, n + i] = 1
        return np.vstack([system.jacobian(z), gamma])

    return residual, jacobian


class WitnessPipeline(PersistentStateMachine):
    """
    regular_point -> transversality -> round_into_h -> continuation -> done.
    A failed transversality check or a diverging continuation restarts from
    a fresh regular point, up to settings.slicings attempts.

    Every finished state is checkpointed in `checkpoints` under an id derived
    from all inputs, so a pipeline built from the same inputs and pickler
    resumes after the last finished state.
    """

    def __init__(self, V: GSubvariety, H: HSpec, seed: int, tol: float,
                 qmax: int, eps: float, fixed_h: Optional[Exponents],
                 start: Optional[CPoint], settings: Settings,
                 checkpoints: Optional[Pickler] = None):
        self.V = V
        self.H = H
        self.seed = seed
        self.tol = tol
        self.qmax = qmax
        self.eps = eps
        self.fixed_h = fixed_h
        self.start = start
        self.settings = settings
        self.system = CompiledSystem(V.ideal.generators, V.ring)
        id = object_id('witness', V.to_json(), H.to_json(), seed, tol, qmax, eps,
                       [[format_rat(a), format_rat(b)] for a, b in fixed_h or ()],
                       start.to_json() if start else None, settings.to_dict())
        super().__init__(id, 'regular_point', pickler=checkpoints)
        if self.next_state is None:
            self.data = {'attempt': 0, 'transversal': 0, 'iterations': 0}

    def _restart(self, reason: str):
        data = dict(self.data)
        data['attempt'] += 1
        if data['attempt'] >= self.settings.slicings:
            if not data['transversal']:
                raise NoTransversalPoint(
                    f"No transversal regular point in {data['attempt']} "
                    f"attempts; V is likely not rotund.")
            raise NewtonDiverged(
                f"Newton failed in all {data['attempt']} attempts: {reason}.")
        log.debug(f"Restarting ({reason}), attempt {data['attempt']}.")
        return 'regular_point', data

    def regular_point(self):
        data = dict(self.data)
        if self.start is not None and data['attempt'] == 0:
            z, _, ok = gauss_newton(self.system, self.system.jacobian,
                                    self.start.vector(), self.tol, self.settings)
            if not ok:
                raise PointNotOnVariety("The start point does not converge onto V.")
            data['point'] = CPoint.from_vector(z, self.V.n)
        else:
            data['point'] = find_regular_point(self.V, self.seed, self.settings,
                                               tol=self.tol, stream=data['attempt'])
        return 'transversality', data

    def transversality(self):
        a = self.data['point']
        rank = _transversality_rank(self.system, a, self.settings)
        if rank == 2 * self.V.n:
            data = dict(self.data)
            data['transversal'] += 1
            return 'round_into_h', data
        check = _ax_check(self.system, a, self.settings)
        log.info(f"The theta-fibre meets V in tangent dimension {check.fibre_dim} "
                 f"at attempt {self.data['attempt']}: dim V = {check.local_dim}, "
                 f"x-rank {check.x_rank}.")
        if not check.holds:
            log.info(f"td - ldim <= {check.local_dim - check.x_rank} < "
                     f"{check.fibre_dim}, so the contact is a tangency and no "
                     f"fibre family passes through the point.")
        return self._restart('fibre not transversal')

    def round_into_h(self):
        data = dict(self.data)
        if self.fixed_h is not None:
            data['h'] = self.fixed_h
        else:
            data['h'] = approximate_in_H(data['point'].theta(), self.H, self.qmax,
                                         self.eps, self.settings)
        return 'continuation', data

    def continuation(self):
        data = dict(self.data)
        n = self.V.n
        a = data['point']
        log_t = np.log(np.array(a.theta(), dtype=np.complex128))
        log_h = _log_h(data['h'])
        # Same h, nearest branch of its logarithm.
        log_h = log_h - 2j * np.pi * np.round((log_h - log_t).imag / (2 * np.pi))
        z = a.vector()
        steps = max(1, self.settings.continuation_steps)
        for k in range(1, steps + 1):
            path = log_t + (k / steps) * (log_h - log_t)
            residual, jacobian = _gamma_system(self.system, n, path)
            z, iterations, ok = gauss_newton(residual, jacobian, z, self.tol,
                                             self.settings)
            data['iterations'] += iterations
            if not ok:
                return self._restart(f'continuation step {k} of {steps} diverged')
        _, jacobian = _gamma_system(self.system, n, _log_h(data['h']))
        values_v = self.system(z)
        values_g = z[n:] - np.exp(_log_h(data['h'])) * np.exp(z[:n])
        residual_variety = float(np.max(np.abs(values_v))) if values_v.size else 0.0
        residual_gamma = float(np.max(np.abs(values_g)))
        if residual_variety >= self.tol or residual_gamma >= self.tol or \
                np.min(np.abs(z[n:])) < MIN_UNIT:
            return self._restart('final residuals above tolerance')
        values = np.linalg.svd(jacobian(z), compute_uv=False)
        condition = float(values[0] / values[-1]) if values[-1] > 0 else float('inf')
        data['report'] = WitnessReport(
            point=CPoint.from_vector(z, n), h_exponents=tuple(data['h']),
            residual_variety=residual_variety, residual_gamma=residual_gamma,
            jacobian_condition=condition, iterations=data['iterations'],
            seed=self.seed, tol=self.tol, qmax=self.qmax,
            settings=_recorded(self.settings, self.eps))
        return None, data


def _recorded(settings: Settings, eps: float) -> dict:
    return {'slicings': settings.slicings, 'starts': settings.starts,
            'newton_iterations': settings.newton_iterations,
            'trust_radius': settings.trust_radius,
            'continuation_steps': settings.continuation_steps,
            'rank_tol': settings.rank_tol, 'eps': eps}


def find_witness(V: GSubvariety, H: HSpec, seed: int, tol: Optional[float] = None,
                 qmax: Optional[int] = None, eps: Optional[float] = None,
                 fixed_h: Optional[Sequence[Tuple]] = None,
                 start: Optional[CPoint] = None,
                 settings: Settings = DEFAULT_SETTINGS,
                 checkpoints: Optional[Pickler] = None) -> WitnessReport:
    """
    Produces a numeric point of Gamma_H^n meeting V.

    When V and h are real, the complex conjugate of a witness is a witness
    for the conjugate h, and both are reached from different seeds: on
    y1 = x1 with h = 1 a seed lands on 0.31813 + 1.33724i or on its
    conjugate (see conjugate_witness). Pass `start` to select a branch.

    Keyword arguments:
    V -- a rotund, free variety of dimension n (rotundity and freeness are
         the caller's assertion; the dimension is checked).
    H -- a dense blurring group; ConstantsField and Full are served through
         exp(Q + 2 pi i Q).
    seed -- seed of the regular point search.
    tol, qmax, eps -- residual tolerance, denominator bound of h and
                      rounding error allowed; settings supply the defaults.
    fixed_h -- explicit exponent pairs (p/q, r/s), skipping the rounding.
    start -- an explicit starting point on (or near) V.
    checkpoints -- pickler for the pipeline checkpoints; a rerun with the
                   same inputs and pickler resumes an interrupted search.

    Returns:
    A success WitnessReport.
    """
    tol = tol or settings.tol
    qmax = qmax or settings.qmax
    eps = eps or settings.eps
    if not H.is_dense():
        raise UnsupportedHSpec(
            f"Witnesses need a dense H; {H.kind} {list(H.basis)} is not.")
    d = dimension(V, settings)
    if d != V.n:
        raise PreconditionViolated(f"find_witness needs dim V = n = {V.n}, got {d}.")
    if fixed_h is not None:
        fixed_h = tuple((Fraction(a), Fraction(b)) for a, b in fixed_h)
        if len(fixed_h) != V.n:
            raise PreconditionViolated(f"fixed_h needs {V.n} exponent pairs.")
        if any(a.denominator > qmax or b.denominator > qmax for a, b in fixed_h):
            raise PreconditionViolated(f"fixed_h has denominators above {qmax}.")
    pipeline = WitnessPipeline(V, H, seed, tol, qmax, eps, fixed_h, start, settings,
                               checkpoints)
    report = pipeline.run()['report']
    log.info(f"Witness after {report.iterations} Newton iterations: residuals "
             f"{report.residual_variety:.2e}, {report.residual_gamma:.2e}.")
    return report


def verify_witness(r: WitnessReport, V: GSubvariety, H: HSpec,
                   settings: Settings = DEFAULT_SETTINGS) -> bool:
    """
    Recomputes both residuals in mpmath at settings.precision digits and checks
    the structure of the report.

    Returns:
    True iff both residuals are below 10 * r.tol, the exponent denominators
    are at most r.qmax and H is dense.
    """
    if r.status != 'success' or not H.is_dense():
        return False
    if r.point.n != V.n or len(r.h_exponents) != V.n:
        return False
    if any(a.denominator > r.qmax or b.denominator > r.qmax
           for a, b in r.h_exponents):
        return False
    system = CompiledSystem(V.ideal.generators, V.ring)
    with mpmath.workdps(settings.precision):
        z = [mpmath.mpc(v) for v in r.point.x + r.point.y]
        values = system.evaluate_mp(z)
        residual_variety = max((abs(v) for v in values), default=mpmath.mpf(0))
        residual_gamma = mpmath.mpf(0)
        for (a, b), x, y in zip(r.h_exponents, z[:V.n], z[V.n:]):
            log_h = fraction_mpf(a) + fraction_mpf(b) * two_pi() * 1j
            residual_gamma = max(residual_gamma, abs(y - mpmath.exp(log_h + x)))
        bound = 10 * mpmath.mpf(r.tol)
        ok = residual_variety < bound and residual_gamma < bound
    log.debug(f"Verified residuals {mpmath.nstr(residual_variety, 3)}, "
              f"{mpmath.nstr(residual_gamma, 3)}: {ok}.")
    return bool(ok)


def conjugate_witness(r: WitnessReport, V: GSubvariety) -> WitnessReport:
    """
    The complex conjugate of a witness on a variety with rational
    coefficients: the point is conjugated and each exponent pair (p/q, r/s)
    becomes (p/q, -r/s).
    """
    if any(gauss_parts(c)[1] for g in V.ideal.generators for c in g.coeffs()):
        raise PreconditionViolated("Only varieties with rational coefficients "
                                   "are closed under conjugation.")
    point = CPoint(x=tuple(v.conjugate() for v in r.point.x),
                   y=tuple(v.conjugate() for v in r.point.y))
    exponents = tuple((a, -b) for a, b in r.h_exponents)
    return replace(r, point=point, h_exponents=exponents)


def find_independent_witness(V: GSubvariety, H: HSpec, avoid: Sequence[CPoint],
                             seed: int, bound: int = 3,
                             tol: Optional[float] = None,
                             qmax: Optional[int] = None,
                             settings: Settings = DEFAULT_SETTINGS) -> WitnessReport:
    """
    A witness whose x-coordinates satisfy no Q-linear relation with
    |m_i| <= bound linking them to the x-coordinates of `avoid`.
    """
    tol = tol or settings.tol
    relation_tol = 100 * tol
    avoid_x = [v for p in avoid for v in p.x]
    base = qlin_dim(avoid_x, [], bound, relation_tol, settings) if avoid_x else 0
    for k in range(settings.slicings):
        report = find_witness(V, H, seed + k, tol=tol, qmax=qmax, settings=settings)
        xs = list(report.point.x)
        own = qlin_dim(xs, [], bound, relation_tol, settings)
        joint = qlin_dim(avoid_x + xs, [], bound, relation_tol, settings)
        if joint == base + own:
            return report
        log.debug(f"Witness for seed {seed + k} is linked to the avoided points.")
    raise MaxRestartsExceeded(
        f"No independent witness in {settings.slicings} seeds.")
