"""Floating-point trajectories for the five reduced Hamiltonian systems.

An embedded Runge-Kutta 5(4) pair (Dormand-Prince coefficients) with
proportional-integral step control drives the canonical flow; the gauge
variables of the partition ride along through their log-derivative
equations, integrated as logs relative to the starting value so any
nonzero start is allowed and no sign is lost.  Time is the independent
variable throughout: the explicit time dependence of the Hamiltonian is
differenced only by the stepper, never frozen, and the along-trajectory
zero-curvature residual is the correctness monitor (the Hamiltonian is
not conserved, so there is nothing energy-based to check).

Near a singularity the trajectory stops and says why: fixed singular
times are rejected up front, movable poles are flagged when a
denominator falls below 1e-12 or the state leaves the 1e12 ball, and a
step size collapsing without either is reported as underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .lax import (
    GAUGE_NAMES,
    numeric_frame,
    residual_magnitude,
    zero_curvature_residual,
)
from .painleve import (
    REDUCTION_TARGET,
    SYSTEM_PAIRS,
    SystemParameters,
    gauge_log_derivatives,
    reduction_constants,
    vector_field,
)
from .scalars import PoleError

# fixed singular times of each partition's Painleve time
SINGULAR_TIMES = {
    (2, 2): (0.0, 1.0),
    (3, 1): (0.0,),
    (4, 1): (0.0,),
    (2, 2, 1): (0.0, 1.0),
    (3, 3): (0.0, 1.0),
}

# default partition realizing each system id, for callers that speak
# system language; cp6 maps to its two-gauge-free (3,3) realization
DEFAULT_PARTITION = {"p6": (2, 2), "a4": (3, 1), "a5": (4, 1), "cp6": (3, 3)}

DENOMINATOR_FLOOR = 1e-12
STATE_CEILING = 1e12
LOG_GAUGE_CEILING = 690.0  # exp overflows just above this; a gauge there is gone

REACHED_END = "reached_end"
POLE_DETECTED = "pole_detected"
STEP_UNDERFLOW = "step_underflow"

# Dormand-Prince 5(4) tableau; E = b5 - b4 gives the error weights
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_PI_ALPHA = 0.17  # proportional exponent for order 5
_PI_BETA = 0.04  # integral exponent
_GROW_CAP = 5.0
_SHRINK_CAP = 0.2


@dataclass(frozen=True)
class TrajectorySample:
    """One accepted point: time, canonical pairs, gauge values, and the
    normalized local error estimate of the step that produced it."""

    t: float
    pairs: tuple
    gauges: dict
    error: float


@dataclass
class Trajectory:
    partition: tuple
    system: str
    params: SystemParameters
    gauge_names: tuple
    rel_tol: float
    abs_tol: float
    samples: list = field(default_factory=list)
    termination: str = REACHED_END
    # flat states and slopes per accepted step, kept for dense output
    _states: list = field(default_factory=list, repr=False)
    _slopes: list = field(default_factory=list, repr=False)
    _gauge_start: tuple = field(default=(), repr=False)

    @property
    def final(self) -> TrajectorySample:
        return self.samples[-1]


def resolve_partition(system) -> tuple:
    """Partition tuple from a partition or a system id."""
    if isinstance(system, str):
        if system in DEFAULT_PARTITION:
            return DEFAULT_PARTITION[system]
        parts = tuple(int(piece) for piece in system.split(","))
    else:
        parts = tuple(system)
    if parts not in SINGULAR_TIMES:
        raise ValueError(f"no integrable system for {system!r}")
    return parts


# -- generic embedded stepper ------------------------------------------


def _norm(error_vector, y_old, y_new, rel_tol, abs_tol):
    total = 0.0
    for e, a, b in zip(error_vector, y_old, y_new):
        scale = abs_tol + rel_tol * max(abs(a), abs(b))
        total += (e / scale) ** 2
    return math.sqrt(total / len(error_vector))


def _advance(f, t0, y0, t_end, rel_tol, abs_tol, fixed_step, guard, max_steps):
    """Drive y' = f(t, y) from t0 to t_end; returns (records, termination).

    records is a list of (t, y, slope, error_norm); guard(t, y) returns a
    termination string when the state has left the admissible region.
    f may raise (pole inside a stage); adaptive mode shrinks the step and
    retries, fixed mode gives up with the pole flag.
    """
    records = []
    direction = 1.0 if t_end >= t0 else -1.0
    t, y = t0, list(y0)

    def evaluate(at, state):
        slope = f(at, state)
        if any(not math.isfinite(v) for v in slope):
            raise PoleError("non-finite derivative")
        return slope

    bad = guard(t, y)
    slope = None if bad else evaluate(t, y)
    records.append((t, tuple(y), tuple(slope) if slope else None, 0.0))
    if bad:
        return records, bad
    if t_end == t0:
        return records, REACHED_END

    if fixed_step is not None:
        h = direction * abs(fixed_step)
    else:
        h = direction * min(0.05, abs(t_end - t0) / 100.0)
    error_prev = 1.0

    for _ in range(max_steps):
        if direction * (t_end - t) <= 0:
            return records, REACHED_END
        terminal = direction * (t + h - t_end) >= 0
        if terminal:
            h = t_end - t
        if not terminal and abs(h) < 1e-14 * max(1.0, abs(t)):
            return records, STEP_UNDERFLOW

        stages = [slope]
        failed = False
        try:
            for i in range(1, 7):
                state = [
                    yj + h * sum(aij * kj[j] for aij, kj in zip(_A[i], stages))
                    for j, yj in enumerate(y)
                ]
                if i == 6:
                    y_new = state
                stages.append(evaluate(t + _C[i] * h, state))
        except (PoleError, ZeroDivisionError, OverflowError):
            failed = True
        if failed:
            if fixed_step is not None:
                return records, POLE_DETECTED
            h *= 0.5
            continue

        error_vector = [
            h * sum(ei * kj[j] for ei, kj in zip(_E, stages))
            for j in range(len(y))
        ]
        error = _norm(error_vector, y, y_new, rel_tol, abs_tol)

        if fixed_step is None and error > 1.0:
            factor = max(_SHRINK_CAP, _SAFETY * error ** (-_PI_ALPHA))
            h *= min(factor, 1.0)
            continue

        t = t_end if terminal else t + h
        y = y_new
        slope = stages[6]  # first-same-as-last
        records.append((t, tuple(y), tuple(slope), error))
        bad = guard(t, y)
        if bad:
            return records, bad
        if fixed_step is None:
            floor = max(error, 1e-10)
            factor = _SAFETY * floor ** (-_PI_ALPHA) * error_prev ** _PI_BETA
            h *= min(_GROW_CAP, max(_SHRINK_CAP, factor))
            error_prev = floor
    raise RuntimeError(f"step budget {max_steps} exhausted at t = {t}")


# -- the five systems ---------------------------------------------------


def _check_interval(parts, t0, t_end):
    lo, hi = min(t0, t_end), max(t0, t_end)
    for s in SINGULAR_TIMES[parts]:
        if lo <= s <= hi:
            raise PoleError(
                f"integration interval [{lo}, {hi}] contains the fixed "
                f"singular time t = {s:g}"
            )


def _system_guard(parts):
    singular = SINGULAR_TIMES[parts]

    def guard(t, y):
        if min(abs(t - s) for s in singular) < DENOMINATOR_FLOOR:
            return POLE_DETECTED
        if any(not math.isfinite(v) for v in y):
            return POLE_DETECTED
        if max(abs(v) for v in y) > STATE_CEILING:
            return POLE_DETECTED
        gauge_count = len(GAUGE_NAMES[parts])
        if gauge_count and max(abs(v) for v in y[-gauge_count:]) > LOG_GAUGE_CEILING:
            return POLE_DETECTED
        return None

    return guard


def integrate(
    system,
    pairs,
    gauges,
    params: SystemParameters,
    t0,
    t_end,
    rel_tol: float = 1e-8,
    abs_tol: float = 1e-10,
    fixed_step: float | None = None,
    max_steps: int = 200_000,
) -> Trajectory:
    """Float trajectory of one partition's canonical flow plus gauges.

    system is a partition tuple or a system id (cp6 means its (3,3)
    realization).  gauges maps each of the partition's gauge names to a
    nonzero starting value.  The interval [t0, t_end] must avoid the
    fixed singular times; movable poles terminate the trajectory with a
    flag rather than an exception.
    """
    parts = resolve_partition(system)
    system_id = REDUCTION_TARGET[parts]
    _check_interval(parts, t0, t_end)
    names = GAUGE_NAMES[parts]
    gauge_start = []
    for name in names:
        if name not in gauges:
            raise ValueError(f"missing starting value for gauge {name}")
        value = float(gauges[name])
        if value == 0.0:
            raise PoleError(f"gauge {name} must start nonzero")
        gauge_start.append(value)
    pair_count = SYSTEM_PAIRS[system_id]
    if len(pairs) != pair_count:
        raise ValueError(f"{parts} carries {pair_count} canonical pair(s)")

    t0 = float(t0)
    t_end = float(t_end)
    y0 = [float(c) for qp in pairs for c in qp] + [0.0] * len(names)

    def f(t, y):
        points = tuple(
            (y[2 * i], y[2 * i + 1]) for i in range(pair_count)
        )
        flows = vector_field(system_id, points, t, params)
        out = [float(c) for qp in flows for c in qp]
        if names:
            dlogs = gauge_log_derivatives(parts, points, t, params)
            out.extend(float(dlogs[name]) for name in names)
        return out

    records, termination = _advance(
        f, t0, y0, t_end, rel_tol, abs_tol, fixed_step, _system_guard(parts), max_steps
    )

    trajectory = Trajectory(
        partition=parts,
        system=system_id,
        params=params,
        gauge_names=names,
        rel_tol=rel_tol,
        abs_tol=abs_tol,
        termination=termination,
        _gauge_start=tuple(gauge_start),
    )
    for t, y, slope, error in records:
        trajectory._states.append(y)
        trajectory._slopes.append(slope)
        trajectory.samples.append(_sample_from_state(trajectory, t, y, error))
    return trajectory


def _sample_from_state(trajectory, t, y, error) -> TrajectorySample:
    pair_count = SYSTEM_PAIRS[trajectory.system]
    points = tuple((y[2 * i], y[2 * i + 1]) for i in range(pair_count))
    gauges = {
        name: start * math.exp(y[2 * pair_count + k])
        for k, (name, start) in enumerate(
            zip(trajectory.gauge_names, trajectory._gauge_start)
        )
    }
    return TrajectorySample(t=t, pairs=points, gauges=gauges, error=error)


# -- dense output --------------------------------------------------------


def _hermite(t, t0, y0, f0, t1, y1, f1):
    h = t1 - t0
    s = (t - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return [
        h00 * a + h10 * h * fa + h01 * b + h11 * h * fb
        for a, fa, b, fb in zip(y0, f0, y1, f1)
    ]


def dense_samples(trajectory: Trajectory, times) -> list:
    """Cubic Hermite interpolation of the trajectory at requested times.

    Times must lie inside the span the trajectory actually covered (it
    may have stopped early at a pole).
    """
    knots = [s.t for s in trajectory.samples]
    if len(knots) == 1:
        lone = trajectory.samples[0]
        for t in times:
            if t != lone.t:
                raise ValueError(f"time {t} outside the integrated span")
        return [lone for _ in times]
    forward = knots[-1] >= knots[0]
    lo, hi = (knots[0], knots[-1]) if forward else (knots[-1], knots[0])
    out = []
    index = 0
    for t in sorted(times, reverse=not forward):
        if not lo <= t <= hi:
            raise ValueError(f"time {t} outside the integrated span [{lo}, {hi}]")
        while index + 2 < len(knots) and (
            knots[index + 1] < t if forward else knots[index + 1] > t
        ):
            index += 1
        y = _hermite(
            t,
            knots[index],
            trajectory._states[index],
            trajectory._slopes[index],
            knots[index + 1],
            trajectory._states[index + 1],
            trajectory._slopes[index + 1],
        )
        out.append(_sample_from_state(trajectory, t, y, float("nan")))
    if not forward:
        out.reverse()
    return out


# -- persistence ----------------------------------------------------------


def csv_header(trajectory: Trajectory) -> str:
    pair_count = SYSTEM_PAIRS[trajectory.system]
    columns = ["t"]
    for i in range(1, pair_count + 1):
        columns += [f"q{i}", f"p{i}"]
    columns += list(trajectory.gauge_names)
    return ",".join(columns)


def csv_rows(trajectory: Trajectory, times=None):
    """Header plus one row per accepted step (or per requested time)."""
    yield csv_header(trajectory)
    samples = (
        trajectory.samples if times is None else dense_samples(trajectory, times)
    )
    for s in samples:
        cells = [repr(s.t)]
        for q, p in s.pairs:
            cells += [repr(q), repr(p)]
        cells += [repr(s.gauges[name]) for name in trajectory.gauge_names]
        yield ",".join(cells)


def metadata(trajectory: Trajectory) -> dict:
    """JSON-ready sidecar describing the run."""
    from .reporting import jsonable

    return {
        "system": trajectory.system,
        "partition": list(trajectory.partition),
        "params": {
            "alpha": jsonable(trajectory.params.alpha),
            "eta": jsonable(trajectory.params.eta),
        },
        "tolerances": {"rel": trajectory.rel_tol, "abs": trajectory.abs_tol},
        "termination": trajectory.termination,
        "samples": len(trajectory.samples),
    }


# -- correctness monitors -------------------------------------------------


def residual_along(trajectory: Trajectory, partition=None) -> dict:
    """Max zero-curvature residual magnitude over the trajectory samples.

    The float image of the exact identity, evaluated with the stored
    step slopes standing in for the vector field: small values certify
    that the stored states and stored rates satisfy the flow-coupled
    identity together, so a corrupted sample shows up immediately.
    """
    parts = resolve_partition(partition if partition is not None else trajectory.partition)
    kappas, rhos = reduction_constants(parts, trajectory.params)
    pair_count = SYSTEM_PAIRS[trajectory.system]
    worst = 0.0
    worst_t = trajectory.samples[0].t
    for s, slope in zip(trajectory.samples, trajectory._slopes):
        if slope is None:
            continue
        frame = numeric_frame(parts, s.t)
        pair_rates = tuple(
            (slope[2 * i], slope[2 * i + 1]) for i in range(pair_count)
        )
        gauge_rates = {
            name: s.gauges[name] * slope[2 * pair_count + k]
            for k, name in enumerate(trajectory.gauge_names)
        }
        element = zero_curvature_residual(
            parts, s.pairs, s.t, s.gauges, kappas, rhos, frame=frame,
            pair_rates=pair_rates, gauge_rates=gauge_rates,
        )
        magnitude = residual_magnitude(element)
        if magnitude > worst:
            worst, worst_t = magnitude, s.t
    return {
        "partition": list(parts),
        "samples": len(trajectory.samples),
        "max_residual": worst,
        "at_t": worst_t,
    }


def order_check(step_sizes=(1e-2, 5e-3, 2.5e-3)) -> dict:
    """Observed convergence order on a problem with a known solution.

    A frequency-8 rotation: y = (cos 8t, -sin 8t) on [2, 3].  The
    frequency puts the global errors squarely between the float floor
    and the coarse-step regime for the three stated steps, so the
    log-log fit reads off the genuine asymptotic order.  Returns the
    fitted slope together with the raw errors.
    """

    def f(t, y):
        return [8.0 * y[1], -8.0 * y[0]]

    start = [math.cos(16.0), -math.sin(16.0)]
    exact = [math.cos(24.0), -math.sin(24.0)]
    errors = []
    for h in step_sizes:
        records, termination = _advance(
            f, 2.0, start, 3.0, 1e-12, 1e-12, h, lambda t, y: None, 10_000_000
        )
        assert termination == REACHED_END
        errors.append(max(abs(a - b) for a, b in zip(records[-1][1], exact)))
    logs_h = [math.log(h) for h in step_sizes]
    logs_e = [math.log(e) for e in errors]
    n = len(step_sizes)
    mean_h = sum(logs_h) / n
    mean_e = sum(logs_e) / n
    slope = sum((a - mean_h) * (b - mean_e) for a, b in zip(logs_h, logs_e)) / sum(
        (a - mean_h) ** 2 for a in logs_h
    )
    return {"step_sizes": list(step_sizes), "errors": errors, "slope": slope}
