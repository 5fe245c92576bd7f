"""Lax pairs for the five partition reductions, verified exactly.

Each supported partition carries a pair of loop-algebra matrices (M, B):
M encodes the similarity-reduced dressing data, B the single surviving
hierarchy flow.  Written in the canonical Hamiltonian coordinates, the
compatibility condition

    dM/dt - theta(B_t) + [M, B_t] = 0,      B_t = (d tau/dt) B

is an exact identity, where t is the Painleve time, tau the hierarchy
time (an algebraic function of t, adjoined as a root symbol), and theta
the gradation derivation of the partition's Heisenberg subalgebra.
dM/dt is the total derivative along the Hamiltonian flow together with
the multiplier flows of the gauge variables.

This module assembles M and B from the reduced-variable presentation,
converts between canonical and reduced coordinates, and evaluates the
compatibility residual either exactly (rational points, root symbols
adjoined) or in floating point (along numeric trajectories).
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .heisenberg import Partition, build_heisenberg
from .loop import GradationSpec, LoopElement, apply_theta, bracket
from .painleve import (
    REDUCTION_TARGET,
    gauge_log_derivatives,
    reduction_parameters,
    vector_field,
)
from .reporting import SampleReport, jsonable
from .sampling import nonzero_rational, random_rational, rational_satisfying
from .scalars import (
    Dual,
    Extension,
    PoleError,
    QQ,
    is_zero_scalar,
    tangent_of,
    to_numeric,
    value_of,
)

SUPPORTED = ((3, 3), (2, 2, 1), (2, 2), (3, 1), (4, 1))

# Multiplier variables that are not determined by the canonical point and
# must be supplied (any nonzero value; only their log-derivative is fixed).
GAUGE_NAMES = {
    (3, 3): ("w3",),
    (2, 2): ("w1",),
    (2, 2, 1): ("phi3", "phi34"),
    (3, 1): ("phi12",),
    (4, 1): ("phi12",),
}

# How many kappa constants each reduction carries (one per row of the
# underlying matrix); every reduction has one rho, except (2,2,1) with two.
KAPPA_COUNT = {(3, 3): 6, (2, 2): 4, (2, 2, 1): 5, (3, 1): 4, (4, 1): 5}
RHO_COUNT = {(3, 3): 1, (2, 2): 1, (2, 2, 1): 2, (3, 1): 1, (4, 1): 1}


def _parts_tuple(partition) -> tuple:
    parts = tuple(partition.parts) if isinstance(partition, Partition) else tuple(partition)
    if parts not in SUPPORTED:
        raise ValueError("no Lax pair implemented for partition %r" % (parts,))
    return parts


# ---------------------------------------------------------------------------
# Time frames: the hierarchy time tau is an algebraic function of t, realised
# through a single adjoined root symbol per partition.


@dataclass(frozen=True)
class TimeFrame:
    """Carries the root symbol linking Painleve time t to hierarchy time tau.

    root_tangent is d(root)/dt in the same scalar ring as root.  For the
    exact frames the ring is a rational root extension; numeric frames use
    float or complex values and no extension.
    """

    parts: tuple
    extension: Extension | None
    root: object
    root_tangent: object


def tau_of_root(parts: tuple, t, root):
    """Hierarchy time tau in terms of the Painleve time and the root symbol."""
    if parts == (3, 1):
        return -t * root / 3
    return root


def exact_frame(parts: tuple, t: Fraction) -> TimeFrame:
    """Adjoin the partition's root symbol over QQ at rational time t."""
    parts = _parts_tuple(parts)
    t = QQ(t)
    if parts == (3, 3):
        if t == 0:
            raise PoleError("(3,3) frame needs t != 0")
        ext = Extension([("u", 3, 1 / t)])  # u = t^(-1/3), so tau = u
        return TimeFrame(parts, ext, ext.symbol("u"), ext.symbol_tangent("u", -1 / (t * t)))
    if parts in ((2, 2), (2, 2, 1)):
        if t == 0:
            raise PoleError("square-root frame needs t != 0")
        ext = Extension([("s", 2, t)])  # s = sqrt(t) = tau
        return TimeFrame(parts, ext, ext.symbol("s"), ext.symbol_tangent("s", QQ(1)))
    if parts == (3, 1):
        ext = Extension([("r", 2, QQ(6))])  # r = sqrt(6); tau = -t r/3
        return TimeFrame(parts, ext, ext.symbol("r"), ext.lift(0))
    if parts == (4, 1):
        if t == 0:
            raise PoleError("(4,1) frame needs t != 0")
        ext = Extension([("v", 2, -2 * t)])  # v = sqrt(-2t) = tau
        return TimeFrame(parts, ext, ext.symbol("v"), ext.symbol_tangent("v", QQ(-2)))
    raise ValueError(parts)


def numeric_frame(parts: tuple, t) -> TimeFrame:
    """Float (or complex, where the root is imaginary) counterpart of exact_frame."""
    parts = _parts_tuple(parts)
    if parts == (3, 3):
        root = t ** (-1 / 3) if t > 0 else -((-t) ** (-1 / 3))
        return TimeFrame(parts, None, root, -root / (3 * t))
    if parts in ((2, 2), (2, 2, 1)):
        root = math.sqrt(t) if t > 0 else cmath.sqrt(complex(t))
        return TimeFrame(parts, None, root, root / (2 * t))
    if parts == (3, 1):
        return TimeFrame(parts, None, math.sqrt(6.0), 0.0)
    if parts == (4, 1):
        root = cmath.sqrt(complex(-2 * t))
        return TimeFrame(parts, None, root, root / (2 * t))
    raise ValueError(parts)


def _dual_frame(frame: TimeFrame) -> TimeFrame:
    """Frame whose root carries its own t-derivative as a dual tangent."""
    return TimeFrame(frame.parts, frame.extension, Dual(frame.root, frame.root_tangent), None)


# ---------------------------------------------------------------------------
# Reduced-variable states.


@dataclass(frozen=True)
class DSState:
    """Reduced (dressing) coordinates of one partition at fixed time.

    variables holds the w/phi coordinates named as in the reduced
    presentation; tau and root are the hierarchy-time scalars of the frame
    used to build the state.  kappas and rhos are the first integrals of
    the reduction (plain constants).
    """

    partition: tuple
    variables: Mapping[str, object]
    t: object
    tau: object
    root: object
    kappas: tuple
    rhos: tuple


def canonical_to_ds(partition, pairs, t, gauges, kappas, rhos, frame=None) -> DSState:
    """Invert the canonical coordinate maps; gauge variables must be supplied.

    Variables not fixed by the canonical point are recovered from the
    constraint identities, so the output satisfies them exactly.
    """
    parts = _parts_tuple(partition)
    for name in GAUGE_NAMES[parts]:
        if is_zero_scalar(value_of(gauges[name])):
            raise PoleError(f"gauge variable {name} = 0")
    if parts == (3, 3) and is_zero_scalar(value_of(t) - 1):
        raise PoleError("(3,3) coordinate map excludes t = 1 (cubed time root)")
    if frame is None:
        frame = exact_frame(parts, t)
    root = frame.root
    tau = tau_of_root(parts, t, root)
    kappas = tuple(kappas)
    rhos = tuple(rhos)
    v: dict = {}

    if parts == (3, 3):
        (q1, p1), (q2, p2) = pairs
        w3 = gauges["w3"]
        k0, k1, k2, k3, k4, k5 = kappas
        (rho1,) = rhos
        v["w3"] = w3
        v["w1"] = q1 * tau * tau * w3
        v["w5"] = q2 * tau * w3
        v["phi1"] = 3 * p1 / (tau * tau * w3)
        v["phi5"] = 3 * p2 / (tau * w3)
        ksum = k0 - k1 + k2 - k3 + k4 - k5
        v["phi3"] = -(v["w1"] * v["phi1"] + v["w5"] * v["phi5"] + ksum + 3 * rho1) / w3
    elif parts == (2, 2):
        ((q, p),) = pairs
        w1 = gauges["w1"]
        k0, k1, k2, k3 = kappas
        (rho1,) = rhos
        v["w1"] = w1
        v["w3"] = q * w1 / tau
        v["phi3"] = 2 * tau * p / w1
        ksum = k0 - k1 + k2 - k3 + 2 * rho1
        v["phi1"] = -(v["w3"] * v["phi3"] + ksum) / w1
    elif parts == (2, 2, 1):
        (q1, p1), (q2, p2) = pairs
        phi3 = gauges["phi3"]
        phi34 = gauges["phi34"]
        k0, k1, k2, k3, k4 = kappas
        rho1, rho2 = rhos
        v["phi3"] = phi3
        v["phi34"] = phi34
        v["w4"] = -q1 * phi3 / (t * phi34)
        v["phi4"] = -4 * t * phi34 * p1 / phi3
        v["w1"] = -q2 * phi3 / (tau * phi34)
        v["phi1"] = -4 * tau * phi34 * p2 / phi3
        ladder = v["w1"] * v["phi1"] + v["w4"] * v["phi4"]
        v["phi12"] = 2 * tau * (ladder + k0 - k1 + k3 - k4 + 2 * rho1) / phi3
        v["phi2"] = -2 * (ladder + k0 - k1 + k2 - k4 + 2 * rho2) / phi34
    elif parts == (3, 1):
        (q1, p1), (q2, p2) = pairs
        phi12 = gauges["phi12"]
        k0, k1, k2, k3 = kappas
        (rho1,) = rhos
        v["phi12"] = phi12
        v["w2"] = -root * q1 / phi12
        v["phi2"] = -root * phi12 * p1 / 2
        v["phi1"] = root * q2
        v["phi0"] = -root * p2
        v["phi23"] = 3 * tau - v["phi0"] - v["phi1"]
        v["phi3"] = (2 * v["w2"] * v["phi2"] - 2 * (k2 - k3 - 3 * rho1)) / phi12
    elif parts == (4, 1):
        (q1, p1), (q2, p2) = pairs
        phi12 = gauges["phi12"]
        k0, k1, k2, k3, k4 = kappas
        (rho1,) = rhos
        v["phi12"] = phi12
        v["phi0"] = 4 * tau * q1
        v["phi1"] = 8 * p1 / tau
        v["phi2"] = tau * phi12 * (q2 - q1)
        v["phi34"] = 32 * p2 / (tau * phi12)
        v["phi23"] = 4 * tau - v["phi0"]
        v["phi4"] = 4 * tau - v["phi1"] - phi12 * v["phi34"] / 4
        v["phi3"] = (
            16 * (-k2 + k3 + 4 * rho1)
            - (v["phi0"] - 4 * tau) * phi12 * v["phi34"]
            - 4 * v["phi2"] * v["phi34"]
        ) / (4 * phi12)
    return DSState(parts, v, t, tau, root, kappas, rhos)


def ds_to_canonical(state: DSState):
    """Recover the canonical pairs and gauge values from reduced coordinates."""
    parts = state.partition
    v = state.variables
    tau = state.tau
    if parts == (3, 3):
        pairs = (
            (v["w1"] / (tau * tau * v["w3"]), tau * tau * v["w3"] * v["phi1"] / 3),
            (v["w5"] / (tau * v["w3"]), tau * v["w3"] * v["phi5"] / 3),
        )
        gauges = {"w3": v["w3"]}
    elif parts == (2, 2):
        pairs = ((tau * v["w3"] / v["w1"], v["w1"] * v["phi3"] / (2 * tau)),)
        gauges = {"w1": v["w1"]}
    elif parts == (2, 2, 1):
        pairs = (
            (-state.t * v["phi34"] * v["w4"] / v["phi3"], -v["phi3"] * v["phi4"] / (4 * state.t * v["phi34"])),
            (-tau * v["phi34"] * v["w1"] / v["phi3"], -v["phi3"] * v["phi1"] / (4 * tau * v["phi34"])),
        )
        gauges = {"phi3": v["phi3"], "phi34": v["phi34"]}
    elif parts == (3, 1):
        root = state.root
        pairs = (
            (-v["w2"] * v["phi12"] / root, -2 * v["phi2"] / (root * v["phi12"])),
            (v["phi1"] / root, -v["phi0"] / root),
        )
        gauges = {"phi12": v["phi12"]}
    elif parts == (4, 1):
        q1 = v["phi0"] / (4 * tau)
        pairs = (
            (q1, tau * v["phi1"] / 8),
            (q1 + v["phi2"] / (tau * v["phi12"]), tau * v["phi12"] * v["phi34"] / 32),
        )
        gauges = {"phi12": v["phi12"]}
    else:
        raise ValueError(parts)
    return pairs, gauges


def constraint_residuals(state: DSState) -> dict:
    """Left minus right of each constraint identity; zero on valid states."""
    parts = state.partition
    v = state.variables
    tau = state.tau
    k = state.kappas
    out: dict = {}
    if parts == (3, 3):
        ksum = k[0] - k[1] + k[2] - k[3] + k[4] - k[5]
        out["ladder"] = (
            v["w1"] * v["phi1"] + v["w3"] * v["phi3"] + v["w5"] * v["phi5"] + ksum + 3 * state.rhos[0]
        )
    elif parts == (2, 2):
        ksum = k[0] - k[1] + k[2] - k[3] + 2 * state.rhos[0]
        out["ladder"] = v["w1"] * v["phi1"] + v["w3"] * v["phi3"] + ksum
    elif parts == (2, 2, 1):
        rho1, rho2 = state.rhos
        ladder = v["w1"] * v["phi1"] + v["w4"] * v["phi4"]
        out["short_ladder"] = v["phi2"] * v["phi34"] + 2 * (ladder + k[0] - k[1] + k[2] - k[4] + 2 * rho2)
        out["long_ladder"] = v["phi3"] * v["phi12"] - 2 * tau * (ladder + k[0] - k[1] + k[3] - k[4] + 2 * rho1)
    elif parts == (3, 1):
        out["ladder"] = 2 * v["w2"] * v["phi2"] - v["phi3"] * v["phi12"] - 2 * (k[2] - k[3] - 3 * state.rhos[0])
        out["trace"] = v["phi0"] + v["phi1"] + v["phi23"] - 3 * tau
    elif parts == (4, 1):
        out["ladder"] = (
            (v["phi0"] - 4 * tau) * v["phi12"] * v["phi34"]
            + 4 * v["phi3"] * v["phi12"]
            + 4 * v["phi2"] * v["phi34"]
            - 16 * (-k[2] + k[3] + 4 * state.rhos[0])
        )
        out["trace_even"] = 4 * v["phi1"] + 4 * v["phi4"] + v["phi12"] * v["phi34"] - 16 * tau
        out["trace_odd"] = v["phi0"] + v["phi23"] - 4 * tau
    return out


# ---------------------------------------------------------------------------
# Matrix assembly.


@dataclass(frozen=True)
class LaxPair:
    partition: tuple
    m_matrix: LoopElement
    b_matrix: LoopElement
    theta: GradationSpec
    system: str


def _loop(rank: int, entries: dict, diag=None, c_k=0) -> LoopElement:
    parts: dict = {}
    for (deg, row, col), value in entries.items():
        parts.setdefault(deg, {})[(row, col)] = value
    if diag is not None:
        block = parts.setdefault(0, {})
        for index, value in enumerate(diag):
            block[(index, index)] = value
    return LoopElement(rank, parts, c_k=c_k)


def _kappa_diagonal(kappas) -> list:
    n = len(kappas)
    return [kappas[(i + 1) % n] - kappas[i] for i in range(n)]


def _coroot_diagonal(coeffs) -> list:
    # Diagonal of sum c_i alpha_i^vee over the non-affine simple coroots.
    diag = [coeffs[0]]
    for left, right in zip(coeffs, coeffs[1:]):
        diag.append(right - left)
    diag.append(-coeffs[-1])
    return diag


def lax_matrices(state: DSState) -> LaxPair:
    """Assemble (M, B) from a reduced state."""
    parts = state.partition
    v = state.variables
    tau = state.tau
    k = state.kappas
    rank = sum(parts) - 1
    kdiag = _kappa_diagonal(k)

    if parts == (3, 3):
        w1, w3, w5 = v["w1"], v["w3"], v["w5"]
        f1, f3, f5 = v["phi1"], v["phi3"], v["phi5"]
        (rho1,) = state.rhos
        m = _loop(
            rank,
            {
                (0, 0, 1): f1, (0, 1, 2): w3 - tau * w1, (0, 2, 3): f3,
                (0, 3, 4): w5 - tau * w3, (0, 4, 5): f5, (1, 5, 0): w1 - tau * w5,
                (0, 0, 2): tau, (0, 2, 4): tau, (1, 4, 0): tau,
                (0, 1, 3): 1, (0, 3, 5): 1, (1, 5, 1): 1,
            },
            diag=kdiag,
            c_k=k[0],
        )
        u1 = (w3 * f3 + w5 * f5 - 2 * w1 * f1 - 2 * k[0] + 2 * k[1] + k[2] - k[3] + k[4] - k[5]) / (3 * tau)
        u2 = -(w1 * f1 + k[0] - k[1] + rho1) / tau
        u3 = (2 * w5 * f5 - w1 * f1 - w3 * f3 - k[0] + k[1] - k[2] + k[3] + 2 * k[4] - 2 * k[5]) / (3 * tau)
        u4 = (w5 * f5 + k[4] - k[5] + rho1) / tau
        denom = tau * tau * tau - 1
        x1 = (tau * tau * f1 + tau * f5 + f3) / denom
        x3 = (tau * tau * f3 + tau * f1 + f5) / denom
        x5 = (tau * tau * f5 + tau * f3 + f1) / denom
        b = _loop(
            rank,
            {
                (0, 0, 1): x1, (0, 1, 2): -w1, (0, 2, 3): x3, (0, 3, 4): -w3,
                (0, 4, 5): x5, (1, 5, 0): -w5,
                (0, 0, 2): 1, (0, 2, 4): 1, (1, 4, 0): 1,
            },
            diag=_coroot_diagonal([u1 + w1 * x1, u2, u3 + w3 * x3, u4, w5 * x5]),
        )
    elif parts == (2, 2):
        w1, w3 = v["w1"], v["w3"]
        f1, f3 = v["phi1"], v["phi3"]
        (rho1,) = state.rhos
        m = _loop(
            rank,
            {
                (0, 0, 1): f1, (0, 1, 2): w3 - tau * w1, (0, 2, 3): f3,
                (1, 3, 0): w1 - tau * w3,
                (0, 0, 2): tau, (1, 2, 0): tau, (0, 1, 3): 1, (1, 3, 1): 1,
            },
            diag=kdiag,
            c_k=k[0],
        )
        ksum = k[0] - k[1] + k[2] - k[3] + 2 * rho1
        denom = (tau * tau - 1) * w1
        x1 = ((w1 - tau * w3) * f3 - ksum * tau) / denom
        x3 = ((tau * w1 - w3) * f3 - ksum) / denom
        u1 = (w1 * x3 - (k[0] - k[1] + rho1)) / tau
        u2 = (w3 * f3 + k[2] - k[3] + rho1) / tau
        b = _loop(
            rank,
            {
                (0, 0, 1): x1, (0, 1, 2): -w1, (0, 2, 3): x3, (1, 3, 0): -w3,
                (0, 0, 2): 1, (1, 2, 0): 1,
            },
            diag=_coroot_diagonal([u1, u2, w3 * x3]),
        )
    elif parts == (2, 2, 1):
        w1, w4 = v["w1"], v["w4"]
        f1, f2, f3, f4 = v["phi1"], v["phi2"], v["phi3"], v["phi4"]
        f12, f34 = v["phi12"], v["phi34"]
        rho1, rho2 = state.rhos
        m = _loop(
            rank,
            {
                (0, 0, 1): f1, (0, 1, 2): f2 - w1 * f12, (0, 2, 3): f3 + w4 * f34,
                (0, 3, 4): f4, (1, 4, 0): 2 * (w1 - tau * w4),
                (0, 0, 2): f12, (0, 1, 3): 2 * (w4 - tau * w1), (0, 2, 4): f34,
                (0, 0, 3): 2 * tau, (1, 3, 0): 2 * tau,
                (0, 1, 4): 2, (1, 4, 1): 2,
            },
            diag=kdiag,
            c_k=k[0],
        )
        ladder = w1 * f1 + w4 * f4 + k[0] - k[1] + k[3] - k[4] + 2 * rho1
        u2 = -(w1 * f1 + k[0] - k[1] + rho1) / (2 * tau)
        u3 = (w4 * f4 + k[3] - k[4] + rho1) / (2 * tau)
        denom = 2 * (tau * tau - 1) * f3
        x1 = ((tau * f1 + f4) * f3 + ladder * f34) / denom
        x4 = ((f1 + tau * f4) * f3 + tau * ladder * f34) / denom
        x12 = ladder / f3
        b = _loop(
            rank,
            {
                (0, 0, 1): x1, (0, 1, 2): -w1 * x12, (0, 2, 3): f3 / (2 * tau),
                (0, 3, 4): x4, (1, 4, 0): -w4,
                (0, 0, 2): x12, (0, 1, 3): -w1,
                (0, 0, 3): 1, (1, 3, 0): 1,
            },
            diag=_coroot_diagonal([u2 + w1 * x1, u2, u3, w4 * x4]),
        )
    elif parts == (3, 1):
        w2 = v["w2"]
        f0, f1, f2, f3 = v["phi0"], v["phi1"], v["phi2"], v["phi3"]
        f12, f23 = v["phi12"], v["phi23"]
        m = _loop(
            rank,
            {
                (0, 0, 1): f1 + w2 * f12, (0, 1, 2): f2, (0, 2, 3): f3 - w2 * f23,
                (1, 3, 0): f0,
                (0, 0, 2): f12, (0, 1, 3): f23, (1, 2, 0): -2 * w2,
                (0, 0, 3): 2, (1, 1, 0): 2, (1, 3, 1): 2,
            },
            diag=kdiag,
            c_k=k[0],
        )
        a0 = -(f1 - tau) / 2
        a1 = (f0 - tau) / 2
        a2 = w2 * f12 / 2
        b = _loop(
            rank,
            {
                (0, 1, 2): f12 / 2, (0, 2, 3): -w2,
                (0, 0, 1): 1, (0, 1, 3): 1, (1, 3, 0): 1,
            },
            diag=[a1 - a0, a2 - a1, -a2, a0],
        )
    elif parts == (4, 1):
        f0, f1, f2, f3, f4 = v["phi0"], v["phi1"], v["phi2"], v["phi3"], v["phi4"]
        f12, f23, f34 = v["phi12"], v["phi23"], v["phi34"]
        (rho1,) = state.rhos
        m = _loop(
            rank,
            {
                (0, 0, 1): f1, (0, 1, 2): f2, (0, 2, 3): f3, (0, 3, 4): f4,
                (1, 4, 0): f0,
                (0, 0, 2): f12, (0, 1, 3): f23, (0, 2, 4): f34,
                (0, 0, 3): 4, (0, 1, 4): 4, (1, 3, 0): 4, (1, 4, 1): 4,
            },
            diag=kdiag,
            c_k=k[0],
        )
        c = 16 * (k[0] - k[1] + k[2] - k[4] - 2 * rho1)
        core = f0 * (4 * f1 + f12 * f34)
        u0 = ((f0 - 4 * tau) * (4 * f1 + f12 * f34) + 4 * f2 * f34 + 16 * tau * tau + c) / (64 * tau)
        u2 = (core + 4 * (f2 - tau * f12) * f34 - 16 * tau * tau + c) / (64 * tau)
        u3 = (core + 4 * f2 * f34 - 16 * tau * tau + c) / (64 * tau)
        a1 = (f0 - 2 * tau) / 4
        b = _loop(
            rank,
            {
                (0, 1, 2): f12 / 4, (0, 2, 3): f34 / 4,
                (0, 0, 1): 1, (0, 1, 3): 1, (0, 3, 4): 1, (1, 4, 0): 1,
            },
            diag=[a1 - u0, u2 - a1, u3 - u2, -u3, u0],
        )
    else:
        raise ValueError(parts)
    theta = build_heisenberg(Partition(parts)).gradation
    return LaxPair(parts, m, b, theta, REDUCTION_TARGET[parts])


# ---------------------------------------------------------------------------
# Zero-curvature residual.


def zero_curvature_residual(
    partition, pairs, t, gauges, kappas, rhos, frame=None,
    pair_rates=None, gauge_rates=None,
) -> LoopElement:
    """R = dM/dt - theta(B_t) + [M, B_t]; identically zero on valid data.

    One dual pass computes dM/dt exactly: the canonical pair tangents are
    seeded with the Hamiltonian vector field, each gauge tangent with
    gauge times its multiplier log-derivative, t with 1 and the root
    symbol with its derivative through the defining relation.

    pair_rates and gauge_rates override the flow-derived tangents, which
    lets stored trajectory slopes stand in for the vector field; the
    residual then measures how far the stored data is from satisfying
    the flow-coupled identity.
    """
    parts = _parts_tuple(partition)
    if frame is None:
        frame = exact_frame(parts, t)
    params = reduction_parameters(parts, kappas, rhos)
    system = REDUCTION_TARGET[parts]
    if pair_rates is None:
        pair_rates = vector_field(system, pairs, t, params)
    if gauge_rates is None:
        dlogs = gauge_log_derivatives(parts, pairs, t, params)
        gauge_rates = {name: g * dlogs[name] for name, g in gauges.items()}

    pair_duals = tuple(
        (Dual(q, dq), Dual(p, dp)) for (q, p), (dq, dp) in zip(pairs, pair_rates)
    )
    gauge_duals = {name: Dual(g, gauge_rates[name]) for name, g in gauges.items()}
    state = canonical_to_ds(
        parts, pair_duals, Dual(t, 1), gauge_duals, kappas, rhos, frame=_dual_frame(frame)
    )
    pair = lax_matrices(state)

    m_matrix = pair.m_matrix.map_scalars(value_of)
    m_dot = pair.m_matrix.map_scalars(tangent_of)
    tau_rate = tangent_of(state.tau)
    b_t = pair.b_matrix.map_scalars(value_of).scale(tau_rate)
    return m_dot - apply_theta(pair.theta, b_t) + bracket(m_matrix, b_t)


def residual_magnitude(element: LoopElement, symbol_values: dict | None = None) -> float:
    """Max absolute value over all coefficients; floats/complex pass through."""
    worst = 0.0
    for deg, i, j, value in element.matrix_entries():
        worst = max(worst, abs(complex(to_numeric(value, symbol_values))))
    for part in (element.c_k, element.c_d):
        worst = max(worst, abs(complex(to_numeric(part, symbol_values))))
    return worst


def _worst_entry(element: LoopElement):
    for deg, i, j, value in element.matrix_entries():
        if not is_zero_scalar(value):
            return [i, j, deg], repr(value)
    if not is_zero_scalar(element.c_k):
        return ["K"], repr(element.c_k)
    return ["d"], repr(element.c_d)


# ---------------------------------------------------------------------------
# Randomized verification.


def sample_point(partition, rng: random.Random) -> dict:
    """Random admissible rational data for one verification sample."""
    parts = _parts_tuple(partition)
    t = rational_satisfying(rng, lambda x: x not in (0, 1))
    pair_count = 1 if parts == (2, 2) else 2
    pairs = []
    for _ in range(pair_count):
        q = random_rational(rng)
        p = nonzero_rational(rng)
        pairs.append((q, p))
    if pair_count == 2:
        while pairs[1][0] == pairs[0][0]:
            pairs[1] = (random_rational(rng), pairs[1][1])
    gauges = {name: nonzero_rational(rng) for name in GAUGE_NAMES[parts]}
    kappas = tuple(random_rational(rng) for _ in range(KAPPA_COUNT[parts]))
    rhos = tuple(random_rational(rng) for _ in range(RHO_COUNT[parts]))
    return {
        "pairs": tuple(pairs),
        "t": t,
        "gauges": gauges,
        "kappas": kappas,
        "rhos": rhos,
    }


def _examine_point(parts, point):
    """Constraint residuals then the zero-curvature element; None when clean."""
    state = canonical_to_ds(
        parts, point["pairs"], point["t"], point["gauges"], point["kappas"], point["rhos"]
    )
    for name, residual in constraint_residuals(state).items():
        if not is_zero_scalar(residual):
            return (["constraint", name], repr(residual))
    residual = zero_curvature_residual(
        parts, point["pairs"], point["t"], point["gauges"], point["kappas"], point["rhos"]
    )
    if not residual.is_zero():
        return _worst_entry(residual)
    return None


def verify_partition(partition, samples: int = 100, seed: int = 0, threads: int = 1) -> SampleReport:
    """Exact zero-curvature plus constraint check at random rational points.

    Points are drawn sequentially from the seed, so the report does not
    depend on threads; with threads > 1 the per-point work fans out over
    a pool and is folded back in sample order.
    """
    parts = _parts_tuple(partition)
    label = "zero-curvature %s" % ",".join(str(p) for p in parts)
    rng = random.Random(seed)
    points = [sample_point(parts, rng) for _ in range(samples)]

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda pt: _examine_point(parts, pt), points))
    else:
        outcomes = [_examine_point(parts, point) for point in points]

    report = SampleReport(label)
    for index, (point, bad) in enumerate(zip(points, outcomes)):
        if bad is None:
            report.record_pass()
        else:
            location, witness = bad
            report.record_failure(index, {k: jsonable(val) for k, val in point.items()}, location, witness)
    return report
