"""Birational symmetries of the coupled sixth-Painleve system.

Six reflections act on the phase space by rational canonical shifts, on
the six affine weights by the degree-six cyclic Cartan action (both
neighbours gain alpha_i, alpha_i itself negates), and on the extra weight
eta by eta -> eta + (-1)^i alpha_i.  The eta shift is not optional: each
reflection is conjugation of the Lax pair by a unipotent gauge factor,
which moves the integration constants by kappa_i -> kappa_i + 3 alpha_i
while fixing the rho constant, and the parameter map of the reduction
carries that move precisely to the stated eta shift.  With eta held fixed
the third reflection is not even an involution; RESOLUTIONS.md works the
algebra out.

The gauge side lives here too: the unipotent factors for the coupled
sixth Lax pair, the induced motion of the gauge variable w3, and the
conjugation residual that ties the two pictures together exactly.
"""

from __future__ import annotations

import random

from .lax import canonical_to_ds, exact_frame, lax_matrices
from .loop import LoopElement, apply_theta, bracket, chevalley, identity
from .painleve import SystemParameters, reduction_parameters, vector_field
from .reporting import CheckReport
from .sampling import (
    RETRY_CAP,
    nonzero_rational,
    random_rational,
    rational_avoiding,
)
from .scalars import (
    QQ,
    Dual,
    PoleError,
    is_zero_scalar,
    tangent_of,
    value_of,
)

GENERATORS = (0, 1, 2, 3, 4, 5)

# pairs (i, j) with i < j that are not neighbours on the 6-cycle
NON_ADJACENT = tuple(
    (i, j)
    for i in GENERATORS
    for j in GENERATORS
    if i < j and (j - i) not in (1, 5)
)


def _require_nonzero(denominator, description):
    if is_zero_scalar(value_of(denominator)):
        raise PoleError(f"reflection pole: {description} = 0")
    return denominator


def _shifted_weights(alpha, index):
    out = list(alpha)
    gain = alpha[index]
    out[(index - 1) % 6] = out[(index - 1) % 6] + gain
    out[(index + 1) % 6] = out[(index + 1) % 6] + gain
    out[index] = -gain
    return tuple(out)


def apply_generator(index, pairs, params: SystemParameters, t):
    """One reflection on (pairs, params); t never moves.

    Scalars pass through generically, so dual numbers can ride along for
    Jacobian-vector products.  Vanishing reflection denominators raise
    :class:`PoleError` naming the denominator.
    """
    if index not in GENERATORS:
        raise ValueError(f"generator index out of range: {index}")
    (q1, p1), (q2, p2) = pairs
    alpha = params.alpha
    gain = alpha[index]
    if is_zero_scalar(gain):
        return pairs, params
    eta = params.eta
    sign = 1 if index % 2 == 0 else -1
    out_params = SystemParameters(
        alpha=_shifted_weights(alpha, index), eta=eta + sign * gain
    )
    if index == 0:
        gap = _require_nonzero(q1 - q2, "q1 - q2")
        out = ((q1, p1 - gain / gap), (q2, p2 + gain / gap))
    elif index == 1:
        _require_nonzero(p1, "p1")
        out = ((q1 + gain / p1, p1), (q2, p2))
    elif index == 2:
        gap = _require_nonzero(q1 - t, "q1 - t")
        out = ((q1, p1 - gain / gap), (q2, p2))
    elif index == 3:
        action = q1 * p1 + q2 * p2
        d_p = _require_nonzero(action + eta, "q1*p1 + q2*p2 + eta")
        d_q = _require_nonzero(
            action - gain + eta, "q1*p1 + q2*p2 - alpha3 + eta"
        )
        out = (
            (q1 + gain * q1 / d_q, p1 - gain * p1 / d_p),
            (q2 + gain * q2 / d_q, p2 - gain * p2 / d_p),
        )
    elif index == 4:
        gap = _require_nonzero(q2 - 1, "q2 - 1")
        out = ((q1, p1), (q2, p2 - gain / gap))
    else:
        _require_nonzero(p2, "p2")
        out = ((q1, p1), (q2 + gain / p2, p2))
    return out, out_params


def apply_word(word, pairs, params: SystemParameters, t):
    """Left-to-right composition; a singular step reports its prefix."""
    letters = tuple(word)
    for cut, index in enumerate(letters, start=1):
        try:
            pairs, params = apply_generator(index, pairs, params, t)
        except PoleError as err:
            prefix = ",".join(str(i) for i in letters[:cut])
            raise PoleError(f"word singular after prefix ({prefix}): {err}") from err
    return pairs, params


# -- group relations ---------------------------------------------------


def relation_words():
    """The defining relations, as (name, word) pairs of expected identities."""
    words = [(f"r{i}^2", (i, i)) for i in GENERATORS]
    for i in GENERATORS:
        j = (i + 1) % 6
        words.append((f"braid({i},{j})", (i, j, i, j, i, j)))
    for i, j in NON_ADJACENT:
        words.append((f"commute({i},{j})", (i, j, i, j)))
    return tuple(words)


def sample_weyl_point(rng: random.Random):
    """Random rational point with unit-sum weights, clear of every pole.

    The reflections are symmetries of the coupled system only on the
    locus where the six weights sum to one (both reduction parameter
    maps land there identically); off that locus the group relations
    still hold but equivariance with the flow does not.  The draw also
    avoids each generator's pole denominator so that any single
    reflection is defined at the returned point.
    """
    q1 = random_rational(rng)
    q2 = rational_avoiding(rng, (q1, QQ(1)))
    p1 = nonzero_rational(rng)
    p2 = nonzero_rational(rng)
    t = rational_avoiding(rng, (QQ(0), QQ(1), q1))
    tail = tuple(random_rational(rng) for _ in range(5))
    alpha = (QQ(1) - sum(tail),) + tail
    action = q1 * p1 + q2 * p2
    eta = rational_avoiding(rng, (-action, alpha[3] - action))
    return ((q1, p1), (q2, p2)), SystemParameters(alpha=alpha, eta=eta), t


def _admissible_sample(rng, word):
    for _ in range(RETRY_CAP):
        pairs, params, t = sample_weyl_point(rng)
        try:
            image = apply_word(word, pairs, params, t)
        except PoleError:
            continue
        return (pairs, params, t), image
    raise RuntimeError(f"no admissible point for word {word} in {RETRY_CAP} draws")


def check_relations(samples: int = 100, seed: int = 0) -> CheckReport:
    """Exact identity checks for every defining relation at random points."""
    rng = random.Random(seed)
    report = CheckReport("weyl-relations")
    for name, word in relation_words():
        witness = None
        for k in range(samples):
            (pairs, params, t), (img_pairs, img_params) = _admissible_sample(rng, word)
            if (
                img_pairs != pairs
                or img_params.alpha != params.alpha
                or img_params.eta != params.eta
            ):
                witness = {
                    "sample_index": k,
                    "point": {"pairs": pairs, "t": t},
                    "alpha": params.alpha,
                    "eta": params.eta,
                    "image_pairs": img_pairs,
                }
                break
        report.add(name, witness is None, witness)
    return report


# -- equivariance ------------------------------------------------------


def equivariance_residual(index, pairs, params: SystemParameters, t):
    """Jacobian-vector product of a reflection against the flow, minus the
    flow at the image: identically zero exactly when the reflection maps
    solutions to solutions.

    One dual pass: phase coordinates are seeded with the Hamiltonian
    vector field and the time coordinate with 1, so reflections whose
    formulas mention t explicitly contribute their time derivative.
    """
    flows = vector_field("cp6", pairs, t, params)
    lifted = tuple(
        (Dual(q, fq), Dual(p, fp)) for (q, p), (fq, fp) in zip(pairs, flows)
    )
    out_pairs, out_params = apply_generator(index, lifted, params, Dual(t, QQ(1)))
    image = tuple((value_of(q), value_of(p)) for q, p in out_pairs)
    image_params = SystemParameters(
        alpha=tuple(value_of(a) for a in out_params.alpha),
        eta=value_of(out_params.eta),
    )
    target = vector_field("cp6", image, t, image_params)
    residual = []
    for (q, p), (fq, fp) in zip(out_pairs, target):
        residual.append(tangent_of(q) - fq)
        residual.append(tangent_of(p) - fp)
    return tuple(residual)


def check_equivariance(samples: int = 100, seed: int = 0) -> CheckReport:
    """Exact vector-field equivariance for every reflection.

    Dr_i applied to the flow, compared with the flow at the image point
    and parameters: both sides must agree coefficient by coefficient."""
    rng = random.Random(seed)
    report = CheckReport("weyl-equivariance")
    for index in GENERATORS:
        witness = None
        count = 0
        while count < samples and witness is None:
            pairs, params, t = sample_weyl_point(rng)
            try:
                residual = equivariance_residual(index, pairs, params, t)
            except PoleError:
                continue
            count += 1
            if any(not is_zero_scalar(r) for r in residual):
                witness = {
                    "sample_index": count - 1,
                    "point": {"pairs": pairs, "t": t},
                    "alpha": params.alpha,
                    "eta": params.eta,
                    "residual": residual,
                }
        report.add(f"flow equivariance of r{index}", witness is None, witness)
    return report


# -- gauge picture for the coupled sixth Lax pair ----------------------


def gauge_function(index, pairs, t, w3, params: SystemParameters, frame=None):
    """Denominator of the unipotent gauge coefficient for one reflection.

    Lives in the cube-root time frame of the coupled sixth reduction; the
    returned scalar is an extension-field element.
    """
    if index not in GENERATORS:
        raise ValueError(f"generator index out of range: {index}")
    if frame is None:
        frame = exact_frame((3, 3), t)
    lift = frame.extension.lift
    u = frame.root
    third = lift(t) * u * u  # t^(1/3)
    two_thirds = lift(t) * u  # t^(2/3)
    (q1, p1), (q2, p2) = pairs
    w3 = lift(w3) if not hasattr(w3, "ext") else w3
    if index == 0:
        return w3 * lift(q2 - q1) / (3 * two_thirds)
    if index == 1:
        return -two_thirds * lift(p1) / w3
    if index == 2:
        return w3 * lift((q1 - t) / (3 * t))
    if index == 3:
        return lift(q1 * p1 + q2 * p2 + params.eta) / w3
    if index == 4:
        return w3 * lift(1 - q2) / (3 * third)
    return -third * lift(p2) / w3


def gauge_factor(index, pairs, t, w3, params: SystemParameters, frame=None) -> LoopElement:
    """The unipotent matrix 1 + (alpha_i/phi_i) f_i realizing a reflection."""
    if frame is None:
        frame = exact_frame((3, 3), t)
    phi = gauge_function(index, pairs, t, w3, params, frame)
    if is_zero_scalar(value_of(phi)):
        raise PoleError(f"gauge function phi_{index} = 0")
    lift = frame.extension.lift
    coefficient = lift(params.alpha[index]) / phi
    return identity(5) + chevalley(5, index, "f").scale(coefficient)


def reflected_gauge(index, pairs, params: SystemParameters, w3):
    """Image of the gauge variable w3 under one reflection.

    Solved from the conjugation identity: only the third reflection moves
    it, by the same ratio that rescales q1 inversely (w3*q1 is invariant).
    """
    if index != 3:
        return w3
    (q1, p1), (q2, p2) = pairs
    action = q1 * p1 + q2 * p2
    d_p = _require_nonzero(action + params.eta, "q1*p1 + q2*p2 + eta")
    return w3 * (d_p - params.alpha[3]) / d_p


def conjugation_residual(index, pairs, t, w3, kappas, rhos, frame=None) -> LoopElement:
    """Gauge-conjugated M minus M at the reflected point; exactly zero.

    The conjugation is by exp(x) with x = (alpha_i/phi_i) f_i; x squares
    to zero in the evaluation representation, so the adjoint series stops
    at second order, and the grade-operator inhomogeneity is theta(x).
    The central coefficient moves through the bracket cocycle, matching
    the kappa_i -> kappa_i + 3 alpha_i shift of the constants.
    """
    if frame is None:
        frame = exact_frame((3, 3), t)
    params = reduction_parameters((3, 3), kappas, rhos)
    state = canonical_to_ds((3, 3), pairs, t, {"w3": w3}, kappas, rhos, frame=frame)
    pair = lax_matrices(state)
    phi = gauge_function(index, pairs, t, w3, params, frame)
    if is_zero_scalar(value_of(phi)):
        raise PoleError(f"gauge function phi_{index} = 0")
    x = chevalley(5, index, "f").scale(
        frame.extension.lift(params.alpha[index]) / phi
    )
    m = pair.m_matrix
    bridge = (
        m
        + bracket(x, m)
        + bracket(x, bracket(x, m)).scale(QQ(1, 2))
        + apply_theta(pair.theta, x)
    )
    new_pairs, _ = apply_generator(index, pairs, params, t)
    new_kappas = tuple(
        k + 3 * params.alpha[index] if j == index else k
        for j, k in enumerate(kappas)
    )
    new_w3 = reflected_gauge(index, pairs, params, w3)
    new_state = canonical_to_ds(
        (3, 3), new_pairs, t, {"w3": new_w3}, new_kappas, rhos, frame=frame
    )
    return lax_matrices(new_state).m_matrix - bridge


def check_conjugation(samples: int = 25, seed: int = 0) -> CheckReport:
    """Exact gauge-conjugation bridge for every reflection.

    The unipotent conjugate of M, with the grade-operator inhomogeneity,
    must equal M rebuilt at the reflected point and shifted constants;
    the comparison includes the central coefficients."""
    rng = random.Random(seed)
    report = CheckReport("gauge-conjugation")
    for index in GENERATORS:
        witness = None
        count = 0
        while count < samples and witness is None:
            pairs, _, t = sample_weyl_point(rng)
            w3 = nonzero_rational(rng)
            kappas = tuple(random_rational(rng) for _ in range(6))
            rhos = (random_rational(rng),)
            try:
                residual = conjugation_residual(index, pairs, t, w3, kappas, rhos)
            except PoleError:
                continue
            count += 1
            if not residual.is_zero():
                witness = {
                    "sample_index": count - 1,
                    "point": {"pairs": pairs, "t": t, "w3": w3},
                    "kappas": kappas,
                    "rhos": rhos,
                }
        report.add(f"conjugation bridge of r{index}", witness is None, witness)
    return report
