"""Shortest bounded-curvature paths with forward and reverse motion.

Candidate words are generated from the standard path families (CSC, CCC,
CCCC, CCSC, CCSCC) under the timeflip/reflect/backwards transforms, checked
by endpoint reconstruction, and the shortest valid word wins.  Segment
lengths are returned non-negative with an explicit direction sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

_ZERO = 1e-10
_EPS = 1e-6

LEFT = "L"
RIGHT = "R"
STRAIGHT = "S"


@dataclass(frozen=True)
class RSSegment:
    kind: str        # "L" | "R" | "S"
    direction: int   # +1 forward, -1 reverse
    length: float    # arc length, world units, >= 0


@dataclass(frozen=True)
class RSPath:
    segments: Tuple[RSSegment, ...]
    length: float    # total arc length, world units


def _mod2pi(x: float) -> float:
    v = math.fmod(x, 2.0 * math.pi)
    if v < -math.pi:
        v += 2.0 * math.pi
    elif v > math.pi:
        v -= 2.0 * math.pi
    return v


def _polar(x: float, y: float) -> Tuple[float, float]:
    return math.hypot(x, y), math.atan2(y, x)


def _tau_omega(u, v, xi, eta, phi):
    delta = _mod2pi(u - v)
    a = math.sin(u) - math.sin(delta)
    b = math.cos(u) - math.cos(delta) - 1.0
    t1 = math.atan2(eta * a - xi * b, xi * a + eta * b)
    t2 = 2.0 * (math.cos(delta) - math.cos(v) - math.cos(u)) + 3.0
    tau = _mod2pi(t1 + math.pi) if t2 < 0 else _mod2pi(t1)
    omega = _mod2pi(tau - u + v - phi)
    return tau, omega


# --- base formulas; each returns (ok, t, u, v) ------------------------------

def _lp_sp_lp(x, y, phi):
    u, t = _polar(x - math.sin(phi), y - 1.0 + math.cos(phi))
    if t >= -_ZERO:
        v = _mod2pi(phi - t)
        if v >= -_ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


def _lp_sp_rp(x, y, phi):
    t1, theta = _polar(x + math.sin(phi), y - 1.0 - math.cos(phi))
    if t1 * t1 >= 4.0:
        u = math.sqrt(t1 * t1 - 4.0)
        t = _mod2pi(theta + math.atan2(2.0, u))
        v = _mod2pi(t - phi)
        if t >= -_ZERO and v >= -_ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


def _lp_rm_l(x, y, phi):
    xi = x - math.sin(phi)
    eta = y - 1.0 + math.cos(phi)
    u1, theta = _polar(xi, eta)
    if u1 <= 4.0:
        u = -2.0 * math.asin(0.25 * u1)
        t = _mod2pi(theta + 0.5 * u + math.pi)
        v = _mod2pi(phi - t + u)
        if t >= -_ZERO and u <= _ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


def _lp_rup_lum_rm(x, y, phi):
    xi = x + math.sin(phi)
    eta = y - 1.0 - math.cos(phi)
    rho = 0.25 * (2.0 + math.hypot(xi, eta))
    if rho <= 1.0:
        u = math.acos(rho)
        t, v = _tau_omega(u, -u, xi, eta, phi)
        if t >= -_ZERO and v <= _ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


def _lp_rum_lum_rp(x, y, phi):
    xi = x + math.sin(phi)
    eta = y - 1.0 - math.cos(phi)
    rho = (20.0 - xi * xi - eta * eta) / 16.0
    if 0.0 <= rho <= 1.0:
        u = -math.acos(rho)
        if u >= -0.5 * math.pi:
            t, v = _tau_omega(u, u, xi, eta, phi)
            if t >= -_ZERO and v >= -_ZERO:
                return True, t, u, v
    return False, 0.0, 0.0, 0.0


def _lp_rm_sm_lm(x, y, phi):
    xi = x - math.sin(phi)
    eta = y - 1.0 + math.cos(phi)
    rho, theta = _polar(xi, eta)
    if rho >= 2.0:
        r = math.sqrt(rho * rho - 4.0)
        u = 2.0 - r
        t = _mod2pi(theta + math.atan2(r, -2.0))
        v = _mod2pi(phi - 0.5 * math.pi - t)
        if t >= -_ZERO and u <= _ZERO and v <= _ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


def _lp_rm_sm_rm(x, y, phi):
    xi = x + math.sin(phi)
    eta = y - 1.0 - math.cos(phi)
    rho, theta = _polar(-eta, xi)
    if rho >= 2.0:
        t = theta
        u = 2.0 - rho
        v = _mod2pi(t + 0.5 * math.pi - phi)
        if t >= -_ZERO and u <= _ZERO and v <= _ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


def _lp_rm_sl_mr_p(x, y, phi):
    xi = x + math.sin(phi)
    eta = y - 1.0 - math.cos(phi)
    rho, _ = _polar(xi, eta)
    if rho >= 2.0:
        u = 4.0 - math.sqrt(rho * rho - 4.0)
        if u <= _ZERO:
            t = _mod2pi(math.atan2((4.0 - u) * xi - 2.0 * eta,
                                   -2.0 * xi + (u - 4.0) * eta))
            v = _mod2pi(t - phi)
            if t >= -_ZERO and v >= -_ZERO:
                return True, t, u, v
    return False, 0.0, 0.0, 0.0


# --- word enumeration -------------------------------------------------------

_FLIP = {LEFT: RIGHT, RIGHT: LEFT, STRAIGHT: STRAIGHT}


def _variants(fn, x, y, phi, pattern):
    """Apply a base formula under timeflip/reflect/both.

    ``pattern(t, u, v)`` yields (kind, signed length) pairs for the base
    orientation; transforms negate lengths and/or mirror L and R.
    """
    words = []
    ok, t, u, v = fn(x, y, phi)
    if ok:
        words.append(pattern(t, u, v))
    ok, t, u, v = fn(-x, y, -phi)  # timeflip
    if ok:
        words.append([(k, -l) for k, l in pattern(t, u, v)])
    ok, t, u, v = fn(x, -y, -phi)  # reflect
    if ok:
        words.append([(_FLIP[k], l) for k, l in pattern(t, u, v)])
    ok, t, u, v = fn(-x, -y, phi)  # timeflip + reflect
    if ok:
        words.append([(_FLIP[k], -l) for k, l in pattern(t, u, v)])
    return words


def _candidate_words(x, y, phi) -> List[list]:
    words = []
    # CSC
    words += _variants(_lp_sp_lp, x, y, phi,
                       lambda t, u, v: [(LEFT, t), (STRAIGHT, u), (LEFT, v)])
    words += _variants(_lp_sp_rp, x, y, phi,
                       lambda t, u, v: [(LEFT, t), (STRAIGHT, u), (RIGHT, v)])
    # CCC, plus the backwards transform (reversed word solves the reversed pose)
    xb = x * math.cos(phi) + y * math.sin(phi)
    yb = x * math.sin(phi) - y * math.cos(phi)
    words += _variants(_lp_rm_l, x, y, phi,
                       lambda t, u, v: [(LEFT, t), (RIGHT, u), (LEFT, v)])
    words += _variants(_lp_rm_l, xb, yb, phi,
                       lambda t, u, v: [(LEFT, v), (RIGHT, u), (LEFT, t)])
    # CCCC
    words += _variants(_lp_rup_lum_rm, x, y, phi,
                       lambda t, u, v: [(LEFT, t), (RIGHT, u), (LEFT, -u), (RIGHT, v)])
    words += _variants(_lp_rum_lum_rp, x, y, phi,
                       lambda t, u, v: [(LEFT, t), (RIGHT, u), (LEFT, u), (RIGHT, v)])
    # CCSC (second arc pinned at -pi/2), plus backwards
    words += _variants(_lp_rm_sm_lm, x, y, phi,
                       lambda t, u, v: [(LEFT, t), (RIGHT, -0.5 * math.pi),
                                        (STRAIGHT, u), (LEFT, v)])
    words += _variants(_lp_rm_sm_rm, x, y, phi,
                       lambda t, u, v: [(LEFT, t), (RIGHT, -0.5 * math.pi),
                                        (STRAIGHT, u), (RIGHT, v)])
    words += _variants(_lp_rm_sm_lm, xb, yb, phi,
                       lambda t, u, v: [(LEFT, v), (STRAIGHT, u),
                                        (RIGHT, -0.5 * math.pi), (LEFT, t)])
    words += _variants(_lp_rm_sm_rm, xb, yb, phi,
                       lambda t, u, v: [(RIGHT, v), (STRAIGHT, u),
                                        (RIGHT, -0.5 * math.pi), (LEFT, t)])
    # CCSCC
    words += _variants(_lp_rm_sl_mr_p, x, y, phi,
                       lambda t, u, v: [(LEFT, t), (RIGHT, -0.5 * math.pi), (STRAIGHT, u),
                                        (LEFT, -0.5 * math.pi), (RIGHT, v)])
    return words


def _advance(x, y, theta, kind, length):
    """Integrate one unit-radius segment with signed length."""
    if kind == STRAIGHT:
        return x + length * math.cos(theta), y + length * math.sin(theta), theta
    if kind == LEFT:
        th = theta + length
        return (x - math.sin(theta) + math.sin(th),
                y + math.cos(theta) - math.cos(th), th)
    th = theta - length
    return (x + math.sin(theta) - math.sin(th),
            y - math.cos(theta) + math.cos(th), th)


def word_endpoint(word) -> Tuple[float, float, float]:
    x = y = theta = 0.0
    for kind, length in word:
        x, y, theta = _advance(x, y, theta, kind, length)
    return x, y, theta


def _word_reaches(word, x, y, phi) -> bool:
    ex, ey, eth = word_endpoint(word)
    return (
        abs(ex - x) <= _EPS
        and abs(ey - y) <= _EPS
        and abs(_mod2pi(eth - phi)) <= _EPS
    )


def word_length(word) -> float:
    return sum(abs(l) for _, l in word)


def shortest_word(x: float, y: float, phi: float) -> list:
    """Shortest valid word reaching (x, y, phi) in unit-radius coordinates."""
    best, best_len = None, math.inf
    for word in _candidate_words(x, y, phi):
        if not _word_reaches(word, x, y, phi):
            continue
        length = word_length(word)
        if length < best_len - 1e-12:
            best, best_len = word, length
    if best is None:  # numerically degenerate target: stay in place
        return []
    return best


def reeds_shepp_path(q0: Tuple[float, float, float],
                     q1: Tuple[float, float, float],
                     r_turn: float) -> RSPath:
    """Shortest path between poses for a turning radius ``r_turn``."""
    if r_turn <= 0:
        raise ValueError("r_turn must be positive")
    dx = q1[0] - q0[0]
    dy = q1[1] - q0[1]
    c, s = math.cos(q0[2]), math.sin(q0[2])
    x = (c * dx + s * dy) / r_turn
    y = (-s * dx + c * dy) / r_turn
    phi = _mod2pi(q1[2] - q0[2])
    word = shortest_word(x, y, phi)
    segments = []
    for kind, length in word:
        if abs(length) < _ZERO:
            continue
        direction = 1 if length >= 0 else -1
        world = abs(length) * r_turn
        segments.append(RSSegment(kind, direction, world))
    total = sum(seg.length for seg in segments)
    return RSPath(tuple(segments), total)


def path_length(q0, q1, r_turn) -> float:
    return reeds_shepp_path(q0, q1, r_turn).length
