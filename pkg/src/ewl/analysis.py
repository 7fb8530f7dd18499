"""Equilibrium analysis of EWL games over restricted unitary strategy sets.

Continuous strategy sets are searched on a grid followed by a few rounds
of local refinement, so every verdict is certified only at the stated
resolution.
"""

from dataclasses import dataclass, field
import math
import re
from typing import NamedTuple

import numpy as np

from ._expr import split_top_level
from .games import BimatrixGame, NASH_TOL
from .quantum import (IDENTITY, IX, TWO_PI, UnitaryStrategy, as_mixture,
                      ewl_payoff_closed_form, outcome_coefficients, parse_strategy)

KINDS = ("one_parameter", "finite", "one_parameter_plus_extras",
         "full_two_parameter", "full_three_parameter")

# Free parameters per kind. The two-parameter family varies theta and beta
# with alpha pinned to 0, which contains U(pi/2, 0, -pi/2).
_FREE = {
    "one_parameter": ("theta",),
    "finite": (),
    "one_parameter_plus_extras": ("theta",),
    "full_two_parameter": ("theta", "beta"),
    "full_three_parameter": ("theta", "alpha", "beta"),
}
_DEFAULT_GRID = {
    "one_parameter": (721,),
    "finite": (),
    "one_parameter_plus_extras": (721,),
    "full_two_parameter": (721, 1440),
    "full_three_parameter": (91, 180, 180),
}
REFINEMENT_ROUNDS = 3
TIE_TOL = 1e-12
_CHUNK = 2_000_000
HALF_PI_SHIFT = UnitaryStrategy(math.pi / 2, 0.0, -math.pi / 2)


@dataclass(frozen=True)
class StrategySetSpec:
    """A restricted set of unitary strategies for one player.

    ``grid`` gives one resolution per free parameter (theta first, then
    alpha, then beta); ``None`` selects the defaults.
    """

    kind: str
    extras: tuple = ()
    grid: tuple = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown strategy set kind {self.kind!r}")
        extras = tuple(self.extras)
        if not all(isinstance(s, UnitaryStrategy) for s in extras):
            raise TypeError("extras must be UnitaryStrategy instances")
        object.__setattr__(self, "extras", extras)
        if self.kind == "finite" and not extras:
            raise ValueError("a finite strategy set needs at least one strategy")
        grid = _DEFAULT_GRID[self.kind] if self.grid is None else tuple(int(g) for g in self.grid)
        if len(grid) == 1 and len(self.free) > 1:
            grid = grid * len(self.free)
        if len(grid) != len(self.free):
            raise ValueError(f"{self.kind} needs {len(self.free)} grid resolutions, got {len(grid)}")
        if any(g < 2 for g in grid):
            raise ValueError("grid resolutions must be at least 2")
        object.__setattr__(self, "grid", grid)

    @property
    def free(self):
        return _FREE[self.kind]

    def axes(self):
        """Grid values for each free parameter."""
        out = []
        for name, n in zip(self.free, self.grid):
            if name == "theta":
                out.append(math.pi * (np.arange(n) / (n - 1)))
            else:
                out.append(TWO_PI * (np.arange(n) / n))
        return out

    def steps(self):
        return [math.pi / (n - 1) if name == "theta" else TWO_PI / n
                for name, n in zip(self.free, self.grid)]

    def contains(self, s, tol=1e-10):
        if any(s.same_operator(e, tol) for e in self.extras):
            return True
        _, alpha, beta = s.normalized

        def zero(x):
            return min(x, TWO_PI - x) <= tol

        if self.kind in ("one_parameter", "one_parameter_plus_extras"):
            return zero(alpha) and zero(beta)
        if self.kind == "full_two_parameter":
            return zero(alpha)
        return self.kind == "full_three_parameter"

    def with_grid(self, *grid):
        return StrategySetSpec(self.kind, self.extras, grid)


def shift_restricted_set(grid=None):
    """One-parameter strategies plus U(pi/2, 0, -pi/2)."""
    return StrategySetSpec("one_parameter_plus_extras", (HALF_PI_SHIFT,), grid)


_SET_RE = re.compile(r"^\s*(?P<body>.*?)\s*(?:[,;\s]\s*grid\s*=\s*(?P<grid>[\dx]+))?\s*$")


def parse_strategy_set(text):
    """Parse ``one_param``, ``finite[U(..),..]``, ``one_param+[U(..)]``,
    ``two_param`` or ``three_param``, optionally followed by ``grid=<n>``
    (or ``grid=<n>x<m>`` for several parameters)."""
    match = _SET_RE.match(text)
    body, grid = match.group("body"), match.group("grid")
    grid = tuple(int(g) for g in grid.split("x")) if grid else None

    def strategies(inner):
        return tuple(parse_strategy(t) for t in split_top_level(inner) if t.strip())

    if body == "one_param":
        return StrategySetSpec("one_parameter", (), grid)
    if body == "two_param":
        return StrategySetSpec("full_two_parameter", (), grid)
    if body == "three_param":
        return StrategySetSpec("full_three_parameter", (), grid)
    if body.startswith("finite[") and body.endswith("]"):
        return StrategySetSpec("finite", strategies(body[7:-1]), None)
    if body.startswith("one_param+[") and body.endswith("]"):
        return StrategySetSpec("one_parameter_plus_extras", strategies(body[11:-1]), grid)
    raise ValueError(f"cannot parse strategy set {text!r}")


# --- extended bimatrix tables -----------------------------------------------

def _label(s):
    if s.same_operator(IDENTITY):
        return "I"
    if s.same_operator(IX):
        return "iX"
    return s.literal


def build_extended_bimatrix(game, extras=()):
    """Tabulate EWL payoffs over ``{I, iX}`` plus extra strategies.

    ``extras`` is either one list used by both players or a pair of lists.
    """
    if game.shape != (2, 2):
        raise ValueError("extended tables are built from 2x2 games")
    extras = list(extras)
    if extras and not isinstance(extras[0], UnitaryStrategy):
        ext1, ext2 = (list(e) for e in extras)
    else:
        ext1, ext2 = extras, extras
    sets = []
    for ext in (ext1, ext2):
        strategies = [IDENTITY, IX]
        for s in ext:
            if any(s.same_operator(t) for t in strategies):
                raise ValueError(f"duplicate strategy {s} (equal up to global phase)")
            strategies.append(s)
        sets.append(strategies)
    rows, cols = sets
    a = np.zeros((len(rows), len(cols)))
    b = np.zeros_like(a)
    for i, s1 in enumerate(rows):
        for j, s2 in enumerate(cols):
            a[i, j], b[i, j] = ewl_payoff_closed_form(game, s1, s2)
    table = BimatrixGame(a, b, [_label(s) for s in rows], [_label(s) for s in cols])
    table.row_strategies, table.col_strategies = tuple(rows), tuple(cols)
    return table


# --- best replies -------------------------------------------------------------

class BestReply(NamedTuple):
    value: float
    strategy: UnitaryStrategy


def _player_values(game, player, opponent, theta, alpha, beta):
    u = (game.a if player == 1 else game.b).ravel()
    total = 0.0
    for p, o in as_mixture(opponent):
        if player == 1:
            w = outcome_coefficients(theta, alpha, beta, o.theta, o.alpha, o.beta)
        else:
            w = outcome_coefficients(o.theta, o.alpha, o.beta, theta, alpha, beta)
        total = total + p * np.tensordot(u, w, axes=1)
    return total


def _params(spec, values):
    full = {"theta": 0.0, "alpha": 0.0, "beta": 0.0}
    full.update(zip(spec.free, values))
    return full["theta"], full["alpha"], full["beta"]


def _grid_argmax(game, player, opponent, spec):
    axes = spec.axes()
    best_val, best_params = -np.inf, None
    # Chunk over the leading axis to bound memory on three-parameter grids.
    inner = int(np.prod([len(a) for a in axes[1:]])) if len(axes) > 1 else 1
    per_chunk = max(1, _CHUNK // inner)
    for start in range(0, len(axes[0]), per_chunk):
        sub = [axes[0][start:start + per_chunk]] + axes[1:]
        mesh = np.meshgrid(*sub, indexing="ij")
        vals = _player_values(game, player, opponent, *_params(spec, mesh)).ravel()
        top = vals.max()
        if top > best_val + TIE_TOL:
            k = int(np.flatnonzero(vals >= top - TIE_TOL)[0])
            best_val, best_params = top, [m.ravel()[k] for m in mesh]
    return float(best_val), best_params


def _refine(game, player, opponent, spec, value, params, rounds):
    steps = spec.steps()
    offsets = np.arange(-2, 3) / 2.0
    for r in range(rounds):
        local = []
        for name, x, h in zip(spec.free, params, steps):
            pts = x + offsets * h / 2 ** r
            if name == "theta":
                pts = np.unique(np.clip(pts, 0.0, math.pi))
            local.append(pts)
        mesh = np.meshgrid(*local, indexing="ij")
        vals = _player_values(game, player, opponent, *_params(spec, mesh)).ravel()
        top = vals.max()
        if top > value + TIE_TOL:
            k = int(np.flatnonzero(vals >= top - TIE_TOL)[0])
            value, params = float(top), [m.ravel()[k] for m in mesh]
    return value, params


def best_reply(game, player, opponent, spec, refinement=REFINEMENT_ROUNDS):
    """Best payoff ``player`` (1 or 2) can reach against ``opponent`` within ``spec``.

    ``opponent`` may be a unitary strategy or a finite mixture. Ties are
    broken towards the smallest ``(theta, alpha, beta)``.
    """
    if player not in (1, 2):
        raise ValueError("player must be 1 or 2")
    if game.shape != (2, 2):
        raise ValueError("best replies are computed for 2x2 games")
    candidates = []
    if spec.free:
        value, params = _grid_argmax(game, player, opponent, spec)
        value, params = _refine(game, player, opponent, spec, value, params, refinement)
        candidates.append((value, UnitaryStrategy(*_params(spec, params))))
    for s in spec.extras:
        v = _player_values(game, player, opponent, s.theta, s.alpha, s.beta)
        candidates.append((float(v), s))
    if not candidates:
        raise ValueError("empty strategy set")
    top = max(v for v, _ in candidates)
    tied = [(s.normalized, v, s) for v, s in candidates if v >= top - TIE_TOL]
    _, value, strategy = min(tied, key=lambda t: t[0])
    return BestReply(float(value), strategy)


# --- Nash verification ----------------------------------------------------------

def mixed_closed_form_payoff(game, s1, s2):
    """Closed-form payoff averaged over (possibly mixed) unitary strategies."""
    total = np.zeros(2)
    for p, u1 in as_mixture(s1):
        for q, u2 in as_mixture(s2):
            total += p * q * ewl_payoff_closed_form(game, u1, u2)
    return total


@dataclass
class NashVerdict:
    profile: tuple
    is_equilibrium: bool
    deviation: tuple  # (player, strategy, gain) of the largest gain found
    payoffs: np.ndarray
    best_values: np.ndarray
    certificate: dict = field(default_factory=dict)

    @property
    def gain(self):
        return self.deviation[2]


def verify_nash_restricted(game, profile, sets, tol=NASH_TOL, refinement=REFINEMENT_ROUNDS):
    """Check a profile against unilateral deviations inside restricted sets.

    Mixed profiles must mix members of the player's own set. Deviations are
    searched over pure members only, which suffices because payoffs are
    affine in a player's own mixture.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    for k, (s, spec) in enumerate(zip(profile, sets), 1):
        for _, u in as_mixture(s):
            if not spec.contains(u):
                raise ValueError(f"player {k} strategy {u} is not in the strategy set")
    current = mixed_closed_form_payoff(game, *profile)
    replies = [best_reply(game, 1, profile[1], sets[0], refinement),
               best_reply(game, 2, profile[0], sets[1], refinement)]
    gains = np.array([replies[0].value - current[0], replies[1].value - current[1]])
    k = int(np.argmax(gains))
    return NashVerdict(
        profile=tuple(profile),
        is_equilibrium=bool(np.all(gains <= tol)),
        deviation=(k + 1, replies[k].strategy, float(gains[k])),
        payoffs=current,
        best_values=np.array([r.value for r in replies]),
        certificate={"grid": (sets[0].grid, sets[1].grid), "refinement": refinement, "tol": tol},
    )


@dataclass
class ScanReport:
    survivors: list
    profiles_scanned: int
    grid_survivors: int
    resolution: tuple

    @property
    def has_survivors(self):
        return bool(self.survivors)


def _members(spec):
    out = [UnitaryStrategy(t) for t in spec.axes()[0]] if spec.free else []
    return out + list(spec.extras)


def no_pure_equilibrium_scan(game, sets, tol=NASH_TOL, refinement=REFINEMENT_ROUNDS):
    """Scan every pure profile of two one-parameter(+extras) sets for equilibria.

    All profiles on the grid are compared against the grid-wide best replies
    at once; the few that survive are re-checked with refined best replies.
    An empty ``survivors`` list means no equilibrium at this resolution; it
    is not a proof over the continuum.
    """
    for spec in sets:
        if spec.kind not in ("one_parameter", "one_parameter_plus_extras", "finite"):
            raise ValueError("the scan supports one-parameter and finite strategy sets")
    rows, cols = _members(sets[0]), _members(sets[1])
    p1 = np.array([[s.theta, s.alpha, s.beta] for s in rows]).T[:, :, None]
    p2 = np.array([[s.theta, s.alpha, s.beta] for s in cols]).T[:, None, :]
    w = outcome_coefficients(*p1, *p2)
    v1 = np.tensordot(game.a.ravel(), w, axes=1)
    v2 = np.tensordot(game.b.ravel(), w, axes=1)
    ok = (v1 >= v1.max(axis=0, keepdims=True) - tol) & (v2 >= v2.max(axis=1, keepdims=True) - tol)
    candidates = list(zip(*np.nonzero(ok)))
    survivors = []
    for i, j in candidates:
        verdict = verify_nash_restricted(game, (rows[i], cols[j]), sets, tol, refinement)
        if verdict.is_equilibrium:
            survivors.append((rows[i], cols[j]))
    return ScanReport(survivors, v1.size, len(candidates), (sets[0].grid, sets[1].grid))


def restricted_payoff_cases(game, s1, s2):
    """Case formula for matching-pennies payoffs over the restricted set.

    With ``a = k * [[1, -1], [-1, 1]]`` and ``b = -a``, player 1 receives
    ``k cos t1 cos t2``, ``-k sin t1``, ``-k sin t2`` or ``0`` depending on
    which players use U(pi/2, 0, -pi/2). Intended as a cross-check of the
    closed form.
    """
    k = game.a[0, 0]
    if not (np.allclose(game.a, k * np.array([[1, -1], [-1, 1]]), atol=0)
            and np.array_equal(game.b, -game.a)):
        raise ValueError("case formula applies to matching-pennies games only")
    spec = shift_restricted_set()
    for s in (s1, s2):
        if not spec.contains(s):
            raise ValueError(f"{s} is not in the restricted set")
    shift1, shift2 = s1.same_operator(HALF_PI_SHIFT), s2.same_operator(HALF_PI_SHIFT)
    if not shift1 and not shift2:
        v1 = k * math.cos(s1.theta) * math.cos(s2.theta)
    elif not shift1:
        v1 = -k * math.sin(s1.theta)
    elif not shift2:
        v1 = -k * math.sin(s2.theta)
    else:
        v1 = 0.0
    return np.array([v1, -v1])
