"""The EWL protocol on dense state vectors.

Qubit ``k`` belongs to player ``k + 1``. Basis index bits are player-1
major, so the label ``j1 j2 ... jn`` is the integer with ``j1`` as its most
significant bit (``|01>`` is index 1 for two players: player 1 played
``s_0``, player 2 played ``s_1``).
"""

from dataclasses import dataclass
from functools import reduce
from itertools import product
import math
import re

import numpy as np

from ._expr import eval_real, format_angle, split_top_level
from .games import BimatrixGame, PROB_TOL

TWO_PI = 2 * math.pi
MAX_QUBITS = 8
_X = np.array([[0, 1], [1, 0]], dtype=complex)


@dataclass(frozen=True)
class UnitaryStrategy:
    """SU(2) strategy ``U(theta, alpha, beta)``.

    Angles are kept exactly as given so that closed-form payoffs and gate
    conversions see the caller's values; :attr:`normalized` gives
    ``alpha`` and ``beta`` reduced to ``[0, 2*pi)``.
    """

    theta: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        for name in ("theta", "alpha", "beta"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if not -1e-12 <= self.theta <= math.pi + 1e-12:
            raise ValueError(f"theta={self.theta} outside [0, pi]")

    @property
    def normalized(self):
        return (self.theta, self.alpha % TWO_PI, self.beta % TWO_PI)

    @property
    def matrix(self):
        return su2_matrix(self)

    def same_operator(self, other, tol=1e-10):
        """True when both matrices agree up to a global phase."""
        overlap = abs(np.trace(self.matrix.conj().T @ other.matrix)) / 2
        return abs(overlap - 1.0) <= tol

    @property
    def literal(self):
        return f"U({format_angle(self.theta)},{format_angle(self.alpha)},{format_angle(self.beta)})"

    def __str__(self):
        return self.literal


IDENTITY = UnitaryStrategy(0.0, 0.0, 0.0)
IX = UnitaryStrategy(math.pi, 0.0, 0.0)


def one_parameter(p):
    """The strategy ``U(2 arccos sqrt(p), 0, 0)`` that mimics the mixture [p, 1-p]."""
    return UnitaryStrategy(2 * math.acos(math.sqrt(min(1.0, max(0.0, p)))), 0.0, 0.0)


@dataclass(frozen=True)
class MixedUnitaryStrategy:
    """Finite probability mixture of unitary strategies."""

    components: tuple

    def __post_init__(self):
        comps = tuple((float(p), s) for p, s in self.components)
        if not comps:
            raise ValueError("mixture needs at least one component")
        probs = np.array([p for p, _ in comps])
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"mixture probabilities must be nonnegative and sum to 1, got {probs}")
        if not all(isinstance(s, UnitaryStrategy) for _, s in comps):
            raise TypeError("mixture components must be UnitaryStrategy instances")
        object.__setattr__(self, "components", comps)

    @classmethod
    def point(cls, s):
        return cls(((1.0, s),))

    @classmethod
    def classical(cls, p):
        """``p * identity + (1 - p) * iX``, the quantum-operation form of a mixed strategy."""
        return cls(((p, IDENTITY), (1.0 - p, IX)))

    def __iter__(self):
        return iter(self.components)

    def __str__(self):
        return "+".join(f"{p!r}*{s.literal}" for p, s in self.components)


def as_mixture(s):
    return s if isinstance(s, MixedUnitaryStrategy) else MixedUnitaryStrategy.point(s)


_LITERAL = re.compile(r"^\s*U\s*\((.*)\)\s*$", re.S)
_ALIASES = {"I": IDENTITY, "1": IDENTITY, "id": IDENTITY, "iX": IX, "ix": IX}


def parse_strategy(text):
    """Parse ``U(theta,alpha,beta)`` (``pi`` allowed) or the aliases ``I`` / ``iX``."""
    text = text.strip()
    if text in _ALIASES:
        return _ALIASES[text]
    match = _LITERAL.match(text)
    if not match:
        raise ValueError(f"expected a strategy literal like U(pi/2,0,-pi/2), got {text!r}")
    args = split_top_level(match.group(1))
    if not 1 <= len(args) <= 3:
        raise ValueError(f"U(...) takes 1 to 3 angles, got {len(args)}")
    return UnitaryStrategy(*(eval_real(a) for a in args))


def parse_mixture(text):
    """Parse ``w1*U(...)+w2*U(...)``; a bare strategy literal is a point mass."""
    terms = [t.strip() for t in split_top_level(text.strip(), "+") if t.strip()]
    comps = []
    for term in terms:
        if term in _ALIASES or term.startswith("U"):
            comps.append((1.0, parse_strategy(term)))
            continue
        parts = split_top_level(term, "*")
        if len(parts) < 2:
            raise ValueError(f"expected weight*strategy, got {term!r}")
        comps.append((eval_real("*".join(parts[:-1])), parse_strategy(parts[-1])))
    return MixedUnitaryStrategy(comps)


class EwlGame:
    """Classical payoff data for n players with two strategies each.

    ``payoffs`` has shape ``(n, 2, ..., 2)``; ``payoffs[i][j1, ..., jn]`` is
    player i's payoff at the classical profile ``(s_j1, ..., s_jn)``.
    """

    def __init__(self, payoffs):
        t = np.array(payoffs, dtype=float)
        n = t.ndim - 1
        if n < 1 or t.shape != (n,) + (2,) * n:
            raise ValueError(f"payoff tensor must have shape (n, 2, ..., 2), got {t.shape}")
        if n > MAX_QUBITS:
            raise ValueError(f"at most {MAX_QUBITS} players are supported")
        if not np.all(np.isfinite(t)):
            raise ValueError("payoffs must be finite")
        t.setflags(write=False)
        self.payoffs = t

    @classmethod
    def from_bimatrix(cls, game):
        if game.shape != (2, 2):
            raise ValueError("the EWL scheme needs a 2x2 game")
        return cls(np.stack([game.a, game.b]))

    @property
    def players(self):
        return self.payoffs.shape[0]

    def observables(self):
        """Diagonal weights of each player's payoff observable, shape (n, 2**n)."""
        return self.payoffs.reshape(self.players, -1)


def _as_ewl(game):
    return EwlGame.from_bimatrix(game) if isinstance(game, BimatrixGame) else game


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).ravel()
        n = int(round(math.log2(amp.size))) if amp.size else -1
        if amp.size == 0 or 2 ** n != amp.size:
            raise ValueError("state length must be a power of two")
        if abs(np.vdot(amp, amp).real - 1.0) > 1e-10:
            raise ValueError("state is not normalized")
        object.__setattr__(self, "amplitudes", amp)

    @property
    def n_qubits(self):
        return int(round(math.log2(self.amplitudes.size)))

    def overlap(self, other):
        return abs(np.vdot(self.amplitudes, np.asarray(getattr(other, "amplitudes", other))))

    def equals_up_to_phase(self, other, tol=1e-10):
        return abs(self.overlap(other) - 1.0) <= tol

    @classmethod
    def basis(cls, label):
        """Computational basis state from a bit label such as ``"01"``."""
        amp = np.zeros(2 ** len(label), dtype=complex)
        amp[int(label, 2)] = 1.0
        return cls(amp)


def su2_matrix(s):
    c, sn = math.cos(s.theta / 2), math.sin(s.theta / 2)
    return np.array([
        [np.exp(1j * s.alpha) * c, 1j * np.exp(1j * s.beta) * sn],
        [1j * np.exp(-1j * s.beta) * sn, np.exp(-1j * s.alpha) * c],
    ])


def entangler(n):
    """``J = (I + i X^{(x)n}) / sqrt(2)`` on n qubits."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"entangler supports 1..{MAX_QUBITS} qubits, got {n}")
    xn = reduce(np.kron, [_X] * n)
    return (np.eye(2 ** n) + 1j * xn) / math.sqrt(2)


def final_state(game, strategies):
    """``J^dagger (U_1 (x) ... (x) U_n) J |0...0>``."""
    n = _as_ewl(game).players
    strategies = list(strategies)
    if len(strategies) != n:
        raise ValueError(f"expected {n} strategies, got {len(strategies)}")
    j = entangler(n)
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = 1.0
    local = reduce(np.kron, [su2_matrix(s) for s in strategies])
    return StateVector(j.conj().T @ (local @ (j @ psi)))


def outcome_distribution(state):
    """Born-rule probabilities keyed by basis index."""
    probs = np.abs(state.amplitudes) ** 2
    return {k: float(p) for k, p in enumerate(probs)}


def ewl_payoff(game, strategies):
    """Expected payoffs ``tr(|psi><psi| M_i)`` from the simulated final state."""
    g = _as_ewl(game)
    probs = np.abs(final_state(g, strategies).amplitudes) ** 2
    return g.observables() @ probs


def outcome_coefficients(t1, a1, b1, t2, a2, b2):
    """Probabilities of outcomes 00, 01, 10, 11 from the 2x2 closed form.

    Arguments broadcast, so grids of strategies are evaluated at once. The
    result has a leading axis of length 4.
    """
    c1, s1 = np.cos(np.divide(t1, 2)), np.sin(np.divide(t1, 2))
    c2, s2 = np.cos(np.divide(t2, 2)), np.sin(np.divide(t2, 2))
    return np.stack(np.broadcast_arrays(
        (np.cos(np.add(a1, a2)) * c1 * c2 + np.sin(np.add(b1, b2)) * s1 * s2) ** 2,
        (np.sin(np.subtract(a2, b1)) * s1 * c2 + np.cos(np.subtract(a1, b2)) * c1 * s2) ** 2,
        (np.cos(np.subtract(a2, b1)) * s1 * c2 + np.sin(np.subtract(a1, b2)) * c1 * s2) ** 2,
        (np.cos(np.add(b1, b2)) * s1 * s2 - np.sin(np.add(a1, a2)) * c1 * c2) ** 2,
    ))


def ewl_payoff_closed_form(game, s1, s2):
    """Two-player EWL payoff vector from the closed-form outcome weights."""
    if not isinstance(game, BimatrixGame) or game.shape != (2, 2):
        raise ValueError("closed form applies to 2x2 bimatrix games only")
    w = outcome_coefficients(s1.theta, s1.alpha, s1.beta, s2.theta, s2.alpha, s2.beta)
    return np.array([game.a.ravel() @ w, game.b.ravel() @ w])


def mixed_unitary_payoff(game, strategies):
    """Expected EWL payoff when each player mixes finitely many unitaries."""
    g = _as_ewl(game)
    mixtures = [as_mixture(s) for s in strategies]
    if len(mixtures) != g.players:
        raise ValueError(f"expected {g.players} strategies, got {len(mixtures)}")
    total = np.zeros(g.players)
    for combo in product(*mixtures):
        weight = math.prod(p for p, _ in combo)
        if weight:
            total += weight * ewl_payoff(g, [s for _, s in combo])
    return total
