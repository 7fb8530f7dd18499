"""Classical two-player strategic-form games.

A :class:`BimatrixGame` holds the payoff pair ``(a_ij, b_ij)`` for every
row ``i`` of player 1 and column ``j`` of player 2. Payoffs are returned
as numpy arrays of length 2 (player 1, player 2).
"""

from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .hull import convex_hull, distance_to_polygon

PROB_TOL = 1e-12
NASH_TOL = 1e-9


class BimatrixGame:
    """An m x n game with payoff matrices ``a`` (player 1) and ``b`` (player 2)."""

    def __init__(self, a, b, row_labels=None, col_labels=None):
        a = np.array(a, dtype=float)
        b = np.array(b, dtype=float)
        if a.ndim != 2 or a.shape != b.shape:
            raise ValueError(f"payoff tables must be equal-shape 2D arrays, got {a.shape} and {b.shape}")
        m, n = a.shape
        if m < 2 or n < 2:
            raise ValueError(f"each player needs at least 2 strategies, got {m}x{n}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("payoffs must be finite")
        row_labels = tuple(row_labels) if row_labels is not None else tuple(str(i) for i in range(m))
        col_labels = tuple(col_labels) if col_labels is not None else tuple(str(j) for j in range(n))
        if len(row_labels) != m or len(col_labels) != n:
            raise ValueError("label count does not match the table shape")
        if len(set(row_labels)) != m or len(set(col_labels)) != n:
            raise ValueError("labels must be unique per axis")
        a.setflags(write=False)
        b.setflags(write=False)
        self._a, self._b = a, b
        self.row_labels, self.col_labels = row_labels, col_labels

    @classmethod
    def from_pairs(cls, pairs, row_labels=None, col_labels=None):
        """Build from a nested list of ``(a_ij, b_ij)`` pairs."""
        arr = np.array(pairs, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 2:
            raise ValueError("expected an m x n table of payoff pairs")
        return cls(arr[..., 0], arr[..., 1], row_labels, col_labels)

    @property
    def a(self):
        return self._a

    @property
    def b(self):
        return self._b

    @property
    def shape(self):
        return self._a.shape

    @property
    def rows(self):
        return self._a.shape[0]

    @property
    def cols(self):
        return self._a.shape[1]

    def payoff(self, i, j):
        return np.array([self._a[i, j], self._b[i, j]])

    def corner_points(self):
        """All pure payoff points, row-major: (0,0), (0,1), ..."""
        return np.stack([self._a.ravel(), self._b.ravel()], axis=1)

    def __eq__(self, other):
        if not isinstance(other, BimatrixGame):
            return NotImplemented
        return (np.array_equal(self._a, other._a) and np.array_equal(self._b, other._b)
                and self.row_labels == other.row_labels and self.col_labels == other.col_labels)

    def __repr__(self):
        return f"BimatrixGame({self.rows}x{self.cols}, rows={self.row_labels}, cols={self.col_labels})"


PRISONERS_DILEMMA = BimatrixGame([[3, 0], [5, 1]], [[3, 5], [0, 1]])
MATCHING_PENNIES = BimatrixGame([[1, -1], [-1, 1]], [[-1, 1], [1, -1]])
BATTLE_OF_SEXES = BimatrixGame([[4, 0], [0, 2]], [[2, 0], [0, 4]])
BUILTIN_GAMES = {"pd": PRISONERS_DILEMMA, "mp": MATCHING_PENNIES, "bos": BATTLE_OF_SEXES}


@dataclass(frozen=True)
class MixedStrategy:
    """Probability weights over one player's pure strategies."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).ravel()
        if w.size == 0 or np.any(w < 0) or abs(w.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"not a probability vector: {w}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def pure(cls, k, size):
        w = np.zeros(size)
        w[k] = 1.0
        return cls(w)

    @property
    def support(self):
        return tuple(int(k) for k in np.flatnonzero(self.weights > 0))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.weights, dtype=dtype)

    def __len__(self):
        return self.weights.size


@dataclass(frozen=True)
class CorrelatedStrategy:
    """A joint distribution over pure strategy profiles."""

    joint: np.ndarray

    def __post_init__(self):
        p = np.array(self.joint, dtype=float)
        if p.ndim != 2 or np.any(p < 0) or abs(p.sum() - 1.0) > PROB_TOL:
            raise ValueError("joint distribution must be a nonnegative table summing to 1")
        p.setflags(write=False)
        object.__setattr__(self, "joint", p)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.joint, dtype=dtype)


def _as_mixed(weights, size, who):
    w = MixedStrategy(weights).weights
    if w.size != size:
        raise ValueError(f"{who} strategy has {w.size} weights, game expects {size}")
    return w


def expected_payoff(game, profile):
    """Expected payoff vector of a pair of mixed strategies."""
    x = _as_mixed(profile[0], game.rows, "player 1")
    y = _as_mixed(profile[1], game.cols, "player 2")
    return np.array([x @ game.a @ y, x @ game.b @ y])


def correlated_payoff(game, joint):
    """Expected payoff vector under a correlated strategy."""
    p = CorrelatedStrategy(joint).joint
    if p.shape != game.shape:
        raise ValueError(f"joint distribution shape {p.shape} does not match game {game.shape}")
    return np.array([np.sum(p * game.a), np.sum(p * game.b)])


def is_nash_pure(game, position):
    """Weak-inequality pure Nash test at ``position = (i, j)`` (0-based)."""
    i, j = position
    if not (0 <= i < game.rows and 0 <= j < game.cols):
        raise IndexError(f"position {position} outside a {game.rows}x{game.cols} game")
    return bool(np.all(game.a[i, j] >= game.a[:, j]) and np.all(game.b[i, j] >= game.b[i, :]))


def deviation_gains(game, profile):
    """Largest gain available to each player from a unilateral pure deviation."""
    x = _as_mixed(profile[0], game.rows, "player 1")
    y = _as_mixed(profile[1], game.cols, "player 2")
    rows, cols = game.a @ y, x @ game.b
    return np.array([rows.max() - x @ rows, cols.max() - cols @ y])


def is_nash_mixed(game, profile, tol=NASH_TOL):
    if tol <= 0:
        raise ValueError("tol must be positive")
    return bool(np.all(deviation_gains(game, profile) <= tol))


# --- equilibrium enumeration ------------------------------------------------

def gauss_solve(matrix, rhs, tol=1e-12):
    """Row-reduce ``matrix @ x = rhs`` with partial pivoting.

    Returns ``(x, status)`` where status is ``"unique"``, ``"singular"``
    (rank below the unknown count) or ``"inconsistent"``. ``x`` is None
    unless the solution is unique. Overdetermined consistent systems are
    accepted.
    """
    aug = np.hstack([np.array(matrix, dtype=float), np.array(rhs, dtype=float).reshape(-1, 1)])
    n_rows, n_unknowns = aug.shape[0], aug.shape[1] - 1
    scale = max(1.0, float(np.abs(aug).max()))
    pivots, r = [], 0
    for c in range(n_unknowns):
        if r == n_rows:
            break
        p = r + int(np.argmax(np.abs(aug[r:, c])))
        if abs(aug[p, c]) <= tol * scale:
            continue
        aug[[r, p]] = aug[[p, r]]
        aug[r] /= aug[r, c]
        others = np.arange(n_rows) != r
        aug[others] -= np.outer(aug[others, c], aug[r])
        pivots.append(c)
        r += 1
    if np.any(np.abs(aug[r:, -1]) > 1e-9 * scale):
        return None, "inconsistent"
    if r < n_unknowns:
        return None, "singular"
    x = np.zeros(n_unknowns)
    for row, c in enumerate(pivots):
        x[c] = aug[row, -1]
    return x, "unique"


def _subsets(n):
    for size in range(1, n + 1):
        yield from combinations(range(n), size)


def _vertices(opp_payoff, tol, diagnostics, who):
    """Extreme mixed strategies of one player with their opponent best-reply sets.

    ``opp_payoff`` is the opponent's payoff with this player on axis 0.
    A candidate is fixed by a support ``I`` and a set ``K`` of opponent
    replies forced to tie; it is kept when the tie system has a unique
    solution, the weights are nonnegative and every reply in ``K`` is best.
    """
    m, n = opp_payoff.shape
    found = []
    for I in _subsets(m):
        for K in _subsets(n):
            if len(K) < len(I):
                continue  # underdetermined by construction
            sub = opp_payoff[np.ix_(I, K)].T
            mat = np.vstack([np.hstack([sub, -np.ones((len(K), 1))]),
                             np.append(np.ones(len(I)), 0.0)])
            rhs = np.append(np.zeros(len(K)), 1.0)
            sol, status = gauss_solve(mat, rhs)
            if status == "singular":
                diagnostics.append(f"{who}: degenerate tie system for support {I}, replies {K}")
                continue
            if sol is None or np.any(sol[:-1] < -tol):
                continue
            x = np.zeros(m)
            x[list(I)] = np.clip(sol[:-1], 0.0, None)
            x /= x.sum()
            values = x @ opp_payoff
            if np.any(values[list(K)] < values.max() - tol):
                continue
            if not any(np.allclose(x, y, atol=tol, rtol=0) for y, _ in found):
                found.append((x, tuple(int(k) for k in np.flatnonzero(values >= values.max() - tol))))
    return found


@dataclass
class Equilibrium:
    row: np.ndarray
    col: np.ndarray
    payoff: np.ndarray

    @property
    def supports(self):
        return (tuple(int(k) for k in np.flatnonzero(self.row > 0)),
                tuple(int(k) for k in np.flatnonzero(self.col > 0)))

    @property
    def profile(self):
        return self.row, self.col

    def is_pure(self):
        s1, s2 = self.supports
        return len(s1) == 1 and len(s2) == 1


@dataclass
class EquilibriumSet:
    equilibria: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.equilibria)

    def __len__(self):
        return len(self.equilibria)

    def contains(self, row, col, atol=1e-9):
        return any(np.allclose(e.row, row, atol=atol) and np.allclose(e.col, col, atol=atol)
                   for e in self.equilibria)


def enumerate_equilibria(game, tol=NASH_TOL):
    """Enumerate Nash equilibria of a small bimatrix game.

    Works for degenerate games: each player's candidate strategies are the
    extreme points of their best-response regions, obtained by solving the
    indifference system of every (support, tied-reply set) pair. A pair of
    candidates is an equilibrium when each support lies inside the other
    player's best-reply set. One profile is kept per support pair, in
    lexicographic support order. Rank-deficient systems are listed in
    ``diagnostics``.
    """
    m, n = game.shape
    if m > 6 or n > 6:
        raise ValueError("enumeration is limited to games with at most 6 strategies per player")
    diagnostics = []
    xs = _vertices(game.b, tol, diagnostics, "player 1")
    ys = _vertices(game.a.T, tol, diagnostics, "player 2")
    by_support = {}
    for x, br2 in xs:
        sx = tuple(int(k) for k in np.flatnonzero(x > tol))
        for y, br1 in ys:
            sy = tuple(int(k) for k in np.flatnonzero(y > tol))
            if set(sx) <= set(br1) and set(sy) <= set(br2):
                by_support.setdefault((sx, sy), (x, y))
    keys = sorted(by_support, key=lambda s: (len(s[0]), s[0], len(s[1]), s[1]))
    result = EquilibriumSet(diagnostics=diagnostics)
    for key in keys:
        x, y = by_support[key]
        x = np.where(x > tol, x, 0.0)
        y = np.where(y > tol, y, 0.0)
        x, y = x / x.sum(), y / y.sum()
        result.equilibria.append(Equilibrium(x, y, expected_payoff(game, (x, y))))
    return result


# --- payoff regions -----------------------------------------------------------

REGION_TAGS = ("pure", "noncooperative", "cooperative", "ewl_pure")


@dataclass
class RegionSample:
    """A tagged cloud of 2D payoff points together with its convex hull."""

    tag: str
    points: np.ndarray
    hull: list = None

    def __post_init__(self):
        if self.tag not in REGION_TAGS:
            raise ValueError(f"unknown region tag {self.tag!r}")
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if len(self.points) == 0:
            raise ValueError("region sample must contain at least one point")
        if self.hull is None:
            self.hull = convex_hull(self.points)

    def max_hull_violation(self):
        return float(np.max(distance_to_polygon(self.points, self.hull)))

    def __len__(self):
        return len(self.points)


def classical_region_samples(game, mode, resolution=101):
    """Sample the pure, noncooperative or cooperative payoff region.

    ``noncooperative`` evaluates expected payoffs on a ``resolution x
    resolution`` grid of ``(p, q)`` for 2x2 games; ``cooperative`` returns
    the corner points and their exact hull.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if mode == "pure":
        return RegionSample("pure", game.corner_points())
    if mode == "cooperative":
        corners = game.corner_points()
        return RegionSample("cooperative", corners, convex_hull(corners))
    if mode == "noncooperative":
        if game.shape != (2, 2):
            raise ValueError("noncooperative grid sampling is defined for 2x2 games")
        p = np.arange(resolution) / (resolution - 1)
        P, Q = np.meshgrid(p, p, indexing="ij")
        w = np.stack([P * Q, P * (1 - Q), (1 - P) * Q, (1 - P) * (1 - Q)], axis=-1)
        pts = np.stack([w @ game.a.ravel(), w @ game.b.ravel()], axis=-1)
        return RegionSample("noncooperative", pts.reshape(-1, 2))
    raise ValueError(f"unknown region mode {mode!r}")


# --- game files ---------------------------------------------------------------

def parse_game(text):
    """Parse the plain-text game format.

    Line 1 holds ``m n``; the next m lines hold n entries ``a:b``. Lines
    starting with ``#rows:`` / ``#cols:`` carry whitespace-separated labels;
    other ``#`` lines and blank lines are ignored.
    """
    rows_lbl = cols_lbl = None
    body = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#rows:"):
            rows_lbl = line[len("#rows:"):].split()
        elif line.startswith("#cols:"):
            cols_lbl = line[len("#cols:"):].split()
        elif line and not line.startswith("#"):
            body.append((lineno, line))
    if not body:
        raise ValueError("empty game file")
    lineno, head = body[0]
    try:
        m, n = (int(t) for t in head.split())
    except ValueError as exc:
        raise ValueError(f"line {lineno}: expected 'm n', got {head!r}") from exc
    if len(body) - 1 != m:
        raise ValueError(f"expected {m} payoff rows, found {len(body) - 1}")
    a, b = np.zeros((m, n)), np.zeros((m, n))
    for i, (lineno, line) in enumerate(body[1:]):
        cells = line.split()
        if len(cells) != n:
            raise ValueError(f"line {lineno}: expected {n} entries, found {len(cells)}")
        for j, cell in enumerate(cells):
            try:
                left, right = cell.split(":")
                a[i, j], b[i, j] = float(left), float(right)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: bad entry {cell!r}, expected a:b") from exc
    return BimatrixGame(a, b, rows_lbl, cols_lbl)


def format_game(game):
    lines = [f"{game.rows} {game.cols}",
             "#rows: " + " ".join(game.row_labels),
             "#cols: " + " ".join(game.col_labels)]
    for i in range(game.rows):
        lines.append(" ".join(f"{float(game.a[i, j])!r}:{float(game.b[i, j])!r}" for j in range(game.cols)))
    return "\n".join(lines) + "\n"


def load_game(path):
    return parse_game(Path(path).read_text(encoding="utf-8"))


def save_game(game, path):
    Path(path).write_text(format_game(game), encoding="utf-8")
