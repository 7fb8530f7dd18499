"""End-to-end checks of the reference EWL tables, equilibria, regions and circuits.

:func:`run_checks` evaluates every claim and returns a list of
:class:`Check` records; :func:`reproduce` also writes the supporting data
files into an output directory.
"""

from dataclasses import dataclass
from fractions import Fraction
import math
from pathlib import Path

import numpy as np

from .analysis import (build_extended_bimatrix, no_pure_equilibrium_scan, shift_restricted_set,
                       verify_nash_restricted, HALF_PI_SHIFT)
from .games import (BATTLE_OF_SEXES, MATCHING_PENNIES, PRISONERS_DILEMMA, classical_region_samples,
                    enumerate_equilibria, expected_payoff, format_game, is_nash_mixed)
from .hull import convex_hull, hausdorff_distance
from .qasm import (emit_ewl_qasm, entangler_decomposition, matches_su2, parse_qasm,
                   circuit_distribution, simulate_shots, to_ibm_params, unitary_of)
from .quantum import (IDENTITY, IX, MixedUnitaryStrategy, UnitaryStrategy, entangler,
                      ewl_payoff, ewl_payoff_closed_form, mixed_unitary_payoff, one_parameter)
from .regions import (CORNERS, achieve_target, caratheodory_profile, ewl_region_samples,
                      export_region)

PI = math.pi
REFERENCE_LISTING = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[15];
creg c[5];
cx q[0], q[1];
u2(1.5707963267948966, -1.5707963267948966) q[0];
cx q[0], q[1];
u2(1.5707963267948966, -1.5707963267948966) q[0];
u2(3.141592653589793, 3.141592653589793) q[1];
cx q[0], q[1];
u2(-1.5707963267948966, 1.5707963267948966) q[0];
cx q[0], q[1];
measure q[0] -> c[0];
measure q[1] -> c[1];
"""
TABLE_MP = [[(1, -1), (-1, 1), (0, 0)], [(-1, 1), (1, -1), (0, 0)], [(0, 0), (0, 0), (0, 0)]]
TABLE_PD = [[(3, 3), (0, 5), (4, 1.5)], [(5, 0), (1, 1), (4, 1.5)],
            [(1.5, 4), (1.5, 4), (2.25, 2.25)]]


@dataclass
class Check:
    name: str
    passed: bool
    measured: str


def fmt(x):
    """12 significant digits, with rounding noise and negative zero removed."""
    x = float(x)
    if abs(x) < 1e-12:
        x = 0.0
    return f"{x:.12g}"


def rational_hint(x, tol=1e-9):
    frac = Fraction(float(x)).limit_denominator(64)
    if frac.denominator > 1 and abs(float(frac) - x) <= tol:
        return f"{frac.numerator}/{frac.denominator}"
    return None


def _table_error(game, expected):
    exp = np.array(expected, dtype=float)
    return float(max(np.abs(game.a - exp[..., 0]).max(), np.abs(game.b - exp[..., 1]).max()))


def run_checks(seed=42, tol=1e-9):
    checks = []

    def add(name, passed, measured):
        checks.append(Check(name, bool(passed), measured))

    f = MixedUnitaryStrategy.classical(0.5)
    mp17 = build_extended_bimatrix(MATCHING_PENNIES, [HALF_PI_SHIFT])
    pd23 = build_extended_bimatrix(PRISONERS_DILEMMA, [HALF_PI_SHIFT])
    err = _table_error(mp17, TABLE_MP)
    add("extended matching pennies table", err <= tol, f"max cell error {err:.2e}")
    err = _table_error(pd23, TABLE_PD)
    add("extended prisoner's dilemma table", err <= tol, f"max cell error {err:.2e}")

    half = [0.5, 0.5, 0.0]
    shift = [0.0, 0.0, 1.0]
    eqs = enumerate_equilibria(mp17)
    wanted = [(half, half), (shift, shift), (half, shift), (shift, half)]
    found = [eqs.contains(r, c) and is_nash_mixed(mp17, (r, c), tol) for r, c in wanted]
    add("matching pennies 3x3 equilibria (classical + three nonclassical)", all(found),
        f"{sum(found)}/4 found among {len(eqs)} equilibria")
    eqs = enumerate_equilibria(pd23)
    wanted = [(shift, [0, 1, 0]), ([0, 1, 0], shift)]
    found = [eqs.contains(r, c) and is_nash_mixed(pd23, (r, c), tol) for r, c in wanted]
    add("prisoner's dilemma 3x3 equilibria", all(found), f"{sum(found)}/2 found among {len(eqs)}")

    sets = (shift_restricted_set(), shift_restricted_set())
    v18 = verify_nash_restricted(MATCHING_PENNIES, (HALF_PI_SHIFT, HALF_PI_SHIFT), sets, tol)
    v19 = verify_nash_restricted(MATCHING_PENNIES, (f, HALF_PI_SHIFT), sets, tol)
    v20 = verify_nash_restricted(MATCHING_PENNIES, (HALF_PI_SHIFT, f), sets, tol)
    u_half = UnitaryStrategy(PI / 2, 0, 0)
    ok = (not v18.is_equilibrium and not v20.is_equilibrium and v19.is_equilibrium
          and all(v.deviation[0] == 2 and v.deviation[1].same_operator(u_half)
                  and abs(v.gain - 1) <= tol for v in (v18, v20)))
    add("restricted set keeps only the mixed/shift profile", ok,
        f"gains {fmt(v18.gain)}, {fmt(v19.gain)}, {fmt(v20.gain)}")
    pd_ok = []
    for prof in ((HALF_PI_SHIFT, IX), (IX, HALF_PI_SHIFT)):
        v = verify_nash_restricted(PRISONERS_DILEMMA, prof, sets, tol)
        k = v.deviation[0] - 1
        pd_ok.append(not v.is_equilibrium and v.deviation[1].same_operator(u_half)
                     and abs(v.best_values[k] - 5) <= tol and abs(v.payoffs[k] - 4) <= tol)
    add("prisoner's dilemma fake equilibria broken (5 > 4)", all(pd_ok), f"{sum(pd_ok)}/2 rejected")
    scan = no_pure_equilibrium_scan(MATCHING_PENNIES, sets, tol)
    add("no pure equilibrium under the restricted set", not scan.survivors,
        f"{scan.profiles_scanned} profiles, {len(scan.survivors)} survivors")

    grid = np.arange(101) / 100
    worst = 0.0
    for p in grid:
        for q in grid:
            classical = expected_payoff(PRISONERS_DILEMMA, ([p, 1 - p], [q, 1 - q]))
            quantum = ewl_payoff_closed_form(PRISONERS_DILEMMA, one_parameter(p), one_parameter(q))
            worst = max(worst, float(np.abs(quantum - classical).max()))
    add("one-parameter strategies reproduce mixed payoffs", worst <= 1e-12, f"max error {worst:.2e}")

    rng = np.random.default_rng(seed)
    game = PRISONERS_DILEMMA
    a = game.a
    probe = UnitaryStrategy(PI / 2, 0, PI / 2)
    flat = [mixed_unitary_payoff(game, [MixedUnitaryStrategy.classical(p), probe])[0] for p in grid]
    interf = max(abs(ewl_payoff_closed_form(game, one_parameter(p), probe)[0]
                     - ((0.5 + math.sqrt(p * (1 - p))) * a[0, 0] + (0.5 - math.sqrt(p * (1 - p))) * a[1, 0]))
                 for p in grid)
    add("classical mixtures are blind to U(pi/2,0,pi/2); one-parameter shows interference",
        np.var(flat) < 1e-24 and abs(flat[0] - (a[0, 0] + a[1, 0]) / 2) <= 1e-12 and interf <= 1e-12,
        f"variance {np.var(flat):.1e}, interference error {interf:.1e}")

    v = ewl_payoff_closed_form(BATTLE_OF_SEXES, UnitaryStrategy(0, PI / 8, 0), UnitaryStrategy(0, PI / 8, 0))
    add("battle of the sexes (3,3) from U(0,pi/8,0) pair", np.allclose(v, 3, atol=tol, rtol=0),
        f"({fmt(v[0])}, {fmt(v[1])})")
    _, residual = achieve_target(BATTLE_OF_SEXES, (3, 3))
    nc = classical_region_samples(BATTLE_OF_SEXES, "noncooperative", 501)
    gap = float(np.hypot(*(nc.points - 3).T).min())
    add("(3,3) reachable by EWL but not by mixed strategies", residual <= tol and gap > 0.4,
        f"residual {residual:.1e}, closest mixed point {gap:.4f}")

    worst = 0.0
    for omitted in CORNERS:
        k = CORNERS.index(omitted)
        for _ in range(1000):
            lam = np.insert(rng.dirichlet([1, 1, 1]), k, 0.0)
            prof = caratheodory_profile(lam, omitted)
            got = ewl_payoff_closed_form(game, *prof)
            worst = max(worst, float(np.abs(got - lam @ game.corner_points()).max()))
    add("three-corner combinations realised by pure profiles", worst <= 1e-10, f"max error {worst:.2e}")
    for name, g in (("battle of the sexes", BATTLE_OF_SEXES), ("prisoner's dilemma", PRISONERS_DILEMMA)):
        sample = ewl_region_samples(g)
        h = hausdorff_distance(sample.hull, convex_hull(g.corner_points()))
        add(f"EWL pure region equals cooperative region ({name})", h <= 0.05, f"Hausdorff {h:.2e}")

    p_half = (HALF_PI_SHIFT, UnitaryStrategy(PI / 2, 0, 0))
    text = emit_ewl_qasm(p_half)
    add("OpenQASM listing reproduced", text == REFERENCE_LISTING and parse_qasm(text).to_qasm() == text,
        f"{len(text)} bytes")
    for label, prof, expect in (("(U, U(pi/2,0,0))", p_half, {"01": 1.0}),
                                ("(U, I)", (HALF_PI_SHIFT, IDENTITY), {"00": 0.5, "01": 0.5}),
                                ("(U, iX)", (HALF_PI_SHIFT, IX), {"00": 0.5, "01": 0.5})):
        circ = parse_qasm(emit_ewl_qasm(prof))
        dist = circuit_distribution(circ)
        err = max(abs(dist.get(k, 0.0) - expect.get(k, 0.0)) for k in set(dist) | set(expect))
        hist = simulate_shots(circ, 8192, seed)
        within = all(abs(hist.counts.get(k, 0) - 8192 * p) <= 3 * math.sqrt(8192 * p * (1 - p)) + 1e-9
                     for k, p in expect.items())
        add(f"measurement distribution {label}", err <= 1e-12 and within,
            f"exact error {err:.1e}; counts {hist.counts}")

    g1, ph1 = to_ibm_params(HALF_PI_SHIFT)
    g2, ph2 = to_ibm_params(UnitaryStrategy(PI / 2, 0, 0))
    ok = (g1.name == "u2" and g1.params == (PI, PI) and g2.name == "u2" and g2.params == (PI / 2, -PI / 2)
          and matches_su2(g1, ph1, HALF_PI_SHIFT) and matches_su2(g2, ph2, UnitaryStrategy(PI / 2, 0, 0)))
    add("IBM u2 conversions", ok, f"{g1.qasm()} / {g2.qasm()}")
    j, j_dag = entangler_decomposition()
    overlap = abs(np.trace(unitary_of(j).conj().T @ entangler(2))) / 4
    overlap_dag = abs(np.trace(unitary_of(j_dag).conj().T @ entangler(2).conj().T)) / 4
    add("CNOT-u2-CNOT entangler", abs(overlap - 1) <= 1e-10 and abs(overlap_dag - 1) <= 1e-10,
        f"overlaps {overlap:.15f}, {overlap_dag:.15f}")

    worst = 0.0
    for _ in range(200):
        s1 = UnitaryStrategy(*rng.uniform(0, [PI, 2 * PI, 2 * PI]))
        s2 = UnitaryStrategy(*rng.uniform(0, [PI, 2 * PI, 2 * PI]))
        worst = max(worst, float(np.abs(ewl_payoff(game, [s1, s2]) - ewl_payoff_closed_form(game, s1, s2)).max()))
    add("closed form agrees with circuit simulation", worst <= 1e-10, f"max error {worst:.2e}")
    return checks


def format_report(checks):
    lines = ["EWL reproduction report", ""]
    for c in checks:
        lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.measured}")
    lines += ["", f"{sum(c.passed for c in checks)}/{len(checks)} checks passed"]
    return "\n".join(lines) + "\n"


def format_table(game):
    """Human-readable bimatrix with rational hints."""
    def cell(i, j):
        parts = []
        for x in (game.a[i, j], game.b[i, j]):
            hint = rational_hint(x)
            parts.append(fmt(x) + (f" [{hint}]" if hint else ""))
        return "(" + ", ".join(parts) + ")"

    width = max(len(lbl) for lbl in game.row_labels)
    cells = [[cell(i, j) for j in range(game.cols)] for i in range(game.rows)]
    colw = [max(len(game.col_labels[j]), *(len(cells[i][j]) for i in range(game.rows)))
            for j in range(game.cols)]
    head = " " * width + " | " + " | ".join(lbl.ljust(w) for lbl, w in zip(game.col_labels, colw))
    rows = [game.row_labels[i].ljust(width) + " | " + " | ".join(c.ljust(w) for c, w in zip(cells[i], colw))
            for i in range(game.rows)]
    return "\n".join([head, "-" * len(head)] + rows) + "\n"


def reproduce(out_dir, seed=42, tol=1e-9):
    """Run every check and write the report plus data files to ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    mp17 = build_extended_bimatrix(MATCHING_PENNIES, [HALF_PI_SHIFT])
    pd23 = build_extended_bimatrix(PRISONERS_DILEMMA, [HALF_PI_SHIFT])
    for name, g in (("matching_pennies_3x3", mp17), ("prisoners_dilemma_3x3", pd23)):
        (out / f"{name}.txt").write_text(format_table(g), encoding="utf-8")
        (out / f"{name}.game").write_text(format_game(g), encoding="utf-8")
    for name, g in (("bos", BATTLE_OF_SEXES), ("pd", PRISONERS_DILEMMA)):
        nc = classical_region_samples(g, "noncooperative", 101)
        export_region(nc, out / f"{name}_noncooperative.csv")
        export_region(nc, out / f"{name}_noncooperative.svg", "svg")
        ewl = ewl_region_samples(g, (13, 13, 42, 7))
        export_region(ewl, out / f"{name}_ewl_pure.csv")
        export_region(ewl, out / f"{name}_ewl_pure.svg", "svg")
    profiles = {"shift_vs_half": (HALF_PI_SHIFT, UnitaryStrategy(PI / 2, 0, 0)),
                "shift_vs_identity": (HALF_PI_SHIFT, IDENTITY), "shift_vs_ix": (HALF_PI_SHIFT, IX)}
    for name, prof in profiles.items():
        text = emit_ewl_qasm(prof)
        (out / f"{name}.qasm").write_text(text, encoding="utf-8")
        simulate_shots(parse_qasm(text), 8192, seed).write_csv(out / f"{name}_histogram.csv")
    checks = run_checks(seed, tol)
    (out / "report.txt").write_text(format_report(checks), encoding="utf-8")
    return checks
