"""Executable property suite: normalization, inversion, frame consistency,
classical identities, marginals, the minimum principle and scalar anchors.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in order.
Sizes default to the acceptance levels and can be shrunk for smoke runs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import entropy as ent
from . import tomography as tomo
from .minimizer import analytic_minimum, entropy_landscape_scan, minimize
from .state import (BipartiteShape, bell_state, maximally_mixed, partial_trace, random_density,
                    random_unitary)
from .su2 import EulerAngles, HalfInteger, quadrature_grid, wigner_D

SPINS = [HalfInteger(t) for t in (1, 2, 3, 4)]
BIPARTITE = [BipartiteShape(HalfInteger(a), HalfInteger(b)) for a, b in ((1, 1), (1, 2), (2, 2), (3, 3))]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def random_angles(rng):
    return EulerAngles(rng.uniform(0, 2 * math.pi), math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi))


def random_joint(rng, rows, cols):
    p = rng.exponential(size=(rows, cols))
    # zero out some cells so the 0 ln 0 branch is exercised
    p[rng.random((rows, cols)) < 0.15] = 0.0
    if p.sum() == 0.0:
        p[0, 0] = 1.0
    return p / p.sum()


def _timed(name, fn):
    start = time.perf_counter()
    passed, detail = fn()
    return CheckResult(name, bool(passed), detail, time.perf_counter() - start)


def check_normalization(n_states=50, seed=1):
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for j in SPINS:
            for s in range(n_states):
                rho = random_density(j.dim, seed=int(rng.integers(2**32)))
                raw = _raw_diag(wigner_D(j, random_angles(rng)), rho)
                worst = max(worst, abs(raw.sum() - 1.0))
                u = random_unitary(j.dim, rng)
                worst = max(worst, abs(_raw_diag(u, rho).sum() - 1.0))
        for shape in BIPARTITE:
            for s in range(n_states):
                rho = random_density(shape.n, seed=int(rng.integers(2**32)))
                d = np.kron(wigner_D(shape.j1, random_angles(rng)), wigner_D(shape.j2, random_angles(rng)))
                worst = max(worst, abs(_raw_diag(d, rho).sum() - 1.0))
                worst = max(worst, abs(_raw_diag(random_unitary(shape.n, rng), rho).sum() - 1.0))
        return worst <= 1e-10, f"max |sum - 1| = {worst:.2e} (tol 1e-10)"
    return _timed("1 normalization", run)


def _raw_diag(u, rho):
    # before clamping/renormalization, so the check is not vacuous
    m = np.asarray(rho)
    return np.einsum("ai,ab,bi->i", u.conj(), m, u).real


def check_psi_independence(n_states=20, seed=2):
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for j in SPINS + [HalfInteger(5), HalfInteger(6)]:
            for _ in range(n_states):
                rho = random_density(j.dim, seed=int(rng.integers(2**32)))
                base = random_angles(rng)
                ref = _raw_diag(wigner_D(j, base.with_psi(0.0)), rho)
                for psi in (1.0, 2.0, math.pi):
                    worst = max(worst, np.abs(_raw_diag(wigner_D(j, base.with_psi(psi)), rho) - ref).max())
        return worst <= 1e-12, f"max deviation = {worst:.2e} (tol 1e-12)"
    return _timed("2 psi-independence", run)


def check_round_trip(n_states=20, seed=3):
    def run():
        worst = 0.0
        start = time.perf_counter()
        rng = np.random.default_rng(seed)
        for j in SPINS:
            quad = quadrature_grid(2 * j.twice)
            for _ in range(n_states):
                rho = random_density(j.dim, seed=int(rng.integers(2**32)))
                rec = tomo.round_trip(rho, j, quad)
                worst = max(worst, float(np.abs(rec.entries - rho.entries).max()))
        elapsed = time.perf_counter() - start
        ok = worst <= 1e-8 and elapsed <= 30.0
        return ok, f"max |rho - rho_hat| = {worst:.2e} (tol 1e-8), {elapsed:.1f}s (limit 30s)"
    return _timed("3 reconstruction round-trip", run)


def check_frame_consistency(n_states=20, seed=4):
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for j in SPINS:
            for _ in range(n_states):
                rho = random_density(j.dim, seed=int(rng.integers(2**32)))
                a = random_angles(rng)
                t1 = tomo.spin_tomogram(rho, j, a)
                t2 = tomo.unitary_tomogram(rho, tomo.UnitaryFrame.from_angles(j, a))
                worst = max(worst, np.abs(t1.probabilities - t2.probabilities).max())
        for shape in BIPARTITE:
            for _ in range(n_states):
                rho = random_density(shape.n, seed=int(rng.integers(2**32)))
                a1, a2 = random_angles(rng), random_angles(rng)
                t1 = tomo.two_spin_tomogram(rho, shape, a1, a2)
                t2 = tomo.two_spin_unitary_tomogram(rho, shape, tomo.UnitaryFrame.product(shape.j1, a1, shape.j2, a2))
                worst = max(worst, np.abs(t1.probabilities - t2.probabilities).max())
        return worst <= 1e-12, f"max deviation = {worst:.2e} (tol 1e-12)"
    return _timed("4 frame consistency", run)


def check_classical_identities(n_joints=100, seed=5):
    def run():
        rng = np.random.default_rng(seed)
        chain = sub = sym = neg = 0.0
        for _ in range(n_joints):
            P = random_joint(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)))
            h_xy = ent.joint_entropy(P)
            h_x = ent.shannon_entropy(P.sum(axis=1))
            h_y = ent.shannon_entropy(P.sum(axis=0))
            chain = max(chain, abs(h_xy - (h_x + ent.complete_conditional_entropy(P, "row"))),
                        abs(h_xy - (h_y + ent.complete_conditional_entropy(P, "column"))))
            sub = max(sub, h_xy - (h_x + h_y))
            i_xy = ent.information_gain(P, observed="column")
            i_yx = ent.information_gain(P, observed="row")
            i = ent.mutual_information(P)
            sym = max(sym, abs(i_xy - i_yx), abs(i - i_xy))
            neg = max(neg, -i_xy, -i_yx)
        indep = 0.0
        for _ in range(20):
            p = random_joint(rng, 1, int(rng.integers(1, 6)))[0]
            q = random_joint(rng, 1, int(rng.integers(1, 6)))[0]
            indep = max(indep, abs(ent.mutual_information(np.outer(p, q))))
        ok = chain <= 1e-10 and sub <= 1e-10 and sym <= 1e-10 and neg <= 1e-10 and indep <= 1e-12
        return ok, (f"chain {chain:.1e}, subadditivity excess {max(sub, 0):.1e}, symmetry {sym:.1e}, "
                    f"negativity {max(neg, 0):.1e}, independent I {indep:.1e}")
    return _timed("5 classical identities", run)


def check_marginals(n_states=20, seed=6):
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for shape in BIPARTITE:
            for _ in range(n_states):
                rho = random_density(shape.n, seed=int(rng.integers(2**32)))
                a1, a2 = random_angles(rng), random_angles(rng)
                joint = tomo.two_spin_tomogram(rho, shape, a1, a2)
                other = tomo.two_spin_tomogram(rho, shape, a1, random_angles(rng))
                ref1 = tomo.spin_tomogram(partial_trace(rho, shape, "first"), shape.j1, a1).probabilities
                ref2 = tomo.spin_tomogram(partial_trace(rho, shape, "second"), shape.j2, a2).probabilities
                worst = max(worst,
                            np.abs(tomo.marginal(joint, "first").probabilities - ref1).max(),
                            np.abs(tomo.marginal(other, "first").probabilities - ref1).max(),
                            np.abs(tomo.marginal(joint, "second").probabilities - ref2).max())
        return worst <= 1e-10, f"max deviation = {worst:.2e} (tol 1e-10)"
    return _timed("6 marginal consistency", run)


def check_minimum_principle(n_states=20, n_frames=1000, seed=7, restarts=8):
    def run():
        rng = np.random.default_rng(seed)
        bound = gap_min = eig = 0.0
        most_restarts = 0
        failures = 0
        for n in (2, 3, 4):
            for _ in range(n_states):
                rho = random_density(n, seed=int(rng.integers(2**32)))
                scan = entropy_landscape_scan(rho, n_frames, seed=int(rng.integers(2**32)))
                bound = max(bound, scan.von_neumann - scan.minimum)
                res = minimize(rho, restarts=restarts, tol=1e-6, seed=int(rng.integers(2**32)))
                gap_min = max(gap_min, abs(res.entropy_gap))
                most_restarts = max(most_restarts, res.restarts_used)
                failures += not res.converged
                eig = max(eig, abs(analytic_minimum(rho).entropy_gap))
        ok = bound <= 1e-10 and gap_min <= 1e-6 and failures == 0 and eig <= 1e-12
        return ok, (f"(a) max S_N - min S(U) = {bound:.1e} (tol 1e-10); "
                    f"(b) max gap {gap_min:.1e} (tol 1e-6), restarts <= {most_restarts}, failures {failures}; "
                    f"(c) eigenframe gap {eig:.1e} (tol 1e-12)")
    return _timed("7 minimum principle", run)


def check_scalar_anchors():
    def run():
        ln2 = math.log(2.0)
        bell = bell_state()
        shape = bell.shape
        joint = tomo.two_spin_unitary_tomogram(bell, shape, tomo.UnitaryFrame.identity(4))
        errs = [
            abs(ent.joint_tomographic_entropy(joint) - ln2),
            abs(ent.subsystem_tomographic_entropy(joint, "first") - ln2),
            abs(ent.subsystem_tomographic_entropy(joint, "second") - ln2),
            abs(ent.tomographic_mutual_information(joint) - ln2),
        ]
        pure_err = 0.0
        mixed_err = 0.0
        for n in range(1, 7):
            pure_err = max(pure_err, abs(ent.von_neumann_entropy(random_density(n, 1, seed=n))))
            mm = maximally_mixed(n)
            mixed_err = max(mixed_err, abs(ent.von_neumann_entropy(mm) - math.log(n)))
            j = HalfInteger(n - 1)
            t = tomo.spin_tomogram(mm, j, EulerAngles(0.3, 1.1, 0.0))
            mixed_err = max(mixed_err, abs(ent.tomographic_entropy(t) - math.log(n)))
        ok = max(errs) <= 1e-10 and pure_err <= 1e-12 and mixed_err <= 1e-12
        return ok, f"Bell max err {max(errs):.1e} (tol 1e-10), pure S_N {pure_err:.1e}, mixed {mixed_err:.1e} (tol 1e-12)"
    return _timed("8 scalar anchors", run)


def check_dual_form(n_states=100, seed=9):
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for s in range(n_states):
            shape = BIPARTITE[s % len(BIPARTITE)]
            rho = random_density(shape.n, rank=int(rng.integers(1, shape.n + 1)), seed=int(rng.integers(2**32)))
            if s % 2:
                frame = tomo.UnitaryFrame(random_unitary(shape.n, rng))
                joint = tomo.two_spin_unitary_tomogram(rho, shape, frame)
            else:
                joint = tomo.two_spin_tomogram(rho, shape, random_angles(rng), random_angles(rng))
            a = ent.mutual_information(joint.probabilities)
            b = ent.kullback_mutual_information(joint.probabilities)
            worst = max(worst, abs(a - b))
        return worst <= 1e-10, f"max |I - I_kullback| = {worst:.2e} (tol 1e-10)"
    return _timed("9 dual-form identity", run)


CHECKS = [
    check_normalization,
    check_psi_independence,
    check_round_trip,
    check_frame_consistency,
    check_classical_identities,
    check_marginals,
    check_minimum_principle,
    check_scalar_anchors,
    check_dual_form,
]


def run_all(report=None):
    """Run every check; ``report`` is called with each result as it finishes."""
    results = []
    for check in CHECKS:
        res = check()
        results.append(res)
        if report is not None:
            report(res)
    return results

