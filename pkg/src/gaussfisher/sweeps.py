"""Parameter sweeps, method comparisons, and the validation suite.

This is the engine behind the command-line front end: it turns a sweep
specification into rows of QFI values (one per grid point and probe family),
compares the perturbative and oracle routes on an acceleration ladder, and
runs the library's invariant checks against a scenario or an imported
channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bogoliubov import BogoliubovSeries, symplectic_from_bogoliubov
from .cavity import CavityScenario, compose_one_segment, load_or_compute_overlap_series
from .fidelity import fidelity
from .qfi import (
    energy_matched_params,
    negativity_first_order,
    probe_family,
    qfi_oracle,
    qfi_perturbative,
)
from .states import random_mixed_state, random_pure_state, symplectic_eigenvalues

FAMILIES = (
    "single_squeezed_displaced",
    "two_product_squeezed_displaced",
    "two_mode_squeezed",
)


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep: a scenario, probe families, a grid, and an energy rule.

    The probe parameters come either from the energy budget ``(x, photons)``
    (squeezing fraction ``x``, mean photon number per probe mode) or directly
    from ``(r, delta)`` when ``r`` is not None. The grid holds duration
    values ``u`` for a cavity scenario, or channel-parameter values ``theta``
    when an imported series is swept.
    """

    scenario: CavityScenario = field(default_factory=CavityScenario)
    families: tuple = FAMILIES
    grid: tuple = tuple(np.round(np.arange(0.0, 1.0001, 0.01), 10))
    photons: float = 1.0
    x: float = 1.0
    r: float | None = None
    delta: float | None = None
    methods: tuple = ("perturbative",)
    channel: BogoliubovSeries | None = None
    oracle_steps: tuple | None = None

    def __post_init__(self):
        if not self.grid:
            raise ValueError("sweep grid must not be empty")
        for fam in self.families:
            if fam not in FAMILIES:
                raise ValueError(f"unknown state family {fam!r}")
        for method in self.methods:
            if method not in ("perturbative", "oracle"):
                raise ValueError(f"unknown method {method!r}")
        if not self.methods:
            raise ValueError("at least one method must be requested")
        if self.r is None and not 0.0 <= self.x <= 1.0:
            raise ValueError("x must lie in [0, 1]")

    def params_for(self, family: str) -> tuple[float, float]:
        if self.r is not None:
            delta = 0.0 if self.delta is None else self.delta
            if family == "two_mode_squeezed" and delta != 0.0:
                raise ValueError("two-mode squeezed probes carry no displacement")
            return self.r, delta
        x = 1.0 if family == "two_mode_squeezed" else self.x
        return energy_matched_params(
            family, self.photons, self.scenario.k, self.scenario.k_prime, x
        )


@dataclass(frozen=True)
class SweepRow:
    """One grid point for one probe family."""

    grid_value: float
    family: str
    r: float
    delta: float
    qfi_perturbative: float | None
    e2: float | None
    c2: float | None
    residual_perturbative: float | None
    qfi_oracle: float | None
    residual_oracle: float | None
    negativity: float
    truncation_residual: float


SWEEP_COLUMNS = (
    "u",
    "family",
    "r",
    "delta",
    "qfi_perturbative",
    "e2",
    "c2",
    "residual_perturbative",
    "qfi_oracle",
    "residual_oracle",
    "negativity",
    "truncation_residual",
)


def run_sweep(spec: SweepSpec, cache_dir: str | None = None) -> list[SweepRow]:
    """Evaluate the requested methods on every grid point and family.

    Rows are ordered by grid index, then family order, regardless of how the
    work is executed; identical specs (and cache content) give identical
    output.
    """
    sc = spec.scenario
    modes_two = (sc.k, sc.k_prime)
    if spec.channel is None:
        overlaps = load_or_compute_overlap_series(sc.length, sc.n_max, cache_dir)
    rows = []
    for g in spec.grid:
        if spec.channel is not None:
            series, theta = spec.channel, float(g)
        else:
            series, theta = compose_one_segment(overlaps, float(g)), sc.h
        neg = negativity_first_order(series, sc.k, sc.k_prime)
        for family in spec.families:
            modes = (sc.k,) if family == "single_squeezed_displaced" else modes_two
            r, delta = spec.params_for(family)
            pert = e2 = c2 = res_p = None
            orc = res_o = None
            trunc = np.nan
            if "perturbative" in spec.methods:
                result = qfi_perturbative(series, family, modes, r, delta)
                pert, e2, c2, res_p = result.value, result.e2, result.c2, result.residual
                trunc = result.residual
            if "oracle" in spec.methods:
                fam = probe_family(series, family, modes, r, delta)
                steps = spec.oracle_steps or (theta / 10.0, theta / 30.0, theta / 100.0)
                result = qfi_oracle(fam, theta, steps=steps)
                orc, res_o = result.value, result.residual
                if np.isnan(trunc):
                    trunc = result.residual
            rows.append(
                SweepRow(float(g), family, r, delta, pert, e2, c2, res_p, orc, res_o, neg, trunc)
            )
    return rows


def rows_to_csv(rows) -> str:
    """Render sweep rows as CSV: full-precision floats, LF endings."""
    def fmt(v) -> str:
        if v is None:
            return ""
        if isinstance(v, str):
            return v
        return repr(float(v))

    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        lines.append(
            ",".join(
                fmt(v)
                for v in (
                    row.grid_value,
                    row.family,
                    row.r,
                    row.delta,
                    row.qfi_perturbative,
                    row.e2,
                    row.c2,
                    row.residual_perturbative,
                    row.qfi_oracle,
                    row.residual_oracle,
                    row.negativity,
                    row.truncation_residual,
                )
            )
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ComparisonRow:
    family: str
    h: float
    qfi_perturbative: float
    qfi_oracle: float
    relative_deviation: float


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple
    slopes: dict

    def passed(self, min_slope: float = 0.8) -> bool:
        return all(s >= min_slope for s in self.slopes.values())


def compare_methods(
    spec: SweepSpec,
    h_ladder=(0.02, 0.04, 0.08),
    cache_dir: str | None = None,
) -> ComparisonReport:
    """Perturbative vs oracle on an acceleration ladder, per family.

    The perturbative value is the leading-order limit and does not depend on
    ``h``; the oracle is evaluated at each ``h`` on the ladder. The fitted
    log-log slope of the relative deviation measures the perturbative error
    order (linear for this channel).
    """
    sc = spec.scenario
    u = spec.grid[0] if len(spec.grid) == 1 else sc.u
    if spec.channel is not None:
        series = spec.channel
    else:
        overlaps = load_or_compute_overlap_series(sc.length, sc.n_max, cache_dir)
        series = compose_one_segment(overlaps, float(u))
    rows, slopes = [], {}
    for family in spec.families:
        modes = (sc.k,) if family == "single_squeezed_displaced" else (sc.k, sc.k_prime)
        r, delta = spec.params_for(family)
        pert = qfi_perturbative(series, family, modes, r, delta).value
        fam = probe_family(series, family, modes, r, delta)
        devs = []
        for h in h_ladder:
            orc = qfi_oracle(fam, float(h), steps=(h / 5.0, h / 15.0, h / 45.0)).value
            dev = abs(pert - orc) / abs(orc) if orc != 0.0 else abs(pert - orc)
            devs.append(dev)
            rows.append(ComparisonRow(family, float(h), pert, orc, dev))
        if max(devs) < 1e-13:
            # both routes vanish identically (trivial channel): nothing left
            # to fit, the agreement is exact
            slopes[family] = float("inf")
        else:
            slopes[family] = float(np.polyfit(np.log(h_ladder), np.log(devs), 1)[0])
    return ComparisonReport(tuple(rows), slopes)


def comparison_to_csv(report: ComparisonReport) -> str:
    lines = ["family,h,qfi_perturbative,qfi_oracle,relative_deviation"]
    for row in report.rows:
        lines.append(
            f"{row.family},{row.h!r},{row.qfi_perturbative!r},"
            f"{row.qfi_oracle!r},{row.relative_deviation!r}"
        )
    for family, slope in report.slopes.items():
        lines.append(f"slope:{family},,,,{slope!r}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    bound: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name}: measured {self.measured:.3e} vs bound {self.bound:.3e}"


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def validate(
    scenario: CavityScenario | None = None,
    channel: BogoliubovSeries | None = None,
    seed: int = 1234,
    cache_dir: str | None = None,
) -> ValidationReport:
    """Run the invariant suites and report measured residuals.

    With an imported ``channel`` the Bogoliubov-identity suite runs against
    it (this is how corrupt coefficient files are caught); otherwise the
    cavity channel of the scenario is built and checked.
    """
    rng = np.random.default_rng(seed)
    checks = []

    def add(name, measured, bound, larger_is_fine=False):
        ok = measured >= bound if larger_is_fine else measured <= bound
        checks.append(Check(name, bool(ok), float(measured), float(bound)))

    # Gaussian-state layer: random pure states stay pure and physical
    worst_det, worst_nu = 0.0, 0.0
    for _ in range(40):
        state = random_pure_state(2, rng)
        worst_det = max(worst_det, abs(np.linalg.det(state.covariance) - 1.0))
        worst_nu = max(worst_nu, abs(symplectic_eigenvalues(state).max() - 1.0))
    add("pure states: |det Sigma - 1|", worst_det, 1e-9)
    add("pure states: |nu - 1|", worst_nu, 1e-9)

    # fidelity layer: self-fidelity and swap symmetry on random mixed states
    worst_self, worst_swap = 0.0, 0.0
    for n in (1, 2):
        for _ in range(25):
            a, b = random_mixed_state(n, rng), random_mixed_state(n, rng)
            worst_self = max(worst_self, abs(fidelity(a, a) - 1.0))
            worst_swap = max(worst_swap, abs(fidelity(a, b) - fidelity(b, a)))
    add("fidelity: F(state, state) - 1", worst_self, 1e-12)
    add("fidelity: swap asymmetry", worst_swap, 1e-12)

    if channel is not None:
        if hasattr(channel, "identity_residual"):
            residual = channel.identity_residual()
        else:
            residual = max(channel.unitarity_residuals())
        add("imported channel: identity residual", residual, 1e-6)
        return ValidationReport(tuple(checks))

    scenario = scenario or CavityScenario()
    overlaps = load_or_compute_overlap_series(scenario.length, scenario.n_max, cache_dir)
    series = compose_one_segment(overlaps, scenario.u)
    probes = (scenario.k, scenario.k_prime)

    add("overlap series: fit residual", overlaps.fit_residual, 1e-7 * max(1.0, (scenario.n_max / 10.0) ** 2))
    add(
        "composed series: diagonal first order",
        max(np.max(np.abs(np.diag(series.alpha1))), np.max(np.abs(np.diag(series.beta1)))),
        1e-8,
    )
    first, second = series.unitarity_residuals(modes=probes)
    add("composed series: first-order identity (probed modes)", first, 1e-8)

    bogo = series.evaluate(scenario.h)
    s = symplectic_from_bogoliubov(bogo)
    add(
        "symplectic residual at h (probed modes)",
        s.omega_residual(modes=probes),
        1e-3,
    )

    # evaluated identity residual must shrink like h^3 on the probed modes
    def window_residual(theta):
        b = series.evaluate(theta)
        idx = np.array([m - 1 for m in probes])
        sub = np.ix_(idx, idx)
        d1 = b.alpha @ b.alpha.conj().T - b.beta @ b.beta.conj().T - np.eye(series.n_max)
        d2 = b.alpha @ b.beta.T - (b.alpha @ b.beta.T).T
        return max(np.max(np.abs(d1[sub])), np.max(np.abs(d2[sub])))

    hs = (0.02, 0.04, 0.08)
    res = [window_residual(h) for h in hs]
    slope = float(np.polyfit(np.log(hs), np.log(res), 1)[0])
    add("evaluated identity residual: cubic scaling slope", slope, 2.7, larger_is_fine=True)

    # periodicity in the duration parameter
    shifted = compose_one_segment(overlaps, scenario.u + 1.0)
    drift = max(
        np.max(np.abs(shifted.alpha1 - series.alpha1)),
        np.max(np.abs(shifted.beta2 - series.beta2)),
    )
    add("composed series: periodicity in u", drift, 1e-9)

    # dual-path agreement at the scenario point
    report = compare_methods(
        SweepSpec(scenario=scenario, grid=(scenario.u,), r=1.0, delta=0.0),
        cache_dir=cache_dir,
    )
    add("dual-path deviation slope", min(report.slopes.values()), 0.8, larger_is_fine=True)
    return ValidationReport(tuple(checks))
