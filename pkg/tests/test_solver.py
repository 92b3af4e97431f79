"""Tests for the exhaustive oracle, branch-and-bound and threshold descent."""

from fractions import Fraction

import pytest

from alopt.data import Instance, Provenance
from alopt.exceptions import DimensionError, SearchSpaceError, SpecError
from alopt.model import ConstraintSystem, build_constraints, validate
from alopt.solver import (
    SearchNode,
    SolveConfig,
    SolveReport,
    mass_target,
    search_space_size,
    solve,
    solve_branch_and_bound,
    solve_exhaustive,
    solve_threshold_descent,
    w_max,
)
from tests.helpers import payload_of, random_small_instance, small_aircraft


def build(instance: Instance) -> ConstraintSystem:
    return build_constraints(instance.spec, instance.payload)


def assert_sound(report: SolveReport, instance: Instance) -> None:
    """Every incumbent must pass exact validation."""
    if report.incumbent is not None:
        assert validate(report.incumbent, instance.spec, instance.payload).feasible


@pytest.fixture
def infeasible_instance() -> Instance:
    """Empty CG outside the window and one container too light to fix it."""
    spec = small_aircraft(4, cg_min=0.0, cg_max=0.2)
    return Instance(spec, payload_of((1, 1, 100)), Provenance("file"))


class TestSolveConfig:
    """Tests for solver settings."""

    def test_defaults(self) -> None:
        """Test the acceptance level and budget defaults."""
        config = SolveConfig()
        assert config.tau == 0.999
        assert config.seed == 0
        assert config.threads == 1

    @pytest.mark.parametrize(
        "kwargs",
        [{"tau": 1.5}, {"time_budget": 0}, {"restarts": 0}, {"threshold_step": 0}, {"mode": "simplex"}],
    )
    def test_invalid(self, kwargs: dict[str, object]) -> None:
        """Test invalid settings raise SpecError."""
        with pytest.raises(SpecError):
            SolveConfig(**kwargs)  # type: ignore[arg-type]

    def test_w_max_and_target(self, reference_instance: Instance) -> None:
        """Test W^max = min(W_p, sum m) and the exact target."""
        assert w_max(reference_instance.spec, reference_instance.payload) == 40000
        assert mass_target(0.999, 40000) == Fraction(39960)


class TestExhaustive:
    """Tests for the brute-force oracle."""

    def test_tiny_optimum(self, tiny_instance: Instance) -> None:
        """Test the oracle returns a feasible optimum."""
        report = solve_exhaustive(build(tiny_instance), tiny_instance.payload, tiny_instance.spec)
        assert report.status == "optimal"
        assert report.mode == "exhaustive"
        assert report.mass > 0
        assert_sound(report, tiny_instance)

    def test_search_space_size(self, tiny_instance: Instance) -> None:
        """Test the size estimate counts leave-out as an option."""
        assert search_space_size(build(tiny_instance)) == 5 * 5 * 5 * 4

    def test_guard(self, reference_instance: Instance, reference_system: ConstraintSystem) -> None:
        """Test the sample set is too large to enumerate."""
        with pytest.raises(SearchSpaceError) as info:
            solve_exhaustive(reference_system, reference_instance.payload, reference_instance.spec)
        assert info.value.estimate == 21**30

    def test_infeasible(self, infeasible_instance: Instance) -> None:
        """Test an instance with no feasible loading is proven infeasible."""
        report = solve_exhaustive(build(infeasible_instance), infeasible_instance.payload, infeasible_instance.spec)
        assert report.status == "infeasible_proven"
        assert report.incumbent is None
        assert report.mass == 0

    def test_trace_is_increasing(self, tiny_instance: Instance) -> None:
        """Test incumbent masses in the trace strictly increase."""
        report = solve_exhaustive(build(tiny_instance), tiny_instance.payload, tiny_instance.spec)
        masses = [p.mass for p in report.trace]
        assert masses == sorted(set(masses))
        assert masses[-1] == report.mass


class TestBranchAndBound:
    """Tests for the anytime exact search."""

    def test_matches_oracle_on_tiny(self, tiny_instance: Instance) -> None:
        """Test the optimum equals the exhaustive optimum."""
        system = build(tiny_instance)
        oracle = solve_exhaustive(system, tiny_instance.payload, tiny_instance.spec)
        config = SolveConfig(tau=1.0, reference_mass=10**9)
        report = solve_branch_and_bound(system, tiny_instance.payload, tiny_instance.spec, config)
        assert report.status == "optimal"
        assert report.mass == oracle.mass
        assert_sound(report, tiny_instance)

    @pytest.mark.parametrize("seed", range(50))
    def test_oracle_equivalence(self, seed: int) -> None:
        """Test branch-and-bound and exhaustive agree exactly on random small instances."""
        instance = random_small_instance(seed)
        system = build(instance)
        oracle = solve_exhaustive(system, instance.payload, instance.spec)
        config = SolveConfig(tau=1.0, reference_mass=10**9, time_budget=60)
        report = solve_branch_and_bound(system, instance.payload, instance.spec, config)
        assert report.status == oracle.status == "optimal"
        assert report.mass == oracle.mass
        assert_sound(report, instance)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(100, 150))
    def test_oracle_equivalence_larger(self, seed: int) -> None:
        """Test agreement with up to 8 containers."""
        instance = random_small_instance(seed, max_n=8)
        system = build(instance)
        oracle = solve_exhaustive(system, instance.payload, instance.spec)
        config = SolveConfig(tau=1.0, reference_mass=10**9, time_budget=300)
        report = solve_branch_and_bound(system, instance.payload, instance.spec, config)
        assert report.mass == oracle.mass

    def test_bounds_dominate_node_values(self, tiny_instance: Instance) -> None:
        """Test every node bound is at least the node value and the root bound covers the optimum."""
        nodes: list[SearchNode] = []
        config = SolveConfig(tau=1.0, reference_mass=10**9)
        report = solve_branch_and_bound(
            build(tiny_instance), tiny_instance.payload, tiny_instance.spec, config, node_hook=nodes.append
        )
        assert nodes
        assert all(node.bound >= node.value for node in nodes)
        assert nodes[0].depth == 0
        assert nodes[0].bound >= report.mass

    def test_stops_at_target(self, reference_instance: Instance, reference_system: ConstraintSystem) -> None:
        """Test a low tau stops the search as soon as it is met."""
        config = SolveConfig(tau=0.5, time_budget=30)
        report = solve_branch_and_bound(reference_system, reference_instance.payload, reference_instance.spec, config)
        assert report.status in ("tau_reached", "optimal")
        assert report.mass >= 20000
        assert_sound(report, reference_instance)

    def test_budget(self, reference_instance: Instance, reference_system: ConstraintSystem) -> None:
        """Test a tight budget returns promptly with a sound anytime status."""
        config = SolveConfig(tau=1.0, reference_mass=10**9, time_budget=0.2)
        report = solve_branch_and_bound(reference_system, reference_instance.payload, reference_instance.spec, config)
        assert report.status in ("budget_exhausted", "optimal", "no_solution_found")
        assert report.wall_time < 5
        assert_sound(report, reference_instance)

    def test_infeasible(self, infeasible_instance: Instance) -> None:
        """Test a complete search without a feasible leaf proves infeasibility."""
        report = solve_branch_and_bound(build(infeasible_instance), infeasible_instance.payload, infeasible_instance.spec)
        assert report.status == "infeasible_proven"

    def test_mismatched_payload(self, tiny_instance: Instance) -> None:
        """Test a system built for another payload is rejected."""
        other = payload_of((1, 1, 2000))
        with pytest.raises(DimensionError):
            solve_branch_and_bound(build(tiny_instance), other, tiny_instance.spec)

    @pytest.mark.slow
    def test_reference_quality(self, reference_instance: Instance, reference_system: ConstraintSystem) -> None:
        """Test the sample set reaches 99% of W^max."""
        config = SolveConfig(tau=0.99, time_budget=600)
        report = solve_branch_and_bound(reference_system, reference_instance.payload, reference_instance.spec, config)
        assert report.mass >= 0.99 * 40000
        assert_sound(report, reference_instance)


class TestThresholdDescent:
    """Tests for the dynamic-threshold heuristic."""

    def test_reaches_known_optimum(self, tiny_instance: Instance) -> None:
        """Test the heuristic reaches the exact optimum on a tiny instance."""
        system = build(tiny_instance)
        optimum = solve_exhaustive(system, tiny_instance.payload, tiny_instance.spec).mass
        config = SolveConfig(mode="threshold_descent", tau=1.0, reference_mass=optimum, time_budget=20, seed=3)
        report = solve_threshold_descent(system, tiny_instance.payload, tiny_instance.spec, config)
        assert report.status == "tau_reached"
        assert report.mass == optimum
        assert_sound(report, tiny_instance)

    def test_trace_rises_by_threshold_step(self, generated_instance: Instance) -> None:
        """Test every recorded mass exceeds the previous one by at least the step."""
        config = SolveConfig(mode="threshold_descent", tau=0.9, time_budget=10, threshold_step=50, seed=1)
        report = solve_threshold_descent(build(generated_instance), generated_instance.payload, generated_instance.spec, config)
        masses = [p.mass for p in report.trace]
        assert all(b - a >= 50 for a, b in zip(masses, masses[1:], strict=False))
        assert_sound(report, generated_instance)

    def test_deterministic_single_thread(self, generated_instance: Instance) -> None:
        """Test the same seed gives the same incumbent."""
        system = build(generated_instance)
        config = SolveConfig(mode="threshold_descent", tau=0.8, time_budget=30, seed=11, threads=1)
        first = solve_threshold_descent(system, generated_instance.payload, generated_instance.spec, config)
        second = solve_threshold_descent(system, generated_instance.payload, generated_instance.spec, config)
        assert first.status == second.status == "tau_reached"
        assert first.incumbent == second.incumbent

    def test_never_proves_infeasibility(self, infeasible_instance: Instance) -> None:
        """Test an infeasible instance ends with no_solution_found."""
        config = SolveConfig(mode="threshold_descent", time_budget=0.3)
        report = solve_threshold_descent(build(infeasible_instance), infeasible_instance.payload, infeasible_instance.spec, config)
        assert report.status == "no_solution_found"
        assert report.incumbent is None

    def test_null_objective_stops_at_first_feasible(self, tiny_instance: Instance) -> None:
        """Test a feasibility problem is solved by any feasible point."""
        system = build(tiny_instance).with_objective(None)
        config = SolveConfig(mode="threshold_descent", time_budget=10)
        report = solve_threshold_descent(system, tiny_instance.payload, tiny_instance.spec, config)
        assert report.status == "tau_reached"
        assert_sound(report, tiny_instance)

    def test_rejects_other_objectives(self, tiny_instance: Instance) -> None:
        """Test only the mass or the null objective is accepted."""
        system = build(tiny_instance)
        system = system.with_objective([1] * system.shape[1])
        with pytest.raises(SpecError, match="objective"):
            solve_threshold_descent(system, tiny_instance.payload, tiny_instance.spec)

    def test_warm_start(self, generated_instance: Instance) -> None:
        """Test a warm threshold only ever records masses at or above it."""
        config = SolveConfig(
            mode="threshold_descent", tau=0.7, time_budget=10, initial_threshold="warm", seed=2
        )
        report = solve_threshold_descent(build(generated_instance), generated_instance.payload, generated_instance.spec, config)
        floor = mass_target(0.7, w_max(generated_instance.spec, generated_instance.payload))
        assert all(p.mass >= floor for p in report.trace)
        assert_sound(report, generated_instance)

    def test_parallel_restarts(self, generated_instance: Instance) -> None:
        """Test several worker threads share one sound incumbent."""
        config = SolveConfig(mode="threshold_descent", tau=0.8, time_budget=20, threads=2, restarts=4)
        report = solve_threshold_descent(build(generated_instance), generated_instance.payload, generated_instance.spec, config)
        assert report.status in ("tau_reached", "budget_exhausted")
        assert report.incumbent is not None
        assert_sound(report, generated_instance)

    @pytest.mark.slow
    def test_reference_quality(self, reference_instance: Instance, reference_system: ConstraintSystem) -> None:
        """Test the sample set reaches 99% of W^max."""
        config = SolveConfig(mode="threshold_descent", tau=0.99, time_budget=600)
        report = solve_threshold_descent(reference_system, reference_instance.payload, reference_instance.spec, config)
        assert report.mass >= 0.99 * 40000
        assert_sound(report, reference_instance)


class TestSoundness:
    """Every incumbent from every mode passes exact validation."""

    @pytest.mark.slow
    def test_thousand_outputs_validate(self) -> None:
        """Test 1200 solves over 400 random instances and three modes with zero violations."""
        checked = 0
        for seed in range(400):
            instance = random_small_instance(seed, max_n=5)
            system = build(instance)
            oracle = solve_exhaustive(system, instance.payload, instance.spec)
            exact = SolveConfig(tau=1.0, reference_mass=10**9, time_budget=60)
            heuristic = SolveConfig(
                mode="threshold_descent", tau=1.0, reference_mass=oracle.mass, time_budget=1, restarts=2, seed=seed
            )
            reports = [
                oracle,
                solve_branch_and_bound(system, instance.payload, instance.spec, exact),
                solve_threshold_descent(system, instance.payload, instance.spec, heuristic),
            ]
            for report in reports:
                if report.incumbent is None:
                    continue
                result = validate(report.incumbent, instance.spec, instance.payload, system=system)
                assert result.violations == ()
                assert -result.objective == report.mass
                assert report.mass <= oracle.mass
                checked += 1
        assert checked >= 10**3


class TestDispatch:
    """Tests for solve()."""

    @pytest.mark.parametrize("mode", ["exhaustive", "branch_and_bound", "threshold_descent"])
    def test_modes(self, tiny_instance: Instance, mode: str) -> None:
        """Test each mode is routed to its solver."""
        config = SolveConfig(mode=mode, tau=0.5, time_budget=10)  # type: ignore[arg-type]
        report = solve(build(tiny_instance), tiny_instance.payload, tiny_instance.spec, config)
        assert report.mode == mode
        assert report.n_l > 0
        assert_sound(report, tiny_instance)
