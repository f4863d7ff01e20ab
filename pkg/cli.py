"""
Command-line entry point: stability, hopf, lyapunov, scan, simulate and verify.

Reports go to stdout (JSON, or CSV for the scan contour), logs to stderr.
Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

import sys
from typing import Annotated, List, Optional, Tuple

import click
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from acceptance import run_acceptance
from closed_forms import (
    closed_form_value,
    l1_closed,
    part_real_cubic,
    part_real_h11,
    part_real_h20,
    transversality_closed,
)
from config_loader import ConfigError, load_config
from governor_model import derived_frequencies, equilibrium, rescale_physical
from hopf_core import hopf_frame, lyapunov_coefficient, transversality_finite_difference
from logger import configured_logger
from models import (
    Axis,
    DimensionlessParams,
    FormulaId,
    Grid,
    HopfClass,
    OrbitStability,
    RescaledParams,
    RunConfig,
    ScanFormula,
)
from numeric_core import NumericalError
from orbit_sim import NEAR_HOPF, amplitude_scaling, detect_orbit, integrate
from output_store import OutputError, output_store, trajectory_frame
from scan import CASE_FORMULA, boundary_crossings, case_grid, contours_frame, oracle_cross_scan, scan_formula, values_frame
from stability import charpoly, classify, critical_params, epsilon_critical, vyshnegradskii

__version__ = "1.0.0"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2

# l1 closed form and projection engine agree to this relative error
ORACLE_TOLERANCE = 1e-6
CROSS_SCAN_AXIS_COUNT = 10

POSITIVE = click.FloatRange(min=0.0, min_open=True)
NON_NEGATIVE = click.FloatRange(min=0.0)
UNIT_OPEN = click.FloatRange(0.0, 1.0, min_open=True, max_open=True)
UNIT_HALF_OPEN = click.FloatRange(0.0, 1.0, max_open=True)
TOLERANCE = click.FloatRange(1e-12, 1e-3)

app = typer.Typer(
    name="hgs",
    help="Stability and Hopf analysis of the hexagonal centrifugal governor.",
    no_args_is_help=True,
    add_completion=False,
)
console = Console(stderr=True)


def _option(flag: str, help: str, click_type: Optional[click.ParamType] = None):
    return typer.Option(flag, help=help, click_type=click_type, show_default=False)


ConfigOption = Annotated[Optional[str], _option("--config", "Flat key = value configuration file")]
BetaOption = Annotated[Optional[float], _option("--beta", "Load ratio F/mu, 0 < beta < 1", UNIT_OPEN)]
AlphaOption = Annotated[Optional[float], _option("--alpha", "Engine gain, alpha > 0", POSITIVE)]
RhoOption = Annotated[Optional[float], _option("--rho", "Geometry ratio L/l, rho >= 0", NON_NEGATIVE)]
KappaOption = Annotated[Optional[float], _option("--kappa", "Spring ratio, 0 <= kappa < 1", UNIT_HALF_OPEN)]
EpsilonOption = Annotated[Optional[float], _option("--epsilon", "Damping, epsilon > 0", POSITIVE)]
RatioOption = Annotated[
    Optional[float], _option("--epsilon-ratio", "Damping as a multiple of eps_c, ratio > 0", POSITIVE)
]
PhysicalOption = Annotated[Optional[bool], _option("--physical", "Read the point from physical parameters")]
MassOption = Annotated[Optional[float], _option("--mass", "Ball mass m (kg), > 0", POSITIVE)]
ArmOption = Annotated[Optional[float], _option("--arm-length", "Arm length l (m), > 0", POSITIVE)]
EdgeOption = Annotated[Optional[float], _option("--half-edge", "Half horizontal edge L (m), >= 0", NON_NEGATIVE)]
SpringOption = Annotated[Optional[float], _option("--spring", "Spring constant k (N/m), >= 0", NON_NEGATIVE)]
FrictionOption = Annotated[Optional[float], _option("--friction", "Friction coefficient b, > 0", POSITIVE)]
GravityOption = Annotated[Optional[float], _option("--gravity", "Gravity g (m/s^2), > 0", POSITIVE)]
GearOption = Annotated[Optional[float], _option("--gear-ratio", "Transmission ratio c, > 0", POSITIVE)]
TorqueOption = Annotated[Optional[float], _option("--torque-gain", "Steam torque constant mu, > 0", POSITIVE)]
InertiaOption = Annotated[Optional[float], _option("--inertia", "Flywheel inertia I, > 0", POSITIVE)]
LoadOption = Annotated[Optional[float], _option("--load", "Load torque F, 0 < F < mu", POSITIVE)]
WorkersOption = Annotated[
    Optional[int], _option("--workers", "Worker processes, >= 1", click.IntRange(min=1))
]
OutputDirOption = Annotated[Optional[str], _option("--output-dir", "Directory for saved reports")]
SaveOption = Annotated[Optional[bool], _option("--save", "Also write the reports to the output directory")]
SeedOption = Annotated[Optional[int], _option("--seed", "Random seed")]


def _load(config_path: Optional[str], command: str, **flags) -> RunConfig:
    config = load_config(config_path, {"command": command, **flags})
    output_store.configure(config.output_dir)
    configured_logger.info(f"{command}: starting with config {config.model_dump(mode='json', exclude_none=True)}")
    return config


def _report(config: RunConfig, result: dict, agreement: dict) -> dict:
    return {
        "version": __version__,
        "command": config.command,
        "config": config.model_dump(mode="json"),
        "result": result,
        "agreement": agreement,
    }


def _emit(config: RunConfig, report: dict, file_name: str):
    typer.echo(output_store.render_json(report))
    if config.save:
        output_store.write_json(report, file_name)


def _relative(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


def resolve_point(config: RunConfig) -> Tuple[DimensionlessParams, Optional[RescaledParams]]:
    """
    The parameter point of a run. Physical mode rescales the physical set;
    otherwise epsilon comes from --epsilon or --epsilon-ratio (times eps_c).
    """
    if config.physical:
        if config.epsilon is not None or config.epsilon_ratio is not None:
            raise ValueError("--epsilon and --epsilon-ratio cannot be combined with --physical")
        rescaled = rescale_physical(config.physical_params())
        configured_logger.info(f"physical parameters rescale to {rescaled.params.model_dump()}")
        return rescaled.params, rescaled

    if config.epsilon is not None and config.epsilon_ratio is not None:
        raise ValueError("give either --epsilon or --epsilon-ratio, not both")
    if config.epsilon is None and config.epsilon_ratio is None:
        raise ValueError("--epsilon or --epsilon-ratio is required")
    epsilon = config.epsilon
    if epsilon is None:
        epsilon = config.epsilon_ratio * epsilon_critical(config.beta, config.alpha, config.rho, config.kappa)
    return config.point(epsilon), None


@app.command()
def stability(
    beta: BetaOption = None,
    alpha: AlphaOption = None,
    epsilon: EpsilonOption = None,
    epsilon_ratio: RatioOption = None,
    rho: RhoOption = None,
    kappa: KappaOption = None,
    physical: PhysicalOption = None,
    mass: MassOption = None,
    arm_length: ArmOption = None,
    half_edge: EdgeOption = None,
    spring: SpringOption = None,
    friction: FrictionOption = None,
    gravity: GravityOption = None,
    gear_ratio: GearOption = None,
    torque_gain: TorqueOption = None,
    inertia: InertiaOption = None,
    load: LoadOption = None,
    config: ConfigOption = None,
    output_dir: OutputDirOption = None,
    save: SaveOption = None,
):
    """Classify the equilibrium P0 and, in physical mode, apply Vyshnegradskii's rule."""
    run_config = _load(
        config, "stability",
        beta=beta, alpha=alpha, epsilon=epsilon, epsilon_ratio=epsilon_ratio, rho=rho, kappa=kappa,
        physical=physical, mass=mass, arm_length=arm_length, half_edge=half_edge, spring=spring,
        friction=friction, gravity=gravity, gear_ratio=gear_ratio, torque_gain=torque_gain,
        inertia=inertia, load=load, output_dir=output_dir, save=save,
    )
    params, rescaled = resolve_point(run_config)
    verdict = classify(params)
    coefficients = charpoly(params)
    result = {
        "params": params,
        "equilibrium": equilibrium(params),
        "frequencies": derived_frequencies(params),
        "p1": coefficients.p1,
        "p2": coefficients.p2,
        "p3": coefficients.p3,
        "eps_c": verdict.eps_c,
        "margin": verdict.margin,
        "classification": verdict.classification,
        "roots": verdict.roots,
        "verdict": verdict,
    }
    agreement = {"roots_agree": verdict.roots_agree}
    if rescaled is not None:
        rule = vyshnegradskii(run_config.physical_params())
        result["rescaled"] = rescaled
        result["vyshnegradskii"] = rule
        agreement["vyshnegradskii_matches_margin"] = rule.stable == (verdict.margin > 0.0)
    _emit(run_config, _report(run_config, result, agreement), "stability.json")


@app.command()
def hopf(
    beta: BetaOption = None,
    alpha: AlphaOption = None,
    rho: RhoOption = None,
    kappa: KappaOption = None,
    degeneracy_tol: Annotated[
        Optional[float], _option("--degeneracy-tol", "|l1| below this is Degenerate, > 0", POSITIVE)
    ] = None,
    config: ConfigOption = None,
    output_dir: OutputDirOption = None,
    save: SaveOption = None,
):
    """Critical eigenvectors, transversality and the first Lyapunov coefficient at eps = eps_c."""
    run_config = _load(
        config, "hopf",
        beta=beta, alpha=alpha, rho=rho, kappa=kappa, degeneracy_tol=degeneracy_tol,
        output_dir=output_dir, save=save,
    )
    point = (run_config.beta, run_config.alpha, run_config.rho, run_config.kappa)
    critical = critical_params(*point)
    frame = hopf_frame(critical)
    lyapunov = lyapunov_coefficient(frame, degeneracy_tolerance=run_config.degeneracy_tol)
    closed_speed = transversality_closed(*point)
    numeric_speed = transversality_finite_difference(critical)
    closed_l1 = l1_closed(*point)

    result = {
        "eps_c": lyapunov.eps_c,
        "omega0": lyapunov.omega0,
        "q": frame.q,
        "p": frame.p,
        "G21": lyapunov.g21,
        "l1": lyapunov.l1,
        "l1_closed_form": closed_l1,
        "classification": lyapunov.classification,
        "transversality": lyapunov.transversality,
        "transversality_closed": closed_speed,
        "transversality_finite_difference": numeric_speed,
        "h20_residual": lyapunov.h20_residual,
        "solvability_residual": lyapunov.solvability_residual,
    }
    agreement = {
        "transversality_closed": _relative(lyapunov.transversality, closed_speed) < ORACLE_TOLERANCE,
        "transversality_finite_difference": _relative(numeric_speed, closed_speed) < 1e-4,
        "l1_closed_form": _relative(closed_l1, lyapunov.l1) < ORACLE_TOLERANCE,
    }
    _emit(run_config, _report(run_config, result, agreement), "hopf.json")


@app.command()
def lyapunov(
    beta: BetaOption = None,
    alpha: AlphaOption = None,
    rho: RhoOption = None,
    kappa: KappaOption = None,
    config: ConfigOption = None,
    output_dir: OutputDirOption = None,
    save: SaveOption = None,
):
    """Closed forms of l1 and its special-case numerators, compared with the projection engine."""
    run_config = _load(
        config, "lyapunov", beta=beta, alpha=alpha, rho=rho, kappa=kappa, output_dir=output_dir, save=save
    )
    point = (run_config.beta, run_config.alpha, run_config.rho, run_config.kappa)
    numeric = lyapunov_coefficient(critical_params(*point), degeneracy_tolerance=run_config.degeneracy_tol)

    closed = {FormulaId.R: closed_form_value(FormulaId.R, *point), FormulaId.L1: closed_form_value(FormulaId.L1, *point)}
    if run_config.rho == 0.0:
        closed[FormulaId.G1] = closed_form_value(FormulaId.G1, *point)
    if run_config.kappa == 0.0:
        closed[FormulaId.G2] = closed_form_value(FormulaId.G2, *point)

    parts = {
        "cubic": {"numeric": numeric.cubic_part, "closed": part_real_cubic(*point)},
        "h11": {"numeric": numeric.h11_part, "closed": part_real_h11(*point)},
        "h20": {"numeric": numeric.h20_part, "closed": part_real_h20(*point)},
    }
    agreement = {"l1_closed": _relative(closed[FormulaId.L1].value, numeric.l1) < ORACLE_TOLERANCE}
    for name, pair in parts.items():
        agreement[f"part_{name}"] = _relative(pair["closed"], pair["numeric"]) < ORACLE_TOLERANCE
    # both special-case numerators carry the sign of l1
    for formula in (FormulaId.G1, FormulaId.G2):
        if formula in closed:
            agreement[f"{formula.value}_sign"] = (closed[formula].value > 0.0) == (numeric.l1 > 0.0)

    result = {
        "eps_c": numeric.eps_c,
        "l1_numeric": numeric.l1,
        "classification": numeric.classification,
        "closed_forms": {formula.value: value for formula, value in closed.items()},
        "parts": parts,
    }
    _emit(run_config, _report(run_config, result, agreement), "lyapunov.json")


def _coarse(grid: Grid) -> Grid:
    axes = [
        Axis(name=axis.name, min=axis.min, max=axis.max, count=min(axis.count, CROSS_SCAN_AXIS_COUNT))
        for axis in grid.axes
    ]
    return Grid(axes=axes, fixed=grid.fixed)


@app.command()
def scan(
    case: Annotated[
        Optional[str], _option("--case", "Slice: rho0, kappa0 or general", click.Choice(["rho0", "kappa0", "general"]))
    ] = None,
    formula: Annotated[
        Optional[str],
        _option("--formula", "G1, G2, l1_numeric or l1_closed", click.Choice([f.value for f in ScanFormula])),
    ] = None,
    grid: Annotated[Optional[str], _option("--grid", "Counts per axis, e.g. 100x100 or 40x40x5")] = None,
    beta: BetaOption = None,
    alpha: AlphaOption = None,
    rho: RhoOption = None,
    kappa: KappaOption = None,
    beta_min: Annotated[Optional[float], _option("--beta-min", "Lower beta bound", UNIT_OPEN)] = None,
    beta_max: Annotated[Optional[float], _option("--beta-max", "Upper beta bound", UNIT_OPEN)] = None,
    alpha_min: Annotated[Optional[float], _option("--alpha-min", "Lower alpha bound", POSITIVE)] = None,
    alpha_max: Annotated[Optional[float], _option("--alpha-max", "Upper alpha bound", POSITIVE)] = None,
    rho_min: Annotated[Optional[float], _option("--rho-min", "Lower rho bound", NON_NEGATIVE)] = None,
    rho_max: Annotated[Optional[float], _option("--rho-max", "Upper rho bound", NON_NEGATIVE)] = None,
    kappa_min: Annotated[Optional[float], _option("--kappa-min", "Lower kappa bound", UNIT_HALF_OPEN)] = None,
    kappa_max: Annotated[Optional[float], _option("--kappa-max", "Upper kappa bound", UNIT_HALF_OPEN)] = None,
    sample_count: Annotated[
        Optional[int], _option("--sample-count", "Random points for the oracle check", click.IntRange(min=1))
    ] = None,
    seed: SeedOption = None,
    workers: WorkersOption = None,
    config: ConfigOption = None,
    output_dir: OutputDirOption = None,
    save: SaveOption = None,
):
    """Sign map and zero contour of G1, G2 or l1 over a parameter grid; prints the contour CSV."""
    run_config = _load(
        config, "scan",
        case=case, formula=formula, grid=grid, beta=beta, alpha=alpha, rho=rho, kappa=kappa,
        beta_min=beta_min, beta_max=beta_max, alpha_min=alpha_min, alpha_max=alpha_max,
        rho_min=rho_min, rho_max=rho_max, kappa_min=kappa_min, kappa_max=kappa_max,
        sample_count=sample_count, seed=seed, workers=workers, output_dir=output_dir, save=save,
    )
    scan_grid = case_grid(run_config.case, run_config)
    scan_kind = run_config.formula or CASE_FORMULA[run_config.case]
    signmap = scan_formula(scan_kind, scan_grid, run_config.workers)

    crossings = {}
    line_axis = scan_grid.axes[1]
    if run_config.case in ("rho0", "kappa0") and line_axis.min == 0.0:
        crossings[f"{line_axis.name}=0"] = boundary_crossings(signmap, line_axis.name, 0.0)
        configured_logger.info(f"{scan_kind.value} boundary on {line_axis.name} = 0 at beta {crossings}")

    contours = output_store.render_csv(contours_frame(signmap))
    typer.echo(contours, nl=False)

    if run_config.save:
        cross = oracle_cross_scan(
            _coarse(scan_grid), sample_count=run_config.sample_count, seed=run_config.seed, workers=run_config.workers
        )
        report = _report(
            run_config,
            {
                "formula": scan_kind,
                "shape": list(scan_grid.shape),
                "masked": signmap.masked_count,
                "polylines": len(signmap.contours),
                "boundary_crossings": crossings,
                "cross_scan": cross,
            },
            cross.agreement,
        )
        output_store.write_csv(values_frame(signmap), "scan_values.csv")
        output_store.write_csv(contours_frame(signmap), "scan_contours.csv")
        output_store.write_json(report, "scan.json")


@app.command()
def simulate(
    beta: BetaOption = None,
    alpha: AlphaOption = None,
    epsilon: EpsilonOption = None,
    epsilon_ratio: RatioOption = None,
    rho: RhoOption = None,
    kappa: KappaOption = None,
    physical: PhysicalOption = None,
    mass: MassOption = None,
    arm_length: ArmOption = None,
    half_edge: EdgeOption = None,
    spring: SpringOption = None,
    friction: FrictionOption = None,
    gravity: GravityOption = None,
    gear_ratio: GearOption = None,
    torque_gain: TorqueOption = None,
    inertia: InertiaOption = None,
    load: LoadOption = None,
    t_end: Annotated[Optional[float], _option("--t-end", "Integration horizon, > 0", POSITIVE)] = None,
    rel_tol: Annotated[Optional[float], _option("--rel-tol", "Relative tolerance in [1e-12, 1e-3]", TOLERANCE)] = None,
    abs_tol: Annotated[Optional[float], _option("--abs-tol", "Absolute tolerance in [1e-12, 1e-3]", TOLERANCE)] = None,
    direction: Annotated[
        Optional[str], _option("--direction", "Side of eps_c: below or above", click.Choice(["below", "above"]))
    ] = None,
    start_offset: Annotated[
        Optional[float],
        _option(
            "--start-offset",
            "Start distance from P0 along x, 0 < offset < 0.5",
            click.FloatRange(0.0, 0.5, min_open=True, max_open=True),
        ),
    ] = None,
    scaling: Annotated[Optional[bool], _option("--scaling", "Also measure the amplitude scaling law")] = None,
    config: ConfigOption = None,
    output_dir: OutputDirOption = None,
    save: SaveOption = None,
):
    """Integrate a trajectory near P0 and, within 10% of eps_c, detect the Hopf cycle."""
    run_config = _load(
        config, "simulate",
        beta=beta, alpha=alpha, epsilon=epsilon, epsilon_ratio=epsilon_ratio, rho=rho, kappa=kappa,
        physical=physical, mass=mass, arm_length=arm_length, half_edge=half_edge, spring=spring,
        friction=friction, gravity=gravity, gear_ratio=gear_ratio, torque_gain=torque_gain,
        inertia=inertia, load=load, t_end=t_end, rel_tol=rel_tol, abs_tol=abs_tol, direction=direction,
        start_offset=start_offset, scaling=scaling, output_dir=output_dir, save=save,
    )
    params, rescaled = resolve_point(run_config)
    center = equilibrium(params)
    start = (center.x - run_config.start_offset, 0.0, center.z)
    trajectory = integrate(start, params, run_config.t_end, run_config.rel_tol, run_config.abs_tol)

    result = {
        "params": params,
        "trajectory": {
            "start": start,
            "samples": int(trajectory.t.size),
            "t_final": float(trajectory.t[-1]),
            "reason": trajectory.reason,
            "final_state": trajectory.final_state,
        },
    }
    if rescaled is not None:
        result["rescaled"] = rescaled
    agreement = {}

    eps_c = epsilon_critical(*params.point())
    if abs(params.epsilon / eps_c - 1.0) < NEAR_HOPF:
        critical = critical_params(*params.point())
        hopf_report = lyapunov_coefficient(critical, degeneracy_tolerance=run_config.degeneracy_tol)
        orbit = detect_orbit(params, run_config.direction, run_config.rel_tol, run_config.abs_tol, lyapunov=hopf_report)
        result["hopf_class"] = hopf_report.classification
        result["orbit"] = orbit
        agreement["orbit_found"] = orbit.found
        if orbit.found:
            expected = {
                HopfClass.SUPERCRITICAL: OrbitStability.ATTRACTING,
                HopfClass.SUBCRITICAL: OrbitStability.REPELLING,
            }.get(hopf_report.classification)
            agreement["stability_matches_hopf_class"] = orbit.stability is expected
        if run_config.scaling:
            rows = amplitude_scaling(critical, rel_tol=run_config.rel_tol, abs_tol=run_config.abs_tol)
            result["amplitude_scaling"] = rows
            agreement["square_root_law"] = all(abs(row.ratio_to_next - 2.0) <= 0.4 for row in rows[:-1])
    else:
        configured_logger.info(f"epsilon/eps_c = {params.epsilon / eps_c:.6g}: no cycle search outside 10% of eps_c")

    _emit(run_config, _report(run_config, result, agreement), "simulate.json")
    if run_config.save:
        output_store.write_csv(trajectory_frame(trajectory), "trajectory.csv")


@app.command()
def verify(
    quick: Annotated[Optional[bool], _option("--quick", "Skip the orbit criteria")] = None,
    seed: SeedOption = None,
    workers: WorkersOption = None,
    config: ConfigOption = None,
    output_dir: OutputDirOption = None,
    save: SaveOption = None,
):
    """Run the acceptance criteria; exit 0 only when every criterion that ran passed."""
    run_config = _load(
        config, "verify", quick=quick, seed=seed, workers=workers, output_dir=output_dir, save=save
    )
    results = run_acceptance(quick=run_config.quick, seed=run_config.seed, workers=run_config.workers)

    table = Table(title="Acceptance criteria")
    table.add_column("#", justify="right")
    table.add_column("Criterion")
    table.add_column("Result")
    table.add_column("Seconds", justify="right")
    for item in results:
        status = "[yellow]skipped[/yellow]" if item.skipped else ("[green]pass[/green]" if item.passed else "[red]FAIL[/red]")
        table.add_row(str(item.number), item.name, status, f"{item.seconds:.2f}")
    console.print(table)

    agreement = {f"criterion_{item.number}": item.passed for item in results if not item.skipped}
    _emit(run_config, _report(run_config, {"criteria": results}, agreement), "verify.json")
    if not all(agreement.values()):
        raise typer.Exit(code=EXIT_NUMERICAL)


def _validation_message(error: ValidationError) -> str:
    lines = []
    for item in error.errors():
        field = ".".join(str(part) for part in item["loc"]) or "input"
        lines.append(f"--{field.replace('_', '-')}: {item['msg']} (got {item.get('input')!r})")
    return "\n".join(lines)


def run(argv: Optional[List[str]] = None) -> int:
    """Run the CLI on argv and return the exit code instead of exiting."""
    command = typer.main.get_command(app)
    try:
        result = command.main(args=argv, prog_name="hgs", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_VALIDATION
    except click.exceptions.Abort:
        return EXIT_VALIDATION
    except ValidationError as e:
        configured_logger.error(f"invalid parameters:\n{_validation_message(e)}")
        typer.echo(_validation_message(e), err=True)
        return EXIT_VALIDATION
    except NumericalError as e:
        configured_logger.error(f"numerical failure: {type(e).__name__}: {e}")
        typer.echo(f"numerical failure: {e}", err=True)
        return EXIT_NUMERICAL
    except (ConfigError, OutputError, ValueError) as e:
        configured_logger.error(f"{type(e).__name__}: {e}")
        typer.echo(f"error: {e}", err=True)
        return EXIT_VALIDATION
    return result if isinstance(result, int) else EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
