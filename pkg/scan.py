"""
Parameter sweeps over the Hopf hypersurface: sign maps of G1, G2 or l1,
their zero contours, and cross-checks of the closed forms against the
projection engine.
"""

import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from closed_forms import G1, G2, l1_closed
from hopf_core import l1_numeric
from logger import configured_logger
from models import (
    PARAMETER_NAMES,
    Axis,
    ContourPolyline,
    CrossScanReport,
    Grid,
    RunConfig,
    ScanFormula,
    SignMap,
)
from numeric_core import NumericalError

CASE_AXES = {
    "rho0": ("beta", "kappa", "alpha"),
    "kappa0": ("beta", "rho", "alpha"),
    "general": ("beta", "alpha", "rho"),
}
CASE_FORMULA = {
    "rho0": ScanFormula.G1,
    "kappa0": ScanFormula.G2,
    "general": ScanFormula.L1_CLOSED,
}

# corners of cell (i, j) counter-clockwise, edges between consecutive corners
CELL_CORNERS = ((0, 0), (1, 0), (1, 1), (0, 1))
CELL_EDGES = ((0, 1), (1, 2), (2, 3), (3, 0))


def case_grid(case: str, config: RunConfig) -> Grid:
    """Grid for one of the special-case slices; a third count stacks slices along the last axis."""
    counts = config.grid_counts()
    names = CASE_AXES[case][: len(counts)]
    axes = [
        Axis(name=name, min=getattr(config, f"{name}_min"), max=getattr(config, f"{name}_max"), count=count)
        for name, count in zip(names, counts)
    ]
    fixed = {name: float(getattr(config, name)) for name in PARAMETER_NAMES if name not in names}
    if case == "rho0":
        fixed["rho"] = 0.0
    elif case == "kappa0":
        fixed["kappa"] = 0.0
    return Grid(axes=axes, fixed=fixed)


def grid_arrays(grid: Grid) -> Dict[str, np.ndarray]:
    """Every parameter as an array of grid.shape, axes in 'ij' order."""
    meshes = np.meshgrid(*[axis.values() for axis in grid.axes], indexing="ij")
    arrays = {axis.name: mesh for axis, mesh in zip(grid.axes, meshes)}
    for name, value in grid.fixed.items():
        arrays[name] = np.full(grid.shape, value)
    return arrays


def _l1_numeric_chunk(points: List[Tuple[float, float, float, float]]) -> List[float]:
    values = []
    for beta, alpha, rho, kappa in points:
        try:
            values.append(l1_numeric(beta, alpha, rho, kappa))
        except NumericalError as e:
            configured_logger.warning(f"l1 masked at beta={beta}, alpha={alpha}, rho={rho}, kappa={kappa}: {e}")
            values.append(math.nan)
    return values


def l1_numeric_field(arrays: Dict[str, np.ndarray], workers: int = 1) -> np.ndarray:
    """Projection-engine l1 at every point; chunks keep row-major order whatever the worker count."""
    shape = arrays["beta"].shape
    flat = list(zip(*(arrays[name].ravel() for name in ("beta", "alpha", "rho", "kappa"))))
    chunk = max(1, shape[-1])
    chunks = [flat[k : k + chunk] for k in range(0, len(flat), chunk)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_l1_numeric_chunk, chunks))
    else:
        results = [_l1_numeric_chunk(part) for part in chunks]
    return np.array([value for part in results for value in part], dtype=float).reshape(shape)


def _check_formula_slice(formula: ScanFormula, grid: Grid):
    if formula is ScanFormula.G1 and grid.value_of("rho") != 0.0:
        raise ValueError("G1 is only defined on the rho = 0 slice: fix rho = 0")
    if formula is ScanFormula.G2 and grid.value_of("kappa") != 0.0:
        raise ValueError("G2 is only defined on the kappa = 0 slice: fix kappa = 0")


def evaluate_formula(formula: ScanFormula, grid: Grid, workers: int = 1) -> np.ndarray:
    _check_formula_slice(formula, grid)
    arrays = grid_arrays(grid)
    with np.errstate(all="ignore"):
        if formula is ScanFormula.G1:
            values = G1(arrays["beta"], arrays["alpha"], arrays["kappa"])
        elif formula is ScanFormula.G2:
            values = G2(arrays["beta"], arrays["alpha"], arrays["rho"])
        elif formula is ScanFormula.L1_CLOSED:
            values = l1_closed(arrays["beta"], arrays["alpha"], arrays["rho"], arrays["kappa"])
        else:
            values = l1_numeric_field(arrays, workers)
    return np.asarray(values, dtype=float)


def _interpolate(p0, p1, v0: float, v1: float) -> Tuple[float, float]:
    t = min(max(v0 / (v0 - v1), 0.0), 1.0)
    return (p0[0] * (1.0 - t) + t * p1[0], p0[1] * (1.0 - t) + t * p1[1])


def marching_squares(values: np.ndarray, first: np.ndarray, second: np.ndarray) -> List[List[Tuple[float, float]]]:
    """
    Zero contour of a 2D field sampled at (first[i], second[j]).

    Crossings are linearly interpolated on cell edges. Saddle cells are split
    by the sign of the cell mean. Cells with a non-finite corner emit nothing.
    Segments sharing an edge are chained into polylines, open ones first.
    """
    segments: List[Tuple[tuple, tuple]] = []
    points: Dict[tuple, Tuple[float, float]] = {}

    rows, columns = values.shape
    for i in range(rows - 1):
        for j in range(columns - 1):
            nodes = [(i + di, j + dj) for di, dj in CELL_CORNERS]
            corner_values = [values[node] for node in nodes]
            if not all(np.isfinite(corner_values)):
                continue
            positive = [value > 0.0 for value in corner_values]
            crossing = [k for k, (a, b) in enumerate(CELL_EDGES) if positive[a] != positive[b]]
            if len(crossing) == 2:
                pairs = [tuple(crossing)]
            elif len(crossing) == 4:
                center_positive = sum(corner_values) / 4.0 > 0.0
                pairs = [(0, 1), (2, 3)] if positive[0] == center_positive else [(3, 0), (1, 2)]
            else:
                continue

            for pair in pairs:
                keys = []
                for edge in pair:
                    a, b = CELL_EDGES[edge]
                    key = tuple(sorted((nodes[a], nodes[b])))
                    if key not in points:
                        points[key] = _interpolate(
                            (first[nodes[a][0]], second[nodes[a][1]]),
                            (first[nodes[b][0]], second[nodes[b][1]]),
                            corner_values[a],
                            corner_values[b],
                        )
                    keys.append(key)
                segments.append((keys[0], keys[1]))

    adjacency = defaultdict(list)
    for index, (a, b) in enumerate(segments):
        adjacency[a].append(index)
        adjacency[b].append(index)
    used = [False] * len(segments)

    def walk(key) -> List[tuple]:
        path = [key]
        while True:
            following = next((s for s in adjacency[key] if not used[s]), None)
            if following is None:
                return path
            used[following] = True
            a, b = segments[following]
            key = b if a == key else a
            path.append(key)

    polylines = []
    for key in [key for key, owners in adjacency.items() if len(owners) == 1]:
        if not all(used[s] for s in adjacency[key]):
            polylines.append(walk(key))
    for index, (a, _) in enumerate(segments):
        if not used[index]:
            polylines.append(walk(a))
    return [[points[key] for key in path] for path in polylines]


def _slices(grid: Grid, values: np.ndarray):
    """(slice_id, 2D values) pairs; a 3-axis grid is cut along its last axis."""
    if len(grid.axes) == 2:
        yield 0, values
    else:
        for k in range(grid.axes[2].count):
            yield k, values[:, :, k]


def scan_formula(formula: ScanFormula, grid: Grid, workers: int = 1) -> SignMap:
    """
    Sign map and zero contour of a formula over a grid.

    G1 needs rho fixed at 0 and G2 needs kappa fixed at 0.
    """
    values = evaluate_formula(formula, grid, workers)
    finite = np.isfinite(values)
    signs = np.where(finite, np.sign(np.where(finite, values, 0.0)), 0).astype(int)
    masked = int(np.count_nonzero(~finite))
    if masked:
        configured_logger.warning(f"{masked} non-finite {formula.value} values masked in scan")

    first, second = grid.axes[0].values(), grid.axes[1].values()
    contours = []
    for slice_id, plane in _slices(grid, values):
        for polyline_id, polyline in enumerate(marching_squares(plane, first, second)):
            contours.append(ContourPolyline(slice_id=slice_id, polyline_id=polyline_id, points=polyline))

    configured_logger.info(
        f"scan {formula.value} over {'x'.join(map(str, grid.shape))}: "
        f"{int(np.sum(signs > 0))} positive, {int(np.sum(signs < 0))} negative, {len(contours)} polylines"
    )
    return SignMap(grid=grid, formula=formula, values=values, signs=signs, contours=contours)


def boundary_crossings(signmap: SignMap, axis: str, value: float, slice_id: int = 0) -> List[float]:
    """
    Zero crossings along the grid line axis = value, as coordinates of the
    other in-plane axis. The line must be a grid line up to half a step.
    """
    grid = signmap.grid
    in_plane = grid.axes[:2]
    names = [a.name for a in in_plane]
    if axis not in names:
        raise ValueError(f"{axis} is not an in-plane axis of this scan ({', '.join(names)})")
    position = names.index(axis)
    line_axis, other_axis = in_plane[position], in_plane[1 - position]
    index = int(round((value - line_axis.min) / line_axis.step))
    if not 0 <= index < line_axis.count or abs(line_axis.values()[index] - value) > 0.5 * line_axis.step:
        raise ValueError(f"{axis} = {value} is not on the grid")

    plane = dict(_slices(grid, signmap.values))[slice_id]
    line = plane[index, :] if position == 0 else plane[:, index]
    coordinates = other_axis.values()
    crossings = []
    for k in range(len(line) - 1):
        v0, v1 = line[k], line[k + 1]
        if np.isfinite(v0) and np.isfinite(v1) and (v0 > 0.0) != (v1 > 0.0):
            t = min(max(v0 / (v0 - v1), 0.0), 1.0)
            crossings.append(float(coordinates[k] * (1.0 - t) + coordinates[k + 1] * t))
    return crossings


def _random_points(grid: Grid, sample_count: int, seed: int) -> Dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    points = {axis.name: rng.uniform(axis.min, axis.max, sample_count) for axis in grid.axes}
    for name, value in grid.fixed.items():
        points[name] = np.full(sample_count, value)
    return points


def sign_constant(closed: np.ndarray, numeric: np.ndarray) -> Tuple[Optional[int], int]:
    """Majority sign of closed * numeric and the number of points that disagree with it."""
    usable = np.isfinite(closed) & np.isfinite(numeric) & (closed != 0.0) & (numeric != 0.0)
    products = np.sign(closed[usable]) * np.sign(numeric[usable])
    if products.size == 0:
        return None, 0
    constant = 1 if np.count_nonzero(products > 0) >= np.count_nonzero(products < 0) else -1
    return constant, int(np.count_nonzero(products != constant))


def oracle_cross_scan(grid: Grid, sample_count: int = 200, seed: int = 0, workers: int = 1) -> CrossScanReport:
    """
    Compare the closed forms with the projection engine.

    Random points (seeded) give the largest relative l1 discrepancy and the
    empirical sign constants s1 (G1, rho = 0) and s2 (G2, kappa = 0). The grid
    itself is used to count points where the closed-form sign and the
    numeric l1 sign differ.
    """
    points = _random_points(grid, sample_count, seed)
    numeric = l1_numeric_field(points, workers)
    with np.errstate(all="ignore"):
        closed = np.asarray(l1_closed(points["beta"], points["alpha"], points["rho"], points["kappa"]), dtype=float)
    usable = np.isfinite(numeric) & np.isfinite(closed)
    discrepancy = np.abs(closed[usable] - numeric[usable]) / np.maximum(np.abs(numeric[usable]), 1e-12)
    max_discrepancy = float(np.max(discrepancy)) if discrepancy.size else math.nan

    report = {"sample_count": sample_count, "max_relative_discrepancy": max_discrepancy}
    if grid.value_of("rho") == 0.0:
        report["s1"], report["s1_exceptions"] = sign_constant(
            np.asarray(G1(points["beta"], points["alpha"], points["kappa"])), numeric
        )
    if grid.value_of("kappa") == 0.0:
        report["s2"], report["s2_exceptions"] = sign_constant(
            np.asarray(G2(points["beta"], points["alpha"], points["rho"])), numeric
        )

    if grid.value_of("rho") == 0.0:
        closed_formula = ScanFormula.G1
    elif grid.value_of("kappa") == 0.0:
        closed_formula = ScanFormula.G2
    else:
        closed_formula = ScanFormula.L1_CLOSED
    closed_grid = evaluate_formula(closed_formula, grid)
    numeric_grid = evaluate_formula(ScanFormula.L1_NUMERIC, grid, workers)
    comparable = np.isfinite(closed_grid) & np.isfinite(numeric_grid) & (closed_grid != 0.0) & (numeric_grid != 0.0)
    closed_sign = report.get("s1") if closed_formula is ScanFormula.G1 else report.get("s2")
    expected = np.sign(numeric_grid[comparable]) * (closed_sign or 1)
    disagreements = int(np.count_nonzero(np.sign(closed_grid[comparable]) != expected))

    agreement = {
        "l1_closed_matches_numeric": bool(max_discrepancy < 1e-6),
        "grid_signs_colocated": disagreements == 0,
    }
    if "s1" in report:
        agreement["s1_constant"] = report["s1_exceptions"] == 0
    if "s2" in report:
        agreement["s2_constant"] = report["s2_exceptions"] == 0

    configured_logger.info(
        f"cross scan: max discrepancy {max_discrepancy:.3e}, {disagreements} sign disagreements on the grid"
    )
    return CrossScanReport(
        **report,
        grid_sign_disagreements=disagreements,
        grid_points_compared=int(np.count_nonzero(comparable)),
        agreement=agreement,
    )


def values_frame(signmap: SignMap) -> pd.DataFrame:
    """One row per grid point, row-major, axis columns then value and sign."""
    arrays = grid_arrays(signmap.grid)
    columns = {axis.name: arrays[axis.name].ravel() for axis in signmap.grid.axes}
    columns[signmap.formula.value] = signmap.values.ravel()
    columns["sign"] = signmap.signs.ravel()
    return pd.DataFrame(columns)


def contours_frame(signmap: SignMap) -> pd.DataFrame:
    names: Sequence[str] = [axis.name for axis in signmap.grid.axes[:2]]
    rows = [
        (polyline.slice_id, polyline.polyline_id, point[0], point[1])
        for polyline in signmap.contours
        for point in polyline.points
    ]
    return pd.DataFrame(rows, columns=["slice_id", "polyline_id", *names])
