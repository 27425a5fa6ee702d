"""Angle-preserving projections and block sparse classification for hyperspectral images.

Sample matrices are (features, samples): one spectrum per column. Cubes are
(rows, cols, bands) arrays and ground truth is a (rows, cols) integer array
with 0 for unlabeled pixels.
"""

import json

from ._core import (
    Error,
    Method,
    Projection,
    fit_ada,
    fit_lada,
    fit_lpp,
    fit_lspp,
    fit_slspp,
    gen_eig_desc,
    heat_kernel_affinity,
    least_squares,
    load_cube,
    load_ground_truth,
    median_heuristic_sigma,
    nn_cosine_classify,
    sbomp,
    sbomp_classify,
    selection_score,
    sym_eig_desc,
    synth_scene,
    write_cube,
)
from ._core import run_experiment as _run_experiment

__all__ = [
    "Error",
    "Method",
    "Projection",
    "error_code",
    "fit_ada",
    "fit_lada",
    "fit_lpp",
    "fit_lspp",
    "fit_slspp",
    "gen_eig_desc",
    "heat_kernel_affinity",
    "least_squares",
    "load_cube",
    "load_ground_truth",
    "median_heuristic_sigma",
    "nn_cosine_classify",
    "run_experiment",
    "sbomp",
    "sbomp_classify",
    "selection_score",
    "sym_eig_desc",
    "synth_scene",
    "write_cube",
]


def run_experiment(cube, gt, **kwargs):
    """Repeated random subsampling; returns the report as a dict."""
    return json.loads(_run_experiment(cube, gt, **kwargs))


def error_code(err):
    """The error code name carried by an hsiproj.Error."""
    return err.args[0]
