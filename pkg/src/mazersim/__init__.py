"""mazersim: induced-emission probabilities for ultracold atoms crossing a
cavity mode, via exact transfer matrices on piecewise-linear potentials.

Typical use:

    >>> import mazersim as mz
    >>> p = mz.MazerParams.for_shape(mz.ModeShape.SECH2, 0.01, 10.0, 200)
    >>> mz.event_probabilities(p).P_em
    0.0237...

The heavy lifting lives in the submodules: extended-range arithmetic
(extrange), scaled special functions (specfun), per-segment solution bases
(segment_basis), potential discretization (grid), the transfer-matrix sweep
(transfer), branch combination (mazer), closed-form references (oracles),
and the CSV front end (cli).
"""

from .extrange import RangeFlag, XComplex, XReal
from .grid import (
    Grid,
    ModeProfile,
    ModeShape,
    build_grid,
    eval_mode,
    find_turning_points,
    load_tabulated,
)
from .mazer import (
    ConvergenceStudy,
    EventProbabilities,
    MazerParams,
    SweepRow,
    SweepTable,
    branch_amplitudes,
    convergence_study,
    elementary_amplitudes,
    event_probabilities,
    kappaL_range,
    sweep_kappaL,
)
from .oracles import (
    OracleResult,
    WkbPrediction,
    mesa_analytic,
    sech2_analytic,
    wkb_first_excited,
)
from .segment_basis import Regime, Segment, basis_eval, make_segment
from .transfer import (
    ScatterResult,
    TransferError,
    solve_scattering,
    wavefunction,
)

__version__ = "0.1.0"

__all__ = [
    "RangeFlag", "XComplex", "XReal",
    "Grid", "ModeProfile", "ModeShape",
    "build_grid", "eval_mode", "find_turning_points", "load_tabulated",
    "ConvergenceStudy", "EventProbabilities", "MazerParams",
    "SweepRow", "SweepTable",
    "branch_amplitudes", "convergence_study", "elementary_amplitudes",
    "event_probabilities", "kappaL_range", "sweep_kappaL",
    "OracleResult", "WkbPrediction",
    "mesa_analytic", "sech2_analytic", "wkb_first_excited",
    "Regime", "Segment", "basis_eval", "make_segment",
    "ScatterResult", "TransferError", "solve_scattering", "wavefunction",
    "__version__",
]
