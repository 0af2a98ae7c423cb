"""Command line front end of CPAkit.

Every command writes a CSV table (17 significant digits) to a file or to
the standard output, and maps failures to exit codes:

    0  success
    2  invalid arguments
    3  physical degeneracy (ZeroNorm, ZeroClickProbability)
    4  truncation overflow
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import numpy as np
import pandas as pd

from CPAkit.config import (
    DEFAULT_GAIN,
    DEFAULT_HERALD_EFFICIENCY,
    DEFAULT_PUMP_ANGLE,
    DEFAULT_TAIL_TOL,
    FOCK_DUMP_THRESHOLD,
    WIGNER_GRID_DEFAULTS,
    print_logger,
)
from CPAkit.config import global_logging_context as glc
from CPAkit.core_api import CutoffConfig, PureTwoModeState, reduced_density
from CPAkit.entanglement import log_negativity, negativity
from CPAkit.exceptions import (
    TruncationOverflow,
    ZeroClickProbability,
    ZeroNorm,
)
from CPAkit.experiment import HeraldConfig, heralded_addition, ideal_addition
from CPAkit.phase_space import homodyne_sample, wigner_grid
from CPAkit.states import (
    OpPipeline,
    coherent_add,
    coherent_subtract,
    run_pipeline,
    tmsv,
)
from CPAkit.utils.fock_utils import fidelity
from CPAkit.utils.formatting_utils import format_float, open_output, write_csv

if TYPE_CHECKING:
    from collections.abc import Sequence

    from CPAkit.config import FileName

EXIT_OK = 0
EXIT_INVALID_ARGUMENT = 2
EXIT_DEGENERATE = 3
EXIT_TRUNCATION = 4

AUTO_CUTOFF = "auto"
AUTO_HEADROOM = 2

StateKind = Literal["tmsv", "cpa", "cps"]
STATE_KINDS = ("tmsv", "cpa", "cps")
SWEEP_OPS = ("tmsv", "cpa", "cps", "cpa_then_cps", "cps_then_cpa")
SWEEP_COLUMNS = [
    "lambda",
    "mu_re",
    "mu_im",
    "neg_tmsv",
    "logneg_tmsv",
    "neg_cpa",
    "neg_cps",
    "neg_cpa_cps",
    "neg_cps_cpa",
    "weight_cpa",
    "weight_cps",
]
HERALD_COLUMNS = [
    "lambda",
    "phi",
    "gain",
    "eta",
    "click_prob",
    "negativity",
    "fidelity_vs_ideal",
]


def resolve_cutoff(
    cutoff: int | str,
    lam: float,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> CutoffConfig:
    """Return the CutoffConfig of a command.

    Parameters
    ----------
    cutoff: int | str
        An explicit n_max, or "auto" to size the cutoff on lam with
        2 levels of headroom.
    lam: float
        Squeezing of the input two-mode squeezed vacuum.
    tail_tol: float
        Tail tolerance of the cutoff.

    """
    if cutoff == AUTO_CUTOFF:
        return CutoffConfig.for_squeezing(lam, tail_tol, headroom=AUTO_HEADROOM)
    return CutoffConfig(int(cutoff), tail_tol=tail_tol)


@dataclass(frozen=True)
class SweepSpec:
    """Parameters of a negativity sweep over a regular lambda grid.

    Attributes
    ----------
    lambda_min, lambda_max: float
        Bounds of the grid, in [0, 1), both included.
    steps: int
        Number of grid points, at least 2.
    mu: complex
        Weight of mode 2 in the coherent operations.
    ops: frozenset[str]
        The states to evaluate, among tmsv, cpa, cps, cpa_then_cps and cps_then_cpa.
    cutoff: int | str
        An explicit n_max or "auto".
    tail_tol: float
        Tail tolerance of the cutoffs.

    """

    lambda_min: float
    lambda_max: float
    steps: int
    mu: complex = 1.0
    ops: frozenset[str] = frozenset(SWEEP_OPS)
    cutoff: int | str = AUTO_CUTOFF
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self) -> None:
        """Validate the grid and the requested operations."""
        for lam in (self.lambda_min, self.lambda_max):
            if not 0 <= lam < 1:
                message = f"lambda must lie in [0, 1), got {lam}."
                raise ValueError(message)
        if self.lambda_min > self.lambda_max:
            message = f"lambda_min={self.lambda_min} exceeds lambda_max={self.lambda_max}."
            raise ValueError(message)
        if int(self.steps) != self.steps or self.steps < 2:  # noqa: PLR2004
            message = f"A sweep needs at least 2 steps, got {self.steps}."
            raise ValueError(message)
        object.__setattr__(self, "ops", frozenset(self.ops))
        if not self.ops or self.ops - set(SWEEP_OPS):
            message = f"Sweep operations must be a non-empty subset of {SWEEP_OPS}, got {sorted(self.ops)}."
            raise ValueError(message)
        object.__setattr__(self, "mu", complex(self.mu))

    @property
    def lambdas(self) -> np.ndarray:
        """The lambda grid."""
        return np.linspace(self.lambda_min, self.lambda_max, self.steps)


def _sweep_row(spec: SweepSpec, lam: float) -> dict[str, float]:
    row = dict.fromkeys(SWEEP_COLUMNS, np.nan)
    row["lambda"] = lam
    row["mu_re"], row["mu_im"] = spec.mu.real, spec.mu.imag

    state = tmsv(lam, resolve_cutoff(spec.cutoff, lam, spec.tail_tol))
    if "tmsv" in spec.ops:
        row["neg_tmsv"] = negativity(state)
        row["logneg_tmsv"] = log_negativity(row["neg_tmsv"])

    runs = {
        "cpa": ("neg_cpa", "weight_cpa", lambda: coherent_add(state, spec.mu)),
        "cps": ("neg_cps", "weight_cps", lambda: coherent_subtract(state, spec.mu)),
        "cpa_then_cps": (
            "neg_cpa_cps",
            None,
            lambda: run_pipeline(state, OpPipeline.of("add", "subtract", mu=spec.mu)),
        ),
        "cps_then_cpa": (
            "neg_cps_cpa",
            None,
            lambda: run_pipeline(state, OpPipeline.of("subtract", "add", mu=spec.mu)),
        ),
    }
    for op, (negativity_column, weight_column, run) in runs.items():
        if op not in spec.ops:
            continue
        try:
            result, weight = run()
        except ZeroNorm as error:
            glc.logger.warning("lambda=%s, %s left empty: %s", lam, op, error)
            continue
        row[negativity_column] = negativity(result)
        if weight_column:
            row[weight_column] = weight
    return row


def cmd_sweep(spec: SweepSpec, out: FileName) -> int:
    """Tabulate the negativity of the requested states along the lambda grid.

    Columns of operations that were not requested are left empty, as are
    the entries of an operation that annihilates the state.

    Raises
    ------
    TruncationOverflow:
        If a state of the sweep does not fit in the cutoff.

    """
    frame = pd.DataFrame(
        [_sweep_row(spec, float(lam)) for lam in spec.lambdas],
        columns=SWEEP_COLUMNS,
    )
    with open_output(out) as stream:
        write_csv(frame, stream)
    print_logger.info("Sweep of %d lambda values written to %s.", len(frame), out)
    return EXIT_OK


def build_state(
    kind: StateKind,
    lam: float,
    mu: complex,
    cutoff: CutoffConfig,
) -> tuple[PureTwoModeState, float]:
    """Return the two-mode squeezed vacuum, or its coherently photon-added or subtracted version.

    The second element is the weight of the operation, 1 for the squeezed vacuum.
    """
    state = tmsv(lam, cutoff)
    if kind == "cpa":
        return coherent_add(state, mu)
    if kind == "cps":
        return coherent_subtract(state, mu)
    return state, 1.0


def cmd_state(
    *,
    kind: StateKind,
    lam: float,
    mu: complex,
    cutoff: CutoffConfig,
    out: FileName,
) -> int:
    """Dump the non-negligible amplitudes of a state, with a summary footer."""
    state, weight = build_state(kind, lam, mu, cutoff)
    m, n = np.nonzero(np.abs(state.amplitudes) > FOCK_DUMP_THRESHOLD)
    values = state.amplitudes[m, n]
    frame = pd.DataFrame({"m": m, "n": n, "re": values.real, "im": values.imag})
    footer = [
        ", ".join(
            (
                f"norm={format_float(np.linalg.norm(state.amplitudes))}",
                f"tail_mass={format_float(state.tail_mass)}",
                f"negativity={format_float(negativity(state))}",
                f"weight={format_float(weight)}",
            ),
        ),
    ]
    with open_output(out) as stream:
        write_csv(frame, stream, footer)
    return EXIT_OK


def cmd_wigner(  # noqa: PLR0913
    *,
    kind: StateKind,
    lam: float,
    mu: complex,
    mode: int,
    cutoff: CutoffConfig,
    grid: dict,
    out: FileName,
) -> int:
    """Write the Wigner function of one mode of a state on a regular mesh."""
    state, _ = build_state(kind, lam, mu, cutoff)
    wigner = wigner_grid(reduced_density(state, mode), **grid)
    with open_output(out) as stream:
        wigner.to_csv(stream)
    print_logger.info(
        "Wigner grid of mode %s: minimum %s.",
        mode,
        format_float(wigner.values.min()),
    )
    return EXIT_OK


def cmd_herald(
    *,
    lam: float,
    cfg: HeraldConfig,
    cutoff: CutoffConfig,
    out: FileName,
) -> int:
    """Run the heralded addition on a squeezed vacuum and write a one-row summary.

    Raises
    ------
    ZeroClickProbability:
        If the detector never clicks.

    """
    state = tmsv(lam, cutoff)
    outcome = heralded_addition(state, cfg)
    frame = pd.DataFrame(
        [
            {
                "lambda": lam,
                "phi": cfg.pump_angle,
                "gain": cfg.gain,
                "eta": cfg.herald_efficiency,
                "click_prob": outcome.click_probability,
                "negativity": negativity(outcome.state),
                "fidelity_vs_ideal": fidelity(
                    ideal_addition(state, cfg.pump_angle),
                    outcome.state,
                ),
            },
        ],
        columns=HERALD_COLUMNS,
    )
    with open_output(out) as stream:
        write_csv(frame, stream)
    return EXIT_OK


def cmd_homodyne(  # noqa: PLR0913
    *,
    kind: StateKind,
    lam: float,
    mu: complex,
    mode: int,
    theta: float,
    count: int,
    seed: int,
    cutoff: CutoffConfig,
    out: FileName,
) -> int:
    """Write seeded homodyne outcomes of one mode of a state."""
    state, _ = build_state(kind, lam, mu, cutoff)
    samples = homodyne_sample(reduced_density(state, mode), theta, count, seed)
    with open_output(out) as stream:
        write_csv(pd.DataFrame({"x": samples}), stream)
    return EXIT_OK


def _cutoff_argument(value: str) -> int | str:
    if value == AUTO_CUTOFF:
        return value
    try:
        n_max = int(value)
    except ValueError:
        n_max = 0
    if n_max < 1:
        message = f"--cutoff must be a positive integer or 'auto', got {value!r}."
        raise argparse.ArgumentTypeError(message)
    return n_max


def _shared_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        "--cutoff",
        type=_cutoff_argument,
        default=AUTO_CUTOFF,
        help="Highest retained photon number per mode, or 'auto'. Default is auto.",
    )
    parser.add_argument(
        "--tail-tol",
        type=float,
        default=DEFAULT_TAIL_TOL,
        help=f"Largest probability allowed on the last Fock level. Default is {DEFAULT_TAIL_TOL}.",
    )
    parser.add_argument(
        "--out",
        "-o",
        default="-",
        help="Output CSV file, '-' for the standard output. Default is '-'.",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="Seed of the random generator of sampling commands. Default is 0.",
    )
    return parser


def _state_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        "--kind",
        choices=STATE_KINDS,
        default="tmsv",
        help="Squeezed vacuum, or its coherent photon-added or subtracted version. Default is tmsv.",
    )
    parser.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        default=0.0,
        help="Squeezing parameter lambda = tanh(r), in [0, 1). Default is 0.",
    )
    _add_mu_arguments(parser)
    return parser


def _add_mu_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--mu-re",
        type=float,
        default=1.0,
        help="Real part of the weight mu of mode 2. Default is 1.",
    )
    parser.add_argument(
        "--mu-im",
        type=float,
        default=0.0,
        help="Imaginary part of the weight mu of mode 2. Default is 0.",
    )


def _add_mode_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--mode",
        type=int,
        choices=(1, 2),
        default=1,
        help="The mode kept after tracing out the other one. Default is 1.",
    )


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser of the cpakit command."""
    parser = argparse.ArgumentParser(
        prog="cpakit",
        description="Coherent photon addition and subtraction on two-mode squeezed vacua.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    shared = _shared_parser()
    state = _state_parser()

    sweep = commands.add_parser(
        "sweep",
        parents=[shared],
        help="Negativity of the squeezed vacuum and its CPA/CPS versions along a lambda grid.",
    )
    sweep.add_argument("--lambda-min", type=float, default=0.0, help="Default is 0.")
    sweep.add_argument("--lambda-max", type=float, default=0.9, help="Default is 0.9.")
    sweep.add_argument("--steps", type=int, default=10, help="Default is 10.")
    sweep.add_argument(
        "--ops",
        nargs="+",
        choices=SWEEP_OPS,
        default=list(SWEEP_OPS),
        help="The states to evaluate. Default is all of them.",
    )
    _add_mu_arguments(sweep)
    sweep.set_defaults(handler=_run_sweep)

    state_command = commands.add_parser(
        "state",
        parents=[shared, state],
        help="Fock amplitudes of a state.",
    )
    state_command.set_defaults(handler=_run_state)

    wigner = commands.add_parser(
        "wigner",
        parents=[shared, state],
        help="Wigner function of one mode of a state.",
    )
    _add_mode_argument(wigner)
    for bound in ("x_min", "x_max", "p_min", "p_max"):
        wigner.add_argument(
            f"--{bound.replace('_', '-')}",
            type=float,
            default=WIGNER_GRID_DEFAULTS[bound],
            help=f"{'Lower' if bound.endswith('min') else 'Upper'} bound of the {bound[0]} grid. Default is {WIGNER_GRID_DEFAULTS[bound]}.",
        )
    for axis, bound in (("nx", "x"), ("np", "p")):
        wigner.add_argument(
            f"--{axis}",
            type=int,
            default=WIGNER_GRID_DEFAULTS[axis],
            help=f"Number of grid points along {bound}, at least 2. Default is {WIGNER_GRID_DEFAULTS[axis]}.",
        )
    wigner.set_defaults(handler=_run_wigner)

    herald = commands.add_parser(
        "herald",
        parents=[shared],
        help="Heralded photon addition on a squeezed vacuum.",
    )
    herald.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        default=0.0,
        help="Squeezing parameter of the input. Default is 0.",
    )
    herald.add_argument(
        "--phi",
        type=float,
        default=DEFAULT_PUMP_ANGLE,
        help="Polarization angle of the twin photons, in radians. Default is pi/4.",
    )
    herald.add_argument(
        "--gain",
        type=float,
        default=DEFAULT_GAIN,
        help=f"SPDC gain. Default is {DEFAULT_GAIN}.",
    )
    herald.add_argument(
        "--eta",
        type=float,
        default=DEFAULT_HERALD_EFFICIENCY,
        help=f"Herald detection efficiency. Default is {DEFAULT_HERALD_EFFICIENCY}.",
    )
    for mode in (1, 2):
        herald.add_argument(
            f"--loss{mode}",
            type=float,
            default=1.0,
            help=f"Transmission of signal mode {mode}. Default is 1.",
        )
    herald.set_defaults(handler=_run_herald)

    homodyne = commands.add_parser(
        "homodyne",
        parents=[shared, state],
        help="Homodyne samples of one mode of a state.",
    )
    _add_mode_argument(homodyne)
    homodyne.add_argument(
        "--theta",
        type=float,
        default=0.0,
        help="Local oscillator phase, in radians. Default is 0.",
    )
    homodyne.add_argument(
        "--count",
        type=int,
        default=1000,
        help="Number of samples. Default is 1000.",
    )
    homodyne.set_defaults(handler=_run_homodyne)

    return parser


def _run_sweep(args: argparse.Namespace) -> int:
    spec = SweepSpec(
        lambda_min=args.lambda_min,
        lambda_max=args.lambda_max,
        steps=args.steps,
        mu=complex(args.mu_re, args.mu_im),
        ops=frozenset(args.ops),
        cutoff=args.cutoff,
        tail_tol=args.tail_tol,
    )
    return cmd_sweep(spec, args.out)


def _run_state(args: argparse.Namespace) -> int:
    return cmd_state(
        kind=args.kind,
        lam=args.lam,
        mu=complex(args.mu_re, args.mu_im),
        cutoff=resolve_cutoff(args.cutoff, args.lam, args.tail_tol),
        out=args.out,
    )


def _run_wigner(args: argparse.Namespace) -> int:
    return cmd_wigner(
        kind=args.kind,
        lam=args.lam,
        mu=complex(args.mu_re, args.mu_im),
        mode=args.mode,
        cutoff=resolve_cutoff(args.cutoff, args.lam, args.tail_tol),
        grid={
            "x_min": args.x_min,
            "x_max": args.x_max,
            "p_min": args.p_min,
            "p_max": args.p_max,
            "nx": args.nx,
            "np_": args.np,
        },
        out=args.out,
    )


def _run_herald(args: argparse.Namespace) -> int:
    cfg = HeraldConfig(
        gain=args.gain,
        herald_efficiency=args.eta,
        pump_angle=args.phi,
        signal_loss=(args.loss1, args.loss2),
    )
    return cmd_herald(
        lam=args.lam,
        cfg=cfg,
        cutoff=resolve_cutoff(args.cutoff, args.lam, args.tail_tol),
        out=args.out,
    )


def _run_homodyne(args: argparse.Namespace) -> int:
    return cmd_homodyne(
        kind=args.kind,
        lam=args.lam,
        mu=complex(args.mu_re, args.mu_im),
        mode=args.mode,
        theta=args.theta,
        count=args.count,
        seed=args.seed,
        cutoff=resolve_cutoff(args.cutoff, args.lam, args.tail_tol),
        out=args.out,
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run the cpakit command and return its exit code.

    Argument parsing errors exit with code 2 through argparse.
    """
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ZeroNorm, ZeroClickProbability) as error:
        glc.logger.error("%s", error)  # noqa: TRY400
        return EXIT_DEGENERATE
    except TruncationOverflow as error:
        glc.logger.error("%s", error)  # noqa: TRY400
        return EXIT_TRUNCATION
    except ValueError as error:
        glc.logger.error("%s", error)  # noqa: TRY400
        return EXIT_INVALID_ARGUMENT


if __name__ == "__main__":
    sys.exit(main())
