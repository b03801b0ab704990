"""Main entry point for the billiard beta-function toolkit."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src import config
from src.exceptions import BilliardError, DomainError, UsageError
from src.models.caustic import FamilyPoint
from src.models.domain import Ellipse
from src.models.family import FamilySpec
from src.models.rotation import ClassifyParams
from src.models.tolerance import Tolerance
from src.services.classify import classify_rotation
from src.services.domain_loader import DomainLoader
from src.services.elliptic import EllipticBilliard, beta_derivative, caustic_warnings
from src.services.rigidity import CAUSTIC, VARIATIONAL, RigiditySolver
from src.services.variational import OrbitMaximizer
from src.utils.output import dump_json, write_csv
from src.utils.rational import as_pair, parse_rotation

logger = logging.getLogger(__name__)


def setup_logging(verbose: bool = False, log_file: Optional[str] = None) -> None:
    """Set up logging configuration; results own stdout, logs go to stderr."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _axes(text: str) -> tuple:
    """'a,b' as a pair of floats."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'a,b', got '{text}'")
    return float(parts[0]), float(parts[1])


def _tolerance(text: str) -> Tolerance:
    return Tolerance(rel=float(text))


def _ellipse(args) -> Ellipse:
    return Ellipse.from_axes(*args.ellipse)


def _require(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs {', '.join(missing)}")


# Subcommands

def cmd_beta(args, tol: Tolerance):
    domain = DomainLoader().load(args.domain)
    method = args.method or (CAUSTIC if isinstance(domain, Ellipse) else VARIATIONAL)
    warnings: List[str] = []
    if method == CAUSTIC:
        if not isinstance(domain, Ellipse):
            raise DomainError("the caustic method needs an ellipse")
        warnings = caustic_warnings(float(args.rho))
        value = EllipticBilliard(domain, tol).beta_caustic(args.rho)
    else:
        pair = as_pair(args.rho)
        if pair is None:
            raise DomainError(f"the variational method needs a rational rho with "
                              f"denominator <= {config.ORBIT_MAX_Q}, got {args.rho}")
        value = OrbitMaximizer(domain).beta_rational(*pair)
    return {"beta": value, "method": method, "rho": float(args.rho), "warnings": warnings}


def cmd_rotation(args, tol: Tolerance):
    return {"rho": EllipticBilliard(_ellipse(args), tol).rotation_number(args.lambda_)}


def cmd_caustic(args, tol: Tolerance):
    billiard = EllipticBilliard(_ellipse(args), tol)
    lam = billiard.lambda_for_rotation(args.rho)
    return {"lambda": lam, "J": billiard.joachimsthal(lam), "k2": billiard.k2(lam)}


def cmd_scan(args, tol: Tolerance):
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    grid = np.linspace(args.emin, args.emax, args.steps)
    if args.mode == "isobeta":
        _require(args, "rho0", "beta0")
        spec = FamilySpec.iso_beta(float(args.rho0), args.beta0, grid)
    else:
        _require(args, "perimeter")
        spec = FamilySpec.const_perimeter(args.perimeter, grid)

    result = RigiditySolver(tol).scan_family(spec, float(args.probe))
    write_csv(result.to_frame(), sys.stdout)
    dump_json(result.verdict, sys.stderr)
    return None


def cmd_recover(args, tol: Tolerance):
    solver = RigiditySolver(tol)
    if args.perimeter is not None:
        _require(args, "rho", "beta")
        result = solver.recover_value_perimeter(float(args.rho), args.beta, args.perimeter)
    else:
        _require(args, "rho0", "beta0", "rho1", "beta1")
        result = solver.recover_two_values(float(args.rho0), args.beta0,
                                           float(args.rho1), args.beta1)
    return {"a": result.ellipse.a, "b": result.ellipse.b, "e": result.e,
            "residuals": result.residuals}


def cmd_bbs(args, tol: Tolerance):
    domain = DomainLoader().load(args.domain)
    method = args.method or (CAUSTIC if isinstance(domain, Ellipse) else VARIATIONAL)
    return RigiditySolver(tol).bbs_slack(domain, args.rho, method)


def cmd_derivative(args, tol: Tolerance):
    (a, da), (b, db) = sorted(zip(args.ellipse, (args.da, args.db)), reverse=True)
    rho = float(args.rho)
    result = beta_derivative(FamilyPoint(a, b, da, db), rho, tol)

    # beta is unchanged when the axes swap, so a step past the disk is still valid
    step = config.FD_STEP
    plus = EllipticBilliard(Ellipse.from_axes(a + step * da, b + step * db), tol).beta_caustic(rho)
    minus = EllipticBilliard(Ellipse.from_axes(a - step * da, b - step * db), tol).beta_caustic(rho)
    fd = (plus - minus) / (2.0 * step)
    return {
        "dbeta": result.dbeta,
        "raw_integral": result.raw_integral,
        "constant": result.constant,
        "fd_check": {"value": fd, "step": step,
                     "rel_diff": abs(result.dbeta - fd) / max(abs(fd), np.finfo(float).tiny)},
    }


def cmd_classify(args, tol: Tolerance):
    params = ClassifyParams(nu=args.nu, sigma=args.sigma, N=args.N, n_max=args.nmax,
                            angle_convention=not args.literal_gutkin)
    return classify_rotation(args.rho, params)


def cmd_diagnose(args, tol: Tolerance):
    return EllipticBilliard(_ellipse(args), tol).curve_diagnostics(float(args.rho))


COMMANDS: Dict[str, Callable] = {
    "beta": cmd_beta,
    "rotation": cmd_rotation,
    "caustic": cmd_caustic,
    "scan": cmd_scan,
    "recover": cmd_recover,
    "bbs": cmd_bbs,
    "derivative": cmd_derivative,
    "classify": cmd_classify,
    "diagnose": cmd_diagnose,
}


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="compute_beta",
                            description="Mather's beta function of convex billiards")
    parser.add_argument("--tol", type=_tolerance, default=None,
                        help="relative tolerance for quadrature and root finding")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress (INFO)")
    parser.add_argument("--log-file", default=None, help="also write the log to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("beta", help="beta(rho) of a domain file")
    p.add_argument("--domain", required=True)
    p.add_argument("--rho", required=True, type=parse_rotation)
    p.add_argument("--method", choices=[CAUSTIC, VARIATIONAL])

    p = sub.add_parser("rotation", help="rotation number of a caustic")
    p.add_argument("--ellipse", required=True, type=_axes)
    p.add_argument("--lambda", dest="lambda_", required=True, type=float)

    p = sub.add_parser("caustic", help="caustic parameter for a rotation number")
    p.add_argument("--ellipse", required=True, type=_axes)
    p.add_argument("--rho", required=True, type=parse_rotation)

    p = sub.add_parser("scan", help="beta at a probe along an ellipse family (CSV)")
    p.add_argument("--mode", required=True, choices=["isobeta", "perimeter"])
    p.add_argument("--rho0", type=parse_rotation)
    p.add_argument("--beta0", type=float)
    p.add_argument("--perimeter", type=float)
    p.add_argument("--probe", required=True, type=parse_rotation)
    p.add_argument("--emin", type=float, default=0.0)
    p.add_argument("--emax", type=float, default=0.9)
    p.add_argument("--steps", type=int, default=10)

    p = sub.add_parser("recover", help="ellipse from two beta values or beta and perimeter")
    for name in ("rho0", "rho1", "rho"):
        p.add_argument(f"--{name}", type=parse_rotation)
    for name in ("beta0", "beta1", "beta", "perimeter"):
        p.add_argument(f"--{name}", type=float)

    p = sub.add_parser("bbs", help="slack in the disk comparison inequality")
    p.add_argument("--domain", required=True)
    p.add_argument("--rho", required=True, type=parse_rotation)
    p.add_argument("--method", choices=[CAUSTIC, VARIATIONAL])

    p = sub.add_parser("derivative", help="first variation of beta with a finite-difference check")
    p.add_argument("--ellipse", required=True, type=_axes)
    p.add_argument("--da", required=True, type=float)
    p.add_argument("--db", required=True, type=float)
    p.add_argument("--rho", required=True, type=parse_rotation)

    p = sub.add_parser("classify", help="rational / Gutkin / Diophantine status of rho")
    p.add_argument("--rho", required=True, type=parse_rotation)
    p.add_argument("--nu", type=float, default=config.DIOPHANTINE_NU)
    p.add_argument("--sigma", type=float, default=config.DIOPHANTINE_SIGMA)
    p.add_argument("--nmax", type=int, default=config.GUTKIN_N_MAX)
    p.add_argument("--N", type=int, default=config.DIOPHANTINE_N)
    p.add_argument("--literal-gutkin", action="store_true",
                   help="compare Gutkin roots against rho itself instead of pi*rho")

    p = sub.add_parser("diagnose", help="invariant curve diagnostics of an ellipse")
    p.add_argument("--ellipse", required=True, type=_axes)
    p.add_argument("--rho", required=True, type=parse_rotation)
    return parser


def run(argv: Sequence[str]) -> int:
    """Run one subcommand; returns the exit code."""
    try:
        args = build_parser().parse_args(list(argv))
        setup_logging(args.verbose, args.log_file)
        payload = COMMANDS[args.command](args, args.tol or config.DEFAULT_TOLERANCE)
    except BilliardError as e:
        logger.debug(f"{type(e).__name__}: {e}")
        dump_json(e.to_dict(), sys.stdout)
        return e.exit_code

    if payload is not None:
        dump_json(payload, sys.stdout)
    return 0


def main():
    """Main function for the command line."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
