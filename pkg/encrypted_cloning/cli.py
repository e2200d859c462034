import argparse
import logging
import sys

from encrypted_cloning.classifier import classify
from encrypted_cloning.coefficients import gamma_table
from encrypted_cloning.config import CHANNEL_TOL, DEFAULT_SAMPLES, DEFAULT_SEED
from encrypted_cloning.dense import BlochVector
from encrypted_cloning.oracle import (
    PATHS,
    channel_decompose,
    choose_path,
    observed_class,
    reduce_encoded,
    reduce_encoded_pauli,
    verify_all,
)
from encrypted_cloning.pauli import dense_to_sum
from encrypted_cloning.reports import (
    FORMATS,
    mismatch_summary,
    reduction_payload,
    render_classification,
    render_gamma,
    render_reduction,
    render_verification,
)
from encrypted_cloning.subsets import SubsetSpec, enumerate_subsets
from encrypted_cloning.version import __version__

PROG = "qec"
EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # argparse prints usage and exits; the caller reports a single line instead
    def error(self, message):
        raise UsageError(message)


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got '{text}'") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got '{text}'")
    return value


def _non_negative_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got '{text}'") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got '{text}'")
    return value


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got '{text}'") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got '{text}'")
    return value


def build_parser():
    parser = _ArgumentParser(
        prog=PROG,
        description="Simulate and verify qubit encrypted cloning.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log progress to stderr (-v info, -vv debug)",
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    classify_parser = commands.add_parser("classify", help="classify every subset of one family")
    classify_parser.add_argument("--n", type=_positive_int, required=True, help="number of pairs")
    classify_parser.add_argument(
        "--include-a",
        action="store_true",
        help="classify the sets {A} u C instead of storage sets",
    )
    classify_parser.add_argument("--format", choices=FORMATS, default="text")

    reduce_parser = commands.add_parser("reduce", help="reduced state of one subset")
    reduce_parser.add_argument("--n", type=_positive_int, required=True, help="number of pairs")
    reduce_parser.add_argument("--keep", required=True, help="subset such as A,S1,N2")
    reduce_parser.add_argument(
        "--input",
        default="0",
        help="Bloch vector x,y,z or one of 0, 1, plus, plus-i (default 0)",
    )
    reduce_parser.add_argument("--path", choices=PATHS, default="auto")
    reduce_parser.add_argument("--tol", type=_positive_float, default=CHANNEL_TOL)
    reduce_parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    reduce_parser.add_argument("--format", choices=FORMATS, default="text")

    gamma_parser = commands.add_parser("gamma", help="L-matrices and Gamma table for (n, q)")
    gamma_parser.add_argument("--n", type=_positive_int, required=True, help="number of pairs")
    gamma_parser.add_argument("--q", type=_non_negative_int, required=True, help="number of signals")
    gamma_parser.add_argument("--format", choices=FORMATS, default="text")

    verify_parser = commands.add_parser("verify", help="sweep every subset against the numerics")
    verify_parser.add_argument("--max-n", type=_positive_int, required=True, help="largest n to sweep")
    verify_parser.add_argument("--tol", type=_positive_float, default=CHANNEL_TOL)
    verify_parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify_parser.add_argument("--samples", type=_non_negative_int, default=DEFAULT_SAMPLES)
    verify_parser.add_argument("--path", choices=PATHS, default="auto")
    verify_parser.add_argument("--format", choices=FORMATS, default="text")
    verify_parser.add_argument("--out", help="write the report here instead of stdout")
    verify_parser.add_argument(
        "--timing",
        action="store_true",
        help="record the sweep duration (makes the report run-dependent)",
    )
    return parser


def run_classify(n, include_a=False, fmt="text"):
    records = [classify(subset) for subset in enumerate_subsets(n, include_a=include_a)]
    return render_classification(records, fmt), EXIT_OK


def run_reduce(n, keep, input_text="0", fmt="text", path="auto", tol=CHANNEL_TOL, seed=DEFAULT_SEED):
    subset = SubsetSpec.parse(keep, n)
    b = BlochVector.parse(input_text)
    chosen = choose_path(n, path)
    if chosen == "dense":
        state = dense_to_sum(reduce_encoded(n, b, subset, path=chosen))
    else:
        state = reduce_encoded_pauli(n, b, subset)
    decomposition = channel_decompose(n, subset, path=chosen, seed=seed, tol=tol)
    observed = observed_class(decomposition, tol)
    payload = reduction_payload(n, subset, b, chosen, state, decomposition, observed, tol)
    return render_reduction(payload, fmt), EXIT_OK


def run_gamma(n, q, fmt="text"):
    return render_gamma(gamma_table(n, q), fmt), EXIT_OK


def run_verify(n_max, tol=CHANNEL_TOL, seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES, fmt="text", out=None,
               path="auto", timing=False):
    report = verify_all(n_max, tol=tol, samples=samples, seed=seed, path=path, timing=timing)
    text = render_verification(report, fmt)
    if out is not None:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        text = ""
    if not report.passed:
        logger.error(mismatch_summary(report))
        return text, EXIT_MISMATCH
    return text, EXIT_OK


def _configure_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _dispatch(args):
    if args.command == "classify":
        return run_classify(args.n, include_a=args.include_a, fmt=args.format)
    if args.command == "reduce":
        return run_reduce(
            args.n,
            args.keep,
            input_text=args.input,
            fmt=args.format,
            path=args.path,
            tol=args.tol,
            seed=args.seed,
        )
    if args.command == "gamma":
        return run_gamma(args.n, args.q, fmt=args.format)
    return run_verify(
        args.max_n,
        tol=args.tol,
        seed=args.seed,
        samples=args.samples,
        fmt=args.format,
        out=args.out,
        path=args.path,
        timing=args.timing,
    )


def main(argv=None, stdout=None, stderr=None):
    """Runs the ``qec`` command line and returns its exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as error:
        print(f"{PROG}: error: {error}", file=stderr)
        return EXIT_USAGE
    _configure_logging(args.verbose)
    try:
        text, code = _dispatch(args)
    except (ValueError, OSError) as error:
        message = " ".join(str(error).split())
        print(f"{PROG}: error: {message}", file=stderr)
        return EXIT_USAGE
    stdout.write(text)
    if code == EXIT_MISMATCH:
        print(f"{PROG}: verification failed", file=stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
