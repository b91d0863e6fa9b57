"""``rotsym`` command line: JSON on stdout, exit code 0 / 2 (input) / 3 (consistency)."""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from typing import Any, Sequence

import numpy as np

from .. import __version__
from ..angular import (
    FactorialCapError,
    HalfInt,
    clebsch_gordan,
    racah_w,
    wigner_3j,
    wigner_6j,
    wigner_6j_oracle,
)
from ..bipartite import (
    MethodDisagreement,
    SnapError,
    SpinPair,
    UnsupportedClosedForm,
    XMethod,
    snap_rational,
    x_matrix,
    x_matrix_all,
)
from ..multipartite import analyze, reduce, sigma_report
from ..multipartite.dense import multi_fidelities_float
from ..numlab import exact_twirl, invariance_residual, mc_twirl
from .encoding import (
    InputError,
    decimal,
    format_rational,
    load_document,
    parse_family,
    parse_pairs,
    parse_state,
    state_document,
)

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class ConsistencyError(RuntimeError):
    """Two independent computations disagree (exit code 3)."""


class _Parser(argparse.ArgumentParser):
    """Accepts ``-1/2`` as a positional value and reports errors as :class:`InputError`."""

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")

    def error(self, message: str):
        raise InputError(message)


def _spins(values: Sequence[str]) -> list[HalfInt]:
    out = []
    for v in values:
        try:
            out.append(HalfInt.parse(v))
        except ValueError as err:
            raise InputError(str(err)) from None
    return out


def _pair(ja: str, jb: str) -> SpinPair:
    a, b = _spins([ja, jb])
    try:
        return SpinPair(a, b)
    except ValueError as err:
        raise InputError(str(err)) from None


# --- wigner ---

WIGNER_ARITY = {"cg": 6, "3j": 6, "6j": 6, "6j-oracle": 6, "w": 6}


def cmd_wigner(args) -> dict:
    spins = _spins(args.args)
    if len(spins) != WIGNER_ARITY[args.kind]:
        raise InputError(f"{args.kind} takes {WIGNER_ARITY[args.kind]} arguments, got {len(spins)}")
    try:
        if args.kind == "6j-oracle":
            x = wigner_6j_oracle(*spins)
            return {"value": f"{x:.15g}", "decimal": decimal(x)}
        fn = {"cg": clebsch_gordan, "3j": wigner_3j, "6j": wigner_6j, "w": racah_w}[args.kind]
        value = fn(*spins)
    except FactorialCapError as err:
        raise InputError(str(err)) from None
    except ValueError as err:
        raise InputError(str(err)) from None
    return {"value": str(value), "decimal": decimal(float(value))}


# --- xmatrix ---

def _matrix_strings(X) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in X.entries]


def cmd_xmatrix(args) -> dict:
    pair = _pair(args.ja, args.jb)
    out: dict[str, Any] = {"pair": {"ja": str(pair.ja), "jb": str(pair.jb)}, "method": args.method}
    try:
        if args.method == "all":
            results = x_matrix_all(pair)
            X = results[XMethod.SIXJ]
            out["methods"] = [m.value for m in results]
            out["agree"] = True
        else:
            X = x_matrix(pair, args.method)
    except UnsupportedClosedForm as err:
        raise InputError(str(err)) from None
    except MethodDisagreement as err:
        raise ConsistencyError(
            f"{err}: {_matrix_strings(err.first)} vs {_matrix_strings(err.second)}"
        ) from None
    except SnapError as err:
        raise ConsistencyError(str(err)) from None
    out["J"] = [str(J) for J in pair.J_values]
    out["matrix"] = _matrix_strings(X)
    if args.check:
        out["checks"] = {
            "row_sums": all(s == 1 for s in X.row_sums()),
            "involution": X.is_involution(),
            "detailed_balance": X.satisfies_detailed_balance(),
        }
    return out


# --- classify / reduce ---

def cmd_classify(args) -> dict:
    s = parse_state(load_document(args.state))
    result = analyze(s)
    out: dict[str, Any] = {"verdict": result.verdict.value}
    if result.failing_mask is not None:
        out["failing_mask"] = str(result.failing_mask)
    out["theorem_applies"] = result.theorem_applies
    if args.sigma_report:
        out["ppt_vectors"] = {
            str(mask): [format_rational(v) for v in values]
            for mask, values in sigma_report(s).items()
        }
    return out


def cmd_reduce(args) -> dict:
    s = parse_state(load_document(args.state))
    try:
        return state_document(reduce(s, args.slot))
    except ValueError as err:
        raise InputError(str(err)) from None


# --- twirl ---

def _dense_matrix(doc: dict, dim: int) -> np.ndarray:
    raw = doc.get("matrix")
    try:
        rho = np.array(raw, dtype=float)
        if "matrix_imag" in doc:
            rho = rho + 1j * np.array(doc["matrix_imag"], dtype=float)
    except (TypeError, ValueError):
        raise InputError("\"matrix\" must be a square array of numbers") from None
    if rho.shape != (dim, dim):
        raise InputError(f"matrix of shape {rho.shape} does not match dimension {dim}")
    if not np.allclose(rho, rho.conj().T, atol=1e-10):
        raise InputError("matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > 1e-8:
        raise InputError(f"matrix has trace {np.trace(rho).real:.12g}, expected 1")
    return rho


def _snap_all(values: np.ndarray):
    snapped = [snap_rational(float(v)) for v in values]
    if all(q is not None for q in snapped) and sum(snapped) == 1 and min(snapped) >= 0:
        return snapped
    return None


def cmd_twirl(args) -> dict:
    doc = load_document(args.state)
    if not isinstance(doc, dict):
        raise InputError("state document must be a JSON object")
    pairs = parse_pairs(doc)
    family = parse_family(doc, len(pairs))
    dim = int(np.prod([p.dim for p in pairs]))
    rho = _dense_matrix(doc, dim)
    raw = np.real(multi_fidelities_float(rho, pairs, family))
    snapped = _snap_all(raw)
    out: dict[str, Any] = {"family": str(family)}
    if snapped is not None:
        out["exact"] = True
        out["fidelities"] = [format_rational(q) for q in snapped]
    elif args.exact:
        raise InputError("fidelities do not snap to exact rationals")
    else:
        out["exact"] = False
        out["fidelities"] = [decimal(v) for v in raw]
    if args.samples is not None:
        if args.seed is None:
            raise InputError("--seed is required with --samples")
        if args.samples < 1:
            raise InputError("--samples must be positive")
        estimate = mc_twirl(rho, pairs, family, n=args.samples, seed=args.seed)
        exact = exact_twirl(rho, pairs, family)
        mc_fid = np.real(multi_fidelities_float(estimate, pairs, family))
        out["mc"] = {
            "samples": args.samples,
            "seed": args.seed,
            "fidelities": [decimal(v) for v in mc_fid],
            "max_deviation": decimal(np.abs(estimate - exact).max()),
            "input_residual": decimal(invariance_residual(rho, pairs, family, m=16, seed=args.seed)),
        }
    return out


# --- entry point ---

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rotsym", description="Rotationally invariant spin states: exact tools.")
    parser.add_argument("--version", action="version", version=f"rotsym {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wigner", help="Clebsch-Gordan, 3-j, 6-j and Racah W values")
    p.add_argument("kind", choices=sorted(WIGNER_ARITY))
    p.add_argument("args", nargs="+", metavar="SPIN", help="half-integers such as 3/2 or -1/2")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("xmatrix", help="X matrix of a spin pair")
    p.add_argument("ja")
    p.add_argument("jb")
    p.add_argument("--method", choices=["trace", "sixj", "closed", "all"], default="sixj")
    p.add_argument("--check", action="store_true", help="report row sums, involution and detailed balance")
    p.set_defaults(func=cmd_xmatrix)

    p = sub.add_parser("classify", help="separability verdict for a state document")
    p.add_argument("state", help="inline JSON or path to a JSON file")
    p.add_argument("--sigma-report", action="store_true", help="transformed fidelities for every mask")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("twirl", help="exact (and optionally sampled) twirl of a dense matrix")
    p.add_argument("state", help="inline JSON or path: {pairs, family, matrix[, matrix_imag]}")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--exact", action="store_true", help="fail unless fidelities are exact rationals")
    p.set_defaults(func=cmd_twirl)

    p = sub.add_parser("reduce", help="trace out one pair of a state document")
    p.add_argument("state")
    p.add_argument("--slot", type=int, required=True, help="1-based pair index")
    p.set_defaults(func=cmd_reduce)
    return parser


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InputError as err:
        _emit({"error": str(err), "kind": "input"})
        return EXIT_INPUT
    if args.verbose:
        logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    try:
        _emit(args.func(args))
    except InputError as err:
        _emit({"error": str(err), "kind": "input"})
        return EXIT_INPUT
    except ConsistencyError as err:
        _emit({"error": str(err), "kind": "consistency"})
        return EXIT_INTERNAL
    return EXIT_OK
