"""Command-line interface: ``doubletrine {mi,validate,optimize,protocol,export}``.

Exit codes: 0 success, 2 invalid input, 3 infeasible optimization,
4 internal invariant violation.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

import numpy as np

from . import adaptive, measurements
from .ensembles import double_trine, ensemble_from_dict, ensemble_to_dict, trine
from .errors import InvalidPovmError, ProtocolError
from .optimizer import PovmParameterization, maximize_mi
from .statistics import joint_to_csv, mutual_information, mutual_information_entropies, outcome_probabilities

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_INTERNAL = 0, 2, 3, 4

ENSEMBLES = {"double-trine": double_trine, "trine": trine}
MEASUREMENTS = {
    "entangled": measurements.entangled_basis_povm,
    "six": measurements.six_outcome_unentangled_povm,
    "nine": measurements.nine_outcome_product_povm,
    "trine-local": measurements.single_qubit_trine_povm,
}
FORMATS = ("table", "json", "csv")
OPTIMUM_BITS = 1.36907

log = logging.getLogger("doubletrine")


class InputError(Exception):
    """Bad user input; reported with exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    ensemble: str = "double-trine"
    measurement: str = "entangled"
    seed: int = 0
    restarts: int = 20
    iters: int = 2000
    output_format: str = "table"

    def __post_init__(self):
        for name, value, builtin in [
            ("ensemble", self.ensemble, ENSEMBLES),
            ("measurement", self.measurement, MEASUREMENTS),
        ]:
            if value not in builtin and not value.endswith(".json"):
                raise InputError(f"unknown {name} {value!r}; use one of {sorted(builtin)} or a .json file")
        if self.output_format not in FORMATS:
            raise InputError(f"unknown output format {self.output_format!r}")


def fmt(x):
    """Nine decimals, round-half-even."""
    d = Decimal(repr(float(x))).quantize(Decimal("1e-9"), rounding=ROUND_HALF_EVEN)
    return f"{d.copy_abs() if d.is_zero() else d:f}"


def dumps(doc):
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"JSON parse error in {path} at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}"
        ) from exc


def load_ensemble(name):
    if name in ENSEMBLES:
        return ENSEMBLES[name]()
    try:
        return ensemble_from_dict(read_json(name))
    except ValueError as exc:
        raise InputError(f"invalid ensemble: {exc}") from exc


def load_povm(name):
    if name in MEASUREMENTS:
        return MEASUREMENTS[name]()
    try:
        return measurements.povm_from_dict(read_json(name))
    except InvalidPovmError as exc:
        raise InputError(f"invalid POVM: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"invalid POVM document: {exc}") from exc


def write_or_print(text, path):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _table(jd, mi):
    cond = jd.conditional
    width = max(12, *(len(s) + 2 for s in jd.labels))
    lines = ["p(k|j)".ljust(8) + "".join(s.rjust(width) for s in jd.labels)]
    for j, row in enumerate(cond):
        lines.append(f"j={j}".ljust(8) + "".join(fmt(x).rjust(width) for x in row))
    lines.append(f"I = {fmt(mi)} bits")
    return "\n".join(lines) + "\n"


def cmd_mi(args):
    cfg = RunConfig("mi", args.ensemble, args.measurement, output_format=args.output_format)
    ens = load_ensemble(cfg.ensemble)
    povm = load_povm(cfg.measurement)
    if ens.dim != povm.dim:
        raise InputError(f"ensemble dimension {ens.dim} does not match POVM dimension {povm.dim}")
    jd = outcome_probabilities(ens, povm)
    mi = mutual_information(jd)
    if abs(mi - mutual_information_entropies(jd)) > 1e-10:
        log.error("mutual information formulas disagree")
        return EXIT_INTERNAL
    if cfg.output_format == "json":
        text = dumps({
            "ensemble": cfg.ensemble,
            "measurement": cfg.measurement,
            "labels": list(jd.labels),
            "joint": jd.p.tolist(),
            "conditional": jd.conditional.tolist(),
            "I_bits": mi,
        })
    elif cfg.output_format == "csv":
        text = joint_to_csv(jd)
    else:
        text = _table(jd, mi)
    write_or_print(text, args.output)
    return EXIT_OK


def cmd_validate(args):
    try:
        elements, labels = measurements.operators_from_dict(read_json(args.povm))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"invalid POVM document: {exc}") from exc
    rep = measurements.check_povm(elements)
    out = {
        "valid": rep.valid,
        "elements": len(elements),
        "min_eigenvalues": [float(x) for x in rep.min_eigenvalues],
        "completeness_defect": None if np.isnan(rep.defect_norm) else rep.defect_norm,
        "problems": list(rep.problems),
        "classification": None,
    }
    if rep.valid and elements[0].shape[0] == 4:
        out["classification"] = measurements.classify_povm(measurements.make_povm(elements, labels)).value
    if args.output_format == "json":
        sys.stdout.write(dumps(out))
    else:
        print(f"elements: {out['elements']}")
        for lab, m in zip(labels, out["min_eigenvalues"]):
            print(f"  {lab}: min eigenvalue {fmt(m)}")
        if out["completeness_defect"] is not None:
            print(f"completeness defect ||sum - I||_F = {out['completeness_defect']:.3e}")
        for p in out["problems"]:
            print(f"INVALID: {p}")
        print("valid" if rep.valid else "invalid")
        if out["classification"]:
            print(f"classification: {out['classification']}")
    return EXIT_OK if rep.valid else EXIT_INPUT


def cmd_optimize(args):
    if args.M < 1 or args.restarts < 1 or args.iters < 1:
        raise InputError("M, restarts and iters must be positive")
    ens = load_ensemble(args.ensemble)
    res = maximize_mi(
        ens, PovmParameterization(args.mode, args.M), restarts=args.restarts,
        iters=args.iters, seed=args.seed, workers=args.workers,
    )
    if not res.feasible:
        print("no feasible POVM found", file=sys.stderr)
        return EXIT_INFEASIBLE
    if res.mi > np.log2(len(ens)) + 1e-9:
        log.error("optimum %r exceeds log2(#states)", res.mi)
        return EXIT_INTERNAL
    doc = res.to_dict()
    if args.output:
        Path(args.output).write_text(dumps(measurements.povm_to_dict(res.povm)), encoding="utf-8")
    if args.output_format == "json":
        sys.stdout.write(dumps(doc))
    else:
        print(f"mode={res.mode} M={res.M} I = {fmt(res.mi)} bits")
        print(f"classification: {res.classification.value}")
    return EXIT_OK


def cmd_protocol(args):
    ens = load_ensemble(args.ensemble)
    try:
        root = adaptive.protocol_from_dict(read_json(args.protocol))
        jd = adaptive.run_protocol(ens, root, max_depth=args.max_depth)
    except (ProtocolError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"invalid protocol: {exc}") from exc
    mi = mutual_information(jd)
    if args.output_format == "json":
        sys.stdout.write(dumps({"labels": list(jd.labels), "joint": jd.p.tolist(), "I_bits": mi}))
    elif args.output_format == "csv":
        sys.stdout.write(joint_to_csv(jd))
    else:
        sys.stdout.write(_table(jd, mi))
        rel = "<" if mi < OPTIMUM_BITS else ">="
        print(f"comparison: I = {fmt(mi)} {rel} {OPTIMUM_BITS} (best known global measurement)")
    return EXIT_OK


def _builtin_protocol(name, args):
    trine_povm = measurements.single_qubit_trine_povm().elements
    if name == "trivial":
        return "done"
    if name == "identity":
        return adaptive.ProtocolNode(adaptive.LocalInstrument(0, (np.eye(2),)), ("done",))
    if name == "trine-both":
        return adaptive.one_way_protocol(trine_povm, [trine_povm] * 3)
    if name == "one-way":
        ens = load_ensemble(args.ensemble)
        proto, mi = adaptive.optimize_one_way(ens, 3, 3, budget=args.iters, seed=args.seed,
                                              restarts=args.restarts)
        log.info("one-way protocol I = %s", fmt(mi))
        return proto
    raise InputError(f"unknown protocol {name!r}")


def cmd_export(args):
    if args.kind == "ensemble":
        doc = ensemble_to_dict(load_ensemble(args.name))
    elif args.kind == "measurement":
        if args.name == "six" and (args.theta is not None or args.alpha is not None):
            theta = np.pi / 4 if args.theta is None else args.theta
            alpha = 2 / 3 if args.alpha is None else args.alpha
            elems = measurements.six_outcome_elements(theta, alpha)
            doc = {
                "dim": 4,
                "elements": [measurements.operator_to_json(e) for e in elems],
                "labels": [f"E{j}" for j in range(3)] + [f"F{j}" for j in range(3)],
            }
        elif args.name in MEASUREMENTS:
            doc = measurements.povm_to_dict(MEASUREMENTS[args.name]())
        else:
            raise InputError(f"unknown measurement {args.name!r}")
    else:
        doc = adaptive.protocol_to_dict(_builtin_protocol(args.name, args))
    write_or_print(dumps(doc), args.output)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="doubletrine", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, ensemble=True):
        if ensemble:
            sp.add_argument("--ensemble", default="double-trine",
                            help="double-trine, trine, or an ensemble JSON file")
        sp.add_argument("--output-format", choices=FORMATS, default="table")

    sp = sub.add_parser("mi", help="outcome probabilities and mutual information")
    common(sp)
    sp.add_argument("--measurement", default="entangled",
                    help="entangled, six, nine, trine-local, or a POVM JSON file")
    sp.add_argument("--output", help="write the report here instead of stdout")
    sp.set_defaults(func=cmd_mi)

    sp = sub.add_parser("validate", help="check positivity/completeness and classify a POVM file")
    sp.add_argument("povm")
    common(sp, ensemble=False)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("optimize", help="numerically maximize mutual information over POVMs")
    common(sp)
    sp.add_argument("--mode", choices=("global", "product"), default="global")
    sp.add_argument("-M", type=int, default=4, help="number of outcomes")
    sp.add_argument("--restarts", type=int, default=20)
    sp.add_argument("--iters", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--output", help="write the best POVM as JSON here")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("protocol", help="evaluate a local adaptive protocol JSON file exactly")
    sp.add_argument("protocol")
    common(sp)
    sp.add_argument("--max-depth", type=int, default=adaptive.MAX_DEPTH)
    sp.set_defaults(func=cmd_protocol)

    sp = sub.add_parser("export", help="write built-in ensembles, measurements or protocols as JSON")
    sp.add_argument("kind", choices=("ensemble", "measurement", "protocol"))
    sp.add_argument("name", help="built-in name (protocols: trivial, identity, trine-both, one-way)")
    sp.add_argument("--ensemble", default="double-trine")
    sp.add_argument("--theta", type=float, help="rotation angle for 'six' (radians)")
    sp.add_argument("--alpha", type=float, help="element weight for 'six'")
    sp.add_argument("--restarts", type=int, default=4)
    sp.add_argument("--iters", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
