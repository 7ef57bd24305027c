"""Command-line interface and the JSON algebra file format.

Exit codes: 0 computed (and any asserted property holds), 1 computed but an
asserted property fails, 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import scalars as sc
from .classify import classify, verify_isomorphism
from .construct import builtin, cayley_dickson
from .core import LEFT, RIGHT, Algebra, mult_operator, zero_divisor_kernels
from .errors import AlgebraError, DependentVectorsError, IsotropicVectorError, VerificationError
from .identities import check_all
from .quadratic import (adjoint_defect, extract_with_witness, form_property_checks, gram_schmidt,
                        riesz_and_adjoint)
from .results import element_to_json, to_jsonable
from .spectrum import one_sided_spectrum, open_question_probe, spectrum_complex, spectrum_real

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

FILE_KEYS = {"name", "dim", "scalar", "labels", "unit", "table", "metadata"}


class InputError(AlgebraError):
    """Malformed file or command-line value (exit 2)."""


# ------------------------------------------------------------------ file format

def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise InputError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _scalar(value, mode: str, where: str):
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise InputError(f"{where}: expected a scalar string, got {value!r}")
    if isinstance(value, float) and sc.is_exact(mode):
        raise InputError(f"{where}: exact modes take rationals as strings, got {value!r}")
    try:
        return sc.parse_scalar(str(value), mode)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{where}: {exc}") from None


def parse_algebra_file(text: str, tol: float | None = None) -> Algebra:
    """Validate and load an algebra file (canonical JSON)."""
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("top level must be an object")
    extra = set(data) - FILE_KEYS
    if extra:
        raise InputError(f"unknown keys {sorted(extra)}")
    for key in ("dim", "scalar", "table"):
        if key not in data:
            raise InputError(f"missing key {key!r}")
    dim, mode = data["dim"], data["scalar"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InputError("dim must be a positive integer")
    if mode not in sc.MODES:
        raise InputError(f"scalar must be one of {list(sc.MODES)}")
    if not isinstance(data["table"], list):
        raise InputError("table must be a list of {i, j, k, c} entries")
    T = sc.zeros((dim, dim, dim), mode)
    seen = set()
    for n, entry in enumerate(data["table"]):
        if not isinstance(entry, dict) or set(entry) != {"i", "j", "k", "c"}:
            raise InputError(f"table[{n}] must have exactly the keys i, j, k, c")
        idx = tuple(entry[key] for key in "ijk")
        if any(isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < dim for v in idx):
            raise InputError(f"table[{n}]: indices must be integers in [0, {dim})")
        if idx in seen:
            raise InputError(f"table[{n}]: duplicate entry {idx}")
        seen.add(idx)
        T[idx] = _scalar(entry["c"], mode, f"table[{n}].c")
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != dim
                               or not all(isinstance(s, str) for s in labels)):
        raise InputError("labels must be a list of dim strings")
    unit = data.get("unit")
    if unit is not None:
        if not isinstance(unit, list) or len(unit) != dim:
            raise InputError("unit must be a list of dim scalars")
        unit = [_scalar(v, mode, f"unit[{n}]") for n, v in enumerate(unit)]
        unit = sc.array(unit, mode) if sc.is_exact(mode) else np.array(unit, dtype=sc.dtype(mode))
    meta = data.get("metadata", {})
    if not isinstance(meta, dict) or not all(isinstance(v, str) for v in meta.values()):
        raise InputError("metadata must map keys to strings")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise InputError("name must be a string")
    return Algebra(T, mode, unit=unit, labels=labels, name=name, metadata=meta, tol=tol)


def algebra_to_dict(A: Algebra) -> dict:
    mask = sc.nonzero_mask(A.table, A.mode, 0.0)
    entries = [{"i": int(i), "j": int(j), "k": int(k), "c": sc.format_scalar(A.table[i, j, k])}
               for i, j, k in zip(*np.nonzero(mask))]
    out = {"name": A.name, "dim": A.dim, "scalar": A.mode, "table": entries,
           "labels": list(A.labels),
           "metadata": {str(k): v if isinstance(v, str) else
                        ",".join(str(x) for x in v) if isinstance(v, (list, tuple)) else str(v)
                        for k, v in A.metadata.items()}}
    if A.unit is not None:
        out["unit"] = [sc.format_scalar(v) for v in A.unit]
    return out


def serialize_algebra(A: Algebra) -> str:
    return json.dumps(algebra_to_dict(A), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_algebra(source: str, tol: float | None = None) -> Algebra:
    """A file path, or the name of a builtin algebra."""
    path = Path(source)
    if path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc}") from None
        return parse_algebra_file(text, tol)
    try:
        A = builtin(source)
    except ValueError:
        raise InputError(f"{source!r} is neither a file nor a builtin algebra") from None
    A.tol = tol
    return A


# ------------------------------------------------------------------ argument helpers

def _parse_vector(text: str, A: Algebra, what: str = "element") -> np.ndarray:
    parts = [p for p in text.split(",")]
    if len(parts) != A.dim:
        raise InputError(f"{what} needs {A.dim} comma-separated coordinates, got {len(parts)}")
    vals = [_scalar(p, A.mode, what) for p in parts]
    return sc.array(vals, A.mode) if A.exact else np.array(vals, dtype=sc.dtype(A.mode))


def _parse_matrix(text: str, A: Algebra, what: str) -> np.ndarray:
    rows = [_parse_vector(r, A, what) for r in text.split(";") if r.strip()]
    if len(rows) != A.dim:
        raise InputError(f"{what} needs {A.dim} rows separated by ';'")
    return np.array(rows, dtype=rows[0].dtype)


def _require(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise InputError(f"--{name.replace('_', '-')} is required for {args.command}")
    return value


def _asserted(results: dict, names, table: dict) -> list:
    failed = []
    for name in names or []:
        if name not in table:
            raise InputError(f"cannot assert {name!r}; choose from {sorted(table)}")
        if not table[name]:
            failed.append(name)
    if names:
        results["asserted"] = {n: ("Fails" if n in failed else "Holds") for n in names}
    return failed


# ------------------------------------------------------------------ commands

def cmd_check(args, A: Algebra):
    rep = check_all(A, max_degree=args.max_degree, seed=args.seed)
    res = rep.to_dict()
    table = {k: v["status"] == "Holds" for k, v in res.items() if isinstance(v, dict) and "status" in v}
    failed = _asserted(res, args.assert_, table)
    return res, EXIT_FAIL if failed else EXIT_OK


def cmd_qform(args, A: Algebra):
    Q, wit = extract_with_witness(A)
    if Q is None:
        res = {"quadratic": {"status": "Fails", "witness": [element_to_json(wit)]}}
        return res, EXIT_FAIL
    flags = form_property_checks(Q).to_dict()
    res = {"quadratic": {"status": "Holds"},
           "trace": element_to_json(Q.trace),
           "gram": to_jsonable(Q.gram),
           "flags": flags}
    table = {k: v["status"] == "Holds" for k, v in flags.items()}
    failed = _asserted(res, args.assert_, table)
    return res, EXIT_FAIL if failed else EXIT_OK


def cmd_classify(args, A: Algebra):
    out = classify(A)
    res = out.to_dict()
    table = {"division": out.is_division, out.verdict: True}
    if out.family:
        table[out.family] = True
    for name in args.assert_ or []:
        table.setdefault(name, False)
    failed = _asserted(res, args.assert_, table)
    return res, EXIT_FAIL if failed else EXIT_OK


def cmd_spectrum(args, A: Algebra):
    a = _parse_vector(_require(args, "element"), A)
    if args.side in (LEFT, RIGHT):
        res = one_sided_spectrum(A, a, args.side)
    elif sc.is_complex(A.mode):
        res = spectrum_complex(A, a)
    else:
        res = spectrum_real(A, a)
    return res.to_dict(), EXIT_OK


def cmd_cd(args, _A):
    levels_text = _require(args, "levels")
    mode = args.scalar
    levels = [_scalar(t, mode, "--levels") for t in levels_text.split(",") if t.strip()]
    if any(sc.is_zero(g, mode, 0.0) for g in levels):
        raise InputError("doubling parameters must be nonzero")
    A = cayley_dickson(levels, mode, args.name or "")
    A.metadata["levels"] = ",".join(sc.format_scalar(g) for g in levels)
    text = serialize_algebra(A)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    return {"algebra": algebra_to_dict(A), "output": args.output}, EXIT_OK, text


def _search_zero_divisor(A: Algebra):
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            for s in (1, -1):
                a = A.basis(i) + A.scalar(s) * A.basis(j)
                _, _, joint = zero_divisor_kernels(A, a)
                if joint:
                    return a, joint[0]
    return None


def cmd_zerodiv(args, A: Algebra):
    if args.element is not None:
        a = _parse_vector(args.element, A)
        left, right, joint = zero_divisor_kernels(A, a)
        res = {"element": element_to_json(a),
               "leftKernel": [element_to_json(v) for v in left],
               "rightKernel": [element_to_json(v) for v in right],
               "jointKernel": [element_to_json(v) for v in joint]}
        found = bool(left or right)
    else:
        hit = _search_zero_divisor(A)
        found = hit is not None
        res = {"search": "e_i +- e_j",
               "witness": [element_to_json(v) for v in hit] if hit else []}
    res["zeroDivisor"] = "Found" if found else "None"
    failed = _asserted(res, args.assert_, {"none": not found})
    return res, EXIT_FAIL if failed else EXIT_OK


def _quadratic(A: Algebra):
    Q, _ = extract_with_witness(A)
    if Q is None:
        raise InputError("the algebra is not quadratic")
    return Q


def cmd_gram_schmidt(args, A: Algebra):
    Q = _quadratic(A)
    text = _require(args, "vectors")
    vecs = [_parse_vector(t, A, "--vectors") for t in text.split(";") if t.strip()]
    try:
        out = gram_schmidt(Q, vecs, normalize_if_positive=args.normalize)
    except DependentVectorsError as exc:
        return {"status": "Fails", "error": "dependent", "relation": element_to_json(exc.relation)}, \
            EXIT_FAIL
    except IsotropicVectorError as exc:
        return {"status": "Fails", "error": "isotropic", "index": exc.index}, EXIT_FAIL
    return {"status": "Holds", "vectors": [element_to_json(v) for v in out]}, EXIT_OK


def cmd_adjoint(args, A: Algebra):
    Q = _quadratic(A)
    if args.operator is not None:
        T = _parse_matrix(args.operator, A, "--operator")
    elif args.element is not None:
        T = mult_operator(A, _parse_vector(args.element, A), args.side if args.side != "two" else LEFT)
    else:
        T = None
    phi = _parse_vector(args.functional, A, "--functional") if args.functional else None
    if T is None and phi is None:
        raise InputError("adjoint needs --operator, --element or --functional")
    riesz, adj = riesz_and_adjoint(Q, phi, T)
    res = {}
    code = EXIT_OK
    if riesz is not None:
        res["riesz"] = element_to_json(riesz)
        ok = A.is_zero(np.array([Q.form(A.basis(i), riesz) for i in range(A.dim)]) - phi)
        res["rieszCheck"] = "Holds" if ok else "Fails"
        code = code if ok else EXIT_FAIL
    if adj is not None:
        res["adjoint"] = to_jsonable(adj)
        D = adjoint_defect(Q, T, adj)
        ok = A.is_zero(D.ravel())
        res["adjointCheck"] = "Holds" if ok else "Fails"
        code = code if ok else EXIT_FAIL
    return res, code


def cmd_iso_verify(args, A: Algebra):
    B = load_algebra(_require(args, "target"), args.tol)
    M = _parse_matrix(_require(args, "map"), A, "--map")
    c = verify_isomorphism(A, B, M)
    return c.to_dict(), EXIT_OK if c.holds else EXIT_FAIL


def cmd_probe(args, A: Algebra):
    recs = open_question_probe(A, samples=args.samples, seed=args.seed, tol=args.tol or 1e-8)
    out = []
    for r in recs:
        out.append({"sample": r["sample"], "agree": r["agree"],
                    "a": element_to_json(r["a"]), "b": element_to_json(r["b"]),
                    "sigmaAB": [f"{z.real:.10g}{z.imag:+.10g}i" for z in r["sigma_ab"]],
                    "sigmaBA": [f"{z.real:.10g}{z.imag:+.10g}i" for z in r["sigma_ba"]]})
    return {"experimental": True, "samples": out,
            "allAgree": all(r["agree"] for r in recs)}, EXIT_OK


COMMANDS = {
    "check": cmd_check, "qform": cmd_qform, "classify": cmd_classify, "spectrum": cmd_spectrum,
    "cd": cmd_cd, "zerodiv": cmd_zerodiv, "gram-schmidt": cmd_gram_schmidt,
    "adjoint": cmd_adjoint, "iso-verify": cmd_iso_verify, "probe-open-question": cmd_probe,
}


# ------------------------------------------------------------------ driver

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None,
                        help="tolerance for real modes (overrides NONASSOC_TOL)")
    common.add_argument("--max-degree", type=int, default=4)
    common.add_argument("--element", default=None, help="comma-separated coordinates")
    common.add_argument("--levels", default=None, help="comma-separated doubling parameters")
    common.add_argument("--assert", dest="assert_", action="append", default=None,
                        metavar="PROPERTY")

    parser = argparse.ArgumentParser(prog="nonassoc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in ("check", "qform", "classify", "zerodiv", "probe-open-question"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("algebra", help="algebra file or builtin name")
        if name == "probe-open-question":
            p.add_argument("--samples", type=int, default=20)
    p = sub.add_parser("spectrum", parents=[common])
    p.add_argument("algebra")
    p.add_argument("--side", choices=["two", LEFT, RIGHT], default="two")
    p = sub.add_parser("cd", parents=[common])
    p.add_argument("--scalar", choices=[sc.RATIONAL, sc.REAL], default=sc.RATIONAL)
    p.add_argument("--name", default=None)
    p.add_argument("--output", "-o", default=None)
    p = sub.add_parser("gram-schmidt", parents=[common])
    p.add_argument("algebra")
    p.add_argument("--vectors", default=None, help="vectors separated by ';'")
    p.add_argument("--normalize", action="store_true")
    p = sub.add_parser("adjoint", parents=[common])
    p.add_argument("algebra")
    p.add_argument("--operator", default=None, help="matrix rows separated by ';'")
    p.add_argument("--functional", default=None)
    p.add_argument("--side", choices=["two", LEFT, RIGHT], default="two")
    p = sub.add_parser("iso-verify", parents=[common])
    p.add_argument("algebra", help="source algebra")
    p.add_argument("target", help="target algebra")
    p.add_argument("--map", default=None, help="matrix rows separated by ';' (columns: images)")
    return parser


def _digest(A: Algebra | None, args) -> str:
    h = hashlib.sha256()
    if A is not None:
        h.update(serialize_algebra(A).encode("utf-8"))
    if getattr(args, "target", None):
        try:
            h.update(serialize_algebra(load_algebra(args.target)).encode("utf-8"))
        except AlgebraError:
            pass
    return h.hexdigest()


def _human(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_human(v, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(f"{pad}{_inline(obj)}")
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


VALUE_FLAGS = ("--element", "--levels", "--vectors", "--map", "--operator", "--functional")


def _attach_values(argv: list) -> list:
    """``--levels -1,-1`` -> ``--levels=-1,-1`` so leading minus signs are not options."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv=None) -> tuple[int, str, str]:
    """Execute a command; returns ``(exit code, stdout text, stderr text)``."""
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_attach_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    A = None
    raw_text = None
    try:
        if args.tol is not None and not (args.tol > 0):
            raise InputError("--tol must be positive")
        if args.command != "cd":
            A = load_algebra(args.algebra, args.tol)
        out = COMMANDS[args.command](args, A)
        results, code = out[0], out[1]
        if len(out) > 2:
            raw_text = out[2]
    except VerificationError as exc:
        results, code = {"error": f"verification failed: {exc}"}, EXIT_FAIL
    except (AlgebraError, ValueError, ZeroDivisionError) as exc:
        results, code = {"error": str(exc)}, EXIT_INPUT
    if args.json:
        report = {"command": argv, "input_digest": _digest(A, args) if code != EXIT_INPUT else "",
                  "results": results, "exit_status": code}
        return code, json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n", ""
    if code == EXIT_INPUT:
        return code, "", f"nonassoc {args.command}: error: {results['error']}\n"
    if raw_text is not None and not args.output:
        return code, raw_text, ""
    return code, "\n".join([f"{args.command}: exit {code}"] + _human(results)) + "\n", ""


def main(argv=None) -> int:
    try:
        sys.stdout.reconfigure(encoding="utf-8", line_buffering=True)
    except AttributeError:
        pass
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
