"""Command-line front end: focal, rank, verify-hot, simulate, catalog, rigidity.

Exit codes: 0 success, 2 parse/validation error, 3 resource error, 4 not found / not verified.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .exact.rational import format_q, parse_q

EXIT_OK, EXIT_PARSE, EXIT_RESOURCE, EXIT_NOT_FOUND = 0, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class Loaded:
    system: object
    pert: object
    K: int | None
    label: str
    sample: dict | None
    seed: int | None


def _parse_sample(text: str | None):
    """'seed=7' or 'a1=1, b30=-2/3'."""
    if not text:
        return None, None
    items = [s.strip() for s in text.split(",") if s.strip()]
    if len(items) == 1 and items[0].startswith("seed="):
        return int(items[0][5:]), None
    values = {}
    for it in items:
        name, _, val = it.partition("=")
        if not val:
            raise UsageError(f"bad --sample item {it!r}")
        values[name.strip()] = parse_q(val.strip())
    return None, values


def _find_catalog_entry(path: str):
    from .system.catalog import catalog_dir, load_catalog, load_entry
    p = Path(path)
    if p.is_file():
        text = p.read_text(encoding="utf-8")
        if "condition" in text or "expected_rank" in text or "sample" in text:
            return load_entry(text, p)
        return None
    stem = p.stem if p.suffix == ".sys" else p.name
    cat = load_catalog()
    if stem in cat:
        return cat[stem]
    raise UsageError(f"no such file or catalog entry: {path}")


def load_input(path: str, sample_text: str | None = None) -> Loaded:
    from .system.model import build_system, parse_system, read_system_file
    seed, values = _parse_sample(sample_text)
    entry = _find_catalog_entry(path)
    if entry is None:
        text = Path(path).read_text(encoding="utf-8")
        sf = read_system_file(text)
        if sf.free_names():
            if values is None:
                raise UsageError(f"{path} has free coefficients; pass --sample name=value,...")
            system, pert = build_system(sf, values)
        else:
            system, pert = parse_system(text)
        return Loaded(system, pert, None, path, values, None)
    if values is not None:
        sample = entry.complete_sample(values)
    elif seed is not None:
        sample = entry.random_sample(seed)
    elif entry.free_names:
        rec = entry.recorded_sample()
        seed = None if rec is not None else 1
        sample = entry.rank_sample(1)
    else:
        sample = {}
    system = entry.instantiate(sample)
    return Loaded(system, entry.perturbation(), entry.K, entry.id, sample, seed)


def _emit(pairs, fmt: str, out) -> None:
    sep = " = " if fmt == "machine" else ": "
    for k, v in pairs:
        out.write(f"{k}{sep}{v}\n")


def _header(ld: Loaded, K: int, T: int) -> list:
    pairs = [("input", ld.label), ("K", str(K)), ("T", str(T))]
    if ld.seed is not None:
        pairs.append(("seed", str(ld.seed)))
    if ld.sample:
        pairs.append(("sample", ", ".join(f"{k} = {format_q(v)}" for k, v in sorted(ld.sample.items()))))
    return pairs


def _focal(ld: Loaded, K: int, T: int, args):
    from .focal import focal_coefficients
    return focal_coefficients(ld.system, ld.pert, K, T, convention=args.convention,
                              max_entries=args.max_entries)[0]


def cmd_focal(args, out) -> int:
    ld = load_input(args.input, args.sample)
    K = args.K or ld.K or 12
    F = _focal(ld, K, args.T, args)
    pairs = _header(ld, K, args.T) + [("convention", args.convention)]
    names = F.param_names
    for k in range(1, F.K + 1):
        for j in range(args.T + 1):
            pairs.append((f"L{k}^{j}", F.slice(k, j).to_str(names)))
    _emit(pairs, args.format, out)
    return EXIT_OK


def cmd_rank(args, out) -> int:
    from .cyclicity.rank import rank_certificate
    ld = load_input(args.input, args.sample)
    K = args.K or ld.K or 12
    F = _focal(ld, K, max(args.T, 1), args)
    cert = rank_certificate(F)
    pairs = _header(ld, K, max(args.T, 1)) + [kv for kv in cert.report() if kv[0] != "K"]
    pairs.append(("order_zero_vanishes", "true" if all(v == 0 for v in F.order_zero()) else "false"))
    _emit(pairs, args.format, out)
    return EXIT_OK


def cmd_verify_hot(args, out) -> int:
    from .cyclicity.line import read_eta_file, solve_line, verify_line
    from .cyclicity.rank import rank_certificate, reduce_to_quadratic_problem
    ld = load_input(args.input, args.sample)
    eta_text = Path(args.eta_file).read_text(encoding="utf-8") if args.eta_file else None
    K = args.K or ld.K or 12
    T = max(args.T, 2)
    F = _focal(ld, K, T, args)
    cert = rank_certificate(F)
    extra = args.extra if args.extra is not None else K - cert.rank
    problem = reduce_to_quadratic_problem(F, cert, extra)
    pairs = _header(ld, K, T) + [("rank", str(cert.rank)), ("extra", str(extra))]
    for i, h in zip(problem.indices, problem.h):
        pairs.append((f"form_{i}", h.to_str(problem.residual)))
    if eta_text is not None:
        eta, alpha = read_eta_file(eta_text, problem)
        ok, lc = verify_line(problem, eta, alpha)
        _emit(pairs + lc.report(), args.format, out)
        return EXIT_OK if ok else EXIT_NOT_FOUND
    if all(not h for h in problem.h):
        _emit(pairs + [("result", "NOT-FOUND"), ("reason", "all quadratic forms vanish")], args.format, out)
        return EXIT_NOT_FOUND
    if len(problem.h) != problem.nvars:
        raise UsageError(f"--extra {extra} gives {len(problem.h)} forms in {problem.nvars} residual "
                         f"parameters; the line search needs as many forms as parameters")
    res = solve_line(problem)
    _emit(pairs + res.report(), args.format, out)
    return EXIT_OK if getattr(res, "verified", False) else EXIT_NOT_FOUND


def _parse_values(text: str | None) -> dict:
    out = {}
    for item in (text or "").split(","):
        if item.strip():
            name, _, v = item.partition("=")
            out[name.strip()] = float(v)
    return out


def cmd_simulate(args, out) -> int:
    from .oracle import reduced_displacement, samples_to_csv
    ld = load_input(args.input, args.sample)
    values = _parse_values(args.set)
    rhos = [float(r) for r in (args.rho0 or "1e-3").split(",")]
    samples = [reduced_displacement(ld.system, ld.pert, values, r, lam0=args.lam0, tol=args.tol)
               for r in rhos]
    out.write(samples_to_csv(samples))
    return EXIT_OK


def cmd_catalog(args, out) -> int:
    from .system.catalog import load_catalog
    cat = load_catalog()
    if args.entry:
        e = cat.get(args.entry)
        if e is None:
            raise UsageError(f"no catalog entry {args.entry!r}")
        out.write(e.path.read_text(encoding="utf-8"))
        return EXIT_OK
    for e in cat.values():
        rank = "-" if e.expected_rank is None else str(e.expected_rank)
        if args.format == "machine":
            out.write(f"{e.id} = K {e.K}, expected_rank {rank}\n")
        else:
            out.write(f"{e.id:8s} K={e.K:<3d} rank={rank:<3s} {e.source}\n")
    return EXIT_OK


def cmd_rigidity(args, out) -> int:
    from .rigidity import is_rigid_cylindrical, is_rigid_on_cm, rigidity_on_cm_defect
    ld = load_input(args.input, args.sample)
    cyl = is_rigid_cylindrical(ld.system)
    pairs = [("input", ld.label), ("N", str(args.N)),
             ("cylindrically_rigid", "true" if cyl else "false"),
             ("rigid_on_center_manifold_through_N", "true" if is_rigid_on_cm(ld.system, args.N) else "false")]
    if not cyl:
        defect = rigidity_on_cm_defect(ld.system, args.N)
        pairs.append(("defect", defect.to_str(["x", "y"]) if defect else "0"))
    _emit(pairs, args.format, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hopfcyc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, K=True):
        p.add_argument("input", help="system file, catalog file, or catalog id")
        p.add_argument("--sample", help="seed=<n> or name=value,... for free coefficients")
        p.add_argument("--format", choices=("text", "machine"), default="text")
        p.add_argument("-o", dest="output", help="write to this file")
        if K:
            p.add_argument("-K", type=int, default=None, help="number of focal coefficients (default 12)")
            p.add_argument("-T", type=int, default=1, help="parameter jet order (default 1)")
            p.add_argument("--convention", choices=("monomial", "radial"), default="monomial")
            p.add_argument("--max-entries", type=int, default=None, help="memory budget in jet entries")

    p = sub.add_parser("focal", help="focal coefficients as jet slices")
    common(p)
    p.set_defaults(func=cmd_focal)
    p = sub.add_parser("rank", help="rank of the linear parts and the cyclicity bound")
    common(p)
    p.set_defaults(func=cmd_rank)
    p = sub.add_parser("verify-hot", help="higher-order line certificate")
    common(p)
    p.add_argument("--extra", type=int, default=None, help="number of quadratic forms l")
    p.add_argument("--eta-file", help="verify this certificate instead of searching")
    p.set_defaults(func=cmd_verify_hot)
    p = sub.add_parser("simulate", help="sampled reduced displacement (CSV)")
    common(p, K=False)
    p.add_argument("--rho0", help="comma-separated amplitudes (default 1e-3)")
    p.add_argument("--set", help="parameter values name=float,...")
    p.add_argument("--lam0", type=float, default=0.0, help="trace perturbation")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_simulate)
    p = sub.add_parser("catalog", help="list catalog entries")
    p.add_argument("entry", nargs="?")
    p.add_argument("--list", action="store_true", help="list entries (default)")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("-o", dest="output")
    p.set_defaults(func=cmd_catalog)
    p = sub.add_parser("rigidity", help="rigidity verdicts")
    common(p, K=False)
    p.add_argument("-N", type=int, default=8, help="center-manifold order (default 8)")
    p.set_defaults(func=cmd_rigidity)
    return ap


def main(argv=None) -> int:
    from .cyclicity.line import CertificateFormatError
    from .focal import FocalError, ResourceError
    from .system.catalog import CenterConditionError
    from .system.expr import SystemSyntaxError
    from .system.model import SystemValidationError

    args = build_parser().parse_args(argv)
    out = open(args.output, "w", encoding="utf-8") if getattr(args, "output", None) else sys.stdout
    try:
        return args.func(args, out)
    except (SystemSyntaxError, SystemValidationError, CenterConditionError, CertificateFormatError,
            UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ResourceError, MemoryError) as exc:
        last = getattr(exc, "last_completed", None)
        extra = f" (last completed L{last})" if last else " (no focal coefficient completed)"
        print(f"resource error: {exc}{extra}", file=sys.stderr)
        return EXIT_RESOURCE
    except FocalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
