"""Command line entry point: `sphk <verb> ...`.

Exit codes: 0 success, 1 a check failed, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import SphkError
from .harmonic import verify_harmonicity
from .rootsys import build_root_system

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Accept '2', '1.5+0.5i', '1.5+0.5j', '-i' and similar."""
    s = str(text).strip().replace(" ", "").replace("i", "j")
    if s.endswith("j") and s[:-1] in ("", "+", "-"):
        s = s[:-1] + "1j"
    try:
        return complex(s)
    except ValueError as exc:
        raise UsageError(f"cannot parse complex number {text!r}") from exc


def parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in str(text).replace(";", ",").split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def parse_grid(text: str) -> np.ndarray:
    """'rmin,rmax,n' for an even grid, or an explicit list with more than three entries."""
    vals = parse_floats(text)
    if len(vals) == 3 and vals[2] == int(vals[2]) and vals[2] >= 1 and vals[0] < vals[1]:
        return np.linspace(vals[0], vals[1], int(vals[2]))
    if not vals:
        raise UsageError("empty grid")
    return np.array(vals)


@dataclass
class RunConfig:
    algebra: str = "A1"
    z: complex = 2.0
    nu: int | None = None
    b: float | None = None
    grid: list = field(default_factory=list)
    tolerance: float | None = None
    radius: float | None = None
    fmt: str = "json"
    seed: int = 7
    threads: int | None = None

    def __post_init__(self):
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError("tolerance must be positive")

    def params(self) -> dict:
        out = {"algebra": self.algebra, "z_re": self.z.real, "z_im": self.z.imag}
        if self.nu is not None:
            out["nu"] = self.nu
        if self.b is not None:
            out["b"] = self.b
        if self.radius is not None:
            out["radius"] = self.radius
        return out


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o)}")


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([("%.17g" % x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _z_from(args) -> complex:
    if getattr(args, "re", None) is not None:
        return complex(args.re, args.im or 0.0)
    return parse_complex(args.z)


def _config(args) -> RunConfig:
    label = getattr(args, "algebra", None) or "A1"
    return RunConfig(
        algebra=build_root_system(label).label,
        z=_z_from(args) if hasattr(args, "z") else 2.0,
        nu=getattr(args, "nu", None),
        b=getattr(args, "b", None),
        tolerance=getattr(args, "tolerance", None),
        radius=getattr(args, "radius", None),
        fmt=getattr(args, "format", "json"),
        seed=getattr(args, "seed", 7),
        threads=getattr(args, "threads", None),
    )


def _report(name: str, params: dict, deviation: float, tolerance: float, paper_ref: str, **extra) -> tuple[str, int]:
    ok = bool(deviation <= tolerance) and all(extra.pop("_also", [True]))
    rep = {"name": name, "params": params, "deviation": deviation, "tolerance": tolerance, "pass": ok, "paper_ref": paper_ref}
    rep.update(extra)
    if not ok:
        rep["failing_invariant"] = name
    return _dump(rep), EXIT_OK if ok else EXIT_FAIL


# verbs


def cmd_roots(args):
    return build_root_system(args.algebra).to_json() + "\n", EXIT_OK


def cmd_harmonicity(args):
    rep = verify_harmonicity(build_root_system(args.algebra))
    ok = rep["laplacian_zero"] and rep["pair_sum_zero"] and all(g["sum_zero"] for g in rep["breakdown"])
    rep["paper_ref"] = "harmonicity of the positive-root product"
    if not ok:
        rep["failing_invariant"] = "harmonicity"
    return _dump(rep), EXIT_OK if ok else EXIT_FAIL


def cmd_bessel(args):
    from .specfun import bessel_k, k_integral_oracle

    z = _z_from(args)
    val = bessel_k(args.order, z)
    orc = k_integral_oracle(args.order, z)
    err = abs(val - orc) / abs(orc)
    if args.format == "csv":
        return _csv(["order", "z_re", "z_im", "re", "im", "oracle_re", "oracle_im", "rel_err"],
                    [[args.order, z.real, z.imag, val.real, val.imag, orc.real, orc.imag, err]]), EXIT_OK
    return _dump({"order": args.order, "z_re": z.real, "z_im": z.imag, "re": val.real, "im": val.imag,
                  "oracle_re": orc.real, "oracle_im": orc.imag, "rel_err": err}), EXIT_OK


def cmd_iz(args):
    from .specfun import I_z, I_z_oracle

    z = _z_from(args)
    x = parse_floats(args.x)
    if len(x) == 1:
        x = [x[0]] + [0.0] * (args.n - 1)
    if len(x) != args.n:
        raise UsageError(f"--x needs 1 or {args.n} entries")
    val = I_z(args.n, args.nu, x, z)
    orc = I_z_oracle(args.n, args.nu, x, z)
    err = abs(val - orc) / abs(orc)
    r = float(np.linalg.norm(x))
    if args.format == "csv":
        return _csv(["n", "nu", "x", "z_re", "z_im", "re", "im", "oracle_re", "oracle_im", "rel_err"],
                    [[args.n, args.nu, r, z.real, z.imag, val.real, val.imag, orc.real, orc.imag, err]]), EXIT_OK
    return _dump({"n": args.n, "nu": args.nu, "x": r, "z_re": z.real, "z_im": z.imag, "re": val.real, "im": val.imag,
                  "oracle_re": orc.real, "oracle_im": orc.imag, "rel_err": err}), EXIT_OK


def cmd_phi(args):
    from .spherical import zonal_spherical

    rs = build_root_system(args.algebra)
    xi = [parse_complex(v) for v in args.xi.split(",")]
    H = parse_floats(args.H)
    val = zonal_spherical(rs, np.array(xi), np.array(H))
    return _dump({"algebra": rs.label, "xi": [[v.real, v.imag] for v in xi], "H": H, "re": val.real, "im": val.imag}), EXIT_OK


def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_transform(args):
    from .spherical import KernelProfile, inverse_transform_rank1, spherical_transform_rank1

    rs = build_root_system(args.algebra)
    if rs.rank != 1:
        raise UsageError("transform is implemented for rank one")
    t = np.linspace(0.0, args.xi_max, args.n_xi)
    r = parse_grid(args.grid)
    if args.mode == "forward":
        prof = KernelProfile.from_csv(_read_text(args.input))
        F = spherical_transform_rank1(prof, t, rs)
        return KernelProfile(t, F).to_csv(), EXIT_OK
    if args.mode == "inverse":
        prof = KernelProfile.from_csv(_read_text(args.input))
        return inverse_transform_rank1(prof.values, prof.grid, r, rs).to_csv(), EXIT_OK
    width = args.width

    def f(x):
        return np.exp(-((np.asarray(x) / width) ** 2))

    F = spherical_transform_rank1(f, t, rs)
    back = inverse_transform_rank1(F, t, r, rs)
    err = float(np.max(np.abs(back.values - f(r))) / np.max(np.abs(f(r))))
    tol = args.tolerance or 1e-3
    return _report("transform-roundtrip", {"algebra": rs.label, "width": width, "xi_max": args.xi_max, "n_xi": args.n_xi},
                   err, tol, "spherical transform inversion")


def _ray_H(rs, r):
    from .kernels import ray_point

    return ray_point(rs, r)


def cmd_uz(args):
    from .kernels import KernelSpec, minimal_nu, u_z_closed, u_z_spectral
    from .spherical import KernelProfile

    cfg = _config(args)
    rs = build_root_system(cfg.algebra)
    spec = KernelSpec(rs, cfg.z, cfg.nu or minimal_nu(rs))
    grid = parse_grid(args.grid)
    fn = u_z_closed if args.method == "closed" else u_z_spectral
    vals = [fn(spec, _ray_H(rs, r)) for r in grid]
    return KernelProfile(grid, vals).to_csv(), EXIT_OK


def cmd_vz(args):
    from .kernels import KernelSpec, v_z_a1_closed, v_z_convolution, v_z_spectral
    from .spherical import KernelProfile

    cfg = _config(args)
    if cfg.b is None:
        raise UsageError("vz needs --b")
    rs = build_root_system(cfg.algebra)
    spec = KernelSpec(rs, cfg.z, cfg.nu or 1, cfg.b)
    grid = parse_grid(args.grid)
    if np.any(np.abs(grid - cfg.b) < 1e-12):
        raise UsageError("grid nodes may not sit exactly on r = b")
    if args.method == "spectral":
        vals = [v_z_spectral(spec, _ray_H(rs, r)) for r in grid]
    elif args.method == "closed":
        vals = [v_z_a1_closed(spec, r) for r in grid]
    else:
        vals = [v_z_convolution(spec, r) for r in grid]
    return KernelProfile(grid, vals).to_csv(), EXIT_OK


def cmd_check(args):
    from . import kernels as K

    cfg = _config(args)
    rs = build_root_system(cfg.algebra)
    grid = parse_grid(args.grid)
    params = cfg.params()
    if args.which == "oracle":
        spec = K.KernelSpec(rs, cfg.z, cfg.nu or K.minimal_nu(rs))
        params["nu"] = spec.nu
        errs = []
        for r in grid:
            H = _ray_H(rs, r)
            a, b = K.u_z_closed(spec, H), K.u_z_spectral(spec, H)
            errs.append(abs(a - b) / abs(b))
        dev = float(max(errs))
        return _report("oracle", params, dev, cfg.tolerance or 1e-4,
                       "fundamental solution: closed form vs spectral integral", max_rel_err=dev)
    if args.which == "hall-mitchell":
        spec = K.KernelSpec(rs, cfg.z, cfg.nu or K.minimal_nu(rs))
        rep = K.hall_mitchell_check(spec, grid)
        tol = cfg.tolerance or 1e-6
        return _report("hall-mitchell", params, rep.deviation, tol, "intertwining with the Euclidean fundamental solution",
                       z_variation=rep.z_variation, constant=rep.constant, _also=[rep.z_variation < 1e-5])
    if args.which == "weak":
        nu = cfg.nu or (1 if args.mode == "shell" else 2)
        spec = K.KernelSpec(rs, cfg.z, nu, cfg.b)
        dev = K.weak_solution_residual(spec, mode=args.mode)
        return _report(f"weak-{args.mode}", params | {"nu": nu}, dev, cfg.tolerance or 1e-3,
                       "weak form of the defining resolvent equations", c_cal=K.calibration_constant())
    if args.which == "resolvent":
        nu = cfg.nu or 2
        spec = K.KernelSpec(rs, cfg.z, nu, cfg.b)
        rep = K.resolvent_relation_check(spec, grid, args.kernel, homogeneous=args.homogeneous)
        return _report(f"resolvent-{args.kernel}", params | {"nu": nu}, rep.deviation, cfg.tolerance or 1e-4,
                       "resolvent relation between consecutive powers", observed_order=rep.observed_order,
                       raw_deviation=rep.raw_deviation)
    raise UsageError(f"unknown check {args.which}")


def cmd_lattice(args):
    from .lattice import enumerate_ball

    ball = enumerate_ball(args.radius, threads=args.threads)
    if args.mod_center:
        ball = ball.mod_center()
    if args.format == "json":
        return _dump({"radius": args.radius, "count": len(ball), "mod_center": args.mod_center}), EXIT_OK
    return ball.to_csv(), EXIT_OK


def _point(text: str | None) -> np.ndarray:
    if text is None:
        return np.eye(2, dtype=complex)
    v = parse_floats(text)
    if len(v) != 8:
        raise UsageError("--point takes 8 reals: re a, im a, re b, im b, re c, im c, re d, im d")
    return np.array([[complex(v[0], v[1]), complex(v[2], v[3])], [complex(v[4], v[5]), complex(v[6], v[7])]])


def cmd_poincare(args):
    from .kernels import KernelSpec
    from .poincare import PoincareConfig, poincare_partial_sum

    cfg = _config(args)
    rs = build_root_system("A1")
    kind = "shell" if args.kernel == "vz" else "fundamental"
    spec = KernelSpec(rs, cfg.z, cfg.nu or 2, cfg.b if kind == "shell" else None)
    mode = "mod_center" if args.mod_center else "full_gamma"
    g = _point(args.point)
    if args.sweep:
        radii = parse_floats(args.sweep)
        rows = []
        for R in radii:
            res = poincare_partial_sum(PoincareConfig(spec, kind, R, mode), g)
            rows.append([R, res.value.real, res.value.imag, res.tail_bound, res.n_terms])
        return _csv(["R", "value_re", "value_im", "tail_bound", "n_terms"], rows), EXIT_OK
    res = poincare_partial_sum(PoincareConfig(spec, kind, cfg.radius, mode), g)
    return _dump(res.to_dict() | {"params": cfg.params(), "center_mode": mode}), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphk", description="Spherical analysis kernels on complex symmetric spaces.")
    p.add_argument("--threads", type=int, default=None, help="cap on worker threads (also SPHK_THREADS)")
    p.add_argument("--output", default=None, help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, z=True, algebra=True):
        if algebra:
            sp.add_argument("--algebra", default="A1")
        if z:
            sp.add_argument("--z", default="2", help="complex, e.g. 2 or 1.5+0.5i")
            sp.add_argument("--re", type=float, default=None)
            sp.add_argument("--im", type=float, default=None)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--seed", type=int, default=7)
        sp.add_argument("--tolerance", type=float, default=None)

    sp = sub.add_parser("roots", help="root system data as JSON")
    common(sp, z=False)
    sp.set_defaults(func=cmd_roots)

    sp = sub.add_parser("harmonicity", help="exact harmonicity report")
    common(sp, z=False)
    sp.set_defaults(func=cmd_harmonicity)

    sp = sub.add_parser("bessel", help="K_order(z) with its integral oracle")
    common(sp, algebra=False)
    sp.add_argument("--order", required=True, help="integer or half-integer, e.g. 1 or 3/2")
    sp.set_defaults(func=cmd_bessel)

    sp = sub.add_parser("iz", help="I_z Fourier integral with its quadrature oracle")
    common(sp, algebra=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--nu", type=int, required=True)
    sp.add_argument("--x", required=True, help="|x| or all n coordinates")
    sp.set_defaults(func=cmd_iz)

    sp = sub.add_parser("phi", help="zonal spherical function phi_xi(H)")
    common(sp, z=False)
    sp.add_argument("--xi", required=True, help="comma list, complex entries allowed")
    sp.add_argument("--H", required=True, help="comma list in simple-root coordinates")
    sp.set_defaults(func=cmd_phi)

    sp = sub.add_parser("transform", help="rank-one spherical transform")
    common(sp, z=False)
    sp.add_argument("mode", choices=("forward", "inverse", "roundtrip"))
    sp.add_argument("--input", default=None, help="profile CSV (r, re, im); '-' or omitted reads stdin")
    sp.add_argument("--xi-max", type=float, default=40.0)
    sp.add_argument("--n-xi", type=int, default=801)
    sp.add_argument("--grid", default="0,3,61")
    sp.add_argument("--width", type=float, default=0.5, help="Gaussian width for roundtrip")
    sp.set_defaults(func=cmd_transform)

    for name, func, methods in (("uz", cmd_uz, ("closed", "spectral")), ("vz", cmd_vz, ("closed", "spectral", "convolution"))):
        sp = sub.add_parser(name, help=f"{name[0]}_z profile along the rho ray as CSV (r, re, im)")
        common(sp)
        sp.add_argument("--nu", type=int, default=None)
        sp.add_argument("--b", type=float, default=None)
        sp.add_argument("--grid", default="0.2,3,15", help="rmin,rmax,n or explicit list")
        sp.add_argument("--method", choices=methods, default="closed" if name == "uz" else "spectral")
        sp.set_defaults(func=func)

    sp = sub.add_parser("check", help="oracle checks with JSON reports")
    common(sp)
    sp.add_argument("which", choices=("hall-mitchell", "weak", "resolvent", "oracle"))
    sp.add_argument("--nu", type=int, default=None)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--grid", default="0.3,2.9,6")
    sp.add_argument("--mode", choices=("delta", "shell"), default="delta", help="weak check source")
    sp.add_argument("--kernel", choices=("u", "v", "sl2c"), default="u", help="resolvent check kernel")
    sp.add_argument("--homogeneous", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("lattice", help="SL2(Z[i]) ball enumeration")
    sp.add_argument("action", choices=("enumerate",))
    sp.add_argument("--radius", type=float, required=True)
    sp.add_argument("--mod-center", action="store_true")
    sp.add_argument("--format", choices=("json", "csv"), default="csv")
    sp.set_defaults(func=cmd_lattice)

    sp = sub.add_parser("poincare", help="truncated Poincare series")
    common(sp, algebra=False)
    sp.add_argument("--kernel", choices=("uz", "vz"), default="vz")
    sp.add_argument("--nu", type=int, default=None)
    sp.add_argument("--b", type=float, default=0.5)
    sp.add_argument("--radius", type=float, default=4.0)
    sp.add_argument("--point", default=None, help="8 reals: g = [[a, b], [c, d]]")
    sp.add_argument("--sweep", default=None, help="comma list of radii; emits CSV")
    sp.add_argument("--mod-center", action="store_true")
    sp.set_defaults(func=cmd_poincare)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.threads is not None:
        if args.threads < 1:
            print("sphk: --threads must be positive", file=sys.stderr)
            return EXIT_USAGE
        os.environ["SPHK_THREADS"] = str(args.threads)
    else:
        args.threads = int(os.environ["SPHK_THREADS"]) if os.environ.get("SPHK_THREADS") else None
    try:
        text, code = args.func(args)
    except (UsageError, SphkError, ValueError) as exc:
        print(f"sphk: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
