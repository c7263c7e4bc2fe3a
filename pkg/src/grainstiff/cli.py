"""Command-line client for the identification service.

Every subcommand builds a JSON request, sends it to the service (in-process
by default, or to a remote --server URL), and serializes the response with a
canonical writer: fixed key order from the service, floats printed with
%.17g, two-space indentation, sorted tensor component names. Repeated runs
with the same inputs therefore produce byte-identical output.

Exit codes: 0 success, 1 verification suite failed, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Optional

import httpx

PRIMARY_COMMANDS = ("identify", "convert", "table", "diff-legacy", "verify")


def format_float(value: float) -> str:
    """Shortest stable decimal form: %.17g round-trips every double."""
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError("non-finite value cannot be serialized")
    if value == 0.0:
        value = 0.0
    text = "%.17g" % value
    return text


def canonical_json(obj, level: int = 0) -> str:
    pad = "  " * level
    child_pad = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{child_pad}{json.dumps(str(k))}: "
                 f"{canonical_json(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [f"{child_pad}{canonical_json(v, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    return json.dumps(obj, ensure_ascii=True)


def flatten_numeric(obj, prefix: str = "") -> list[tuple[str, float]]:
    """Numeric leaves of a payload as (name, value) rows for CSV output.
    Tensor sections keep their component names; other paths are dotted."""
    rows: list[tuple[str, float]] = []
    if isinstance(obj, dict):
        for key, val in obj.items():
            if prefix == "" and key in ("C", "M", "D", "D_corrected",
                                        "D_legacy") and isinstance(val, dict):
                section = "" if key in ("C", "M", "D") else key + "."
                for name, entry in val.items():
                    rows.append((section + name, entry))
                continue
            child = key if prefix == "" else f"{prefix}.{key}"
            rows.extend(flatten_numeric(val, child))
    elif isinstance(obj, list):
        for i, val in enumerate(obj):
            label = (val["name"] if isinstance(val, dict) and "name" in val
                     else str(i))
            rows.extend(flatten_numeric(val, f"{prefix}.{label}"))
    elif isinstance(obj, bool):
        rows.append((prefix, int(obj)))
    elif isinstance(obj, (int, float)):
        rows.append((prefix, obj))
    return rows


def canonical_csv(payload: dict) -> str:
    lines = ["name,value"]
    for name, value in flatten_numeric(payload):
        if isinstance(value, float):
            lines.append(f"{name},{format_float(value)}")
        else:
            lines.append(f"{name},{value}")
    return "\n".join(lines)


def render_payload(payload: dict, fmt: str) -> str:
    if fmt == "csv":
        return canonical_csv(payload) + "\n"
    return canonical_json(payload) + "\n"


def _post(path: str, body: dict, server: Optional[str]) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            return client.post(path, json=body)

    from .service import app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://service") as client:
            return await client.post(path, json=body, timeout=600.0)

    return asyncio.run(go())


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit2(f"cannot read config file {path}: {exc}")
    if not isinstance(data, dict):
        raise SystemExit2(f"config file {path} must hold a JSON object")
    return data


class SystemExit2(Exception):
    """Usage or domain error destined for exit code 2."""


def _merged(args: argparse.Namespace, key: str, config: dict, default=None):
    val = getattr(args, key.replace("-", "_"), None)
    if val is not None:
        return val
    if key in config:
        return config[key]
    return default


def _parse_dist_params(pairs, config: dict) -> dict[str, float]:
    params: dict[str, float] = {}
    for key, val in (config.get("dist_params") or {}).items():
        params[str(key)] = float(val)
    for item in pairs or []:
        if "=" not in item:
            raise SystemExit2(
                f"--dist-param expects name=value, got {item!r}")
        key, _, raw = item.partition("=")
        try:
            params[key.strip()] = float(raw)
        except ValueError:
            raise SystemExit2(
                f"--dist-param {key.strip()!r} has non-numeric value {raw!r}")
    return params


def _material_body(args: argparse.Namespace, config: dict) -> dict:
    material: dict = {}
    keta = _merged(args, "keta", config)
    ktau = _merged(args, "ktau", config)
    young = _merged(args, "young", config)
    nu = _merged(args, "nu", config)
    dist = _merged(args, "dist", config)
    if keta is not None or ktau is not None:
        material["kbar_eta"] = keta
        material["kbar_tau"] = ktau
    if young is not None or nu is not None:
        material["young"] = young
        material["nu"] = nu
    if dist is not None:
        material["dist"] = dist
        params = _parse_dist_params(getattr(args, "dist_param", None), config)
        if params:
            material["dist_params"] = params
    if not material:
        raise SystemExit2(
            "no material given: use --keta/--ktau, --young/--nu, or --dist")
    return material


def _common_body(args: argparse.Namespace, config: dict,
                 with_mode: bool, with_tol: bool) -> dict:
    dim = _merged(args, "dim", config)
    if dim is None:
        raise SystemExit2("missing --dim (or dim in --config)")
    body: dict = {
        "dim": int(dim),
        "L": float(_merged(args, "L", config, 1.0)),
        "material": _material_body(args, config),
    }
    if with_mode:
        body["mode"] = _merged(args, "mode", config, "corrected")
    if with_tol:
        body["tol"] = float(_merged(args, "tol", config, 1e-12))
    return body


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _detail_of(resp: httpx.Response) -> str:
    try:
        detail = resp.json().get("detail")
    except (ValueError, AttributeError):
        detail = None
    if detail is None:
        return resp.text
    if isinstance(detail, str):
        return detail
    return json.dumps(detail)


def _run_request(path: str, body: dict, args: argparse.Namespace,
                 config: dict) -> tuple[int, Optional[dict]]:
    server = _merged(args, "server", config)
    try:
        resp = _post(path, body, server)
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return 2, None
    if resp.status_code != 200:
        print(f"error ({resp.status_code}): {_detail_of(resp)}",
              file=sys.stderr)
        return 2, None
    return 0, resp.json()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grainstiff",
        description="Identify first- and second-gradient stiffness tensors "
                    "from grain-pair stiffness distributions.")
    sub = parser.add_subparsers(dest="command", required=True)

    io_parent = argparse.ArgumentParser(add_help=False)
    io_parent.add_argument("--format", choices=("json", "csv"), default=None,
                           help="output format (default json)")
    io_parent.add_argument("--out", default=None,
                           help="write output to this file instead of stdout")
    io_parent.add_argument("--config", default=None,
                           help="JSON file with defaults; flags override it")
    io_parent.add_argument("--server", default=None,
                           help="base URL of a running service "
                                "(default: run in-process)")

    geom_parent = argparse.ArgumentParser(add_help=False)
    geom_parent.add_argument("--dim", type=int, choices=(2, 3), default=None,
                             help="spatial dimension")
    geom_parent.add_argument("--L", type=float, default=None,
                             help="grain-pair branch length (default 1.0)")

    mat_parent = argparse.ArgumentParser(add_help=False)
    mat_parent.add_argument("--keta", type=float, default=None,
                            help="mean normal stiffness kbar_eta")
    mat_parent.add_argument("--ktau", type=float, default=None,
                            help="mean tangential stiffness kbar_tau")
    mat_parent.add_argument("--young", type=float, default=None,
                            help="Young modulus (with --nu)")
    mat_parent.add_argument("--nu", type=float, default=None,
                            help="Poisson ratio (with --young)")
    mat_parent.add_argument("--dist", default=None,
                            help="built-in anisotropic distribution name")
    mat_parent.add_argument("--dist-param", action="append", default=None,
                            metavar="NAME=VALUE",
                            help="distribution parameter, repeatable")

    tol_parent = argparse.ArgumentParser(add_help=False)
    tol_parent.add_argument("--tol", type=float, default=None,
                            help="zero-pruning tolerance for tensor output "
                                 "(default 1e-12, relative)")

    p_identify = sub.add_parser(
        "identify", parents=[geom_parent, mat_parent, tol_parent, io_parent],
        help="compute C, M, D for a material")
    p_identify.add_argument("--mode", choices=("corrected", "legacy"),
                            default=None,
                            help="identification mode (default corrected)")

    sub.add_parser("convert", parents=[geom_parent, mat_parent, io_parent],
                   help="convert between stiffness means and engineering "
                        "constants")

    sub.add_parser("table", parents=[geom_parent, mat_parent, io_parent],
                   help="closed-form component tables for an isotropic "
                        "material")

    sub.add_parser("diff-legacy",
                   parents=[geom_parent, mat_parent, tol_parent, io_parent],
                   help="compare corrected and legacy identification")

    p_verify = sub.add_parser("verify", parents=[io_parent],
                              help="run the self-verification suite")
    p_verify.add_argument("--seed", type=int, default=None,
                          help="rng seed (default 12345)")
    p_verify.add_argument("--samples", type=int, default=None,
                          help="samples per randomized check (default 40)")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        config = _load_config(getattr(args, "config", None))
        fmt = _merged(args, "format", config, "json")
        out = _merged(args, "out", config)

        if args.command == "identify":
            body = _common_body(args, config, with_mode=True, with_tol=True)
            code, payload = _run_request("/identify", body, args, config)
        elif args.command == "convert":
            body = _common_body(args, config, with_mode=False, with_tol=False)
            code, payload = _run_request("/convert", body, args, config)
        elif args.command == "table":
            body = _common_body(args, config, with_mode=False, with_tol=False)
            code, payload = _run_request("/table", body, args, config)
        elif args.command == "diff-legacy":
            body = _common_body(args, config, with_mode=False, with_tol=True)
            code, payload = _run_request("/diff-legacy", body, args, config)
        elif args.command == "verify":
            body = {
                "seed": int(_merged(args, "seed", config, 12345)),
                "samples": int(_merged(args, "samples", config, 40)),
            }
            code, payload = _run_request("/verify", body, args, config)
        else:
            raise SystemExit2(f"unknown command {args.command!r}")
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if code != 0 or payload is None:
        return code

    _emit(render_payload(payload, fmt), out)

    if args.command == "verify":
        for check in payload.get("checks", []):
            status = "PASS" if check["passed"] else "FAIL"
            print(f"{status} {check['name']} "
                  f"(max={check['max_violation']:.3e}, "
                  f"tol={check['tolerance']:.1e})", file=sys.stderr)
        if not payload.get("passed", False):
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
