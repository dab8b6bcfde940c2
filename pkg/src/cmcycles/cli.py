"""Command-line entry point.

Exit codes: 0 all checks pass / verdict true, 1 a mathematical failure was
found, 2 degenerate input (verdict withheld), 64 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .checker import CertificateFormatError, check_certificate
from .cm import CMConfig, CMData, ConfigError, CycleType, EigenvalueTuple, load_cm_data, read_tuple
from .density import GroupError, frobenius_density, load_group_spec, quotient_check
from .descent import Derivation, certify_theorem, close_ledger, descent_chain, descent_data
from .exterior import ExteriorError, render_scalar, wedge
from .lefschetz import LefschetzClass, lefschetz_product
from .suites import run_suites

EXIT_OK, EXIT_FAIL, EXIT_DEGENERATE, EXIT_USAGE = 0, 1, 2, 64
GENUS_BOUND = 8
DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    g: int | None = None
    factors: tuple[int, ...] | None = None
    out: str | None = None
    format: str = "json"
    seed: int = DEFAULT_SEED
    zeta: str | None = None
    zeta_degenerate: bool = False
    type: str | None = None


def render_text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                sub = render_text(v, indent + 1)
                lines.append(f"{pad}- {sub[0].lstrip()}")
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_scalar_text(v)}")
    else:
        lines.append(pad + _scalar_text(obj))
    return lines


def _scalar_text(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def emit(obj: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "text":
        stream.write("\n".join(render_text(obj)) + "\n")
    else:
        stream.write(json.dumps(obj, indent=1, ensure_ascii=False) + "\n")


def _parse_factors(text: str) -> tuple[int, ...]:
    try:
        genera = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--factors expects comma-separated genera, got {text!r}") from None
    return genera


def _cm_data(cfg: RunConfig) -> CMData:
    if cfg.input:
        try:
            data = load_cm_data(Path(cfg.input).read_text())
        except OSError as exc:
            raise UsageError(str(exc)) from None
    else:
        if cfg.factors is None and cfg.g is None:
            raise UsageError("need --factors, --g or --config")
        genera = cfg.factors if cfg.factors is not None else (cfg.g,)
        config = CMConfig(genera)
        data = CMData(config, EigenvalueTuple.skew(config, [1] * config.g))
    config = data.config
    if config.g > GENUS_BOUND:
        raise UsageError(f"total genus {config.g} exceeds the bound {GENUS_BOUND}")
    zeta = data.zeta
    if cfg.zeta:
        try:
            doc = json.loads(Path(cfg.zeta).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"--zeta: {exc}") from None
        zeta = read_tuple(config, doc, skew=True, what="zeta")
    if cfg.zeta_degenerate:
        zeta = EigenvalueTuple.skew(config, [0] + [zeta[s] for s in range(1, config.g)])
    return CMData(config, zeta, data.frobenius, data.q)


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.g is None and cfg.factors is None and cfg.input is None:
        raise UsageError("verify needs --g, --factors or --config")
    if cfg.g is not None and not 1 <= cfg.g <= GENUS_BOUND:
        raise UsageError(f"--g must be in 1..{GENUS_BOUND}")
    data = _cm_data(cfg)
    lc = LefschetzClass.from_zeta(data.config, data.zeta)
    results = run_suites(lc, cfg.seed)
    ok = all(r.passed for r in results)
    report = {
        "command": "verify",
        "factors": list(data.config.factor_genera),
        "seed": cfg.seed,
        "degenerate_slots": [data.config.render(1 << s) for s in lc.degenerate],
        "suites": [r.to_json() for r in results],
        "passed": ok,
    }
    return report, EXIT_OK if ok else EXIT_FAIL


def cmd_certify(cfg: RunConfig) -> tuple[dict, int]:
    data = _cm_data(cfg)
    cert = certify_theorem(data.config, LefschetzClass.from_zeta(data.config, data.zeta))
    text = cert.dumps()
    summary = {
        "command": "certify",
        "factors": list(data.config.factor_genera),
        "records": len(cert.records),
        "verdict": cert.verdict,
    }
    if cert.diagnostic:
        summary["diagnostic"] = cert.diagnostic
    if cfg.out:
        Path(cfg.out).write_text(text)
        summary["out"] = cfg.out
        result = summary
    else:
        result = cert.to_json()
    code = EXIT_DEGENERATE if cert.verdict is None else EXIT_OK if cert.verdict else EXIT_FAIL
    return result, code


def cmd_check(cfg: RunConfig) -> tuple[dict, int]:
    if not cfg.input:
        raise UsageError("check needs a certificate path")
    try:
        raw = Path(cfg.input).read_bytes()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    rep = check_certificate(raw)
    out = {"command": "check", "input": cfg.input, **rep.to_json()}
    if rep.verdict is None:
        return out, EXIT_DEGENERATE
    return out, EXIT_OK if rep.confirmed else EXIT_FAIL


def cmd_descend(cfg: RunConfig) -> tuple[dict, int]:
    if not cfg.type:
        raise UsageError("descend needs --type")
    data = _cm_data(cfg)
    config = data.config
    lc = LefschetzClass.from_zeta(config, data.zeta)
    if not lc.nondegenerate:
        return {"command": "descend", "diagnostic": f"zeta vanishes at {lc.degenerate}"}, EXIT_DEGENERATE
    try:
        t = CycleType.parse(config, cfg.type)
    except ExteriorError as exc:
        raise UsageError(str(exc)) from None
    ledger = close_ledger(config, lc)
    was_known = t in ledger
    ledger.add(t, Derivation("hypothesis"))
    chain = descent_chain(lc, t)
    for prev, nxt in zip(chain, chain[1:]):
        ledger.add(nxt, Derivation("division", (prev,), "lambda"))
    d = descent_data(t)
    T = ledger.realize(chain[-1])
    scale = wedge(lefschetz_product(lc, d.K), T).coefficient(t.mask(config.g))
    out = {
        "command": "descend",
        "type": t.render(config),
        "in_ledger": was_known,
        "K": config.render(d.K),
        "k": d.k,
        "chain": [u.render(config) for u in chain],
        "descended": T.to_json(),
        "mu": render_scalar(1 / scale),
    }
    return out, EXIT_OK


def cmd_density(cfg: RunConfig) -> tuple[dict, int]:
    if not cfg.input:
        raise UsageError("density needs --config PATH")
    try:
        G, c = load_group_spec(Path(cfg.input).read_text())
        rep = frobenius_density(G, c)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    return {"command": "density", **rep.to_json(), "quotient_ok": quotient_check(G, c)}, EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "certify": cmd_certify,
    "check": cmd_check,
    "descend": cmd_descend,
    "density": cmd_density,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--out")
    common.add_argument("--config")

    cm = argparse.ArgumentParser(add_help=False)
    cm.add_argument("--g", type=int)
    cm.add_argument("--factors", type=_factors_arg)
    cm.add_argument("--zeta")
    cm.add_argument("--zeta-degenerate", action="store_true", help="test hook: zeta = 0 at the first generator")

    p = _Parser(prog="cmcycles", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("verify", parents=[common, cm], help="run the Lefschetz calculus suites")
    sub.add_parser("certify", parents=[common, cm], help="emit a pairing certificate")
    chk = sub.add_parser("check", parents=[common], help="independently re-check a certificate")
    chk.add_argument("path", nargs="?")
    dsc = sub.add_parser("descend", parents=[common, cm], help="descend one type by Lambda")
    dsc.add_argument("--type", required=True)
    sub.add_parser("density", parents=[common], help="Chebotarev density for a group spec")
    return p


def _factors_arg(text: str) -> tuple[int, ...]:
    try:
        return _parse_factors(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        input=getattr(args, "path", None) or args.config,
        g=getattr(args, "g", None),
        factors=getattr(args, "factors", None),
        out=args.out,
        format=args.format,
        seed=args.seed,
        zeta=getattr(args, "zeta", None),
        zeta_degenerate=getattr(args, "zeta_degenerate", False),
        type=getattr(args, "type", None),
    )
    try:
        result, code = COMMANDS[cfg.command](cfg)
    except (UsageError, ConfigError, GroupError, CertificateFormatError) as exc:
        emit({"command": cfg.command, "error": str(exc)}, cfg.format, sys.stderr)
        return EXIT_USAGE
    emit(result, cfg.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
