"""Batch entry point: detect | mask | generate | serve.

Every parameter is available as a flag or through one JSON config file
(--config); flags win. Outputs of detect are groups.jsonl (one group per
line), features.csv (ranked feature table) and rejections.jsonl (one rejected
input row per line, with file/line/reason).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import features as feat
from . import ingest, masking, synth
from .fusion import FusionParams, detect_groups
from .network import build_taxpayer_network, build_trade_network, export_edges, export_nodes, prune_network
from .records import ConfigError, DateRange

DATASET_FLAGS = ("taxpayers", "investors", "investments", "invoices", "audits", "manifest")


def _add_dataset_flags(p: argparse.ArgumentParser):
    p.add_argument("--data-dir", help="directory holding the standard dataset file names")
    for name in DATASET_FLAGS:
        p.add_argument(f"--{name}", help=f"path to the {name} file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rptte")
    parser.add_argument("--config", help="JSON file with defaults for any flag")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="run group detection and write reports")
    _add_dataset_flags(p)
    p.add_argument("--from", dest="from_date", help="period start (YYYY-MM-DD), default manifest start")
    p.add_argument("--to", dest="to_date", help="period end (YYYY-MM-DD), default manifest end")
    p.add_argument("--max-txn-chain", type=int, default=None)
    p.add_argument("--max-ctrl-chain", type=int, default=None)
    p.add_argument("--min-ratio", type=float, default=None)
    p.add_argument("--sort", choices=feat.RANK_CRITERIA, default=None)
    p.add_argument("--top", type=int, default=None, help="keep only the top N groups (0 = all)")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--export-networks", action="store_true",
                   help="also dump pruned network node/edge files for debugging")

    p = sub.add_parser("mask", help="write a privacy-masked copy of the dataset")
    _add_dataset_flags(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--variance-pct", type=float, default=None)
    p.add_argument("--out-dir", default=None)

    p = sub.add_parser("generate", help="generate a synthetic dataset with planted groups")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n-taxpayers", type=int, default=None)
    p.add_argument("--n-investors", type=int, default=None)
    p.add_argument("--n-invoices", type=int, default=None)
    p.add_argument("--n-planted-groups", type=int, default=None)
    p.add_argument("--planted-depth", type=int, default=None)
    p.add_argument("--month-end-bias", type=float, default=None)
    p.add_argument("--from", dest="from_date", default=None)
    p.add_argument("--to", dest="to_date", default=None)

    p = sub.add_parser("serve", help="start the HTTP service")
    _add_dataset_flags(p)
    p.add_argument("--listen", default=None, help="host:port, default 127.0.0.1:8800")
    p.add_argument("--cache-capacity", type=int, default=None)
    p.add_argument("--frontend-dir", default=None)
    return parser


_DEFAULTS = {
    "seed": 0,
    "variance_pct": 0.1,
    "max_txn_chain": 4,
    "max_ctrl_chain": 4,
    "min_ratio": 0.10,
    "sort": "effective_rpts",
    "top": 0,
    "out_dir": "out",
    "listen": "127.0.0.1:8800",
    "n_taxpayers": 200,
    "n_investors": 60,
    "n_invoices": 2000,
    "n_planted_groups": 3,
    "planted_depth": 2,
    "month_end_bias": 0.3,
}


def _resolve(args: argparse.Namespace, key: str, fallback=None):
    """Flag value if given, else config file value, else default."""
    value = getattr(args, key, None)
    if value is not None and value is not False:
        return value
    config = getattr(args, "_config_values", {})
    if key in config:
        return config[key]
    if key in _DEFAULTS:
        return _DEFAULTS[key]
    return fallback


def _dataset_paths(args) -> dict[str, Path]:
    data_dir = _resolve(args, "data_dir")
    paths = {}
    for name in DATASET_FLAGS:
        flag = _resolve(args, name)
        if flag is not None:
            paths[name] = Path(flag)
        elif data_dir is not None:
            paths[name] = Path(data_dir) / ingest.STANDARD_FILENAMES[name]
        else:
            raise ConfigError(f"missing --{name} (or --data-dir)")
    for name, path in paths.items():
        if not path.exists():
            raise FileNotFoundError(f"{name} file not found: {path}")
    return paths


def _load(args) -> ingest.Dataset:
    paths = _dataset_paths(args)
    return ingest.load_dataset_files(
        taxpayers=paths["taxpayers"], investors=paths["investors"],
        investments=paths["investments"], invoices=paths["invoices"],
        audits=paths["audits"], manifest=paths["manifest"])


def _group_record(group) -> dict:
    return {
        "group_id": group.group_id,
        "node_ids": list(group.node_ids),
        "taxpayer_ids": list(group.taxpayer_ids),
        "investment_edges": [asdict(e) for e in group.investment_edges],
        "rpts": [{
            "invoice_id": r.invoice.invoice_id,
            "date": r.invoice.date.isoformat(),
            "seller_id": r.invoice.seller_id,
            "buyer_id": r.invoice.buyer_id,
            "amount": r.invoice.amount,
            "vat_amount": r.invoice.vat_amount,
            "chain_length": r.chain_length,
            "common_owners": list(r.common_owners),
            "effective": r.effective,
        } for r in group.rpts],
        "features": asdict(group.features) if group.features else None,
    }


def cmd_detect(args) -> int:
    dataset = _load(args)
    out_dir = Path(_resolve(args, "out_dir"))
    out_dir.mkdir(parents=True, exist_ok=True)

    from_raw = _resolve(args, "from_date", fallback=None)
    to_raw = _resolve(args, "to_date", fallback=None)
    start = ingest.parse_iso_date(from_raw) if from_raw else dataset.manifest.date_start
    end = ingest.parse_iso_date(to_raw) if to_raw else dataset.manifest.date_end
    params = FusionParams(
        period_start=start,
        period_end=end,
        max_txn_chain=int(_resolve(args, "max_txn_chain")),
        max_ctrl_chain=int(_resolve(args, "max_ctrl_chain")),
        min_ratio=float(_resolve(args, "min_ratio")),
    )

    net = prune_network(build_taxpayer_network(
        dataset.taxpayers, dataset.investors, dataset.investments, dataset.audits),
        min_ratio=params.min_ratio)
    trade = build_trade_network(dataset.invoices, net)
    groups = detect_groups(net, trade, params)
    feat.annotate_groups(groups, trade, DateRange(start, end), dataset.audits)
    ranked = feat.rank_groups(groups, criterion=_resolve(args, "sort"))
    top = int(_resolve(args, "top"))
    if top > 0:
        ranked = ranked[:top]

    with (out_dir / "groups.jsonl").open("w", encoding="utf-8") as fh:
        for g in ranked:
            fh.write(json.dumps(_group_record(g), sort_keys=True) + "\n")
    with (out_dir / "features.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["group_id", "n_taxpayers", "n_evasion_taxpayers",
                         "n_rpts", "n_effective_rpts", "total_rpt_amount"])
        for g in ranked:
            f = g.features
            writer.writerow([g.group_id, f.n_taxpayers, f.n_evasion_taxpayers,
                             f.n_rpts, f.n_effective_rpts, f"{f.total_rpt_amount:.2f}"])
    ingest.write_rejections(out_dir / "rejections.jsonl", dataset.rejections)
    if getattr(args, "export_networks", False):
        export_nodes(net, out_dir / "network_nodes.jsonl")
        export_edges(net, out_dir / "network_edges.jsonl")

    print(f"detected {len(groups)} groups ({len(ranked)} reported) "
          f"over {start}..{end}; reports in {out_dir}")
    return 0


def cmd_mask(args) -> int:
    dataset = _load(args)
    masked = masking.mask_dataset(dataset, seed=int(_resolve(args, "seed")),
                                  variance_pct=float(_resolve(args, "variance_pct")))
    out_dir = Path(_resolve(args, "out_dir"))
    ingest.write_dataset(out_dir, masked)
    ingest.write_rejections(out_dir / "rejections.jsonl", dataset.rejections)
    print(f"masked dataset written to {out_dir} "
          f"({len(masked.invoices)} invoices, {len(dataset.rejections)} rejected rows)")
    return 0


def cmd_generate(args) -> int:
    config = synth.SynthConfig(
        n_taxpayers=int(_resolve(args, "n_taxpayers")),
        n_investors=int(_resolve(args, "n_investors")),
        n_invoices=int(_resolve(args, "n_invoices")),
        date_start=ingest.parse_iso_date(_resolve(args, "from_date", fallback="2014-01-01")),
        date_end=ingest.parse_iso_date(_resolve(args, "to_date", fallback="2015-12-31")),
        n_planted_groups=int(_resolve(args, "n_planted_groups")),
        planted_depth=int(_resolve(args, "planted_depth")),
        month_end_bias=float(_resolve(args, "month_end_bias")),
        seed=int(_resolve(args, "seed")),
    )
    out_dir = Path(_resolve(args, "out_dir"))
    _, truth = synth.generate(config, out_dir=out_dir)
    print(f"generated dataset in {out_dir}: {config.n_invoices} invoices, "
          f"{len(truth.groups)} planted groups")
    return 0


def cmd_serve(args) -> int:
    from .service import create_app, run_server

    paths = _dataset_paths(args)
    dataset = ingest.load_dataset_files(
        taxpayers=paths["taxpayers"], investors=paths["investors"],
        investments=paths["investments"], invoices=paths["invoices"],
        audits=paths["audits"], manifest=paths["manifest"])
    app = create_app(dataset=dataset,
                     cache_capacity=_resolve(args, "cache_capacity", fallback=None),
                     frontend_dir=_resolve(args, "frontend_dir", fallback=None))
    listen = _resolve(args, "listen")
    print(f"serving on http://{listen}/api/v1 (Ctrl-C to stop)")
    run_server(app, listen)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._config_values = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config {args.config}: {exc}", file=sys.stderr)
            return 1
        args._config_values = {k.replace("-", "_"): v for k, v in raw.items()}
    handlers = {"detect": cmd_detect, "mask": cmd_mask,
                "generate": cmd_generate, "serve": cmd_serve}
    try:
        return handlers[args.command](args)
    except (ConfigError, ingest.FormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
