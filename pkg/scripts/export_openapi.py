#!/usr/bin/env python3
"""Regenerate the OpenAPI description shipped at the repository root.

The schema depends only on the route definitions, so any dataset works for
building the app; a tiny synthetic one keeps this instant.
"""

import json
from datetime import date
from pathlib import Path

from rptte.service import create_app
from rptte.synth import SynthConfig, generate


def main():
    dataset, _ = generate(SynthConfig(
        n_taxpayers=10, n_investors=4, n_invoices=20,
        date_start=date(2014, 1, 1), date_end=date(2014, 3, 31), seed=0))
    app = create_app(dataset=dataset)
    spec = app.openapi()
    out = Path(__file__).resolve().parent.parent / "openapi.json"
    out.write_text(json.dumps(spec, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(spec['paths'])} paths)")


if __name__ == "__main__":
    main()
