"""Canonical report documents and the command-line pipeline.

Equivalent shell session:

    stylegap synth --spec spec.json --out fixture/
    stylegap validate --manifest fixture/manifest.json
    stylegap evaluate --manifest fixture/manifest.json --out report.json
    stylegap evaluate --manifest fixture/manifest.json --format csv --out report.csv
"""

import json
import tempfile
from pathlib import Path

from stylegap.cli import main

workdir = Path(tempfile.mkdtemp(prefix="report_demo_"))
spec_path = workdir / "spec.json"
spec_path.write_text(
    json.dumps({"scenario": "displacement", "rng_seed": 11}), encoding="utf-8"
)

main(["synth", "--spec", str(spec_path), "--out", str(workdir / "fixture")])
manifest = workdir / "fixture" / "manifest.json"
main(["validate", "--manifest", str(manifest)])

report_path = workdir / "report.json"
main(["evaluate", "--manifest", str(manifest), "--out", str(report_path)])
main(["evaluate", "--manifest", str(manifest), "--format", "csv", "--out", str(workdir / "report.csv")])

doc = json.loads(report_path.read_text(encoding="utf-8"))
print("\nreport sections:", sorted(doc))
print("config:", doc["config"])
print("first fad_summary row:", doc["tables"]["fad_summary"][0])
print("delta cells:", len(doc["tables"]["delta_cells"]))

# Reports are canonical: sorted keys, 9-significant-digit floats, no
# timestamps. Re-running evaluate on the same inputs reproduces the
# file byte for byte.
again = workdir / "report2.json"
main(["evaluate", "--manifest", str(manifest), "--out", str(again)])
print("byte-identical rerun:", report_path.read_bytes() == again.read_bytes())
