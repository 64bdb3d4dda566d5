"""Regenerate the frozen ratio envelopes used by the regression tests.

Run from the repository root:

    python3 scripts/freeze_envelopes.py

Rerun only after an intentional change to the functionals or the suite
configuration, then review the diff under tests/data/ before committing.
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from carleson import serialize as ser
from carleson.continuum import (
    carleson_equivalence_suite,
    nt_equivalence_suite,
    tent_suite,
)

DATA_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"

NT_CONFIG = {"seeds": 50, "depths": [4, 6], "n": 1, "m": 2, "spec": "mixed"}
CARLESON_CONFIG = {**NT_CONFIG, "stride": 2}
TENT_CONFIG = {"seeds": 20, "depths": [4, 6], "n": 1, "m": 2, "p": 4.0, "stride": 2, "spec": "mixed"}


def envelope(rows, key_of):
    out = {}
    for row in rows:
        key = key_of(row)
        e = out.setdefault(key, {"min": math.inf, "max": -math.inf})
        e["min"] = min(e["min"], row["ratio"])
        e["max"] = max(e["max"], row["ratio"])
    return out


def main() -> int:
    nt_rows = nt_equivalence_suite(
        seeds=range(NT_CONFIG["seeds"]), depths=tuple(NT_CONFIG["depths"]),
        n=NT_CONFIG["n"], m=NT_CONFIG["m"], spec=NT_CONFIG["spec"],
    )
    ca_rows = carleson_equivalence_suite(
        seeds=range(CARLESON_CONFIG["seeds"]), depths=tuple(CARLESON_CONFIG["depths"]),
        n=CARLESON_CONFIG["n"], m=CARLESON_CONFIG["m"],
        stride=CARLESON_CONFIG["stride"], spec=CARLESON_CONFIG["spec"],
    )
    doc = {
        "nt_config": NT_CONFIG,
        "carleson_config": CARLESON_CONFIG,
        "nt": envelope(nt_rows, lambda r: f"depth={r['depth']} p={r['p']:g} q={r['q']:g}"),
        "carleson": envelope(
            ca_rows, lambda r: f"depth={r['depth']} pp={r['p_prime']:g} qp={r['q_prime']:g}"
        ),
    }
    path = ser.write_json(DATA_DIR / "equivalence_envelope.json", doc)
    print(f"wrote {path} ({len(doc['nt'])} nt keys, {len(doc['carleson'])} carleson keys)")

    te_rows = tent_suite(
        seeds=range(TENT_CONFIG["seeds"]), depths=tuple(TENT_CONFIG["depths"]),
        n=TENT_CONFIG["n"], m=TENT_CONFIG["m"], p=TENT_CONFIG["p"],
        stride=TENT_CONFIG["stride"], spec=TENT_CONFIG["spec"],
    )
    tdoc = {
        "tent_config": TENT_CONFIG,
        "tent": envelope(te_rows, lambda r: f"depth={r['depth']} p={r['p']:g}"),
    }
    path = ser.write_json(DATA_DIR / "tent_envelope.json", tdoc)
    print(f"wrote {path} ({len(tdoc['tent'])} tent keys)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
