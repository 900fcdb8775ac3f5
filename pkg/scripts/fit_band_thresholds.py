#!/usr/bin/env python3
"""Show that the shipped band thresholds are consistent with the reference audit.

The reference dataset pairs each SMOG grade with a printed band code but never
states the boundaries. This script derives, for each adjacent band pair, the
feasible interval (max grade observed in the lower band, min grade observed in
the upper band] and checks that the shipped thresholds fall inside. Midpoints
of whole-grade steps were chosen (9.5 / 10.5 / 11.5 / 12.5 / 13.5).
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from praf.readability import BAND_EDGES, band

ORDER = ["SD", "SWD", "FD", "D", "VD", "P"]


def main() -> None:
    reference = json.loads(
        (ROOT / "src" / "praf" / "data" / "fixtures" / "reference_results.json").read_text()
    )
    grades: dict[str, list[float]] = {code: [] for code in ORDER}
    for row in reference["apps"]:
        if row["smog"] is not None:
            grades[row["level"]].append(row["smog"])

    ok = True
    for low, high, edge in zip(ORDER, ORDER[1:], BAND_EDGES):
        below = max(grades[low]) if grades[low] else float("-inf")
        above = min(grades[high]) if grades[high] else float("inf")
        feasible = below < edge <= above
        ok &= feasible
        print(f"{low}/{high}: feasible ({below}, {above}], shipped {edge} "
              f"{'ok' if feasible else 'INCONSISTENT'}")

    mismatches = [
        (row["pseudonym"], row["smog"], row["level"], band(row["smog"]).code)
        for row in reference["apps"]
        if row["smog"] is not None and band(row["smog"]).code != row["level"]
    ]
    print(f"grade->band mismatches: {len(mismatches)}")
    for m in mismatches:
        print("  ", m)
    if not ok or mismatches:
        sys.exit(1)
    print("shipped thresholds reproduce every reference band")


if __name__ == "__main__":
    main()
