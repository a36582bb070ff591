"""Run every acceptance criterion and write the JSON summary."""

import argparse
import json
import sys

from building_lab.verify import run_all


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--precision", type=int, default=None)
    ap.add_argument("--out", default="acceptance.json")
    args = ap.parse_args()
    results = run_all(args.precision)
    for r in results:
        print(f"criterion {r.id:2d} [{'PASS' if r.passed else 'FAIL'}] {r.name} ({r.seconds:.1f}s)")
    with open(args.out, "w") as fh:
        json.dump([r.as_dict() for r in results], fh, indent=2, default=str, sort_keys=True)
    return 0 if all(r.passed for r in results) else 4


if __name__ == "__main__":
    sys.exit(main())
