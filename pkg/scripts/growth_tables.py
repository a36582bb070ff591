"""Growth tables for n = 2, p in {2, 3}, trivial and depth-one characters, as CSV."""

import csv
import sys

from building_lab.fields import TorusCharacter, depth_one_character
from building_lab.scans import GROWTH_FIELDS, growth_table


def main(out_dir="."):
    for p in (2, 3):
        chars = {"trivial": TorusCharacter.trivial(2, p),
                 "depth1": TorusCharacter.first_coordinate(2, p, depth_one_character(p))}
        for name, chi in chars.items():
            path = f"{out_dir}/growth_n2_p{p}_{name}.csv"
            with open(path, "w", newline="") as fh:
                w = csv.DictWriter(fh, fieldnames=GROWTH_FIELDS)
                w.writeheader()
                for row in growth_table(2, p, 3, chi):
                    w.writerow(row.as_dict())
            print(path)


if __name__ == "__main__":
    main(*sys.argv[1:])
