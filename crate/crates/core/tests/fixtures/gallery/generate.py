"""Regenerates the gallery host-figure fixtures.

Usage: python3 generate.py  (run from this directory; needs matplotlib)
"""

import json
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(HERE, "..", "..", "..", "src", "notebook"))
sys.path.insert(0, HERE)

import driver  # noqa: E402
from scripts import COMMON, SCRIPTS  # noqa: E402


def main():
    for name, code in SCRIPTS.items():
        ns = {"__name__": "__main__"}
        reply = driver.run_cell(COMMON + code, ns)
        if reply["error"]:
            raise SystemExit(f"{name}: {reply['error']['evalue']}")
        (fig,) = reply["figures"]
        fig["png"] = None
        with open(os.path.join(HERE, f"{name}.json"), "w") as fh:
            json.dump(fig, fh, indent=1, sort_keys=True)
            fh.write("\n")


if __name__ == "__main__":
    main()
