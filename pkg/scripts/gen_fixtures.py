#!/usr/bin/env python3
"""Regenerate the bundled fixture corpus under fixtures/."""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from fanforge.fixtures import corpus_documents  # noqa: E402


def main():
    root = pathlib.Path(__file__).resolve().parents[1] / "fixtures"
    root.mkdir(exist_ok=True)
    for name, doc in sorted(corpus_documents().items()):
        path = root / f"{name}.json"
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
        print(path)


if __name__ == "__main__":
    main()
