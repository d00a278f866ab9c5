#!/usr/bin/env python3
"""Export the scikit-learn 8x8 digits corpus into the ACILFEAT/label formats.

Usage: export_digits.py OUT_DIR
Writes OUT_DIR/features.bin (float32, 1797 x 64) and OUT_DIR/labels.txt.
"""
import struct
import sys
from pathlib import Path

import numpy as np
from sklearn.datasets import load_digits


def write_features(path: Path, x: np.ndarray) -> None:
    x = np.ascontiguousarray(x, dtype="<f4")
    with path.open("wb") as f:
        f.write(b"ACILFEAT")
        f.write(struct.pack("<IQIB", 1, x.shape[0], x.shape[1], 1))
        f.write(x.tobytes(order="C"))


def main() -> int:
    if len(sys.argv) != 2:
        print(__doc__, file=sys.stderr)
        return 2
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    digits = load_digits()
    write_features(out / "features.bin", digits.data)
    (out / "labels.txt").write_text("".join(f"{int(v)}\n" for v in digits.target))
    print(f"wrote {digits.data.shape[0]} samples x {digits.data.shape[1]} features to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
