#!/usr/bin/env python3
"""Kernel-theorem oracle suite on small 2D and 3D grids."""
import sys

from sbphodge.cli import main

if __name__ == "__main__":
    rc = main(["verify-theorems", "--dim", "2", "--order", "2", "--n", "6",
               "--out", "out/theorems2d", *sys.argv[1:]])
    rc |= main(["verify-theorems", "--dim", "3", "--order", "2", "--n", "4",
                "--out", "out/theorems3d", *sys.argv[1:]])
    sys.exit(rc)
