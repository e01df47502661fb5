#!/usr/bin/env python3
"""3D convergence tables (orders 2 and 4 at desk scale)."""
import sys

from sbphodge.cli import main

if __name__ == "__main__":
    rc = 0
    for order in (2, 4):
        rc |= main(["convergence", "--dim", "3", "--order", str(order),
                    "--out", "out/convergence3d", *sys.argv[1:]])
    sys.exit(rc)
