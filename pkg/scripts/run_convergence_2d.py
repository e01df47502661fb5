#!/usr/bin/env python3
"""2D convergence tables for all shipped operator orders."""
import sys

from sbphodge.cli import main

if __name__ == "__main__":
    rc = 0
    for order in (2, 4, 6, 8):
        rc |= main(["convergence", "--dim", "2", "--order", str(order),
                    "--out", "out/convergence2d", *sys.argv[1:]])
    sys.exit(rc)
