#!/usr/bin/env python3
"""Dump the 1D grid-oscillation vectors for all orders, N in {50, 51}."""
import sys

from sbphodge.cli import main

if __name__ == "__main__":
    rc = 0
    for order in (2, 4, 6, 8):
        for n in (50, 51):
            rc |= main(["oscillations", "--order", str(order), "--n", str(n),
                        "--out", "out/oscillations", *sys.argv[1:]])
    sys.exit(rc)
