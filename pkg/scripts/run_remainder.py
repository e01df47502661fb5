#!/usr/bin/env python3
"""Decomposition remainder study on the separable 2D problem (order 6, N=60)."""
import sys

from sbphodge.cli import main

if __name__ == "__main__":
    sys.exit(main(["remainder", "--order", "6", "--n", "60",
                   "--out", "out/remainder", *sys.argv[1:]]))
