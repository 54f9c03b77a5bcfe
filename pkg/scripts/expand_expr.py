#!/usr/bin/env python3
"""Expand an expression of the identity language to a truncated series.

Usage:
    python3 scripts/expand_expr.py "phi(q^2) + 2*sigma()" --order 20
    python3 scripts/expand_expr.py "j(x; q)" --order 10 --bind "x=zeta(3,1)"
"""

import sys

from qident.cli import main

if __name__ == "__main__":
    sys.exit(main(["expand", *sys.argv[1:]]))
