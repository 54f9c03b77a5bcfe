#!/usr/bin/env python3
"""Run the built-in identity suite.

Usage:
    python3 scripts/run_suite.py [--order N] [--jobs J]

Exit code 0 when every verdict matches its expectation.
"""

import sys

from qident.cli import main

if __name__ == "__main__":
    sys.exit(main(["suite", *sys.argv[1:]]))
