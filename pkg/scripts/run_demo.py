#!/usr/bin/env python3
"""End-to-end run on P^3: sample a semistable point, check the four
membership clauses, dualize onto the 3m-1 side, and verify the Hilbert
polynomials and the group-action square.

Usage: python scripts/run_demo.py [seed] [prime]
"""

import sys

from projmonad.cli import run


def main():
    seed = sys.argv[1] if len(sys.argv) > 1 else "0"
    prime = sys.argv[2] if len(sys.argv) > 2 else "101"
    return run(["p3", "demo", "--seed", seed, "--field", f"Fp:{prime}"])


if __name__ == "__main__":
    sys.exit(main())
