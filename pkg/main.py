"""
Unified entry point for the lambdasup prover.

This script invokes the batch workflow in prove_problem.py.
It also provides a single place to extend CLI options in the future.
"""

from __future__ import annotations

import sys


def main() -> int:
	from prove_problem import main as run
	return run()


if __name__ == "__main__":
	sys.exit(main())
