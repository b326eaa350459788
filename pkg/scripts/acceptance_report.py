#!/usr/bin/env python3
"""Run the acceptance suite and show one PASS/FAIL line per criterion."""

import subprocess
import sys


def main() -> int:
    cmd = [
        sys.executable,
        "-m",
        "pytest",
        "tests/test_acceptance.py",
        "-v",
        "-s",
        "--no-header",
    ]
    return subprocess.call(cmd)


if __name__ == "__main__":
    sys.exit(main())
