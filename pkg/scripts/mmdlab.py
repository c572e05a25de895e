#!/usr/bin/env python3
"""mmdlab entry point: MMD estimates, bounds, fits and Monte-Carlo studies."""

from __future__ import annotations

import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from src.cli.app import parse_and_dispatch


def main() -> int:
    return parse_and_dispatch(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
