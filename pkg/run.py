#!/usr/bin/env python3
"""
Main entry point for milnorkit.
Run this file with a subcommand, e.g. `python run.py milnor --input germ.json`.
"""
import sys
from pathlib import Path

# Add src to path for imports
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))

from milnorkit.main import main

if __name__ == "__main__":
    sys.exit(main())
