#!/usr/bin/env python3
"""Run every scripted attack drill against scratch stores and summarize
whether the defenses held."""

import json
import sys

from fourdigit.gateway.scenarios import SCENARIOS, run_scenario


def main() -> int:
    all_held = True
    for name in SCENARIOS:
        report = run_scenario(name)
        held = report["defenses_held"]
        all_held &= held
        print(f"{'HELD  ' if held else 'BREACH'}  {name}")
        print(json.dumps(report, indent=2))
        print()
    return 0 if all_held else 1


if __name__ == "__main__":
    sys.exit(main())
