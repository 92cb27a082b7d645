"""Run every built-in reproduction and print its checks."""

import contextlib
import io
import json
import sys

from chainforge.cli import REPROS, run


def main() -> int:
    worst = 0
    for name in REPROS:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = run(["repro", name])
        obj = json.loads(buf.getvalue())
        print(f"{name}: exit {code}")
        for key, value in obj.get("checks", {}).items():
            print(f"  {key}: {value}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
