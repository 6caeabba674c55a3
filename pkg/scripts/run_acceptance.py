"""Run the acceptance suite and print only its PASS/FAIL lines."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-s", "-p", "no:cacheprovider",
                           str(ROOT / "tests" / "test_acceptance.py")],
                          cwd=ROOT, capture_output=True, text=True)
    lines = [ln for ln in proc.stdout.splitlines() if ln.startswith(("PASS criterion", "FAIL criterion"))]
    print("\n".join(lines))
    print(f"{sum(ln.startswith('PASS') for ln in lines)} PASS, {sum(ln.startswith('FAIL') for ln in lines)} FAIL")
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
