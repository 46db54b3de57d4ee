"""
Driving the command-line tool from Python
=========================================

The same calls work from a shell as ``scperf <command> ...``.
"""

import io

from scperf.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    print(f"$ scperf {' '.join(argv)}   (exit {code})")
    print(out.getvalue())


run("scperf", "--phi", "0.95", "--theta", "0.4", "-L", "2", "--sl", "0.95")
run("psi", "--phi", "0.7", "--phi", "0.2", "-n", "4")
run("table", "3")
run("scperf", "--phi", "0.6", "--phi", "-0.4", "-L", "10", "--format", "json")

# figure data comes out as long-format CSV, one row per grid cell
buf = io.StringIO()
main(["sweep", "--preset", "fig3"], buf)
lines = buf.getvalue().splitlines()
print(lines[0], len(lines) - 1, "rows")
print(*[ln for ln in lines if ln.startswith("1,0.5,")], sep="\n")

# a non-stationary model exits with code 3 and a one-line reason on stderr
run("scperf", "--phi", "1.2")
