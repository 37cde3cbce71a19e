"""The command line: JSON element documents in, reports and elements out.

Elements travel as JSON documents carrying the tower description and the
coefficient array.  The `symspaces` console script wraps checking,
conversion, the group action, the metric, invariants, and a
deterministic self-test battery.
"""

import json
import subprocess
import sys
import tempfile

import numpy as np

from symspaces import algebra as al
from symspaces import cli
from symspaces import models as md

rng = np.random.default_rng(5)
mid = md.ModelId(md.ModelFamily.SP2, md.Kind.U, al.make_spec(2), 1)
p = md.sample_point(mid, rng)
doc = json.dumps(cli.emit_element(p.value))


def run(*args, stdin=None):
    r = subprocess.run([sys.executable, "-m", "symspaces.cli", *args],
                       capture_output=True, text=True, input=stdin)
    return r.returncode, r.stdout


print("== an element document ==")
print(doc[:160], "...")

print()
print("== check: is this a half-space point of the sp2 family? ==")
rc, out = run("check", "--family", "sp2", "--model", "U", "--in", "-", stdin=doc)
print("exit code:", rc)
print(out)

print("== convert to the bounded model and back ==")
rc, bdoc = run("convert", "--family", "sp2", "--from", "U", "--to", "B",
               "--in", "-", stdin=doc)
rc, back = run("convert", "--family", "sp2", "--from", "B", "--to", "U",
               "--in", "-", stdin=bdoc)
q = cli.parse_element(json.loads(back))
print("round-trip drift:", (q - p.value).norm())

print()
print("== a slice of the self-test battery ==")
rc, out = run("selftest", "--seed", "42", "--cases", "3", "--filter", "hkr")
report = json.loads(out)
for s in report["suites"]:
    print(f"  suite {s['suite']}: cases={s['cases']} "
          f"max_residual={s['max_residual']:.2e} passed={s['passed']}")
print("overall passed:", report["passed"])
