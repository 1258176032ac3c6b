"""Runs the CLI over a set of configs: exit codes, schema validity, determinism."""

import json
import os
import subprocess
import sys

import jsonschema

cli, schema_path = sys.argv[1], sys.argv[2]
with_verify = "--with-verify" in sys.argv
schema = json.load(open(schema_path))
validator = jsonschema.Draft202012Validator(schema)

runs = [
    (["classify", "--seq", "geometric:2"], 0),
    (["classify", "--seq", "factorial"], 0),
    (["classify", "--seq", "override:geometric:2;at:powers:2;val:3"], 0),
    (["torsion", "--seq", "factorial"], 0),
    (["torsion", "--seq", "primes", "--bound", "30"], 0),
    (["torsion", "--seq", "affine:2,3"], 0),
    (["enumerate", "--seq", "geometric:2", "--m", "3"], 0),
    (["enumerate", "--seq", "factorial", "--m", "3"], 1),
    (["member", "--seq", "factorial", "--point", "digits:const:1"], 0),
    (["member", "--seq", "geometric:2", "--point", "rational:1/5"], 0),
    (["member", "--seq", "geometric:2", "--point", "digits:periodic:|0,1"], 0),
    (["member", "--seq", "factorial", "--point", "digits:floorfrac:1/2"], 0),
    (["member", "--seq", "factorial", "--point", "digits:support:powers:2:qminus1"], 0),
    (["member", "--seq", "override:geometric:2;at:powers:2;val:3", "--point", "rational:1/9"], 0),
    (["rho", "--seq", "geometric:2", "--point", "rational:1/5"], 0),
    (["rho", "--seq", "geometric:2", "--point", "rational:1/5", "--point2", "rational:1/8"], 0),
    (["rho", "--seq", "factorial", "--point", "digits:const:1", "--N", "10"], 0),
    (["ball", "--seq", "geometric:2", "--N", "10", "--eps", "1/4"], 0),
    (["ball", "--seq", "ratios:2,3:repeat", "--N", "6", "--test-n", "6"], 0),
    (["ball", "--seq", "geometric:2", "--N", "4", "--eps", "1", "--closed"], 0),
    (["xs", "--seq", "geometric:2", "--desc", "xs:const:2,2", "--N", "16"], 0),
    (["xs", "--seq", "override:geometric:2;at:powers:2;val:3", "--desc", "xs:doubling:4,4", "--N", "40", "--k", "2"], 0),
    (["approx", "--seq", "factorial", "--point", "digits:const:1", "--eps", "1/10"], 0),
    (["verify-prop-b", "--seq", "ratios:2,3:repeat", "--N", "6,8,10"], 0),
    (["verify-prop-c", "--seq", "geometric:2", "--desc", "xs:const:2,2", "--N", "32"], 0),
    (["verify-prop-c", "--seq", "override:geometric:2;at:powers:2;val:3", "--desc", "xs:doubling:4,4"], 0),
    (["--format", "text", "classify", "--seq", "geometric:2"], 0),
    (["member", "--seq", "nope", "--point", "rational:1/2"], 1),
    (["member", "--seq", "geometric:2", "--point", "rational:1/0"], 1),
    (["member", "--seq", "geometric:2"], 1),
    (["rho", "--seq", "doubleexp:2", "--point", "digits:const:1", "--caps", "bits=8"], 2),
    (["member", "--seq", "override:factorial;at:multiples:2;val:2", "--point", "digits:const:1"], 3),
    (["ball", "--seq", "geometric:2", "--N", "30", "--eps", "1/4"], 2),
    (["verify-prop-c", "--seq", "geometric:2", "--desc", "xs:const:1,2"], 1),
]
if with_verify:
    runs.append((["verify"], 0))

failures = 0


def run(args, env=None):
    return subprocess.run([cli] + args, capture_output=True, text=True, env=env)


for args, want in runs:
    first = run(args)
    ok = first.returncode == want
    msg = ""
    if ok and want in (0, 3) and "text" not in args:
        try:
            doc = json.loads(first.stdout)
            validator.validate(doc)
        except Exception as e:  # noqa: BLE001
            ok, msg = False, str(e)[:400]
        second = run(args)
        if second.stdout != first.stdout:
            ok, msg = False, "output differs between runs"
    if not ok:
        failures += 1
        print(f"FAIL {' '.join(args)}: exit {first.returncode} (want {want}) {msg} {first.stderr.strip()[:300]}")
    else:
        print(f"ok   {' '.join(args)}")

# CHARSUB_CAPS hits the same cap as --caps
env = dict(os.environ, CHARSUB_CAPS="grid=100")
r = run(["ball", "--seq", "geometric:2", "--N", "10", "--eps", "1/4"], env)
if r.returncode != 2:
    failures += 1
    print(f"FAIL CHARSUB_CAPS grid cap: exit {r.returncode}")
else:
    print("ok   CHARSUB_CAPS=grid=100 ball ... -> exit 2")

print(f"{len(runs) + 1 - failures}/{len(runs) + 1} CLI checks passed")
sys.exit(1 if failures else 0)
