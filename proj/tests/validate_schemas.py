"""Runs segsolve on a shipped scene and validates the JSON outputs."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

segsolve, source = sys.argv[1], pathlib.Path(sys.argv[2])
scene = source / "scenarios" / "example1.json"

with tempfile.TemporaryDirectory() as tmp:
    out = pathlib.Path(tmp)
    solve = subprocess.run([segsolve, "solve", "-s", scene, "-o", out / "solve", "--grid", "30", "--max-iters", "8"])
    if solve.returncode not in (0, 2):
        sys.exit(f"solve exited {solve.returncode}")
    br = subprocess.run([segsolve, "best-response", "-s", scene, "-o", out / "br", "--grid", "30", "--lambda", "0.5,0.5"])
    if br.returncode != 0:
        sys.exit(f"best-response exited {br.returncode}")
    for doc, schema in [(out / "solve" / "solution.json", "solution.schema.json"),
                        (out / "br" / "best_response.json", "best_response.schema.json")]:
        jsonschema.validate(json.loads(doc.read_text()), json.loads((source / "schema" / schema).read_text()))
        print(f"{doc.name}: valid")
