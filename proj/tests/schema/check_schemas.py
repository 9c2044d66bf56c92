"""Runs each subcommand and checks its JSON against the published schemas and its CSV against RFC 4180."""

import csv
import io
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource


def main() -> int:
    tool, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = {p.name: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(s)) for name, s in schemas.items()
    )

    with tempfile.TemporaryDirectory() as tmp:
        spec = pathlib.Path(tmp, "spec.json")
        spec.write_text("[1, 2, 3]")
        mat = pathlib.Path(tmp, "b.csv")
        mat.write_text("3,0\n0,4\n")
        runs = [
            ("estimate", ["estimate", "--spectrum", str(spec), "--p", "2", "--n", "5", "--seed", "3"]),
            ("estimate", ["estimate", "--matrix", str(mat), "--p", "2", "--n", "5", "--reps", "200"]),
            ("variance", ["variance", "--spectrum", str(spec), "--p", "2", "--n", "6"]),
            ("variance", ["variance", "--spectrum", str(spec), "--p", "3", "--n", "6", "--method", "single-sum"]),
            ("bounds", ["bounds", "--spectrum", str(spec), "--p", "2", "--n", "6"]),
            ("bounds", ["bounds", "--grid", "p=2:3,n=3:7,d=2:3"]),
            ("validate", ["validate", "--reps", "2000"]),
        ]
        failures = 0
        for kind, args in runs:
            validator = jsonschema.Draft202012Validator(schemas[f"{kind}.schema.json"], registry=registry)
            for fmt in ("json", "csv", "text"):
                proc = subprocess.run([tool, *args, "--format", fmt], capture_output=True)
                stdout = proc.stdout.decode("utf-8")
                if proc.returncode != 0:
                    print(f"FAIL {' '.join(args)} --format {fmt}: exit {proc.returncode}: {proc.stderr.decode()}")
                    failures += 1
                    continue
                if fmt == "json":
                    errors = list(validator.iter_errors(json.loads(stdout)))
                    for e in errors:
                        print(f"FAIL {' '.join(args)}: {e.message} at {list(e.absolute_path)}")
                    failures += len(errors)
                elif fmt == "csv":
                    rows = list(csv.reader(io.StringIO(stdout, newline=""), strict=True))
                    widths = {len(r) for r in rows}
                    if len(rows) < 2 or len(widths) != 1 or not stdout.endswith("\r\n"):
                        print(f"FAIL {' '.join(args)}: malformed CSV")
                        failures += 1
                elif not stdout.strip():
                    print(f"FAIL {' '.join(args)}: empty text output")
                    failures += 1
    print("schema checks:", "ok" if failures == 0 else f"{failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
