"""End-to-end checks of the punctlab CLI: schema validity, exit codes,
reproducibility and a few closed-form values."""

import csv
import json
import math
import os
import subprocess
import sys
import tempfile

import jsonschema


def run(binary, args, env=None, out=None):
    cmd = [binary] + args + (["--out", out] if out else [])
    proc = subprocess.run(cmd, capture_output=True, text=True, env=env)
    return proc


def load(path):
    with open(path) as f:
        return json.load(f)


def strip(report):
    report = dict(report)
    prov = dict(report["provenance"])
    prov.pop("timing_ms", None)
    report["provenance"] = prov
    return report


CASES = [
    ("metrics", ["metrics", "--punctured-length", "0.0018674427317079893", "--punctured-distance",
                 "0.0018674427317079893", "(-1)*0.0018674427317079893", "--poincare", "0", "0.5"], 0),
    ("diam", ["diam", "--fn", "z", "--radii", "1e-1:1e-6"], 0),
    ("lip", ["lip", "--fn", "z", "--center", "0", "--radius", "0.5", "--budget", "400"], 0),
    ("lip_invariance", ["lip", "--fn", "exp(1/z)", "--center", "0.3", "--radius", "0.1", "--budget", "400",
                        "--from-center", "0", "--from-radius", "1", "--alpha", "0.2*i", "--theta", "0.5"], 0),
    ("marty", ["marty", "--fn", "k*z", "--radius", "0.5", "--k-max", "12", "--budget", "200"], 0),
    ("zalcman", ["zalcman", "--fn", "k*z", "--k-max", "12", "--budget", "500"], 0),
    ("zalcman_normal", ["zalcman", "--fn", "z+1/k", "--k-max", "5", "--budget", "500"], 2),
    ("rescale", ["rescale", "--fn", "exp(1/z)", "--radii", "1e-1:1e-6"], 0),
    ("rescale_pole", ["rescale", "--fn", "1/z", "--radii", "1e-1:1e-6"], 0),
    ("lv", ["lv", "--fn", "exp(1/z)", "--radii", "1e-1:1e-6"], 0),
    ("julia", ["julia", "--fn", "exp(1/z)", "--radii", "1e-1:1e-4"], 0),
]


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    schema = load(schema_path)
    validator = jsonschema.Draft202012Validator(schema)
    failures = []

    def check(cond, what):
        if not cond:
            failures.append(what)
            print("FAIL", what)

    env = dict(os.environ)
    env["PUNCTLAB_SEED"] = "7"
    with tempfile.TemporaryDirectory() as tmp:
        reports = {}
        for name, args, code in CASES:
            a = os.path.join(tmp, name + "_a.json")
            b = os.path.join(tmp, name + "_b.json")
            pa = run(binary, args, env, a)
            pb = run(binary, args, env, b)
            check(pa.returncode == code, f"{name}: exit {pa.returncode}, expected {code}: {pa.stderr}")
            if pa.returncode not in (0, 2):
                continue
            ra, rb = load(a), load(b)
            errors = sorted(validator.iter_errors(ra), key=str)
            check(not errors, f"{name}: schema: {[e.message for e in errors[:3]]}")
            check(strip(ra) == strip(rb), f"{name}: payload differs between identical runs")
            check(ra["provenance"]["seed"] == 7, f"{name}: PUNCTLAB_SEED not recorded")
            reports[name] = ra

        # Serial and parallel kernels give the same payload.
        s = os.path.join(tmp, "serial.json")
        run(binary, CASES[2][1] + ["--serial"], env, s)
        rs, rp = strip(load(s)), strip(reports["lip"])
        rs["provenance"].pop("exec"), rp["provenance"].pop("exec")
        check(rs == rp, "lip: serial and parallel payloads differ")

        # --seed overrides the environment.
        o = os.path.join(tmp, "seed.json")
        run(binary, CASES[2][1] + ["--seed", "11"], env, o)
        check(load(o)["provenance"]["seed"] == 11, "--seed does not override PUNCTLAB_SEED")

        m = reports["metrics"]["result"]
        check(abs(m["punctured_length"][0] - 1.0) < 1e-12, "metrics: punctured length")
        check(abs(m["punctured_distance"] - math.acosh(1.125)) < 1e-9, "metrics: punctured distance")
        check(abs(m["poincare"] - math.atanh(0.5)) < 1e-15, "metrics: poincare distance")

        check(reports["rescale"]["result"]["case_tag"] == "PlaneLimit", "rescale exp(1/z): PlaneLimit")
        check(reports["rescale_pole"]["result"]["case_tag"] == "NoEssentialSingularity", "rescale 1/z")
        check(reports["zalcman"]["result"]["case_tag"] == "PlaneLimit", "zalcman k*z")
        check(reports["marty"]["result"]["label"] == "NonNormalSuspected", "marty k*z")
        check(reports["lv"]["result"]["found"] and reports["lv"]["result"]["diam_floor"] >= 1.9, "lv exp(1/z)")
        check(reports["lip_invariance"]["result"]["discrepancy"] <= 0.05, "lip invariance")
        check(abs(reports["lip"]["result"]["value"] - 1.0) < 1e-9, "lip z on D(0,1/2)")
        for e in reports["julia"]["result"]["entries"]:
            check(abs(e["value"] * e["r"] - 1.0) < 1e-6, f"julia at r={e['r']}")

        # Diameter CSV: header and a monotone vanishing profile.
        c = os.path.join(tmp, "diam.csv")
        run(binary, ["diam", "--fn", "z", "--radii", "1e-1:1e-6", "--csv", c], env, os.path.join(tmp, "d.json"))
        with open(c) as f:
            rows = list(csv.reader(f))
        check(rows[0] == ["radius", "diameter", "theta1", "theta2"], "diam csv header")
        d = [float(r[1]) for r in rows[1:]]
        check(len(d) == 6 and all(x > y for x, y in zip(d, d[1:])) and d[-1] <= 1e-5, "diam csv profile")

        # Usage and input errors exit with 1.
        check(run(binary, []).returncode == 1, "no subcommand")
        check(run(binary, ["lip", "--fn", "sin("]).returncode == 1, "syntax error")
        check(run(binary, ["diam", "--fn", "z", "--radii", "1e-1:3e-3"]).returncode == 1, "bad radii")
        check(run(binary, ["lip", "--fn", "z", "--budget", "50"]).returncode == 1, "small budget")
        check(run(binary, ["metrics", "--help"]).returncode == 0, "help")

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
