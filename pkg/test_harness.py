#!/usr/bin/env python3
"""Batch harness: run the bundled problem pack and summarise the results."""

import argparse
import json
import re
import time
from pathlib import Path

import numpy as np
import pandas as pd
from tqdm import tqdm

from lambdasup import LambdaSupError, ProverConfig, load_problem
from prove_problem import prove

STATUS_RE = re.compile(r"^%\s*Status\s*:\s*(\w+)", re.MULTILINE)
MODE_RE = re.compile(r"^%\s*Mode\s*:\s*(.+)$", re.MULTILINE)


def expected_status(path: Path) -> str:
    m = STATUS_RE.search(path.read_text(encoding="utf-8"))
    return m.group(1) if m else ""


def pack_options(path: Path) -> dict:
    """Extra flags a problem asks for in its ``% Mode :`` header, e.g. ``lambda_sup=1024``."""
    m = MODE_RE.search(path.read_text(encoding="utf-8"))
    if not m:
        return {}
    out = {}
    for item in m.group(1).split():
        key, _, value = item.partition("=")
        if value in ("", "true"):
            out[key] = True
        elif value == "false":
            out[key] = False
        elif value.isdigit():
            out[key] = int(value)
        else:
            out[key] = value
    return out


def run_problem(path: Path, mode: str, timeout: float) -> dict:
    """Prove one problem file and record what happened."""
    result = {
        "file": path.name,
        "mode": mode,
        "expected": expected_status(path),
        "status": None,
        "seconds": None,
        "rules_used": [],
        "stats": {},
        "error": None,
    }
    start = time.monotonic()
    try:
        config = ProverConfig.for_mode(mode, timeout=timeout, **pack_options(path))
        problem = load_problem(path, with_choice=config.choice)
        outcome = prove(problem, config)
        result["status"] = outcome["status"]
        result["rules_used"] = outcome["rules_used"]
        result["stats"] = outcome["stats"]
    except (LambdaSupError, ValueError) as e:
        result["status"] = "InputError"
        result["error"] = str(e)
    except Exception as e:
        result["status"] = "Error"
        result["error"] = str(e)
    result["seconds"] = round(time.monotonic() - start, 3)
    return result


def solved(r: dict) -> bool:
    return r["status"] in ("Theorem", "Unsatisfiable")


def matches(r: dict) -> bool:
    if not r["expected"]:
        return solved(r)
    if r["expected"] in ("Satisfiable", "CounterSatisfiable"):
        return r["status"] in (r["expected"], "GaveUp")
    return r["status"] == r["expected"]


def main():
    parser = argparse.ArgumentParser(description="Run the bundled TPTP pack")
    parser.add_argument("--problems", default="problems", help="directory with .p files")
    parser.add_argument("--modes", default="full", help="comma-separated modes")
    parser.add_argument("--timeout", type=float, default=10.0)
    parser.add_argument("--output", default="test_results.json")
    args = parser.parse_args()

    input_dir = Path(args.problems)
    if not input_dir.exists():
        print(f"❌ Problem directory not found: {input_dir}")
        return

    files = sorted(input_dir.glob("**/*.p"))
    if not files:
        print(f"❌ No .p files found in {input_dir}")
        return

    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    print(f"🧪 Running {len(files)} problems in {len(modes)} mode(s)...")
    print("=" * 60)

    all_results = []
    for mode in modes:
        for path in tqdm(files, desc=mode, unit="problem"):
            r = run_problem(path, mode, args.timeout)
            all_results.append(r)
            if r["error"]:
                tqdm.write(f"❌ {path.name} [{mode}]: {r['status']} ({r['error']})")
            elif matches(r):
                tqdm.write(f"✅ {path.name} [{mode}]: {r['status']} in {r['seconds']}s")
            else:
                tqdm.write(f"⚠️  {path.name} [{mode}]: {r['status']}, expected {r['expected'] or 'a proof'}")

    output_file = Path(args.output)
    with open(output_file, "w", encoding="utf-8") as f:
        json.dump(all_results, f, indent=2)
    print(f"\n📊 Test results saved to: {output_file}")

    df = pd.DataFrame(all_results)
    df["solved"] = df.apply(solved, axis=1)
    df["as_expected"] = df.apply(matches, axis=1)
    summary = df.groupby("mode").agg(
        problems=("file", "count"),
        solved=("solved", "sum"),
        as_expected=("as_expected", "sum"),
        median_s=("seconds", lambda s: float(np.median(s))),
        max_s=("seconds", "max"),
    )
    print("\n📈 Summary:")
    print(summary.to_string())


if __name__ == "__main__":
    main()
