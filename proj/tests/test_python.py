"""Smoke tests for the Python bindings."""

import json
import sys

import betafreq


def check(cond, msg):
    if not cond:
        print("FAIL:", msg)
        sys.exit(1)


def main():
    check(betafreq.beta_n(1, 6) == "1.618034", "golden ratio decimal")
    check(betafreq.generalized_golden(2, 4) == "2.0000", "G(2) is exactly 2")

    csv = betafreq.critical_table(2, [1, 2, 3], "csv")
    lines = csv.strip().splitlines()
    check(lines[0] == "n,beta_n,upper_bound,reproduced", "table header")
    check(lines[1].startswith("1,1.618,"), "table row for n=1")

    art = betafreq.synthesize(2, 2, "auto", "1/2", ["1/3", "1/3", "1/3"], 3000)
    doc = json.loads(art)
    check(doc["header"]["M"] == 2, "artifact alphabet size")
    counts = [0, 0, 0]
    for chunk in doc["digits"]["chunks"]:
        for d in chunk:
            counts[d] += 1
    total = sum(counts)
    check(total == 3000, "digit budget respected")
    for k in range(3):
        check(abs(counts[k] / total - 1 / 3) < 0.1, f"frequency of digit {k}")

    report = json.loads(betafreq.validate(art))
    check(report["violations"] == [], "replay accepts the artifact")

    osc = betafreq.oscillate(2, 2, "auto", "1", [0, 1], {2: "1/2"}, 3000)
    osc_doc = json.loads(osc)
    check(osc_doc["header"]["mode"] == "oscillate", "oscillating mode recorded")

    profile = betafreq.branching_profile(1, 1, "poly:1,-1,-1@1,2", "1", 2)
    check(profile == [1, 2, 3], "golden-ratio branching profile")

    bound = betafreq.corollary_dim_bound(5, ["4/5", "3/20", "1/20"], "1.28")
    check(abs(bound - 2.034) <= 0.001, "worked dimension bound")
    local = betafreq.local_dim_bound(
        ["5/6", "1/6", "0"], ["4/5", "3/20", "1/20"], "1.28"
    )
    check(abs(local - bound) < 1e-9, "both bound routes agree")

    try:
        betafreq.synthesize(1, 1, "not-a-number", "1/2", ["1/2", "1/2"], 10)
    except ValueError:
        pass
    else:
        check(False, "malformed beta must raise")

    print("python smoke tests passed")


if __name__ == "__main__":
    main()
