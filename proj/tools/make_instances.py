#!/usr/bin/env python3
"""Regenerate the shipped field-instance files.

Exact data (minimal polynomials, S-unit coordinates) is written by hand below; the
decimal embeddings and logarithms are evaluated with mpmath so the loader has
independent numbers to compare against.
"""
import json
import math
from fractions import Fraction
import sys
from pathlib import Path

import mpmath as mpm

DIGITS = 120
mpm.mp.dps = DIGITS + 10


def dec(x):
    return mpm.nstr(x, DIGITS, min_fixed=-mpm.inf, max_fixed=mpm.inf)


def period(f, kernel, c):
    return mpm.fsum(mpm.cos(2 * mpm.pi * ((c * h) % f) / f) for h in kernel)


def embed(coords, t):
    return mpm.fsum(mpm.mpf(Fraction(c).numerator) / Fraction(c).denominator * t**i
                    for i, c in enumerate(coords))


def class_reps(f, kernel):
    seen, reps = set(), []
    for a in range(1, f):
        if math.gcd(a, f) != 1 or a in seen:
            continue
        reps.append(a)
        seen.update((a * h) % f for h in kernel)
    return reps


def genuine(name, f, kernel, minpoly, units, s_prime, t, class_numbers):
    reps = class_reps(f, kernel)
    thetas = {c: period(f, kernel, c) for c in reps}
    out = {
        "name": name,
        "kind": "genuine",
        "base_field": "Q",
        "conductor": f,
        "kernel_subgroup": kernel,
        "minimal_polynomial": minpoly,
        "precision_digits": DIGITS,
        "embeddings": {str(c): dec(thetas[c]) for c in reps},
        "s_prime": [{"prime": p, "norm": str(p)} for p in s_prime],
        "T": [{"prime": q, "norm": str(q)} for q in t],
        "sunits": [],
        "class_numbers": class_numbers,
        "torsion_order": 2,
    }
    for uname, coords in units:
        out["sunits"].append({
            "name": uname,
            "coords": coords,
            "log_abs": {str(c): dec(mpm.log(abs(embed(coords, thetas[c])))) for c in reps},
        })
    return out


def synthetic():
    # C2 x C2 = <a> x <b>, r = 2; e_{S,2} picks the two characters with chi(a) != chi(b)
    logs = [
        [[mpm.log(3), -mpm.log(2), mpm.log(5) / 3, -mpm.log(7) / 5],
         [mpm.log(11) / 7, mpm.log(2) / 3, -mpm.log(3) / 2, mpm.log(13) / 11]],
        [[-mpm.log(5) / 2, mpm.log(17) / 3, mpm.log(2), -mpm.log(3) / 7],
         [mpm.log(19) / 5, -mpm.log(7) / 2, mpm.log(23) / 9, mpm.log(2) / 5]],
    ]
    values = {"0": mpm.log(2) / 3, "1": mpm.sqrt(2) * mpm.log(3), "2": mpm.sqrt(3) * mpm.log(5) / 2,
              "3": mpm.log(7) / 4}
    return {
        "name": "synthetic-c2xc2-r2",
        "kind": "synthetic",
        "r": 2,
        "group": [2, 2],
        "precision_digits": DIGITS,
        "torsion_order": 2,
        "ramified": [
            {"label": "p1", "norm": "11", "inertia": [[1, 0]], "decomposition": [[1, 0], [0, 1]], "frobenius": [0, 1]},
            {"label": "p2", "norm": "13", "inertia": [[0, 1]], "decomposition": [[1, 0], [0, 1]], "frobenius": [1, 0]},
        ],
        "s_prime": [{"label": "v", "norm": "19", "inertia": [], "decomposition": [[1, 1]], "frobenius": [1, 1]}],
        "T": [{"label": "q", "norm": "3", "inertia": [], "decomposition": [[1, 0]], "frobenius": [1, 0]}],
        "unit_module": {"free_rank": 2},
        "logs": [[[dec(x) for x in row] for row in unit] for unit in logs],
        "leading_values": {k: dec(v) for k, v in values.items()},
        "trivial_rth_coefficient": dec(-mpm.log(2 * mpm.pi) / 5),
    }


def main(outdir):
    outdir = Path(outdir)
    sqrt5_units = [("eps", ["1", "1"]), ("sqrt5", ["1", "2"]), ("seven", ["7", "0"])]
    files = {
        "q-sqrt5.json": genuine("Q(sqrt5)", 5, [1, 4], ["-1", "1", "1"], sqrt5_units, [7], [3], {"K": "1"}),
        "q-sqrt2.json": genuine("Q(sqrt2)", 8, [1, 7], ["-2", "0", "1"],
                                [("eps", ["1", "1"]), ("sqrt2", ["0", "1"]), ("three", ["3", "0"])], [3], [5],
                                {"K": "1"}),
        "bad-torsion.json": genuine("Q(sqrt5) with T = {2}", 5, [1, 4], ["-1", "1", "1"], sqrt5_units, [7], [2],
                                    {"K": "1"}),
        "synthetic-c2xc2-r2.json": synthetic(),
    }
    for fname, data in files.items():
        (outdir / fname).write_text(json.dumps(data, indent=2) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data")
