#!/usr/bin/env python3
"""Regenerate the CSV/text fixtures under fixtures/. Deterministic (fixed seeds)."""

import csv
import pathlib

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

# The 17 published obligor rows: (rating, ead, lgd). All are in the "Other" segment.
PUBLISHED_ROWS = [
    ("CC", 391967, 0.60), ("AA", 9725044, 0.60), ("CC", 1327760, 0.60), ("CC", 1134433, 0.60),
    ("CC", 296882, 0.60), ("CC", 708982, 0.60), ("CC", 71606, 0.60), ("CC", 1079607, 0.60),
    ("CC", 626049, 0.60), ("CC", 1781217, 0.65), ("CC", 1465135, 0.60), ("CC", 779251, 0.60),
    ("B", 200175, 0.65), ("BB", 297777, 0.60), ("BB", 342253, 0.60), ("CC", 139452, 0.60),
    ("AA", 314744, 0.60),
]
# Exposure that makes the printed loss-rate column consistent (e.g. 122,535.55 -> 0.01681%).
PUBLISHED_TOTAL_EAD = 728_945_000

HEADER = ["id", "rating", "segment", "ead", "guarantee", "days_past_due", "pd_override", "lgd_override"]


def synthetic(n=100, a=0.2, b=30.0, seed=20240901):
    """Loss rates r_i ~ Beta(a, b) on a portfolio of 100 exposure units.

    EAD_i = 100 r_i / sum(r) with PD = sum(r) and LGD = 1 gives expected loss
    100 r_i, so the loss rate of obligor i is exactly r_i.
    """
    rng = np.random.default_rng(seed)
    r = rng.beta(a, b, size=n)
    s = float(r.sum())
    assert 0.0 < s < 1.0, s
    rows = []
    for i, ri in enumerate(r):
        rows.append([f"S{i + 1:03d}", "BB", "Other", repr(float(100.0 * ri / s)), "NoGuarantee", 0, repr(s), 1])
    return rows


def published():
    rows = []
    for i, (rating, ead, lgd) in enumerate(PUBLISHED_ROWS):
        # 60% is the NonAdmissible base tier; 65% has no table entry and is an override.
        override = "" if lgd == 0.60 else lgd
        rows.append([f"T{i + 1:02d}", rating, "Other", ead, "NonAdmissible", 0, "", override])
    filler = PUBLISHED_TOTAL_EAD - sum(e for _, e, _ in PUBLISHED_ROWS)
    rows.append(["REST", "AA", "Other", filler, "NoGuarantee", 0, 0, ""])
    return rows


def write_csv(name, rows):
    with open(ROOT / name, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(HEADER)
        w.writerows(rows)


def main():
    ROOT.mkdir(exist_ok=True)
    write_csv("portfolio_synthetic.csv", synthetic())
    write_csv("portfolio_published.csv", published())
    draws = np.random.default_rng(7).beta(2.0, 5.0, size=10_000)
    (ROOT / "beta_2_5.txt").write_text("".join(f"{float(x)!r}\n" for x in draws))


if __name__ == "__main__":
    main()
