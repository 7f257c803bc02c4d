#!/usr/bin/env python3
"""Regenerates data/synthetic_panel.csv and data/main_areas.csv.

The panel is a 5-country x 8-discipline x 24-year (1996..2019) fixture with
persistent country specialization, slow drift (so advantage flags flip
between periods), scattered zero cells, a few absent rows and a few empty
citation fields. Deterministic for a fixed seed.
"""

import csv
import math
import pathlib

import numpy as np

SEED = 7
YEARS = list(range(1996, 2020))
COUNTRIES = ["ARG", "BRA", "CHN", "DEU", "USA"]
DISCIPLINES = [
    "Agronomy and Crop Science",
    "Biochemistry",
    "Catalysis",
    "Demography",
    "Ecology, Evolution and Behavior",
    "Fisheries",
    "Genetics",
    "Hydrology",
]
AREAS = {
    "Agronomy and Crop Science": "Life Sciences",
    "Biochemistry": "Life Sciences",
    "Catalysis": "Physical Sciences",
    "Demography": "Social Sciences",
    "Ecology, Evolution and Behavior": "Life Sciences",
    "Fisheries": "Life Sciences",
    "Genetics": "Health Sciences",
    "Hydrology": "Physical Sciences",
}

COUNTRY_SCALE = {"ARG": 130, "BRA": 420, "CHN": 2300, "DEU": 950, "USA": 5200}
COUNTRY_TREND = {"ARG": 1.012, "BRA": 1.03, "CHN": 1.055, "DEU": 1.008, "USA": 1.018}
WORLD_SHARE = [0.10, 0.22, 0.08, 0.05, 0.12, 0.06, 0.24, 0.13]
CITE_RATE = [6.0, 14.0, 11.0, 4.0, 9.0, 5.0, 16.0, 7.0]


def simulate(rng):
    n_c, n_d, n_t = len(COUNTRIES), len(DISCIPLINES), len(YEARS)
    spec = np.empty((n_c, n_d, n_t))
    qual = np.empty((n_c, n_d, n_t))
    spec[:, :, 0] = rng.normal(0.0, 1.0, size=(n_c, n_d))
    qual[:, :, 0] = rng.normal(0.0, 1.0, size=(n_c, n_d))
    for t in range(1, n_t):
        spec[:, :, t] = 0.88 * spec[:, :, t - 1] + rng.normal(0.0, 0.35, size=(n_c, n_d))
        qual[:, :, t] = 0.90 * qual[:, :, t - 1] + rng.normal(0.0, 0.25, size=(n_c, n_d))

    docs = np.zeros((n_c, n_d, n_t), dtype=int)
    cites = np.zeros((n_c, n_d, n_t), dtype=int)
    for ci, country in enumerate(COUNTRIES):
        for di in range(n_d):
            for ti in range(n_t):
                level = (
                    COUNTRY_SCALE[country]
                    * COUNTRY_TREND[country] ** ti
                    * WORLD_SHARE[di]
                    * math.exp(0.75 * spec[ci, di, ti])
                    * math.exp(rng.normal(0.0, 0.12))
                )
                docs[ci, di, ti] = max(0, round(level))
                rate = CITE_RATE[di] * math.exp(0.45 * qual[ci, di, ti])
                cites[ci, di, ti] = max(0, round(docs[ci, di, ti] * rate / 10.0))
    return docs, cites


def sprinkle_gaps(rng, docs, cites):
    """Zero cells, absent rows and blank citation fields, away from 2019."""
    n_c, n_d, n_t = docs.shape
    flat = [(c, d, t) for c in range(n_c) for d in range(n_d) for t in range(n_t - 1)]
    picks = rng.choice(len(flat), size=30, replace=False)
    zero_cells = [flat[i] for i in picks[:12]]
    zero_cites = [flat[i] for i in picks[12:20]]
    absent = {flat[i] for i in picks[20:25]}
    blank_cites = {flat[i] for i in picks[25:]}
    for c, d, t in zero_cells:
        docs[c, d, t] = 0
        cites[c, d, t] = 0
    for c, d, t in zero_cites:
        cites[c, d, t] = 0
    return absent, blank_cites


def rca_matrix(counts):
    total_c = counts.sum(axis=1, keepdims=True)
    total_d = counts.sum(axis=0, keepdims=True)
    world = counts.sum()
    with np.errstate(divide="ignore", invalid="ignore"):
        return (counts / total_c) / (total_d / world)


def check(docs, cites):
    docs_2019 = docs[:, :, YEARS.index(2019)].sum(axis=1)
    assert (docs_2019 >= 100).all(), docs_2019

    endpoints = [1996, 2000, 2004, 2008, 2012, 2016, 2019]
    for counts in (docs, cites):
        for year in endpoints:
            r = rca_matrix(counts[:, :, YEARS.index(year)].astype(float))
            flags = np.nan_to_num(r) >= 1.0
            assert flags.any(axis=1).all(), (year, "every country needs some advantage")
        transitions = set()
        for start, end in zip(endpoints[:-1], endpoints[1:]):
            f0 = np.nan_to_num(rca_matrix(counts[:, :, YEARS.index(start)].astype(float))) >= 1
            f1 = np.nan_to_num(rca_matrix(counts[:, :, YEARS.index(end)].astype(float))) >= 1
            transitions |= {(a, b) for a, b in zip(f0.ravel(), f1.ravel())}
            lt = ((~f0).sum(), (f0).sum())
            assert min(lt) >= 8, (start, lt, "both subsamples need mass")
        assert transitions == {(False, False), (False, True), (True, False), (True, True)}


def main():
    rng = np.random.default_rng(SEED)
    docs, cites = simulate(rng)
    absent, blank_cites = sprinkle_gaps(rng, docs, cites)
    check(docs, cites)

    root = pathlib.Path(__file__).resolve().parent.parent
    data_dir = root / "data"
    data_dir.mkdir(exist_ok=True)

    with open(data_dir / "synthetic_panel.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["country", "discipline", "year", "documents", "citations"])
        # Non-canonical row order on purpose; ingestion sorts.
        for ti, year in enumerate(YEARS):
            for di, disc in enumerate(DISCIPLINES):
                for ci, country in enumerate(COUNTRIES):
                    if (ci, di, ti) in absent:
                        continue
                    c = "" if (ci, di, ti) in blank_cites else str(cites[ci, di, ti])
                    w.writerow([country, disc, year, docs[ci, di, ti], c])

    with open(data_dir / "main_areas.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["discipline", "main_area"])
        for disc in DISCIPLINES:
            w.writerow([disc, AREAS[disc]])

    print("wrote", data_dir / "synthetic_panel.csv")
    print("wrote", data_dir / "main_areas.csv")


if __name__ == "__main__":
    main()
