#!/usr/bin/env python3
"""Regenerates the bundled sample extracts under data/datasets/.

Rows quoted in published tables (OEWS 2023 software developers, eight states)
are copied verbatim. All other values are deterministic illustrative stand-ins
shaped like the public QCEW/OEWS extracts: they exercise every glyph and code
path but are NOT official statistics. Each manifest says so and cites the
public source to download the real tables from.

    python3 tools/data/make_datasets.py data/datasets
"""
import csv
import json
import math
import os
import sys

import numpy as np

# 2020 census resident population, millions (rounded).
STATES = [
    ("AL", "Alabama", 5.02), ("AK", "Alaska", 0.73), ("AZ", "Arizona", 7.15),
    ("AR", "Arkansas", 3.01), ("CA", "California", 39.54), ("CO", "Colorado", 5.77),
    ("CT", "Connecticut", 3.61), ("DE", "Delaware", 0.99), ("DC", "District of Columbia", 0.69),
    ("FL", "Florida", 21.54), ("GA", "Georgia", 10.71), ("HI", "Hawaii", 1.46),
    ("ID", "Idaho", 1.84), ("IL", "Illinois", 12.81), ("IN", "Indiana", 6.79),
    ("IA", "Iowa", 3.19), ("KS", "Kansas", 2.94), ("KY", "Kentucky", 4.51),
    ("LA", "Louisiana", 4.66), ("ME", "Maine", 1.36), ("MD", "Maryland", 6.18),
    ("MA", "Massachusetts", 7.03), ("MI", "Michigan", 10.08), ("MN", "Minnesota", 5.71),
    ("MS", "Mississippi", 2.96), ("MO", "Missouri", 6.15), ("MT", "Montana", 1.08),
    ("NE", "Nebraska", 1.96), ("NV", "Nevada", 3.10), ("NH", "New Hampshire", 1.38),
    ("NJ", "New Jersey", 9.29), ("NM", "New Mexico", 2.12), ("NY", "New York", 20.20),
    ("NC", "North Carolina", 10.44), ("ND", "North Dakota", 0.78), ("OH", "Ohio", 11.80),
    ("OK", "Oklahoma", 3.96), ("OR", "Oregon", 4.24), ("PA", "Pennsylvania", 13.00),
    ("RI", "Rhode Island", 1.10), ("SC", "South Carolina", 5.12), ("SD", "South Dakota", 0.89),
    ("TN", "Tennessee", 6.91), ("TX", "Texas", 29.15), ("UT", "Utah", 3.27),
    ("VT", "Vermont", 0.64), ("VA", "Virginia", 8.63), ("WA", "Washington", 7.71),
    ("WV", "West Virginia", 1.79), ("WI", "Wisconsin", 5.89), ("WY", "Wyoming", 0.58),
]

# Regional wage level multiplier (rough cost-of-labor gradient).
HIGH_WAGE = {"CA", "WA", "MA", "NY", "NJ", "CT", "DC", "MD", "CO", "OR", "IL", "AK", "HI", "MN", "VA", "RI"}
LOW_WAGE = {"MS", "AR", "WV", "AL", "LA", "KY", "OK", "SD", "NM", "SC", "TN", "MO", "ID", "MT"}
NO_BOS = {"DC", "NJ", "RI"}  # every area is metropolitan

# Software developers, OEWS May 2023 (published table excerpt).
PUBLISHED_ROWS = {
    "AL": (0.76, 53.19, 1.5, 29.58, 37.73, 49.39, 64.57, 81.29),
    "AK": (0.08, 70.01, 4.6, 41.95, 52.27, 72.79, 84.83, 93.45),
    "AZ": (1.13, 61.56, 1.6, 37.72, 45.77, 59.22, 69.85, 84.83),
    "AR": (0.41, 42.37, 4.8, 14.13, 27.96, 44.3, 53.97, 64.05),
    "CA": (1.55, 83.55, 0.8, 49.64, 65.04, 81.09, 100.92, 108.97),
    "CO": (1.47, 69.92, 1.1, 41.62, 50.73, 64.89, 80.44, 99.25),
    "CT": (1.01, 61.75, 1.5, 37.51, 47.93, 60.14, 75.69, 89.63),
    "DE": (0.95, 63.29, 2.0, 44.08, 51.97, 63.31, 73.29, 84.04),
}

NY_COUNTIES = [
    # fips, name, approximate 2024 population
    ("36001", "Albany", 317000), ("36003", "Allegany", 46000), ("36005", "Bronx", 1385000),
    ("36007", "Broome", 197000), ("36009", "Cattaraugus", 76000), ("36011", "Cayuga", 75000),
    ("36013", "Chautauqua", 125000), ("36015", "Chemung", 82000), ("36017", "Chenango", 46000),
    ("36019", "Clinton", 79000), ("36021", "Columbia", 61000), ("36023", "Cortland", 46000),
    ("36025", "Delaware", 44000), ("36027", "Dutchess", 299000), ("36029", "Erie", 950000),
    ("36031", "Essex", 37000), ("36033", "Franklin", 47000), ("36035", "Fulton", 53000),
    ("36037", "Genesee", 57000), ("36039", "Greene", 48000), ("36041", "Hamilton", 5100),
    ("36043", "Herkimer", 60000), ("36045", "Jefferson", 115000), ("36047", "Kings", 2650000),
    ("36049", "Lewis", 26000), ("36051", "Livingston", 61000), ("36053", "Madison", 67000),
    ("36055", "Monroe", 750000), ("36057", "Montgomery", 49000), ("36059", "Nassau", 1390000),
    ("36061", "New York", 1660000), ("36063", "Niagara", 210000), ("36065", "Oneida", 229000),
    ("36067", "Onondaga", 468000), ("36069", "Ontario", 113000), ("36071", "Orange", 408000),
    ("36073", "Orleans", 39500), ("36075", "Oswego", 117000), ("36077", "Otsego", 58500),
    ("36079", "Putnam", 98000), ("36081", "Queens", 2320000), ("36083", "Rensselaer", 159000),
    ("36085", "Richmond", 493000), ("36087", "Rockland", 343000), ("36089", "St. Lawrence", 107000),
    ("36091", "Saratoga", 238000), ("36093", "Schenectady", 160000), ("36095", "Schoharie", 29500),
    ("36097", "Schuyler", 17500), ("36099", "Seneca", 33000), ("36101", "Steuben", 91500),
    ("36103", "Suffolk", 1530000), ("36105", "Sullivan", 79000), ("36107", "Tioga", 47500),
    ("36109", "Tompkins", 104000), ("36111", "Ulster", 182000), ("36113", "Warren", 65500),
    ("36115", "Washington", 60500), ("36117", "Wayne", 91000), ("36119", "Westchester", 1000000),
    ("36121", "Wyoming", 39500), ("36123", "Yates", 24500),
]

QUARTERS_FIG11 = [f"{y} Q{q}" for y in range(2020, 2026) for q in range(1, 5)][:21]
QUARTERS_COVID = [f"{y} Q{q}" for y in range(2019, 2022) for q in range(1, 5)]

NOTE = ("Illustrative stand-in values shaped like the public extract; not official "
        "statistics. Download the real table from the provenance URL to reproduce "
        "published figures.")


def wage_level(code):
    if code in HIGH_WAGE:
        return 1.18
    if code in LOW_WAGE:
        return 0.86
    return 1.0


def thousands(v):
    return f"{int(round(v)):,}"


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_manifest(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def qcew_all_industries(root, rng):
    d = os.path.join(root, "qcew-all-industries")
    os.makedirs(d, exist_ok=True)
    level_rows, long_rows = [], []
    for code, name, pop in STATES:
        estab = pop * 1e6 * rng.uniform(0.026, 0.036)
        emp0 = pop * 1e6 * rng.uniform(0.42, 0.50)
        wage0 = 1150 * wage_level(code) * rng.uniform(0.92, 1.08)
        trend = rng.uniform(0.006, 0.012)
        emp_series, wage_series = [], []
        for i, label in enumerate(QUARTERS_FIG11):
            q = i % 4
            covid = -0.12 if label == "2020 Q2" else (-0.05 if label == "2020 Q3" else 0.0)
            emp = emp0 * (1 + 0.004 * i + covid + rng.normal(0, 0.004))
            # Q1 bonus payments produce the sawtooth.
            saw = [0.09, -0.03, -0.02, 0.03][q]
            wage = wage0 * (1 + trend * i + saw + rng.normal(0, 0.006))
            emp_series.append(emp)
            wage_series.append(wage)
            long_rows.append([code, label, thousands(emp), f"{wage:.0f}"])
        emp_chg = 100 * (emp_series[20] - emp_series[16]) / emp_series[16]
        wage_chg = 100 * (wage_series[20] - wage_series[16]) / wage_series[16]
        level_rows.append([code, name, thousands(estab), f"{emp_chg:.2f}", f"{wage_chg:.2f}"])
    write_csv(os.path.join(d, "levels_2025q1.csv"),
              ["area_fips", "area_title", "qtrly_estabs", "oty_month3_emplvl_pct_chg",
               "oty_avg_wkly_wage_pct_chg"], level_rows)
    write_csv(os.path.join(d, "quarterly.csv"),
              ["area_fips", "period", "month3_emplvl", "avg_wkly_wage"], long_rows)
    write_manifest(os.path.join(d, "manifest.json"), {
        "id": "qcew-all-industries",
        "title": "QCEW all industries, states, Q1 2020 - Q1 2025",
        "atlas": "us-states-dc",
        "provenance": {"url": "https://data.bls.gov/maps/cew/us", "vintage": "2025 Q1", "note": NOTE},
        "sources": [
            {"file": "levels_2025q1.csv", "adapter": {
                "key_column": "area_fips",
                "columns": [
                    {"source": "qtrly_estabs", "name": "establishments", "unit": "count"},
                    {"source": "oty_month3_emplvl_pct_chg", "name": "emp_pct_change", "unit": "percent"},
                    {"source": "oty_avg_wkly_wage_pct_chg", "name": "wage_pct_change", "unit": "percent"}]}},
            {"file": "quarterly.csv", "adapter": {
                "key_column": "area_fips",
                "columns": [
                    {"source": "month3_emplvl", "name": "employment", "unit": "count"},
                    {"source": "avg_wkly_wage", "name": "avg_weekly_wage", "unit": "USD/week"}],
                "long_time": {"time_column": "period"}}}]})


def qcew_covid(root, rng):
    d = os.path.join(root, "qcew-covid-industries")
    os.makedirs(d, exist_ok=True)
    level_rows, long_rows = [], []
    for code, name, pop in STATES:
        total = pop * 1e6 * rng.uniform(0.42, 0.50)
        level_rows.append([code, name, thousands(total)])
        lh0 = total * rng.uniform(0.08, 0.14) * (1.5 if code in {"NV", "HI"} else 1.0)
        con0 = total * rng.uniform(0.04, 0.07)
        lh_shock = rng.uniform(0.35, 0.55) * (1.2 if code in {"HI", "NV"} else 1.0)
        con_shock = rng.uniform(-0.04, 0.16)
        hi_lag = 0.25 if code == "HI" else 0.0
        for i, label in enumerate(QUARTERS_COVID):
            if i < 5:
                lh_f, con_f = 1.0, 1.0
            elif i == 5:
                lh_f, con_f = 1 - lh_shock, 1 - con_shock
            else:
                k = (i - 5) / 6
                lh_f = 1 - lh_shock * (1 - k) * (1.0 + hi_lag * (1 - k))
                con_f = 1 - con_shock * (1 - k) ** 2
            s = 1 + 0.03 * math.sin(2 * math.pi * (i % 4) / 4)
            lh = lh0 * lh_f * s * (1 + rng.normal(0, 0.01))
            con = con0 * con_f * (1 + 0.06 * math.sin(2 * math.pi * ((i % 4) - 1) / 4)) * (1 + rng.normal(0, 0.015))
            long_rows.append([code, label, thousands(lh), thousands(con)])
    write_csv(os.path.join(d, "total_employment_2021q2.csv"),
              ["area_fips", "area_title", "month3_emplvl"], level_rows)
    write_csv(os.path.join(d, "supersector_quarterly.csv"),
              ["area_fips", "period", "leisure_hospitality_1026", "construction_1012"], long_rows)
    write_manifest(os.path.join(d, "manifest.json"), {
        "id": "qcew-covid-industries",
        "title": "QCEW leisure and hospitality vs construction employment, 2019 Q1 - 2021 Q4",
        "atlas": "us-states-dc",
        "provenance": {"url": "https://data.bls.gov/maps/cew/us", "vintage": "2021 Q4", "note": NOTE},
        "sources": [
            {"file": "total_employment_2021q2.csv", "adapter": {
                "key_column": "area_fips",
                "columns": [{"source": "month3_emplvl", "name": "total_employment_2021q2", "unit": "count"}]}},
            {"file": "supersector_quarterly.csv", "adapter": {
                "key_column": "area_fips",
                "columns": [
                    {"source": "leisure_hospitality_1026", "name": "leisure_hospitality", "unit": "count"},
                    {"source": "construction_1012", "name": "construction", "unit": "count"}],
                "long_time": {"time_column": "period"}}}]})


def oews_police(root, rng):
    d = os.path.join(root, "oews-police-2023")
    os.makedirs(d, exist_ok=True)
    rows = []
    for code, name, pop in STATES:
        lvl = wage_level(code)
        mean = 34.0 * lvl * rng.uniform(0.88, 1.12)
        lq = max(0.35, 1.0 + 0.9 * (1.0 - lvl) + rng.normal(0, 0.22) + (0.4 if code in {"NJ", "LA", "NY"} else 0.0))
        msa_spread = rng.uniform(0.05, 0.30) * (1.8 if code in {"CA", "FL"} else 1.0)
        msa_min = mean * (1 - msa_spread * 0.6)
        msa_max = mean * (1 + msa_spread * 0.7)
        msa_mean = (msa_min + msa_max) / 2 * rng.uniform(0.98, 1.03)
        if code in NO_BOS:
            bos = ["**", "**", "**"]
        else:
            bos_center = mean * rng.uniform(0.78, 0.93)
            sp = rng.uniform(0.02, 0.12)
            bos = [f"{bos_center * (1 - sp):.2f}", f"{bos_center * (1 + sp):.2f}", f"{bos_center:.2f}"]
        rows.append([code, name, f"{lq:.2f}", f"{mean:.2f}", f"{msa_min:.2f}", f"{msa_max:.2f}",
                     f"{msa_mean:.2f}"] + bos)
    write_csv(os.path.join(d, "police_patrol_33-3051.csv"),
              ["PRIM_STATE", "AREA_TITLE", "LOC_QUOTIENT", "H_MEAN", "MSA_H_MEAN_MIN", "MSA_H_MEAN_MAX",
               "MSA_H_MEAN_AVG", "BOS_H_MEAN_MIN", "BOS_H_MEAN_MAX", "BOS_H_MEAN_AVG"], rows)
    write_manifest(os.path.join(d, "manifest.json"), {
        "id": "oews-police-2023",
        "title": "OEWS 2023 Police and Sheriff's Patrol Officers (33-3051): state, MSA and BOS hourly wages",
        "atlas": "us-states-dc",
        "provenance": {"url": "https://www.bls.gov/oes/tables.htm", "vintage": "May 2023", "note": NOTE},
        "national": {"h_mean": 36.0},
        "sources": [{"file": "police_patrol_33-3051.csv", "adapter": {
            "key_column": "PRIM_STATE",
            "missing_markers": ["**", "*", "#", ""],
            "columns": [
                {"source": "LOC_QUOTIENT", "name": "lq", "unit": "ratio"},
                {"source": "H_MEAN", "name": "h_mean", "unit": "USD/hour"},
                {"source": "MSA_H_MEAN_MIN", "name": "msa_min", "unit": "USD/hour"},
                {"source": "MSA_H_MEAN_MAX", "name": "msa_max", "unit": "USD/hour"},
                {"source": "MSA_H_MEAN_AVG", "name": "msa_mean", "unit": "USD/hour"},
                {"source": "BOS_H_MEAN_MIN", "name": "bos_min", "unit": "USD/hour"},
                {"source": "BOS_H_MEAN_MAX", "name": "bos_max", "unit": "USD/hour"},
                {"source": "BOS_H_MEAN_AVG", "name": "bos_mean", "unit": "USD/hour"}]}}]})


def qcew_ny_manufacturing(root, rng):
    d = os.path.join(root, "qcew-ny-manufacturing")
    os.makedirs(d, exist_ok=True)
    rows = []
    for fips, name, pop in NY_COUNTIES:
        emp = rng.normal(-1.8, 2.5)
        wage = rng.normal(3.5, 2.8)
        if name == "Hamilton":
            emp, wage = -38.5, -22.0
        rows.append([fips, f"{name} County, New York", thousands(pop), f"{emp:.1f}", f"{wage:.1f}"])
    write_csv(os.path.join(d, "ny_manufacturing_2024q4.csv"),
              ["area_fips", "area_title", "popestimate2024", "oty_month3_emplvl_pct_chg",
               "oty_avg_wkly_wage_pct_chg"], rows)
    write_manifest(os.path.join(d, "manifest.json"), {
        "id": "qcew-ny-manufacturing",
        "title": "QCEW manufacturing (1013), New York counties, 2024 Q4 over-the-year change",
        "atlas": "ny-counties",
        "provenance": {"url": "https://data.bls.gov/maps/cew/us", "vintage": "2024 Q4",
                       "note": NOTE + " Populations are rounded approximations of the July 2024 county estimates."},
        "sources": [{"file": "ny_manufacturing_2024q4.csv", "adapter": {
            "key_column": "area_fips",
            "columns": [
                {"source": "popestimate2024", "name": "population_2024", "unit": "persons"},
                {"source": "oty_month3_emplvl_pct_chg", "name": "emp_pct_change", "unit": "percent"},
                {"source": "oty_avg_wkly_wage_pct_chg", "name": "wage_pct_change", "unit": "percent"}]}}]})


def oews_teachers(root, rng):
    d = os.path.join(root, "oews-teachers-2023")
    os.makedirs(d, exist_ok=True)
    rows = []
    for code, name, pop in STATES:
        lvl = wage_level(code)
        lq_sp = max(0.3, rng.normal(1.0, 0.28))
        if code == "WV":
            lq_sp = 2.1
        if code in {"WA", "OR"}:
            lq_sp = rng.uniform(0.5, 0.65)
        lq_gen = 1.0 + 0.15 * math.tanh(2 * (lq_sp - 1.0)) + rng.normal(0, 0.09)
        gen = 62.0 * lvl * rng.uniform(0.92, 1.08)
        if code == "WV":
            gen = 50.5
        if code in {"WA", "OR"}:
            gen = 84.0 + rng.uniform(0, 4)
        sp = gen * rng.uniform(0.97, 1.06)
        rows.append([code, name, f"{lq_sp:.2f}", f"{lq_gen:.2f}", thousands(gen * 1000), thousands(sp * 1000)])
    write_csv(os.path.join(d, "teachers_25-2021_25-2056.csv"),
              ["PRIM_STATE", "AREA_TITLE", "LQ_SPECIAL_ED", "LQ_GENERAL_ED", "A_MEAN_GENERAL_ED",
               "A_MEAN_SPECIAL_ED"], rows)
    write_manifest(os.path.join(d, "manifest.json"), {
        "id": "oews-teachers-2023",
        "title": "OEWS 2023 elementary teachers: general (25-2021) vs special education (25-2056)",
        "atlas": "us-states-dc",
        "provenance": {"url": "https://www.bls.gov/oes/tables.htm", "vintage": "May 2023", "note": NOTE},
        "sources": [{"file": "teachers_25-2021_25-2056.csv", "adapter": {
            "key_column": "PRIM_STATE",
            "columns": [
                {"source": "LQ_SPECIAL_ED", "name": "lq_special", "unit": "ratio"},
                {"source": "LQ_GENERAL_ED", "name": "lq_general", "unit": "ratio"},
                {"source": "A_MEAN_GENERAL_ED", "name": "wage_general", "unit": "USD/year"},
                {"source": "A_MEAN_SPECIAL_ED", "name": "wage_special", "unit": "USD/year"}]}}]})


def oews_software(root, rng):
    d = os.path.join(root, "oews-software-developers-2023")
    os.makedirs(d, exist_ok=True)
    rows = []
    for code, name, pop in STATES:
        if code in PUBLISHED_ROWS:
            vals = PUBLISHED_ROWS[code]
        else:
            lvl = wage_level(code)
            lq = max(0.1, rng.lognormal(-0.15, 0.45) * (1.3 if code in {"WA", "VA", "MA", "MD", "NJ", "UT"} else 1.0))
            mean = 60.0 * lvl * rng.uniform(0.9, 1.1)
            prse = rng.uniform(0.7, 4.0) if pop > 1.5 else rng.uniform(2.5, 6.0)
            med = mean * rng.uniform(0.95, 1.02)
            p25 = med * rng.uniform(0.74, 0.82)
            p10 = p25 * rng.uniform(0.72, 0.82)
            p75 = med * rng.uniform(1.16, 1.26)
            p90 = p75 * rng.uniform(1.10, 1.20)
            vals = (lq, mean, prse, p10, p25, med, p75, p90)
        rows.append([code] + [f"{v:.2f}".rstrip("0").rstrip(".") if i in (0, 2) else f"{v:.2f}"
                              for i, v in enumerate(vals)])
    # Published rows must come through verbatim.
    for r in rows:
        if r[0] in PUBLISHED_ROWS:
            r[1:] = [str(v) for v in PUBLISHED_ROWS[r[0]]]
    write_csv(os.path.join(d, "software_developers_15-1252.csv"),
              ["STATE", "LOCATION QUOTIENT", "H_MEAN", "MEAN_PRSE", "H_PCT10", "H_PCT25", "H_MEDIAN",
               "H_PCT75", "H_PCT90"], rows)
    write_manifest(os.path.join(d, "manifest.json"), {
        "id": "oews-software-developers-2023",
        "title": "OEWS 2023 Software Developers (15-1252): employment and hourly wages",
        "atlas": "us-states-dc",
        "provenance": {"url": "https://www.bls.gov/oes/2023/may/oes151252.htm", "vintage": "May 2023",
                       "note": "Rows AL, AK, AZ, AR, CA, CO, CT, DE are the published values. " + NOTE},
        "national": {"lq": 1.0, "h_mean": 66.0},
        "sources": [{"file": "software_developers_15-1252.csv", "adapter": {
            "key_column": "STATE",
            "missing_markers": ["*", "#", "**", ""],
            "columns": [
                {"source": "LOCATION QUOTIENT", "name": "lq", "unit": "ratio"},
                {"source": "H_MEAN", "name": "h_mean", "unit": "USD/hour"},
                {"source": "MEAN_PRSE", "name": "mean_prse", "unit": "percent"},
                {"source": "H_PCT10", "name": "p10", "unit": "USD/hour"},
                {"source": "H_PCT25", "name": "p25", "unit": "USD/hour"},
                {"source": "H_MEDIAN", "name": "p50", "unit": "USD/hour"},
                {"source": "H_PCT75", "name": "p75", "unit": "USD/hour"},
                {"source": "H_PCT90", "name": "p90", "unit": "USD/hour"}]}}]})


def main():
    root = sys.argv[1] if len(sys.argv) > 1 else "data/datasets"
    os.makedirs(root, exist_ok=True)
    for i, fn in enumerate([qcew_all_industries, qcew_covid, oews_police, qcew_ny_manufacturing,
                            oews_teachers, oews_software]):
        fn(root, np.random.RandomState(20260 + i))


if __name__ == "__main__":
    main()
