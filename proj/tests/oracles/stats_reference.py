#!/usr/bin/env python3
"""Reference-oracle generator for the stats test fixtures.

Computes Shapiro-Wilk and Mann-Whitney U expectations with scipy.stats and
prints them as C++ initializer lines. The emitted values are frozen into
tests/test_stats.cpp and tests/acceptance_main.cpp; rerun this script only
when a fixture changes.

Usage: python3 tests/oracles/stats_reference.py
"""

import numpy as np
from scipy import stats

def cpp_list(xs):
    return "{" + ", ".join(f"{x!r}" for x in xs) + "}"

def main():
    rng = np.random.default_rng(20240817)

    fixtures = {
        # fixed 10-point sample from the spec's per-op example
        "sw10": [2.1, 3.4, 1.9, 4.2, 3.3, 2.8, 3.9, 2.2, 3.1, 2.7],
        # heavily bimodal 50-point fixture (normality should be rejected)
        "sw_bimodal50": list(np.round(np.concatenate([
            rng.normal(-4.0, 0.25, 25), rng.normal(4.0, 0.25, 25)]), 6)),
        # small n = 3 edge
        "sw3": [1.0, 2.0, 4.0],
        # near-normal 20-point sample
        "sw20": list(np.round(rng.normal(10.0, 2.0, 20), 6)),
        # skewed (exponential) 30-point sample
        "sw_exp30": list(np.round(rng.exponential(1.0, 30), 6)),
    }

    print("// ---- Shapiro-Wilk fixtures (scipy.stats.shapiro) ----")
    for name, xs in fixtures.items():
        w, p = stats.shapiro(xs)
        print(f"// {name}")
        print(f"static const std::vector<double> {name} = {cpp_list([float(x) for x in xs])};")
        print(f"static const double {name}_W = {float(w)!r};")
        print(f"static const double {name}_p = {float(p)!r};")

    print()
    print("// ---- Mann-Whitney U fixtures (scipy.stats.mannwhitneyu, two-sided) ----")
    a = np.round(rng.normal(0.50, 0.12, 125), 6)
    b = np.round(rng.normal(0.55, 0.12, 125), 6)
    res = stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic")
    print(f"static const std::vector<double> mwu_a125 = {cpp_list([float(x) for x in a])};")
    print(f"static const std::vector<double> mwu_b125 = {cpp_list([float(x) for x in b])};")
    print(f"static const double mwu125_U = {float(res.statistic)!r};")
    print(f"static const double mwu125_p = {float(res.pvalue)!r};")

    # tied data, asymptotic path
    c = [1.0, 2.0, 2.0, 3.0, 4.0, 4.0, 4.0, 5.0, 6.0, 7.0, 7.0, 8.0]
    d = [2.0, 2.0, 3.0, 3.0, 5.0, 5.0, 6.0, 8.0, 8.0, 9.0, 9.0, 10.0]
    res = stats.mannwhitneyu(c, d, alternative="two-sided", method="asymptotic")
    print(f"static const std::vector<double> mwu_ties_a = {cpp_list(c)};")
    print(f"static const std::vector<double> mwu_ties_b = {cpp_list(d)};")
    print(f"static const double mwu_ties_U = {float(res.statistic)!r};")
    print(f"static const double mwu_ties_p = {float(res.pvalue)!r};")

    # small exact case from the spec: a=[1,2] b=[3,4] -> p = 1/3
    res = stats.mannwhitneyu([1, 2], [3, 4], alternative="two-sided", method="exact")
    print(f"// exact a=[1,2] b=[3,4]: U={res.statistic!r} p={res.pvalue!r}")

if __name__ == "__main__":
    main()
