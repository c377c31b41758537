"""Regenerate the synthetic benchmark coefficients shipped in the package.

Three groups of five inputs get linear/sin/cos coefficients of increasing
size and quadratic couplings of increasing scale, so that inputs 11-15 matter
most and 1-5 least. Values are rounded to four decimals.

    python scripts/generate_benchmark_coefficients.py > src/symfisher/models/data/benchmark_coefficients.txt
"""

import numpy as np

SEED = 1
GROUP_RANGES = [(0.0, 0.1), (0.3, 0.7), (0.9, 1.3)]
M_SCALES = (0.1, 0.25, 0.5)


def main():
    rng = np.random.default_rng(SEED)
    a = [np.concatenate([rng.uniform(lo, hi, 5) for lo, hi in GROUP_RANGES]) for _ in range(3)]
    s = np.repeat(M_SCALES, 5)
    M = rng.normal(size=(15, 15)) * np.sqrt(np.outer(s, s))
    fmt = lambda row: " ".join(f"{v:.4f}" for v in row)
    print("# synthetic three-group coefficient set, see scripts/generate_benchmark_coefficients.py")
    for name, vec in zip(("a1", "a2", "a3"), a):
        print(f"{name}:")
        print(fmt(vec))
    print("M:")
    for row in M:
        print(fmt(row))


if __name__ == "__main__":
    main()
