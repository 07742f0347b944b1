"""Regenerates the CSV fixtures in this directory.

top50_2017_reconstructed.csv: Nov-2017 TOP50 HPL entries rebuilt from each
entry's core count, (1 - alpha_eff) and per-core performance. R_Peak is
cores * p_single and R_Max = R_Peak * E with E = 1 / (k (1 - alpha) + alpha),
so deriving metrics from the rows returns the source pairs.

synthetic_timeline.csv: made-up machines whose best (1 - alpha) per year
follows 1e-3 (1993) -> 1e-7 (2018), plus three HPCG runs. Demo data only.
"""
import random

CORES_M = [10.649600, 3.120000, 0.361760, 0.560640, 1.572864, 0.622336, 0.556104, 0.705024,
           0.786432, 0.301056, 0.241920, 0.241920, 0.148716, 0.241808, 0.241108, 0.231424,
           0.185088, 0.185088, 0.220800, 0.522080, 0.458752, 0.144900, 0.393216, 0.145920,
           0.126468, 0.126468, 0.072800, 0.072800, 0.124200, 0.072000, 0.110160, 0.225984,
           0.152692, 0.092160, 0.147456, 0.086016, 0.089856, 0.089856, 0.074520, 0.186368,
           0.088992, 0.194616, 0.100064, 0.069600, 0.069600, 0.082944, 0.076032, 0.072000,
           0.042688, 0.174720]
ONE_MINUS_ALPHA = [3.273e-8, 1.991e-7, 8.094e-07, 9.656e-07, 1.096e-07, 1.590e-06, 1.507e-06,
                   1.040e-07, 2.191e-07, 1.221e-06, 6.399e-07, 3.636e-06, 4.028e-06, 3.064e-06,
                   8.052e-07, 2.748e-06, 1.689e-06, 1.560e-06, 1.225e-06, 1.642e-06, 3.756e-07,
                   7.842e-07, 4.383e-07, 2.250e-06, 6.107e-07, 6.107e-07, 9.811e-06, 9.811e-06,
                   3.036e-06, 6.173e-06, 9.318e-07, 2.446e-06, 5.204e-06, 1.246e-06, 6.743e-07,
                   3.160e-06, 8.635e-07, 8.635e-07, 1.365e-05, 4.464e-06, 2.677e-06, 1.718e-06,
                   4.815e-06, 2.997e-06, 2.997e-06, 1.243e-06, 4.628e-06, 2.347e-06, 9.587e-06,
                   2.772e-06]
COPROCESSOR = {2: 9.37, 42: 9.25, 50: 9.37}
GPU = {3: 70.0, 4: 48.4, 27: 84.2, 28: 84.2, 30: 83.9, 33: 36.7, 39: 79.4, 40: 25.2, 49: 69.4}
NONE = {1: 11.78, 5: 12.8, 6: 44.8, 7: 44.8, 8: 16.1, 9: 12.8, 10: 36.8, 11: 33.6, 12: 52.9,
        13: 66.96, 14: 44.8, 15: 29.5, 16: 41.6, 17: 40.0, 18: 36.8, 19: 30.4, 20: 18.4,
        21: 12.8, 22: 36.8, 23: 12.8, 24: 36.8, 25: 33.6, 26: 33.6, 29: 26.8, 31: 31.6,
        32: 21.6, 34: 35.2, 35: 21.6, 36: 41.6, 37: 33.6, 38: 33.6, 41: 35.4, 43: 36.8,
        44: 41.6, 45: 41.6, 46: 31.6, 47: 40.0, 48: 35.2}

HEADER = "name,year,rank,cores,rpeak_gflops,rmax_gflops,benchmark,accelerator"


def row(name, year, rank, cores, oma, p_single, bench, acc):
    r_peak = cores * p_single
    e = 1.0 / (cores * oma + (1.0 - oma))
    return f"{name},{year},{rank},{cores},{r_peak!r},{r_peak * e!r},{bench},{acc}"


def top50():
    lines = [HEADER]
    for i, (cm, oma) in enumerate(zip(CORES_M, ONE_MINUS_ALPHA)):
        rank = i + 1
        for table, acc in ((NONE, "none"), (GPU, "gpu"), (COPROCESSOR, "coprocessor")):
            if rank in table:
                p = table[rank]
                break
        name = "Sunway TaihuLight" if rank == 1 else f"top50-2017-rank{rank:02d}"
        lines.append(row(name, 2017, rank, round(cm * 1e6), oma, p, "HPL", acc))
    return lines


def timeline():
    rng = random.Random(20181)
    lines = [HEADER]
    for year in range(1993, 2019):
        best = 10 ** (-3 - 4 * (year - 1993) / 25)
        for j in range(3):
            oma = best * (1.0 if j == 0 else 10 ** rng.uniform(0.2, 1.0))
            cores = int(10 ** (3 + 4 * (year - 1993) / 25) * rng.uniform(0.5, 2.0))
            lines.append(row(f"synthetic-{year}-{j + 1}", year, j + 1, cores, oma, 10.0, "HPL", "none"))
    for year, cores, oma in ((2016, 10649600, 2.0e-6), (2017, 705024, 8.0e-6), (2018, 2414592, 4.0e-6)):
        lines.append(row(f"synthetic-hpcg-{year}", year, "", cores, oma, 30.0, "HPCG", "none"))
    return lines


if __name__ == "__main__":
    for fname, lines in (("top50_2017_reconstructed.csv", top50()), ("synthetic_timeline.csv", timeline())):
        with open(fname, "w") as f:
            f.write("\n".join(lines) + "\n")
