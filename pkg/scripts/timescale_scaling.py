"""Classicality time against dimension: closed form, bisection and the ln(N)/N law.

    python scripts/timescale_scaling.py --sigma 0 --max-log2 12
"""
import argparse
import math

from tomodeco.classicality import bisect_classicality_time, k_star, t_star
from tomodeco.lindblad import LindbladParams, interpolation_time


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sigma", type=float, default=0.0)
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--max-log2", type=int, default=10)
    args = ap.parse_args()

    ks = k_star(args.sigma)
    print(f"# sigma={args.sigma} gamma={args.gamma} k*={ks}")
    print("N,t_star,t_bisect,t_k_star,t_star*N/ln(N+1)")
    for e in range(1, args.max_log2 + 1):
        N = 2**e
        p = LindbladParams(args.gamma, N)
        ts = t_star(args.sigma, p)
        tb = bisect_classicality_time(args.sigma, p)
        tk = interpolation_time(ks, p)
        print(f"{N},{ts:.12g},{tb:.12g},{tk:.12g},{ts * N / math.log(N + 1):.15g}")


if __name__ == "__main__":
    main()
