"""Self-similar shuffles: exact distances, Cauchy bounds, the value at ½ and
straight-shuffle approximation errors."""
import argparse
import math
from fractions import Fraction

from shufflecopula.norms import shuffle_dist_sq
from shufflecopula.shuffles import alternating_partial_sum, approx_by_shuffles, selfsimilar


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=10)
    ap.add_argument("--shift", type=int, default=0, choices=(0, 1))
    args = ap.parse_args()

    half = Fraction(1, 2)
    print("level  dist²(S_n, S_n-1)   dist(S_n, S_0)   Cauchy bound   f(1/2-)    f(1/2+)")
    for n in range(1, args.levels + 1):
        s, prev = selfsimilar(n, args.shift), selfsimilar(n - 1, args.shift)
        d = shuffle_dist_sq(s, prev)
        far = math.sqrt(shuffle_dist_sq(s, selfsimilar(0)))
        bound = (2 ** -0.5 - 2 ** (-(n + 1) / 2)) / (2 - math.sqrt(2))
        print(f"{n:5d}  {str(d):>16s}   {far:.6f}       {bound:.6f}     "
              f"{float(s.left_limit(half)):.6f}   {float(s(half)):.6f}")
    print(f"alternating series after {args.levels + 1} terms: {float(alternating_partial_sum(args.levels + 1)):.6f}")

    print("\nbins  dist²(S_8, straight)  2·L1")
    for bins in (4, 8, 16, 32, 64):
        res = approx_by_shuffles(selfsimilar(8, args.shift), bins)
        print(f"{bins:4d}  {res.dist_sq:.6f}              {res.lemma_bound:.6f}")


if __name__ == "__main__":
    main()
