"""Print exact max/spread tables for a small population next to enumeration.

Usage: python scripts/exact_tables.py N k
"""
import sys

from germantank.distributions import PopulationModel, Variable, brute_force_table, pmf_table
from germantank.estimators import estimate_known_min, estimate_unknown_min


def main(n=10, k=3):
    n, k = int(n), int(k)
    pop = PopulationModel.of_size(n)
    for var in (Variable.MAX, Variable.SPREAD):
        if var is Variable.SPREAD and k < 2:
            continue
        table = pmf_table(pop, k, var)
        oracle = brute_force_table(pop, k, var)
        est = estimate_known_min if var is Variable.MAX else estimate_unknown_min
        print(f"{var.value}: N={n} k={k}  mean={table.mean()}  enumeration agrees: {table == oracle}")
        for v, p in table.as_dict().items():
            print(f"  {v:4d}  {str(p):>12s}  {float(p):.6f}  N_hat={est(v, k).value}")


if __name__ == "__main__":
    main(*sys.argv[1:])
