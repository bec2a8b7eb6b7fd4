"""Sweep both pump couplings towards the oscillation threshold for a scheme
and print the steady-state entanglement measures at each point."""

import argparse

import numpy as np

from paramcav import entanglement as ent
from paramcav import gaussian as gc
from paramcav import parametric as ps


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--scheme", choices=["cm", "bs"], default="cm")
    p.add_argument("--ratio", type=float, default=1.0, help="g2 / g1")
    p.add_argument("--points", type=int, default=9)
    p.add_argument("--max-frac", type=float, default=0.95)
    args = p.parse_args()
    name = args.scheme.upper()
    th = ps.oscillation_threshold(name, args.ratio)
    print(f"{name}: threshold g1 = {th:.6g} rad/s at g2/g1 = {args.ratio}")
    print(f"{'g1/g_th':>8} {'nu~_A':>8} {'nu~_B':>8} {'nu~_C':>8} {'N_tri':>8} {'S':>8}")
    for frac in np.linspace(args.max_frac / args.points, args.max_frac, args.points):
        g1 = frac * th
        V = ps.steady_state_output(*ps.scheme_preset(name, g1, args.ratio * g1))
        nus = [ent.ppt_test(V, b).nu_tilde_min for b in gc.single_mode_bipartitions(V)]
        s = ent.genuine_witness(V).s_min
        print(f"{frac:8.3f} " + " ".join(f"{x:8.4f}" for x in nus)
              + f" {ent.tripartite_negativity(V):8.4f} {s:8.4f}")


if __name__ == "__main__":
    main()
