"""Sign of the number-squeezing parameter across squeeze amplitude and depth.

N_s = var(n) - <n> is negative exactly when the photon statistics are
sub-Poissonian.  The sweep shows the pattern the deformation creates:
harmonic even states are never sub-Poissonian, while the deformed ladder
pushes N_s negative, unconditionally so for the odd family.
"""

import numpy as np

from gpssvs import EVEN, ODD, Nonlinearity, SqueezeSpec, number_stats, pssvs


def main() -> None:
    r_grid = np.linspace(0.2, 2.0, 10)
    m_grid = range(6)
    for label, nl in (("harmonic", Nonlinearity.harmonic()),
                      ("deformed", Nonlinearity.poschl_teller(1.5, 1.5))):
        for parity in (EVEN, ODD):
            vals = np.array([[number_stats(
                pssvs(nl, SqueezeSpec(r=float(r), theta=0.0, m=m,
                                      parity=parity))).n_squeeze
                for m in m_grid] for r in r_grid])
            neg = int(np.count_nonzero(vals < 0.0))
            print(f"{label:9s} {parity:4s}: N_s < 0 at {neg:3d}/{vals.size} "
                  f"grid points; min {vals.min():+.3f}, max {vals.max():+.3f}")

    print("\ndeformed odd family, m=1 (always sub-Poissonian):")
    nl = Nonlinearity.poschl_teller(1.5, 1.5)
    for r in (0.3, 1.0, 2.0):
        stats = number_stats(pssvs(nl, SqueezeSpec(r=r, theta=0.0, m=1,
                                                   parity=ODD)))
        print(f"  r={r:3.1f}: <n>={stats.mean_N:7.3f}  "
              f"N_s={stats.n_squeeze:+.3f}  Mandel Q={stats.mandel_q:+.3f}")


if __name__ == "__main__":
    main()
