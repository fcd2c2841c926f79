"""Build photon-subtracted squeezed vacua and inspect their Fock expansions.

Constructs the same state for the harmonic ladder and for a deformed
ladder (trigonometric-well example), then prints the leading part of each
photon distribution side by side.  The deformation suppresses the tail of
the distribution: the deformed state needs far fewer Fock components at
the same tolerance.
"""

import numpy as np

from gpssvs import EVEN, Nonlinearity, SqueezeSpec, pssvs


def main() -> None:
    spec = SqueezeSpec(r=1.2, theta=0.4, m=1, parity=EVEN)
    print(f"state: r={spec.r}, theta={spec.theta}, m={spec.m}, "
          f"parity={spec.parity} ({spec.photons_removed} photons removed)\n")

    states = {}
    for label, nl in (("harmonic", Nonlinearity.harmonic()),
                      ("deformed", Nonlinearity.poschl_teller(1.5, 1.5))):
        st = pssvs(nl, spec)
        states[label] = st
        print(f"{label:9s} truncation {st.truncation:4d} components, "
              f"support up to |{st.photon_numbers[-1]}>, "
              f"relative tail bound {st.tail_bound:.2e}")

    print("\n n   P_harmonic   P_deformed")
    harm = dict(zip(states["harmonic"].photon_numbers,
                    states["harmonic"].probabilities))
    deform = dict(zip(states["deformed"].photon_numbers,
                      states["deformed"].probabilities))
    for n in states["deformed"].photon_numbers[:8]:
        print(f"{n:2d}   {harm.get(n, 0.0):.6f}     {deform.get(n, 0.0):.6f}")

    top = states["harmonic"].photon_numbers[np.argmax(
        states["harmonic"].probabilities)]
    print(f"\nmost likely photon number (harmonic): {top}")


if __name__ == "__main__":
    main()
