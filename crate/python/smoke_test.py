"""Smoke test for the squid_transfer extension module.

Build and install first:
    pip install maturin
    maturin develop --release -m crates/python/Cargo.toml
"""

import math
import sys

import squid_transfer as st


def main() -> int:
    tau = 1.5 * math.pi
    spectrum = st.SqueezedSpectrum(0.86)
    print(spectrum, "truncation error", spectrum.truncation_error())

    c = st.coefficients(0.86, tau)
    print(c)
    report = st.ground_state(0.86, tau).report()
    print(report)
    assert abs(report.e_npt - 2 * (c.d - c.b)) < 1e-12
    assert abs(report.concurrence - max(0.0, report.e_npt)) < 1e-10

    excited = st.evolve(0.6, 1.7, alpha=math.pi / 2, beta=math.pi / 2).report()
    print("|++> at r=0.6, tau=1.7:", excited.e_npt)

    sweep = st.sweep((0.0, 2.0, 41), (0.0, 3 * math.pi, 41))
    r, t, value = sweep.peak("e_npt")
    print(f"peak E_NPT {value:.4f} at r={r:.3f}, tau={t:.3f}")

    rho, e_avg, conv = st.average(0.86, tau, grid_n=16)
    print(f"preparation-averaged E_NPT {e_avg:.4f} (grid change {conv:.1e})")

    derived = st.CircuitParams().derive()
    print(f"omega={derived['omega']:.4e} rad/s, Omega={derived['rabi_omega']:.4e} rad/s")

    try:
        st.SqueezedSpectrum(-1.0)
    except ValueError as e:
        print("rejected:", e)
    else:
        raise AssertionError("negative squeezing accepted")

    print("ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
