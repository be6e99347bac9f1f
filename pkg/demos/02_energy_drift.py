"""Integrate a hard nodoid and watch the conserved quantity hold.

Nodoids wind the turning angle sigma by a full turn every period, so a long
trace accumulates hundreds of radians while x and t stay bounded.  The
integrator propagates (cos sigma, sin sigma) instead of sigma itself, which
keeps the error control honest at any winding number, and re-runs itself at
tighter tolerance if the conserved quantity still drifts past the configured
bound.  This demo prints the drift for a heavily wound trace and shows the
retry machinery waking up on a deliberately tight bound.
"""

import numpy as np

from heisenberg_cmc.profile_ode import SolveConfig, energy, integrate


def main():
    # a nodoid that winds sigma by about -130 radians over arclength 25
    n, h, e = 1, 2.0, -0.125
    traj = integrate(n, h, e=e, config=SolveConfig(max_arclength=25.0))
    sig = traj.states[:, 2]
    vals = np.array([energy(row, n, h) for row in traj.states])
    drift = np.max(np.abs(vals - vals[0]))
    print(f"nodoid n={n} H={h} E={e}:")
    print(f"  sigma winds from {sig[0]:+.2f} to {sig[-1]:+.2f} rad")
    print(f"  energy drift over {traj.s[-1]:.0f} units of arclength: {drift:.3e}")
    print(f"  notes: {traj.notes or '(none)'}")

    # a tight drift bound makes the first attempt fail and retry
    cfg = SolveConfig(max_arclength=50.0, drift_tolerance=1e-11)
    traj = integrate(3, 0.25, e=0.0, config=cfg)
    print(f"\nsphere n=3 H=0.25 with drift bound 1e-11:")
    print(f"  final drift {traj.energy_drift():.3e}")
    for note in traj.notes:
        print(f"  note: {note}")


if __name__ == "__main__":
    main()
