"""Regenerates the bundled EV-scale stop-and-go cycles (1 Hz, UDDS-like).

The RCC versions are produced from these with
    evsim scale-cycle udds_N_ev.csv ../configs/rcc.cfg ../configs/rivian_r1t_sim.cfg --out udds_N_rcc.csv
"""

import numpy as np

MPH = 0.44704
# Acceleration limit, m/s^2; about 0.74 m/s^2 once scaled to the RCC.
ACCEL_LIMIT = 0.4

# Distances of the reference runs, m.
TARGET_DISTANCE = {"udds_1_ev.csv": 992.0, "udds_2_ev.csv": 1068.0}

# (time s, speed mph) breakpoints; speeds are rescaled to hit TARGET_DISTANCE.
CYCLES = {
    "udds_1_ev.csv": [
        (0, 0), (8, 0), (12, 3), (16, 12), (24, 24), (30, 29), (36, 31), (44, 30),
        (52, 32), (62, 29), (72, 27), (80, 24), (88, 16), (96, 6), (100, 0), (106, 0),
        (112, 10), (120, 20), (130, 23), (140, 21), (150, 14), (158, 4), (162, 0), (168, 0),
    ],
    "udds_2_ev.csv": [
        (0, 0), (6, 0), (10, 5), (16, 15), (22, 22), (28, 27), (34, 25), (40, 28),
        (48, 34), (56, 35), (64, 31), (70, 24), (76, 18), (82, 20), (90, 27), (98, 30),
        (106, 26), (114, 17), (120, 8), (124, 0), (130, 0), (136, 9), (144, 19),
        (152, 24), (160, 20), (168, 10), (173, 2), (175, 0), (180, 0),
    ],
}


def limit_rate(v, limit):
    """Clips 1 Hz speed steps to +/- limit without ever exceeding the input."""
    out = v.copy()
    for i in range(1, len(out)):
        out[i] = min(out[i], out[i - 1] + limit)
    for i in range(len(out) - 2, -1, -1):
        out[i] = min(out[i], out[i + 1] + limit)
    return out


def main():
    for name, points in CYCLES.items():
        t_pts, v_pts = np.array(points, dtype=float).T
        t = np.arange(0, t_pts[-1] + 1)
        shape = np.interp(t, t_pts, v_pts) * MPH
        scale = 1.0
        for _ in range(50):
            v = limit_rate(shape * scale, ACCEL_LIMIT)
            scale *= TARGET_DISTANCE[name] / np.trapezoid(v, t)
        v = np.round(limit_rate(shape * scale, ACCEL_LIMIT), 4)
        with open(name, "w") as f:
            f.write("time_s,speed_mps\n")
            for ti, vi in zip(t, v):
                f.write(f"{ti:g},{vi:g}\n")
        print(name, f"{np.trapezoid(v, t):.1f} m, {t[-1]:g} s")


if __name__ == "__main__":
    main()
