"""Smoke tests for the python bindings; run with the built extension dir on
sys.path. Fails with a nonzero exit on the first broken check."""

import math
import os
import sys

import loopgeo


def approx(a, b, rel):
    assert abs(a - b) <= rel * abs(b), f"{a} !~ {b} (rel {rel})"


def main():
    rep = loopgeo.bounds_report(2, 1.0, 1.0, 2.0, c1=1.0, c2=1.0)
    approx(rep["r"], math.exp(-1.0), 1e-9)
    approx(rep["R"], math.exp(1.0), 1e-9)
    assert rep["width"]["level"] >= 1  # astronomically large, stored in log space

    data = os.environ.get("LOOPGEO_DATA_DIR")
    if data:
        s = loopgeo.load_off(os.path.join(data, "sphere_subdiv3.off"))
    else:
        s = loopgeo.make_icosphere(3)
    assert s.face_count == 1280
    approx(s.total_area(), 4 * math.pi, 0.05)

    inv = s.invariants(8, 1)
    approx(inv["diameter_est"], math.pi, 0.05)

    lens = loopgeo.geodesic_lengths(s, 0, 1.0, 2)
    approx(lens[0], 1.0, 0.02)
    approx(lens[1], 2 * math.pi - 1.0, 0.03)

    sh = loopgeo.shorten_path(s, 0, 17, 40)
    assert sh["converged"]
    assert sh["output_length"] <= sh["input_length"]
    approx(sh["output_length"], s.distance(0, 40), 0.03)

    cov = loopgeo.cover_summary(s, 1.2)
    assert cov["valid"] and cov["centers"] > 4

    cal = loopgeo.calibrate(s)
    assert cal["r_emp"] > 0 and cal["R_emp"] >= 1.0

    print("python smoke ok")


if __name__ == "__main__":
    sys.exit(main())
