"""The exact m = 1 certificate: every claim, exact endpoints, JSON surface."""
import json
import time
from fractions import Fraction as F

import numpy as np

from hext import certify_m1

EXPECTED_ORDER = [
    "L_value",
    "N_value",
    "delta_prime",
    "C_value",
    "LCplusN",
    "A_value",
    "B_value",
    "q_polynomial",
    "p_sign_at_6_5",
    "p_sign_at_13_10",
    "gamma0_unique",
    "gamma0_above_1_2",
    "gamma0_below_1_3",
    "q_min_bound",
    "v_prime_floor",
    "v2_upper_bound",
    "v2_below_target",
]


def test_all_claims_pass_quickly():
    t0 = time.perf_counter()
    cert = certify_m1()
    elapsed = time.perf_counter() - t0
    assert cert.all_pass
    assert elapsed < 1.0
    assert [c.id for c in cert.claims] == EXPECTED_ORDER


def test_exact_claim_values():
    cert = certify_m1()
    assert cert.claim("L_value").lhs == F(-33, 80)
    assert cert.claim("N_value").lhs == F(11, 8)
    assert cert.claim("delta_prime").lhs == 4
    assert cert.claim("C_value").lhs == F(22, 3)
    assert cert.claim("LCplusN").lhs == F(-33, 20)
    assert cert.claim("A_value").lhs == 9
    assert cert.claim("B_value").lhs == F(-50, 3)
    assert cert.claim("q_polynomial").lhs == 0
    assert cert.claim("p_sign_at_6_5").lhs == F(194, 375)
    assert cert.claim("p_sign_at_13_10").lhs == F(-159, 1000)
    assert cert.claim("v2_upper_bound").rhs == F(15, 2)
    assert cert.claim("v2_below_target").rhs == 8


def test_gamma0_certified_interval():
    cert = certify_m1()
    lo, hi = cert.details["gamma0_lo"], cert.details["gamma0_hi"]
    assert F(6, 5) < lo < hi < F(13, 10)
    assert hi - lo <= F(1, 10 ** 6)


def test_q_min_bound_against_dense_grid():
    """The certified lower bound must sit just below the dense-grid minimum."""
    cert = certify_m1()
    bound = cert.details["q_min_lower_bound"]
    g = np.linspace(1.0, 2.0, 200001)
    q = 3 * g ** 4 - 25 / 3 * g ** 3 + 22 / 3 * g
    grid_min = q.min()
    assert float(bound) <= grid_min
    assert grid_min - float(bound) < 1e-3
    assert bound > F(-9, 2)


def test_two_step_bound_values():
    cert = certify_m1()
    assert cert.details["P_at_3_2"] == F(73, 960)
    assert cert.details["P_at_2"] == F(-33, 20)
    u1 = cert.details["upper_at_3_2"]
    u2 = cert.details["upper_at_2"]
    assert F(534, 100) < u1 < F(535, 100)
    assert F(749, 100) < u2 <= F(15, 2)


def test_json_schema():
    cert = certify_m1()
    rows = json.loads(cert.to_json())
    assert isinstance(rows, list)
    assert len(rows) == len(EXPECTED_ORDER)
    for row in rows:
        assert set(row) == {"id", "lhs", "cmp", "rhs", "pass"}
        assert row["pass"] is True
        for side in ("lhs", "rhs"):
            p, q = row[side].split("/")
            int(p), int(q)
    byid = {r["id"]: r for r in rows}
    assert byid["LCplusN"]["lhs"] == "-33/20"
    assert byid["v2_upper_bound"]["rhs"] == "15/2"
