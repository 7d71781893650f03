"""
Tests for the Bessel function and the Hardy-Ramanujan-Rademacher main terms.
"""

import sys
import os
import math

from scipy.special import iv

# Add the parent directory to the path so we can import asymptotics
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from asymptotics import (
    BESSEL_SWITCHOVER,
    bessel_i,
    bessel_i2,
    classical_partition_main,
    estimate_p_sigma,
    estimate_partition,
    hrr_error_scale,
    hrr_main_term,
    index_from_norm,
    p_sigma_leading,
)
from exceptions import OddNorm


def close(a, b, rel=1e-10):
    return abs(a - b) <= rel * abs(b)


def test_bessel_values():
    print("Testing I_nu against known values...")

    assert bessel_i2(0) == 0.0
    assert bessel_i(0, 0) == 1.0
    assert close(bessel_i2(1.0), 0.13574766976703831, 1e-14)

    for x in (0.1, 1.0, 7.5, 25.0, 29.9, 30.1, 45.0, 100.0, 300.0):
        for nu in (0, 1, 2, 3):
            assert close(bessel_i(nu, x), float(iv(nu, x))), (nu, x)

    for bad in ((-1, 1.0), (2, -1.0)):
        try:
            bessel_i(*bad)
            assert False, "Should have raised ValueError"
        except ValueError:
            pass  # Expected

    assert bessel_i2(1000.0) == math.inf

    print("PASS: Bessel value tests passed")


def test_bessel_recurrence():
    """I_{nu-1}(x) - I_{nu+1}(x) = (2 nu / x) I_nu(x)."""
    print("Testing the Bessel recurrence...")

    for x in (0.5, 5.0, 20.0, 45.0, 120.0):
        lhs = bessel_i(1, x) - bessel_i(3, x)
        assert close(lhs, 4.0 / x * bessel_i2(x), 1e-9), x

    print("PASS: Bessel recurrence tests passed")


def test_bessel_switchover_is_continuous():
    print("Testing continuity at the switchover...")

    below = bessel_i2(BESSEL_SWITCHOVER)
    above = bessel_i2(BESSEL_SWITCHOVER + 1e-9)
    assert close(below, above, 1e-8)

    print("PASS: Switchover tests passed")


def test_hrr_main_term():
    print("Testing the p_sigma main term...")

    expected = {10: 56.65, 20: 793.19, 25: 2437.16, 28: 4578.99, 30: 6867.52, 40: 44975.14}
    for n, value in expected.items():
        assert round(hrr_main_term(n), 2) == value, n

    for n in range(10, 41):
        estimate = estimate_p_sigma(n)
        assert estimate.exact is not None
        assert estimate.relative_error <= 0.02, n

    estimate = estimate_p_sigma(28)
    assert estimate.exact == 4576
    assert estimate.to_dict()["n"] == 28

    # The leading exponential form misses the 1 - 15/(8x) factor of I_2(x)
    for n in (200, 400, 800):
        x = 4.0 * math.pi * math.sqrt(n) / math.sqrt(23.0)
        ratio = hrr_main_term(n) / p_sigma_leading(n)
        assert abs(ratio - (1 - 15 / (8 * x))) < 2 / x ** 2, n

    assert hrr_error_scale(28) < hrr_main_term(28)

    try:
        hrr_main_term(0)
        assert False, "Should have raised ValueError"
    except ValueError:
        pass  # Expected

    print("PASS: Main term tests passed")


def test_estimate_limits():
    print("Testing estimates without exact values...")

    estimate = estimate_p_sigma(60, max_exact_order=40)
    assert estimate.exact is None
    assert estimate.relative_error is None
    assert estimate.main_term > 0

    print("PASS: Estimate limit tests passed")


def test_classical_partition_main():
    print("Testing the classical partition main term...")

    assert round(classical_partition_main(10), 3) == 48.104
    estimate = estimate_partition(100)
    assert estimate.exact == 190569292
    assert estimate.relative_error < 0.05

    print("PASS: Classical main term tests passed")


def test_index_from_norm():
    print("Testing norm to index conversion...")

    assert index_from_norm(-56) == 28
    assert index_from_norm(-2) == 1
    for bad in (-3, 0, 2):
        try:
            index_from_norm(bad)
            assert False, f"Should have raised OddNorm for {bad}"
        except OddNorm:
            pass  # Expected

    print("PASS: Norm index tests passed")


if __name__ == "__main__":
    # Run all tests
    try:
        test_bessel_values()
        test_bessel_recurrence()
        test_bessel_switchover_is_continuous()
        test_hrr_main_term()
        test_estimate_limits()
        test_classical_partition_main()
        test_index_from_norm()
        print("\nAll asymptotics tests passed! SUCCESS")
    except Exception as e:
        print(f"\nTest failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
