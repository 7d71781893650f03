"""
Tests for Cartan matrix validation, classification and diagram extensions.
"""

import sys
import os

import numpy as np

# Add the parent directory to the path so we can import cartan
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from cartan import (
    AlgebraKind,
    classify,
    classify_components,
    extend,
    highest_root,
    is_untwisted_affine,
    overextend,
    permutation_equivalent,
    validate_gcm,
)
from exceptions import DecomposableMatrix, NotGCM, NotSymmetrizable, WrongType
from presets import F_MATRIX, e8, e9, e10, e11, parse_matrix_text, preset


def test_validate_gcm():
    """Valid matrices get a symmetrizer, invalid ones raise NotGCM."""
    print("Testing validate_gcm...")

    g = validate_gcm([[2, -2], [-2, 2]])
    assert g.n == 2
    assert g.d == (1, 1)
    assert g.is_symmetric

    g = validate_gcm([[2, -3], [-3, 2]])
    assert g.d == (1, 1)

    for bad in ([[2, 1], [1, 2]], [[3, -1], [-1, 2]], [[2, -1], [0, 2]], [[2, -1, 0], [-1, 2]], []):
        try:
            validate_gcm(bad)
            assert False, f"Should have raised NotGCM for {bad}"
        except NotGCM:
            pass  # Expected

    print("PASS: validate_gcm tests passed")


def test_symmetrizer():
    """d is computed per component and B = diag(d) A is symmetric."""
    print("Testing symmetrization...")

    b2 = validate_gcm([[2, -1], [-2, 2]])
    assert b2.d == (2, 1)
    B = np.array(b2.b)
    assert np.array_equal(B, B.T)

    # Two components with independent scalings
    g = validate_gcm([[2, -1, 0, 0], [-2, 2, 0, 0], [0, 0, 2, -3], [0, 0, -1, 2]])
    assert g.d == (2, 1, 1, 3)
    B = np.array(g.b)
    assert np.array_equal(B, B.T)

    cyclic = validate_gcm([[2, -1, -1], [-2, 2, -1], [-1, -1, 2]])
    assert cyclic.d is None
    assert not cyclic.symmetrizable
    try:
        cyclic.b
        assert False, "Should have raised NotSymmetrizable"
    except NotSymmetrizable:
        pass  # Expected

    f = preset("F")
    from_array = validate_gcm(np.array(F_MATRIX, dtype=np.int64))
    assert from_array == f
    assert all(type(x) is int for row in from_array.a for x in row)

    print("PASS: Symmetrization tests passed")


def test_classify_examples():
    """Affine, hyperbolic and Lorentzian examples."""
    print("Testing classify...")

    t = classify(validate_gcm([[2, -2], [-2, 2]]))
    assert t.kind == AlgebraKind.AFFINE
    assert t.det == 0
    assert not t.hyperbolic

    t = classify(validate_gcm([[2, -3], [-3, 2]]))
    assert t.kind == AlgebraKind.INDEFINITE
    assert t.hyperbolic and t.compact_hyperbolic
    assert t.det == -5

    t = classify(preset("F"))
    assert t.kind == AlgebraKind.INDEFINITE
    assert t.hyperbolic
    assert not t.compact_hyperbolic
    assert t.lorentzian is True
    assert t.det == -2
    assert t.det_sign == -1

    assert classify(e8()).kind == AlgebraKind.FINITE
    assert classify(e8()).det == 1
    assert classify(e9()).kind == AlgebraKind.AFFINE

    t = classify(e10())
    assert t.hyperbolic and not t.compact_hyperbolic
    assert t.det == -1
    assert t.lorentzian is True

    t = classify(e11())
    assert t.kind == AlgebraKind.INDEFINITE
    assert not t.hyperbolic
    assert t.det == -2
    assert t.lorentzian is True

    print("PASS: classify example tests passed")


def test_rank2_grid():
    """[[2,-a],[-b,2]] is finite iff ab <= 3, affine iff ab = 4, hyperbolic iff ab > 4."""
    print("Testing rank 2 classification grid...")

    for a in range(1, 6):
        for b in range(1, 6):
            t = classify(validate_gcm([[2, -a], [-b, 2]]))
            if a * b <= 3:
                assert t.kind == AlgebraKind.FINITE, (a, b)
            elif a * b == 4:
                assert t.kind == AlgebraKind.AFFINE, (a, b)
            else:
                assert t.kind == AlgebraKind.INDEFINITE, (a, b)
                assert t.hyperbolic, (a, b)
            assert t.hyperbolic == (a * b > 4)

    print("PASS: Rank 2 grid tests passed")


def test_classify_permutation_invariant():
    """Simultaneous row/column permutations do not change the type."""
    print("Testing permutation invariance...")

    f = preset("F")
    base = classify(f)
    for order in ([2, 1, 0], [1, 0, 2], [0, 2, 1]):
        permuted = f.permuted(order)
        assert permutation_equivalent(f, permuted)
        assert classify(permuted) == base

    print("PASS: Permutation invariance tests passed")


def test_decomposable():
    """classify rejects decomposable input; classify_components handles it."""
    print("Testing decomposable matrices...")

    g = validate_gcm([[2, 0, 0], [0, 2, -2], [0, -2, 2]])
    try:
        classify(g)
        assert False, "Should have raised DecomposableMatrix"
    except DecomposableMatrix:
        pass  # Expected

    parts = classify_components(g)
    assert [comp for comp, _ in parts] == [(0,), (1, 2)]
    assert parts[0][1].kind == AlgebraKind.FINITE
    assert parts[1][1].kind == AlgebraKind.AFFINE

    print("PASS: Decomposable tests passed")


def test_highest_root():
    print("Testing highest root...")

    assert highest_root(validate_gcm([[2]])) == (1,)
    assert highest_root(validate_gcm([[2, -1], [-1, 2]])) == (1, 1)
    d4 = validate_gcm([[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]])
    assert highest_root(d4) == (1, 2, 1, 1)
    assert highest_root(e8()) == (2, 3, 4, 6, 5, 4, 3, 2)

    try:
        highest_root(validate_gcm([[2, -2], [-2, 2]]))
        assert False, "Should have raised WrongType"
    except WrongType:
        pass  # Expected

    print("PASS: Highest root tests passed")


def test_extend_and_overextend():
    """A1 -> A1^(1) -> F, and the E series."""
    print("Testing diagram extensions...")

    a1 = validate_gcm([[2]])
    affine = extend(a1)
    assert affine.a == ((2, -2), (-2, 2))
    assert is_untwisted_affine(affine)

    f = overextend(affine)
    assert permutation_equivalent(f, preset("F"))

    assert e9().n == 9 and is_untwisted_affine(e9())
    assert e10().n == 10
    assert e11().n == 11
    # The over-extending vertex is joined to the affine vertex by a single edge
    assert e10().a[0][1] == -1 and e10().a[1][0] == -1

    try:
        overextend(e8())
        assert False, "Should have raised WrongType"
    except WrongType:
        pass  # Expected

    try:
        extend(e9())
        assert False, "Should have raised WrongType"
    except WrongType:
        pass  # Expected

    try:
        extend(a1, attach=3)
        assert False, "Should have raised WrongType"
    except WrongType:
        pass  # Expected

    print("PASS: Diagram extension tests passed")


def test_overextensions_are_lorentzian():
    """X^{++} has det < 0 and one negative eigenvalue for finite X."""
    print("Testing over-extensions...")

    a2 = validate_gcm([[2, -1], [-1, 2]])
    d4 = validate_gcm([[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]])
    for finite in (validate_gcm([[2]]), a2, d4, e8()):
        t = classify(overextend(extend(finite)))
        assert t.det < 0, finite
        assert t.lorentzian is True, finite
        assert t.hyperbolic, finite

    print("PASS: Over-extension tests passed")


def test_matrix_text_forms():
    print("Testing matrix text forms...")

    g = parse_matrix_text("2,-2,0;-2,2,-1;0,-1,2")
    assert g == preset("F")
    assert parse_matrix_text('{"matrix": [[2,-2,0],[-2,2,-1],[0,-1,2]]}') == g
    assert parse_matrix_text(g.to_text()) == g
    assert preset("A1(3,3)").a == ((2, -3), (-3, 2))

    print("PASS: Matrix text form tests passed")


if __name__ == "__main__":
    # Run all tests
    try:
        test_validate_gcm()
        test_symmetrizer()
        test_classify_examples()
        test_rank2_grid()
        test_classify_permutation_invariant()
        test_decomposable()
        test_highest_root()
        test_extend_and_overextend()
        test_overextensions_are_lorentzian()
        test_matrix_text_forms()
        print("\nAll cartan tests passed! SUCCESS")
    except Exception as e:
        print(f"\nTest failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
