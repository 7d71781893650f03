"""
Tests for root lattice arithmetic, the root tests and the Weyl sums s(w).
"""

import sys
import os

# Add the parent directory to the path so we can import roots
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from cartan import validate_gcm
from exceptions import NotInPositiveCone, NotSymmetrizable, ParseError
from presets import preset
from roots import (
    bilinear,
    enumerate_weyl_sums,
    format_root,
    is_positive_imaginary_root,
    is_real_root,
    is_root,
    norm,
    parse_root,
    positive_roots,
    reflect,
    require_positive,
    rho_pairing,
    weyl_apply,
)
from tests.utils import make_rng, random_word, word_weyl_sums

F = preset("F")
RANK2 = validate_gcm([[2, -3], [-3, 2]])
A1_1 = validate_gcm([[2, -2], [-2, 2]])


def test_bilinear_form():
    """Norms of the tabulated roots of F."""
    print("Testing bilinear form...")

    assert norm(F, (10, 10, 5)) == -50
    assert norm(F, (7, 7, 2)) == -20
    assert norm(F, (8, 10, 4)) == -40
    assert norm(F, (11, 11, 5)) == -60
    assert norm(F, (11, 14, 7)) == -80
    assert norm(F, (11, 11, 4)) == -56
    for i in range(3):
        simple = tuple(1 if j == i else 0 for j in range(3))
        assert norm(F, simple) == 2

    assert bilinear(F, (1, 0, 0), (0, 1, 0)) == -2
    assert bilinear(F, (7, 7, 2), (1, 2, 3)) == bilinear(F, (1, 2, 3), (7, 7, 2))

    b2 = validate_gcm([[2, -1], [-2, 2]])
    assert norm(b2, (1, 0)) == 4
    assert norm(b2, (0, 1)) == 2

    cyclic = validate_gcm([[2, -1, -1], [-2, 2, -1], [-1, -1, 2]])
    try:
        bilinear(cyclic, (1, 0, 0), (0, 1, 0))
        assert False, "Should have raised NotSymmetrizable"
    except NotSymmetrizable:
        pass  # Expected

    print("PASS: Bilinear form tests passed")


def test_reflect():
    print("Testing simple reflections...")

    assert reflect(RANK2, 0, (0, 1)) == (3, 1)
    assert reflect(RANK2, 0, (1, 0)) == (-1, 0)
    for alpha in [(1, 2, 3), (7, 7, 2), (0, 0, 1)]:
        for i in range(3):
            assert reflect(F, i, reflect(F, i, alpha)) == alpha

    try:
        reflect(F, 3, (1, 0, 0))
        assert False, "Should have raised ValueError"
    except ValueError:
        pass  # Expected

    print("PASS: Simple reflection tests passed")


def test_form_is_weyl_invariant():
    """(w alpha | w beta) = (alpha | beta) for random words up to length 6."""
    print("Testing Weyl invariance of the form...")

    rng = make_rng(1)
    for g in (F, RANK2, A1_1):
        for _ in range(40):
            word = random_word(rng, g.n, 6)
            alpha = tuple(rng.randint(-3, 5) for _ in range(g.n))
            beta = tuple(rng.randint(-3, 5) for _ in range(g.n))
            assert bilinear(g, weyl_apply(g, word, alpha), weyl_apply(g, word, beta)) == bilinear(g, alpha, beta)

    print("PASS: Weyl invariance tests passed")


def test_root_tests():
    print("Testing real and imaginary root tests...")

    assert is_real_root(F, (1, 0, 0))
    assert is_real_root(F, (-1, 0, 0))
    assert is_real_root(RANK2, (3, 1))
    assert not is_positive_imaginary_root(F, (1, 0, 0))

    assert is_positive_imaginary_root(A1_1, (1, 1))
    assert is_positive_imaginary_root(A1_1, (3, 3))
    assert is_positive_imaginary_root(F, (7, 7, 2))
    assert is_positive_imaginary_root(RANK2, (4, 5))
    assert not is_positive_imaginary_root(F, (-7, -7, -2))

    assert not is_root(F, (0, 0, 0))
    assert not is_root(F, (2, 0, 0))
    assert not is_root(F, (1, 0, 1))
    assert not is_root(F, (1, -1, 0))

    print("PASS: Root test tests passed")


def test_root_norm_signs():
    """Real roots have positive norm, imaginary roots non-positive norm."""
    print("Testing norm signs of positive roots...")

    for g in (F, RANK2, A1_1):
        shells = positive_roots(g, 8)
        assert all(shell == sorted(shell) for shell in shells.values())
        for h, shell in shells.items():
            for alpha in shell:
                if is_real_root(g, alpha):
                    assert norm(g, alpha) > 0, alpha
                else:
                    assert is_positive_imaginary_root(g, alpha)
                    assert norm(g, alpha) <= 0, alpha

    a2 = validate_gcm([[2, -1], [-1, 2]])
    assert positive_roots(a2, 3) == {1: [(0, 1), (1, 0)], 2: [(1, 1)], 3: []}

    print("PASS: Norm sign tests passed")


def test_rho_pairing():
    print("Testing rho pairing...")

    assert rho_pairing(F, (10, 10, 5)) == 25
    assert rho_pairing(RANK2, (4, 5)) == 9
    assert rho_pairing(F, (0, 1, 0)) == 1
    b2 = validate_gcm([[2, -1], [-2, 2]])
    # (rho|alpha_i) = (alpha_i|alpha_i)/2
    assert rho_pairing(b2, (1, 0)) == norm(b2, (1, 0)) // 2
    assert rho_pairing(b2, (0, 1)) == norm(b2, (0, 1)) // 2

    print("PASS: Rho pairing tests passed")


def test_weyl_sums_rank2():
    """s(w) for the rank 2 matrix [[2,-3],[-3,2]] up to height 5."""
    print("Testing Weyl sums of the rank 2 example...")

    sums = enumerate_weyl_sums(RANK2, 5)
    assert [w.sw for w in sums] == [(0, 1), (1, 0), (1, 4), (4, 1)]
    by_sw = {w.sw: w for w in sums}
    assert by_sw[(4, 1)].word == (0, 1)
    assert by_sw[(1, 4)].word == (1, 0)
    assert by_sw[(1, 0)].epsilon == 1
    assert by_sw[(4, 1)].epsilon == -1

    simple_only = enumerate_weyl_sums(F, 1)
    assert sorted(w.sw for w in simple_only) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert all(w.epsilon == 1 and w.length == 1 for w in simple_only)

    try:
        enumerate_weyl_sums(F, 0)
        assert False, "Should have raised ValueError"
    except ValueError:
        pass  # Expected

    print("PASS: Rank 2 Weyl sum tests passed")


def test_weyl_sums_match_word_oracle():
    """Breadth-first enumeration agrees with brute force over all words."""
    print("Testing Weyl sums against word enumeration...")

    for g, h in ((A1_1, 8), (RANK2, 8), (F, 6)):
        sums = enumerate_weyl_sums(g, h)
        found = {w.sw: w.length for w in sums}
        assert len(found) == len(sums)
        assert found == word_weyl_sums(g.a, h)
        heights = [w.height for w in sums]
        assert heights == sorted(heights)
        for w in sums:
            assert w.epsilon == (-1) ** (w.length + 1)
            assert sum(w.sw) >= w.length

    print("PASS: Weyl sum oracle tests passed")


def test_weyl_sums_increase_along_words():
    """Extending a reduced word strictly raises height(s(w))."""
    print("Testing height growth along reduced words...")

    sums = enumerate_weyl_sums(F, 10)
    by_word = {w.word: w for w in sums}
    for w in sums:
        if w.length > 1:
            prefix = by_word.get(w.word[:-1])
            if prefix is not None:
                assert prefix.height < w.height

    print("PASS: Height growth tests passed")


def test_root_text_forms():
    print("Testing root text forms...")

    assert parse_root("(7,7,2)") == (7, 7, 2)
    assert parse_root("7,7,2", 3) == (7, 7, 2)
    assert parse_root("[1, 0]") == (1, 0)
    assert format_root((7, 7, 2)) == "(7,7,2)"

    for bad, n in (("a,b", None), ("", None), ("1,2", 3)):
        try:
            parse_root(bad, n)
            assert False, f"Should have raised ParseError for {bad!r}"
        except ParseError:
            pass  # Expected

    for bad in ((0, 0, 0), (1, -1, 0)):
        try:
            require_positive(bad)
            assert False, "Should have raised NotInPositiveCone"
        except NotInPositiveCone:
            pass  # Expected

    print("PASS: Root text form tests passed")


if __name__ == "__main__":
    # Run all tests
    try:
        test_bilinear_form()
        test_reflect()
        test_form_is_weyl_invariant()
        test_root_tests()
        test_root_norm_signs()
        test_rho_pairing()
        test_weyl_sums_rank2()
        test_weyl_sums_match_word_oracle()
        test_weyl_sums_increase_along_words()
        test_root_text_forms()
        print("\nAll roots tests passed! SUCCESS")
    except Exception as e:
        print(f"\nTest failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
