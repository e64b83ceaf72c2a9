from __future__ import annotations

import math
import threading
from fractions import Fraction

import pytest
import sympy
from sympy.polys.polyfuncs import symmetrize

from threepoint.exact_arith import hamming_weight, nu2
from threepoint.genus_coefficients import (
    CHERN,
    L_GENUS,
    PONTRJAGIN,
    TODD,
    CharNumberVector,
    FlavorMismatch,
    Partition,
    chern_to_pontrjagin_forms,
    coefficient_table,
    evaluate_genus,
    genus_linear_form,
    genus_polynomial,
    multiplicative_coefficient,
    partitions,
    s_closed_form,
    s_coeff,
    t_closed_form,
    t_coeff,
)


def _pentagonal_counts(n: int) -> list[int]:
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total, j = 0, 1
        while True:
            g1 = j * (3 * j - 1) // 2
            if g1 > m:
                break
            sign = 1 if j % 2 else -1
            total += sign * p[m - g1]
            g2 = j * (3 * j + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            j += 1
        p[m] = total
    return p


def test_partitions_examples():
    assert partitions(1) == [Partition((1,))]
    assert partitions(4) == [(1, 1, 1, 1), (1, 1, 2), (1, 3), (2, 2), (4,)]
    assert len(partitions(10)) == 42


def test_partition_counts_match_pentagonal_recurrence():
    counts = _pentagonal_counts(20)
    for k in range(1, 21):
        parts = partitions(k)
        assert len(parts) == counts[k]
        assert len(set(parts)) == len(parts)
        assert parts == sorted(parts)
        assert all(p.weight == k for p in parts)


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((2, 1))
    with pytest.raises(ValueError):
        Partition((0, 1))
    assert Partition.of((3, 1, 2)) == (1, 2, 3)
    with pytest.raises(ValueError):
        partitions(0)


def test_characteristic_series_start():
    # x/tanh x = 1 + x^2/3 - x^4/45 + 2x^6/945 ...
    assert [L_GENUS.series_coefficient(j) for j in range(4)] == [
        1, Fraction(1, 3), Fraction(-1, 45), Fraction(2, 945)
    ]
    # x/(1-e^-x) = 1 + x/2 + x^2/12 - x^4/720 ...
    assert [TODD.series_coefficient(j) for j in range(5)] == [
        1, Fraction(1, 2), Fraction(1, 12), 0, Fraction(-1, 720)
    ]


def test_genus_polynomial_examples():
    assert genus_polynomial(L_GENUS, 1)[(1,)] == Fraction(1, 3)
    assert genus_polynomial(TODD, 1)[(1,)] == Fraction(1, 2)
    l2 = genus_polynomial(L_GENUS, 2)
    assert l2[(2,)] == Fraction(7, 45)
    assert l2[(1, 1)] == Fraction(-1, 45)
    with pytest.raises(ValueError):
        genus_polynomial(L_GENUS, 0)


def _sympy_genus_polynomial(q_coeffs: list[Fraction], k: int) -> dict[tuple[int, ...], Fraction]:
    # independent oracle: expand prod Q(z_i) in k variables and let sympy symmetrize
    zs = sympy.symbols(f"z1:{k + 1}")
    total = sympy.Integer(1)
    for z in zs:
        total *= sum(sympy.Rational(c.numerator, c.denominator) * z**j for j, c in enumerate(q_coeffs[: k + 1]))
    poly = sympy.Poly(sympy.expand(total), *zs)
    top = sum(
        (coeff * sympy.prod(z**e for z, e in zip(zs, mono)) for mono, coeff in poly.terms() if sum(mono) == k),
        sympy.Integer(0),
    )
    sym, rest, defs = symmetrize(top, *zs, formal=True)
    assert rest == 0
    s_syms = [name for name, _ in defs]
    out = {}
    for mono, coeff in sympy.Poly(sympy.expand(sym), *s_syms).terms():
        parts = tuple(sorted(j + 1 for j, e in enumerate(mono) for _ in range(e)))
        out[parts] = Fraction(str(coeff))
    return out


@pytest.mark.parametrize("genus", [L_GENUS, TODD], ids=["L", "todd"])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_genus_polynomial_matches_sympy_symmetrization(genus, k):
    q = [genus.series_coefficient(j) for j in range(k + 1)]
    expected = _sympy_genus_polynomial(q, k)
    got = {tuple(p): c for p, c in genus_polynomial(genus, k).terms.items()}
    assert got == {p: c for p, c in expected.items() if c != 0}


@pytest.mark.parametrize("genus", [L_GENUS, TODD], ids=["L", "todd"])
def test_sparse_route_matches_full_polynomial(genus):
    for k in range(1, 10):
        poly = genus_polynomial(genus, k)
        for part in partitions(k):
            assert multiplicative_coefficient(genus, part) == poly[part], (k, part)


def test_s_coeff_examples():
    assert s_coeff((1,)) == Fraction(1, 3)
    assert s_coeff((2,)) == Fraction(7, 45)
    assert s_coeff((2, 2)) == (s_coeff((2,)) ** 2 - s_coeff((4,))) / 2
    # frozen from the engine, checked against the identity above
    assert s_coeff((2, 2)) == Fraction(-19, 14175)


def test_t_coeff_examples():
    assert t_coeff((2,)) == Fraction(1, 12)
    assert t_coeff((4,)) == Fraction(-1, 720)
    assert t_coeff((2, 2)) == Fraction(1, 240)


@pytest.mark.parametrize("k", range(1, 13))
def test_s_single_part_closed_form(k):
    assert s_coeff((k,)) == s_closed_form(k)
    assert genus_polynomial(L_GENUS, k)[(k,)] == s_closed_form(k)


@pytest.mark.parametrize("k", range(1, 13))
def test_t_single_part_closed_form(k):
    assert t_coeff((k,)) == t_closed_form(k)


@pytest.mark.parametrize("k", range(1, 17))
def test_nu2_single_part_is_weight_minus_one(k):
    assert nu2(s_coeff((k,))) == hamming_weight(k) - 1


@pytest.mark.parametrize("k", range(1, 9))
def test_nu2_doubled_part_bound(k):
    assert nu2(s_coeff((k, k))) >= hamming_weight(k) - 2


@pytest.mark.parametrize("k", [2, 4, 6, 8])
def test_doubled_part_identities(k):
    h = k // 2
    assert s_coeff((h, h)) == (s_coeff((h,)) ** 2 - s_coeff((k,))) / 2
    assert t_coeff((h, h)) == (t_coeff((h,)) ** 2 - t_coeff((k,))) / 2


def _cpn_chern_numbers(n: int) -> CharNumberVector:
    # c(CP^n) = (1+x)^(n+1) and x^n integrates to 1
    entries = {p: math.prod(math.comb(n + 1, i) for i in p) for p in partitions(n)}
    return CharNumberVector(CHERN, n, entries)


def _cpn_pontrjagin_numbers(n: int) -> CharNumberVector:
    # p(CP^n) = (1+x^2)^(n+1), n even
    entries = {p: math.prod(math.comb(n + 1, j) for j in p) for p in partitions(n // 2)}
    return CharNumberVector(PONTRJAGIN, n // 2, entries)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_todd_genus_of_projective_space_is_one(n):
    assert evaluate_genus(TODD, _cpn_chern_numbers(n)) == 1


@pytest.mark.parametrize("n", [2, 4, 6])
def test_signature_of_projective_space_is_one(n):
    assert evaluate_genus(L_GENUS, _cpn_pontrjagin_numbers(n)) == 1


def test_evaluate_genus_examples():
    numbers = CharNumberVector(PONTRJAGIN, 2, {(1, 1): 4, (2,): 7})
    assert evaluate_genus(L_GENUS, numbers) == 1
    assert evaluate_genus(TODD, CharNumberVector(CHERN, 4, {})) == 0
    assert evaluate_genus(L_GENUS, CharNumberVector(PONTRJAGIN, 1, {(1,): 3})) == 1


def test_evaluate_genus_flavor_mismatch():
    with pytest.raises(FlavorMismatch):
        evaluate_genus(TODD, CharNumberVector(PONTRJAGIN, 1, {(1,): 3}))


def test_char_number_vector_validation():
    with pytest.raises(ValueError):
        CharNumberVector(CHERN, 2, {(1,): 1})
    with pytest.raises(ValueError):
        CharNumberVector(CHERN, 2, {(2,): Fraction(1, 2)})
    v = CharNumberVector(CHERN, 2, {(1, 1): 9, (2,): 3})
    assert v[(2,)] == 3 and v[(1, 1)] == 9


def test_genus_linear_form_examples():
    assert genus_linear_form(L_GENUS, 2, [(2, 2), (4,)]) == {
        (2, 2): Fraction(1, 15),
        (4,): Fraction(14, 45),
    }
    assert genus_linear_form(TODD, 2, [(2, 2), (4,)]) == {
        (2, 2): Fraction(1, 240),
        (4,): Fraction(-1, 720),
    }
    assert genus_linear_form(TODD, 1, [(1, 1), (2,)]) == {
        (1, 1): Fraction(1, 12),
        (2,): Fraction(1, 12),
    }


def test_todd_linear_form_matches_full_polynomial():
    poly = genus_polynomial(TODD, 2)
    assert genus_linear_form(TODD, 1, [(1, 1), (2,)]) == {(1, 1): poly[(1, 1)], (2,): poly[(2,)]}


def test_chern_to_pontrjagin_dimension_eight():
    forms = chern_to_pontrjagin_forms(2, [(2, 2), (4,)])
    assert forms[(1, 1)] == {(2, 2): 4}
    assert forms[(2,)] == {(2, 2): 1, (4,): 2}
    assert forms.get(Partition((1,)), {}) == {}


@pytest.mark.parametrize("n", [2, 4, 6])
def test_chern_to_pontrjagin_on_projective_space(n):
    forms = chern_to_pontrjagin_forms(n // 2, partitions(n))
    chern = _cpn_chern_numbers(n)
    pont = _cpn_pontrjagin_numbers(n)
    for big_j, form in forms.items():
        assert sum(c * chern[p] for p, c in form.items()) == pont[big_j]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_vanishing_pattern_with_two_surviving_chern_numbers(k):
    forms = chern_to_pontrjagin_forms(k, [(k, k), (2 * k,)])
    nonzero = {p for p, f in forms.items() if f}
    assert nonzero == ({Partition((k // 2, k // 2)), Partition((k,))} if k % 2 == 0 else {Partition((k,))})


def test_coefficient_table_shape():
    table = coefficient_table(L_GENUS, 2)
    assert table == {
        "genus": "L",
        "k": 2,
        "coefficients": [
            {"partition": [1, 1], "value": "-1/45"},
            {"partition": [2], "value": "7/45"},
        ],
    }


def test_polynomial_cache_is_consistent_under_threads():
    results = []

    def work():
        results.append(dict(genus_polynomial(L_GENUS, 7).terms))

    threads = [threading.Thread(target=work) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)
    assert results[0][Partition((7,))] == s_closed_form(7)
