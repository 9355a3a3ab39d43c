import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksforge.cyclotomic import CycInt, cyc_root, inner_product, one, root_vector
from ksforge.ghmat import gh_search
from ksforge.ksset import (
    Coloring,
    ColoringStatus,
    KSPair,
    KSVector,
    build_ks,
    hadamard_product,
    is_valid_coloring,
    ks_export,
    ks_import,
    ks_stats,
    noncolor_check,
    scalar_multiple_pairs,
    verify_ks,
)
from ksforge.shadamard import SHadamard, from_gh

from oracles import float_distinct_count, float_inner, float_vector, has_exactly_one_marking


def as_exponents(vec):
    out = []
    for c in vec:
        (i,) = [k for k, x in enumerate(c.coeffs) if x]
        out.append(i)
    return out


def drop_basis(P, i):
    return KSPair(P.n, P.root_order, P.vectors, P.bases[:i] + P.bases[i + 1:])


def test_hadamard_product():
    x = root_vector([0, 1, 2, 2], 3)
    ones = root_vector([0, 0, 0, 0], 3)
    assert all(a.same_coeffs(b) for a, b in zip(hadamard_product(ones, x), x))
    y = root_vector([2, 2, 1, 0], 3)
    prod = hadamard_product(x, y)
    assert [a.same_coeffs(b) for a, b in zip(prod, root_vector([2, 0, 0, 2], 3))] == [True] * 4
    with pytest.raises(ValueError):
        hadamard_product(x, y[:2])


@settings(max_examples=250)
@given(st.integers(1, 12), st.data())
def test_unimodular_scaling_preserves_inner_product(L, data):
    n = data.draw(st.integers(1, 8))
    z = root_vector(data.draw(st.lists(st.integers(0, L - 1), min_size=n, max_size=n)), L)
    coeff_vec = st.lists(st.integers(-5, 5), min_size=L, max_size=L).map(lambda c: CycInt(L, tuple(c)))
    x = tuple(data.draw(st.lists(coeff_vec, min_size=n, max_size=n)))
    y = tuple(data.draw(st.lists(coeff_vec, min_size=n, max_size=n)))
    lhs = inner_product(hadamard_product(z, x), hadamard_product(z, y))
    assert (lhs - inner_product(x, y)).is_zero()
    assert (inner_product(hadamard_product(x, z), hadamard_product(y, z)) - inner_product(x, y)).is_zero()


def test_build_n6_shape(ks6):
    assert ks6.n == 6 and ks6.root_order == 3
    assert len(ks6.bases) == 7
    assert len(ks6.vectors) == 21 == math.comb(7, 2)
    assert ks6.memberships() == [2] * 21
    vecs = [v.coords for v in ks6.vectors]
    for a in range(21):
        for b in range(a + 1, 21):
            assert not all((x - y).is_zero() for x, y in zip(vecs[a], vecs[b]))
    floats = [float_vector(3, as_exponents(v)) for v in vecs]
    assert float_distinct_count(floats) == 21


def test_build_follows_label_rules(sh6, ks6):
    # sh6 comes from a normalized GH, so it is already dephased
    rows = sh6.exponents
    by_label = {lab: v for v in ks6.vectors for lab in v.labels}
    n = 6
    assert len(by_label) == math.comb(n + 1, 2)
    for s in range(2, n + 2):
        assert as_exponents(by_label[(1, s)].coords) == list(rows[s - 2])
    for s in range(3, n + 2):
        assert as_exponents(by_label[(2, s)].coords) == [2 * e % 3 for e in rows[s - 2]]
    for r in range(3, n + 2):
        for s in range(r + 1, n + 2):
            want = [(a + b) % 3 for a, b in zip(rows[r - 2], rows[s - 2])]
            assert as_exponents(by_label[(r, s)].coords) == want
    assert as_exponents(by_label[(1, 2)].coords) == [0] * n
    for r, basis in enumerate(ks6.bases, start=1):
        labels = {lab for idx in basis for lab in ks6.vectors[idx].labels}
        assert labels == {(min(r, i), max(r, i)) for i in range(1, n + 2) if i != r}


def test_build_dephases_internally(gh32):
    H = from_gh(gh32)
    shifted = SHadamard(6, 3, [[(e + j) % 3 for j, e in enumerate(r)] for r in H.exponents])
    assert shifted.exponents[0] != (0,) * 6
    P = build_ks(shifted)
    assert verify_ks(P).passed
    assert as_exponents(P.vectors[0].coords) == [0] * 6


def test_build_errors(gh31):
    with pytest.raises(ValueError, match="even"):
        build_ks(from_gh(gh31))
    with pytest.raises(ValueError):
        build_ks(SHadamard(4, 4, [[i * j % 4 for j in range(4)] for i in range(4)]))


def test_verify_n6(ks6):
    report = verify_ks(ks6)
    assert report.passed
    assert all(report.checks.values())


def test_orthogonality_in_floats(ks6):
    floats = [float_vector(3, as_exponents(v.coords)) for v in ks6.vectors]
    for basis in ks6.bases:
        for i, a in enumerate(basis):
            assert abs(float_inner(floats[a], floats[a]) - 6) < 1e-9
            for b in basis[i + 1:]:
                assert abs(float_inner(floats[a], floats[b])) < 1e-9


def test_build_n18(ks18):
    assert len(ks18.bases) == 19
    assert len(ks18.vectors) <= 171
    report = verify_ks(ks18)
    assert report.passed
    assert all(m % 2 == 0 for m in ks18.memberships())
    for v, m in zip(ks18.vectors, ks18.memberships()):
        assert m == 2 * len(v.labels)
    # merged vectors: count cross-checked against floating-point deduplication
    # of all 171 labelled vectors
    floats = [float_vector(3, as_exponents(v.coords)) for v in ks18.vectors for _ in v.labels]
    assert len(floats) == 171
    assert float_distinct_count(floats) == len(ks18.vectors) == 63


@pytest.mark.parametrize("g, lam", [(3, 2), (3, 4), (5, 2)])
def test_construction_verifies_for_searched_orders(g, lam):
    P = build_ks(from_gh(gh_search(g, lam)))
    assert len(P.bases) == g * lam + 1
    assert len(P.vectors) <= math.comb(g * lam + 1, 2)
    assert verify_ks(P).passed


def test_drop_basis_fails(ks6):
    report = verify_ks(drop_basis(ks6, 0))
    assert not report.passed
    assert report.checks["odd_bases"] is False
    assert report.checks["even_membership"] is False
    assert report.checks["orthogonality"] is True


def test_replace_with_scaled_duplicate_fails(ks6):
    basis = ks6.bases[0]
    ones_idx = next(i for i, v in enumerate(ks6.vectors) if (1, 2) in v.labels)
    assert ones_idx in basis
    victim = next(i for i in basis if i != ones_idx)
    doubled = KSVector(tuple(one(3) + one(3) for _ in range(6)), ks6.vectors[victim].labels)
    vectors = list(ks6.vectors)
    vectors[victim] = doubled
    report = verify_ks(KSPair(6, 3, tuple(vectors), ks6.bases))
    assert not report.passed
    assert report.checks["orthogonality"] is False
    assert {"check": "orthogonality", "basis": 0, "vectors": sorted([ones_idx, victim])} in report.failures or any(
        f["check"] == "orthogonality" and set(f["vectors"]) == {ones_idx, victim} for f in report.failures
    )


def test_basis_shape_checks(ks6):
    bases = list(ks6.bases)
    bases[0] = bases[0][:-1] + (bases[0][0],)
    report = verify_ks(KSPair(6, 3, ks6.vectors, tuple(bases)))
    assert report.checks["basis_shape"] is False
    with pytest.raises(ValueError):
        KSPair(6, 3, ks6.vectors, ((0, 1, 99),))


def test_zero_vector_rejected():
    with pytest.raises(ValueError):
        KSVector((CycInt(3, (1, 1, 1)), CycInt(3, (0, 0, 0))))


@pytest.mark.parametrize("k", [1, 2])
def test_phase_on_one_basis_keeps_verdict(ks6, k):
    vectors = list(ks6.vectors)
    z = cyc_root(3, k)
    for idx in ks6.bases[3]:
        v = vectors[idx]
        vectors[idx] = KSVector(tuple(z * c for c in v.coords), v.labels)
    P = KSPair(6, 3, tuple(vectors), ks6.bases)
    assert verify_ks(P).passed
    assert verify_ks(drop_basis(P, 2)).passed is False


def test_repeated_bases_allowed(ks6):
    # listing a basis three times keeps |B| odd but breaks membership parity
    P = KSPair(6, 3, ks6.vectors, ks6.bases + (ks6.bases[0], ks6.bases[0]))
    report = verify_ks(P)
    assert report.checks["odd_bases"] and report.checks["even_membership"]
    assert report.checks["label_multiplicity"] is False


# --- non-colorability ----------------------------------------------------------


def test_noncolor_n6(ks6):
    result = noncolor_check(ks6)
    assert result.status is ColoringStatus.NO_VALID_COLORING
    assert not has_exactly_one_marking(ks6.bases)


def test_noncolor_single_basis(ks6):
    P = KSPair(6, 3, ks6.vectors, ks6.bases[:1])
    assert not verify_ks(P).passed
    result = noncolor_check(P)
    assert result.status is ColoringStatus.FOUND_COLORING
    assert len(result.witness.marked) == 1
    assert result.witness.marked <= set(ks6.bases[0])
    assert is_valid_coloring(P, result.witness)


def test_noncolor_n18(ks18):
    assert noncolor_check(ks18, budget=100).status is ColoringStatus.BUDGET_EXCEEDED
    assert noncolor_check(ks18).status is ColoringStatus.NO_VALID_COLORING


def test_noncolor_after_dropping_basis(ks6):
    P = drop_basis(ks6, 0)
    result = noncolor_check(P)
    assert (result.status is ColoringStatus.FOUND_COLORING) == has_exactly_one_marking(P.bases)
    if result.witness is not None:
        assert is_valid_coloring(P, result.witness)


def _dummy_pair(num_vectors, bases):
    vectors = tuple(KSVector((one(1),)) for _ in range(num_vectors))
    return KSPair(1, 1, vectors, tuple(tuple(b) for b in bases))


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 7), st.data())
def test_noncolor_agrees_with_choice_enumeration(nv, data):
    idx = st.lists(st.integers(0, nv - 1), min_size=1, max_size=4, unique=True)
    bases = data.draw(st.lists(idx, min_size=1, max_size=5))
    P = _dummy_pair(nv, bases)
    result = noncolor_check(P)
    expected = has_exactly_one_marking(bases)
    assert (result.status is ColoringStatus.FOUND_COLORING) == expected
    if expected:
        assert is_valid_coloring(P, result.witness)


def test_is_valid_coloring():
    P = _dummy_pair(3, [[0, 1], [1, 2]])
    assert is_valid_coloring(P, Coloring(frozenset({1})))
    assert not is_valid_coloring(P, Coloring(frozenset({0})))


# --- stats and serialization ---------------------------------------------------


def test_stats_n6(ks6):
    stats = ks_stats(ks6)
    assert stats["num_vectors"] == 21 and stats["num_bases"] == 7 and stats["n"] == 6
    assert stats["memberships"] == {"2": 21}
    assert stats["label_multiplicity"] == {"1": 21}
    assert stats["vector_bound"] == 21
    assert stats["scalar_multiple_pairs"] == 0


def test_stats_bound(ks6, ks18):
    for P in (ks6, ks18):
        stats = ks_stats(P)
        assert stats["num_vectors"] <= math.comb(P.n + 1, 2) == stats["vector_bound"]


def test_scalar_multiple_diagnostic():
    v = root_vector([0, 1, 2], 3)
    w = tuple(cyc_root(3, 1) * c for c in v)
    u = root_vector([0, 2, 1], 3)
    P = KSPair(3, 3, (KSVector(v), KSVector(w), KSVector(u)), ())
    assert scalar_multiple_pairs(P) == [(0, 1)]
    # non-monomial coordinates go through the Cauchy-Schwarz test
    two = tuple(c + c for c in v)
    P = KSPair(3, 3, (KSVector(v), KSVector(two), KSVector(u)), ())
    assert scalar_multiple_pairs(P) == [(0, 1)]


def test_export_import_round_trip(ks6, tmp_path):
    path = tmp_path / "ks6.json"
    ks_export(ks6, path)
    P, report = ks_import(path)
    assert report.passed
    assert P.bases == ks6.bases
    assert [v.labels for v in P.vectors] == [v.labels for v in ks6.vectors]
    assert all(
        all(a.same_coeffs(b) for a, b in zip(v.coords, w.coords)) for v, w in zip(P.vectors, ks6.vectors)
    )
    assert ks_export(P) == ks_export(ks6)


def test_import_errors(ks6):
    doc = ks6.to_json()
    with pytest.raises(ValueError):
        ks_import({**doc, "kind": "gh"})
    with pytest.raises(ValueError):
        ks_import({k: v for k, v in doc.items() if k != "bases"})
    bad = {**doc, "vectors": [{"labels": []}] + doc["vectors"][1:]}
    with pytest.raises(ValueError):
        ks_import(bad)
    bad = {**doc, "bases": doc["bases"] + [[0, 500]]}
    with pytest.raises(ValueError):
        ks_import(bad)
    P, report = ks_import({**doc, "bases": doc["bases"][1:]})
    assert not report.passed
