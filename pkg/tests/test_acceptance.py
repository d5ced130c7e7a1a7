"""End-to-end acceptance checks, one test per criterion.

Each test carries a ``criterion`` marker; the session summary prints one
PASS/FAIL line per criterion.  All comparisons are exact.
"""

import itertools
import random
import time

import pytest

from milnor_complement.cli import fixture_text, main
from milnor_complement.combinatorics import (
    SimplicialComplex,
    arrangement_of,
    complement_complex,
    from_mask,
    ideal_from_supports,
    union_ideal,
)
from milnor_complement.complement import (
    Connectivity,
    circle_factor_test,
    complement_report,
    goresky_macpherson_betti,
    hochster_homology_of_complex,
    simply_connected_codim_check,
    trim,
)
from milnor_complement.dga import (
    build_model,
    check_associativity,
    check_leibniz,
    check_square_zero,
    formality_probe,
)
from milnor_complement.linalg import IntMatrix, determinant, invariant_factors, smith_normal_form
from milnor_complement.milnor import milnor_polynomial, milnor_report, quasi_homogeneous_weights
from milnor_complement.moment_angle import oracle_homology
from milnor_complement.textio import parse_ideal_text

from conftest import PATH_GENERATORS, PATH_PAIRS, PATH_TABLE, RP2_FACETS, simplex_boundary, two_points

PATH_IDEAL_TEXT = "x1*x3*x4*x6\nx1*x3*x5\nx2*x3*x5\nx2*x4*x6\nx2*x4*x5"


def integral_table(G):
    return {d: r for d, (r, _) in G.groups.items()}


@pytest.mark.criterion(1, "six-variable example homology by all three methods")
def test_criterion_1_example_homology():
    start = time.perf_counter()
    ideal = parse_ideal_text(PATH_IDEAL_TEXT, 6)
    report = complement_report(ideal, methods=("hochster", "gm", "oracle"))
    elapsed = time.perf_counter() - start
    assert set(report.methods) == {"hochster", "gm", "oracle"}
    for name, group in report.methods.items():
        assert integral_table(group) == PATH_TABLE, name
        assert not group.has_torsion(), name
    assert report.homology.lines() == ["H_0 = Z", "H_3 = Z^5", "H_4 = Z^4", "H_6 = Z^3", "H_7 = Z^4", "H_8 = Z"]
    print(f"criterion 1: methods agree on {report.homology.lines()} in {elapsed:.2f}s")
    assert elapsed < 10


@pytest.mark.criterion(2, "union ideal of the five consecutive pairs")
def test_criterion_2_union_ideal(capsys):
    start = time.perf_counter()
    code = main(["union-ideal", "n=6\n" + "\n".join("{%d,%d}" % tuple(p) for p in PATH_PAIRS)])
    out = capsys.readouterr().out
    elapsed = time.perf_counter() - start
    assert code == 0
    assert set(out.split()) == PATH_GENERATORS
    assert len(out.split()) == 5
    assert {str(g) for g in union_ideal(PATH_PAIRS, 6).generators} == PATH_GENERATORS
    assert elapsed < 1


@pytest.mark.criterion(3, "Milnor polynomial, weight system and trivial monodromy")
def test_criterion_3_milnor_polynomial(capsys):
    start = time.perf_counter()
    ideal = parse_ideal_text(PATH_IDEAL_TEXT, 6)
    f = milnor_polynomial(ideal)
    w = quasi_homogeneous_weights(ideal)
    elapsed = time.perf_counter() - start
    assert str(f).replace("*", "").replace(" ", "") == "y1x1x3x4x6+y2x1x3x5+y3x2x3x5+y4x2x4x6+y5x2x4x5"
    assert len(f.variables) == 11
    assert w.check(f)
    degrees = {sum(a * e for a, e in zip(w.x_weights + w.y_weights, x + y)) for _, x, y in f.terms}
    assert degrees == {w.total_degree}
    report = milnor_report(ideal, methods=("hochster",), formality=False)
    assert "monodromy: trivial" in report.text()
    assert elapsed < 1
    assert main(["milnor", "--fixture", "path_ideal", "--formula", "hochster"]) == 0
    assert "monodromy: trivial" in capsys.readouterr().out


@pytest.mark.criterion(4, "non-formality certificate without false witnesses")
def test_criterion_4_non_formality():
    start = time.perf_counter()
    ideal = parse_ideal_text(PATH_IDEAL_TEXT, 6)
    probe = formality_probe(build_model(complement_complex(ideal)))
    elapsed = time.perf_counter() - start
    assert probe.certified
    assert probe.witness.nontrivial
    assert simply_connected_codim_check([from_mask(m) for m in arrangement_of(ideal)]) is Connectivity.TRUE
    for K in (simplex_boundary(3), simplex_boundary(4), two_points()):
        assert not formality_probe(build_model(K)).certified
    print(f"criterion 4: witness in degree {probe.witness.degree} after {probe.triples_checked} triples, {elapsed:.2f}s")
    assert elapsed < 60


def codim_two_arrangements(max_n):
    for n in range(2, max_n + 1):
        pairs = list(itertools.combinations(range(1, n + 1), 2))
        for k in range(1, len(pairs) + 1):
            for family in itertools.combinations(pairs, k):
                yield n, [list(p) for p in family]


def assert_methods_agree(ideal):
    K = complement_complex(ideal)
    hochster = hochster_homology_of_complex(K)
    oracle = oracle_homology(K)
    subspaces = [from_mask(m) for m in arrangement_of(ideal)]
    gm = goresky_macpherson_betti(subspaces, ideal.n)
    assert trim(hochster.betti()) == trim(oracle.betti()) == trim(gm)
    assert {d: t for d, (_, t) in hochster.groups.items()} == {d: t for d, (_, t) in oracle.groups.items()}


@pytest.mark.criterion(5, "Hochster, Goresky-MacPherson and the cellular oracle agree")
def test_criterion_5_master_equivalence():
    start = time.perf_counter()
    exhaustive = 0
    for n, family in codim_two_arrangements(5):
        assert_methods_agree(union_ideal(family, n))
        exhaustive += 1
    rng = random.Random(20240601)
    sizes = set()
    for _ in range(250):
        n = rng.randint(1, 6)
        supports = [rng.randrange(1, 1 << n) for _ in range(rng.randint(1, 6))]
        ideal = ideal_from_supports(supports, n)
        sizes |= {bin(m).count("1") for m in ideal.supports}
        assert_methods_agree(ideal)
    elapsed = time.perf_counter() - start
    assert exhaustive == sum(2 ** (n * (n - 1) // 2) - 1 for n in range(2, 6))
    assert len(sizes) >= 4
    print(f"criterion 5: {exhaustive} exhaustive + 250 random cases in {elapsed:.1f}s")
    assert elapsed < 600


@pytest.mark.criterion(6, "projective-plane torsion")
def test_criterion_6_torsion():
    K = SimplicialComplex.from_facets(6, RP2_FACETS)
    hochster = hochster_homology_of_complex(K)
    oracle = oracle_homology(K)
    assert hochster == oracle
    assert hochster.has_torsion()
    assert 2 in hochster.torsion(8)
    arrangement_text = fixture_text("rp2_arrangement")
    assert main(["oracle-check", "--arrangement", arrangement_text]) == 0


@pytest.mark.criterion(7, "structural checks of every Koszul model")
def test_criterion_7_dga_structure():
    fixtures = [
        two_points(),
        simplex_boundary(3),
        simplex_boundary(4),
        SimplicialComplex.simplex(2),
        SimplicialComplex.from_facets(6, RP2_FACETS),
        complement_complex(union_ideal([[1], [2, 3]], 3)),
        complement_complex(union_ideal([[1, 2], [3, 4]], 4)),
        complement_complex(parse_ideal_text(PATH_IDEAL_TEXT, 6)),
    ]
    for K in fixtures:
        model = build_model(K, verify=False)
        assert check_square_zero(model), K
        assert check_leibniz(model), K
        assert check_associativity(model), K
        assert trim(model.betti()) == trim(hochster_homology_of_complex(K).betti()), K


@pytest.mark.criterion(8, "Smith normal form contract on random matrices")
def test_criterion_8_snf_contract():
    rng = random.Random(8)
    for _ in range(1000):
        m, n = rng.randint(0, 6), rng.randint(0, 6)
        rows = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        A = IntMatrix.from_dense(rows, n)
        S = smith_normal_form(A, want_transforms=True)
        assert all(b % a == 0 for a, b in zip(S.factors, S.factors[1:]))
        assert S.U @ A @ S.V == S.diagonal()
        assert abs(determinant(S.U.to_dense())) == 1
        assert abs(determinant(S.V.to_dense())) == 1
        assert smith_normal_form(S.diagonal(), want_transforms=True).factors == S.factors
        rp, cp = list(range(m)), list(range(n))
        rng.shuffle(rp)
        rng.shuffle(cp)
        assert invariant_factors(A.permuted(rp, cp)) == S.factors


@pytest.mark.criterion(9, "circle factorization as a necessary condition")
def test_criterion_9_circle_factor():
    with_hyperplane = complement_report(union_ideal([[1], [2, 3]], 3), methods=("hochster", "gm", "oracle"))
    assert with_hyperplane.betti == [1, 1, 0, 1, 1]
    assert with_hyperplane.circle_factor == [1, 0, 0, 1]
    sphere = complement_report(union_ideal([[1, 2]], 2), methods=("hochster", "gm", "oracle"))
    assert sphere.betti == [1, 0, 0, 1]
    assert sphere.circle_factor is None
    assert circle_factor_test(sphere.betti) is None
