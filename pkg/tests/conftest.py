import pytest

from milnor_complement.combinatorics import SimplicialComplex, complement_complex, union_ideal

PATH_PAIRS = [[1, 2], [2, 3], [3, 4], [4, 5], [5, 6]]
PATH_GENERATORS = {"x1*x3*x4*x6", "x1*x3*x5", "x2*x3*x5", "x2*x4*x6", "x2*x4*x5"}
PATH_TABLE = {0: 1, 3: 5, 4: 4, 6: 3, 7: 4, 8: 1}

RP2_FACETS = [
    (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
    (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6),
]


@pytest.fixture(scope="session")
def path_ideal():
    return union_ideal(PATH_PAIRS, 6)


@pytest.fixture(scope="session")
def ordered_path_ideal():
    """The same ideal with generators in the order paired with y1..y5."""
    from milnor_complement.cli import fixture_text
    from milnor_complement.textio import parse_ideal_text

    return parse_ideal_text(fixture_text("path_ideal"))


@pytest.fixture(scope="session")
def path_complex(path_ideal):
    return complement_complex(path_ideal)


@pytest.fixture(scope="session")
def path_model(path_complex):
    from milnor_complement.dga import build_model

    return build_model(path_complex)


@pytest.fixture(scope="session")
def rp2():
    return SimplicialComplex.from_facets(6, RP2_FACETS)


def two_points():
    return SimplicialComplex.from_facets(2, [(1,), (2,)])


def simplex_boundary(n):
    full = set(range(1, n + 1))
    return SimplicialComplex.from_facets(n, [tuple(sorted(full - {i})) for i in full])


# -- acceptance reporting -----------------------------------------------------

_criteria: dict[int, tuple[str, list[str]]] = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    outcomes = _criteria.setdefault(number, (title, []))[1]
    if report.when == "call" or report.outcome != "passed":
        outcomes.append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcomes = _criteria[number]
        status = "PASS" if outcomes and all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
