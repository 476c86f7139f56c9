import pytest

from crntrans.corpus import EXAMPLES, example_text, load_example, multiple_futile_cycle, random_network
from crntrans.model import parse_network
from crntrans.translation import find_translations, parse_translation

_acceptance: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): one numbered acceptance criterion")


def pytest_runtest_logreport(report):
    if not (report.when == "call" or (report.when == "setup" and report.failed)):
        return
    marker = report.user_properties and dict(report.user_properties).get("acceptance")
    if not marker:
        return
    n, title = marker
    ok = report.outcome == "passed"
    prev = _acceptance.get(n)
    if prev is None or prev[0] == "PASS":
        _acceptance[n] = ("PASS" if ok else "FAIL", title)


def pytest_runtest_setup(item):
    m = item.get_closest_marker("acceptance")
    if m:
        item.user_properties.append(("acceptance", (m.args[0], m.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        status, title = _acceptance[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")


@pytest.fixture(scope="session")
def fc():
    return load_example("futile_cycle")


@pytest.fixture(scope="session")
def lv():
    return load_example("lotka_volterra")


@pytest.fixture(scope="session")
def sf():
    return load_example("shinar_feinberg")


@pytest.fixture(scope="session")
def mfc2():
    return parse_network(multiple_futile_cycle(2))


@pytest.fixture(scope="session")
def fc_translation(fc):
    return find_translations(fc)[0].translation


@pytest.fixture(scope="session")
def sf_translation(sf):
    t, _ = parse_translation(example_text("sf_translation.txt"), sf)
    return t


@pytest.fixture(scope="session")
def mfc2_translation(mfc2):
    return find_translations(mfc2)[0].translation


def corpus_networks():
    """Bundled examples, multiple futile cycles and seeded random networks."""
    nets = [load_example(n) for n in EXAMPLES]
    nets += [parse_network(multiple_futile_cycle(k)) for k in (1, 2, 3)]
    nets += [random_network(seed) for seed in range(12)]
    nets += [random_network(100 + seed, n_species=4, n_complexes=6, weakly_reversible=True) for seed in range(8)]
    return nets
