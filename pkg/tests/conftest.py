import pytest

from eqfree import Alphabet, Homomorphism, Word


def alphabet(n, prefix="a"):
    if prefix == "a" and n <= 4:
        return Alphabet("abcd"[:n])
    return Alphabet([f"{prefix}{i + 1}" for i in range(n)])


def hom_from_codes(images, domain, codomain):
    return Homomorphism(domain, codomain, [Word(codomain, w) for w in images])


def hom(domain, codomain, **images):
    return Homomorphism.from_strings(domain, codomain, images)


@pytest.fixture
def ab():
    return Alphabet(["a", "b"])


@pytest.fixture
def xy():
    return Alphabet(["x", "y"])


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
