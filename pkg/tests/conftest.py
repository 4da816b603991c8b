from __future__ import annotations

import pytest

from relhyplab.specfile import parse_spec_text, parse_word

ZZ_TEXT = """
family      = free_product
factors     = Z, Z
generators  = a, b
peripherals = factor:0, factor:1
"""

Z2_TEXT = """
family      = free_abelian
generators  = a, b
peripherals = axis:0, axis:1
"""

F2_TEXT = """
family     = free
generators = a, b
"""

Q237_TEXT = """
family      = one_relator_quotient
factors     = Z/2, Z/3
generators  = a, b
peripherals = factor:0, factor:1
relator     = ( a b )^7
"""


@pytest.fixture(scope="session")
def zz():
    """Z * Z relative to both (infinite cyclic) factors."""
    return parse_spec_text(ZZ_TEXT)


@pytest.fixture(scope="session")
def z2():
    """Z^2 relative to the two coordinate subgroups: the negative control."""
    return parse_spec_text(Z2_TEXT)


@pytest.fixture(scope="session")
def f2():
    """Free group of rank 2 with trivial peripheral collection."""
    return parse_spec_text(F2_TEXT)


@pytest.fixture(scope="session")
def q237():
    """Z/2 * Z/3 modulo (ab)^7, the relative-area example presentation."""
    return parse_spec_text(Q237_TEXT)


@pytest.fixture()
def w(request):
    def make(spec, text):
        return spec.element_of_word(parse_word(spec, text))

    return make


@pytest.fixture(scope="session")
def spec_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("specs")
    for name, text in (("zz", ZZ_TEXT), ("z2", Z2_TEXT), ("f2", F2_TEXT),
                       ("q237", Q237_TEXT)):
        (d / f"{name}.spec").write_text(text, encoding="utf-8")
    return d
