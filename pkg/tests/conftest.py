import pytest

from galcoh.groups import FinGroup
from galcoh.grpmod import GModule, trivial_module
from galcoh.intlat import FgAbGroup

ROT = [[0, -1], [1, 0]]  # multiplication by i on Z[i], basis (1, i)


@pytest.fixture
def c4():
    return FinGroup.cyclic(4)


@pytest.fixture
def zi(c4):
    """Z[i] with the generator of Z/4 acting by i."""
    return GModule(c4, FgAbGroup(2), {c4.generators[0]: ROT})


def cyclic_trivial(G, n):
    return trivial_module(G, FgAbGroup(1, [(n,)]))


def inversion_module(n):
    """Z/n with Z/2 acting by -1."""
    G = FinGroup.cyclic(2)
    return GModule(G, FgAbGroup(1, [(n,)]), {G.generators[0]: [[-1]]})
