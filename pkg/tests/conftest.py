import numpy as np
import pytest

from flexcheck.catalog import build_case_representation, find_case
from flexcheck.liealg import build_classical, center_of, centralizer
from flexcheck.roots import decompose
from flexcheck.surface import fuchsian_genus2


@pytest.fixture(scope="session")
def fuchsian():
    return fuchsian_genus2()


@pytest.fixture(scope="session")
def models():
    return {
        "sl2": build_classical("sl", 2),
        "su21": build_classical("su", 2, 1),
        "so41": build_classical("so", 4, 1),
        "so31": build_classical("so", 3, 1),
        "sp21": build_classical("sp", 2, 1),
        "su31": build_classical("su", 3, 1),
        "so3": build_classical("so", 3, 0),
    }


@pytest.fixture(scope="session")
def case_pipeline():
    """Cached (rep, centralizer, center, decomposition) per catalog case."""
    cache: dict = {}

    def run(name: str):
        if name not in cache:
            rep = build_case_representation(find_case(name))
            z = centralizer(rep.model, rep.images, kind="group")
            c = center_of(z)
            dec = decompose(rep.model, c)
            cache[name] = (rep, z, c, dec)
        return cache[name]

    return run


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
