from functools import lru_cache

import pytest

from bmwkz import DihedralModel, build_dihedral_bmw, monodromy_generators, sample_generic_parameters


@lru_cache(maxsize=None)
def mono_for(m: int, seed: int = 0):
    return monodromy_generators(DihedralModel(m), sample_generic_parameters(seed, m))


@lru_cache(maxsize=None)
def bmw_for(m: int, seed: int = 0):
    mono = mono_for(m, seed)
    return build_dihedral_bmw(m, mono.params, mono=mono)


@pytest.fixture(scope="session")
def mono():
    return mono_for


@pytest.fixture(scope="session")
def bmw():
    return bmw_for
