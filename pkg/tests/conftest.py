import pytest

import pxpfsa as p


@pytest.fixture(scope="session")
def eig_cache():
    """Session-wide eigendecompositions keyed by (L, initial, sorted terms)."""
    cache = {}

    def get(config: p.ModelConfig):
        key = (config.L, config.initial, tuple(config.sorted_terms()))
        if key not in cache:
            basis = p.enumerate_basis(config.L)
            cache[key] = p.eigendecompose(p.assemble(basis, config))
        return cache[key]

    return get
