import random

import pytest

from phigamma import Context, FieldSpec, make_field
from phigamma.field import default_modulus


_CTX_CACHE = {}


def ctx_for(p, f, m=None, **kw):
    m = m or f
    key = (p, f, m, tuple(sorted(kw.items())))
    if key not in _CTX_CACHE:
        field = make_field(FieldSpec(p, f, m, default_modulus(p, m)))
        _CTX_CACHE[key] = Context(field, **kw)
    return _CTX_CACHE[key]


@pytest.fixture
def rng():
    return random.Random(20240811)


@pytest.fixture(scope="session")
def ctx31():
    return ctx_for(3, 1)


@pytest.fixture(scope="session")
def ctx32():
    return ctx_for(3, 2)


@pytest.fixture(scope="session")
def ctx51():
    return ctx_for(5, 1)


@pytest.fixture(scope="session")
def ctx52():
    return ctx_for(5, 2)


@pytest.fixture(scope="session")
def ctx21():
    return ctx_for(2, 1)


@pytest.fixture(scope="session")
def ctx22():
    return ctx_for(2, 2)
