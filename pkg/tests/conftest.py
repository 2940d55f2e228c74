import pytest
from hypothesis import settings

settings.register_profile("ci", derandomize=True, max_examples=60)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def fintop2():
    from topogen.instances.registry import builtin_fibration

    return builtin_fibration("fintop2")


@pytest.fixture(scope="session")
def fintop3():
    from topogen.instances.registry import builtin_fibration

    return builtin_fibration("fintop3")


@pytest.fixture(scope="session")
def grp_small():
    from topogen.instances.registry import builtin_fibration

    return builtin_fibration("grp_small")


@pytest.fixture(scope="session")
def disc2_loop():
    from topogen.instances.registry import builtin_fibration

    return builtin_fibration("disc2_loop")
