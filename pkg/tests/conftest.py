import pytest

from descentlab import backend


@pytest.fixture(params=backend.available())
def kernel_backend(request):
    """Run a test once per available kernel backend."""
    previous = backend.set_active(request.param)
    yield request.param
    backend.set_active(previous)
