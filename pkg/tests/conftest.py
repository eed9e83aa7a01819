import pytest

from ptcoh.model import MODEL_A, MODEL_B


@pytest.fixture(params=[MODEL_A, MODEL_B], ids=["A", "B"])
def model(request):
    return request.param
