from importlib import resources
from pathlib import Path

import pytest

from doublebracket.diagram import from_pd, read_pd

CORPUS = Path(str(resources.files("doublebracket").joinpath("data", "corpus")))


def corpus(kind: str) -> list[Path]:
    return sorted((CORPUS / kind).glob("*.pd"))


def load(kind: str, name: str):
    return read_pd(CORPUS / kind / f"{name}.pd")


def kink():
    """One-crossing unknot."""
    return from_pd([(1, 2, 2, 1)])


@pytest.fixture
def trefoil():
    return load("classical", "trefoil_right")


@pytest.fixture
def trefoil_left():
    return load("classical", "trefoil_left")


@pytest.fixture
def one_crossing():
    return load("torus", "one_crossing")
