import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from scenematch.scene import load_scene_file

DATA_DIR = pathlib.Path(__file__).parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> pathlib.Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def installation():
    """14-object compressed-air installation used by the ranking fixtures."""
    return load_scene_file(DATA_DIR / "installation.json")


@pytest.fixture(scope="session")
def regions():
    """Three candidate pipe regions with fully overridden attribute scores."""
    return load_scene_file(DATA_DIR / "regions.json")


def description_text(name: str) -> str:
    return (DATA_DIR / "descriptions" / f"{name}.txt").read_text()


@pytest.fixture(scope="session")
def descriptions() -> dict[str, str]:
    return {
        path.stem: path.read_text()
        for path in sorted((DATA_DIR / "descriptions").glob("*.txt"))
    }
