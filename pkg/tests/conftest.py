from pathlib import Path

import pytest

from efmetrics.dataset import parse_csv

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def sample_orders():
    orders, report = parse_csv(DATA_DIR / "sample_orders.csv")
    assert report.rejected_orders == 0
    return orders


@pytest.fixture(scope="session")
def study_orders():
    orders, report = parse_csv(DATA_DIR / "study_fixture.csv")
    assert report.rejected_orders == 0 and not report.warnings
    return orders
