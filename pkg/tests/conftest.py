import argparse
import pathlib

import pytest
from hypothesis import HealthCheck, settings

from src.cli import argparse_init, argparse_runtime_args

settings.register_profile('default', deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile('default')

FIXTURE_DIR = pathlib.Path(__file__).parent.parent / 'fixtures'


@pytest.fixture
def fixture_dir() -> pathlib.Path:
    return FIXTURE_DIR


@pytest.fixture
def cli_args(monkeypatch):
    """ parse a CLI line the way bds.py does, without a BDS_SEED leaking in """
    monkeypatch.delenv('BDS_SEED', raising=False)

    def parse(*argv) -> argparse.Namespace:
        args = argparse_init().parse_args([str(a) for a in argv])
        argparse_runtime_args(args)
        return args
    return parse
