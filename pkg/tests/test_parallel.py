import logging
import os

import pytest

from ghostsic.errors import DomainError, GhostSicError
from ghostsic.parallel import shard_map


def _square(chunk):
    return [x * x for x in chunk]


def _fail_on_three(chunk):
    if 3 in chunk:
        raise DomainError("three is out of range", value=3)
    return list(chunk)


def test_shard_map_keeps_order():
    assert shard_map(_square, range(10), threads=3) == [x * x for x in range(10)]
    assert shard_map(_square, range(5), threads=1) == [0, 1, 4, 9, 16]


def test_worker_error_reaches_caller():
    with pytest.raises(DomainError) as info:
        shard_map(_fail_on_three, [1, 2, 3, 4], threads=2, timeout=60)
    assert info.value.report()["value"] == 3


def test_inline_error_reaches_caller():
    with pytest.raises(DomainError):
        shard_map(_fail_on_three, [1, 2, 3, 4], threads=1)


def _exit_hard(chunk):
    if 3 in chunk:
        os._exit(7)
    return list(chunk)


def test_dead_worker_is_reported():
    with pytest.raises(GhostSicError):
        shard_map(_exit_hard, [1, 2, 3, 4], threads=2, timeout=60)


def test_worker_error_is_logged(caplog):
    logger = logging.getLogger("test_parallel")
    with caplog.at_level(logging.ERROR, logger="test_parallel"):
        with pytest.raises(DomainError):
            shard_map(_fail_on_three, [3, 4, 5, 6], threads=2, timeout=60, logger=logger)
    assert "shard 0 of 2 failed" in caplog.text
