import logging
import os

import pytest

from ghostsic.config import default_prec, defaults, make_args
from ghostsic.errors import ConfigError, PrecisionError, ReconstructionError, RecognitionError
from ghostsic.logsetup import setup_logging


def test_make_args_copies(monkeypatch):
    monkeypatch.delenv("GHOSTSIC_PREC", raising=False)
    args = make_args(prec=256, threads=4)
    assert (args.prec, args.threads) == (256, 4)
    assert defaults.threads == 1
    assert make_args().prec == defaults.prec
    with pytest.raises(ConfigError):
        make_args(bogus=1)


@pytest.mark.parametrize("value", ["abc", "32"])
def test_default_prec_rejects(monkeypatch, value):
    monkeypatch.setenv("GHOSTSIC_PREC", value)
    with pytest.raises(ConfigError):
        default_prec()


def test_error_reports():
    err = PrecisionError("not enough bits", needed_bits=256)
    assert err.report() == {"code": "precision", "message": "not enough bits", "needed_bits": 256}
    assert err.exit_status == 4
    err = ReconstructionError("none", diagnostics=[{"root": 0}])
    assert err.report()["diagnostics"] == [{"root": 0}]
    assert RecognitionError("x").exit_status == 5
    assert isinstance(ConfigError("x"), ValueError)


def test_setup_logging(tmp_path):
    (logger, run_dir) = setup_logging(str(tmp_path), "TEST", logging.WARNING)
    logger.debug("only in the file")
    assert os.path.isdir(run_dir)
    logs = [name for name in os.listdir(run_dir) if name.endswith(".log")]
    assert len(logs) == 1
    for handler in logging.getLogger('').handlers:
        handler.flush()
    with open(os.path.join(run_dir, logs[0])) as flog:
        assert "only in the file" in flog.read()
