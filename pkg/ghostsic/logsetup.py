from os import makedirs
from os.path import join
from time import strftime
import logging


FILE_FORMAT = '[%(asctime)s] {%(pathname)s:%(lineno)3d} %(levelname)6s - %(message)s'
CONSOLE_FORMAT = '%(name)-s: %(levelname)-8s %(message)s'


def setup_logging(out_dir, name, console_level=logging.INFO):
    """ Create a timestamped run directory and attach file + console handlers.

    Arguments:
        out_dir: (str) directory under which the run directory is created
        name: (str) logger name, e.g. "GHOST"
        console_level: (int) level of the console handler

    Returns:
        logger: (Logger) named logger
        run_dir: (str) the timestamped run directory
    """
    timestamp = strftime("%Y-%m-%d-%H%M%S")
    run_dir = join(out_dir, timestamp)
    makedirs(run_dir, exist_ok=True)

    root = logging.getLogger('')
    root.setLevel(logging.DEBUG)
    for handler in list(root.handlers):
        if getattr(handler, "_ghostsic", False):
            root.removeHandler(handler)

    logfile = logging.FileHandler(join(run_dir, timestamp + ".log"))
    logfile.setLevel(logging.DEBUG)
    logfile.setFormatter(logging.Formatter(FILE_FORMAT, datefmt='%H:%M:%S'))
    logfile._ghostsic = True
    root.addHandler(logfile)

    console = logging.StreamHandler()
    console.setLevel(console_level)
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    console._ghostsic = True
    root.addHandler(console)

    logger = logging.getLogger(name)
    logger.info("Timestamp: {}".format(timestamp))
    return (logger, run_dir)
