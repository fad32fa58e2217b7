""" Contiguous sharding of independent work items across processes. """
import queue as queues

import torch.multiprocessing as mp
from tqdm import tqdm

from .errors import GhostSicError


POLL_SECONDS = 1.0


def _worker(func, index, chunk, queue):
    try:
        result = func(chunk)
    except Exception as err:
        queue.put((index, err, True))
        return
    queue.put((index, result, False))


def _shards(items, threads):
    size = (len(items) + threads - 1) // threads
    return [items[i:i + size] for i in range(0, len(items), size)]


def _collect(queue, processes, timeout):
    """ Next (index, payload, failed) from the queue, watching for workers that die silently. """
    waited = 0.0
    while True:
        try:
            return queue.get(timeout=POLL_SECONDS)
        except queues.Empty:
            waited += POLL_SECONDS
        dead = [p for p in processes if p.exitcode not in (None, 0)]
        if dead and queue.empty():
            raise GhostSicError("worker process exited with status {} before reporting"
                                .format(dead[0].exitcode))
        if all(p.exitcode is not None for p in processes) and queue.empty():
            raise GhostSicError("every worker exited with shards still unreported")
        if timeout is not None and waited >= timeout:
            raise GhostSicError("no worker reported within {} s".format(timeout))


def shard_map(func, items, threads=1, progbar=False, timeout=None, logger=None):
    """ Apply func to contiguous shards of items and concatenate the results.

    The first exception raised by a worker is re-raised in the caller once
    every process has been joined.

    Arguments:
        func: (callable) top-level function mapping a list of items to a list
            of results of the same length
        items: (list) work items
        threads: (int) number of worker processes; 1 or less runs inline
        progbar: (bool) whether to show a tqdm progress bar over shards
        timeout: (float) seconds to wait for any single shard, None for no limit
        logger: (Logger) logger object to which progress is written

    Returns:
        results: (list) func results in the order of items
    """
    items = list(items)
    if not items:
        return []
    if threads is None or threads <= 1:
        return func(items)

    shards = _shards(items, threads)
    if logger:
        logger.debug("sharding {} items over {} processes".format(len(items), len(shards)))

    queue = mp.Queue()
    processes = []
    for (i, chunk) in enumerate(shards):
        p = mp.Process(target=_worker, args=(func, i, chunk, queue))
        p.start()
        processes.append(p)

    collected = {}
    errors = []
    pending = range(len(shards))
    try:
        for _ in (tqdm(pending) if progbar else pending):
            (index, payload, failed) = _collect(queue, processes, timeout)  # drain before join
            if failed:
                errors.append((index, payload))
            else:
                collected[index] = payload
    except GhostSicError:
        for p in processes:
            p.terminate()
        raise
    finally:
        for p in processes:
            p.join()

    if errors:
        (index, err) = min(errors, key=lambda pair: pair[0])
        if logger:
            logger.error("shard {} of {} failed: {}".format(index, len(shards), err))
        raise err

    results = []
    for i in range(len(shards)):
        results += collected[i]
    return results
