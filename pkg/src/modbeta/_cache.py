import functools
import threading


def once(fn):
    """Memoize ``fn`` so each key is computed at most once, even under threads."""
    results = {}
    locks = {}
    guard = threading.Lock()

    @functools.wraps(fn)
    def wrapper(*args):
        try:
            return results[args]
        except KeyError:
            pass
        with guard:
            lock = locks.setdefault(args, threading.Lock())
        with lock:
            if args not in results:
                results[args] = fn(*args)
            return results[args]

    wrapper.cache_clear = results.clear
    return wrapper
