"""PASS/FAIL bookkeeping for the acceptance suite."""
import functools
import time

RESULTS = []


def criterion(cid, label=""):
    """Print one PASS/FAIL line for the wrapped test; failures still propagate."""
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            status, note = "FAIL", ""
            try:
                fn(*args, **kwargs)
                status = "PASS"
            except AssertionError as exc:
                note = " | " + " ".join(str(exc).split())[:160]
                raise
            finally:
                secs = time.perf_counter() - start
                line = f"{status} criterion {cid}{' ' + label if label else ''} ({secs:.2f} s){note}"
                RESULTS.append(line)
                print(line)
        return run
    return wrap
