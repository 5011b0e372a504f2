"""Collects one verdict line per acceptance criterion for the terminal summary."""
import time
from contextlib import contextmanager

LINES: dict[int, str] = {}


@contextmanager
def criterion(num: int, title: str):
    info: dict = {"detail": ""}
    t0 = time.perf_counter()
    try:
        yield info
    except BaseException as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        LINES[num] = f"[FAIL] {num:>2}. {title}: {info['detail']} -- {msg[:200]}"
        raise
    else:
        LINES[num] = f"[PASS] {num:>2}. {title}: {info['detail']} ({time.perf_counter() - t0:.1f}s)"
