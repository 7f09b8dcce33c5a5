import os

ENV_THREADS = "CATPHASE_THREADS"


def max_workers() -> int:
    """Worker cap from ``CATPHASE_THREADS``; defaults to the CPU count."""
    raw = os.environ.get(ENV_THREADS)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1
