"""A minimal readers-writer lock.

The stores and the index follow the same concurrency model: many
concurrent readers, a single writer, and readers always observe a
consistent snapshot. The stdlib has no shared lock, so this implements
the classic counted-readers scheme (writer-preference is not needed at
portal scale).
"""

from __future__ import annotations

import threading
from contextlib import contextmanager


class ReadWriteLock:
    def __init__(self):
        self._readers = 0
        self._readers_lock = threading.Lock()
        self._writer_lock = threading.Lock()

    @contextmanager
    def read(self):
        with self._readers_lock:
            self._readers += 1
            if self._readers == 1:
                self._writer_lock.acquire()
        try:
            yield
        finally:
            with self._readers_lock:
                self._readers -= 1
                if self._readers == 0:
                    self._writer_lock.release()

    @contextmanager
    def write(self):
        with self._writer_lock:
            yield
