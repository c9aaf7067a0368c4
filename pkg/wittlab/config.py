"""Search budgets, candidate ordering and cancellation shared by every bounded search."""
import contextlib
import dataclasses
import itertools
import os
import random
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, TypeVar

from .errors import SchemaError, SearchCancelled

ENV_VAR = "WITTLAB_BUDGET"

T = TypeVar("T")


@dataclasses.dataclass(frozen=True)
class SearchBudget:
    search_bound: int = 10_000
    height: int = 6
    candidate_pool: int = 64
    max_atoms: int = 4
    seed: int = 0
    threads: int = 1

    def as_dict(self):
        return dataclasses.asdict(self)

    def replace(self, **changes) -> "SearchBudget":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)

    @classmethod
    def parse(cls, text: str) -> "SearchBudget":
        """
        Parse a budget override.

        Args:
            text (str): either an integer search bound or ``key=value`` pairs
                separated by commas, e.g. ``"search_bound=500,height=4"``.

        Returns:
            SearchBudget: the default budget with the overrides applied.
        """
        text = text.strip()
        if not text:
            return cls()
        if text.isdigit():
            return cls(search_bound=int(text))
        names = {f.name for f in dataclasses.fields(cls)}
        changes = {}
        for item in text.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in names:
                raise SchemaError(f"unknown budget entry {item!r}", f"/{ENV_VAR}")
            try:
                changes[key] = int(value)
            except ValueError:
                raise SchemaError(f"budget value {value!r} is not an integer", f"/{ENV_VAR}/{key}")
            if changes[key] < 0:
                raise SchemaError("budget values must be non-negative", f"/{ENV_VAR}/{key}")
        return cls(**changes)

    @classmethod
    def from_env(cls) -> "SearchBudget":
        return cls.parse(os.environ.get(ENV_VAR, ""))


class CancelToken:
    """Cooperative cancellation; another thread calls :meth:`cancel`, searches call :meth:`check`."""

    def __init__(self):
        self._event = threading.Event()

    def cancel(self):
        self._event.set()

    @property
    def cancelled(self) -> bool:
        return self._event.is_set()

    def check(self, stage: str = ""):
        if self.cancelled:
            raise SearchCancelled(f"{stage or 'search'} cancelled", stage=stage)


_active: Optional[SearchBudget] = None
_token: Optional[CancelToken] = None


def get_budget() -> SearchBudget:
    global _active
    if _active is None:
        _active = SearchBudget.from_env()
    return _active


def get_token() -> CancelToken:
    global _token
    if _token is None:
        _token = CancelToken()
    return _token


@contextlib.contextmanager
def use_budget(budget: SearchBudget, token: Optional[CancelToken] = None) -> Iterator[SearchBudget]:
    global _active, _token
    previous = _active, _token
    _active = budget
    if token is not None:
        _token = token
    try:
        yield budget
    finally:
        _active, _token = previous


def candidate_order(pool: Iterable[T]) -> List[T]:
    """The pool in search order: as enumerated for seed 0, otherwise a seeded shuffle."""
    pool = list(pool)
    seed = get_budget().seed
    if seed:
        random.Random(seed).shuffle(pool)
    return pool


def first_match(predicate: Callable[[T], bool], candidates: Iterable[T],
                stage: str = "") -> Optional[T]:
    """
    The first candidate, in iteration order, that satisfies ``predicate``.

    Candidates are checked ``threads`` at a time, so the answer does not depend on the
    thread count. The cancellation token is checked before every chunk.

    Args:
        predicate (Callable[[T], bool]): the check; must be safe to call from worker threads.
        candidates (Iterable[T]): candidates in search order, already cut to the bound.
        stage (str): search name used in the SearchCancelled message.

    Returns:
        Optional[T]: the match, or None when the candidates run out.
    """
    width = max(1, get_budget().threads)
    token = get_token()
    it = iter(candidates)
    executor = ThreadPoolExecutor(max_workers=width) if width > 1 else None
    try:
        while True:
            token.check(stage)
            chunk: Sequence[T] = list(itertools.islice(it, width))
            if not chunk:
                return None
            results = executor.map(predicate, chunk) if executor else map(predicate, chunk)
            for candidate, ok in zip(chunk, results):
                if ok:
                    return candidate
    finally:
        if executor:
            executor.shutdown(wait=True)
