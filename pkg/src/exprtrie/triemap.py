"""The finite-map interface shared by all tries, and two generic building blocks.

Every map here is persistent: operations return a new map and never touch
the receiver.  The single update primitive is `alter`, which applies a
value transformer (None-or-value to None-or-value) at a key; insert and
delete are the two constant transformers.

`SEMap` compresses the empty and one-entry cases of any inner trie into
dedicated nodes, so a chain of single-entry records collapses into one node
holding the key outright.  `ListMapInner` lifts a triemap over element keys
to a triemap over tuples of those keys.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Optional

# A value transformer: receives the stored value (or None) and answers the
# value to store (or None to remove the entry).
TF = Callable[[Optional[Any]], Optional[Any]]


class TrieMap(ABC):
    """Finite map keyed by structured values.

    Implementations must satisfy, for all keys k, k1 != k2, transformers tf:
      empty.lookup(k) is None
      m.alter(k, tf).lookup(k) == tf(m.lookup(k))
      m.alter(k2, tf).lookup(k1) == m.lookup(k1)
    """

    __slots__ = ()

    @abstractmethod
    def lookup(self, key):
        ...

    @abstractmethod
    def alter(self, key, tf: TF) -> "TrieMap":
        ...

    @abstractmethod
    def foldr(self, f: Callable[[Any, Any], Any], z):
        """Combine every stored value with f, rightmost first."""

    @abstractmethod
    def union_with(self, f: Callable[[Any, Any], Any], other: "TrieMap") -> "TrieMap":
        """Merge two maps; on a key collision keep f(left_value, right_value)."""

    @abstractmethod
    def map_values(self, f: Callable[[Any], Any]) -> "TrieMap":
        ...

    @abstractmethod
    def filter_values(self, pred: Callable[[Any], bool]) -> "TrieMap":
        ...

    def insert(self, key, value) -> "TrieMap":
        return self.alter(key, lambda _: value)

    def delete(self, key) -> "TrieMap":
        return self.alter(key, lambda _: None)

    def size(self) -> int:
        return self.foldr(lambda _, n: n + 1, 0)

    def elems(self) -> list:
        return self.foldr(lambda v, acc: [v, *acc], [])


class SEMap(TrieMap):
    """Singleton-or-empty wrapper around an inner trie.

    The three shapes carry a factory for the inner trie so the shift from
    one entry to many can build it on demand.  A multi node is never shrunk
    back to a singleton when entries are deleted.
    """

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class EmptySEM(SEMap):
    inner_empty: Callable[[], TrieMap]

    def lookup(self, key):
        return None

    def alter(self, key, tf):
        v = tf(None)
        if v is None:
            return self
        return SingleSEM(self.inner_empty, key, v)

    def foldr(self, f, z):
        return z

    def union_with(self, f, other):
        return other

    def map_values(self, f):
        return self

    def filter_values(self, pred):
        return self


@dataclass(frozen=True, slots=True)
class SingleSEM(SEMap):
    inner_empty: Callable[[], TrieMap]
    key: Any
    value: Any

    def lookup(self, key):
        return self.value if key == self.key else None

    def alter(self, key, tf):
        if key == self.key:
            v = tf(self.value)
            if v is None:
                return EmptySEM(self.inner_empty)
            return SingleSEM(self.inner_empty, self.key, v)
        v1 = tf(None)
        if v1 is None:
            return self
        inner = self.inner_empty().insert(self.key, self.value).insert(key, v1)
        return MultiSEM(inner)

    def foldr(self, f, z):
        return f(self.value, z)

    def union_with(self, f, other):
        if isinstance(other, EmptySEM):
            return self
        v = self.value
        return other.alter(self.key, lambda old: v if old is None else f(v, old))

    def map_values(self, f):
        return SingleSEM(self.inner_empty, self.key, f(self.value))

    def filter_values(self, pred):
        return self if pred(self.value) else EmptySEM(self.inner_empty)


@dataclass(frozen=True, slots=True)
class MultiSEM(SEMap):
    inner: TrieMap

    def lookup(self, key):
        return self.inner.lookup(key)

    def alter(self, key, tf):
        return MultiSEM(self.inner.alter(key, tf))

    def foldr(self, f, z):
        return self.inner.foldr(f, z)

    def union_with(self, f, other):
        if isinstance(other, EmptySEM):
            return self
        if isinstance(other, SingleSEM):
            v = other.value
            return self.alter(other.key, lambda old: v if old is None else f(old, v))
        return MultiSEM(self.inner.union_with(f, other.inner))

    def map_values(self, f):
        return MultiSEM(self.inner.map_values(f))

    def filter_values(self, pred):
        return MultiSEM(self.inner.filter_values(pred))


@dataclass(frozen=True, slots=True)
class ListMapInner(TrieMap):
    """Triemap over tuples of keys of an element triemap.

    The empty tuple's value lives in `nil`; longer tuples descend through
    `cons`, an element-keyed map whose values are list maps for the tails.
    """

    elem_empty: Callable[[], TrieMap]
    nil: Optional[Any]
    cons: TrieMap

    @staticmethod
    def empty_with(elem_empty: Callable[[], TrieMap]) -> "ListMapInner":
        return ListMapInner(elem_empty, None, elem_empty())

    def _factory(self) -> Callable[[], TrieMap]:
        elem_empty = self.elem_empty
        return lambda: ListMapInner.empty_with(elem_empty)

    def lookup(self, key):
        if not key:
            return self.nil
        tail_map = self.cons.lookup(key[0])
        if tail_map is None:
            return None
        return tail_map.lookup(key[1:])

    def alter(self, key, tf):
        if not key:
            return ListMapInner(self.elem_empty, tf(self.nil), self.cons)
        head, tail = key[0], key[1:]
        factory = self._factory()

        def lifted(m):
            return (empty_semap(factory) if m is None else m).alter(tail, tf)

        return ListMapInner(self.elem_empty, self.nil, self.cons.alter(head, lifted))

    def foldr(self, f, z):
        acc = self.cons.foldr(lambda tail_map, r: tail_map.foldr(f, r), z)
        return acc if self.nil is None else f(self.nil, acc)

    def union_with(self, f, other):
        if self.nil is None:
            nil = other.nil
        elif other.nil is None:
            nil = self.nil
        else:
            nil = f(self.nil, other.nil)
        cons = self.cons.union_with(lambda a, b: a.union_with(f, b), other.cons)
        return ListMapInner(self.elem_empty, nil, cons)

    def map_values(self, f):
        nil = None if self.nil is None else f(self.nil)
        return ListMapInner(self.elem_empty, nil, self.cons.map_values(lambda lm: lm.map_values(f)))

    def filter_values(self, pred):
        nil = self.nil if self.nil is not None and pred(self.nil) else None
        cons = self.cons.map_values(lambda lm: lm.filter_values(pred))
        return ListMapInner(self.elem_empty, nil, cons)


def empty_semap(inner_empty: Callable[[], TrieMap]) -> SEMap:
    """An empty wrapped trie whose multi shape will be built by `inner_empty`."""
    return EmptySEM(inner_empty)


def empty_list_map(elem_empty: Callable[[], TrieMap]) -> SEMap:
    """An empty wrapped triemap keyed by tuples of element keys."""
    return EmptySEM(lambda: ListMapInner.empty_with(elem_empty))
