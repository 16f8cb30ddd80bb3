"""Finite models of the correspondence vocabulary: binary relations R<n> and
unary predicates P<n> over a named domain, with guard-chain traversal,
JSON (de)serialization, and seeded random generation."""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

_REL_NAME = re.compile(r"^R[0-9]+$")
_PRED_NAME = re.compile(r"^P[0-9]+$")


class ModelError(ValueError):
    """Malformed model document or query; the message names the offending path."""


class Model:
    """An immutable finite structure.

    Relation and predicate symbols absent from the model are read as empty,
    so a model over a finite piece of the vocabulary stands for its
    completion with empty interpretations.
    """

    __slots__ = ("domain", "relations", "predicates", "_succ", "_index")

    def __init__(
        self,
        domain: Sequence[str],
        relations: Mapping[str, Iterable[tuple[str, str]]] | None = None,
        predicates: Mapping[str, Iterable[str]] | None = None,
    ):
        if not domain:
            raise ModelError("domain: must be non-empty")
        if len(set(domain)) != len(domain):
            raise ModelError("domain: duplicate element names")
        self.domain: tuple[str, ...] = tuple(domain)
        members = set(self.domain)

        rels: dict[str, frozenset[tuple[str, str]]] = {}
        for name, pairs in (relations or {}).items():
            if not _REL_NAME.match(name):
                raise ModelError(f"relations.{name}: not a relation symbol (expected R<digits>)")
            pair_set = set()
            for i, pair in enumerate(pairs):
                pair = tuple(pair)
                if len(pair) != 2:
                    raise ModelError(f"relations.{name}[{i}]: expected a pair")
                for el in pair:
                    if el not in members:
                        raise ModelError(f"relations.{name}[{i}]: unknown element {el!r}")
                pair_set.add(pair)
            rels[name] = frozenset(pair_set)
        self.relations: dict[str, frozenset[tuple[str, str]]] = rels

        preds: dict[str, frozenset[str]] = {}
        for name, elems in (predicates or {}).items():
            if not _PRED_NAME.match(name):
                raise ModelError(f"predicates.{name}: not a predicate symbol (expected P<digits>)")
            elem_set = set()
            for i, el in enumerate(elems):
                if el not in members:
                    raise ModelError(f"predicates.{name}[{i}]: unknown element {el!r}")
                elem_set.add(el)
            preds[name] = frozenset(elem_set)
        self.predicates: dict[str, frozenset[str]] = preds

        succ: dict[str, dict[str, tuple[str, ...]]] = {}
        for name, pair_set in rels.items():
            adj: dict[str, list[str]] = {}
            for a, b in pair_set:
                adj.setdefault(a, []).append(b)
            succ[name] = {a: tuple(sorted(bs)) for a, bs in adj.items()}
        self._succ = succ
        self._index = {el: i for i, el in enumerate(self.domain)}

    def __len__(self) -> int:
        return len(self.domain)

    def __contains__(self, element: str) -> bool:
        return element in self._index

    def index_of(self, element: str) -> int:
        return self._index[element]

    def rel_pairs(self, name: str) -> frozenset[tuple[str, str]]:
        return self.relations.get(name, frozenset())

    def successors(self, name: str, element: str) -> tuple[str, ...]:
        return self._succ.get(name, {}).get(element, ())

    def has_pred(self, name: str, element: str) -> bool:
        return element in self.predicates.get(name, frozenset())

    def pred_elements(self, name: str) -> frozenset[str]:
        return self.predicates.get(name, frozenset())

    def guard_endpoints(self, guards: Sequence[str], start: str) -> frozenset[str]:
        """Elements reachable from ``start`` along the guard chain: one step
        through each listed relation in order."""
        if start not in self._index:
            raise ModelError(f"unknown element {start!r}")
        frontier = {start}
        for g in guards:
            frontier = {b for a in frontier for b in self.successors(g, a)}
            if not frontier:
                break
        return frozenset(frontier)

    def guard_path(self, guards: Sequence[str], start: str, end: str) -> tuple[str, ...] | None:
        """One witnessing path start,...,end along the guard chain, or None."""
        paths: dict[str, tuple[str, ...]] = {start: (start,)}
        for g in guards:
            nxt: dict[str, tuple[str, ...]] = {}
            for a, path in paths.items():
                for b in self.successors(g, a):
                    if b not in nxt:
                        nxt[b] = path + (b,)
            paths = nxt
        return paths.get(end)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Model)
            and self.domain == other.domain
            and self.relations == other.relations
            and self.predicates == other.predicates
        )

    def __repr__(self) -> str:
        return f"Model(|U|={len(self.domain)}, R={sorted(self.relations)}, P={sorted(self.predicates)})"


@dataclass(frozen=True)
class PointedModel:
    model: Model
    point: str

    def __post_init__(self):
        if self.point not in self.model:
            raise ModelError(f"point {self.point!r} not in the domain")


def load(doc: object) -> Model:
    """Build a model from its JSON document form, validating references."""
    if not isinstance(doc, dict):
        raise ModelError("document: expected an object")
    unknown = set(doc) - {"domain", "relations", "predicates"}
    if unknown:
        raise ModelError(f"document: unknown keys {sorted(unknown)}")
    domain = doc.get("domain")
    if not isinstance(domain, list) or not all(isinstance(x, str) for x in domain):
        raise ModelError("domain: expected a list of strings")
    relations = doc.get("relations", {})
    predicates = doc.get("predicates", {})
    if not isinstance(relations, dict):
        raise ModelError("relations: expected an object")
    if not isinstance(predicates, dict):
        raise ModelError("predicates: expected an object")
    return Model(domain, relations, predicates)


def loads(text: str) -> Model:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"document: invalid JSON ({e})") from e
    return load(doc)


def load_file(path: str) -> Model:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def save(m: Model) -> dict:
    """Canonical document: domain as given, pair and element lists sorted."""
    return {
        "domain": list(m.domain),
        "relations": {
            name: [list(p) for p in sorted(m.relations[name])]
            for name in sorted(m.relations)
        },
        "predicates": {
            name: sorted(m.predicates[name]) for name in sorted(m.predicates)
        },
    }


def dumps(m: Model) -> str:
    return json.dumps(save(m), indent=2, sort_keys=True)


def random_model(
    n: int,
    rel_symbols: Sequence[str],
    pred_symbols: Sequence[str],
    edge_prob: float,
    pred_prob: float,
    seed: int,
) -> Model:
    """Independently sampled edges and predicate memberships, deterministic per seed."""
    if n < 1:
        raise ValueError("model size must be at least 1")
    if not (0.0 <= edge_prob <= 1.0 and 0.0 <= pred_prob <= 1.0):
        raise ValueError("probabilities must lie in [0, 1]")
    rng = random.Random(seed)
    domain = [f"w{i}" for i in range(n)]
    relations = {}
    for r in rel_symbols:
        pairs = [
            (a, b)
            for a in domain
            for b in domain
            if rng.random() < edge_prob
        ]
        relations[r] = pairs
    predicates = {}
    for p in pred_symbols:
        predicates[p] = [w for w in domain if rng.random() < pred_prob]
    return Model(domain, relations, predicates)
