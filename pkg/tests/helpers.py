"""Shared builders for the test suite: the three reference signatures,
preorder closure, and random fragment-formula generation."""

from __future__ import annotations

import random

from guardasim.connective import FragmentSignature
from guardasim.model import Model, load, random_model
from guardasim.syntax import Apply, Atom, FragmentFormula


def sig_intuitionistic() -> FragmentSignature:
    return FragmentSignature.from_dict(
        {"connectives": {"imp": "forall[R1]{ ~p1 | p2 }"}}
    )


def sig_modal() -> FragmentSignature:
    return FragmentSignature.from_dict(
        {"connectives": {
            "not": "{ ~p1 }",
            "box": "forall[R1]{ p1 }",
            "dia": "exists[R1]{ p1 }",
        }}
    )


def sig_modal_intuitionistic() -> FragmentSignature:
    return FragmentSignature.from_dict(
        {"connectives": {
            "lambda2": "forall[R1,R2]{ p1 }",
            "lambda3": "forall[R1] exists[R3]{ p1 }",
            "lambda5": "forall[R1]{ ~p1 | p2 }",
        }}
    )


ALL_SIGS = {
    "intuitionistic": sig_intuitionistic,
    "modal": sig_modal,
    "modal_intuitionistic": sig_modal_intuitionistic,
}


def preorder_closure(m: Model) -> Model:
    """Reflexive-transitive closure of R1, leaving everything else alone."""
    pairs = set(m.rel_pairs("R1")) | {(w, w) for w in m.domain}
    changed = True
    while changed:
        changed = False
        for (x, y) in list(pairs):
            for (y2, z) in list(pairs):
                if y2 == y and (x, z) not in pairs:
                    pairs.add((x, z))
                    changed = True
    return load({
        "domain": list(m.domain),
        "relations": {"R1": [list(p) for p in sorted(pairs)]},
        "predicates": {k: sorted(v) for k, v in m.predicates.items()},
    })


def random_preorder(n: int, pred_symbols, edge_prob: float, pred_prob: float, seed: int) -> Model:
    return preorder_closure(random_model(n, ["R1"], pred_symbols, edge_prob, pred_prob, seed))


def random_fragment_formula(
    sig: FragmentSignature, preds, depth: int, rng: random.Random, atom_bias: float = 0.3
) -> FragmentFormula:
    if depth == 0 or rng.random() < atom_bias:
        return Atom(rng.choice(list(preds)))
    name = rng.choice(sig.names())
    mu = sig.get(name)
    return Apply(
        name,
        tuple(random_fragment_formula(sig, preds, depth - 1, rng, atom_bias) for _ in range(mu.arity)),
    )


def theta_of(*models: Model) -> list[str]:
    preds: set[str] = set()
    for m in models:
        preds |= set(m.predicates)
    return sorted(preds)
