"""Syntax trees for the correspondence language and for fragment formulas.

First-order formulas are built from predicate and relation atoms with the
classical connectives and single-variable quantifiers; there is no
identity.  Fragment formulas are application trees: atoms P<n> and named
connective applications, resolved against a signature elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


# -- first-order formulas -------------------------------------------------------

class FoFormula:
    """Base class; concrete nodes are the frozen dataclasses below."""

    __slots__ = ()


@dataclass(frozen=True)
class PredAtom(FoFormula):
    pred: str
    var: str


@dataclass(frozen=True)
class RelAtom(FoFormula):
    rel: str
    var1: str
    var2: str


@dataclass(frozen=True)
class Top(FoFormula):
    pass


@dataclass(frozen=True)
class Bot(FoFormula):
    pass


@dataclass(frozen=True)
class Not(FoFormula):
    body: FoFormula


@dataclass(frozen=True)
class And(FoFormula):
    left: FoFormula
    right: FoFormula


@dataclass(frozen=True)
class Or(FoFormula):
    left: FoFormula
    right: FoFormula


@dataclass(frozen=True)
class Implies(FoFormula):
    left: FoFormula
    right: FoFormula


@dataclass(frozen=True)
class Forall(FoFormula):
    var: str
    body: FoFormula


@dataclass(frozen=True)
class Exists(FoFormula):
    var: str
    body: FoFormula


TOP = Top()
BOT = Bot()


def conjoin(parts: list[FoFormula]) -> FoFormula:
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjoin(parts: list[FoFormula]) -> FoFormula:
    if not parts:
        return BOT
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def free_vars(phi: FoFormula) -> frozenset[str]:
    if isinstance(phi, PredAtom):
        return frozenset({phi.var})
    if isinstance(phi, RelAtom):
        return frozenset({phi.var1, phi.var2})
    if isinstance(phi, (Top, Bot)):
        return frozenset()
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula node: {phi!r}")


def all_vars(phi: FoFormula) -> frozenset[str]:
    if isinstance(phi, PredAtom):
        return frozenset({phi.var})
    if isinstance(phi, RelAtom):
        return frozenset({phi.var1, phi.var2})
    if isinstance(phi, (Top, Bot)):
        return frozenset()
    if isinstance(phi, Not):
        return all_vars(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return all_vars(phi.left) | all_vars(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return all_vars(phi.body) | {phi.var}
    raise TypeError(f"not a formula node: {phi!r}")


def rename_free(phi: FoFormula, old: str, new: str) -> FoFormula:
    """Rename free occurrences of ``old`` to ``new``.

    ``new`` must not occur bound in ``phi``; callers pick fresh names.
    """
    if isinstance(phi, PredAtom):
        return PredAtom(phi.pred, new if phi.var == old else phi.var)
    if isinstance(phi, RelAtom):
        return RelAtom(
            phi.rel,
            new if phi.var1 == old else phi.var1,
            new if phi.var2 == old else phi.var2,
        )
    if isinstance(phi, (Top, Bot)):
        return phi
    if isinstance(phi, Not):
        return Not(rename_free(phi.body, old, new))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(rename_free(phi.left, old, new), rename_free(phi.right, old, new))
    if isinstance(phi, (Forall, Exists)):
        if phi.var == old:
            return phi
        return type(phi)(phi.var, rename_free(phi.body, old, new))
    raise TypeError(f"not a formula node: {phi!r}")


_PRECEDENCE = {"quant": 0, "imp": 1, "or": 2, "and": 3, "not": 4, "atom": 5}


def _fo_text(phi: FoFormula) -> tuple[str, str]:
    """Render with minimal parentheses; returns (text, level name)."""
    if isinstance(phi, PredAtom):
        return f"{phi.pred}({phi.var})", "atom"
    if isinstance(phi, RelAtom):
        return f"{phi.rel}({phi.var1},{phi.var2})", "atom"
    if isinstance(phi, Top):
        return "T", "atom"
    if isinstance(phi, Bot):
        return "F", "atom"
    if isinstance(phi, Not):
        body, lvl = _fo_text(phi.body)
        if _PRECEDENCE[lvl] < _PRECEDENCE["not"]:
            body = f"({body})"
        return f"~{body}", "not"
    if isinstance(phi, (And, Or)):
        op, lvl = ("&", "and") if isinstance(phi, And) else ("|", "or")
        lt, ll = _fo_text(phi.left)
        rt, rl = _fo_text(phi.right)
        if _PRECEDENCE[ll] < _PRECEDENCE[lvl]:
            lt = f"({lt})"
        if _PRECEDENCE[rl] <= _PRECEDENCE[lvl] and rl != lvl:
            rt = f"({rt})"
        if rl == lvl:
            rt = f"({rt})"
        return f"{lt} {op} {rt}", lvl
    if isinstance(phi, Implies):
        lt, ll = _fo_text(phi.left)
        rt, rl = _fo_text(phi.right)
        if _PRECEDENCE[ll] <= _PRECEDENCE["imp"]:
            lt = f"({lt})"
        if _PRECEDENCE[rl] < _PRECEDENCE["imp"]:
            rt = f"({rt})"
        return f"{lt} -> {rt}", "imp"
    if isinstance(phi, (Forall, Exists)):
        word = "forall" if isinstance(phi, Forall) else "exists"
        body, lvl = _fo_text(phi.body)
        if lvl == "atom":
            return f"{word} {phi.var} {body}", "quant"
        return f"{word} {phi.var} ({body})", "quant"
    raise TypeError(f"not a formula node: {phi!r}")


def fo_text(phi: FoFormula) -> str:
    return _fo_text(phi)[0]


# -- fragment formulas ----------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    """A predicate atom P<n> at the designated variable."""

    pred: str


@dataclass(frozen=True)
class Apply:
    """Application of a named connective to fragment subformulas."""

    name: str
    args: tuple["FragmentFormula", ...]


FragmentFormula = Union[Atom, Apply]


def fragment_text(f: FragmentFormula) -> str:
    if isinstance(f, Atom):
        return f.pred
    if not f.args:
        return f.name
    return f"{f.name}({','.join(fragment_text(a) for a in f.args)})"


def fragment_depth(f: FragmentFormula) -> int:
    """Apply-nesting depth; atoms and nullary applications sit at depth 0."""
    if isinstance(f, Atom) or not f.args:
        return 0
    return 1 + max(fragment_depth(a) for a in f.args)
