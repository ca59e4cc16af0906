"""Ground facts and partitioned instances.

An instance is a finite set of ground facts over opaque constants.  Every
fact carries a tag that marks it endogenous (a candidate for causes,
contingencies, and diagnoses) or exogenous (fixed background).  Fact
identity is the atom plus the optional tuple id; the tag is metadata and
never participates in identity, so an instance cannot hold the same atom
under both tags.

Constants are plain strings.  The reserved token ``null`` denotes the
distinguished null value; it never joins with anything (including itself),
which is enforced by the query evaluator, not by string equality here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .errors import SemanticError

ENDOGENOUS = "endogenous"
EXOGENOUS = "exogenous"
NULL = "null"

_BARE_TOKEN = re.compile(r"[a-z][A-Za-z0-9_]*\Z|-?[0-9]+\Z")


def is_null(value: str) -> bool:
    return value == NULL


def format_constant(value: str) -> str:
    """Render a constant the way the instance grammar accepts it."""
    if _BARE_TOKEN.match(value):
        return value
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


@dataclass(frozen=True)
class Fact:
    """A ground atom, e.g. ``R(a4,a3)`` or, with a tuple id, ``R(2;a3,a3)``."""

    pred: str
    args: tuple[str, ...]
    tag: str = field(default=ENDOGENOUS, compare=False)
    fact_id: int | None = None

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def atom(self) -> tuple[str, tuple[str, ...]]:
        return (self.pred, self.args)

    @property
    def is_endogenous(self) -> bool:
        return self.tag == ENDOGENOUS

    def with_args(self, args: tuple[str, ...]) -> "Fact":
        return Fact(self.pred, args, self.tag, self.fact_id)

    def __str__(self) -> str:
        return format_fact(self)

    def __repr__(self) -> str:
        return f"Fact[{format_fact(self)}]"


def fact(pred: str, *args: str, tag: str = ENDOGENOUS, fact_id: int | None = None) -> Fact:
    """Convenience constructor: ``fact("R", "a4", "a3", tag=EXOGENOUS)``."""
    return Fact(pred, tuple(args), tag, fact_id)


def fact_key(f: Fact) -> tuple:
    """Canonical sort key: (predicate, args, id).  Total and deterministic."""
    return (f.pred, f.args, f.fact_id if f.fact_id is not None else -1)


def format_fact(f: Fact) -> str:
    args = ",".join(format_constant(a) for a in f.args)
    if f.fact_id is not None:
        return f"{f.pred}({f.fact_id};{args})"
    return f"{f.pred}({args})"


@dataclass(frozen=True)
class Instance:
    """An immutable set of facts, implicitly partitioned by their tags."""

    facts: frozenset[Fact]

    @staticmethod
    def of(facts: Iterable[Fact]) -> "Instance":
        return Instance(frozenset(facts))

    @cached_property
    def sorted_facts(self) -> tuple[Fact, ...]:
        return tuple(sorted(self.facts, key=fact_key))

    @cached_property
    def endogenous(self) -> frozenset[Fact]:
        return frozenset(f for f in self.facts if f.tag == ENDOGENOUS)

    @cached_property
    def exogenous(self) -> frozenset[Fact]:
        return frozenset(f for f in self.facts if f.tag == EXOGENOUS)

    @cached_property
    def schema(self) -> dict[str, int]:
        """Predicate name -> arity (first occurrence wins on conflicts)."""
        out: dict[str, int] = {}
        for f in self.sorted_facts:
            out.setdefault(f.pred, f.arity)
        return out

    @cached_property
    def by_atom(self) -> dict[tuple[str, tuple[str, ...]], Fact]:
        out: dict[tuple[str, tuple[str, ...]], Fact] = {}
        for f in self.sorted_facts:
            out.setdefault(f.atom, f)
        return out

    def find(self, pred: str, args: tuple[str, ...]) -> Fact | None:
        """Look up the instance's fact with the given atom, if present."""
        return self.by_atom.get((pred, args))

    def without(self, removed: Iterable[Fact]) -> "Instance":
        return Instance(self.facts - frozenset(removed))

    def __contains__(self, f: Fact) -> bool:
        return f in self.facts

    def __iter__(self) -> Iterator[Fact]:
        return iter(self.sorted_facts)

    def __len__(self) -> int:
        return len(self.facts)

    def __str__(self) -> str:
        return serialize_instance(self)


EMPTY_INSTANCE = Instance(frozenset())


def delta(d: Instance, d_prime: Instance) -> frozenset[Fact]:
    """Symmetric difference of two instances, compared atom by atom.

    Tags and tuple ids do not contribute to identity here.  The same atom
    carrying different tags in the two instances is an error, since the
    difference of a labelled set with itself would be ambiguous.
    """
    left = {f.atom: f for f in d.facts}
    right = {f.atom: f for f in d_prime.facts}
    for atom in left.keys() & right.keys():
        if left[atom].tag != right[atom].tag:
            raise SemanticError(
                f"atom {format_fact(left[atom])} is {left[atom].tag} in one "
                f"instance and {right[atom].tag} in the other"
            )
    diff_atoms = left.keys() ^ right.keys()
    return frozenset(left.get(a) or right[a] for a in diff_atoms)


def check_wellformed(d: Instance) -> list[str]:
    """Return diagnostics for invariant violations; empty means well-formed."""
    diagnostics = []
    arities: dict[str, int] = {}
    for f in d.sorted_facts:
        seen = arities.setdefault(f.pred, f.arity)
        if seen != f.arity:
            diagnostics.append(
                f"predicate {f.pred} used with arity {seen} and {f.arity}"
            )
    ids_seen: dict[int, Fact] = {}
    for f in d.sorted_facts:
        if f.fact_id is None:
            continue
        other = ids_seen.get(f.fact_id)
        if other is not None:
            diagnostics.append(
                f"id {f.fact_id} used by both {format_fact(other)} and {format_fact(f)}"
            )
        else:
            ids_seen[f.fact_id] = f
    return diagnostics


def serialize_instance(d: Instance) -> str:
    """Canonical text form; parsing it back yields an equal instance."""
    lines = []
    endo = sorted(d.endogenous, key=fact_key)
    exo = sorted(d.exogenous, key=fact_key)
    if endo or not exo:
        lines.append("@endogenous")
        lines.extend(f"{format_fact(f)}." for f in endo)
    if exo:
        lines.append("@exogenous")
        lines.extend(f"{format_fact(f)}." for f in exo)
    return "\n".join(lines) + "\n"
