"""Combinatorial partition counts under per-residue multiplicity rules.

This module is the independent ground truth for the eta-quotient
generating functions.  It never touches pochhammer expansions: counts come
from a product of one factor series per admissible part size, and a plain
recursive enumerator double-checks the product for small weights.
"""

from __future__ import annotations

import difflib
import enum
from dataclasses import dataclass
from typing import Mapping

from .series import Series, invert, shift

ENUMERATION_LIMIT = 40


class Rule(enum.Enum):
    ANY = "any"
    DISTINCT = "distinct"
    NOT_ONE = "not-one"
    FORBIDDEN = "forbidden"
    OVERLINED = "overlined"

    def allows(self, multiplicity: int) -> bool:
        if self is Rule.DISTINCT:
            return multiplicity <= 1
        if self is Rule.NOT_ONE:
            return multiplicity != 1
        if self is Rule.FORBIDDEN:
            return multiplicity == 0
        return True

    def weight(self, multiplicity: int) -> int:
        # overpartitions: the first occurrence of a used part may be marked
        if self is Rule.OVERLINED and multiplicity > 0:
            return 2
        return 1


@dataclass(frozen=True)
class ConstraintSpec:
    """Classify parts by ``p mod modulus`` and apply one rule per class."""

    modulus: int
    rules: tuple[Rule, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"classifier modulus must be >= 1, got {self.modulus}")
        if len(self.rules) != self.modulus:
            raise ValueError(
                f"need one rule per residue class: {len(self.rules)} given, "
                f"{self.modulus} classes")

    @classmethod
    def from_rules(cls, modulus: int,
                   rules: Mapping[int, Rule | str]) -> ConstraintSpec:
        table = [Rule.ANY] * modulus
        for r, rule in rules.items():
            if not 0 <= r < modulus:
                raise ValueError(f"residue {r} out of range for m={modulus}")
            table[r] = Rule(rule)
        return cls(modulus, tuple(table))

    def rule_for(self, part: int) -> Rule:
        return self.rules[part % self.modulus]

    def relaxed(self, residue: int) -> ConstraintSpec:
        rules = list(self.rules)
        rules[residue] = Rule.ANY
        return ConstraintSpec(self.modulus, tuple(rules))

    def __str__(self) -> str:
        entries = [f"{r}:{rule.value}" for r, rule in enumerate(self.rules)
                   if rule is not Rule.ANY]
        return ";".join([f"m={self.modulus}", *entries])


def parse_constraint(text: str) -> ConstraintSpec:
    """Parse the CLI mini-syntax, e.g. ``m=2;1:not-one``."""
    head, *entries = [s.strip() for s in text.split(";") if s.strip()]
    key, sep, value = head.partition("=")
    if key.strip() != "m" or not sep:
        raise ValueError(f"constraint must start with 'm=<int>', got {head!r}")
    modulus = int(value)
    rules = {}
    for entry in entries:
        r, sep, rule = entry.partition(":")
        if not sep:
            raise ValueError(f"constraint entry must be 'r:rule', got {entry!r}")
        try:
            rules[int(r)] = Rule(rule.strip())
        except ValueError:
            names = ", ".join(x.value for x in Rule)
            raise ValueError(f"bad entry {entry!r} (rules: {names})") from None
    return ConstraintSpec.from_rules(modulus, rules)


BUILTINS = {
    "partitions": ConstraintSpec.from_rules(1, {}),
    "overpartitions": ConstraintSpec.from_rules(1, {0: Rule.OVERLINED}),
    "pond": ConstraintSpec.from_rules(2, {1: Rule.NOT_ONE}),
    "pend": ConstraintSpec.from_rules(2, {0: Rule.NOT_ONE}),
    "pod": ConstraintSpec.from_rules(2, {1: Rule.DISTINCT}),
    "ped": ConstraintSpec.from_rules(2, {0: Rule.DISTINCT}),
    "mult4-repeat": ConstraintSpec.from_rules(4, {0: Rule.NOT_ONE}),
}


def builtin(name: str) -> ConstraintSpec:
    try:
        return BUILTINS[name]
    except KeyError:
        close = difflib.get_close_matches(name, BUILTINS, n=3)
        hint = f"did you mean {', '.join(close)}? " if close else ""
        raise KeyError(
            f"unknown series {name!r}; {hint}known: {', '.join(BUILTINS)}"
        ) from None


def part_factor(rule: Rule, part: int, order: int) -> Series:
    """Generating series for the multiplicity of one part size."""
    one = Series.one(order)
    if rule is Rule.FORBIDDEN:
        return one
    geometric = invert(one - shift(one, part))
    if rule is Rule.ANY:
        return geometric
    if rule is Rule.DISTINCT:
        return one + shift(one, part)
    if rule is Rule.NOT_ONE:
        return geometric - shift(one, part)
    return geometric * (one + shift(one, part))


def counts_series(spec: ConstraintSpec, order: int) -> Series:
    result = Series.one(order)
    for part in range(1, order):
        rule = spec.rule_for(part)
        if rule is not Rule.FORBIDDEN:
            result = result * part_factor(rule, part, order)
    return result


def count(spec: ConstraintSpec, n: int) -> int:
    if n < 0:
        raise ValueError(f"weight must be >= 0, got {n}")
    return counts_series(spec, n + 1)[n]


def enumerate_count(spec: ConstraintSpec, n: int) -> int:
    """Count by walking every multiset of parts; refuses ``n`` above 40."""
    if n < 0:
        raise ValueError(f"weight must be >= 0, got {n}")
    if n > ENUMERATION_LIMIT:
        raise ValueError(
            f"exhaustive enumeration is limited to n <= {ENUMERATION_LIMIT}, "
            f"got {n}")

    # every rule admits multiplicity 0, so only used part sizes are visited
    def walk(remaining: int, largest: int) -> int:
        if remaining == 0:
            return 1
        total = 0
        for part in range(min(remaining, largest), 0, -1):
            rule = spec.rule_for(part)
            for mult in range(1, remaining // part + 1):
                if rule.allows(mult):
                    total += rule.weight(mult) * walk(remaining - mult * part,
                                                      part - 1)
        return total

    return walk(n, n)


def enumerate_partitions(n: int):
    """Yield the partitions of ``n`` as non-increasing tuples."""

    def walk(remaining, largest):
        if remaining == 0:
            yield ()
            return
        for p in range(min(remaining, largest), 0, -1):
            for rest in walk(remaining - p, p):
                yield (p,) + rest

    yield from walk(n, n)
