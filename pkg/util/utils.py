"""Literal grammar for field elements and codes on the command line and in YAML configurations.

Elements: ``auto`` (find_gamma), ``w`` or ``w^k`` (powers of the generator), raw integer
encodings, each optionally negated with a leading ``-``. Codes: ``G:k:s``, ``H:k:s:eta:h``,
``D:k:s:gamma``.
"""
import functools
from typing import Any, List, Union

import galois
from lark import Lark, Transformer
from lark.exceptions import LarkError

from algebra import fieldtower as ft
from algebra.fieldtower import FieldTower
from codes import codes as cd
from codes.codes import RankMetricCode

LITERAL_GRAMMAR = r"""
    element: NEG? atom
    ?atom: "auto"        -> auto
         | "w" "^" INT   -> power
         | "w"           -> generator
         | INT           -> raw
    code: FAMILY (":" element)+
    FAMILY: "G" | "H" | "D"
    NEG: "-"
    %import common.INT
    %import common.WS
    %ignore WS
"""

AUTO = "auto"
POWER = "power"
RAW = "raw"


class ElementLiteral(object):
    """
    Unresolved element; becomes a field element once a tower is known.
    """

    def __init__(self, kind: str, value: int = 0, negate: bool = False) -> None:
        self.kind = kind
        self.value = value
        self.negate = negate

    def __str__(self) -> str:
        sign = "-" if self.negate else ""
        if self.kind == AUTO:
            return sign + AUTO
        if self.kind == POWER:
            return "{}w^{}".format(sign, self.value)
        return "{}{}".format(sign, self.value)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ElementLiteral):
            return NotImplemented
        return (self.kind, self.value, self.negate) == (other.kind, other.value, other.negate)

    def resolve(self, tower: FieldTower) -> galois.FieldArray:
        if self.kind == AUTO:
            x = ft.find_gamma(tower)
        elif self.kind == POWER:
            x = ft.element_from_power(tower, self.value)
        else:
            if self.value >= tower.order:
                raise ValueError("{} is not an element of F_{}".format(self.value, tower.order))
            x = tower.GF(self.value)
        return -x if self.negate else x

    def as_int(self) -> int:
        if self.kind != RAW or self.negate:
            raise ValueError("Expected a non-negative integer, got {}".format(self))
        return self.value


class CodeLiteral(object):
    """
    Family letter plus parameters, e.g. D:2:1:w.
    """

    ARITY = {"G": 2, "H": 4, "D": 3}

    def __init__(self, family: str, items: List[ElementLiteral]) -> None:
        if len(items) != CodeLiteral.ARITY[family]:
            raise ValueError(
                "{} takes {} parameters, got {}".format(family, CodeLiteral.ARITY[family], len(items))
            )
        self.family = family
        self.items = items

    def __str__(self) -> str:
        return ":".join([self.family] + [str(_) for _ in self.items])

    def build(self, tower: FieldTower) -> RankMetricCode:
        k, s = self.items[0].as_int(), self.items[1].as_int()
        if self.family == "G":
            return cd.make_gabidulin(tower, k, s)
        if self.family == "H":
            return cd.make_twisted(tower, k, s, self.items[2].resolve(tower), self.items[3].as_int())
        return cd.make_D(tower, k, s, self.items[2].resolve(tower))


class LiteralTransformer(Transformer):  # type: ignore
    def auto(self, _: List[Any]) -> ElementLiteral:
        return ElementLiteral(AUTO)

    def power(self, items: List[Any]) -> ElementLiteral:
        return ElementLiteral(POWER, int(items[0]))

    def generator(self, _: List[Any]) -> ElementLiteral:
        return ElementLiteral(POWER, 1)

    def raw(self, items: List[Any]) -> ElementLiteral:
        return ElementLiteral(RAW, int(items[0]))

    def element(self, items: List[Any]) -> ElementLiteral:
        literal: ElementLiteral = items[-1]
        literal.negate = len(items) == 2
        return literal

    def code(self, items: List[Any]) -> CodeLiteral:
        return CodeLiteral(str(items[0]), items[1:])


@functools.lru_cache(maxsize=None)
def literal_parser() -> Lark:
    return Lark(LITERAL_GRAMMAR, start=["element", "code"], parser="lalr")


def _parse(text: str, start: str) -> Any:
    try:
        tree = literal_parser().parse(text, start=start)
        return LiteralTransformer().transform(tree)
    except LarkError as e:
        raise ValueError("Bad {} literal {!r}: {}".format(start, text, e))


def parse_element(value: Union[str, int, ElementLiteral]) -> ElementLiteral:
    """Element literal from a CLI string, a YAML scalar or an already parsed literal."""
    if isinstance(value, ElementLiteral):
        return value
    if isinstance(value, int):
        return ElementLiteral(RAW, abs(value), value < 0)
    return _parse(str(value), "element")


def parse_code(value: Union[str, CodeLiteral]) -> CodeLiteral:
    if isinstance(value, CodeLiteral):
        return value
    return _parse(str(value), "code")
