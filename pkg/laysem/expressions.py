"""Element, expression and map-table parsing over a configured instance."""

import logging
import re
from pathlib import Path
from typing import Any, Optional, Union

from laysem.core import LayeredElement, LayeredMap, LayeredSemiring
from laysem.errors import DomainMismatchError, ParseError
from laysem.monoids import ValuedMonoid, ValueSymbol
from laysem.notation import parse_fraction, split_element
from laysem.sorting import Sort, parse_sort

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(?P<op>[()+*])|(?P<element>[^\s()+*]+))")
_SENTINELS = {symbol.value: symbol for symbol in ValueSymbol}


def base_monoid(R: LayeredSemiring) -> Optional[ValuedMonoid]:
    """The valued monoid underneath R, following derived constructions to their parent."""
    current: Any = R
    while current is not None:
        base = getattr(current, "base", None)
        if isinstance(base, ValuedMonoid):
            return base
        current = getattr(current, "parent", None)
    return None


def parse_element(text: str, R: LayeredSemiring) -> LayeredElement:
    """Parse ``<value>@<sort>`` and check membership in R.

    Raises:
        ParseError: If the syntax is wrong or the pair is not an element of R
    """
    value_text, sort_text = split_element(text)
    sort: Sort = parse_sort(sort_text, R.sorting)
    value: Any
    if value_text in _SENTINELS:
        value = _SENTINELS[value_text]
    else:
        base = base_monoid(R)
        rational = parse_fraction(value_text)
        value = base.coerce(rational) if base is not None else rational
    element = LayeredElement(value, sort)
    if not R.contains(element):
        raise ParseError(f"{element} is not an element of {R.name}")
    return element


def _tokenize(text: str) -> list[str]:
    tokens = []
    position = 0
    while position < len(text):
        if not text[position:].strip():
            break
        match = _TOKEN.match(text, position)
        if match is None:
            raise ParseError(f"unexpected input at {text[position:]!r}")
        tokens.append(match.group("op") or match.group("element"))
        position = match.end()
    return tokens


class _ExpressionParser:
    """expr := operand (op operand)*, one operator kind per parenthesis level."""

    def __init__(self, tokens: list[str], R: LayeredSemiring):
        self.tokens = tokens
        self.position = 0
        self.R = R

    def peek(self) -> Optional[str]:
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def take(self) -> str:
        token = self.peek()
        if token is None:
            raise ParseError("unexpected end of expression")
        self.position += 1
        return token

    def operand(self) -> LayeredElement:
        token = self.take()
        if token == "(":
            value = self.expression()
            if self.take() != ")":
                raise ParseError("expected ')'")
            return value
        if token in ("+", "*", ")"):
            raise ParseError(f"unexpected {token!r}")
        return parse_element(token, self.R)

    def expression(self) -> LayeredElement:
        result = self.operand()
        operator: Optional[str] = None
        while self.peek() in ("+", "*"):
            token = self.take()
            if operator is not None and token != operator:
                raise ParseError("mixed '+' and '*' need parentheses")
            operator = token
            other = self.operand()
            result = self.R.add(result, other) if token == "+" else self.R.mul(result, other)
        return result


def evaluate(text: str, R: LayeredSemiring) -> LayeredElement:
    """Evaluate a parenthesized ``+``/``*`` expression over R.

    Raises:
        ParseError: On malformed input, unknown elements or mixed operators
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    parser = _ExpressionParser(tokens, R)
    result = parser.expression()
    if parser.peek() is not None:
        raise ParseError(f"unexpected {parser.peek()!r} after expression")
    logger.debug("evaluated %s -> %s", text, result)
    return result


def parse_map_table(
    text: str, src: LayeredSemiring, dst: LayeredSemiring, name: str = "table"
) -> LayeredMap:
    """Parse ``<src> -> <dst>`` lines, plus optional ``sort <k> -> <l>`` lines for rho.

    Raises:
        ParseError: With the line number on bad syntax, duplicates or missing coverage
    """
    table: dict[LayeredElement, LayeredElement] = {}
    sorts: dict[Sort, Sort] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        left, arrow, right = line.partition("->")
        if not arrow:
            raise ParseError(f"expected '<src> -> <dst>', got {line!r}", number)
        left, right = left.strip(), right.strip()
        try:
            if left.startswith("sort "):
                k = parse_sort(left[len("sort "):], src.sorting)
                if k in sorts:
                    raise ParseError(f"duplicate sort {k}")
                sorts[k] = parse_sort(right, dst.sorting)
                continue
            a = parse_element(left, src)
            if a in table:
                raise ParseError(f"duplicate entry for {a}")
            table[a] = parse_element(right, dst)
        except ParseError as exc:
            if exc.line is not None:
                raise
            raise ParseError(str(exc), number) from exc
    if src.is_finite:
        missing = [x for x in src.elements() if x not in table]
        if missing:
            raise ParseError(f"map table does not cover {', '.join(map(str, missing))}")
    if sorts and src.sorting.is_finite:
        missing_sorts = [k for k in src.sorting.elements() if k not in sorts]
        if missing_sorts:
            raise ParseError(f"sort map does not cover {', '.join(map(str, missing_sorts))}")

    def phi(x: LayeredElement) -> LayeredElement:
        try:
            return table[x]
        except KeyError:
            raise DomainMismatchError(f"{x} is not in the map table")

    rho = sorts.__getitem__ if sorts else None
    return LayeredMap(name=name, src=src, dst=dst, phi=phi, rho=rho)


def load_map_table(
    path: Union[str, Path], src: LayeredSemiring, dst: LayeredSemiring
) -> LayeredMap:
    file_path = Path(path)
    return parse_map_table(file_path.read_text(encoding="utf-8"), src, dst, name=file_path.stem)
