"""Canonical text form for exact rationals ("p/q", lowest terms, q >= 1)."""

import math
from fractions import Fraction
from typing import Union

INF_TEXT = "inf"


def format_fraction(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_term(x) -> str:
    """Like :func:`format_fraction` but renders ``math.inf`` as ``"inf"``."""
    if x == math.inf:
        return INF_TEXT
    return format_fraction(x)


def parse_fraction(text: Union[str, int, Fraction]) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    text = text.strip()
    if "/" in text:
        p, q = text.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(int(text))


def parse_term(text: str):
    if text.strip() == INF_TEXT:
        return math.inf
    return parse_fraction(text)
