"""Helpers shared by the text forms."""

from fractions import Fraction

from .errors import ParseError

_OPEN = "([{"
_CLOSE = ")]}"


def split_top(text, sep):
    """Split on ``sep`` outside any bracket pair."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced {ch!r}", column=i + 1)
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth:
        raise ParseError("unbalanced brackets")
    parts.append(text[start:])
    return parts


def unwrap(text, open_="(", close=")"):
    text = text.strip()
    if not (text.startswith(open_) and text.endswith(close)):
        raise ParseError(f"expected {open_}...{close}, got {text!r}")
    return text[1:-1]


def fmt_q(x):
    """Exact rational as ``p/q``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {text!r}")


def fields(text, allowed):
    """``key=value`` pairs separated by top-level ``;``."""
    out = {}
    for part in split_top(text.strip(), ";"):
        key, eq, value = part.partition("=")
        key = key.strip()
        if not eq or key not in allowed or key in out:
            raise ParseError(f"bad field {part.strip()!r}")
        out[key] = value.strip()
    return out
