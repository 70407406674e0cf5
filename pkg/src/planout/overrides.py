"""Override ("freeze") strings of the form `param:value,param2:value2`.

Values are typed by parse precedence: integer, then float, then bare
string.  Booleans are written 1/0.  The same typing rule is used for CLI
--input/--override flags and extra query parameters on the assignment
endpoint.
"""

from __future__ import annotations

from .errors import MalformedOverride


def parse_value(raw: str):
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def parse_override_string(raw: str) -> dict:
    """Empty string -> empty map; missing colon or empty key/value is an
    error."""
    overrides: dict = {}
    if not raw:
        return overrides
    for piece in raw.split(","):
        if ":" not in piece:
            raise MalformedOverride(f"missing ':' in {piece!r}")
        key, value = piece.split(":", 1)
        if not key:
            raise MalformedOverride(f"empty parameter name in {piece!r}")
        if not value:
            raise MalformedOverride(f"empty value in {piece!r}")
        overrides[key] = parse_value(value)
    return overrides


def format_override_string(overrides: dict) -> str:
    """Canonical form (sorted keys); reparses to an equal map."""
    return ",".join(f"{k}:{_format_value(overrides[k])}"
                    for k in sorted(overrides))


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    return str(value)
