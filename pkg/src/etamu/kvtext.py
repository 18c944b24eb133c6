"""Flat ``key=value`` text records with ``#`` comments and dotted keys."""
from .errors import DomainError


def parse(text):
    """Parse into an ordered dict; later duplicates are an error."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise DomainError(f"line {lineno}: empty key")
        if key in out:
            raise DomainError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def fmt_float(x):
    """Shortest repr that round-trips."""
    return repr(float(x))


def dump(items, header=None):
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.extend(f"{k}={v}" for k, v in items)
    return "\n".join(lines) + "\n"
