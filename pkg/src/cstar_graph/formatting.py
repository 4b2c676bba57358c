"""Canonical text rendering of elements; the output re-parses to the same element."""

from __future__ import annotations

from fractions import Fraction

from .graph import Graph, Path
from .scalar import Scalar


def format_path(g: Graph, p: Path) -> str:
    if g.uses_digit_words:
        return p.word()
    return ".".join(p.edges)


def _s_atom(g: Graph, p: Path) -> str:
    if g.uses_digit_words:
        return "S" + p.word()
    return f"S({'.'.join(p.edges)})"


def format_monomial(g: Graph, mu: Path, nu: Path) -> str:
    if mu == nu:
        if not mu.edges:
            return "1" if len(g.vertices) == 1 else f"P({mu.source})"
        return ("P" + mu.word()) if g.uses_digit_words else f"P({'.'.join(mu.edges)})"
    parts = []
    if mu.edges:
        parts.append(_s_atom(g, mu))
    if nu.edges:
        parts.append(_s_atom(g, nu) + "'")
    return " ".join(parts)


def _frac(q: Fraction) -> str:
    return str(q)


def format_scalar(c: Scalar) -> str:
    if c.is_real:
        return _frac(c.real)
    if not c.real:
        return f"({_frac(c.imag)}i)"
    sign = "-" if c.imag < 0 else "+"
    return f"({_frac(c.real)}{sign}{_frac(abs(c.imag))}i)"


def format_element(x) -> str:
    """Terms in canonical order; unit coefficients are omitted."""
    g = x.graph
    pieces: list[tuple[str, str]] = []
    for m in x.terms():
        mono = format_monomial(g, m.mu, m.nu)
        c = m.coefficient
        if c.is_real:
            sign = "-" if c.real < 0 else "+"
            mag = abs(c.real)
            if mono == "1":
                body = _frac(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_frac(mag)} {mono}"
        else:
            sign = "+"
            cs = format_scalar(c)
            body = cs if mono == "1" else f"{cs} {mono}"
        pieces.append((sign, body))
    if not pieces:
        return "0"
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
