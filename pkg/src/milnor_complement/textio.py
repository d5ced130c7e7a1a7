"""Text formats for ideals and arrangements.

Ideal files hold one generator per line, either ``x1*x2*x5`` (exponents
as ``x3^2``) or ``{1,2,5}``.  Arrangement files start with ``n=<int>``
followed by one ``{i,j,...}`` per line.  Blank lines and lines starting
with ``#`` are ignored; an ideal file may also carry an ``n=`` header.
"""

from __future__ import annotations

import re

from .combinatorics import InputError, Monomial, MonomialIdeal, minimal_generators

_HEADER = re.compile(r"^n\s*=\s*(\d+)$")
_SET = re.compile(r"^\{\s*(\d+(?:\s*,\s*\d+)*)?\s*\}$")
_FACTOR = re.compile(r"^x(\d+)(?:\s*\^\s*(\d+))?$")


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _split_inline(text: str) -> str:
    # inline input separates generators with ';'
    return "\n".join(text.split(";")) if "\n" not in text else text


def parse_index_set(token: str) -> list[int] | None:
    m = _SET.match(token.strip())
    if not m:
        return None
    body = m.group(1)
    return [int(t) for t in body.split(",")] if body else []


def parse_monomial_exponents(token: str) -> dict[int, int] | None:
    token = token.strip()
    if token == "1":
        return {}
    exps: dict[int, int] = {}
    for factor in token.split("*"):
        m = _FACTOR.match(factor.strip())
        if not m:
            return None
        i, e = int(m.group(1)), int(m.group(2) or 1)
        exps[i] = exps.get(i, 0) + e
    return exps


def parse_generator_lines(text: str) -> tuple[list[tuple[int, str]], int | None]:
    """Raw ``(line number, generator)`` pairs and the optional ``n=`` header."""
    n = None
    gens: list[tuple[int, str]] = []
    for lineno, line in _lines(_split_inline(text)):
        m = _HEADER.match(line)
        if m:
            if n is not None or gens:
                raise InputError(f"line {lineno}: n= header must come first and only once")
            n = int(m.group(1))
            continue
        gens.append((lineno, line))
    return gens, n


def parse_ideal_text(text: str, n: int | None = None) -> MonomialIdeal:
    gens, header_n = parse_generator_lines(text)
    exps_list = []
    for lineno, token in gens:
        idx = parse_index_set(token)
        if idx is not None:
            exps_list.append({i: 1 for i in idx})
            continue
        exps = parse_monomial_exponents(token)
        if exps is None:
            raise InputError(f"line {lineno}: cannot parse monomial {token!r}")
        exps_list.append(exps)
    if any(i < 1 for e in exps_list for i in e):
        raise InputError("variable indices start at 1")
    biggest = max((i for e in exps_list for i in e), default=0)
    n = n or header_n or biggest
    if biggest > n:
        raise InputError(f"generator uses x{biggest} but n={n}")
    if n < 1:
        raise InputError("cannot determine the number of variables")
    return minimal_generators([Monomial.from_exponents(e, n) for e in exps_list], n)


def parse_arrangement_text(text: str) -> tuple[list[list[int]], int]:
    n = None
    subspaces = []
    for lineno, line in _lines(text):
        m = _HEADER.match(line)
        if m:
            if n is not None or subspaces:
                raise InputError(f"line {lineno}: n= header must come first and only once")
            n = int(m.group(1))
            continue
        if n is None:
            raise InputError(f"line {lineno}: arrangement files must start with n=<int>")
        idx = parse_index_set(line)
        if idx is None:
            raise InputError(f"line {lineno}: expected an index set like {{1,2}}, got {line!r}")
        bad = [i for i in idx if not 1 <= i <= n]
        if bad:
            raise InputError(f"line {lineno}: index {bad[0]} outside 1..{n}")
        subspaces.append(sorted(set(idx)))
    if n is None:
        raise InputError("missing n=<int> header")
    return subspaces, n


def format_ideal(ideal: MonomialIdeal) -> str:
    return "\n".join(str(g) for g in ideal.generators)
