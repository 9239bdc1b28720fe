"""
Line-oriented circuit netlist.

Example::

    # four asymmetric ACD blocks, phi swept
    source intensity=1.0
    block phi=sweep psi=0 coupling=asym repeat=4

Directives:

``source intensity=<I0>``
    Optional, at most once. Default intensity is 1.0.
``block phi=<angle|sweep|sweep:NAME> [psi=<angle>] [coupling=asym|sym] [repeat=<k>]``
    One or more, applied in file order (the first block sees the source).

Angles are radians: a float literal, or ``pi`` with an optional leading
factor and divisor (``pi``, ``-pi/2``, ``0.5*pi``, ``3pi/4``). Every swept
block shares a single sweep symbol.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .optics import BlockParams, Coupling, Matrix2, acd_block

DEFAULT_SWEEP = "sweep"

_PI_RE = re.compile(r"^(?P<factor>[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?\*?|[+-])?pi(?:/(?P<div>\d+(?:\.\d*)?|\.\d+))?$")
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_COUPLINGS = {c.value: c for c in Coupling}


class NetlistError(ValueError):
    """Malformed netlist; carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class BlockDecl:
    phi: float | None  # None when swept
    psi: float = 0.0
    coupling: Coupling = Coupling.ASYMMETRIC
    repeat: int = 1
    sweep: str | None = None

    @property
    def swept(self) -> bool:
        return self.sweep is not None


@dataclass(frozen=True)
class CircuitSpec:
    blocks: tuple[BlockDecl, ...]
    source_intensity: float = 1.0

    @property
    def n_blocks(self) -> int:
        """Total ACD block count with repeats expanded."""
        return sum(b.repeat for b in self.blocks)

    @property
    def sweep_symbol(self) -> str | None:
        return next((b.sweep for b in self.blocks if b.swept), None)

    def block_params(self, phi=0.0) -> list[BlockParams]:
        """Expanded per-block settings with ``phi`` substituted for the sweep."""
        out = []
        for b in self.blocks:
            value = phi if b.swept else b.phi
            out.extend([BlockParams(value, b.psi, b.coupling)] * b.repeat)
        return out

    def matrix(self, phi=0.0) -> Matrix2:
        """Circuit transfer matrix; broadcasts over an array-valued ``phi``."""
        total = None
        for params in self.block_params(phi):
            m = acd_block(params)
            total = m if total is None else m @ total
        shape = np.shape(phi)
        return np.broadcast_to(total, shape + (2, 2)) if total.shape[:-2] != shape else total


@dataclass
class _Token:
    key: str
    value: str
    column: int
    value_column: int = field(init=False)

    def __post_init__(self):
        self.value_column = self.column + len(self.key) + 1


def parse_angle(text: str) -> float:
    """Parse a radian angle literal; raises ``ValueError`` when malformed."""
    m = _PI_RE.match(text)
    if m:
        factor = m.group("factor") or ""
        factor = factor.rstrip("*")
        scale = {"": 1.0, "+": 1.0, "-": -1.0}.get(factor)
        if scale is None:
            scale = float(factor)
        value = scale * math.pi
        if m.group("div"):
            div = float(m.group("div"))
            if div == 0:
                raise ValueError("division by zero")
            value /= div
    else:
        value = float(text)
    if not math.isfinite(value):
        raise ValueError("angle must be finite")
    return value


def _tokens(body: str, start: int, lineno: int) -> list[_Token]:
    tokens = []
    for m in re.finditer(r"\S+", body):
        col = start + m.start() + 1
        word = m.group()
        if "=" not in word:
            raise NetlistError(f"expected key=value, got {word!r}", lineno, col)
        key, value = word.split("=", 1)
        if not key or not value:
            raise NetlistError(f"expected key=value, got {word!r}", lineno, col)
        tokens.append(_Token(key, value, col))
    return tokens


def _keyed(tokens: list[_Token], allowed: set[str], lineno: int) -> dict[str, _Token]:
    out: dict[str, _Token] = {}
    for tok in tokens:
        if tok.key == "deg":
            raise NetlistError("angles are given in radians; 'deg' is not accepted", lineno, tok.column)
        if tok.key not in allowed:
            raise NetlistError(f"unknown key {tok.key!r}", lineno, tok.column)
        if tok.key in out:
            raise NetlistError(f"duplicate key {tok.key!r}", lineno, tok.column)
        out[tok.key] = tok
    return out


def _angle(tok: _Token, lineno: int) -> float:
    try:
        return parse_angle(tok.value)
    except ValueError:
        raise NetlistError(f"malformed angle {tok.value!r}", lineno, tok.value_column) from None


def _parse_block(tokens: list[_Token], lineno: int) -> BlockDecl:
    keys = _keyed(tokens, {"phi", "psi", "coupling", "repeat"}, lineno)
    if "phi" not in keys:
        raise NetlistError("block needs phi=", lineno, 1)
    phi_tok = keys["phi"]
    sweep = None
    phi: float | None
    if phi_tok.value == DEFAULT_SWEEP or phi_tok.value.startswith(DEFAULT_SWEEP + ":"):
        name = phi_tok.value.partition(":")[2] or DEFAULT_SWEEP
        if not _NAME_RE.match(name):
            raise NetlistError(f"bad sweep symbol {name!r}", lineno, phi_tok.value_column)
        sweep, phi = name, None
    else:
        phi = _angle(phi_tok, lineno)
    psi = _angle(keys["psi"], lineno) if "psi" in keys else 0.0
    coupling = Coupling.ASYMMETRIC
    if "coupling" in keys:
        tok = keys["coupling"]
        if tok.value not in _COUPLINGS:
            raise NetlistError(f"coupling must be asym or sym, got {tok.value!r}", lineno, tok.value_column)
        coupling = _COUPLINGS[tok.value]
    repeat = 1
    if "repeat" in keys:
        tok = keys["repeat"]
        try:
            repeat = int(tok.value)
        except ValueError:
            raise NetlistError(f"malformed integer {tok.value!r}", lineno, tok.value_column) from None
        if repeat < 1:
            raise NetlistError("repeat must be >= 1", lineno, tok.value_column)
    return BlockDecl(phi, psi, coupling, repeat, sweep)


def parse_netlist(text: str) -> CircuitSpec:
    """Parse netlist text into a :class:`CircuitSpec`.

    Raises
    ------
    NetlistError
        On any syntax or validation problem, with line and column.
    """
    blocks: list[BlockDecl] = []
    intensity = 1.0
    seen_source = False
    sweep_symbol: str | None = None
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.split("#", 1)[0]
        m = re.match(r"\s*(\S+)", line)
        if not m:
            continue
        directive = m.group(1)
        tokens = _tokens(line[m.end():], m.end(), lineno)
        if directive == "source":
            if seen_source:
                raise NetlistError("source given more than once", lineno, m.start(1) + 1)
            seen_source = True
            keys = _keyed(tokens, {"intensity"}, lineno)
            if "intensity" in keys:
                tok = keys["intensity"]
                try:
                    intensity = float(tok.value)
                except ValueError:
                    raise NetlistError(f"malformed number {tok.value!r}", lineno, tok.value_column) from None
                if not math.isfinite(intensity) or intensity <= 0:
                    raise NetlistError("intensity must be positive and finite", lineno, tok.value_column)
        elif directive == "block":
            block = _parse_block(tokens, lineno)
            if block.swept:
                if sweep_symbol is not None and block.sweep != sweep_symbol:
                    col = next(t.value_column for t in tokens if t.key == "phi")
                    raise NetlistError(
                        f"only one sweep symbol allowed; {sweep_symbol!r} already in use", lineno, col
                    )
                sweep_symbol = block.sweep
            blocks.append(block)
        else:
            raise NetlistError(f"unknown directive {directive!r}", lineno, m.start(1) + 1)
    if not blocks:
        raise NetlistError("netlist declares no blocks", max(last_line, 1), 1)
    return CircuitSpec(tuple(blocks), intensity)


def _render_angle(value: float) -> str:
    return repr(float(value))


def render_netlist(spec: CircuitSpec) -> str:
    """Canonical text form; ``parse_netlist(render_netlist(s)) == s``."""
    lines = [f"source intensity={float(spec.source_intensity)!r}"]
    for b in spec.blocks:
        if b.swept:
            phi = DEFAULT_SWEEP if b.sweep == DEFAULT_SWEEP else f"{DEFAULT_SWEEP}:{b.sweep}"
        else:
            phi = _render_angle(b.phi)
        lines.append(f"block phi={phi} psi={_render_angle(b.psi)} coupling={b.coupling.value} repeat={b.repeat}")
    return "\n".join(lines) + "\n"


def read_netlist(path) -> CircuitSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_netlist(fh.read())
