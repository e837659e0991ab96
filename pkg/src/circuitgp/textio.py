"""Text form of circuit genotypes.

CGP circuits print as ``circuit((1,2,3), ((4,OR,1,2), (5,AND,2,3), (6,XOR,4,5)))``
with node indices spelled out; LGP programs print as a list of
``(function, out, in1, in2)`` register tuples. Parsing ignores whitespace
and reports the character position of the first offending token.

Connection constraints are not part of the text form, so parsing accepts
optional ``levels_back`` / ``n_calc_registers`` / ``n_inputs`` overrides;
without them a CGP circuit gets the widest legal levels-back and an LGP
program the default two computational registers with the smallest input
arity consistent with its register references.
"""

from __future__ import annotations

from .circuits import (
    CgpGenotype,
    CgpNode,
    Genotype,
    LgpGenotype,
    LgpInstruction,
    max_levels_back,
)
from .errors import CircuitParseError, ValidationError
from .gates import GateFn

DEFAULT_CALC_REGISTERS = 2

_PUNCT = "()[],"


class _Tokens:
    """Whitespace-insensitive token stream with positions."""

    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []  # (kind, value, position)
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch in _PUNCT:
                self.items.append(("punct", ch, i))
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.items.append(("int", text[i:j], i))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.items.append(("name", text[i:j], i))
                i = j
            else:
                raise CircuitParseError(f"unexpected character {ch!r}", i)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        if self.pos >= len(self.items):
            return ("end", "", len(self.text))
        return self.items[self.pos]

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        kind, got, at = self.next()
        if got != value or kind == "end":
            shown = got if kind != "end" else "end of input"
            raise CircuitParseError(f"expected {value!r}, found {shown}", at)

    def expect_int(self) -> int:
        kind, got, at = self.next()
        if kind != "int":
            raise CircuitParseError(f"expected an integer, found {got!r}", at)
        return int(got)

    def done(self) -> None:
        kind, got, at = self.peek()
        if kind != "end":
            raise CircuitParseError(f"trailing input {got!r}", at)


def _parse_cgp(toks: _Tokens, levels_back: int | None, n_inputs: int | None) -> CgpGenotype:
    kind, name, at = toks.next()
    if kind != "name" or name != "circuit":
        raise CircuitParseError("expected 'circuit'", at)
    toks.expect("(")

    toks.expect("(")
    inputs = [toks.expect_int()]
    while toks.peek()[1] == ",":
        toks.next()
        inputs.append(toks.expect_int())
    toks.expect(")")
    if inputs != list(range(1, len(inputs) + 1)):
        raise CircuitParseError(f"input indices must run 1..n, got {tuple(inputs)}", at)
    n = len(inputs)
    if n_inputs is not None and n_inputs != n:
        raise ValidationError(f"circuit text declares {n} inputs, expected {n_inputs}")

    toks.expect(",")
    toks.expect("(")
    nodes = []
    while toks.peek()[1] == "(":
        toks.next()
        idx_at = toks.peek()[2]
        idx = toks.expect_int()
        toks.expect(",")
        kind, fn_name, fn_at = toks.next()
        if kind != "name" or fn_name not in GateFn.__members__:
            raise CircuitParseError(f"unknown gate function {fn_name!r}", fn_at)
        toks.expect(",")
        in1 = toks.expect_int()
        toks.expect(",")
        in2 = toks.expect_int()
        toks.expect(")")
        if idx != n + len(nodes) + 1:
            raise CircuitParseError(
                f"gate index {idx} out of order, expected {n + len(nodes) + 1}", idx_at
            )
        nodes.append(CgpNode(GateFn[fn_name], in1, in2))
        if toks.peek()[1] == ",":
            toks.next()
    toks.expect(")")
    toks.expect(")")
    toks.done()

    if not nodes:
        raise CircuitParseError("circuit has no gates", len(toks.text))
    lb = levels_back if levels_back is not None else max_levels_back(n, len(nodes))
    return CgpGenotype(n_inputs=n, nodes=tuple(nodes), levels_back=lb)


def _parse_lgp(
    toks: _Tokens,
    n_inputs: int | None,
    n_calc_registers: int | None,
) -> LgpGenotype:
    toks.expect("[")
    instructions = []
    while toks.peek()[1] == "(":
        toks.next()
        fields = [toks.expect_int()]
        for _ in range(3):
            toks.expect(",")
            fields.append(toks.expect_int())
        toks.expect(")")
        instructions.append(LgpInstruction(*fields))
        if toks.peek()[1] == ",":
            toks.next()
    toks.expect("]")
    toks.done()

    if not instructions:
        raise CircuitParseError("program has no instructions", 0)
    n_calc = n_calc_registers if n_calc_registers is not None else DEFAULT_CALC_REGISTERS
    if n_inputs is None:
        top = max(max(ins.in1, ins.in2, ins.out_reg) for ins in instructions)
        n_inputs = max(1, top - n_calc)
    return LgpGenotype(
        n_inputs=n_inputs,
        n_calc_registers=n_calc,
        instructions=tuple(instructions),
    )


def parse_circuit(
    text: str,
    repr_name: str,
    *,
    levels_back: int | None = None,
    n_inputs: int | None = None,
    n_calc_registers: int | None = None,
) -> Genotype:
    """Parse the text form of a genotype in the given representation."""
    toks = _Tokens(text)
    if repr_name == "cgp":
        return _parse_cgp(toks, levels_back, n_inputs)
    if repr_name == "lgp":
        return _parse_lgp(toks, n_inputs, n_calc_registers)
    raise ValidationError(f"unknown representation {repr_name!r}; use cgp or lgp")


def format_circuit(g: Genotype) -> str:
    """Canonical text form. Round-trips through parse_circuit."""
    if isinstance(g, CgpGenotype):
        inputs = ",".join(str(i) for i in range(1, g.n_inputs + 1))
        gates = ", ".join(
            f"({g.n_inputs + j},{node.fn.name},{node.in1},{node.in2})"
            for j, node in enumerate(g.nodes, start=1)
        )
        return f"circuit(({inputs}), ({gates}))"
    if isinstance(g, LgpGenotype):
        body = ", ".join(
            f"({ins.fn_index}, {ins.out_reg}, {ins.in1}, {ins.in2})"
            for ins in g.instructions
        )
        return f"[{body}]"
    raise ValidationError(f"not a genotype: {g!r}")
