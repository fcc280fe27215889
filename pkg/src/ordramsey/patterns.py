"""Parser for the compact pattern notation used on the command line.

    expr  := "nm:" INT | "k:" INT | "path:" INT | "star:" INT "," INT
           | "join(" expr ("+" expr)* ")" | "file:" PATH

``file:`` paths run up to the next ``+`` or ``)`` when nested inside a join.
"""

from __future__ import annotations

from pathlib import Path

from .graphs import (
    GraphFormatError,
    OrderedGraph,
    complete_graph,
    join_all,
    monotone_path,
    nested_matching,
    ordered_star,
)


class PatternSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, message: str):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos} in {text!r}")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.depth = 0

    def fail(self, message: str, pos: int | None = None):
        raise PatternSyntaxError(self.text, self.pos if pos is None else pos, message)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, s: str) -> None:
        if not self.text.startswith(s, self.pos):
            self.fail(f"expected {s!r}")
        self.pos += len(s)

    def integer(self, name: str, minimum: int = 1) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail(f"expected an integer for {name}")
        value = int(self.text[start : self.pos])
        if value < minimum:
            self.fail(f"{name} must be at least {minimum}", start)
        return value

    def expr(self) -> OrderedGraph:
        start = self.pos
        if self.text.startswith("join(", self.pos):
            self.pos += len("join(")
            self.depth += 1
            parts = [self.expr()]
            while self.peek() == "+":
                self.pos += 1
                parts.append(self.expr())
            self.expect(")")
            self.depth -= 1
            return join_all(parts)
        head = self.text[self.pos : self.text.find(":", self.pos)] if ":" in self.text[self.pos :] else ""
        if head == "nm":
            self.pos += 3
            return nested_matching(self.integer("nm size"))
        if head == "k":
            self.pos += 2
            return complete_graph(self.integer("clique size"))
        if head == "path":
            self.pos += 5
            return monotone_path(self.integer("path length"))
        if head == "star":
            self.pos += 5
            left = self.integer("star l")
            self.expect(",")
            return ordered_star(left, self.integer("star r"))
        if head == "file":
            self.pos += 5
            end = len(self.text)
            if self.depth:
                stops = [i for i in (self.text.find("+", self.pos), self.text.find(")", self.pos)) if i >= 0]
                end = min(stops, default=end)
            path = self.text[self.pos : end]
            if not path:
                self.fail("expected a file path")
            self.pos = end
            return load_graph_file(path)
        if start == len(self.text):
            self.fail("unexpected end of pattern")
        self.fail("unknown pattern kind", start)
        raise AssertionError  # unreachable


def load_graph_file(path: str) -> OrderedGraph:
    text = Path(path).read_text(encoding="ascii")
    try:
        return OrderedGraph.from_text(text)
    except GraphFormatError as exc:
        raise GraphFormatError(exc.line, f"{path}: {exc.message}") from None


def parse_pattern(text: str) -> OrderedGraph:
    p = _Parser(text.strip())
    g = p.expr()
    if p.pos != len(p.text):
        p.fail("unexpected trailing input")
    return g
