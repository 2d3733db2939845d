"""The .opd text DSL: declarations plus commands, with line/column diagnostics.

Grammar (version 1, LL(1); see docs/dsl.md for the full EBNF):

    script    := { statement }
    statement := "let" NAME "=" expr
               | "alphabet" NAME "{" { "knot" NAME | "noncentral" NAME ["lk" "=" INT] } "}"
               | "check" NAME
               | "compose" NAME "(" [names] ")" "->" NAME
               | "act" NAME "(" [names] ")" "->" NAME
               | "normalize" NAME "->" NAME
               | "decompose" NAME "->" NAME
               | "render" NAME
               | "fuzz" { NAME "=" value }
    expr      := "perm" "[" [ints] "]"
               | "cube" "[" interval {"," interval} "]"
               | "cubes" "{" "dim" "=" INT ";" "items" "=" "[" [cubes] "]" "}"
               | "overlap" "{" "intervals" "=" "[" [intervals] "]" ";" "order" "=" expr "}"
               | "forest" "{" node { "marked" INT "=" "(" names ")" } "}"
               | "diagram" "{" "sig" "=" "(" [ints] ";" INT ")" ";" forest-or-name
                 { ";" muffler } [";" "order" "=" expr] [";"] "}"
               | "link1" "{" ["knots" "=" "[" [names] "]"] "}"
               | "link2" "{" fields: twist / central / body "}"
               | NAME
    node      := NAME [ "[" { node } "]" ]
    muffler   := "muffler" "{" "color" "=" INT ";" "time" "=" interval ";"
                 "outer" "=" NAME ";" "holes" "=" "(" [names] ")" [";"] "}"
    interval  := "(" rational "," rational ")"
    rational  := ["-"] INT [ "/" INT ]

Link words bind to the most recently declared alphabet. Binding commands run
while the script loads, so later statements can use their results.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .cubes import AffineMap1, CubesElement, LittleCube
from .diagrams import (
    InfectionDiagram,
    Muffler,
    canonicalize,
    check_constraint,
)
from .diskforest import DiskForest
from .linkmonoid import (
    CENTRAL_KINDS,
    GeneratorAlphabet,
    LinkWord,
    letter_str,
)
from .overlap import OverlapElement, canonicalize as canon_overlap
from .perm import Permutation, identity

DSL_VERSION = 1


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str  # name, int, punct, end
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r\n]+)
      | (?P<comment>\#[^\n]*)
      | (?P<arrow>->)
      | (?P<int>-?\d+)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<punct>[()\[\]{},;=/])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tag = {"arrow": "punct"}.get(kind, kind)
            tokens.append(Token(tag, value, line, col))
        nl = value.count("\n")
        if nl:
            line += nl
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(Token("end", "", line, col))
    return tokens


# -- statements -------------------------------------------------------------


@dataclass
class LetStmt:
    name: str
    expr_kind: str
    value: object
    line: int


@dataclass
class AlphabetStmt:
    name: str
    value: GeneratorAlphabet
    line: int


@dataclass
class CommandStmt:
    verb: str
    args: dict
    line: int


@dataclass
class Script:
    statements: list
    source: str = ""


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.env: dict[str, object] = {}
        self.current_alphabet: GeneratorAlphabet | None = None
        self.statements: list = []

    # token plumbing

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            self.fail(f"expected {text!r}, found {t.text!r}", t)
        return t

    def expect_kind(self, kind: str) -> Token:
        t = self.next()
        if t.kind != kind:
            self.fail(f"expected {kind}, found {t.text!r}", t)
        return t

    def at(self, text: str) -> bool:
        return self.peek().text == text

    def eat(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    # value helpers

    def parse_int(self) -> int:
        return int(self.expect_kind("int").text)

    def parse_rational(self) -> Fraction:
        tok = self.expect_kind("int")
        num = int(tok.text)
        if self.eat("/"):
            den_tok = self.expect_kind("int")
            den = int(den_tok.text)
            if den == 0:
                self.fail("zero denominator", den_tok)
            return Fraction(num, den)
        return Fraction(num)

    def parse_interval(self) -> AffineMap1:
        tok = self.expect("(")
        a = self.parse_rational()
        self.expect(",")
        b = self.parse_rational()
        self.expect(")")
        if not 0 <= a < b <= 1:
            self.fail(f"not an increasing subinterval of [0,1]: ({a},{b})", tok)
        return AffineMap1.from_interval(a, b)

    def parse_names(self, close: str) -> list[str]:
        names: list[str] = []
        if not self.at(close):
            names.append(self.expect_kind("name").text)
            while self.eat(","):
                names.append(self.expect_kind("name").text)
        self.expect(close)
        return names

    def lookup(self, name: str, tok: Token):
        if name not in self.env:
            self.fail(f"unresolved reference {name!r}", tok)
        return self.env[name]

    # expressions

    def parse_expr(self):
        t = self.peek()
        if t.kind != "name":
            self.fail(f"expected an expression, found {t.text!r}")
        head = t.text
        parser = {
            "perm": self.parse_perm,
            "cube": self.parse_cube,
            "cubes": self.parse_cubes,
            "overlap": self.parse_overlap,
            "forest": self.parse_forest,
            "diagram": self.parse_diagram,
            "link1": self.parse_link1,
            "link2": self.parse_link2,
        }.get(head)
        if parser is not None:
            return parser()
        self.next()
        return self.lookup(head, t)

    def parse_perm(self) -> Permutation:
        self.expect("perm")
        self.expect("[")
        images: list[int] = []
        if not self.at("]"):
            images.append(self.parse_int())
            while self.eat(","):
                images.append(self.parse_int())
        tok = self.expect("]")
        try:
            return Permutation(tuple(images))
        except ValueError as e:
            self.fail(str(e), tok)

    def parse_cube(self) -> LittleCube:
        self.expect("cube")
        self.expect("[")
        axes = [self.parse_interval()]
        while self.eat(","):
            axes.append(self.parse_interval())
        self.expect("]")
        return LittleCube(tuple(axes))

    def parse_cubes(self) -> CubesElement:
        self.expect("cubes")
        self.expect("{")
        self.expect("dim")
        self.expect("=")
        dim = self.parse_int()
        self.expect(";")
        self.expect("items")
        self.expect("=")
        tok = self.expect("[")
        items: list[LittleCube] = []
        if not self.at("]"):
            items.append(self.parse_cube())
            while self.eat(","):
                items.append(self.parse_cube())
        self.expect("]")
        self.eat(";")
        self.expect("}")
        try:
            return CubesElement(dim, tuple(items))
        except ValueError as e:
            self.fail(str(e), tok)

    def parse_overlap(self) -> OverlapElement:
        self.expect("overlap")
        self.expect("{")
        self.expect("intervals")
        self.expect("=")
        self.expect("[")
        intervals: list[AffineMap1] = []
        if not self.at("]"):
            intervals.append(self.parse_interval())
            while self.eat(","):
                intervals.append(self.parse_interval())
        self.expect("]")
        self.expect(";")
        self.expect("order")
        self.expect("=")
        tok = self.peek()
        order = self.parse_expr()
        if not isinstance(order, Permutation):
            self.fail("order must be a permutation", tok)
        self.eat(";")
        self.expect("}")
        try:
            return canon_overlap(OverlapElement(tuple(intervals), order))
        except ValueError as e:
            self.fail(str(e), tok)

    def parse_forest(self) -> DiskForest:
        self.expect("forest")
        open_tok = self.expect("{")
        root_tok = self.expect_kind("name")
        parent: dict[str, str | None] = {root_tok.text: None}

        def parse_children(of: str):
            while not self.at("]"):
                child = self.expect_kind("name")
                if child.text in parent:
                    self.fail(f"duplicate disk {child.text!r}", child)
                parent[child.text] = of
                if self.eat("["):
                    parse_children(child.text)
                    self.expect("]")

        if self.eat("["):
            parse_children(root_tok.text)
            self.expect("]")
        marked: dict[int, tuple[str, ...]] = {}
        while self.at("marked"):
            self.next()
            color = self.parse_int()
            self.expect("=")
            self.expect("(")
            names = self.parse_names(")")
            for n in names:
                if n not in parent:
                    self.fail(f"marked disk {n!r} is not a declared disk", open_tok)
            marked[color] = tuple(names)
        self.expect("}")
        try:
            return DiskForest(root_tok.text, parent, marked)
        except ValueError as e:
            self.fail(str(e), open_tok)

    def parse_muffler(self, forest: DiskForest) -> Muffler:
        self.expect("muffler")
        open_tok = self.expect("{")
        self.expect("color")
        self.expect("=")
        color = self.parse_int()
        self.expect(";")
        self.expect("time")
        self.expect("=")
        time = self.parse_interval()
        self.expect(";")
        self.expect("outer")
        self.expect("=")
        outer = self.expect_kind("name").text
        self.expect(";")
        self.expect("holes")
        self.expect("=")
        self.expect("(")
        holes = self.parse_names(")")
        self.eat(";")
        self.expect("}")
        try:
            return Muffler(color, time, outer, tuple(holes))
        except ValueError as e:
            self.fail(str(e), open_tok)

    def parse_diagram(self) -> InfectionDiagram:
        self.expect("diagram")
        open_tok = self.expect("{")
        self.expect("sig")
        self.expect("=")
        self.expect("(")
        colors: list[int] = []
        if not self.at(";"):
            colors.append(self.parse_int())
            while self.eat(","):
                colors.append(self.parse_int())
        self.expect(";")
        output_color = self.parse_int()
        self.expect(")")
        self.expect(";")
        tok = self.peek()
        forest = self.parse_expr() if tok.text == "forest" else self.lookup(self.next().text, tok)
        if not isinstance(forest, DiskForest):
            self.fail("a forest is required after sig", tok)
        mufflers: list[Muffler] = []
        order: Permutation | None = None
        while self.eat(";"):
            if self.at("muffler"):
                mufflers.append(self.parse_muffler(forest))
            elif self.at("order"):
                self.next()
                self.expect("=")
                otok = self.peek()
                order = self.parse_expr()
                if not isinstance(order, Permutation):
                    self.fail("order must be a permutation", otok)
            elif self.at("}"):
                break
            else:
                self.fail(f"expected muffler, order, or '}}', found {self.peek().text!r}")
        self.expect("}")
        if order is None:
            order = identity(len(mufflers))
        try:
            return canonicalize(
                InfectionDiagram(tuple(colors), output_color, forest, tuple(mufflers), order)
            )
        except ValueError as e:
            self.fail(str(e), open_tok)

    def need_alphabet(self, tok: Token) -> GeneratorAlphabet:
        if self.current_alphabet is None:
            self.fail("no alphabet declared before this link word", tok)
        return self.current_alphabet

    def parse_link1(self) -> LinkWord:
        tok = self.expect("link1")
        self.expect("{")
        knots: list[str] = []
        if self.at("knots"):
            self.next()
            self.expect("=")
            self.expect("[")
            knots = self.parse_names("]")
            self.eat(";")
        self.expect("}")
        try:
            return LinkWord(self.need_alphabet(tok), 1, knots=tuple(knots))
        except ValueError as e:
            self.fail(str(e), tok)

    def parse_letter(self) -> tuple[str, str]:
        kind_tok = self.expect_kind("name")
        if kind_tok.text not in CENTRAL_KINDS:
            self.fail(f"central letters are {', '.join(CENTRAL_KINDS)}", kind_tok)
        self.expect("(")
        knot = self.expect_kind("name").text
        self.expect(")")
        return (kind_tok.text, knot)

    def parse_link2(self) -> LinkWord:
        tok = self.expect("link2")
        self.expect("{")
        twist = 0
        central: list[tuple[str, str]] = []
        body: list[str] = []
        while not self.at("}"):
            key = self.expect_kind("name").text
            self.expect("=")
            if key == "twist":
                twist = self.parse_int()
            elif key == "central":
                self.expect("[")
                if not self.at("]"):
                    central.append(self.parse_letter())
                    while self.eat(","):
                        central.append(self.parse_letter())
                self.expect("]")
            elif key == "body":
                self.expect("[")
                body = self.parse_names("]")
            else:
                self.fail(f"unknown link2 field {key!r}")
            self.eat(";")
        self.expect("}")
        try:
            return LinkWord(
                self.need_alphabet(tok), 2, twist=twist,
                central=tuple(central), body=tuple(body),
            )
        except ValueError as e:
            self.fail(str(e), tok)

    # statements

    def parse_alphabet(self) -> AlphabetStmt:
        tok = self.expect("alphabet")
        name = self.expect_kind("name").text
        self.expect("{")
        knots: list[str] = []
        noncentral: list[tuple[str, int]] = []
        while not self.at("}"):
            kw = self.expect_kind("name")
            if kw.text == "knot":
                knots.append(self.expect_kind("name").text)
            elif kw.text == "noncentral":
                letter = self.expect_kind("name").text
                lk = 0
                if self.at("lk"):
                    self.next()
                    self.expect("=")
                    lk = self.parse_int()
                noncentral.append((letter, lk))
            else:
                self.fail("alphabet entries are 'knot NAME' or 'noncentral NAME [lk=INT]'", kw)
            self.eat(";")
        self.expect("}")
        try:
            alph = GeneratorAlphabet(tuple(knots), tuple(noncentral))
        except ValueError as e:
            self.fail(str(e), tok)
        return AlphabetStmt(name, alph, tok.line)

    def parse_statement(self):
        t = self.peek()
        if t.text == "let":
            self.next()
            name_tok = self.expect_kind("name")
            self.expect("=")
            kind = self.peek().text
            value = self.parse_expr()
            self.env[name_tok.text] = value
            self.statements.append(LetStmt(name_tok.text, kind, value, t.line))
            return
        if t.text == "alphabet":
            stmt = self.parse_alphabet()
            self.env[stmt.name] = stmt.value
            self.current_alphabet = stmt.value
            self.statements.append(stmt)
            return
        if t.text in ("check", "render", "normalize", "decompose", "compose", "act", "fuzz"):
            self.parse_command(t.text)
            return
        self.fail(f"expected a statement, found {t.text!r}")

    def parse_command(self, verb: str):
        tok = self.next()
        args: dict = {}
        if verb in ("check", "render"):
            name_tok = self.expect_kind("name")
            self.lookup(name_tok.text, name_tok)
            args["target"] = name_tok.text
        elif verb in ("normalize", "decompose"):
            name_tok = self.expect_kind("name")
            self.lookup(name_tok.text, name_tok)
            self.expect("->")
            args["target"] = name_tok.text
            args["result"] = self.expect_kind("name").text
        elif verb in ("compose", "act"):
            name_tok = self.expect_kind("name")
            self.lookup(name_tok.text, name_tok)
            self.expect("(")
            names = self.parse_names(")")
            for n in names:
                self.lookup(n, name_tok)
            self.expect("->")
            args["target"] = name_tok.text
            args["args"] = names
            args["result"] = self.expect_kind("name").text
        elif verb == "fuzz":
            while self.peek().kind == "name" and self.tokens[self.pos + 1].text == "=":
                key = self.next().text
                self.expect("=")
                if key == "laws":
                    laws = [self.expect_kind("name").text]
                    while self.eat(","):
                        laws.append(self.expect_kind("name").text)
                    args[key] = laws
                else:
                    args[key] = self.parse_int()
        stmt = CommandStmt(verb, args, tok.line)
        self._run_binding(stmt, tok)
        self.statements.append(stmt)

    def _run_binding(self, stmt: CommandStmt, tok: Token):
        """Binding commands run at load time so later statements can use them."""
        from . import action as action_mod
        from . import diagrams as diagrams_mod

        verb, args = stmt.verb, stmt.args
        if verb == "compose":
            outer = self.env[args["target"]]
            inners = [self.env[n] for n in args["args"]]
            try:
                if isinstance(outer, InfectionDiagram):
                    value = diagrams_mod.compose(outer, inners)
                elif isinstance(outer, CubesElement):
                    from .cubes import cubes_compose

                    value = cubes_compose(outer, inners)
                elif isinstance(outer, OverlapElement):
                    from .overlap import compose_overlap

                    value = compose_overlap(outer, inners)
                else:
                    self.fail("compose applies to diagrams, cubes, or overlaps", tok)
            except (ValueError, AssertionError) as e:
                self.fail(str(e), tok)
            self.env[args["result"]] = value
        elif verb == "act":
            d = self.env[args["target"]]
            links = [self.env[n] for n in args["args"]]
            if not isinstance(d, InfectionDiagram):
                self.fail("act applies to a diagram", tok)
            try:
                self.env[args["result"]] = action_mod.act(
                    d, links, self.current_alphabet
                )
            except ValueError as e:
                self.fail(str(e), tok)
        elif verb == "normalize":
            value = self.env[args["target"]]
            if isinstance(value, InfectionDiagram):
                value = canonicalize(value)
            elif isinstance(value, OverlapElement):
                value = canon_overlap(value)
            self.env[args["result"]] = value
        elif verb == "decompose":
            w = self.env[args["target"]]
            if not isinstance(w, LinkWord):
                self.fail("decompose applies to a 2-string word", tok)
            try:
                diagram, factors = action_mod.decompose_S2(w)
            except ValueError as e:
                self.fail(str(e), tok)
            self.env[args["result"]] = diagram
            self.env[args["result"] + "_factors"] = factors


def parse(text: str) -> tuple[Script, dict[str, object]]:
    """Parse and evaluate a script; returns the statements and the environment."""
    p = Parser(text)
    while p.peek().kind != "end":
        p.parse_statement()
    return Script(p.statements, text), p.env


# -- printing ---------------------------------------------------------------


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_interval(t: AffineMap1) -> str:
    return f"({fmt_rational(t.start)},{fmt_rational(t.end)})"


def print_perm(p: Permutation) -> str:
    return "perm[" + ",".join(map(str, p.images)) + "]"


def print_cube(c: LittleCube) -> str:
    return "cube[" + ",".join(fmt_interval(a) for a in c.axes) + "]"


def print_cubes(e: CubesElement) -> str:
    items = ", ".join(print_cube(c) for c in e.cubes)
    return f"cubes{{ dim={e.dim}; items=[{items}] }}"


def print_overlap(e: OverlapElement) -> str:
    e = canon_overlap(e)
    ivs = ", ".join(fmt_interval(t) for t in e.intervals)
    return f"overlap{{ intervals=[{ivs}]; order={print_perm(e.order)} }}"


def print_forest(f: DiskForest) -> str:
    def walk(node: str) -> str:
        kids = sorted(f.children(node))
        if not kids:
            return node
        return node + "[ " + " ".join(walk(k) for k in kids) + " ]"

    parts = [walk(f.root)]
    for color in sorted(f.marked):
        names = ",".join(f.marked[color])
        parts.append(f"marked{color}=({names})")
    return "forest{ " + " ".join(parts) + " }"


def print_muffler(m: Muffler) -> str:
    holes = ",".join(m.holes)
    return (
        f"muffler{{ color={m.color}; time={fmt_interval(m.time)}; "
        f"outer={m.outer}; holes=({holes}) }}"
    )


def print_diagram(d: InfectionDiagram) -> str:
    d = canonicalize(d)
    sig = ",".join(map(str, d.colors)) + ";" + str(d.output_color)
    parts = [f"sig=({sig})", print_forest(d.forest)]
    parts.extend(print_muffler(m) for m in d.mufflers)
    parts.append(f"order={print_perm(d.order)}")
    return "diagram{ " + "; ".join(parts) + " }"


def print_link(w: LinkWord) -> str:
    if w.color == 1:
        inner = ", ".join(w.knots)
        return f"link1{{ knots=[{inner}] }}"
    fields = []
    if w.twist:
        fields.append(f"twist={w.twist}")
    if w.central:
        fields.append("central=[" + ", ".join(letter_str(l) for l in w.central) + "]")
    fields.append("body=[" + ", ".join(w.body) + "]")
    return "link2{ " + "; ".join(fields) + " }"


def print_alphabet(name: str, alph: GeneratorAlphabet) -> str:
    lines = [f"alphabet {name} {{"]
    for k in alph.knots:
        lines.append(f"  knot {k}")
    for n, lk in alph.noncentral:
        lines.append(f"  noncentral {n} lk={lk}" if lk else f"  noncentral {n}")
    lines.append("}")
    return "\n".join(lines)


def print_value(v) -> str:
    printers: list[tuple[type, Callable]] = [
        (Permutation, print_perm),
        (LittleCube, print_cube),
        (CubesElement, print_cubes),
        (OverlapElement, print_overlap),
        (DiskForest, print_forest),
        (InfectionDiagram, print_diagram),
        (LinkWord, print_link),
    ]
    for t, fn in printers:
        if isinstance(v, t):
            return fn(v)
    raise ValueError(f"no printer for {type(v).__name__}")


def print_script(script: Script) -> str:
    lines: list[str] = []
    for stmt in script.statements:
        if isinstance(stmt, AlphabetStmt):
            lines.append(print_alphabet(stmt.name, stmt.value))
        elif isinstance(stmt, LetStmt):
            lines.append(f"let {stmt.name} = {print_value(stmt.value)}")
        elif isinstance(stmt, CommandStmt):
            lines.append(print_command(stmt))
    return "\n".join(lines) + "\n"


def print_command(stmt: CommandStmt) -> str:
    v, a = stmt.verb, stmt.args
    if v in ("check", "render"):
        return f"{v} {a['target']}"
    if v in ("normalize", "decompose"):
        return f"{v} {a['target']} -> {a['result']}"
    if v in ("compose", "act"):
        return f"{v} {a['target']} ({', '.join(a['args'])}) -> {a['result']}"
    if v == "fuzz":
        parts = []
        for k, val in a.items():
            parts.append(f"{k}={','.join(val) if isinstance(val, list) else val}")
        return ("fuzz " + " ".join(parts)).strip()
    raise ValueError(f"unknown command {v}")


def check_report(env: dict[str, object]) -> list[str]:
    """Constraint violations over every checkable object in the environment."""
    problems: list[str] = []
    for name in sorted(env):
        v = env[name]
        if isinstance(v, InfectionDiagram):
            bad = check_constraint(v)
            if bad is not None:
                problems.append(
                    f"{name}: continuity constraint fails for ordered pair {bad}"
                )
        elif isinstance(v, CubesElement):
            from .cubes import validate as validate_cubes

            report = validate_cubes(v)
            if report is not None:
                problems.append(f"{name}: {report}")
        elif isinstance(v, DiskForest):
            from .diskforest import validate as validate_forest

            report = validate_forest(v)
            if report is not None:
                problems.append(f"{name}: {report}")
    return problems
