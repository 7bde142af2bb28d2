"""Formula language shared by all three geometric semantics.

Concrete syntax (whitespace-insensitive):

    true  false        constants
    p, mud_a, x2       atoms: lowercase identifier [a-z][a-zA-Z0-9_]*
    ~f                 negation
    f & g,  f | g      conjunction / disjunction
    f -> g             implication, right-associative
    I f,  C f          interior and closure
    K f,  L f          knowledge and its dual
    E f,  D f          effort (neighbourhood refinement) and its dual
    K1 f .. K9 f       indexed knowledge, for product models
    [!f] g             public announcement of f, then g
    <!f> g             announcement dual, parsed as ~[!f]~g

Prefixes (~ and the modal letters) bind tightest, then "&", then "|",
then "->".  `render` emits minimal parentheses and round-trips through
`parse`.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random


class FormulaError(Exception):
    """Base class for errors raised by the formula layer."""


class ParseError(FormulaError):
    """Syntax error, annotated with the offset into the source text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnsupportedOperator(FormulaError):
    """An operator was used under a semantics that does not interpret it."""


@dataclass(frozen=True)
class Formula:
    """Base class for formula nodes; instances are immutable values."""

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Interior(Formula):
    body: Formula


@dataclass(frozen=True)
class Closure(Formula):
    body: Formula


@dataclass(frozen=True)
class Know(Formula):
    body: Formula


@dataclass(frozen=True)
class Possible(Formula):
    body: Formula


@dataclass(frozen=True)
class Effort(Formula):
    body: Formula


@dataclass(frozen=True)
class EffortDual(Formula):
    body: Formula


@dataclass(frozen=True)
class KnowI(Formula):
    agent: int
    body: Formula

    def __post_init__(self):
        if self.agent < 1:
            raise ValueError("agent index must be at least 1")


@dataclass(frozen=True)
class Announce(Formula):
    announced: Formula
    body: Formula


TOP = Top()
BOT = Bot()

_PREFIX_NODES = {
    "I": Interior,
    "C": Closure,
    "K": Know,
    "L": Possible,
    "E": Effort,
    "D": EffortDual,
}
_PREFIX_LETTERS = {type_: letter for letter, type_ in _PREFIX_NODES.items()}


def children(f: Formula) -> tuple[Formula, ...]:
    """Immediate subformulas of a node."""
    match f:
        case Atom() | Top() | Bot():
            return ()
        case Not(b) | Interior(b) | Closure(b) | Know(b) | Possible(b) | Effort(b) | EffortDual(b):
            return (b,)
        case KnowI(_, b):
            return (b,)
        case And(a, b) | Or(a, b) | Implies(a, b) | Announce(a, b):
            return (a, b)
    raise TypeError(f"not a formula node: {f!r}")


def walk(f: Formula):
    """Yield every node of the formula, root first."""
    yield f
    for child in children(f):
        yield from walk(child)


def atoms_of(f: Formula) -> frozenset[str]:
    return frozenset(node.name for node in walk(f) if isinstance(node, Atom))


# ---------------------------------------------------------------------------
# Parsing

_IDENT_FOLLOW = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_"


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        two = text[i : i + 2]
        if two in ("[!", "<!", "->"):
            tokens.append((two, None, i))
            i += 2
        elif ch in "()&|]>~":
            tokens.append((ch, None, i))
            i += 1
        elif ch == "K" and i + 1 < n and text[i + 1].isdigit():
            digit = text[i + 1]
            if digit == "0":
                raise ParseError("agent index must be at least 1", i + 1)
            tokens.append(("KI", int(digit), i))
            i += 2
        elif ch in _PREFIX_NODES:
            tokens.append(("PREFIX", ch, i))
            i += 1
        elif ch.islower():
            j = i + 1
            while j < n and text[j] in _IDENT_FOLLOW:
                j += 1
            word = text[i:j]
            if word == "true":
                tokens.append(("TRUE", None, i))
            elif word == "false":
                tokens.append(("FALSE", None, i))
            else:
                tokens.append(("IDENT", word, i))
            i = j
        elif ch == "[" or ch == "<":
            raise ParseError(f"announcements are written '[!f] g' or '<!f> g', found {ch!r}", i)
        elif ch.isupper():
            raise ParseError(f"unknown operator {ch!r}", i)
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("EOF", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, kind: str, context: str):
        token = self.advance()
        if token[0] != kind:
            raise ParseError(f"expected {kind!r} {context}", token[2])
        return token

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "->":
            self.advance()
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek()[0] == "|":
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek()[0] == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, value, pos = self.advance()
        if kind == "~":
            return Not(self.unary())
        if kind == "PREFIX":
            return _PREFIX_NODES[value](self.unary())
        if kind == "KI":
            return KnowI(value, self.unary())
        if kind == "[!":
            announced = self.formula()
            self.expect("]", "to close the announcement '[!'")
            return Announce(announced, self.unary())
        if kind == "<!":
            announced = self.formula()
            self.expect(">", "to close the announcement '<!'")
            return Not(Announce(announced, Not(self.unary())))
        if kind == "(":
            inner = self.formula()
            self.expect(")", "to close '('")
            return inner
        if kind == "TRUE":
            return TOP
        if kind == "FALSE":
            return BOT
        if kind == "IDENT":
            return Atom(value)
        raise ParseError(f"expected a formula, found {kind!r}", pos)


def parse(text: str) -> Formula:
    """Parse concrete syntax into a formula; raises ParseError with a position."""
    parser = _Parser(text)
    result = parser.formula()
    kind, _, pos = parser.peek()
    if kind != "EOF":
        raise ParseError(f"unexpected trailing {kind!r}", pos)
    return result


# ---------------------------------------------------------------------------
# Rendering

# Binding levels: implication 0, disjunction 1, conjunction 2, prefixes 3,
# leaves 4.  An operand is parenthesized when its own level is below the
# level its context requires.


def render(f: Formula) -> str:
    """Concrete syntax with minimal parentheses; parse(render(f)) == f."""
    return _render(f, 0)


def _render(f: Formula, required: int) -> str:
    match f:
        case Atom(name):
            return name
        case Top():
            return "true"
        case Bot():
            return "false"
        case Not(b):
            text, level = "~" + _render(b, 3), 3
        case KnowI(agent, b):
            text, level = f"K{agent} " + _render(b, 3), 3
        case Announce(a, b):
            text, level = "[!" + _render(a, 0) + "] " + _render(b, 3), 3
        case Interior(b) | Closure(b) | Know(b) | Possible(b) | Effort(b) | EffortDual(b):
            text, level = _PREFIX_LETTERS[type(f)] + " " + _render(b, 3), 3
        case And(a, b):
            text, level = _render(a, 2) + " & " + _render(b, 3), 2
        case Or(a, b):
            text, level = _render(a, 1) + " | " + _render(b, 2), 1
        case Implies(a, b):
            text, level = _render(a, 1) + " -> " + _render(b, 0), 0
        case _:
            raise TypeError(f"not a formula node: {f!r}")
    return "(" + text + ")" if level < required else text


# ---------------------------------------------------------------------------
# Complexity

# Termination measure for the announcement-elimination rewriter: every
# schema instance strictly shrinks it, and it is strictly monotone in each
# subterm, so single steps applied anywhere in a formula shrink the whole.


def complexity(f: Formula) -> int:
    match f:
        case Atom() | Top() | Bot():
            return 1
        case Not(b) | Interior(b) | Closure(b) | Know(b) | Possible(b) | Effort(b) | EffortDual(b):
            return 1 + complexity(b)
        case KnowI(_, b):
            return 1 + complexity(b)
        case And(a, b) | Or(a, b) | Implies(a, b):
            return 1 + complexity(a) + complexity(b)
        case Announce(a, b):
            return (4 + complexity(a)) * complexity(b)
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Fuzzing support for the test suites


def random_formula(
    rng: Random,
    max_depth: int,
    atoms: tuple[str, ...] = ("p", "q"),
    modal: str = "",
    agents: int = 0,
    announce_depth: int = 0,
) -> Formula:
    """Random formula over the given operator repertoire.

    `modal` is a string of prefix letters from "ICKLED"; `agents` > 0 adds
    K1..Kn; `announce_depth` bounds announcement nesting inside announced
    formulas.
    """
    choices = ["leaf", "leaf", "not", "and", "or", "implies"]
    choices += [f"prefix:{letter}" for letter in modal]
    if agents > 0:
        choices.append("knowi")
    if announce_depth > 0:
        choices += ["announce", "announce_dual"]
    if max_depth <= 0:
        choices = ["leaf"]
    pick = rng.choice(choices)
    sub = lambda: random_formula(rng, max_depth - 1, atoms, modal, agents, announce_depth)
    if pick == "leaf":
        return rng.choice([Atom(rng.choice(atoms)), Atom(rng.choice(atoms)), TOP, BOT])
    if pick == "not":
        return Not(sub())
    if pick == "and":
        return And(sub(), sub())
    if pick == "or":
        return Or(sub(), sub())
    if pick == "implies":
        return Implies(sub(), sub())
    if pick.startswith("prefix:"):
        return _PREFIX_NODES[pick.split(":")[1]](sub())
    if pick == "knowi":
        return KnowI(rng.randint(1, agents), sub())
    announced = random_formula(rng, max_depth - 1, atoms, modal, agents, announce_depth - 1)
    if pick == "announce":
        return Announce(announced, sub())
    return Not(Announce(announced, Not(sub())))
