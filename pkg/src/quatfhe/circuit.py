"""Arithmetic-expression front end.

Grammar (decimal literals, '*' binds tighter than '+', both left-associative):

    expr   := term (('+') term)*
    term   := factor (('*') factor)*
    factor := NUMBER | IDENT | '(' expr ')'

An expression can be evaluated in the clear (`eval_plain`, the oracle) or
compiled into an encrypted program whose leaves are ciphertexts
(`compile_expr`, key holder only) and evaluated without any key
(`eval_encrypted`). Tree walks are iterative: deep chains like
x+x+...+x are legal up to the node cap and must not hit the recursion limit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Union

from .errors import ExpressionTooLarge, ParseError, UnboundVariable
from .numtheory import RandomSource
from .scheme import Ciphertext, SecretKey, encrypt, he_add, he_mul

MAX_NODES = 10_000

_IDENT_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not _IDENT_RE.match(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")


@dataclass(frozen=True)
class Constant:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("constants are non-negative integer literals")


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


Expr = Union[Variable, Constant, Add, Mul]


# Encrypted evaluation plan: the same tree shape with ciphertext leaves.

@dataclass(frozen=True)
class PlanLeaf:
    ciphertext: Ciphertext


@dataclass(frozen=True)
class PlanAdd:
    left: PlanNode
    right: PlanNode


@dataclass(frozen=True)
class PlanMul:
    left: PlanNode
    right: PlanNode


PlanNode = Union[PlanLeaf, PlanAdd, PlanMul]


@dataclass(frozen=True)
class EncryptedProgram:
    """An expression with every leaf replaced by a ciphertext, plus the
    public modulus header shared by all leaves."""

    root: PlanNode
    n: int


def _fold(root, leaf_fn: Callable, add_fn: Callable, mul_fn: Callable,
          add_type: type, mul_type: type):
    """Iterative post-order reduction (expression trees can be deep chains)."""
    values = []
    stack: list[tuple[object, bool]] = [(root, False)]
    while stack:
        node, ready = stack.pop()
        if isinstance(node, (add_type, mul_type)):
            if ready:
                right = values.pop()
                left = values.pop()
                values.append(add_fn(left, right)
                              if isinstance(node, add_type)
                              else mul_fn(left, right))
            else:
                stack.append((node, True))
                stack.append((node.right, False))
                stack.append((node.left, False))
        else:
            values.append(leaf_fn(node))
    return values[0]


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"[0-9]+|[a-zA-Z][a-zA-Z0-9_]*|[+*()]")
_WHITESPACE = " \t\r\n"

_FACTOR_EXPECTED = frozenset({"a number", "an identifier", "'('"})


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    length = len(text)
    while i < length:
        if text[i] in _WHITESPACE:
            i += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(i, _FACTOR_EXPECTED | {"'+'", "'*'", "')'"},
                             repr(text[i]))
        lexeme = m.group()
        if lexeme[0].isdigit():
            kind = "number"
        elif lexeme[0].isalpha():
            kind = "ident"
        else:
            kind = lexeme
        tokens.append((kind, lexeme, i))
        i = m.end()
    tokens.append(("end", "", length))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def describe(self, tok: tuple[str, str, int]) -> str:
        return "end of input" if tok[0] == "end" else f"'{tok[1]}'"

    def factor(self) -> Expr:
        kind, lexeme, offset = self.peek()
        if kind == "number":
            self.advance()
            return Constant(int(lexeme))
        if kind == "ident":
            self.advance()
            return Variable(lexeme)
        if kind == "(":
            self.advance()
            node = self.expr()
            kind2, _, offset2 = self.peek()
            if kind2 != ")":
                raise ParseError(offset2, {"')'", "'+'", "'*'"},
                                 self.describe(self.peek()))
            self.advance()
            return node
        raise ParseError(offset, _FACTOR_EXPECTED, self.describe(self.peek()))

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[0] == "*":
            self.advance()
            node = Mul(node, self.factor())
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "+":
            self.advance()
            node = Add(node, self.term())
        return node


def parse(text: str) -> Expr:
    """Parse expression text; raises ParseError with the offending offset."""
    parser = _Parser(_tokenize(text))
    node = parser.expr()
    kind, _, offset = parser.peek()
    if kind != "end":
        raise ParseError(offset, {"'+'", "'*'", "end of input"},
                         parser.describe(parser.peek()))
    _check_size(node)
    return node


def _check_size(expr: Expr) -> None:
    count = stats(expr)[0]
    if count > MAX_NODES:
        raise ExpressionTooLarge(
            f"expression has {count} nodes; the cap is {MAX_NODES}"
            " (each encrypted leaf costs 64 big residues)")


def stats(expr: Expr) -> tuple[int, int]:
    """(node_count, mul_depth); mul_depth counts Mul nodes on the deepest
    root-to-leaf path."""
    return _fold(
        expr,
        leaf_fn=lambda node: (1, 0),
        add_fn=lambda l, r: (l[0] + r[0] + 1, max(l[1], r[1])),
        mul_fn=lambda l, r: (l[0] + r[0] + 1, max(l[1], r[1]) + 1),
        add_type=Add, mul_type=Mul)


def format_expr(expr: Expr) -> str:
    """Minimal-parenthesis rendering; parse(format_expr(e)) evaluates like e."""
    def leaf(node):
        if isinstance(node, Variable):
            return (node.name, False)
        if isinstance(node, Constant):
            return (str(node.value), False)
        raise TypeError(f"not an expression node: {node!r}")

    def add(l, r):
        return (f"{l[0]} + {r[0]}", True)

    def mul(l, r):
        lt = f"({l[0]})" if l[1] else l[0]
        rt = f"({r[0]})" if r[1] else r[0]
        return (f"{lt} * {rt}", False)

    return _fold(expr, leaf, add, mul, Add, Mul)[0]


def eval_plain(expr: Expr, env: Mapping[str, int], n_squared: int) -> int:
    """Evaluate in the clear with all arithmetic mod N^2 (the oracle side)."""
    def leaf(node):
        if isinstance(node, Constant):
            return node.value % n_squared
        if isinstance(node, Variable):
            if node.name not in env:
                raise UnboundVariable(node.name)
            return env[node.name] % n_squared
        raise TypeError(f"not an expression node: {node!r}")

    return _fold(expr, leaf,
                 lambda l, r: (l + r) % n_squared,
                 lambda l, r: (l * r) % n_squared,
                 Add, Mul)


def compile_expr(expr: Expr, sk: SecretKey, env: Mapping[str, int],
                 rng: RandomSource | None = None) -> EncryptedProgram:
    """Encrypt every leaf (key holder only), preserving the tree structure.

    Constants are reduced mod N^2 here, not at parse time; identical leaves
    get distinct ciphertexts because encryption is probabilistic.
    """
    _check_size(expr)
    if rng is None:
        rng = RandomSource()
    n_squared = sk.params.N_squared.n

    def leaf(node):
        if isinstance(node, Constant):
            return PlanLeaf(encrypt(sk, node.value % n_squared, rng))
        if isinstance(node, Variable):
            if node.name not in env:
                raise UnboundVariable(node.name)
            return PlanLeaf(encrypt(sk, env[node.name], rng))
        raise TypeError(f"not an expression node: {node!r}")

    root = _fold(expr, leaf, PlanAdd, PlanMul, Add, Mul)
    return EncryptedProgram(root=root, n=sk.params.N)


def eval_encrypted(program: EncryptedProgram) -> Ciphertext:
    """Evaluate a compiled program bottom-up; needs no secret key."""
    return _fold(program.root,
                 lambda node: node.ciphertext,
                 he_add, he_mul,
                 PlanAdd, PlanMul)
