"""Frontend for the assignment DSL: lexer, recursive-descent parser, and
pretty-printer back to source.

Grammar sketch (full EBNF in docs/grammar.md):

    script  := stmt*
    stmt    := IDENT "=" expr ";"
             | "if" "(" expr ")" block ("else" "if" "(" expr ")" block)*
               ("else" block)?
             | "return" expr? ";"
    block   := "{" stmt* "}"
    expr    := precedence-climbing over || && ! cmp + - * / % unary- postfix

Random operators take keyword arguments only; builtin functions such as
min() and length() take positional arguments.  "#" starts a line comment.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import registry
from .errors import ParseError
from .ir import BINARY_OPS, Diagnostic, ScriptIR

KEYWORDS = {"if", "else", "true", "false", "null", "and", "or", "not",
            "return"}

_PUNCT2 = {"==", "!=", "<=", ">=", "&&", "||"}
_PUNCT1 = set("=;{}()[],+-*/%<>!:")


@dataclass(frozen=True)
class Token:
    kind: str  # identifier | number | string | punctuation | keyword | eof
    lexeme: str
    offset: int
    value: object = None  # parsed payload for numbers/strings


class _SyntaxError(Exception):
    def __init__(self, message, offset):
        super().__init__(message)
        self.message = message
        self.offset = offset


def tokenize(source: str) -> list[Token]:
    tokens = []
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start = i
        if c.isalpha() or c == "_":
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            word = source[start:i]
            kind = "keyword" if word in KEYWORDS else "identifier"
            tokens.append(Token(kind, word, start))
            continue
        if c.isdigit():
            while i < n and source[i].isdigit():
                i += 1
            is_float = False
            if i < n and source[i] == "." and i + 1 < n and source[i + 1].isdigit():
                is_float = True
                i += 1
                while i < n and source[i].isdigit():
                    i += 1
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    is_float = True
                    i = j
                    while i < n and source[i].isdigit():
                        i += 1
            text = source[start:i]
            value = float(text) if is_float else int(text)
            tokens.append(Token("number", text, start, value))
            continue
        if c in "'\"":
            quote = c
            i += 1
            chars = []
            while True:
                if i >= n:
                    raise _SyntaxError("unterminated string literal", start)
                ch = source[i]
                if ch == "\\" and i + 1 < n:
                    esc = source[i + 1]
                    chars.append({"n": "\n", "t": "\t"}.get(esc, esc))
                    i += 2
                    continue
                if ch == quote:
                    i += 1
                    break
                chars.append(ch)
                i += 1
            tokens.append(Token("string", source[start:i], start,
                                "".join(chars)))
            continue
        if source[start:start + 2] in _PUNCT2:
            tokens.append(Token("punctuation", source[start:start + 2], start))
            i += 2
            continue
        if c in _PUNCT1:
            tokens.append(Token("punctuation", c, start))
            i += 1
            continue
        raise _SyntaxError(f"unexpected character {c!r}", start)
    tokens.append(Token("eof", "", n))
    return tokens


@dataclass
class ParseResult:
    ir: ScriptIR | None
    diagnostics: list[Diagnostic]

    @property
    def ok(self):
        return self.ir is not None


def parse(source: str) -> ParseResult:
    """Parses DSL source; on syntax error the IR is None and diagnostics
    carry the offset of the first failing token."""
    try:
        tokens = tokenize(source)
        ir = _Parser(tokens).script()
        return ParseResult(ir, [])
    except _SyntaxError as exc:
        return ParseResult(None, [Diagnostic("error", exc.message,
                                             exc.offset)])


def parse_or_raise(source: str) -> ScriptIR:
    result = parse(source)
    if not result.ok:
        d = result.diagnostics[0]
        raise ParseError(d.message, offset=d.offset)
    return result.ir


_BINOP_TOKENS = {
    "||": "or", "or": "or",
    "&&": "and", "and": "and",
    "==": "eq", "!=": "ne", "<": "lt", "<=": "le", ">": "gt", ">=": "ge",
    "+": "add", "-": "sub",
    "*": "mul", "/": "div", "%": "mod",
}

# precedence level -> (op names, left-associative)
_LEVELS = [
    ({"or"}, True),
    ({"and"}, True),
    ({"eq", "ne", "lt", "le", "gt", "ge"}, False),
    ({"add", "sub"}, True),
    ({"mul", "div", "mod"}, True),
]


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def match(self, lexeme) -> bool:
        tok = self.peek()
        if tok.kind in ("punctuation", "keyword") and tok.lexeme == lexeme:
            self.advance()
            return True
        return False

    def expect(self, lexeme) -> Token:
        tok = self.peek()
        if tok.kind in ("punctuation", "keyword") and tok.lexeme == lexeme:
            return self.advance()
        raise _SyntaxError(
            f"expected {lexeme!r}, found {tok.lexeme or 'end of input'!r}",
            tok.offset)

    def script(self) -> ScriptIR:
        stmts = []
        while self.peek().kind != "eof":
            stmts.append(self.statement())
        return ScriptIR(root=stmts)

    def statement(self):
        tok = self.peek()
        if tok.kind == "keyword" and tok.lexeme == "if":
            return self.if_statement()
        if tok.kind == "keyword" and tok.lexeme == "return":
            self.advance()
            if self.match(";"):
                return {"op": "return"}
            value = self.expression()
            self.expect(";")
            return {"op": "return", "value": value}
        if tok.kind == "identifier":
            name = self.advance().lexeme
            self.expect("=")
            value = self.expression()
            self.expect(";")
            return {"op": "set", "var": name, "value": value}
        raise _SyntaxError(
            f"expected a statement, found {tok.lexeme or 'end of input'!r}",
            tok.offset)

    def if_statement(self):
        self.expect("if")
        branches = []
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        branches.append({"cond": cond, "body": self.block()})
        node = {"op": "if", "branches": branches}
        while self.match("else"):
            if self.match("if"):
                self.expect("(")
                cond = self.expression()
                self.expect(")")
                branches.append({"cond": cond, "body": self.block()})
            else:
                node["else"] = self.block()
                break
        return node

    def block(self):
        self.expect("{")
        stmts = []
        while not self.match("}"):
            if self.peek().kind == "eof":
                raise _SyntaxError("unterminated block", self.peek().offset)
            stmts.append(self.statement())
        return stmts

    def expression(self, level=0):
        if level >= len(_LEVELS):
            return self.unary()
        ops, left_assoc = _LEVELS[level]
        left = self.expression(level + 1)
        while True:
            tok = self.peek()
            name = _BINOP_TOKENS.get(tok.lexeme) \
                if tok.kind in ("punctuation", "keyword") else None
            if name not in ops:
                return left
            self.advance()
            right = self.expression(level + 1)
            left = {"op": name, "lhs": left, "rhs": right}
            if not left_assoc:
                return left

    def unary(self):
        tok = self.peek()
        if tok.kind in ("punctuation", "keyword") and tok.lexeme in ("!", "not"):
            self.advance()
            return {"op": "not", "value": self.unary()}
        if tok.kind == "punctuation" and tok.lexeme == "-":
            self.advance()
            value = self.unary()
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                return -value  # fold into a negative literal
            return {"op": "neg", "value": value}
        return self.postfix()

    def postfix(self):
        node = self.primary()
        while self.match("["):
            index = self.expression()
            self.expect("]")
            node = {"op": "index", "base": node, "index": index}
        return node

    def primary(self):
        tok = self.peek()
        if tok.kind == "number" or tok.kind == "string":
            self.advance()
            return tok.value
        if tok.kind == "keyword":
            if tok.lexeme == "true":
                self.advance()
                return True
            if tok.lexeme == "false":
                self.advance()
                return False
            if tok.lexeme == "null":
                self.advance()
                return None
            raise _SyntaxError(f"unexpected keyword {tok.lexeme!r}",
                               tok.offset)
        if tok.kind == "punctuation" and tok.lexeme == "[":
            self.advance()
            values = []
            if not self.match("]"):
                values.append(self.expression())
                while self.match(","):
                    values.append(self.expression())
                self.expect("]")
            return {"op": "array", "values": values}
        if tok.kind == "punctuation" and tok.lexeme == "(":
            self.advance()
            node = self.expression()
            self.expect(")")
            return node
        if tok.kind == "identifier":
            name = self.advance().lexeme
            if self.peek().lexeme == "(" and self.peek().kind == "punctuation":
                return self.call(name)
            return {"op": "get", "var": name}
        raise _SyntaxError(
            f"expected an expression, found {tok.lexeme or 'end of input'!r}",
            tok.offset)

    def call(self, name):
        self.expect("(")
        keyword_style = self._looks_like_kwargs(name)
        if keyword_style:
            args = {}
            if not self.match(")"):
                while True:
                    key_tok = self.peek()
                    if key_tok.kind != "identifier":
                        raise _SyntaxError(
                            f"{name} takes keyword arguments", key_tok.offset)
                    key = self.advance().lexeme
                    self.expect("=")
                    args[key] = self.expression()
                    if self.match(")"):
                        break
                    self.expect(",")
            return {"op": name, "args": args}
        values = []
        if not self.match(")"):
            values.append(self.expression())
            while self.match(","):
                values.append(self.expression())
            self.expect(")")
        return {"op": name, "values": values}

    def _looks_like_kwargs(self, name) -> bool:
        if registry.random_op(name) is not None:
            return True
        if registry.builtin(name) is not None:
            return False
        # Unregistered operator: sniff "IDENT =" after the open paren.
        tok = self.tokens[self.pos]
        nxt = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) \
            else tok
        return (tok.kind == "identifier" and nxt.kind == "punctuation"
                and nxt.lexeme == "=")


# --- decompiler -------------------------------------------------------------

_OP_SYMBOL = {
    "or": "||", "and": "&&",
    "eq": "==", "ne": "!=", "lt": "<", "le": "<=", "gt": ">", "ge": ">=",
    "add": "+", "sub": "-",
    "mul": "*", "div": "/", "mod": "%",
}

_OP_LEVEL = {}
for _i, (_ops, _) in enumerate(_LEVELS):
    for _op in _ops:
        _OP_LEVEL[_op] = _i
_UNARY_LEVEL = len(_LEVELS)
_POSTFIX_LEVEL = _UNARY_LEVEL + 1
_PRIMARY_LEVEL = _POSTFIX_LEVEL + 1


def decompile(ir: ScriptIR) -> str:
    """Source text that reparses to a structurally equal IR."""
    lines = []
    for stmt in ir.root:
        _print_stmt(stmt, 0, lines)
    return "\n".join(lines) + ("\n" if lines else "")


def _print_stmt(stmt, indent, lines):
    pad = "  " * indent
    op = stmt["op"]
    if op == "set":
        lines.append(f"{pad}{stmt['var']} = {_expr(stmt['value'])};")
    elif op == "return":
        if "value" in stmt:
            lines.append(f"{pad}return {_expr(stmt['value'])};")
        else:
            lines.append(f"{pad}return;")
    elif op == "if":
        for i, branch in enumerate(stmt["branches"]):
            head = "if" if i == 0 else "} else if"
            lines.append(f"{pad}{head} ({_expr(branch['cond'])}) {{")
            for inner in branch["body"]:
                _print_stmt(inner, indent + 1, lines)
        if "else" in stmt:
            lines.append(f"{pad}}} else {{")
            for inner in stmt["else"]:
                _print_stmt(inner, indent + 1, lines)
        lines.append(f"{pad}}}")


def _literal(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    escaped = value.replace("\\", "\\\\").replace("'", "\\'") \
        .replace("\n", "\\n").replace("\t", "\\t")
    return f"'{escaped}'"


def _expr(node, parent_level=0, right_side=False) -> str:
    text, level = _expr_with_level(node)
    if level < parent_level or (level == parent_level and right_side):
        return f"({text})"
    return text


def _expr_with_level(node):
    if not isinstance(node, dict):
        if isinstance(node, (int, float)) and not isinstance(node, bool) \
                and node < 0:
            return _literal(node), _UNARY_LEVEL
        return _literal(node), _PRIMARY_LEVEL
    op = node["op"]
    if op == "array":
        inner = ", ".join(_expr(v) for v in node["values"])
        return f"[{inner}]", _PRIMARY_LEVEL
    if op == "get":
        return node["var"], _PRIMARY_LEVEL
    if op == "index":
        base = _expr(node["base"], _POSTFIX_LEVEL)
        return f"{base}[{_expr(node['index'])}]", _POSTFIX_LEVEL
    if op in BINARY_OPS:
        level = _OP_LEVEL[op]
        non_assoc = op in _LEVELS[2][0]
        lhs = _expr(node["lhs"], level, right_side=non_assoc)
        rhs = _expr(node["rhs"], level, right_side=True)
        return f"{lhs} {_OP_SYMBOL[op]} {rhs}", level
    if op == "not":
        return f"!{_expr(node['value'], _UNARY_LEVEL)}", _UNARY_LEVEL
    if op == "neg":
        return f"-{_expr(node['value'], _UNARY_LEVEL)}", _UNARY_LEVEL
    if "args" in node:
        inner = ", ".join(f"{k}={_expr(v)}"
                          for k, v in node["args"].items())
        return f"{op}({inner})", _PRIMARY_LEVEL
    inner = ", ".join(_expr(v) for v in node.get("values", []))
    return f"{op}({inner})", _PRIMARY_LEVEL
