"""The builtin string types: structures, grammars and canonical forms.

Every type here follows the same recipe. A grammar built from the
combinator kernel parses the whole raw string into a small frozen
dataclass, recording the span each named field consumed, and a cast
function renders the canonical surface form of that structure. Subtypes
re-use their parent's grammar with one or more field parsers swapped out
and register exactly those fields as overridden.
"""

from __future__ import annotations

from dataclasses import dataclass

from .combinators import (
    Failure,
    Parser,
    Success,
    alt,
    chain_left,
    forward,
    lit,
    many,
    one_of,
    pattern,
    satisfy,
    seq,
    spanned,
    succeed,
    times,
)
from .core import StringType, TypeRegistry, opaque_type

__all__ = [
    "CssColour", "CssUnit", "Email", "FilePath", "USPhone", "EqualAandB",
    "InnerR", "Const", "Add", "Mult", "Expr", "expr_text",
    "register_builtins", "build_registry",
]


# ---------------------------------------------------------------- colours

@dataclass(frozen=True)
class CssColour:
    red: int
    green: int
    blue: int


_HEX_DIGIT = satisfy(lambda c: c in "0123456789abcdefABCDEF", "a hex digit")
_HEX_PAIR = seq(_HEX_DIGIT, _HEX_DIGIT).map(lambda t: int(t[0] + t[1], 16))
_HEX_SHORT = _HEX_DIGIT.map(lambda c: int(c + c, 16))


def _build_colour(parts):
    (r, rs, re_), (g, gs, ge), (b, bs, be) = parts
    return (CssColour(r, g, b),
            {"red": (rs, re_), "green": (gs, ge), "blue": (bs, be)})


_COLOUR = seq(
    lit("#"),
    alt(seq(spanned(_HEX_PAIR), spanned(_HEX_PAIR), spanned(_HEX_PAIR)),
        seq(spanned(_HEX_SHORT), spanned(_HEX_SHORT), spanned(_HEX_SHORT))),
).map(lambda t: _build_colour(t[1]))


def cast_colour(c: CssColour) -> str:
    return f"#{c.red:02x}{c.green:02x}{c.blue:02x}"


# ------------------------------------------------------------------ units

@dataclass(frozen=True)
class CssUnit:
    """A CSS length: ``value`` is None exactly when ``unit`` is "auto"."""
    value: float | None
    unit: str


def _format_number(v: float) -> str:
    if v == int(v):
        return str(int(v))
    out = repr(v)
    if "e" in out or "E" in out:
        out = f"{v:.17f}".rstrip("0").rstrip(".")
    return out


_NUMBER = pattern(r"[0-9]+(\.[0-9]+)?").desc("a number").map(float)


def _unit_grammar(suffix: Parser) -> Parser:
    measured = seq(spanned(_NUMBER), spanned(suffix)).map(
        lambda t: (CssUnit(t[0][0], t[1][0]),
                   {"value": (t[0][1], t[0][2]), "unit": (t[1][1], t[1][2])}))
    auto = spanned(lit("auto")).map(
        lambda t: (CssUnit(None, "auto"), {"unit": (t[1], t[2])}))
    return alt(measured, auto)


_UNIT_SUFFIX = alt(lit("px"), lit("pt"), lit("pc"), lit("cm")).desc("a unit")
_UNIT = _unit_grammar(_UNIT_SUFFIX)


def cast_unit(u: CssUnit) -> str:
    if u.unit == "auto":
        return "auto"
    return _format_number(u.value) + u.unit


# ----------------------------------------------------------------- emails

@dataclass(frozen=True)
class Email:
    name: str
    domain_left: str
    domain_right: str


_EMAIL_NAME = pattern("[0-9a-zA-Z]+").desc("an email name")
_DOMAIN = pattern("[0-9a-zA-Z-]+").desc("a domain name")
_TLD = pattern("[0-9a-zA-Z-.]+").desc("a top-level domain")


def _email_grammar(left: Parser) -> Parser:
    return seq(
        spanned(_EMAIL_NAME), lit("@"), spanned(left), lit("."), spanned(_TLD),
    ).map(lambda t: (
        Email(t[0][0], t[2][0], t[4][0]),
        {"name": (t[0][1], t[0][2]),
         "domain_left": (t[2][1], t[2][2]),
         "domain_right": (t[4][1], t[4][2])},
    ))


_EMAIL = _email_grammar(_DOMAIN)
_GMAIL_LEFT = lit("gmail")


def cast_email(e: Email) -> str:
    return f"{e.name}@{e.domain_left}.{e.domain_right}"


# ------------------------------------------------------------- file paths

@dataclass(frozen=True)
class FilePath:
    absolute: bool
    dirs: tuple[str, ...]
    file_name: str
    ext: str | None
    separator: str


_SEGMENT = pattern(r"[^/\\]+").desc("a path segment")


def _split_segment(segment: str) -> tuple[str, str | None]:
    """Split a final path segment into file name and extension.

    The extension is whatever follows the last dot, provided that leaves
    both halves non-empty; a leading dot (".bashrc") therefore stays part
    of the file name.
    """
    i = segment.rfind(".")
    if 0 < i < len(segment) - 1:
        return segment[:i], segment[i + 1:]
    return segment, None


def _assemble_path(absolute: bool, sep_char: str | None, seg_spans, lead_start: int):
    *dir_spans, (file_text, fs, fe) = seg_spans
    file_name, ext = _split_segment(file_text)
    spans: dict[str, tuple[int, int]] = {}
    if absolute:
        spans["separator"] = (lead_start, lead_start + 1)
    elif sep_char is not None:
        first_end = seg_spans[0][2]
        spans["separator"] = (first_end, first_end + 1)
    spans["dirs"] = (dir_spans[0][1], dir_spans[-1][2]) if dir_spans else (fs, fs)
    if ext is not None:
        dot = fs + len(file_name)
        spans["file_name"] = (fs, dot)
        spans["ext"] = (dot + 1, fe)
    else:
        spans["file_name"] = (fs, fe)
    structure = FilePath(
        absolute=absolute,
        dirs=tuple(t for t, _, _ in dir_spans),
        file_name=file_name,
        ext=ext,
        separator=sep_char if sep_char is not None else "/",
    )
    return (structure, spans)


def _path_grammar(seps: str) -> Parser:
    """Paths whose first separator, wherever it appears, fixes the style.

    The style char flows through ``bind`` into the parser for the rest of
    the string, so a path mixing separators fails part-way instead of
    parsing inconsistently. A relative path with a single segment carries
    no separator evidence at all; its structure defaults to "/" and it
    records no separator span.
    """
    segment = spanned(_SEGMENT)
    style = one_of(seps)

    def more(c: str) -> Parser:
        return many(seq(lit(c), segment).map(lambda t: t[1]))

    absolute = spanned(style).bind(
        lambda lead: segment.bind(
            lambda first: more(lead[0]).map(
                lambda rest: _assemble_path(True, lead[0], [first] + rest, lead[1]))))

    def relative_tail(first):
        fixed = spanned(style).bind(
            lambda s: segment.bind(
                lambda second: more(s[0]).map(
                    lambda rest: _assemble_path(False, s[0], [first, second] + rest, 0))))
        return alt(fixed, succeed(_assemble_path(False, None, [first], 0)))

    return alt(absolute, segment.bind(relative_tail))


_PATH = _path_grammar("/\\")
_UNIX_PATH = _path_grammar("/")
_WINDOWS_PATH = _path_grammar("\\")
_HOME_DOT_FILE = _UNIX_PATH.where(
    lambda out: out[0].dirs == ("home",) and out[0].file_name.startswith("."),
    "a dot file under the home directory")


def cast_path(p: FilePath) -> str:
    lead = p.separator if p.absolute else ""
    body = p.separator.join(p.dirs + (p.file_name,))
    tail = f".{p.ext}" if p.ext is not None else ""
    return lead + body + tail


# ---------------------------------------------------------- phone numbers

@dataclass(frozen=True)
class USPhone:
    area: int
    office: int
    uniq: int


_PHONE_SEP = one_of(" ./-").fallback("")
_AREA = pattern("[2-9][0-9]{2}").map(int).desc("a valid area code")
_OFFICE = pattern("[2-9][0-9]{2}").map(int).desc("a valid office code")
_UNIQ = pattern("[0-9]{4}").map(int).desc("a valid identifier")

_PHONE = seq(
    spanned(_AREA), _PHONE_SEP, spanned(_OFFICE), _PHONE_SEP, spanned(_UNIQ),
).map(lambda t: (
    USPhone(t[0][0], t[2][0], t[4][0]),
    {"area": (t[0][1], t[0][2]),
     "office": (t[2][1], t[2][2]),
     "uniq": (t[4][1], t[4][2])},
))


def cast_phone(p: USPhone) -> str:
    return f"{p.area}-{p.office}-{p.uniq:04d}"


# ------------------------------------------------- counted a's and b's

@dataclass(frozen=True)
class EqualAandB:
    count: int


_A = satisfy(lambda c: c == "a", "'a'")
_B = satisfy(lambda c: c == "b", "'b'")

# The b-parser is chosen from the number of a's already consumed, which is
# context a single pattern cannot express.
_EQUAL_AB = many(_A).bind(
    lambda run: times(_B, len(run)).map(
        lambda _: (EqualAandB(len(run)), {})))


def cast_equal_ab(v: EqualAandB) -> str:
    return "a" * v.count + "b" * v.count


# ------------------------------------------------------- inner-r strings

@dataclass(frozen=True)
class InnerR:
    left: str
    right: str


# The first "r" is the pivot: everything before it is r-free, everything
# after it is kept verbatim.
_INNER_R = seq(
    spanned(pattern("[^r]*")), lit("r"), spanned(pattern(".*")),
).map(lambda t: (
    InnerR(t[0][0], t[2][0]),
    {"left": (t[0][1], t[0][2]), "right": (t[2][1], t[2][2])},
))


def cast_inner_r(v: InnerR) -> str:
    return f"{v.left}r{v.right}"


# ------------------------------------------------------------ expressions

@dataclass(frozen=True)
class Const:
    n: int


@dataclass(frozen=True)
class Add:
    l: "Expr"
    r: "Expr"


@dataclass(frozen=True)
class Mult:
    l: "Expr"
    r: "Expr"


Expr = Const | Add | Mult

_EXPR_WS = " \t\n\r"


def _lexeme(p: Parser) -> Parser:
    """``p`` followed by skipped whitespace, kept cheap for tight loops."""
    def parse(text, pos):
        out = p.fn(text, pos)
        if isinstance(out, Failure):
            return out
        i = out.end
        n = len(text)
        while i < n and text[i] in _EXPR_WS:
            i += 1
        return Success(out.value, i)
    return Parser(parse, p.label)


def _natural(text, pos):
    i = pos
    n = len(text)
    while i < n and "0" <= text[i] <= "9":
        i += 1
    if i == pos:
        return Failure(pos, "a number")
    return Success(int(text[pos:i]), i)


_expr = forward()
_ATOM = alt(
    _lexeme(Parser(_natural, "a number")).map(Const),
    seq(_lexeme(lit("(")), _expr, _lexeme(lit(")"))).map(lambda t: t[1]),
)
_PRODUCT = chain_left(_ATOM, _lexeme(lit("*")).map(lambda _: Mult))
_SUM = chain_left(_PRODUCT, _lexeme(lit("+")).map(lambda _: Add))
_expr.define(_SUM)

_EXPR_GRAMMAR = _lexeme(succeed(None)).then(_SUM).map(lambda t: (t[1], {}))


def expr_text(e: Expr) -> str:
    """Render with the fewest parentheses that reparse to the same tree.

    Both operators associate left and "*" binds tighter than "+", so a
    right child needs parentheses at its own precedence level while a left
    child needs them only below it.
    """
    def go(node, floor):
        if isinstance(node, Const):
            return str(node.n)
        if isinstance(node, Add):
            rendered, level = f"{go(node.l, 1)} + {go(node.r, 2)}", 1
        else:
            rendered, level = f"{go(node.l, 2)} * {go(node.r, 3)}", 2
        return f"({rendered})" if level < floor else rendered
    return go(e, 0)


def cast_expr(e: Expr) -> str:
    return expr_text(e)


# ------------------------------------------------------------ registration

_SANITISED_PATTERN = "[0-9a-zA-Z _.-]+"


def register_builtins(reg: TypeRegistry) -> TypeRegistry:
    reg.register(StringType(
        "CssColour", _COLOUR, cast_colour,
        fields=("red", "green", "blue")))
    reg.register(StringType(
        "CssUnit", _UNIT, cast_unit,
        fields=("value", "unit"),
        field_recognizers={"unit": _UNIT_SUFFIX | lit("auto"),
                           "value": _NUMBER}))
    reg.register(StringType(
        "PxOrAuto", _unit_grammar(lit("px")), cast_unit,
        fields=("value", "unit"), parent="CssUnit",
        overridden=frozenset({"unit"}),
        field_recognizers={"unit": lit("px") | lit("auto")}))
    reg.register(StringType(
        "Email", _EMAIL, cast_email,
        fields=("name", "domain_left", "domain_right"),
        field_recognizers={"name": _EMAIL_NAME,
                           "domain_left": _DOMAIN,
                           "domain_right": _TLD}))
    reg.register(StringType(
        "Gmail", _email_grammar(_GMAIL_LEFT), cast_email,
        fields=("name", "domain_left", "domain_right"), parent="Email",
        overridden=frozenset({"domain_left"}),
        field_recognizers={"domain_left": _GMAIL_LEFT}))
    reg.register(StringType(
        "FilePath", _PATH, cast_path,
        fields=("absolute", "dirs", "file_name", "ext", "separator"),
        field_recognizers={"separator": one_of("/\\"), "file_name": _SEGMENT}))
    reg.register(StringType(
        "UnixPath", _UNIX_PATH, cast_path,
        fields=("absolute", "dirs", "file_name", "ext", "separator"),
        parent="FilePath", overridden=frozenset({"separator"}),
        field_recognizers={"separator": lit("/")}))
    reg.register(StringType(
        "WindowsPath", _WINDOWS_PATH, cast_path,
        fields=("absolute", "dirs", "file_name", "ext", "separator"),
        parent="FilePath", overridden=frozenset({"separator"}),
        field_recognizers={"separator": lit("\\")}))
    reg.register(StringType(
        "HomeDotFile", _HOME_DOT_FILE, cast_path,
        fields=("absolute", "dirs", "file_name", "ext", "separator"),
        parent="UnixPath", overridden=frozenset({"dirs", "file_name"}),
        field_recognizers={"dirs": lit("home"),
                           "file_name": pattern(r"\.[^/\\]*")}))
    reg.register(StringType(
        "USPhone", _PHONE, cast_phone,
        fields=("area", "office", "uniq")))
    reg.register(StringType(
        "EqualAandB", _EQUAL_AB, cast_equal_ab,
        fields=("count",), keep_raw=False))
    reg.register(StringType(
        "InnerR", _INNER_R, cast_inner_r,
        fields=("left", "right")))
    reg.register(StringType(
        "Expr", _EXPR_GRAMMAR, cast_expr))
    reg.register(opaque_type("Sanitised", _SANITISED_PATTERN))
    reg.register(opaque_type("UserName", _SANITISED_PATTERN))
    return reg


def build_registry() -> TypeRegistry:
    """A fresh, unfrozen registry holding every builtin type."""
    return register_builtins(TypeRegistry())
