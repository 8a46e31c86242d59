"""A small text language for sums of eta-quotient terms.

Grammar::

    identity  := expr "=" expr [ "(mod" integer ")" ]
    expr      := [ "-" ] term { ("+" | "-") term }
    term      := atom { "*" atom } [ "/" denom ]
    denom     := atom | "(" atom { "*" atom } ")"
    atom      := integer | "q" [ "^" integer ] | "f" integer [ "^" integer ]

Examples: ``f1*f2``, ``2*q^2*f12^3*f18^3/f6^7``,
``f1^8 + 2*q*f4^8 = f2^4 (mod 3)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, NamedTuple

from .eta import EtaQuotient, ValuationError, eta_quotient
from .report import Timer, VerificationReport, compare_series
from .series import Series


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1,
                 expected: frozenset[str] = frozenset()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        text = f"line {line}, column {column}: {message}"
        if expected:
            text += f" (expected one of: {', '.join(sorted(expected))})"
        super().__init__(text)


class EvaluationError(ValueError):
    pass


class Token(NamedTuple):
    kind: str  # INT, Q, F, MOD, EOF or the punctuation character itself
    value: int | None
    line: int
    column: int


_PUNCT = set("+-*/^()=")


def tokenize(text: str, line: int = 1) -> list[Token]:
    tokens = []
    col = 1
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        start = col
        if c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", int(text[i:j]), line, start))
        elif c in _PUNCT:
            j = i + 1
            tokens.append(Token(c, None, line, start))
        elif c.isalpha():
            j = i
            while j < len(text) and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word == "q":
                tokens.append(Token("Q", None, line, start))
            elif word == "mod":
                tokens.append(Token("MOD", None, line, start))
            elif word == "f":
                k = j
                while k < len(text) and text[k].isdigit():
                    k += 1
                if k == j:
                    raise ParseError("'f' must be followed by a subscript",
                                     line, start + 1, frozenset({"integer"}))
                tokens.append(Token("F", int(text[j:k]), line, start))
                j = k
            else:
                raise ParseError(f"unknown name {word!r}", line, start,
                                 frozenset({"q", "f<int>"}))
        else:
            raise ParseError(f"unexpected character {c!r}", line, start)
        col += j - i
        i = j
    tokens.append(Token("EOF", None, line, col))
    return tokens


@dataclass(frozen=True)
class EtaExpr:
    """A nonempty sum of eta-quotient terms in canonical order."""

    terms: tuple[EtaQuotient, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("an expression needs at least one term")
        for t in self.terms:
            if t.coeff == 0:
                raise ValueError("terms with coefficient 0 are not allowed")
        object.__setattr__(self, "terms",
                           tuple(sorted(self.terms, key=_term_key)))

    def __str__(self) -> str:
        return format_expr(self)

    def __add__(self, other: EtaExpr) -> EtaExpr:
        return EtaExpr(self.terms + other.terms)


def _term_key(t: EtaQuotient):
    return (t.qpow, t.factors, t.coeff)


@dataclass(frozen=True)
class IdentityClaim:
    lhs: EtaExpr
    rhs: EtaExpr
    modulus: int | None = None
    label: str = ""

    def __str__(self) -> str:
        text = f"{self.lhs} = {self.rhs}"
        if self.modulus is not None:
            text += f" (mod {self.modulus})"
        return text


@dataclass(frozen=True)
class DissectionClaim:
    """Component ``r`` of the ``m``-dissection of ``gf`` equals ``claimed``.

    ``claimed`` is written in the reindexed variable (q^m replaced by q);
    ``None`` stands for the zero series.
    """

    gf: EtaExpr
    m: int
    r: int
    claimed: EtaExpr | None
    modulus: int | None = None
    label: str = ""

    def __str__(self) -> str:
        rhs = "0" if self.claimed is None else self.claimed
        text = f"{self.gf} @ {self.m}:{self.r} = {rhs}"
        if self.modulus is not None:
            text += f" (mod {self.modulus})"
        return text


class _Parser:
    def __init__(self, text: str, line: int = 1):
        self.tokens = tokenize(text, line)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, expected, message=None, tok=None):
        tok = tok or self.tok
        if message is None:
            found = "end of input" if tok.kind == "EOF" else repr(
                str(tok.value) if tok.value is not None and tok.kind == "INT"
                else _show(tok))
            message = f"unexpected {found}"
        raise ParseError(message, tok.line, tok.column, frozenset(expected))

    def expect(self, kind: str, shown: str | None = None) -> Token:
        if self.tok.kind != kind:
            self.fail({shown or kind})
        return self.advance()

    def expr(self) -> EtaExpr:
        terms = []
        sign = 1
        if self.tok.kind == "-":
            self.advance()
            sign = -1
        terms.append(self.term(sign))
        while self.tok.kind in ("+", "-"):
            sign = 1 if self.advance().kind == "+" else -1
            terms.append(self.term(sign))
        return EtaExpr(tuple(terms))

    def term(self, sign: int) -> EtaQuotient:
        start = self.tok
        coeff, qpow, factors = sign, 0, {}
        coeff, qpow = self.atom(coeff, qpow, factors, 1)
        while self.tok.kind == "*":
            self.advance()
            coeff, qpow = self.atom(coeff, qpow, factors, 1)
        if self.tok.kind == "/":
            self.advance()
            if self.tok.kind == "(":
                self.advance()
                coeff, qpow = self.atom(coeff, qpow, factors, -1)
                while self.tok.kind == "*":
                    self.advance()
                    coeff, qpow = self.atom(coeff, qpow, factors, -1)
                self.expect(")", "')'")
            else:
                coeff, qpow = self.atom(coeff, qpow, factors, -1)
        if coeff == 0:
            raise ParseError("term has coefficient 0", start.line,
                             start.column)
        return EtaQuotient.of(factors, coeff, qpow)

    def atom(self, coeff, qpow, factors, side):
        tok = self.tok
        if tok.kind == "INT":
            self.advance()
            if side < 0:
                if tok.value != 1:
                    self.fail(set(), f"integer {tok.value} in a denominator "
                              "is not supported", tok)
                return coeff, qpow
            return coeff * tok.value, qpow
        if tok.kind == "Q":
            self.advance()
            return coeff, qpow + side * self.exponent()
        if tok.kind == "F":
            self.advance()
            if tok.value == 0:
                self.fail(set(), "subscript f0 is not allowed", tok)
            factors[tok.value] = factors.get(tok.value, 0) + side * self.exponent()
            return coeff, qpow
        self.fail({"integer", "q", "f<int>"})

    def exponent(self) -> int:
        if self.tok.kind != "^":
            return 1
        self.advance()
        return self.expect("INT", "integer").value

    def modulus(self) -> int | None:
        if self.tok.kind != "(":
            return None
        self.advance()
        self.expect("MOD", "'mod'")
        tok = self.expect("INT", "integer")
        if tok.value < 2:
            self.fail(set(), f"modulus must be >= 2, got {tok.value}", tok)
        self.expect(")", "')'")
        return tok.value

    def end(self):
        if self.tok.kind != "EOF":
            self.fail({"end of input"})


def _show(tok: Token) -> str:
    return {"Q": "q", "F": f"f{tok.value}", "MOD": "mod"}.get(tok.kind, tok.kind)


def parse_expr(text: str, line: int = 1) -> EtaExpr:
    p = _Parser(text, line)
    e = p.expr()
    if p.tok.kind == "=":
        p.fail({"end of input"}, "unexpected '=' in an expression")
    p.end()
    return e


def parse_identity(text: str, label: str = "", line: int = 1) -> IdentityClaim:
    p = _Parser(text, line)
    lhs = p.expr()
    if p.tok.kind != "=":
        p.fail({"'='"}, "missing '=' in identity")
    p.advance()
    rhs = p.expr()
    modulus = p.modulus()
    p.end()
    return IdentityClaim(lhs, rhs, modulus, label)


def parse_dissection(text: str, label: str = "",
                     line: int = 1) -> DissectionClaim:
    """Parse ``gf @ m:r = claimed [(mod M)]``; ``claimed`` may be ``0``."""
    head, sep, rest = text.partition("@")
    if not sep:
        raise ParseError("missing '@' in dissection claim", line, 1)
    gf = parse_expr(head, line)
    spec, sep, tail = rest.partition("=")
    m_text, colon, r_text = spec.partition(":")
    try:
        if not (sep and colon):
            raise ValueError
        m, r = int(m_text), int(r_text)
    except ValueError:
        raise ParseError("dissection needs the form 'gf @ m:r = claimed'",
                         line, len(head) + 2,
                         frozenset({"m:r"})) from None
    if m < 1 or not 0 <= r < m:
        raise ParseError(f"residue {r} out of range for m={m}", line,
                         len(head) + 2)
    p = _Parser(tail, line)
    if p.tok.kind == "INT" and p.tok.value == 0 and p.tokens[1].kind in (
            "(", "EOF"):
        p.advance()
        claimed = None
    else:
        claimed = p.expr()
    modulus = p.modulus()
    p.end()
    return DissectionClaim(gf, m, r, claimed, modulus, label)


def _format_atoms(coeff: int, qpow: int, factors) -> list[str]:
    atoms = []
    if coeff != 1:
        atoms.append(str(coeff))
    if qpow:
        atoms.append("q" if qpow == 1 else f"q^{qpow}")
    for r, e in factors:
        atoms.append(f"f{r}" if e == 1 else f"f{r}^{e}")
    return atoms


def format_term(t: EtaQuotient, signed: bool = True) -> str:
    coeff = t.coeff if signed else abs(t.coeff)
    num = _format_atoms(abs(coeff), max(t.qpow, 0),
                        [(r, e) for r, e in t.factors if e > 0])
    den = _format_atoms(1, max(-t.qpow, 0),
                        [(r, -e) for r, e in t.factors if e < 0])
    text = "*".join(num) or "1"
    if den:
        text += "/" + (den[0] if len(den) == 1 else "(" + "*".join(den) + ")")
    return ("-" if coeff < 0 else "") + text


def format_expr(e: EtaExpr) -> str:
    parts = []
    for i, t in enumerate(e.terms):
        if i == 0:
            parts.append(format_term(t))
        else:
            parts.append(("- " if t.coeff < 0 else "+ ")
                         + format_term(t, signed=False))
    return " ".join(parts)


def evaluate(e: EtaExpr, order: int, modulus: int | None = None) -> Series:
    total = None
    for t in e.terms:
        try:
            s = eta_quotient(t, order, modulus)
        except ValueError as exc:
            if isinstance(exc, ValuationError):  # message already names the term
                raise EvaluationError(str(exc)) from exc
            raise EvaluationError(f"term {format_term(t)}: {exc}") from exc
        total = s if total is None else total + s
    return total


def verify_identity(c: IdentityClaim, order: int,
                    expand=evaluate) -> VerificationReport:
    """Expand both sides to ``order`` and compare them coefficientwise.

    ``expand`` lets callers route expansions through a cache.
    """
    report = VerificationReport(
        label=c.label or str(c), kind="identity",
        params={"identity": str(c)}, order=order, modulus=c.modulus)
    with Timer() as timer:
        sides = []
        for name, side in (("lhs", c.lhs), ("rhs", c.rhs)):
            try:
                sides.append(expand(side, order, c.modulus))
            except ValueError as exc:
                report.outcome = "error"
                report.message = f"{name}: {exc}"
                break
        else:
            compare_series(report, *sides)
    report.elapsed_ms = timer.ms
    return report


def verify_dissection(c: DissectionClaim, order: int,
                      expand=evaluate) -> VerificationReport:
    from .verifier import dissect_and_match
    return dissect_and_match(c.gf, c.m, c.r, c.claimed, order, c.modulus,
                             label=c.label, expand=expand)


@dataclass(frozen=True)
class FixtureLine:
    line: int
    claim: IdentityClaim | DissectionClaim


def iter_fixture(text: str) -> Iterator[FixtureLine]:
    """Parse fixture text: one claim per line, ``#`` comments, optional ``[label]``.

    Lines containing ``@`` are dissection claims, the rest identities.
    """
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        label = ""
        if body.startswith("["):
            end = body.find("]")
            if end < 0:
                raise ParseError("unterminated label", lineno, 1,
                                 frozenset({"']'"}))
            label, body = body[1:end].strip(), body[end + 1:].strip()
        if "@" in body:
            claim = parse_dissection(body, label, line=lineno)
        else:
            claim = parse_identity(body, label, line=lineno)
        yield FixtureLine(lineno, claim)


def load_fixture(path: str | Path) -> list[IdentityClaim | DissectionClaim]:
    text = Path(path).read_text(encoding="utf-8")
    return [f.claim for f in iter_fixture(text)]
