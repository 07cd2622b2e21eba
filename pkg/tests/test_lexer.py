from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from qutes.frontend import tokenize
from qutes.frontend.tokens import KEYWORDS, TokenKind


def kinds(source):
    tokens, diags = tokenize(source)
    assert not diags
    return [(t.kind, t.lexeme) for t in tokens[:-1]]


def test_qubit_declaration_tokens():
    assert kinds("qubit q = 1q;") == [
        (TokenKind.KEYWORD, "qubit"),
        (TokenKind.IDENT, "q"),
        (TokenKind.OPERATOR, "="),
        (TokenKind.QUANTUM, "1q"),
        (TokenKind.PUNCT, ";"),
    ]


def test_superposition_literal_tokens():
    toks = kinds("quint a = [0, 3]q;")
    assert (TokenKind.PUNCT, "[") in toks
    assert toks[-3:] == [(TokenKind.PUNCT, "]"), (TokenKind.QUANTUM, "q"), (TokenKind.PUNCT, ";")]


def test_bitstring_quantum_literal():
    assert kinds('qustring s = "0110"q;')[3] == (TokenKind.QUANTUM, '"0110"q')


def test_ends_with_eof():
    tokens, _ = tokenize("")
    assert [t.kind for t in tokens] == [TokenKind.EOF]


def test_numbers_and_floats():
    assert kinds("1 2.5 3e2") == [(TokenKind.INT, "1"), (TokenKind.FLOAT, "2.5"), (TokenKind.FLOAT, "3e2")]


def test_float_quantum_literal_is_malformed():
    _, diags = tokenize("1.5q")
    assert [d.code for d in diags] == ["L003"]


def test_operators_longest_match():
    lex = [lx for _, lx in kinds("a <<= b ** c != d >> e")]
    assert "<<" in lex and "**" in lex and "!=" in lex and ">>" in lex


def test_keywords_are_keywords():
    for kw in ("hadamard", "measure", "println", "mcp", "by", "in", "foreach", "and", "or"):
        assert kw in KEYWORDS
        assert kinds(kw) == [(TokenKind.KEYWORD, kw)]


def test_comments_are_skipped():
    assert kinds("// line\nint /* block\n comment */ x;") == [
        (TokenKind.KEYWORD, "int"),
        (TokenKind.IDENT, "x"),
        (TokenKind.PUNCT, ";"),
    ]


def test_unterminated_string_diagnostic_at_quote():
    tokens, diags = tokenize('int x = 5 "')
    assert [d.code for d in diags] == ["L002"]
    assert "unterminated string literal" in diags[0].message
    assert diags[0].span.start == (1, 11)


def test_invalid_character_is_reported_and_skipped():
    tokens, diags = tokenize("int x = 1 @ 2;")
    assert [d.code for d in diags] == ["L001"]
    assert [t.lexeme for t in tokens if t.kind is TokenKind.INT] == ["1", "2"]


def test_malformed_quantum_literal():
    _, diags = tokenize("quint a = 12qx;")
    assert "L003" in [d.code for d in diags]


def test_unterminated_block_comment():
    _, diags = tokenize("int x; /* never closed")
    assert [d.code for d in diags] == ["L004"]


def test_columns_count_characters():
    tokens, _ = tokenize('string s = "ππ"; int y;')
    y = next(t for t in tokens if t.lexeme == "y")
    assert y.span.start_col == 22


def _offset(source, line, col):
    lines = source.split("\n")
    return sum(len(x) + 1 for x in lines[: line - 1]) + col - 1


_PIECES = list("qint 01\"[]();=+-*/<>!&|.#@\n_abc{}^,\\π") + ["qubit", "//", "/*", "*/", "5q", "]q"]


@given(st.lists(st.sampled_from(_PIECES), max_size=60).map("".join))
def test_tokenize_never_raises_and_spans_tile(source):
    tokens, diags = tokenize(source)
    assert tokens[-1].kind is TokenKind.EOF
    prev_end = (1, 1)
    for t in tokens[:-1]:
        assert t.lexeme
        assert t.span.start >= prev_end
        prev_end = t.span.end
        a = _offset(source, *t.span.start)
        b = _offset(source, *t.span.end)
        assert source[a:b] == t.lexeme


@given(st.binary(max_size=200))
def test_tokenize_arbitrary_bytes(data):
    tokenize(data.decode("utf-8", errors="replace"))
