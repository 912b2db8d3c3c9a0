"""Builtin filter catalog and the textual filter DSL.

Grammar::

    filter q=<int> '{' (term <coeff> '{' (copy <slot>{q} ';')+ '}')+ '}'

Slot tokens: ``0 x y z`` are fixed Paulis; any other lowercase letter is a
lower contraction index and the matching uppercase letter its upper partner
(``x``/``y``/``z`` and their uppercase forms are reserved).  The coefficient
is an integer or rational ``p/q``, optionally parenthesized and optionally
negative.  ``#`` starts a comment running to end of line.

The builtin catalog is itself written in this DSL, so anything the catalog
ships is by construction parseable and validated.
"""

from __future__ import annotations

from fractions import Fraction

from .engine import (
    ContractionTerm,
    FilterSpec,
    FixedPauli,
    LowerIndex,
    UpperIndex,
    eval_filter,
    validate_spec,
)
from .errors import ParseError, UnknownFilter
from .states import PureState

_FIXED_TOKENS = {"0": 0, "x": 1, "y": 2, "z": 3}
_FIXED_NAMES = {0: "0", 1: "x", 2: "y", 3: "z"}
_LABEL_LETTERS = "abcdefghijklmnopqrstuvw"  # x, y, z are reserved slot tokens


# --- tokenizer / parser --------------------------------------------------------


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "{};=()/-":
            tokens.append(_Token("sym", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(_Token("int", text[start:i], line, col))
            col += i - start
            continue
        if ch.isalpha():
            start = i
            while i < n and text[i].isalnum():
                i += 1
            tokens.append(_Token("word", text[start:i], line, col))
            col += i - start
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect(self, kind, value=None):
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            self.fail(f"expected {want!r}, found {tok.value!r}", tok)
        return tok

    def parse_filter(self, name):
        self.expect("word", "filter")
        self.expect("word", "q")
        self.expect("sym", "=")
        q = int(self.expect("int").value)
        self.expect("sym", "{")
        terms = []
        while not (self.peek().kind == "sym" and self.peek().value == "}"):
            terms.append(self.parse_term(q))
        self.expect("sym", "}")
        if self.peek().kind != "eof":
            self.fail("trailing input after closing brace")
        return FilterSpec(name=name, num_qubits=q, terms=tuple(terms))

    def parse_term(self, q):
        self.expect("word", "term")
        coeff = self.parse_coeff()
        self.expect("sym", "{")
        copies = []
        while not (self.peek().kind == "sym" and self.peek().value == "}"):
            copies.append(self.parse_copy(q))
        self.expect("sym", "}")
        if not copies:
            self.fail("term has no copies")
        return ContractionTerm(coefficient=complex(float(coeff)), copies=tuple(copies))

    def parse_coeff(self):
        parenthesized = False
        if self.peek().kind == "sym" and self.peek().value == "(":
            self.next()
            parenthesized = True
        sign = 1
        if self.peek().kind == "sym" and self.peek().value == "-":
            self.next()
            sign = -1
        num = int(self.expect("int").value)
        den = 1
        if self.peek().kind == "sym" and self.peek().value == "/":
            self.next()
            den = int(self.expect("int").value)
            if den == 0:
                self.fail("zero denominator")
        if parenthesized:
            self.expect("sym", ")")
        return Fraction(sign * num, den)

    def parse_copy(self, q):
        self.expect("word", "copy")
        slots = []
        for _ in range(q):
            slots.append(self.parse_slot())
        self.expect("sym", ";")
        return tuple(slots)

    def parse_slot(self):
        tok = self.next()
        if tok.kind == "int" and tok.value == "0":
            return FixedPauli(0)
        if tok.kind != "word" or len(tok.value) != 1:
            self.fail(f"expected a slot token, found {tok.value!r}", tok)
        ch = tok.value
        if ch in _FIXED_TOKENS:
            return FixedPauli(_FIXED_TOKENS[ch])
        if ch in ("X", "Y", "Z"):
            self.fail(f"{ch!r} is reserved; labels use letters a..w", tok)
        if ch.islower():
            return LowerIndex(ch)
        return UpperIndex(ch.lower())


def parse_dsl(text: str, name: str = "<dsl>") -> FilterSpec:
    """Parse DSL text into a validated FilterSpec."""
    spec = _Parser(text).parse_filter(name)
    validate_spec(spec)
    return spec


def load_filter_file(path) -> FilterSpec:
    """Parse a UTF-8 ``.filter`` file; the spec is named after the file stem."""
    import pathlib

    p = pathlib.Path(path)
    return parse_dsl(p.read_text(encoding="utf-8"), name=p.stem)


def render(spec: FilterSpec) -> str:
    """Render a spec back to DSL text (inverse of parse_dsl).

    Labels are relettered a, b, c, ... in first-occurrence order; the
    coefficient must be a real rational.
    """
    label_map: dict[str, str] = {}

    def letter_for(label):
        if label not in label_map:
            if len(label_map) >= len(_LABEL_LETTERS):
                raise ValueError("too many contraction labels for the DSL alphabet")
            label_map[label] = _LABEL_LETTERS[len(label_map)]
        return label_map[label]

    lines = [f"filter q={spec.num_qubits} {{"]
    for term in spec.terms:
        coeff = complex(term.coefficient)
        if coeff.imag != 0.0:
            raise ValueError("DSL coefficients must be real rationals")
        frac = Fraction(coeff.real).limit_denominator(10**12)
        if float(frac) != coeff.real:
            raise ValueError(f"coefficient {coeff.real!r} is not a simple rational")
        lines.append(f"  term {frac} {{")
        for row in term.copies:
            toks = []
            for slot in row:
                if isinstance(slot, FixedPauli):
                    toks.append(_FIXED_NAMES[slot.index])
                elif isinstance(slot, LowerIndex):
                    toks.append(letter_for(slot.label))
                else:
                    toks.append(letter_for(slot.label).upper())
            lines.append(f"    copy {' '.join(toks)};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- builtin catalog -----------------------------------------------------------

_DSL_SOURCES = {
    "F2_1": "filter q=2 { term 1 { copy y y; } }",
    "F2_2": "filter q=2 { term 1/3 { copy a b; copy A B; } }",
    "F3_1": "filter q=3 { term 1 { copy a y y; copy A y y; } }",
    "F3_2": "filter q=3 { term 1/3 { copy a b c; copy A B C; } }",
    "F3_3": """filter q=3 {
        term 1 { copy a b c; copy A y y; copy y B y; copy y y C; }
    }""",
    "F4_1": """filter q=4 {
        term 1 { copy a b y y; copy A y c y; copy y B C y; }
    }""",
    "F4_2": """filter q=4 {
        term 1 { copy a b y y; copy A y c y; copy y B y d; copy y y C D; }
    }""",
    "F4_3": """filter q=4 {
        term 1/2 {
            copy a b y y; copy A B y y;
            copy c y d y; copy C y D y;
            copy y e f y; copy y E F y;
        }
    }""",
    "D_1": "filter q=5 { term 1 { copy a y y y y; copy A y y y y; } }",
    "D_2": "filter q=5 { term 1 { copy y a y y y; copy y A y y y; } }",
    "D_3": "filter q=5 { term 1 { copy y y a y y; copy y y A y y; } }",
    "D_4": "filter q=5 { term 1 { copy y y y a y; copy y y y A y; } }",
    "D_5": "filter q=5 { term 1 { copy y y y y a; copy y y y y A; } }",
    "F5_8_1": """filter q=5 {
        term 1 {
            copy a b c y y;
            copy A B y d y;
            copy e y C D y;
            copy E y y y y;
        }
    }""",
    "F5_8_2": """filter q=5 {
        term 1 {
            copy a y y b c;
            copy A d y y C;
            copy y D e y f;
            copy y y E B F;
        }
    }""",
    "F5_8_3": """filter q=5 {
        term 3 {
            copy a b c y y;
            copy d B C y y;
            copy D y y e f;
            copy A y y E F;
        }
        term 1 {
            copy a b c y y;
            copy A B C y y;
            copy d y y e f;
            copy D y y E F;
        }
    }""",
    "F5_12_1": """filter q=5 {
        term 1 {
            copy a b c d e;
            copy A y y y y;
            copy y B y y y;
            copy y y C y y;
            copy y y y D y;
            copy y y y y E;
        }
    }""",
    "F5_12_2": """filter q=5 {
        term 1 {
            copy a b c y y;
            copy A B d y y;
            copy e y C y f;
            copy E y D y g;
            copy h y y i F;
            copy H y y I G;
        }
    }""",
    "F5_12_3": """filter q=5 {
        term 1 {
            copy a b c y y;
            copy A y d e y;
            copy y B C y f;
            copy g y D y F;
            copy G y y E h;
            copy y y y y H;
        }
    }""",
    "F5_12_4": """filter q=5 {
        term 1 {
            copy a b c y y;
            copy A B d y y;
            copy e f C y y;
            copy E g y h y;
            copy i F y H y;
            copy I G D y y;
        }
        term -3 {
            copy a b c d e;
            copy A y y y y;
            copy y B y f g;
            copy h i C F G;
            copy H I y D y;
            copy y y y y E;
        }
    }""",
    "F6_1": """filter q=6 {
        term 1 {
            copy a b y y y y;
            copy A y c y y y;
            copy f y y d y y;
            copy y y C y e y;
            copy F B y D E y;
        }
    }""",
    "F6_2": """filter q=6 {
        term 1 {
            copy a b y y y y;
            copy A y c y y y;
            copy f B C d y y;
            copy y y y D e y;
            copy F y y y E y;
        }
    }""",
}

# single proper contraction terms shipped verbatim; their bracketed
# symmetrizations are left to explicit user-written term sums
_EXPERIMENTAL = {
    "F4_2",
    "F5_8_1",
    "F5_8_2",
    "F5_8_3",
    "F5_12_2",
    "F5_12_3",
    "F5_12_4",
}

# SL invariants that are not filters: a sigma_y-free qubit column (the D_j
# contraction column; qubits 1-2 of the first F5_12_4 term) lets certain
# bipartite products with entangled blocks survive.  They do vanish on fully
# factorized states, and they are exactly SL(2,C)-invariant.
_NON_FILTER_INVARIANTS = {"D_1", "D_2", "D_3", "D_4", "D_5", "F5_12_4"}

_ALIASES = {"F5_0": "F5_12_1"}

_catalog: dict[str, FilterSpec] | None = None


def _load_catalog() -> dict[str, FilterSpec]:
    global _catalog
    if _catalog is None:
        catalog = {}
        for name, source in _DSL_SOURCES.items():
            spec = parse_dsl(source, name=name)
            meta = {
                "kind": "invariant" if name in _NON_FILTER_INVARIANTS else "filter"
            }
            if name in _EXPERIMENTAL:
                meta["experimental"] = "unsymmetrized"
            spec = FilterSpec(
                name=spec.name,
                num_qubits=spec.num_qubits,
                terms=spec.terms,
                metadata=meta,
            )
            catalog[name] = spec
        _catalog = catalog
    return _catalog


def builtin(name: str) -> FilterSpec:
    """Look up a builtin filter by name (aliases allowed)."""
    catalog = _load_catalog()
    resolved = _ALIASES.get(name, name)
    try:
        return catalog[resolved]
    except KeyError:
        available = ", ".join(sorted(catalog) + sorted(_ALIASES))
        raise UnknownFilter(f"unknown filter {name!r}; available: {available}") from None


def catalog_names() -> list[str]:
    return sorted(_load_catalog())


def catalog_info(name: str) -> dict:
    spec = builtin(name)
    info = validate_spec(spec)
    out = {"name": spec.name, "qubits": info.num_qubits, "degree": info.degree}
    out.update(spec.metadata)
    return out


def d_invariant_sum(state: PureState, threads: int = 1) -> complex:
    """Sum of the five degree-4 single-contraction invariants D_1..D_5.

    Kept as a derived quantity rather than one five-term spec.
    """
    return sum(
        eval_filter(state, builtin(f"D_{j}"), threads=threads) for j in range(1, 6)
    )
