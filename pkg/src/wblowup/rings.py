"""Z-weighted multivariate polynomials over Q, with presented graded rings.

A monomial is an exponent tuple (one int per ring variable); negative
exponents are allowed only on variables flagged invertible, which happens
inside chart localizations.  A polynomial maps exponent tuples to nonzero
Fraction coefficients; the zero polynomial has an empty term map.

A GradedRing is a list of weighted variables together with a (possibly
empty) list of homogeneous relation polynomials.  Quotients and chart
localizations share the same variable list, so polynomials move freely
between a ring, its quotients and its localizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Sequence, Tuple

Monomial = Tuple[int, ...]


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Variable:
    name: str
    weight: int
    invertible: bool = False


class GradedRing:
    """A weighted polynomial ring modulo homogeneous relations."""

    def __init__(self, variables: Sequence[Variable], relations: Sequence["Polynomial"] = ()):
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.variables: Tuple[Variable, ...] = tuple(variables)
        self._index = {v.name: i for i, v in enumerate(self.variables)}
        rels = []
        for rel in relations:
            rel = Polynomial(self, dict(rel.terms))
            if rel.is_zero():
                continue
            if not rel.is_homogeneous():
                raise ValueError(f"relation {rel} is not homogeneous")
            rels.append(rel)
        self.relations: Tuple[Polynomial, ...] = tuple(rels)

    # --- identity -------------------------------------------------------
    def key(self):
        rel_key = tuple(
            tuple(sorted((m, (c.numerator, c.denominator)) for m, c in r.terms.items()))
            for r in self.relations
        )
        return (self.variables, rel_key)

    def __eq__(self, other):
        return isinstance(other, GradedRing) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        vs = ",".join(
            f"{v.name}({v.weight}{'*' if v.invertible else ''})" for v in self.variables
        )
        rels = "; ".join(str(r) for r in self.relations)
        return f"GradedRing[{vs}]" + (f"/({rels})" if rels else "")

    # --- basic accessors ------------------------------------------------
    @property
    def arity(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def weights(self) -> Tuple[int, ...]:
        return tuple(v.weight for v in self.variables)

    def variable_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} in {self!r}") from None

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(e * v.weight for e, v in zip(mono, self.variables))

    # --- constructors ---------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * self.arity: Fraction(1)})

    def constant(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {(0,) * self.arity: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        i = self.variable_index(name)
        mono = tuple(1 if j == i else 0 for j in range(self.arity))
        return Polynomial(self, {mono: Fraction(1)})

    def monomial(self, mono: Monomial, coeff=1) -> "Polynomial":
        c = Fraction(coeff)
        return Polynomial(self, {tuple(mono): c} if c else {})

    # --- derived rings --------------------------------------------------
    def quotient(self, extra_relations: Sequence["Polynomial"]) -> "GradedRing":
        return GradedRing(self.variables, tuple(self.relations) + tuple(extra_relations))

    def invert(self, names: Iterable[str]) -> "GradedRing":
        """Chart localization: mark the given variables invertible."""
        names = set(names)
        for n in names:
            self.variable_index(n)
        new_vars = tuple(
            Variable(v.name, v.weight, v.invertible or v.name in names)
            for v in self.variables
        )
        return GradedRing(new_vars, self.relations)

    def free(self) -> "GradedRing":
        return GradedRing(self.variables)

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)


class Polynomial:
    """Sparse polynomial: exponent tuple -> nonzero Fraction."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: GradedRing, terms: Dict[Monomial, Fraction]):
        self.ring = ring
        clean = {}
        for mono, c in terms.items():
            c = Fraction(c)
            if not c:
                continue
            if len(mono) != ring.arity:
                raise ValueError(f"monomial {mono} has wrong arity for {ring!r}")
            for e, v in zip(mono, ring.variables):
                if e < 0 and not v.invertible:
                    raise ValueError(f"negative exponent on non-invertible {v.name}")
            clean[tuple(mono)] = c
        self.terms = clean

    # --- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        degs = {self.ring.monomial_degree(m) for m in self.terms}
        return len(degs) <= 1

    def degree(self):
        """Weighted degree of a homogeneous polynomial; None for zero."""
        degs = {self.ring.monomial_degree(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"{self} is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def total_degree(self):
        if not self.terms:
            return None
        return max(sum(m) for m in self.terms)

    # --- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring.names != self.ring.names or other.ring.weights != self.ring.weights:
                raise ValueError("polynomials over different variable lists")
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            nc = terms.get(m, Fraction(0)) + c
            if nc:
                terms[m] = nc
            else:
                terms.pop(m, None)
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                nc = terms.get(m, Fraction(0)) + c1 * c2
                if nc:
                    terms[m] = nc
                else:
                    terms.pop(m, None)
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = self._coerce(other)
            except (ValueError, TypeError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # --- printing -------------------------------------------------------
    def __str__(self):
        return print_polynomial(self)

    def __repr__(self):
        return f"<{print_polynomial(self)}>"


# ---------------------------------------------------------------------------
# text grammar
#
#   expr   := term (("+"|"-") term)*
#   term   := coeff ("*" factor)* | factor ("*" factor)*
#   factor := ident ("^" uint)?
#   coeff  := int | int "/" uint
#
# Whitespace is insignificant.  A leading sign on the first term is accepted.
# ---------------------------------------------------------------------------

_TOKEN_KINDS = ("int", "ident", "op")


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
        elif ch in "+-*/^":
            tokens.append(("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


def parse_polynomial(text: str, ring: GradedRing) -> Polynomial:
    """Parse the grammar above into a normalized Polynomial over ring."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def advance():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def expect_uint(context: str) -> int:
        kind, val, at = peek()
        if kind != "int":
            raise ParseError(f"expected integer {context}", at)
        advance()
        return int(val)

    def parse_factor():
        kind, val, at = peek()
        if kind != "ident":
            raise ParseError("expected variable name", at)
        advance()
        try:
            idx = ring.variable_index(val)
        except KeyError:
            raise ParseError(f"unknown variable {val!r}", at) from None
        power = 1
        if peek()[:2] == ("op", "^"):
            advance()
            power = expect_uint("exponent")
        return idx, power

    def parse_term() -> Polynomial:
        coeff = Fraction(1)
        exps = [0] * ring.arity
        kind, val, at = peek()
        if kind == "int":
            advance()
            coeff = Fraction(int(val))
            if peek()[:2] == ("op", "/"):
                advance()
                denom = expect_uint("denominator")
                if denom == 0:
                    raise ParseError("zero denominator", at)
                coeff /= denom
            while peek()[:2] == ("op", "*"):
                advance()
                idx, power = parse_factor()
                exps[idx] += power
        else:
            idx, power = parse_factor()
            exps[idx] += power
            while peek()[:2] == ("op", "*"):
                advance()
                idx, power = parse_factor()
                exps[idx] += power
        return ring.monomial(tuple(exps), coeff)

    result = ring.zero()
    sign = 1
    kind, val, at = peek()
    if kind == "op" and val in "+-":
        advance()
        sign = -1 if val == "-" else 1
    result = result + sign * parse_term()
    while True:
        kind, val, at = peek()
        if kind == "end":
            break
        if kind != "op" or val not in "+-":
            raise ParseError(f"expected '+' or '-', got {val!r}", at)
        advance()
        term = parse_term()
        result = result + (term if val == "+" else -term)
    return result


def _monomial_sort_key(mono: Monomial):
    # graded-lex within a fixed degree reduces to lex on exponent tuples
    return tuple(-e for e in mono)


def print_polynomial(poly: Polynomial) -> str:
    """Canonical text form; parse_polynomial inverts it exactly."""
    if poly.is_zero():
        return "0"
    parts = []
    for mono in sorted(poly.terms, key=_monomial_sort_key):
        coeff = poly.terms[mono]
        factors = []
        for e, name in zip(mono, poly.ring.names):
            if e == 0:
                continue
            factors.append(name if e == 1 else f"{name}^{e}")
        mag = abs(coeff)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not parts:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(("+ " if coeff > 0 else "- ") + body)
    return " ".join(parts)
