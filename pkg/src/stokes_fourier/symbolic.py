"""Exact multivariate Laurent polynomials over Q and small matrices of them.

Variables whose name starts with ``tau`` are invertible and may carry
negative exponents; all other variables are polynomial.

Text grammar (parser and printer round-trip exactly)::

    poly   := term (("+" | "-") term)*  |  "0"
    term   := ["-"] (coeff | [coeff "*"] factor ("*" factor)*)
    factor := name ["^" ["("] int [")"]]
    name   := [A-Za-z_][A-Za-z0-9_]* ("[" text-without-"]" "]")*
    coeff  := int ["/" int]
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence, Union

from .errors import (
    LabelMismatch,
    NotUnipotent,
    ParseError,
    SizeMismatch,
    ZeroSubstitutionForInvertible,
)

Monomial = tuple[tuple[str, int], ...]
Scalar = Union[int, Fraction]

INVERTIBLE_PREFIX = "tau"


def is_invertible(name: str) -> bool:
    return name.startswith(INVERTIBLE_PREFIX)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        e2 = exps.get(v, 0) + e
        if e2:
            exps[v] = e2
        else:
            del exps[v]
    return tuple(sorted(exps.items()))


class LaurentPoly:
    """Immutable map from monomials to nonzero rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None) -> None:
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    for v, e in mono:
                        if e < 0 and not is_invertible(v):
                            raise ValueError(f"negative power of non-invertible variable {v}")
                    clean[mono] = Fraction(c)
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> "LaurentPoly":
        out = cls.__new__(cls)
        out._terms = terms
        out._hash = None
        return out

    @classmethod
    def const(cls, c: Scalar) -> "LaurentPoly":
        return cls._raw({(): Fraction(c)} if c else {})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "LaurentPoly":
        if exp < 0 and not is_invertible(name):
            raise ValueError(f"negative power of non-invertible variable {name}")
        return cls._raw({((name, exp),) if exp else (): Fraction(1)})

    @staticmethod
    def coerce(x: "LaurentPoly | Scalar | str") -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, str):
            return parse_poly(x)
        return LaurentPoly.const(x)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def variables(self) -> set[str]:
        return {v for m in self._terms for v, _ in m}

    def is_unit_monomial(self) -> bool:
        """Nonzero rational times a monomial in invertible variables only."""
        if len(self._terms) != 1:
            return False
        (mono,) = self._terms
        return all(is_invertible(v) for v, _ in mono)

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self._terms), default=0)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        other = LaurentPoly.coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            c2 = out.get(m, 0) + c
            if c2:
                out[m] = c2
            else:
                out.pop(m, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return self.scalar_mul(other)
        if not self._terms or not other._terms:
            return ZERO
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                c = out.get(m, 0) + c1 * c2
                if c:
                    out[m] = c
                else:
                    out.pop(m, None)
        return LaurentPoly._raw(out)

    def __rmul__(self, other: Scalar) -> "LaurentPoly":
        return self.scalar_mul(other)

    def scalar_mul(self, c: Scalar) -> "LaurentPoly":
        c = Fraction(c)
        if not c:
            return ZERO
        return LaurentPoly._raw({m: c * x for m, x in self._terms.items()})

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_unit_monomial():
            raise ValueError(f"{self} is not a unit monomial")
        ((mono, c),) = self._terms.items()
        return LaurentPoly._raw({tuple((v, -e) for v, e in mono): 1 / c})

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            return self.unit_inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        other = LaurentPoly.coerce(other)
        return self * other.unit_inverse()

    # -- substitution ------------------------------------------------------
    def eval(self, assignment: Mapping[str, "Scalar | LaurentPoly"]) -> "LaurentPoly":
        """Substitute values for variables; unassigned variables stay symbolic."""
        values = {k: LaurentPoly.coerce(v) for k, v in assignment.items()}
        for k, v in values.items():
            if is_invertible(k) and v.is_zero() and k in self.variables():
                raise ZeroSubstitutionForInvertible(f"cannot substitute 0 for {k}", variable=k)
        out = ZERO
        cache: dict[tuple[str, int], LaurentPoly] = {}
        for mono, c in self._terms.items():
            kept: list[tuple[str, int]] = []
            term = LaurentPoly.const(c)
            for v, e in mono:
                if v in values:
                    key = (v, e)
                    if key not in cache:
                        val = values[v]
                        if e < 0 and not val.is_unit_monomial():
                            if val.is_constant():
                                cache[key] = LaurentPoly.const(val.constant_value() ** e)
                            else:
                                raise ValueError(f"cannot invert {val} substituted for {v}")
                        else:
                            cache[key] = val ** e
                    term = term * cache[key]
                else:
                    kept.append((v, e))
            if kept:
                term = term * LaurentPoly._raw({tuple(kept): Fraction(1)})
            out = out + term
        return out

    def value(self, assignment: Mapping[str, Scalar]) -> Fraction:
        return self.eval(assignment).constant_value()

    def split_linear(self, name: str) -> tuple["LaurentPoly", "LaurentPoly"]:
        """Write self = coef*name + rest with rest free of ``name``."""
        coef: dict[Monomial, Fraction] = {}
        rest: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            e = dict(mono).get(name, 0)
            if e == 0:
                rest[mono] = c
            elif e == 1:
                coef[tuple(p for p in mono if p[0] != name)] = c
            else:
                raise ValueError(f"{name} appears with exponent {e}")
        return LaurentPoly._raw(coef), LaurentPoly._raw(rest)

    def derivative(self, name: str) -> "LaurentPoly":
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            d = dict(mono)
            e = d.get(name, 0)
            if not e:
                continue
            if e == 1:
                del d[name]
            else:
                d[name] = e - 1
            m = tuple(sorted(d.items()))
            out[m] = out.get(m, 0) + c * e
        return LaurentPoly({m: c for m, c in out.items() if c})

    # -- comparison and printing -------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: t[0], reverse=True)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({(): Fraction(1)})


def format_poly(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for mono, c in p.sorted_terms():
        factors = [v if e == 1 else f"{v}^{e}" for v, e in mono]
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        pieces.append(("-" if c < 0 else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_NAME = r"[A-Za-z_][A-Za-z0-9_]*(?:\[[^\]]*\])*"
_TOKEN = re.compile(
    rf"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>{_NAME})|(?P<pow>\^\s*\(?\s*-?\d+\s*\)?)|(?P<op>[+\-*]))"
)


def parse_poly(text: str) -> LaurentPoly:
    tokens: list[tuple[str, str]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:]!r}", text=text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
    if not tokens:
        raise ParseError("empty polynomial")
    out = ZERO
    i = 0
    sign = 1
    expect_term = True
    term = None
    while i < len(tokens):
        kind, val = tokens[i]
        if expect_term:
            if kind == "op" and val in "+-":
                if val == "-":
                    sign = -sign
                i += 1
                continue
            term = LaurentPoly.const(sign)
            sign = 1
            while True:
                kind, val = tokens[i]
                if kind == "num":
                    term = term * Fraction(val)
                    i += 1
                elif kind == "name":
                    exp = 1
                    if i + 1 < len(tokens) and tokens[i + 1][0] == "pow":
                        exp = int(re.sub(r"[\^\s()]", "", tokens[i + 1][1]))
                        i += 1
                    try:
                        term = term * LaurentPoly.var(val, exp)
                    except ValueError as exc:
                        raise ParseError(str(exc), text=text) from None
                    i += 1
                else:
                    raise ParseError(f"expected a factor, got {val!r}", text=text)
                if i < len(tokens) and tokens[i] == ("op", "*"):
                    i += 1
                    continue
                break
            out = out + term
            expect_term = False
        else:
            if kind != "op" or val not in "+-":
                raise ParseError(f"expected + or -, got {val!r}", text=text)
            sign = -1 if val == "-" else 1
            expect_term = True
            i += 1
    if expect_term:
        raise ParseError("dangling operator", text=text)
    return out


def P(x: "LaurentPoly | Scalar | str") -> LaurentPoly:
    """Shorthand coercion used throughout the package and tests."""
    return LaurentPoly.coerce(x)


Label = Hashable


class SymbolicMatrix:
    """Square or rectangular matrix of LaurentPoly with optional strand labels."""

    __slots__ = ("rows", "row_labels", "col_labels")

    def __init__(self, rows: Sequence[Sequence["LaurentPoly | Scalar | str"]],
                 row_labels: Sequence[Label] | None = None,
                 col_labels: Sequence[Label] | None = None) -> None:
        self.rows = tuple(tuple(LaurentPoly.coerce(x) for x in row) for row in rows)
        ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise SizeMismatch("ragged matrix")
        self.row_labels = tuple(row_labels) if row_labels is not None else None
        self.col_labels = tuple(col_labels) if col_labels is not None else None
        if self.row_labels is not None and len(self.row_labels) != len(self.rows):
            raise SizeMismatch("row label count")
        if self.col_labels is not None and len(self.col_labels) != ncols:
            raise SizeMismatch("column label count")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @classmethod
    def identity(cls, n: int, labels: Sequence[Label] | None = None) -> "SymbolicMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], labels, labels)

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "SymbolicMatrix":
        return cls([[ZERO] * (n if m is None else m) for _ in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> LaurentPoly:
        return self.rows[ij[0]][ij[1]]

    def entry(self, row_label: Label, col_label: Label) -> LaurentPoly:
        return self.rows[self.row_labels.index(row_label)][self.col_labels.index(col_label)]

    def block(self, row_labels: Sequence[Label], col_labels: Sequence[Label]) -> "SymbolicMatrix":
        ri = [self.row_labels.index(x) for x in row_labels]
        ci = [self.col_labels.index(x) for x in col_labels]
        return SymbolicMatrix([[self.rows[i][j] for j in ci] for i in ri], row_labels, col_labels)

    def relabel(self, row_labels: Sequence[Label] | None, col_labels: Sequence[Label] | None) -> "SymbolicMatrix":
        return SymbolicMatrix(self.rows, row_labels, col_labels)

    def permuted(self, row_labels: Sequence[Label], col_labels: Sequence[Label]) -> "SymbolicMatrix":
        """Reorder rows and columns to the given label orders."""
        return self.block(row_labels, col_labels)

    def __matmul__(self, other: "SymbolicMatrix") -> "SymbolicMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "SymbolicMatrix") -> "SymbolicMatrix":
        if self.shape != other.shape:
            raise SizeMismatch("shapes differ")
        return SymbolicMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                              self.row_labels, self.col_labels)

    def __sub__(self, other: "SymbolicMatrix") -> "SymbolicMatrix":
        if self.shape != other.shape:
            raise SizeMismatch("shapes differ")
        return SymbolicMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                              self.row_labels, self.col_labels)

    def __neg__(self) -> "SymbolicMatrix":
        return SymbolicMatrix([[-a for a in r] for r in self.rows], self.row_labels, self.col_labels)

    def scale(self, c: "LaurentPoly | Scalar") -> "SymbolicMatrix":
        c = LaurentPoly.coerce(c)
        return SymbolicMatrix([[c * a for a in r] for r in self.rows], self.row_labels, self.col_labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolicMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def is_identity(self) -> bool:
        n, m = self.shape
        return n == m and all(self.rows[i][j] == (ONE if i == j else ZERO) for i in range(n) for j in range(n))

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def eval(self, assignment: Mapping[str, "Scalar | LaurentPoly"]) -> "SymbolicMatrix":
        return SymbolicMatrix([[x.eval(assignment) for x in r] for r in self.rows], self.row_labels, self.col_labels)

    def variables(self) -> set[str]:
        return set().union(*(x.variables() for r in self.rows for x in r)) if self.rows else set()

    def nonzero_offdiagonal(self) -> list[tuple[int, int]]:
        n, m = self.shape
        return [(i, j) for i in range(n) for j in range(m) if i != j and not self.rows[i][j].is_zero()]

    def to_lists(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "]"

    __repr__ = __str__


def _check_labels(a: Sequence[Label] | None, b: Sequence[Label] | None) -> None:
    if a is not None and b is not None and tuple(a) != tuple(b):
        raise LabelMismatch("strand labels differ", left=[str(x) for x in a], right=[str(x) for x in b])


def mat_mul(a: SymbolicMatrix, b: SymbolicMatrix) -> SymbolicMatrix:
    n, k = a.shape
    k2, m = b.shape
    if k != k2:
        raise SizeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    _check_labels(a.col_labels, b.row_labels)
    cols = [[b.rows[t][j] for t in range(k)] for j in range(m)]
    out = []
    for i in range(n):
        row = a.rows[i]
        nz = [(t, x) for t, x in enumerate(row) if x._terms]
        new_row = []
        for j in range(m):
            col = cols[j]
            acc = ZERO
            for t, x in nz:
                y = col[t]
                if y._terms:
                    acc = acc + x * y
            new_row.append(acc)
        out.append(new_row)
    return SymbolicMatrix(out, a.row_labels, b.col_labels)


def mat_product(factors: Iterable[SymbolicMatrix]) -> SymbolicMatrix:
    """Left-to-right product of a nonempty sequence."""
    it = iter(factors)
    out = next(it)
    for f in it:
        out = mat_mul(out, f)
    return out


def unipotent_inverse(s: SymbolicMatrix) -> SymbolicMatrix:
    """Inverse of a unipotent matrix as the finite sum of powers of I - S."""
    n, m = s.shape
    if n != m:
        raise SizeMismatch("unipotent matrices are square")
    eye = SymbolicMatrix.identity(n, s.row_labels)
    nil = (eye - s).relabel(s.row_labels, s.col_labels)
    power = nil
    for _ in range(1, n):
        power = mat_mul(power, nil)
    if not power.is_zero():
        raise NotUnipotent("S - I is not nilpotent")
    out = eye
    term = eye
    for _ in range(1, n):
        term = mat_mul(term, nil)
        if term.is_zero():
            break
        out = out + term
    return out.relabel(s.col_labels, s.row_labels)


class MonomialMatrix:
    """Matrix with one nonzero entry per column: column j has ``diag[j]`` in row ``perm[j]``."""

    __slots__ = ("perm", "diag", "labels")

    def __init__(self, perm: Sequence[int], diag: Sequence["LaurentPoly | Scalar | str"],
                 labels: Sequence[Label] | None = None) -> None:
        self.perm = tuple(int(p) for p in perm)
        self.diag = tuple(LaurentPoly.coerce(x) for x in diag)
        if sorted(self.perm) != list(range(len(self.perm))) or len(self.diag) != len(self.perm):
            raise ValueError("perm must be a permutation matching diag")
        if any(x.is_zero() for x in self.diag):
            raise ValueError("monomial matrix entries must be nonzero")
        self.labels = tuple(labels) if labels is not None else None

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def from_matrix(cls, m: SymbolicMatrix) -> "MonomialMatrix":
        n, k = m.shape
        if n != k:
            raise SizeMismatch("monomial matrices are square")
        perm, diag = [], []
        for j in range(n):
            nz = [i for i in range(n) if not m.rows[i][j].is_zero()]
            if len(nz) != 1:
                raise ValueError(f"column {j} has {len(nz)} nonzero entries")
            perm.append(nz[0])
            diag.append(m.rows[nz[0]][j])
        return cls(perm, diag, m.row_labels)

    def to_matrix(self) -> SymbolicMatrix:
        rows = [[ZERO] * self.n for _ in range(self.n)]
        for j, (i, x) in enumerate(zip(self.perm, self.diag)):
            rows[i][j] = x
        return SymbolicMatrix(rows, self.labels, self.labels)

    def inverse(self) -> "MonomialMatrix":
        return monomial_inverse(self)

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        perm = [self.perm[other.perm[j]] for j in range(self.n)]
        diag = [self.diag[other.perm[j]] * other.diag[j] for j in range(self.n)]
        return MonomialMatrix(perm, diag, self.labels)

    def permutation_sign(self) -> int:
        seen = [False] * self.n
        sign = 1
        for j in range(self.n):
            if seen[j]:
                continue
            length = 0
            while not seen[j]:
                seen[j] = True
                j = self.perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        return sign

    def det(self) -> LaurentPoly:
        out = LaurentPoly.const(self.permutation_sign())
        for x in self.diag:
            out = out * x
        return out

    def eval(self, assignment: Mapping[str, "Scalar | LaurentPoly"]) -> "MonomialMatrix":
        return MonomialMatrix(self.perm, [x.eval(assignment) for x in self.diag], self.labels)

    def variables(self) -> set[str]:
        return set().union(*(x.variables() for x in self.diag)) if self.diag else set()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonomialMatrix):
            return NotImplemented
        return self.perm == other.perm and self.diag == other.diag

    def __hash__(self) -> int:
        return hash((self.perm, self.diag))

    def __str__(self) -> str:
        return str(self.to_matrix())

    __repr__ = __str__


def monomial_inverse(m: MonomialMatrix) -> MonomialMatrix:
    """Inverse of a monomial matrix whose entries are unit monomials."""
    perm = [0] * m.n
    diag: list[LaurentPoly] = [ZERO] * m.n
    for j, (i, x) in enumerate(zip(m.perm, m.diag)):
        perm[i] = j
        diag[i] = x.unit_inverse()
    return MonomialMatrix(perm, diag, m.labels)


def solve_by_substitution(equations: Iterable[LaurentPoly], unknowns: Iterable[str]) -> tuple[dict[str, LaurentPoly], list[LaurentPoly]]:
    """Solve ``eq = 0`` for the unknowns one at a time.

    Repeatedly picks an equation containing exactly one pending unknown,
    linearly and with a unit-monomial coefficient free of pending unknowns,
    solves it and substitutes.  Returns the solution and the remaining
    equations after substitution; raises ``ValueError`` listing the stuck
    unknowns when no equation qualifies.
    """
    eqs = [e for e in equations if not e.is_zero()]
    pending = set(unknowns)
    solution: dict[str, LaurentPoly] = {}
    while pending:
        step = None
        for eq in eqs:
            live = eq.variables() & pending
            if len(live) != 1:
                continue
            (u,) = live
            try:
                coef, rest = eq.split_linear(u)
            except ValueError:
                continue
            if coef.is_unit_monomial() and not coef.variables() & pending:
                step = (u, -rest / coef)
                break
        if step is None:
            raise ValueError(sorted(pending))
        u, val = step
        solution[u] = val
        pending.discard(u)
        eqs = [eq.eval({u: val}) if u in eq.variables() else eq for eq in eqs]
        eqs = [e for e in eqs if not e.is_zero()]
    return solution, eqs
