"""Weight-truncated multivariate polynomials over exact rationals.

Variables carry a grading tag and an integer weight; a polynomial carries
one cutoff per grading and drops any monomial exceeding a cutoff, eagerly,
in every operation.  Coefficients are `fractions.Fraction` throughout; the
ring never touches floating point.

The standard setup has time variables t_1..t_D of weight k in one grading
(only K = D of them are materialized at cutoff D, since t_k with k > D
cannot enter a weight-<=D monomial), optional second-family times, and
unit-weight formal parameters (inverse spectral points, couplings) that may
share a grading with the times so that "total weight" bounds shift degree
and time weight together.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping

Scalar = Fraction | int

MonomialKey = tuple[tuple[int, int], ...]  # sorted ((var_index, exponent), ...)


@dataclass(frozen=True)
class Variable:
    name: str
    grading: str
    weight: int

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError(f"variable {self.name} has negative weight")


class VariableTable:
    """Ordered, name-unique list of graded variables."""

    def __init__(self, variables: Iterable[Variable]):
        self.variables = tuple(variables)
        self.index = {v.name: i for i, v in enumerate(self.variables)}
        if len(self.index) != len(self.variables):
            raise ValueError("duplicate variable names")
        self.gradings = tuple(sorted({v.grading for v in self.variables}))

    def var(self, name: str) -> Variable:
        return self.variables[self.index[name]]

    def weight_of(self, key: MonomialKey, grading: str) -> int:
        w = 0
        for idx, e in key:
            v = self.variables[idx]
            if v.grading == grading:
                w += v.weight * e
        return w

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VariableTable) and self.variables == other.variables

    def __hash__(self) -> int:
        return hash(self.variables)

    def __repr__(self) -> str:
        return f"VariableTable({[v.name for v in self.variables]})"


def time_variables(grading: str, count: int, prefix: str = "t") -> list[Variable]:
    """t_1..t_count with weight k, all in one grading."""
    return [Variable(f"{prefix}{k}", grading, k) for k in range(1, count + 1)]


def unit_variables(grading: str, names: Iterable[str]) -> list[Variable]:
    return [Variable(n, grading, 1) for n in names]


class Poly:
    """Sparse truncated polynomial attached to a table and per-grading cutoffs."""

    __slots__ = ("table", "cutoffs", "terms")

    def __init__(
        self,
        table: VariableTable,
        cutoffs: Mapping[str, int | None],
        terms: Mapping[MonomialKey, Fraction] | None = None,
        _trusted: bool = False,
    ):
        self.table = table
        self.cutoffs = dict(cutoffs)
        for g in table.gradings:
            self.cutoffs.setdefault(g, None)
        if _trusted:
            self.terms = dict(terms or {})
            return
        self.terms = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            key = tuple(sorted((i, e) for i, e in key if e != 0))
            if self._within(key):
                self.terms[key] = self.terms.get(key, Fraction(0)) + c
        self.terms = {k: c for k, c in self.terms.items() if c != 0}

    # -- basics ---------------------------------------------------------

    def _within(self, key: MonomialKey) -> bool:
        for g, cut in self.cutoffs.items():
            if cut is not None and self.table.weight_of(key, g) > cut:
                return False
        return True

    def _spawn(self, terms: dict[MonomialKey, Fraction]) -> "Poly":
        return Poly(self.table, self.cutoffs, terms, _trusted=True)

    @staticmethod
    def zero(table: VariableTable, cutoffs: Mapping[str, int | None]) -> "Poly":
        return Poly(table, cutoffs, {}, _trusted=True)

    @staticmethod
    def constant(
        table: VariableTable, cutoffs: Mapping[str, int | None], c: Scalar
    ) -> "Poly":
        c = Fraction(c)
        return Poly(table, cutoffs, {(): c} if c else {}, _trusted=True)

    @staticmethod
    def variable(
        table: VariableTable, cutoffs: Mapping[str, int | None], name: str
    ) -> "Poly":
        idx = table.index[name]
        return Poly(table, cutoffs, {((idx, 1),): Fraction(1)})

    def one_like(self) -> "Poly":
        return Poly.constant(self.table, self.cutoffs, 1)

    def zero_like(self) -> "Poly":
        return Poly.zero(self.table, self.cutoffs)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def coefficient(self, exponents: Mapping[str, int]) -> Fraction:
        key = tuple(
            sorted((self.table.index[n], e) for n, e in exponents.items() if e)
        )
        return self.terms.get(key, Fraction(0))

    def weight(self, key: MonomialKey, grading: str) -> int:
        return self.table.weight_of(key, grading)

    def max_weight(self, grading: str) -> int:
        return max((self.weight(k, grading) for k in self.terms), default=0)

    # -- ring operations --------------------------------------------------

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            if other.table != self.table:
                raise ValueError("polynomials live on different variable tables")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.table, self.cutoffs, other)
        return None

    def _merged_cutoffs(self, other: "Poly") -> dict[str, int | None]:
        out = {}
        for g in self.table.gradings:
            a, b = self.cutoffs.get(g), other.cutoffs.get(g)
            if a is None:
                out[g] = b
            elif b is None:
                out[g] = a
            else:
                out[g] = min(a, b)
        return out

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        cut = self._merged_cutoffs(o)
        out = Poly.zero(self.table, cut)
        terms = dict(self.terms)
        for k, c in o.terms.items():
            s = terms.get(k, Fraction(0)) + c
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        out.terms = {k: c for k, c in terms.items() if out._within(k)}
        return out

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return self._spawn({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return self.zero_like()
            return self._spawn({k: v * c for k, v in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        cut = self._merged_cutoffs(o)
        out = Poly.zero(self.table, cut)
        acc: dict[MonomialKey, Fraction] = {}
        small, big = (self, o) if len(self.terms) <= len(o.terms) else (o, self)
        for k1, c1 in small.terms.items():
            d1 = dict(k1)
            for k2, c2 in big.terms.items():
                merged = dict(d1)
                for i, e in k2:
                    merged[i] = merged.get(i, 0) + e
                key = tuple(sorted(merged.items()))
                if not out._within(key):
                    continue
                acc[key] = acc.get(key, Fraction(0)) + c1 * c2
        out.terms = {k: c for k, c in acc.items() if c != 0}
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power; use series_inverse")
        out = self.one_like()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.table, self.cutoffs, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.table, tuple(sorted(self.terms.items()))))

    # -- calculus ---------------------------------------------------------

    def derivative(self, name: str, order: int = 1) -> "Poly":
        if name not in self.table.index:
            raise KeyError(f"unknown variable {name}")
        idx = self.table.index[name]
        cur = self
        for _ in range(order):
            terms: dict[MonomialKey, Fraction] = {}
            for key, c in cur.terms.items():
                d = dict(key)
                e = d.get(idx, 0)
                if not e:
                    continue
                d[idx] = e - 1
                newkey = tuple(sorted((i, x) for i, x in d.items() if x))
                terms[newkey] = terms.get(newkey, Fraction(0)) + c * e
            cur = cur._spawn({k: c for k, c in terms.items() if c})
        return cur

    def substitute(self, mapping: Mapping[str, "Poly | Scalar"]) -> "Poly":
        """Simultaneous substitution; result re-truncated eagerly."""
        replace: dict[int, Poly] = {}
        for name, val in mapping.items():
            idx = self.table.index[name]
            if isinstance(val, Poly):
                if val.table != self.table:
                    raise ValueError("substitute values must share the table")
                replace[idx] = val
            else:
                replace[idx] = Poly.constant(self.table, self.cutoffs, val)
        out = self.zero_like()
        power_cache: dict[tuple[int, int], Poly] = {}
        for key, c in self.terms.items():
            term = Poly.constant(self.table, self.cutoffs, c)
            for i, e in key:
                if i in replace:
                    pk = power_cache.get((i, e))
                    if pk is None:
                        pk = replace[i] ** e
                        power_cache[(i, e)] = pk
                    term = term * pk
                else:
                    term = term * Poly(
                        self.table, self.cutoffs, {((i, e),): Fraction(1)}
                    )
            out = out + term
        return out

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        out = Fraction(0)
        for key, c in self.terms.items():
            val = c
            for i, e in key:
                name = self.table.variables[i].name
                if name not in assignment:
                    raise KeyError(f"no value for variable {name}")
                val *= Fraction(assignment[name]) ** e
            out += val
        return out

    def embed(self, table: VariableTable, cutoffs: Mapping[str, int | None]) -> "Poly":
        """Transport into a larger table, matching variables by name; the
        weights must agree or truncation semantics would silently change."""
        remap = {}
        for i, v in enumerate(self.table.variables):
            if v.name not in table.index:
                raise KeyError(f"target table lacks variable {v.name}")
            if table.var(v.name).weight != v.weight:
                raise ValueError(f"variable {v.name} changes weight under embedding")
            remap[i] = table.index[v.name]
        terms = {
            tuple(sorted((remap[i], e) for i, e in key)): c
            for key, c in self.terms.items()
        }
        return Poly(table, cutoffs, terms)

    def truncate(self, cutoffs: Mapping[str, int | None]) -> "Poly":
        merged = dict(self.cutoffs)
        for g, c in cutoffs.items():
            old = merged.get(g)
            merged[g] = c if old is None else (old if c is None else min(old, c))
        return Poly(self.table, merged, self.terms)

    def map_coefficients(self, fn: Callable[[Fraction], Fraction]) -> "Poly":
        return self._spawn({k: fn(c) for k, c in self.terms.items() if fn(c) != 0})

    # -- series helpers ----------------------------------------------------

    def _check_locally_nilpotent(self):
        for key in self.terms:
            ok = False
            for g, cut in self.cutoffs.items():
                if cut is not None and self.table.weight_of(key, g) > 0:
                    ok = True
                    break
            if not ok:
                raise ValueError(
                    "series argument must vanish at weight zero in a bounded grading"
                )

    def series_exp(self) -> "Poly":
        self._check_locally_nilpotent()
        out = self.one_like()
        term = self.one_like()
        k = 1
        while True:
            term = term * self * Fraction(1, k)
            if term.is_zero:
                return out
            out = out + term
            k += 1

    def series_log1p(self) -> "Poly":
        """log(1 + self); argument must be truncation-nilpotent."""
        self._check_locally_nilpotent()
        out = self.zero_like()
        power = self.one_like()
        k = 1
        while True:
            power = power * self
            if power.is_zero:
                return out
            out = out + power * Fraction((-1) ** (k + 1), k)
            k += 1

    def series_inverse(self) -> "Poly":
        c = self.constant_term()
        if c == 0:
            raise ZeroDivisionError("series has no constant term")
        u = self * Fraction(1, c) - 1
        u._check_locally_nilpotent()
        out = self.one_like()
        power = self.one_like()
        sign = -1
        while True:
            power = power * u
            if power.is_zero:
                return out * Fraction(1, c)
            out = out + power * sign
            sign = -sign

    # -- serialization ------------------------------------------------------

    def sorted_terms(self) -> list[tuple[MonomialKey, Fraction]]:
        def sortkey(item):
            key, _ = item
            tot = tuple(self.weight(key, g) for g in self.table.gradings)
            return (sum(tot), tot, key)

        return sorted(self.terms.items(), key=sortkey)

    def to_json(self) -> dict:
        return {
            "vars": [
                {"name": v.name, "grading": v.grading, "weight": v.weight}
                for v in self.table.variables
            ],
            "cutoff": {g: c for g, c in self.cutoffs.items() if c is not None},
            "terms": [
                {
                    "exp": {self.table.variables[i].name: e for i, e in key},
                    "num": str(c.numerator),
                    "den": str(c.denominator),
                }
                for key, c in self.sorted_terms()
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "Poly":
        table = VariableTable(
            Variable(v["name"], v["grading"], v["weight"]) for v in data["vars"]
        )
        cutoffs = {g: int(c) for g, c in data.get("cutoff", {}).items()}
        terms = {}
        for t in data["terms"]:
            key = tuple(
                sorted((table.index[n], int(e)) for n, e in t["exp"].items())
            )
            terms[key] = Fraction(int(t["num"]), int(t["den"]))
        return Poly(table, cutoffs, terms)

    def __repr__(self) -> str:
        if self.is_zero:
            return "Poly(0)"
        bits = []
        for key, c in self.sorted_terms()[:8]:
            mono = "*".join(
                f"{self.table.variables[i].name}^{e}" if e > 1 else self.table.variables[i].name
                for i, e in key
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        more = "" if len(self.terms) <= 8 else f" ... ({len(self.terms)} terms)"
        return "Poly(" + " + ".join(bits) + more + ")"


class TimeFamily:
    """A half-infinite family of graded times t_1..t_K inside one table.

    `names[k-1]` is the variable of weight k.  All generating-series
    helpers live here: complete homogeneous generators, the two-variable
    exponential series, Miwa shifts and evaluations.
    """

    def __init__(
        self,
        table: VariableTable,
        cutoffs: Mapping[str, int | None],
        names: list[str],
        grading: str,
    ):
        self.table = table
        self.cutoffs = dict(cutoffs)
        self.names = list(names)
        self.grading = grading
        for k, n in enumerate(self.names, start=1):
            v = table.var(n)
            if v.weight != k:
                raise ValueError(f"time {n} must have weight {k}")
        self._h_cache: dict[tuple[int, int], Poly] = {}

    @property
    def depth(self) -> int:
        return len(self.names)

    def zero(self) -> Poly:
        return Poly.zero(self.table, self.cutoffs)

    def one(self) -> Poly:
        return Poly.constant(self.table, self.cutoffs, 1)

    def constant(self, c: Scalar) -> Poly:
        return Poly.constant(self.table, self.cutoffs, c)

    def time(self, k: int) -> Poly:
        return Poly.variable(self.table, self.cutoffs, self.names[k - 1])

    def h(self, k: int, sign: int = 1) -> Poly:
        """Complete homogeneous generator h_k(+-t): coefficients of the
        exponential of the time series; h_0 = 1, h_{k<0} = 0.

        Recurrence: k*h_k = sum_{j=1..k} j*(+-t_j)*h_{k-j}.
        """
        if k < 0:
            return self.zero()
        if k == 0:
            return self.one()
        if k > self.depth:
            cut = self.cutoffs.get(self.grading)
            if cut is not None and k > cut:
                return self.zero()  # every weight-k monomial dies anyway
            raise ValueError(f"h_{k} needs time variables up to {k}")
        cached = self._h_cache.get((k, sign))
        if cached is not None:
            return cached
        acc = self.zero()
        for j in range(1, k + 1):
            acc = acc + self.time(j) * (sign * j) * self.h(k - j, sign)
        out = acc * Fraction(1, k)
        self._h_cache[(k, sign)] = out
        return out

    def e(self, k: int) -> Poly:
        """Elementary generator: e_k(t) = (-1)^k h_k(-t)."""
        return self.h(k, sign=-1) * ((-1) ** k)

    def xi(self, param: str, max_order: int | None = None) -> Poly:
        """The series sum_k t_k * param^k, truncated by the table cutoffs."""
        out = self.zero()
        top = self.depth if max_order is None else min(self.depth, max_order)
        y = Poly.variable(self.table, self.cutoffs, param)
        ypow = self.one()
        for k in range(1, top + 1):
            ypow = ypow * y
            if ypow.is_zero:
                break
            out = out + self.time(k) * ypow
        return out

    def xi_value(self, value: Scalar) -> Poly:
        """sum_k t_k * value^k for a rational spectral point."""
        out = self.zero()
        v = Fraction(value)
        for k in range(1, self.depth + 1):
            out = out + self.time(k) * (v**k)
        return out

    def exp_xi_value(self, value: Scalar) -> Poly:
        return self.xi_value(value).series_exp()

    def miwa_shift(self, p: Poly, sign: int, param: str) -> Poly:
        """Substitute t_k -> t_k +- param^k / k (the one-point Miwa shift)."""
        y = Poly.variable(self.table, self.cutoffs, param)
        mapping: dict[str, Poly] = {}
        ypow = self.one()
        for k in range(1, self.depth + 1):
            ypow = ypow * y
            mapping[self.names[k - 1]] = self.time(k) + ypow * Fraction(sign, k)
        return p.substitute(mapping)

    def miwa_shift_value(self, p: Poly, sign: int, value: Scalar) -> Poly:
        v = Fraction(value)
        mapping = {
            self.names[k - 1]: self.time(k) + Fraction(sign) * v**k / k
            for k in range(1, self.depth + 1)
        }
        return p.substitute(mapping)

    def miwa_times(self, u: Scalar, w: Scalar) -> dict[str, Fraction]:
        """Assignment t_k = u * w^(-k) / k."""
        u, w = Fraction(u), Fraction(w)
        if w == 0:
            raise ZeroDivisionError("Miwa evaluation needs w != 0")
        return {
            self.names[k - 1]: u * w ** (-k) / k for k in range(1, self.depth + 1)
        }

    def shift_by(self, p: Poly, other: "TimeFamily", sign: int) -> Poly:
        """Substitute t_k -> t_k + sign * s_k for a parallel family s."""
        mapping = {
            self.names[k - 1]: self.time(k) + other.time(k) * sign
            for k in range(1, min(self.depth, other.depth) + 1)
        }
        return p.substitute(mapping)

    def apply_diff(self, op: Poly, target: Poly, scaled: bool = True) -> Poly:
        """Interpret `op` (a polynomial in this family's times) as a
        differential operator: t_k becomes d/dt_k, divided by k when
        `scaled` (the tilde-derivative convention)."""
        out = target.zero_like()
        for key, c in op.terms.items():
            piece = target
            coeff = c
            for idx, e in key:
                name = op.table.variables[idx].name
                if name not in self.names:
                    raise ValueError(f"operator touches non-time variable {name}")
                k = self.names.index(name) + 1
                if scaled:
                    coeff *= Fraction(1, k) ** e
                piece = piece.derivative(name, e)
                if piece.is_zero:
                    break
            out = out + piece * coeff
        return out


def hirota_bilinear(
    op_terms: Iterable[tuple[Scalar, Mapping[str, int]]], f: Poly, g: Poly
) -> Poly:
    """Evaluate P(D) f.g: apply P(d/dX) to f(t+X) g(t-X) at X = 0.

    `op_terms` lists (coefficient, {variable name: derivative order}).
    Expanded by the Leibniz rule term by term.
    """
    out = f.zero_like()
    for coeff, orders in op_terms:
        names = [n for n, a in orders.items() if a]
        arities = [orders[n] for n in names]

        def rec(i: int, fp: Poly, gp: Poly, factor: Fraction):
            nonlocal out
            if i == len(names):
                out = out + fp * gp * factor
                return
            n, a = names[i], arities[i]
            for b in range(a + 1):
                fd = fp.derivative(n, b)
                gd = gp.derivative(n, a - b)
                if fd.is_zero or gd.is_zero:
                    continue
                rec(i + 1, fd, gd, factor * comb(a, b) * (-1) ** (a - b))

        rec(0, f, g, Fraction(coeff))
    return out


def poly_matrix_det(rows: list[list[Poly]]) -> Poly:
    """Determinant by column-subset memoized expansion; prunes zero entries.

    Exact over the truncated ring (no division), fast on the banded
    matrices that arise from generator-index determinants.
    """
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    zero = rows[0][0].zero_like()
    one = rows[0][0].one_like()
    memo: dict[frozenset[int], Poly] = {}

    def minor(cols: frozenset[int]) -> Poly:
        if not cols:
            return one
        got = memo.get(cols)
        if got is not None:
            return got
        i = n - len(cols)
        acc = zero
        for pos, j in enumerate(sorted(cols)):
            entry = rows[i][j]
            if entry.is_zero:
                continue
            sub = minor(cols - {j})
            if sub.is_zero:
                continue
            acc = acc + entry * sub * ((-1) ** pos)
        memo[cols] = acc
        return acc

    return minor(frozenset(range(n)))


def fraction_matrix_det(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant of a rational matrix (fraction-free not needed:
    Fraction arithmetic is already exact), by Gaussian elimination."""
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            factor = a[r][col] * inv
            for c in range(col, n):
                a[r][c] -= factor * a[col][c]
    return det


def fraction_matrix_inverse(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact inverse; raises ZeroDivisionError on singular input."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def standard_single_family(
    depth: int,
    extra_unit: Iterable[str] = (),
    extra_gradings: Mapping[str, str] | None = None,
) -> TimeFamily:
    """One time family t1..tD (grading "t", cutoff D) plus optional
    unit-weight parameters; a parameter listed in `extra_gradings` gets its
    own grading (unbounded unless truncated later), others join "t" so that
    total weight counts shift degree."""
    variables = time_variables("t", depth)
    extra_gradings = dict(extra_gradings or {})
    for name in extra_unit:
        variables.append(Variable(name, extra_gradings.get(name, "t"), 1))
    table = VariableTable(variables)
    return TimeFamily(table, {"t": depth}, [f"t{k}" for k in range(1, depth + 1)], "t")


def standard_double_family(
    depth_plus: int,
    depth_minus: int,
    extra_unit_plus: Iterable[str] = (),
    extra_unit_minus: Iterable[str] = (),
) -> tuple[TimeFamily, TimeFamily]:
    """Two independent families: t1.. (grading "tp") and s1.. (grading "tm"),
    each with its own cutoff; optional unit parameters attach to a family."""
    variables = time_variables("tp", depth_plus, prefix="t")
    variables += time_variables("tm", depth_minus, prefix="s")
    for name in extra_unit_plus:
        variables.append(Variable(name, "tp", 1))
    for name in extra_unit_minus:
        variables.append(Variable(name, "tm", 1))
    table = VariableTable(variables)
    cutoffs = {"tp": depth_plus, "tm": depth_minus}
    plus = TimeFamily(table, cutoffs, [f"t{k}" for k in range(1, depth_plus + 1)], "tp")
    minus = TimeFamily(table, cutoffs, [f"s{k}" for k in range(1, depth_minus + 1)], "tm")
    return plus, minus


def paired_family(
    depth: int,
    prefixes: tuple[str, str] = ("t", "a"),
    extra_unit: Iterable[str] = (),
) -> tuple[TimeFamily, TimeFamily]:
    """Two weight-graded families sharing one grading and cutoff (times
    plus an auxiliary shift family), for residue-style checks where the
    cutoff must bound both jointly."""
    variables = time_variables("t", depth, prefix=prefixes[0])
    variables += time_variables("t", depth, prefix=prefixes[1])
    for name in extra_unit:
        variables.append(Variable(name, "t", 1))
    table = VariableTable(variables)
    cutoffs = {"t": depth}
    first = TimeFamily(table, cutoffs, [f"{prefixes[0]}{k}" for k in range(1, depth + 1)], "t")
    second = TimeFamily(table, cutoffs, [f"{prefixes[1]}{k}" for k in range(1, depth + 1)], "t")
    return first, second
