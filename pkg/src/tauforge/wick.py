"""Determinant evaluation of fermionic correlators.

Two evaluation routes coexist and cross-check each other:

* the window route applies operators to finite Fock vectors (exact for
  mode letters and every window-representable element);
* the kernel route evaluates words of mode letters and point-evaluated
  fields against a vacuum through closed-form pair kernels (rational
  functions of the points, differentiated exactly via truncated Taylor
  arithmetic), summed over pairings.

Raising-exponential insertions are handled by conjugation: each letter is
"dressed" with the exponential-series factors, whose coefficients are
truncated polynomials in the times.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from tauforge.fock import (
    Letter,
    ModeWindow,
    apply_letter,
    inner,
    letter,
    vacuum,
)
from tauforge.grouplike import (
    FieldWord,
    Identity,
    LinearWord,
    SolitonExponent,
    _pair_subsets,
    apply_element,
)
from tauforge.polyring import Poly, TimeFamily

# -- truncated bivariate Taylor arithmetic over exact rationals -------------


class Taylor2:
    """Polynomial jet in two infinitesimals, truncated at fixed orders."""

    __slots__ = ("r", "s", "c")

    def __init__(self, r: int, s: int, c: dict[tuple[int, int], Fraction] | None = None):
        self.r = r
        self.s = s
        self.c = {k: v for k, v in (c or {}).items() if v != 0}

    @staticmethod
    def const(r: int, s: int, value: Fraction) -> "Taylor2":
        return Taylor2(r, s, {(0, 0): Fraction(value)})

    @staticmethod
    def eps(r: int, s: int, which: int, base: Fraction) -> "Taylor2":
        """base + eps_which."""
        key = (1, 0) if which == 1 else (0, 1)
        return Taylor2(r, s, {(0, 0): Fraction(base), key: Fraction(1)})

    def __add__(self, other: "Taylor2") -> "Taylor2":
        c = dict(self.c)
        for k, v in other.c.items():
            c[k] = c.get(k, Fraction(0)) + v
        return Taylor2(self.r, self.s, c)

    def __mul__(self, other: "Taylor2") -> "Taylor2":
        c: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), v1 in self.c.items():
            for (a2, b2), v2 in other.c.items():
                a, b = a1 + a2, b1 + b2
                if a > self.r or b > self.s:
                    continue
                c[(a, b)] = c.get((a, b), Fraction(0)) + v1 * v2
        return Taylor2(self.r, self.s, c)

    def scale(self, v: Fraction) -> "Taylor2":
        return Taylor2(self.r, self.s, {k: x * Fraction(v) for k, x in self.c.items()})

    def ipow(self, n: int) -> "Taylor2":
        if n < 0:
            return self.inv().ipow(-n)
        out = Taylor2.const(self.r, self.s, Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    def inv(self) -> "Taylor2":
        c0 = self.c.get((0, 0), Fraction(0))
        if c0 == 0:
            raise ZeroDivisionError("jet has vanishing constant term (pole hit)")
        u = Taylor2(self.r, self.s, {k: -v / c0 for k, v in self.c.items() if k != (0, 0)})
        out = Taylor2.const(self.r, self.s, Fraction(1))
        power = out
        for _ in range(self.r + self.s):
            power = power * u
            if not power.c:
                break
            out = out + power
        return out.scale(1 / c0)

    def coeff(self, a: int, b: int) -> Fraction:
        return self.c.get((a, b), Fraction(0))


def _falling(k: int, m: int) -> int:
    out = 1
    for j in range(m):
        out *= k - j
    return out


def _field_field_kernel(
    n: int, first_kind: str, p: Fraction, r: int, q: Fraction, s: int
) -> Fraction:
    """d^r/dz^r d^s/dzeta^s of the two-point vacuum kernel, with the field
    written first ("psi": z^n zeta^(1-n)/(z - zeta); "psi*": the sign-
    flipped denominator), evaluated at rational points."""
    z = Taylor2.eps(r, s, 1, p)
    zeta = Taylor2.eps(r, s, 2, q)
    num = z.ipow(n) * zeta.ipow(1 - n)
    if first_kind == "psi":
        den = z + zeta.scale(-1)
    else:
        den = zeta + z.scale(-1)
    jet = num * den.inv()
    return jet.coeff(r, s) * factorial(r) * factorial(s)


# -- kernel letters -----------------------------------------------------------

# ("mode", j) or ("field", point, order); terms carry rational or
# polynomial coefficients.
KTerm = tuple[object, str, tuple]
KLetter = tuple[KTerm, ...]


def kmode(kind: str, j: int, coeff=Fraction(1)) -> KTerm:
    return (coeff, kind, ("mode", j))


def kfield(kind: str, point, order: int = 0, coeff=Fraction(1)) -> KTerm:
    return (coeff, kind, ("field", Fraction(point), order))


def from_mode_letter(lt: Letter) -> KLetter:
    return tuple((c, kind, ("mode", j)) for c, kind, j in lt)


def kernel_pair(n: int, a: KTerm, b: KTerm) -> Fraction:
    """Ordered vacuum pair value <n| a b |n> for two single terms
    (coefficients excluded)."""
    _, kind_a, spec_a = a
    _, kind_b, spec_b = b
    if kind_a == kind_b:
        return Fraction(0)
    if spec_a[0] == "mode" and spec_b[0] == "mode":
        i, j = spec_a[1], spec_b[1]
        if i != j:
            return Fraction(0)
        if kind_a == "psi":
            return Fraction(1) if j < n else Fraction(0)
        return Fraction(1) if j >= n else Fraction(0)
    if spec_a[0] == "field" and spec_b[0] == "mode":
        point, order = spec_a[1], spec_a[2]
        j = spec_b[1]
        if kind_a == "psi":  # <n| psi^(r)(p) psi*_j |n>
            return _falling(j, order) * point ** (j - order) if j < n else Fraction(0)
        return _falling(-j, order) * point ** (-j - order) if j >= n else Fraction(0)
    if spec_a[0] == "mode" and spec_b[0] == "field":
        j = spec_a[1]
        point, order = spec_b[1], spec_b[2]
        if kind_a == "psi":  # <n| psi_j psi*^(s)(q) |n>
            return _falling(-j, order) * point ** (-j - order) if j < n else Fraction(0)
        return _falling(j, order) * point ** (j - order) if j >= n else Fraction(0)
    # field-field
    pa, ra = spec_a[1], spec_a[2]
    pb, rb = spec_b[1], spec_b[2]
    if kind_a == "psi":
        return _field_field_kernel(n, "psi", pa, ra, pb, rb)
    return _field_field_kernel(n, "psi*", pb, rb, pa, ra)


def kernel_vev(n: int, letters: Sequence[KLetter]):
    """<n| word |n> by recursive pairing with closed-form pair kernels.

    Coefficients may be polynomials; the pair kernels themselves are
    exact rationals at the given points."""
    letters = [tuple(lt) for lt in letters]
    if len(letters) % 2 == 1:
        return Fraction(0)
    memo: dict[tuple[int, ...], object] = {}

    def pair_value(a: KLetter, b: KLetter):
        total = None
        for ca, kind_a, spec_a in a:
            for cb, kind_b, spec_b in b:
                base = kernel_pair(n, (1, kind_a, spec_a), (1, kind_b, spec_b))
                if base == 0:
                    continue
                term = ca * cb * base
                total = term if total is None else total + term
        return total

    def rec(indices: tuple[int, ...]):
        if not indices:
            return Fraction(1)
        got = memo.get(indices)
        if got is not None:
            return got
        head, rest = indices[0], indices[1:]
        total = None
        for pos, j in enumerate(rest):
            p = pair_value(letters[head], letters[j])
            if p is None:
                continue
            sub = rec(tuple(x for x in rest if x != j))
            if isinstance(sub, Fraction) and sub == 0:
                continue
            term = p * sub * ((-1) ** pos)
            total = term if total is None else total + term
        out = Fraction(0) if total is None else total
        memo[indices] = out
        return out

    return rec(tuple(range(len(letters))))


def vacuum_pad(n_left: int, n_right: int) -> list[KLetter]:
    """Letters P with P |n_left> = |n_right>, appended at the right end so
    a cross-charge expectation becomes a single-vacuum one."""
    if n_right == n_left:
        return []
    if n_right < n_left:
        # |n_right> = psi*_{n_right} psi*_{n_right+1} ... psi*_{n_left-1} |n_left>
        return [(kmode("psi*", j),) for j in range(n_right, n_left)]
    # |n_right> = psi_{n_right-1} ... psi_{n_left} |n_left>
    return [(kmode("psi", j),) for j in range(n_right - 1, n_left - 1, -1)]


def kernel_vev_between(n_left: int, letters: Sequence[KLetter], n_right: int):
    return kernel_vev(n_left, list(letters) + vacuum_pad(n_left, n_right))


# -- dressing by the raising exponential ---------------------------------------


def _exp_xi_jet(family: TimeFamily, point: Fraction, order: int, sign: int) -> list[Poly]:
    """Taylor coefficients (times m!) of exp(+-xi(t, z)) at z = point,
    through derivative `order`: returns [value, d/dz, d^2/dz^2, ...]."""
    point = Fraction(point)
    # xi(t, point + eps) expanded in eps with polynomial coefficients
    coeffs = [family.zero() for _ in range(order + 1)]
    for k in range(1, family.depth + 1):
        tk = family.time(k) * sign
        for m in range(0, min(order, k) + 1):
            coeffs[m] = coeffs[m] + tk * (comb(k, m) * point ** (k - m))
    base = coeffs[0].series_exp()
    # exp(xi0 + sum_{m>=1} c_m eps^m) = base * exp(sum c_m eps^m)
    jets = [base]
    if order == 0:
        return jets
    # expand exp of the eps-part as polynomial in eps up to `order`
    eps_terms: dict[int, Poly] = {m: coeffs[m] for m in range(1, order + 1)}
    series: dict[int, Poly] = {0: family.one()}
    # multiply out exp via the finite sum of products of eps-terms
    for m, cm in eps_terms.items():
        new = dict(series)
        power = family.one()
        e = 0
        fact = 1
        while True:
            e += 1
            fact *= e
            power = power * cm
            if power.is_zero or m * e > order:
                break
            for deg, val in series.items():
                if deg + m * e > order:
                    continue
                add = val * power * Fraction(1, fact)
                new[deg + m * e] = new.get(deg + m * e, family.zero()) + add
        series = new
    for d in range(1, order + 1):
        jets.append(base * series.get(d, family.zero()) * factorial(d))
    return jets


def dress_letter(family: TimeFamily, lt: KLetter) -> KLetter:
    """Conjugate one letter through the raising exponential of `family`:
    fields pick exp(+-xi) factors (with derivative Leibniz terms), modes
    convolve with the generator coefficients."""
    out: list[KTerm] = []
    for coeff, kind, spec in lt:
        if spec[0] == "mode":
            j = spec[1]
            for a in range(0, family.depth + 1):
                h = family.h(a, sign=+1 if kind == "psi" else -1)
                if h.is_zero:
                    continue
                mode = j - a if kind == "psi" else j + a
                out.append((coeff * h, kind, ("mode", mode)))
        else:
            point, order = spec[1], spec[2]
            sign = +1 if kind == "psi" else -1
            jets = _exp_xi_jet(family, point, order, sign)
            for j in range(order + 1):
                factor = jets[order - j] * comb(order, j)
                out.append((coeff * factor, kind, ("field", point, j)))
    return tuple(out)


def dress_word(family: TimeFamily, letters: Iterable[KLetter]) -> list[KLetter]:
    return [dress_letter(family, lt) for lt in letters]


# -- element expansion into kernel words ----------------------------------------


def element_words(g) -> list[tuple[object, list[KLetter]]]:
    """Expand a word-expandable element into (coefficient, letters) pairs."""
    if isinstance(g, Identity):
        return [(Fraction(1), [])]
    if isinstance(g, LinearWord):
        return [(Fraction(1), [from_mode_letter(lt) for lt in g.letters])]
    if isinstance(g, FieldWord):
        return [
            (
                Fraction(1),
                [
                    tuple((c, kind, ("field", Fraction(pt), order)) for c, kind, pt, order in lt)
                    for lt in g.letters
                ],
            )
        ]
    if isinstance(g, SolitonExponent):
        n = len(g.ps)
        entries = [
            ((i, k), g.a_rows[i][k])
            for i in range(n)
            for k in range(n)
            if g.a_rows[i][k] != 0
        ]
        out = []
        for pairs, coeff in _pair_subsets(entries):
            word = [(kfield("psi*", g.qs[i]),) for i, _ in pairs]
            word += [(kfield("psi", g.ps[k]),) for _, k in reversed(pairs)]
            out.append((coeff, word))
        return out
    raise TypeError(f"element {type(g).__name__} has no exact word expansion")


def correlator_exact(
    n_left: int,
    items: Sequence[object],
    n_right: int,
    family: TimeFamily | None = None,
    undressed: Sequence[object] = (),
):
    """<n_left| undressed [raising exp] items |n_right> via kernels.

    Items are word-expandable elements or single KLetters.  When `family`
    is given, `items` are conjugated through its raising exponential
    (which then dies on the right vacuum); `undressed` items sit to the
    left of the exponential and stay raw."""

    def expand(seq):
        out = []
        for item in seq:
            if isinstance(item, tuple):  # a bare KLetter
                out.append([(Fraction(1), [item])])
            else:
                out.append(element_words(item))
        return out

    pre_exp = expand(undressed)
    expansions = pre_exp + expand(items)
    boundary = len(pre_exp)
    total = None

    def rec(i: int, coeff, raw: list[KLetter], dressed: list[KLetter]):
        nonlocal total
        if i == len(expansions):
            word = list(raw)
            word += dress_word(family, dressed) if family is not None else dressed
            term = coeff * kernel_vev_between(n_left, word, n_right)
            total = term if total is None else total + term
            return
        for c, w in expansions[i]:
            if i < boundary:
                rec(i + 1, coeff * c, raw + w, dressed)
            else:
                rec(i + 1, coeff * c, raw, dressed + w)

    rec(0, Fraction(1), [], [])
    return Fraction(0) if total is None else total


# -- window-route correlator ------------------------------------------------------


def correlator_window(
    window: ModeWindow,
    n_left: int,
    items: Sequence[object],
    n_right: int,
):
    """<n_left| items |n_right> by direct application; items are elements
    or ("letter", mode letter) tags."""
    ket = vacuum(window, n_right)
    for item in reversed(list(items)):
        if isinstance(item, tuple) and item and item[0] == "letter":
            ket = apply_letter(item[1], ket)
        else:
            ket = apply_element(item, ket)
    return inner(vacuum(window, n_left, dual=True), ket)


# -- Wick determinant forms ---------------------------------------------------------


def wick_standard(window: ModeWindow, n: int, vs: Sequence[Letter], ws: Sequence[Letter]):
    """<n| v_1..v_m w*_m..w*_1 |n> as the pair-correlator determinant."""
    m = len(vs)
    if len(ws) != m:
        raise ValueError("need equally many starred and unstarred letters")
    from tauforge.fock import pair_vev
    from tauforge.polyring import fraction_matrix_det

    mat = [[pair_vev(n, vs[i], ws[j]) for j in range(m)] for i in range(m)]
    return fraction_matrix_det(mat)


def _det_generic(entries: list[list[object]]):
    """Determinant over a commutative ring via Laplace expansion with
    column-subset memoization (entries may be polynomials)."""
    n = len(entries)
    if n == 0:
        return Fraction(1)
    if isinstance(entries[0][0], Poly):
        from tauforge.polyring import poly_matrix_det

        return poly_matrix_det(entries)
    from tauforge.polyring import fraction_matrix_det

    return fraction_matrix_det([[Fraction(x) for x in row] for row in entries])


def wick_generalized(
    evaluate,
    n: int,
    vs: Sequence[object],
    ws: Sequence[object],
    charges: tuple[int, int, int] = (0, 0, 0),
):
    """The ratio-determinant form of the generalized pairing theorem.

    `evaluate(pre, mid, post...)` -- concretely: evaluate(inserts) returns
    the correlator <n| G' .inserts_v. G'' .inserts_w. G |n - total charge>
    for the supplied per-slot insertions; this function only arranges the
    determinant.  `vs` and `ws` are whatever the evaluator accepts.
    """
    m = len(vs)
    if m == 0:
        raise ValueError("need at least one insertion pair")
    central = evaluate(None, None)
    if isinstance(central, Fraction) and central == 0:
        raise ZeroDivisionError("central correlator vanishes")
    entries = [
        [evaluate(vs[j], ws[i]) for j in range(m)] for i in range(m)
    ]
    det = _det_generic(entries)
    # normalize: det of (entry/central) = det / central^m
    if isinstance(det, Poly) or isinstance(central, Poly):
        inv = central.series_inverse() if isinstance(central, Poly) else 1 / central
        out = det
        for _ in range(m - 1):
            out = out * inv
        return out
    return det / central ** (m - 1)


def three_term_column_identity(window: ModeWindow, g, n: int, l: int, w: Letter) -> bool:
    """The stepped-denominator column identity used to trade insertion
    determinants for charge-shifted central values:

    <n|g|n><n+1|psi_l w g|n+1> = <n+1|g|n+1><n|psi_l w g|n>
                                 + <n+1|psi_l g|n><n|w g|n+1>.
    """

    def corr(nl, pre, nr):
        return correlator_window(window, nl, pre + [g], nr)

    lhs = corr(n, [], n) * corr(
        n + 1, [("letter", letter("psi", l)), ("letter", w)], n + 1
    )
    rhs = corr(n + 1, [], n + 1) * corr(
        n, [("letter", letter("psi", l)), ("letter", w)], n
    ) + corr(n + 1, [("letter", letter("psi", l))], n) * corr(n, [("letter", w)], n + 1)
    return lhs == rhs


def vacuum_kernel(
    n: int,
    zs: Sequence[Fraction],
    zetas: Sequence[Fraction],
    arrangement: str,
):
    """Closed-form multi-point vacuum kernels at rational points.

    arrangement:
      "stars_first":  <n| psi*(zeta_1)..psi*(zeta_m) psi(z_m)..psi(z_1) |n>
      "fields_first": <n| psi(z_1)..psi(z_m) psi*(zeta_m)..psi*(zeta_1) |n>
      "charged_psi":  <n+m| psi(z_1)..psi(z_m) |n>   (zetas empty)
      "charged_star": <n-m| psi*(zeta_1)..psi*(zeta_m) |n>  (zs empty)
      "mixed_charged": <n+l| psi*(zeta_{m-l})..psi*(zeta_1) psi(z_1)..psi(z_m) |n>
    """
    zs = [Fraction(z) for z in zs]
    zetas = [Fraction(z) for z in zetas]

    def vander(points):
        out = Fraction(1)
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                out *= points[i] - points[j]
        return out

    if arrangement in ("stars_first", "fields_first"):
        m = len(zs)
        assert len(zetas) == m
        num = vander(zs) * vander(list(reversed(zetas)))
        den = Fraction(1)
        for zet in zetas:
            for z in zs:
                den *= (zet - z) if arrangement == "stars_first" else (z - zet)
        out = num / den
        for z, zet in zip(zs, zetas):
            out *= z**n * zet ** (1 - n)
        return out
    if arrangement == "charged_psi":
        out = vander(zs)
        for z in zs:
            out *= z**n
        return out
    if arrangement == "charged_star":
        out = vander(zetas)
        for z in zetas:
            out *= z ** (1 - n)
        return out
    if arrangement == "mixed_charged":
        m = len(zs)
        ml = len(zetas)
        num = vander(zs) * vander(list(reversed(zetas)))
        den = Fraction(1)
        for zet in zetas:
            for z in zs:
                den *= zet - z
        out = num / den
        for z in zs:
            out *= z**n
        for zet in zetas:
            out *= zet ** (1 - n)
        return out
    raise ValueError(f"unknown arrangement {arrangement!r}")


def wick_column_forms(
    window: ModeWindow,
    g,
    n: int,
    inserts: Sequence[Letter],
    side: str,
) -> dict:
    """Evaluate one charged expectation three ways.

    side "holes":      <n-m| w*_m..w*_1 g |n>
      insertion form:  det <n| psi_{n-j} w*_i g |n>  / central^(m-1)
      stepped form:    central * det[ <n-j| w*_i g |n-j+1> / <n-j+1|g|n-j+1> ]
    side "particles":  <n+m| v_m..v_1 g |n>, mirrored.
    side "right_particles": <n| g v_1..v_m |n-m>, right-insertion twin.
    side "right_holes":     <n| g w*_1..w*_m |n+m>.

    Returns {"direct", "insertion", "stepped"}; "insertion" is None for the
    right-side twins, which only come in the stepped form.
    """
    m = len(inserts)

    def corr(nl, pre, nr, post=()):
        items = [("letter", lt) for lt in pre] + [g] + [("letter", lt) for lt in post]
        return correlator_window(window, nl, items, nr)

    central = corr(n, [], n)
    if central == 0:
        raise ZeroDivisionError("central correlator vanishes")
    if side == "holes":
        direct = corr(n - m, list(reversed(inserts)), n)
        ins = [
            [corr(n, [letter("psi", n - j), inserts[i - 1]], n) for j in range(1, m + 1)]
            for i in range(1, m + 1)
        ]
        insertion = _det_generic(ins) / central ** (m - 1)
        stepped = [
            [
                corr(n - j, [inserts[i - 1]], n - j + 1) / corr(n - j + 1, [], n - j + 1)
                for j in range(1, m + 1)
            ]
            for i in range(1, m + 1)
        ]
        return {
            "direct": direct,
            "insertion": insertion,
            "stepped": central * _det_generic(stepped),
        }
    if side == "particles":
        direct = corr(n + m, list(reversed(inserts)), n)
        ins = [
            [
                corr(n, [letter("psi*", n + j - 1), inserts[i - 1]], n)
                for j in range(1, m + 1)
            ]
            for i in range(1, m + 1)
        ]
        insertion = _det_generic(ins) / central ** (m - 1)
        stepped = [
            [
                corr(n + j, [inserts[i - 1]], n + j - 1) / corr(n + j - 1, [], n + j - 1)
                for j in range(1, m + 1)
            ]
            for i in range(1, m + 1)
        ]
        return {
            "direct": direct,
            "insertion": insertion,
            "stepped": central * _det_generic(stepped),
        }
    if side == "right_particles":
        direct = corr(n, [], n - m, post=list(inserts))
        stepped = [
            [
                corr(n - j + 1, [], n - j, post=[inserts[i - 1]])
                / corr(n - j + 1, [], n - j + 1)
                for j in range(1, m + 1)
            ]
            for i in range(1, m + 1)
        ]
        return {
            "direct": direct,
            "insertion": None,
            "stepped": central * _det_generic(stepped),
        }
    if side == "right_holes":
        direct = corr(n, [], n + m, post=list(inserts))
        stepped = [
            [
                corr(n + j - 1, [], n + j, post=[inserts[i - 1]])
                / corr(n + j - 1, [], n + j - 1)
                for j in range(1, m + 1)
            ]
            for i in range(1, m + 1)
        ]
        return {
            "direct": direct,
            "insertion": None,
            "stepped": central * _det_generic(stepped),
        }
    raise ValueError(f"unknown side {side!r}")
