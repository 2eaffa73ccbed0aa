"""Tau-series as Schur expansions with determinant coefficient identities.

A tau-series is built from a group-like element: each coefficient is the
signed pairing of a basis bra against the element applied to the (charge
shifted, for charged elements) vacuum.  Window-representable elements are
evaluated by direct application; point-field elements go through the
exact kernel route.  The coefficients satisfy the hook-determinant,
row/column-determinant (with stepped charges) and exchange identities,
all implemented here as checkable predicates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from tauforge.fock import (
    FockVector,
    ModeWindow,
    apply_current_exp,
    basis_vector,
    inner,
    vacuum,
    window_for,
)
from tauforge.grouplike import (
    FieldWord,
    Product,
    ProjectorElement,
    SolitonExponent,
    apply_element,
    charge_of,
)
from tauforge.partitions import Partition, enumerate_partitions, from_frobenius, hook_shape
from tauforge.polyring import Poly, TimeFamily
from tauforge.schur import schur_jt
from tauforge.wick import correlator_exact, kmode

# -- plumbing -----------------------------------------------------------------


def is_field_based(g) -> bool:
    if isinstance(g, (FieldWord, SolitonExponent)):
        return True
    if isinstance(g, Product):
        return any(is_field_based(f) for f in g.factors)
    return False


def mode_support(g) -> list[int]:
    """Window modes an element touches (empty for field-based parts)."""
    from tauforge.grouplike import (
        Diagonal,
        DiagonalFlow,
        ExponentBilinear,
        Identity,
        LinearWord,
        NormalOrderedBilinear,
        StateProjector,
    )

    if isinstance(g, ExponentBilinear):
        return g.b.modes()
    if isinstance(g, NormalOrderedBilinear):
        return g.mat.modes()
    if isinstance(g, LinearWord):
        return [k for lt in g.letters for _, _, k in lt]
    if isinstance(g, Diagonal):
        return [j for j, _ in g.mults]
    if isinstance(g, Product):
        return [m for f in g.factors for m in mode_support(f)]
    if isinstance(g, StateProjector):
        return []
    if isinstance(g, (Identity, DiagonalFlow, ProjectorElement)):
        return []
    return []


def window_for_element(g, charges, depth: int, margin: int = 2) -> ModeWindow:
    marks = list(charges) + mode_support(g)
    return window_for(marks, depth, margin)


_coeff_cache: dict = {}


def bra_letters(shape: Partition, n: int) -> list:
    """Kernel letters of the basis bra: starred arms then leg fillers."""
    alphas, betas = shape.frobenius()
    out = [(kmode("psi*", n + a),) for a in alphas]
    out += [(kmode("psi", n - b - 1),) for b in reversed(betas)]
    return out


def ket_letters(shape: Partition, n: int) -> list:
    """Kernel letters building the basis ket from its vacuum."""
    alphas, betas = shape.frobenius()
    out = [(kmode("psi*", n - b - 1),) for b in betas]
    out += [(kmode("psi", n + a),) for a in reversed(alphas)]
    return out


def pluecker_coefficient(g, shape: Partition, n: int, window: ModeWindow | None = None):
    """Signed expansion coefficient of the element's state over the basis:
    (-1)^(sign exponent) <shape, n| g |n - charge>."""
    key = None
    try:
        key = (g, shape, n)
        got = _coeff_cache.get(key)
        if got is not None:
            return got
    except TypeError:
        key = None
    q = charge_of(g)
    sign = (-1) ** shape.sign_exponent()
    if is_field_based(g):
        val = correlator_exact(n, bra_letters(shape, n) + [g], n - q)
    else:
        window = window or window_for_element(g, (n, n - q), shape.weight + 1)
        bra = basis_vector(window, n, shape, dual=True)
        val = inner(bra, apply_element(g, vacuum(window, n - q)))
    out = val * sign
    if key is not None:
        _coeff_cache[key] = out
    return out


# -- series -------------------------------------------------------------------


@dataclass
class TauSeries:
    kind: str  # "KP" | "MKP" | "2DTL"
    charge: int
    poly: Poly
    coefficients: Mapping
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        terms = []
        for key in sorted(self.coefficients, key=_coeff_sort_key):
            c = self.coefficients[key]
            entry = {"coeff": c.to_json() if isinstance(c, Poly) else str(c)}
            if isinstance(key, tuple) and isinstance(key[0], Partition):
                entry["partition"] = key[0].to_json()
                entry["second_partition"] = key[1].to_json()
            else:
                entry["partition"] = key.to_json()
            terms.append(entry)
        return {
            "kind": self.kind,
            "charge": self.charge,
            "cutoff": self.provenance.get("depth"),
            "terms": terms,
        }


def _coeff_sort_key(key):
    if isinstance(key, tuple) and isinstance(key[0], Partition):
        return (
            key[0].weight + key[1].weight,
            tuple(-x for x in key[0].parts),
            tuple(-x for x in key[1].parts),
        )
    return (key.weight, tuple(-x for x in key.parts), ())


def expand_mkp(
    g,
    n: int,
    family: TimeFamily,
    depth: int,
    window: ModeWindow | None = None,
) -> TauSeries:
    """tau_n as the Schur expansion with signed bra coefficients."""
    window = window or window_for_element(g, (n, n - charge_of(g)), depth)
    coeffs = {}
    poly = family.zero()
    for lam in enumerate_partitions(depth):
        c = pluecker_coefficient(g, lam, n, window)
        if isinstance(c, Fraction) and c == 0:
            continue
        if isinstance(c, Poly) and c.is_zero:
            continue
        coeffs[lam] = c
        poly = poly + schur_jt(family, lam) * c
    return TauSeries(
        "MKP", n, poly, coeffs, {"depth": depth, "element": repr(g)}
    )


def expand_mkp_direct(
    g,
    n: int,
    family: TimeFamily,
    depth: int,
    window: ModeWindow | None = None,
) -> Poly:
    """Second route: apply the raising exponential as an operator to the
    element's state and read off the vacuum component (the kernel route
    with dressing for point-field elements)."""
    q = charge_of(g)
    if is_field_based(g):
        return correlator_exact(n, [g], n - q, family=family)
    window = window or window_for_element(g, (n, n - q), depth)
    ket = apply_element(g, vacuum(window, n - q))
    ket = FockVector(
        window,
        {s: c for s, c in ket.states.items() if s[0] == n and sum(s[1]) <= depth},
    )
    raised = apply_current_exp("raise", family, ket, depth)
    out = raised.component(n, Partition([]))
    if isinstance(out, Fraction):
        return family.constant(out)
    return out


def expand_2dtl(
    g,
    n: int,
    family_plus: TimeFamily,
    family_minus: TimeFamily,
    depth: int,
    window: ModeWindow | None = None,
) -> TauSeries:
    """Double Schur expansion; the second family enters through the
    inverse-lowering exponential, so its functions appear at negated
    times (realized via the transpose sign rule)."""
    q = charge_of(g)
    window = window or window_for_element(g, (n, n - q), depth)
    shapes = enumerate_partitions(depth)
    field_route = is_field_based(g)
    coeffs = {}
    poly = None
    for mu in shapes:
        ket = None
        if not field_route:
            ket = apply_element(g, basis_vector(window, n - q, mu))
        for lam in shapes:
            sign = (-1) ** (lam.sign_exponent() + mu.sign_exponent())
            if field_route:
                val = correlator_exact(
                    n, bra_letters(lam, n) + [g] + ket_letters(mu, n - q), n - q
                )
            else:
                val = ket.component(n, lam)
            if isinstance(val, Fraction):
                if val == 0:
                    continue
            elif val.is_zero:
                continue
            c = val * sign
            coeffs[(lam, mu)] = c
            term = (
                schur_jt(family_plus, lam)
                * _schur_neg(family_minus, mu)
                * c
            )
            poly = term if poly is None else poly + term
    if poly is None:
        poly = family_plus.zero()
    return TauSeries("2DTL", n, poly, coeffs, {"depth": depth, "element": repr(g)})


def _schur_neg(family: TimeFamily, shape: Partition) -> Poly:
    """Schur function at negated times: transpose with the weight sign."""
    return schur_jt(family, shape.transpose()) * ((-1) ** shape.weight)


# -- coefficient identities ------------------------------------------------------


def _invert(value):
    if isinstance(value, Poly):
        return value.series_inverse()
    if value == 0:
        raise ZeroDivisionError
    return 1 / value


def _det(entries):
    from tauforge.wick import _det_generic

    return _det_generic(entries)


def giambelli_coeff_check(g, n: int, shape: Partition, window: ModeWindow | None = None):
    """Coefficient of a shape = hook-coefficient determinant divided by
    the central value to the power (diagonal size - 1).  Returns True,
    False, or None when the central coefficient vanishes."""
    window = window or window_for_element(g, (n, n - charge_of(g)), shape.weight + 1)
    central = pluecker_coefficient(g, Partition([]), n, window)
    if _is_zero_scalar(central):
        return None
    alphas, betas = shape.frobenius()
    d = len(alphas)
    entries = [
        [
            pluecker_coefficient(g, hook_shape(alphas[i], betas[j]), n, window)
            for j in range(d)
        ]
        for i in range(d)
    ]
    det = _det(entries)
    lhs = pluecker_coefficient(g, shape, n, window)
    inv = _invert(central)
    rhs = det
    for _ in range(d - 1):
        rhs = rhs * inv
    return lhs == rhs


def _is_zero_scalar(x) -> bool:
    return x.is_zero if isinstance(x, Poly) else x == 0


def _row_coefficient(g, s: int, n: int, window):
    """One-row coefficient with the empty-shape and negative-index
    conventions of the stepped determinants."""
    if s < 0:
        return Fraction(0)
    if s == 0:
        return pluecker_coefficient(g, Partition([]), n, window)
    return pluecker_coefficient(g, Partition([s]), n, window)


def _col_coefficient(g, a: int, n: int, window):
    if a < 0:
        return Fraction(0)
    if a == 0:
        return pluecker_coefficient(g, Partition([]), n, window)
    return pluecker_coefficient(g, Partition([1] * a), n, window)


def quantum_jt_check(
    g, n: int, shape: Partition, orientation: str, window: ModeWindow | None = None
):
    """Stepped-charge determinant identities for the coefficients.

    orientation "rows":   det over one-row coefficients at charges n-j+1;
    orientation "columns": det over one-column coefficients at n+j-1.
    Returns None when a prefactor central value vanishes.
    """
    span = shape.weight + 1
    window = window or window_for_element(
        g, (n - span, n + span, n - charge_of(g)), span
    )
    lhs = pluecker_coefficient(g, shape, n, window)
    if orientation == "rows":
        ell = shape.length
        if ell == 0:
            return True
        pref = Fraction(1)
        for k in range(1, ell):
            c0 = pluecker_coefficient(g, Partition([]), n - k, window)
            if _is_zero_scalar(c0):
                return None
            pref = pref * c0
        entries = [
            [
                _row_coefficient(g, shape.part(i) - i + j, n - j + 1, window)
                for j in range(1, ell + 1)
            ]
            for i in range(1, ell + 1)
        ]
        return lhs * pref == _det(entries)
    if orientation == "columns":
        width = shape.part(1)
        if width == 0:
            return True
        t = shape.transpose()
        pref = Fraction(1)
        for k in range(1, width):
            c0 = pluecker_coefficient(g, Partition([]), n + k, window)
            if _is_zero_scalar(c0):
                return None
            pref = pref * c0
        entries = [
            [
                _col_coefficient(g, t.part(i) - i + j, n + j - 1, window)
                for j in range(1, width + 1)
            ]
            for i in range(1, width + 1)
        ]
        return lhs * pref == _det(entries)
    raise ValueError(f"unknown orientation {orientation!r}")


def pluecker_check(
    g,
    n: int,
    alphas: tuple[int, ...],
    betas: tuple[int, ...],
    r: int,
    s: int,
    window: ModeWindow | None = None,
):
    """Exchange identity among coefficients with deleted Frobenius entries
    (indices r, s are 1-based positions to strike)."""
    d = len(alphas)
    if not (1 <= r < s <= d):
        raise ValueError("need 1 <= r < s <= diagonal size")
    shape = from_frobenius(alphas, betas)
    window = window or window_for_element(g, (n, n - charge_of(g)), shape.weight + 1)

    def drop(seq, *positions):
        return tuple(x for i, x in enumerate(seq, start=1) if i not in positions)

    def c(al, be):
        return pluecker_coefficient(g, from_frobenius(al, be), n, window)

    lhs = c(alphas, betas) * c(drop(alphas, r, s), drop(betas, r, s))
    rhs = c(drop(alphas, r), drop(betas, r)) * c(drop(alphas, s), drop(betas, s)) - c(
        drop(alphas, r), drop(betas, s)
    ) * c(drop(alphas, s), drop(betas, r))
    return lhs == rhs


def rectangular_three_term_check(
    g, n: int, s: int, a: int, window: ModeWindow | None = None
):
    """The rectangle exchange relation linking adjacent charges."""
    window = window or window_for_element(g, (n - 1, n + 1, n - charge_of(g)), s * a + s + a + 2)

    def rect(width, height, charge):
        if width < 0 or height < 0:
            return Fraction(0)
        shape = Partition([width] * height)
        return pluecker_coefficient(g, shape, charge, window)

    lhs = rect(s, a, n) * rect(s, a, n + 1) - rect(s + 1, a, n) * rect(s - 1, a, n + 1)
    rhs = rect(s, a - 1, n) * rect(s, a + 1, n + 1)
    return lhs == rhs


# -- restriction -------------------------------------------------------------------


def restrict_element(g, rows: int) -> Product:
    """Insert the row-bound projector in front of the element: the series
    keeps only shapes with at most rows + charge rows."""
    return Product((ProjectorElement("plus", -rows), g))


def restricted_series(
    g, rows: int, n: int, family: TimeFamily, depth: int, window: ModeWindow | None = None
) -> TauSeries:
    return expand_mkp(restrict_element(g, rows), n, family, depth, window)
