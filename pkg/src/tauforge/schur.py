"""Schur and skew Schur functions in graded time variables.

Four construction routes are provided and cross-checked: the generator
determinant over complete homogeneous terms, its dual over elementary
terms, the hook alternating sums, and the hook determinant over the
Frobenius square.  Specializations (content product over hook product)
come from the Miwa evaluation t_k = u w^{-k} / k.
"""

from __future__ import annotations

from fractions import Fraction

from tauforge.partitions import (
    Partition,
    enumerate_partitions,
    pochhammer_content,
)
from tauforge.polyring import Poly, TimeFamily, poly_matrix_det

_schur_cache: dict[tuple, Poly] = {}


def _family_key(family: TimeFamily) -> tuple:
    return (family.table, tuple(family.names), tuple(sorted(family.cutoffs.items())))


def schur_jt(family: TimeFamily, shape: Partition) -> Poly:
    """det h_{row_i - i + j}, size = number of rows; 1 on the empty shape."""
    key = ("jt", _family_key(family), shape)
    got = _schur_cache.get(key)
    if got is not None:
        return got
    ell = shape.length
    if ell == 0:
        out = family.one()
    else:
        rows = [
            [family.h(shape.part(i) - i + j) for j in range(1, ell + 1)]
            for i in range(1, ell + 1)
        ]
        out = poly_matrix_det(rows)
    _schur_cache[key] = out
    return out


def schur_dual_jt(family: TimeFamily, shape: Partition) -> Poly:
    """det e_{col_i - i + j}, size = number of columns."""
    width = shape.part(1)
    if width == 0:
        return family.one()
    t = shape.transpose()
    rows = [
        [schur_elementary(family, t.part(i) - i + j) for j in range(1, width + 1)]
        for i in range(1, width + 1)
    ]
    return poly_matrix_det(rows)


def schur_elementary(family: TimeFamily, k: int) -> Poly:
    return family.zero() if k < 0 else family.e(k)


def hook_schur(family: TimeFamily, alpha: int, beta: int) -> Poly:
    """Schur function of the hook (alpha|beta) via the alternating sum
    (-1)^beta sum_m h_{beta-m}(-t) h_{alpha+m+1}(t)."""
    acc = family.zero()
    for m in range(beta + 1):
        acc = acc + family.h(beta - m, sign=-1) * family.h(alpha + m + 1)
    return acc * ((-1) ** beta)


def hook_schur_alt(family: TimeFamily, alpha: int, beta: int) -> Poly:
    """The companion alternating sum (-1)^(beta+1) sum_m h_{alpha-m}(t) h_{beta+m+1}(-t)."""
    acc = family.zero()
    for m in range(alpha + 1):
        acc = acc + family.h(alpha - m) * family.h(beta + m + 1, sign=-1)
    return acc * ((-1) ** (beta + 1))


def schur_giambelli(family: TimeFamily, shape: Partition) -> Poly:
    """det of hook Schur functions over the Frobenius square."""
    alphas, betas = shape.frobenius()
    d = len(alphas)
    if d == 0:
        return family.one()
    rows = [[hook_schur(family, alphas[i], betas[j]) for j in range(d)] for i in range(d)]
    return poly_matrix_det(rows)


def skew_schur(family: TimeFamily, outer: Partition, inner: Partition) -> Poly:
    """det h_{outer_i - inner_j - i + j} over the rows of the outer shape;
    identically zero unless the inner shape sits inside the outer one."""
    key = ("skew", _family_key(family), outer, inner)
    got = _schur_cache.get(key)
    if got is not None:
        return got
    ell = max(outer.length, inner.length)
    if ell == 0:
        out = family.one()
    else:
        rows = [
            [
                family.h(outer.part(i) - inner.part(j) - i + j)
                for j in range(1, ell + 1)
            ]
            for i in range(1, ell + 1)
        ]
        out = poly_matrix_det(rows)
    _schur_cache[key] = out
    return out


def skew_via_derivatives(family: TimeFamily, outer: Partition, inner: Partition) -> Poly:
    """Skew function as the inner shape's scaled-derivative operator applied
    to the outer Schur function."""
    op = schur_jt(family, inner)
    return family.apply_diff(op, schur_jt(family, outer))


def schur_content_eval(shape: Partition, u: Fraction | int, w: Fraction | int) -> Fraction:
    """Closed-form Miwa specialization: w^(-weight) * content product / hook product."""
    u, w = Fraction(u), Fraction(w)
    if w == 0:
        raise ZeroDivisionError("w must be nonzero")
    return w ** (-shape.weight) * pochhammer_content(u, shape) / shape.hook_product()


def schur_content_eval_frobenius(
    shape: Partition, u: Fraction | int, w: Fraction | int
) -> Fraction:
    """Same value assembled hook-by-hook with the Cauchy determinant kernel;
    exercises the Frobenius closed form."""
    u, w = Fraction(u), Fraction(w)
    alphas, betas = shape.frobenius()
    d = len(alphas)
    if d == 0:
        return Fraction(1)
    from math import factorial

    from tauforge.partitions import pochhammer
    from tauforge.polyring import fraction_matrix_det

    pref = Fraction(1)
    for a, b in zip(alphas, betas):
        pref *= (
            Fraction((-1) ** b)
            * pochhammer(u, a + 1)
            * pochhammer(1 - u, b)
            / (factorial(a) * factorial(b))
        )
    kernel = [
        [Fraction(1, alphas[i] + betas[j] + 1) for j in range(d)] for i in range(d)
    ]
    return pref * fraction_matrix_det(kernel) * w ** (-shape.weight)


def cauchy_littlewood_check(depth: int) -> int:
    """Compare sum_shapes s(t) s(t') with exp(sum k t_k t'_k) through total
    biweight `depth`; returns the verified biweight, raises on mismatch."""
    from tauforge.polyring import standard_double_family

    plus, other = standard_double_family(depth, depth)
    lhs = plus.zero()
    for shape in enumerate_partitions(depth):
        lhs = lhs + schur_jt(plus, shape) * _schur_second(other, shape)
    quad = plus.zero()
    for k in range(1, depth + 1):
        quad = quad + plus.time(k) * other.time(k) * k
    rhs = quad.series_exp()
    if lhs != rhs:
        raise AssertionError("Cauchy-Littlewood mismatch")
    return depth


def _schur_second(family: TimeFamily, shape: Partition) -> Poly:
    return schur_jt(family, shape)


def schur_orthonormality(family: TimeFamily, left: Partition, right: Partition) -> Fraction:
    """Constant term of s_left(scaled derivatives) applied to s_right."""
    applied = family.apply_diff(schur_jt(family, left), schur_jt(family, right))
    return applied.constant_term()
