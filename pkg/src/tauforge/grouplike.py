"""Group-like operators: solutions of the basic bilinear exchange condition.

Variants: exponentials of window-nilpotent bilinears, normally ordered
bilinear exponents (bare or vacuum ordering), finite linear words in the
mode operators, point-field words and soliton exponents (window-truncated
when applied directly; their exact correlators go through the kernel
route in `wick`), diagonal multipliers, projectors, and products.

Every constructor's output is checkable: `bbc_check` verifies the
exchange identity on sampled matrix elements and `charge_of` verifies
definite charge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from tauforge.fock import (
    FockVector,
    Letter,
    ModeWindow,
    apply_diagonal_exp,
    apply_diagonal_multipliers,
    apply_mode,
    apply_normal_ordered_word,
    apply_word,
    basis_vector,
    inner,
    letter,
    outer_project,
    project,
    vacuum,
)
from tauforge.partitions import Partition
from tauforge.polyring import fraction_matrix_det, fraction_matrix_inverse


class ModeMatrix:
    """Sparse rational matrix indexed by (row mode, col mode)."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[tuple[int, int], Fraction]):
        self.entries = {
            (i, k): Fraction(c) for (i, k), c in entries.items() if c != 0
        }

    def get(self, i: int, k: int) -> Fraction:
        return self.entries.get((i, k), Fraction(0))

    def modes(self) -> list[int]:
        ms = set()
        for i, k in self.entries:
            ms.add(i)
            ms.add(k)
        return sorted(ms)

    def items(self):
        return sorted(self.entries.items())

    def key(self) -> tuple:
        return tuple(sorted(self.entries.items()))

    def is_nilpotent(self) -> bool:
        modes = self.modes()
        if not modes:
            return True
        dense = [[self.get(i, k) for k in modes] for i in modes]
        power = dense
        for _ in range(len(modes)):
            if all(all(x == 0 for x in row) for row in power):
                return True
            power = _matmul(power, dense)
        return all(all(x == 0 for x in row) for row in power)

    def __eq__(self, other):
        return isinstance(other, ModeMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"ModeMatrix({self.entries})"


def _matmul(a, b):
    n = len(a)
    return [
        [sum((a[i][j] * b[j][k] for j in range(n)), Fraction(0)) for k in range(n)]
        for i in range(n)
    ]


def _mat_exp_nilpotent(dense):
    n = len(dense)
    out = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    term = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for step in range(1, n + 2):
        term = _matmul(term, dense)
        term = [[x / step for x in row] for row in term]
        if all(all(x == 0 for x in row) for row in term):
            return out
        out = [[out[i][j] + term[i][j] for j in range(n)] for i in range(n)]
    raise ValueError("matrix exponent did not terminate; exponent not nilpotent")


# -- element variants ----------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class ExponentBilinear:
    """Exponential of the bilinear that empties mode i and fills mode k
    with amplitude b[i,k].  The matrix must be nilpotent so the
    exponential stays rational; diagonal flows go through `Diagonal`."""

    b: ModeMatrix

    def __post_init__(self):
        if not self.b.is_nilpotent():
            raise ValueError(
                "exponent matrix must be nilpotent; use Diagonal for diagonal flows"
            )


@dataclass(frozen=True)
class NormalOrderedBilinear:
    """Normally ordered exponential of a bilinear: creation parts left.

    `ordering` is None for the bare ordering (every starred operator is
    creation) or an integer vacuum charge."""

    mat: ModeMatrix
    ordering: int | None = None


@dataclass(frozen=True)
class LinearWord:
    """A finite product of linear combinations of mode operators."""

    letters: tuple[Letter, ...]


@dataclass(frozen=True)
class Diagonal:
    """Diagonal multipliers m_j at listed modes (1 elsewhere).

    ordered=True means the vacuum-0 normally ordered convention (occupied
    non-negative modes collect m_j, empty negative modes collect 1/m_j);
    ordered=False means the plain product over the listed modes only
    (finite support, each occupied listed mode collects m_j).
    """

    mults: tuple[tuple[int, Fraction], ...]
    ordered: bool = True

    def mult(self, j: int) -> Fraction:
        for mode, m in self.mults:
            if mode == j:
                return m
        return Fraction(1)


@dataclass(frozen=True)
class DiagonalFlow:
    """exp of the vacuum-0 ordered diagonal bilinear with polynomial mode
    weights; `base` is the exact rational standing for e of one flow unit."""

    p_coeffs: tuple[Fraction, ...]
    base: Fraction


@dataclass(frozen=True)
class ProjectorElement:
    kind: str  # "plus" | "minus" | "plus_state" | "minus_state"
    n: int = 0
    shape: Partition | None = None


@dataclass(frozen=True)
class StateProjector:
    ket_n: int
    ket_shape: Partition
    bra_n: int
    bra_shape: Partition


FieldTerm = tuple[Fraction, str, Fraction, int]  # (coeff, kind, point, d/dz order)


@dataclass(frozen=True)
class FieldWord:
    """Product of linear combinations of point-evaluated fermion fields
    (with derivative orders).  Direct application truncates each field to
    the window; exact correlators use the kernel route."""

    letters: tuple[tuple[FieldTerm, ...], ...]


@dataclass(frozen=True)
class SolitonExponent:
    """Bare-ordered exponential of sum A[i,k] psi*(q_i) psi(p_k)."""

    a_rows: tuple[tuple[Fraction, ...], ...]
    ps: tuple[Fraction, ...]
    qs: tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.a_rows)
        if any(len(r) != n for r in self.a_rows) or len(self.ps) != n or len(self.qs) != n:
            raise ValueError("square coupling matrix and matching point lists required")
        pts = list(self.ps) + list(self.qs)
        if len(set(pts)) != len(pts):
            raise ValueError("soliton points must be pairwise distinct")


@dataclass(frozen=True)
class Product:
    factors: tuple[object, ...]


GroupLike = (
    Identity
    | ExponentBilinear
    | NormalOrderedBilinear
    | LinearWord
    | Diagonal
    | DiagonalFlow
    | ProjectorElement
    | StateProjector
    | FieldWord
    | SolitonExponent
    | Product
)


# -- application -----------------------------------------------------------------


def _falling(k: int, m: int) -> int:
    out = 1
    for j in range(m):
        out *= k - j
    return out


def field_letter_to_window(term_list: Iterable[FieldTerm], window: ModeWindow) -> Letter:
    """Truncate point-field combinations to the window's modes."""
    parts = []
    for coeff, kind, point, order in term_list:
        point = Fraction(point)
        for k in range(window.lo, window.hi):
            if kind == "psi":
                c = _falling(k, order) * point ** (k - order)
            else:
                c = _falling(-k, order) * point ** (-k - order)
            if c != 0:
                parts.append((Fraction(coeff) * c, kind, k))
    return tuple(parts)


def _apply_bilinear_once(mat: ModeMatrix, v: FockVector) -> FockVector:
    out = FockVector(v.window, {}, v.dual)
    for (i, k), c in mat.entries.items():
        out = out + apply_word([letter("psi*", i), letter("psi", k)], v).scale(c)
    return out


def _pair_subsets(entries: list[tuple[tuple[int, int], Fraction]]):
    """All subsets of matrix entries with pairwise distinct rows and
    pairwise distinct columns, yielded as (pairs, coefficient)."""

    def rec(idx: int, chosen, rows, cols, coeff):
        yield chosen, coeff
        for j in range(idx, len(entries)):
            (i, k), c = entries[j]
            if i in rows or k in cols:
                continue
            yield from rec(j + 1, chosen + [(i, k)], rows | {i}, cols | {k}, coeff * c)

    yield from rec(0, [], set(), set(), Fraction(1))


def _apply_ordered_exponent(g: "NormalOrderedBilinear", v: FockVector) -> FockVector:
    """Expand the ordered exponent over partial-permutation entry subsets,
    pruned per input state: a pair whose annihilation-side letter dies on
    the state is never extended, which keeps dense (moment-type) matrices
    tractable."""
    from tauforge.partitions import Partition, maya_set

    entries = g.mat.items()
    n0 = g.ordering
    out = FockVector(v.window, {}, v.dual)
    for state, amp in v.states.items():
        sv = FockVector(v.window, {state: amp}, v.dual)
        maya = maya_set(state[0], Partition(state[1]))

        def admissible(i: int, k: int) -> bool:
            # necessary screens on whichever letters reach the state first:
            # kets meet the annihilation side, bras the creation side
            if not v.dual:
                if n0 is None:
                    return not maya.contains(k)  # the filling letters act first
                ok = True
                if i >= n0:
                    ok = ok and maya.contains(i)
                if k < n0:
                    ok = ok and not maya.contains(k)
                return ok
            if n0 is None:
                return not maya.contains(i)  # starred letters insert into the bra
            ok = True
            if i < n0:
                ok = ok and not maya.contains(i)
            if k >= n0:
                ok = ok and maya.contains(k)
            return ok

        def rec(idx: int, pairs, rows, cols, coeff):
            nonlocal out
            if pairs:
                word = [letter("psi*", i) for i, _ in pairs]
                word += [letter("psi", k) for _, k in reversed(pairs)]
                # the all-stars-left arrangement is bare-normal ordered as
                # written; vacuum orderings re-sort with parity
                if n0 is None:
                    out = out + apply_word(word, sv).scale(coeff)
                else:
                    out = out + apply_normal_ordered_word(word, n0, sv).scale(coeff)
            else:
                out = out + sv.scale(coeff)
            for j in range(idx, len(entries)):
                (i, k), c = entries[j]
                if i in rows or k in cols or not admissible(i, k):
                    continue
                rec(j + 1, pairs + [(i, k)], rows | {i}, cols | {k}, coeff * c)

        rec(0, [], set(), set(), Fraction(1))
    return out


def apply_element(g, v: FockVector) -> FockVector:
    """Apply a group-like element to a ket or bra vector."""
    if isinstance(g, Identity):
        return v
    if isinstance(g, ExponentBilinear):
        out = v
        term = v
        cap = len(g.b.modes()) ** 2 + 8
        for step in range(1, cap + 2):
            term = _apply_bilinear_once(g.b, term).scale(Fraction(1, step))
            if term.is_zero:
                return out
            out = out + term
        raise RuntimeError("bilinear exponential did not terminate")
    if isinstance(g, NormalOrderedBilinear):
        return _apply_ordered_exponent(g, v)
    if isinstance(g, LinearWord):
        return apply_word(g.letters, v)
    if isinstance(g, Diagonal):
        if g.ordered:
            return apply_diagonal_multipliers(g.mult, v)
        out = {}
        from tauforge.partitions import maya_set

        for (n, parts), c in v.states.items():
            factor = Fraction(1)
            maya = maya_set(n, Partition(parts))
            for mode, m in g.mults:
                if maya.contains(mode):
                    factor *= m
            out[(n, parts)] = c * factor
        return FockVector(v.window, out, v.dual)
    if isinstance(g, DiagonalFlow):
        return apply_diagonal_exp(list(g.p_coeffs), g.base, v)
    if isinstance(g, ProjectorElement):
        return project(g.kind, v, g.n, g.shape)
    if isinstance(g, StateProjector):
        if v.dual:
            raise NotImplementedError("state projector on bras is unused")
        return outer_project(g.ket_n, g.ket_shape, g.bra_n, g.bra_shape, v)
    if isinstance(g, FieldWord):
        word = [field_letter_to_window(lt, v.window) for lt in g.letters]
        return apply_word(word, v)
    if isinstance(g, SolitonExponent):
        out = FockVector(v.window, {}, v.dual)
        n = len(g.ps)
        entries = [
            ((i, k), g.a_rows[i][k]) for i in range(n) for k in range(n)
            if g.a_rows[i][k] != 0
        ]
        for pairs, coeff in _pair_subsets(entries):
            if not pairs:
                out = out + v.scale(coeff)
                continue
            word = [
                field_letter_to_window(
                    [(Fraction(1), "psi*", g.qs[i], 0)], v.window
                )
                for i, _ in pairs
            ]
            word += [
                field_letter_to_window([(Fraction(1), "psi", g.ps[k], 0)], v.window)
                for _, k in reversed(pairs)
            ]
            out = out + apply_word(word, v).scale(coeff)
        return out
    if isinstance(g, Product):
        seq = list(g.factors)
        if not v.dual:
            seq = seq[::-1]
        for factor in seq:
            v = apply_element(factor, v)
        return v
    raise TypeError(f"not a group-like element: {g!r}")


def matrix_element(bra: FockVector, g, ket: FockVector):
    return inner(bra, apply_element(g, ket))


# -- structure maps -----------------------------------------------------------------


def charge_of(g) -> int:
    """Static charge of the element ([charge operator, g] = q g)."""
    if isinstance(
        g,
        (
            Identity,
            ExponentBilinear,
            NormalOrderedBilinear,
            Diagonal,
            DiagonalFlow,
            SolitonExponent,
        ),
    ):
        return 0
    if isinstance(g, ProjectorElement):
        return 0
    if isinstance(g, StateProjector):
        return g.ket_n - g.bra_n
    if isinstance(g, LinearWord):
        q = 0
        for lt in g.letters:
            kinds = {k for _, k, _ in lt}
            if len(kinds) != 1:
                raise ValueError("letters must not mix species")
            q += 1 if kinds == {"psi"} else -1
        return q
    if isinstance(g, FieldWord):
        q = 0
        for lt in g.letters:
            kinds = {k for _, k, _, _ in lt}
            if len(kinds) != 1:
                raise ValueError("letters must not mix species")
            q += 1 if kinds == {"psi"} else -1
        return q
    if isinstance(g, Product):
        return sum(charge_of(f) for f in g.factors)
    raise TypeError(f"not a group-like element: {g!r}")


def verify_charge(g, window: ModeWindow, samples: Iterable[tuple[int, Partition]]) -> int:
    """Check [Q, g] = q g on sample states; returns q, raises on mismatch."""
    from tauforge.fock import apply_charge

    q = charge_of(g)
    for n, lam in samples:
        v = basis_vector(window, n, lam)
        gv = apply_element(g, v)
        lhs = apply_charge(gv) - apply_element(g, apply_charge(v))
        if lhs != gv.scale(q):
            raise AssertionError(f"element lacks definite charge {q} on {(n, lam)}")
    return q


def bbc_check(
    g,
    window: ModeWindow,
    quadruples: Iterable[
        tuple[tuple[int, Partition], tuple[int, Partition], tuple[int, Partition], tuple[int, Partition]]
    ],
    apply_fn: Callable[[object, FockVector], FockVector] | None = None,
):
    """The bilinear exchange identity on matrix elements:

    sum_k <U| psi_k g |V> <U'| psi*_k g |V'> =
    sum_k <U| g psi_k |V> <U'| g psi*_k |V'>

    Returns None if every quadruple passes, else the failing quadruple.
    """
    apply_fn = apply_fn or apply_element
    for (nu, lu), (nu2, lu2), (nv, lv), (nv2, lv2) in quadruples:
        bra_u = basis_vector(window, nu, lu, dual=True)
        bra_u2 = basis_vector(window, nu2, lu2, dual=True)
        ket_v = basis_vector(window, nv, lv)
        ket_v2 = basis_vector(window, nv2, lv2)
        g_v = apply_fn(g, ket_v)
        g_v2 = apply_fn(g, ket_v2)
        u_g = apply_fn(g, bra_u)
        u2_g = apply_fn(g, bra_u2)
        lhs = Fraction(0)
        rhs = Fraction(0)
        for k in range(window.lo, window.hi):
            # evaluate the particle-side factor first: it vanishes for deep
            # sea modes, so the hole-side factor (whose intermediate state
            # would leave the window down there) is never materialized
            t1 = inner(bra_u, apply_mode("psi", k, g_v))
            if t1 != 0:
                lhs += t1 * inner(bra_u2, apply_mode("psi*", k, g_v2))
            # <U| g psi_k |V> = <(U g)| psi_k |V>
            t1 = inner(u_g, apply_mode("psi", k, ket_v))
            if t1 != 0:
                rhs += t1 * inner(u2_g, apply_mode("psi*", k, ket_v2))
        if lhs != rhs:
            return ((nu, lu), (nu2, lu2), (nv, lv), (nv2, lv2))
    return None


def rotation_of(g):
    """Rotation matrix R with g psi*_n = sum_l R[l,n] psi*_l g, when the
    variant supports one; returns (R, reason) with R None on failure."""
    if isinstance(g, Identity):
        return ModeMatrix({}), None  # R = I, stored as I + (empty correction)
    if isinstance(g, ExponentBilinear):
        modes = g.b.modes()
        dense = [[g.b.get(i, k) for k in modes] for i in modes]
        r = _mat_exp_nilpotent(dense)
        out = {}
        for a, i in enumerate(modes):
            for b, k in enumerate(modes):
                val = r[a][b] - (1 if i == k else 0)
                if val:
                    out[(i, k)] = val
        return ModeMatrix(out), None
    if isinstance(g, Diagonal):
        # a multiplier m on occupied mode j rotates the starred operator
        # by 1/m (the bilinear in the exponent pairs with the particle side)
        return ModeMatrix({(j, j): 1 / m - 1 for j, m in g.mults}), None
    if isinstance(g, NormalOrderedBilinear):
        n0 = 0 if g.ordering is None else g.ordering
        if g.ordering is None:
            return ModeMatrix(dict(g.mat.entries)), None
        modes = g.mat.modes()
        dense = [[g.mat.get(i, k) for k in modes] for i in modes]
        proj = [
            [Fraction(int(i == j and modes[i] >= n0)) for j in range(len(modes))]
            for i in range(len(modes))
        ]
        eye = [
            [Fraction(int(i == j)) for j in range(len(modes))] for i in range(len(modes))
        ]
        iap = [
            [eye[i][j] - sum(dense[i][m] * proj[m][j] for m in range(len(modes))) for j in range(len(modes))]
            for i in range(len(modes))
        ]
        try:
            inv = fraction_matrix_inverse(iap)
        except ZeroDivisionError:
            return None, "no rotation: the ordering transform matrix is singular"
        b = _matmul(inv, dense)
        out = {}
        for a, i in enumerate(modes):
            for c, k in enumerate(modes):
                if b[a][c]:
                    out[(i, k)] = b[a][c]
        return ModeMatrix(out), None
    return None, f"variant {type(g).__name__} carries no rotation matrix"


def rotation_prime_of(g):
    """The transposed-side rotation R' for vacuum-ordered bilinears:
    R' = I - (I + A P_<n)^(-1) A, returned as the correction to I."""
    if not isinstance(g, NormalOrderedBilinear) or g.ordering is None:
        return None, "variant carries no R'"
    n0 = g.ordering
    modes = g.mat.modes()
    m = len(modes)
    dense = [[g.mat.get(i, k) for k in modes] for i in modes]
    eye = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    proj = [[Fraction(int(i == j and modes[i] < n0)) for j in range(m)] for i in range(m)]
    iap = [
        [
            eye[i][j] + sum(dense[i][x] * proj[x][j] for x in range(m))
            for j in range(m)
        ]
        for i in range(m)
    ]
    try:
        inv = fraction_matrix_inverse(iap)
    except ZeroDivisionError:
        return None, "no R': singular transform"
    b = _matmul(inv, dense)
    out = {}
    for a, i in enumerate(modes):
        for c, k in enumerate(modes):
            if b[a][c]:
                out[(i, k)] = -b[a][c]
    return ModeMatrix(out), None


def reorder(g: NormalOrderedBilinear, target: int | None) -> tuple[Fraction, NormalOrderedBilinear]:
    """Rewrite a normally ordered bilinear exponent in another ordering.

    Returns (scalar, element) with: old element = scalar * new element.
    Bare -> vacuum n:  A = B (I + P B)^(-1), scalar det(I + P B).
    Vacuum n -> bare:  B = (I - A P)^(-1) A, scalar det(I - P A).
    Here P projects onto modes >= n.
    """
    if g.ordering == target:
        return Fraction(1), g
    if g.ordering is not None and target is not None:
        s1, bare = reorder(g, None)
        s2, out = reorder(bare, target)
        return s1 * s2, out
    n0 = target if g.ordering is None else g.ordering
    assert n0 is not None
    modes = g.mat.modes()
    m = len(modes)
    dense = [[g.mat.get(i, k) for k in modes] for i in modes]
    eye = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    proj = [[Fraction(int(i == j and modes[i] >= n0)) for j in range(m)] for i in range(m)]
    if g.ordering is None:
        # B given; A = B (I + P B)^{-1}; scalar = det(I + P B)
        ipb = [
            [eye[i][j] + sum(proj[i][x] * dense[x][j] for x in range(m)) for j in range(m)]
            for i in range(m)
        ]
        scalar = fraction_matrix_det(ipb)
        if scalar == 0:
            raise ZeroDivisionError("ordering transform is singular")
        a = _matmul(dense, fraction_matrix_inverse(ipb))
        out = {
            (modes[i], modes[k]): a[i][k]
            for i in range(m)
            for k in range(m)
            if a[i][k] != 0
        }
        return scalar, NormalOrderedBilinear(ModeMatrix(out), ordering=n0)
    # A given; B = (I - A P)^{-1} A; scalar = det(I - P A)
    iap = [
        [eye[i][j] - sum(dense[i][x] * proj[x][j] for x in range(m)) for j in range(m)]
        for i in range(m)
    ]
    ipa = [
        [eye[i][j] - sum(proj[i][x] * dense[x][j] for x in range(m)) for j in range(m)]
        for i in range(m)
    ]
    scalar = fraction_matrix_det(ipa)
    if scalar == 0:
        raise ZeroDivisionError("ordering transform is singular")
    b = _matmul(fraction_matrix_inverse(iap), dense)
    out = {
        (modes[i], modes[k]): b[i][k]
        for i in range(m)
        for k in range(m)
        if b[i][k] != 0
    }
    return scalar, NormalOrderedBilinear(ModeMatrix(out), ordering=None)


def compose_bare_ordered(
    gp: NormalOrderedBilinear, g: NormalOrderedBilinear
) -> NormalOrderedBilinear:
    """Product of two bare-ordered exponents: B'' = B + B' + B' B."""
    if gp.ordering is not None or g.ordering is not None:
        raise ValueError("composition law holds for the bare ordering")
    modes = sorted(set(gp.mat.modes()) | set(g.mat.modes()))
    out: dict[tuple[int, int], Fraction] = {}
    for (i, k), c in gp.mat.entries.items():
        out[(i, k)] = out.get((i, k), Fraction(0)) + c
    for (i, k), c in g.mat.entries.items():
        out[(i, k)] = out.get((i, k), Fraction(0)) + c
    for i in modes:
        for k in modes:
            s = sum(
                (gp.mat.get(i, x) * g.mat.get(x, k) for x in modes), Fraction(0)
            )
            if s:
                out[(i, k)] = out.get((i, k), Fraction(0)) + s
    return NormalOrderedBilinear(ModeMatrix(out), ordering=None)


def exponent_to_bare(b: ModeMatrix) -> NormalOrderedBilinear:
    """exp(bilinear with nilpotent matrix b) as a bare-ordered exponent:
    B = e^b - I."""
    g = ExponentBilinear(b)  # validates nilpotency
    r, _ = rotation_of(g)
    assert r is not None
    return NormalOrderedBilinear(r, ordering=None)


def reconstruct_exponential(
    g, n: int, window: ModeWindow, arm_max: int, leg_max: int
) -> tuple[Fraction, NormalOrderedBilinear]:
    """Rebuild g|n> as <n|g|n> exp(hole-particle bilinear)|n> from the
    one-hook correlators; returns (central value, vacuum-n element)."""
    ket = apply_element(g, vacuum(window, n))
    central = ket.component(n, Partition([]))
    if central == 0:
        raise ZeroDivisionError("central correlator vanishes; no exponential form")
    entries = {}
    for alpha in range(arm_max + 1):
        for beta in range(leg_max + 1):
            bra = vacuum(window, n, dual=True)
            bra = apply_mode("psi*", n + alpha, bra)
            bra = apply_mode("psi", n - beta - 1, bra)
            val = inner(bra, ket)
            if val:
                entries[(n - beta - 1, n + alpha)] = Fraction(val, central)
    return central, NormalOrderedBilinear(ModeMatrix(entries), ordering=n)
