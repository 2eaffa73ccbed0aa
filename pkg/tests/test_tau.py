import random
from fractions import Fraction

from tauforge.fock import ModeWindow, letter
from tauforge.grouplike import (
    Diagonal,
    Identity,
    LinearWord,
    Product,
    StateProjector,
    apply_element,
    charge_of,
)
from tauforge.partitions import Partition, enumerate_partitions
from tauforge.polyring import standard_double_family, standard_single_family
from tauforge.sampling import (
    sample_bare_bilinear,
    sample_diagonal,
    sample_exponent_bilinear,
    sample_soliton,
    sample_vacuum_bilinear,
)
from tauforge.schur import schur_jt
from tauforge.tau import (
    expand_2dtl,
    expand_mkp,
    expand_mkp_direct,
    giambelli_coeff_check,
    pluecker_check,
    pluecker_coefficient,
    quantum_jt_check,
    rectangular_three_term_check,
    restricted_series,
)

F = Fraction
W = ModeWindow(-12, 12)


def test_identity_tau_is_one():
    fam = standard_single_family(4)
    series = expand_mkp(Identity(), 0, fam, 4, W)
    assert series.poly == fam.one()
    assert series.coefficients == {Partition([]): F(1)}


def test_coefficient_trivial_and_projector():
    for lam in enumerate_partitions(3):
        want = F(1) if lam == Partition([]) else F(0)
        assert pluecker_coefficient(Identity(), lam, 0, W) == want
    # state projector |mu,0><0,0| reproduces a character coefficient
    mu = Partition([2, 1])
    g = StateProjector(0, mu, 0, Partition([]))
    got = pluecker_coefficient(g, mu, 0, W)
    assert got == (-1) ** mu.sign_exponent()


def test_character_series():
    # element |lam,0><0| gives the signed Schur function
    fam = standard_single_family(5)
    for lam in enumerate_partitions(4):
        g = StateProjector(0, lam, 0, Partition([]))
        series = expand_mkp(g, 0, fam, 5, W)
        want = schur_jt(fam, lam) * ((-1) ** lam.sign_exponent())
        assert series.poly == want


def test_route_equality_all_variants():
    rng = random.Random(3)
    fam = standard_single_family(5)
    makers = [
        sample_exponent_bilinear,
        sample_bare_bilinear,
        sample_vacuum_bilinear,
        sample_diagonal,
        lambda r: sample_soliton(r, 2),
    ]
    for make in makers:
        g = make(rng)
        for n in (-1, 0, 1):
            series = expand_mkp(g, n, fam, 5, W)
            direct = expand_mkp_direct(g, n, fam, 5, W)
            assert series.poly == direct, (type(g).__name__, n)


def test_charged_element_series():
    # single particle letter: charge 1, right vacuum shifts down
    fam = standard_single_family(4)
    g = LinearWord((letter("psi", 2),))
    assert charge_of(g) == 1
    series = expand_mkp(g, 0, fam, 4, W)
    direct = expand_mkp_direct(g, 0, fam, 4, W)
    assert series.poly == direct
    assert not series.poly.is_zero


def test_2dtl_trivial_element_gives_exponential():
    plus, minus = standard_double_family(4, 4)
    series = expand_2dtl(Identity(), 0, plus, minus, 4, W)
    quad = plus.zero()
    for k in range(1, 5):
        quad = quad + plus.time(k) * minus.time(k) * (-k)
    assert series.poly == quad.series_exp()
    # diagonal coefficients only
    for (lam, mu) in series.coefficients:
        assert lam == mu


def test_2dtl_diagonal_element_is_diagonal():
    rng = random.Random(5)
    plus, minus = standard_double_family(3, 3)
    g = sample_diagonal(rng)
    series = expand_2dtl(g, 1, plus, minus, 3, W)
    assert series.coefficients
    for (lam, mu) in series.coefficients:
        assert lam == mu


def test_2dtl_charged_element():
    plus, minus = standard_double_family(3, 3)
    g = LinearWord((letter("psi", 1),))
    series = expand_2dtl(g, 1, plus, minus, 3, W)
    # <lam,1| psi_1 |mu,0> pairs nontrivially across the charge step
    assert series.coefficients


def _random_elements(rng, count):
    makers = (
        sample_exponent_bilinear,
        sample_bare_bilinear,
        sample_vacuum_bilinear,
        sample_diagonal,
    )
    return [rng.choice(makers)(rng) for _ in range(count)]


def test_giambelli_identity():
    rng = random.Random(7)
    shapes = [lam for lam in enumerate_partitions(6) if lam.diagonal_size >= 1]
    checked = 0
    for g in _random_elements(rng, 12):
        n = rng.choice((-1, 0, 1))
        lam = rng.choice(shapes)
        got = giambelli_coeff_check(g, n, lam, W)
        if got is None:
            continue
        assert got, (g, n, lam)
        checked += 1
    assert checked >= 8


def test_giambelli_hooks_trivially():
    rng = random.Random(9)
    g = sample_exponent_bilinear(rng)
    assert giambelli_coeff_check(g, 0, Partition([3, 1]), W) in (True, None)
    assert giambelli_coeff_check(g, 0, Partition([2, 2]), W) in (True, None)


def test_quantum_jt_both_orientations():
    rng = random.Random(11)
    shapes = [lam for lam in enumerate_partitions(5) if lam.weight >= 1]
    checked = 0
    for g in _random_elements(rng, 14):
        n = rng.choice((-1, 0, 1))
        lam = rng.choice(shapes)
        for orientation in ("rows", "columns"):
            got = quantum_jt_check(g, n, lam, orientation)
            if got is None:
                continue
            assert got, (g, n, lam, orientation)
            checked += 1
    assert checked >= 14


def test_quantum_jt_one_row_trivial():
    rng = random.Random(13)
    g = sample_diagonal(rng)
    assert quantum_jt_check(g, 0, Partition([3]), "rows") in (True, None)


def test_pluecker_relations():
    rng = random.Random(17)
    checked = 0
    for g in _random_elements(rng, 10):
        n = rng.choice((-1, 0, 1))
        alphas, betas = (3, 1), (2, 0)
        assert pluecker_check(g, n, alphas, betas, 1, 2, W)
        checked += 1
    assert checked == 10


def test_pluecker_degenerate_coincident_rows():
    # striking r=1 twice the same alpha... degenerate input: two equal arms
    # cannot occur in strictly decreasing data, so instead verify the
    # relation on a diagonal-3 shape
    rng = random.Random(19)
    g = sample_bare_bilinear(rng)
    alphas, betas = (4, 2, 0), (3, 1, 0)
    assert pluecker_check(g, 0, alphas, betas, 1, 3, W)
    assert pluecker_check(g, 0, alphas, betas, 2, 3, W)


def test_rectangular_three_term():
    rng = random.Random(23)
    checked = 0
    for g in _random_elements(rng, 10):
        n = rng.choice((-1, 0))
        s, a = rng.choice(((1, 1), (2, 1), (2, 2), (1, 2)))
        assert rectangular_three_term_check(g, n, s, a, W)
        checked += 1
    assert checked == 10


def test_restriction_matches_coefficient_filter():
    rng = random.Random(29)
    fam = standard_single_family(4)
    for _ in range(4):
        g = sample_bare_bilinear(rng)
        n = rng.choice((0, 1))
        rows = rng.choice((0, 1, 2))
        full = expand_mkp(g, n, fam, 4, W)
        cut = restricted_series(g, rows, n, fam, 4, W)
        want = fam.zero()
        for lam, c in full.coefficients.items():
            if lam.length <= rows + n:
                want = want + schur_jt(fam, lam) * c
        assert cut.poly == want
    # rows = 0 at charge 0 keeps only the central value
    g = sample_bare_bilinear(rng)
    cut = restricted_series(g, 0, 0, fam, 4, W)
    assert set(cut.coefficients) <= {Partition([])}


def test_gauge_freedom_diagonal_twist():
    # multiplying by a charge-staircase diagonal rescales tau by a charge
    # function: tau'_n = C(n) tau_n with C(n) the staircase eigenvalue
    rng = random.Random(31)
    fam = standard_single_family(4)
    g = sample_bare_bilinear(rng)
    twist = Diagonal(((0, F(5, 3)), (1, F(2, 7)), (-1, F(3))), ordered=True)
    twisted = Product((g, twist))
    for n in (-1, 0, 1):
        base = expand_mkp(g, n, fam, 4, W)
        new = expand_mkp(twisted, n, fam, 4, W)
        from tauforge.fock import vacuum

        cn = apply_element(twist, vacuum(W, n)).component(n, Partition([]))
        assert new.poly == base.poly * cn


def test_series_json_is_deterministic():
    rng = random.Random(37)
    fam = standard_single_family(3)
    g = sample_exponent_bilinear(rng)
    a = expand_mkp(g, 0, fam, 3, W).to_json()
    b = expand_mkp(g, 0, fam, 3, W).to_json()
    assert a == b
