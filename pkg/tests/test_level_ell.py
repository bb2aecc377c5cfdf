import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from modbeta.errors import InsufficientPrecision, UnsaturatedSpace, UnsupportedLevel
from modbeta.level1 import basis, delta, eisenstein
from modbeta.level_ell import (
    SUPPORTED_LEVELS,
    W_ell,
    _spanning,
    build_space,
    dimension,
    load_space,
    membership_mod,
    membership_mod_meromorphic,
    saturate,
    sturm,
)
from modbeta.qseries import QExpansion, Zmod, reduce_mod, verschiebung

# dim S_k(Gamma_0(N)) from standard tables of newform/oldform counts
CUSP_DIMS = {
    (4, 5): 1, (6, 5): 1, (8, 5): 3, (4, 7): 1, (6, 7): 3, (4, 13): 3, (2, 13): 0,
    (2, 11): 1, (8, 2): 1, (10, 2): 1, (12, 2): 2, (6, 3): 1, (8, 3): 1,
}


def test_dimension_examples():
    assert dimension(0, 2) == 1
    assert dimension(4, 2) == 2
    assert dimension(2, 11) == 2


@pytest.mark.parametrize("w, ell", sorted(CUSP_DIMS))
def test_dimension_against_cusp_form_tables(w, ell):
    # two cusps: Eisenstein part has dimension 2, or 1 in weight 2
    eis = 1 if w == 2 else 2
    assert dimension(w, ell) == CUSP_DIMS[(w, ell)] + eis


@pytest.mark.parametrize("w", range(0, 42, 2))
def test_dimension_at_levels_two_and_three_matches_graded_ring(w):
    # closed forms valid for these two levels
    assert dimension(w, 2) == 1 + w // 4
    assert dimension(w, 3) == 1 + w // 3


def test_sturm_examples():
    assert sturm(12, 1) == 2
    assert sturm(20, 2) == 6
    assert all(sturm(0, ell) == 1 for ell in SUPPORTED_LEVELS)


@pytest.mark.parametrize("ell", SUPPORTED_LEVELS)
def test_w_ell_formula(ell):
    w = W_ell(ell, 20)
    sig = lambda n: int(sympy.divisor_sigma(n, 1)) if n == int(n) else 0
    for n in range(1, 20):
        inner = sig(n) - ell * (sig(n // ell) if n % ell == 0 else 0)
        assert w[n] == 24 // (ell - 1) * inner
    assert w[0] == 1


def test_w2_example():
    w = W_ell(2, 4)
    assert [w[n] for n in range(4)] == [1, 24, 24, 96]


def test_build_space_examples():
    s = build_space(4, 2, 5)
    assert s.dim == 2 and s.saturated
    s = build_space(2, 2, 5)
    assert s.dim == 1 and [s.rows[0][n] for n in range(s.precision)] == [1, 24][: s.precision]
    for ell in SUPPORTED_LEVELS:
        s = build_space(0, ell, 5 if ell != 5 else 7)
        assert s.dim == 1 and s.rows[0][0] == 1


@pytest.mark.parametrize("ell", SUPPORTED_LEVELS)
@pytest.mark.parametrize("w", [2, 4, 6, 8, 12, 16])
def test_exact_rank_over_q_matches_dimension(w, ell):
    """Independent of the mod-prime rank used in construction."""
    N = sturm(w, ell)
    _, forms = _spanning(w, ell, N, 0)
    M = sympy.Matrix([[f[n] for n in range(N)] for f in forms])
    assert M.rank() == dimension(w, ell) == len(forms)


def test_unsupported_level():
    with pytest.raises(UnsupportedLevel):
        build_space(4, 11, 5)


def test_precision_below_sturm_is_refused():
    with pytest.raises(InsufficientPrecision):
        build_space(20, 2, 5, N=3)


def test_membership_of_spanning_form():
    s = build_space(4, 2, 5, 6)
    e4q2 = reduce_mod(verschiebung(eisenstein(4, 3).qexp, 2), 5, 2)
    assert membership_mod(s, e4q2, 2)


def test_membership_coordinates_reconstruct_sum():
    s = build_space(4, 2, 5, 6)
    e4 = eisenstein(4, 6).qexp
    f = reduce_mod(e4 + verschiebung(eisenstein(4, 3).qexp, 2), 5, 2)
    res = membership_mod(s, f, 2)
    assert res
    for n in range(6):
        assert sum(c * r[n] for c, r in zip(res.coordinates, s.rows)) % 25 == f[n]


def test_q_is_not_a_weight_four_form_mod_5():
    s = build_space(4, 2, 5, 3)
    q = QExpansion([0, 1, 0], 0, 3, Zmod(5))
    res = membership_mod(s, q, 1)
    assert not res and res.index in (0, 1, 2)


def test_membership_needs_precision():
    s = build_space(20, 2, 5)
    with pytest.raises(InsufficientPrecision):
        membership_mod(s, QExpansion.zero(2, Zmod(5)), 1)


def test_membership_beyond_known_digits():
    s = build_space(4, 2, 5)
    with pytest.raises(InsufficientPrecision):
        membership_mod(s, QExpansion.zero(s.precision, Zmod(5**30)), 30)


@pytest.mark.parametrize("ell, p", [(2, 5), (3, 5), (5, 7), (7, 5), (13, 5), (2, 7)])
@pytest.mark.parametrize("w", [4, 12, 24, 36])
@pytest.mark.parametrize("k", [1, 3])
def test_degeneracy_images_are_members(w, ell, p, k):
    N = sturm(w, ell)
    s = build_space(w, ell, p, N)
    for b in basis(w, 0, p, N).elements:
        low = reduce_mod(b.qexp, p, k)
        high = reduce_mod(verschiebung(b.qexp, ell).truncate(N), p, k)
        assert membership_mod(s, low, k)
        assert membership_mod(s, high, k)


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_membership_is_linear(data):
    ell = data.draw(st.sampled_from([2, 3, 13]))
    w = data.draw(st.sampled_from([4, 6, 8, 10]))
    s = build_space(w, ell, 5)
    m = 25
    x = [data.draw(st.integers(0, m - 1)) for _ in range(s.dim)]
    y = [data.draw(st.integers(0, m - 1)) for _ in range(s.dim)]
    r = data.draw(st.integers(0, m - 1))

    def comb(c):
        return QExpansion([sum(a * row[n] for a, row in zip(c, s.rows)) % m for n in range(s.precision)], 0,
                          s.precision, Zmod(m))

    f, g = comb(x), comb(y)
    rg = comb([(r * a + b) % m for a, b in zip(x, y)])
    assert membership_mod(s, f, 2).coordinates == x
    assert membership_mod(s, g, 2).coordinates == y
    assert membership_mod(s, rg, 2).coordinates == [(r * a + b) % m for a, b in zip(x, y)]


@given(st.lists(st.lists(st.integers(-40, 40), min_size=3, max_size=3), min_size=3, max_size=3),
       st.sampled_from([2, 3, 5]))
@settings(max_examples=60, deadline=None)
def test_saturation_is_idempotent_and_extends_the_lattice(rows, p):
    M = sympy.Matrix(rows)
    assume(M.det() != 0)
    sat, rounds = saturate(rows, p)
    again, more = saturate(sat, p)
    assert more == 0 and again == sat
    S = sympy.Matrix(sat)
    # the old rows are integral combinations of the new ones
    C = M * S.inv()
    assert all(c.is_integer for c in C)
    # one round may divide several rows, so the index is p^e with e >= rounds
    ratio = abs(M.det() / S.det())
    assert ratio.is_integer and sympy.multiplicity(p, ratio) >= rounds
    assert ratio == p ** sympy.multiplicity(p, ratio)
    # all elementary divisors of the new rows are prime to p
    assert S.det() % p != 0


def test_saturate_example():
    rows, rounds = saturate([[1, 1], [1, 6]], 5)
    assert rounds == 1
    assert abs(sympy.Matrix(rows).det()) == 1


def test_cache_round_trip(tmp_path):
    s = build_space(24, 3, 5, cache_dir=tmp_path)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    t = load_space(str(files[0]))
    assert t.rows == s.rows and t.names == s.names and t.adic_precision == s.adic_precision
    assert build_space(24, 3, 5, cache_dir=tmp_path).rows == s.rows


def test_corrupted_cache_fails_certification(tmp_path):
    build_space(16, 2, 5, cache_dir=tmp_path)
    path = next(tmp_path.iterdir())
    lines = path.read_text().splitlines()
    lines[4] = lines[3]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(UnsaturatedSpace):
        load_space(str(path))


def test_truncated_cache_is_malformed(tmp_path):
    build_space(16, 2, 5, cache_dir=tmp_path)
    path = next(tmp_path.iterdir())
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ValueError):
        load_space(str(path))


def test_level_13_low_weight_uses_delta_quotients():
    s = build_space(4, 13, 5)
    assert s.dim == 5
    assert any(name.startswith("Q") for name in s.names)


def test_meromorphic_membership():
    N = 30
    e4 = eisenstein(4, N + 1).qexp
    f = e4 * delta(N + 2).qexp.inverse()
    f = reduce_mod(f.truncate(N), 5, 1)
    assert membership_mod_meromorphic(f, -8, 2, 5, 1, pole_cap=1)
