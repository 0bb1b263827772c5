import pytest

from permhomology.catalog import alternating, cyclic, klein_four, mathieu, symmetric
from permhomology.errors import InvariantViolation
from permhomology.homology import (
    TRIVIAL,
    AbelianInvariants,
    CE_CONVENTIONS,
    ce_convention,
    ce_ppart_general,
    chain_homology,
    cyclic_sylow_ppart,
    ppart,
    resolution_homology,
)
from permhomology.permgroup import PermGroup
from permhomology.resolution import bar_resolution, resolution_small
from permhomology.sylow import sylow_ascent


def test_abelian_invariants_canonical():
    assert AbelianInvariants.from_factors(0, (12,)).torsion == (4, 3)
    assert AbelianInvariants.from_factors(0, (2, 14)).torsion == (2, 2, 7)
    assert AbelianInvariants.from_factors(0, (6,)).torsion == (2, 3)
    assert AbelianInvariants.from_factors(2, ()) == AbelianInvariants(2, ())
    assert AbelianInvariants.from_factors(0, (4, 12)).torsion == (4, 4, 3)
    with pytest.raises(ValueError):
        AbelianInvariants.from_factors(0, (1,))
    assert AbelianInvariants(1, (4, 3)).as_list() == [0, 4, 3]
    assert str(AbelianInvariants(0, (4, 3))) == "Z/4 + Z/3"
    assert str(TRIVIAL) == "0"


def test_ppart_examples():
    z12 = AbelianInvariants.from_factors(0, (12,))
    assert ppart(z12, 2).torsion == (4,)
    assert ppart(z12, 5) == TRIVIAL
    h5 = AbelianInvariants.from_factors(0, (2, 14))
    assert ppart(h5, 7).torsion == (7,)
    assert ppart(AbelianInvariants(3, (2,)), 2) == AbelianInvariants(0, (2,))


def test_sum_of_pparts_reconstructs():
    for grp in (symmetric(3), alternating(4), klein_four()):
        R = resolution_small(grp, 4)
        for k in range(4):
            inv_ = resolution_homology(R, k)
            merged = []
            for p in (2, 3, 5, 7):
                merged.extend(inv_.ppart(p).torsion)
            assert tuple(sorted(merged)) == tuple(sorted(inv_.torsion))


def test_chain_homology_circle():
    H = chain_homology((1, 1), [[[0]]])
    assert H == [AbelianInvariants(1, ()), AbelianInvariants(1, ())]


def test_chain_homology_torsion_placement():
    # disk glued along a double cover of the circle
    H = chain_homology((1, 1, 1), [[[0]], [[2]]])
    assert H[0] == AbelianInvariants(1, ())
    assert H[1] == AbelianInvariants(0, (2,))
    assert H[2] == TRIVIAL


def test_chain_homology_rejects():
    with pytest.raises(ValueError):
        chain_homology((2, 1), [[[1]]])
    with pytest.raises(ValueError):
        chain_homology((1, 1), [])
    with pytest.raises(InvariantViolation):
        chain_homology((1, 1, 1), [[[1]], [[1]]])


def test_chain_homology_of_bar_z12():
    R = bar_resolution(cyclic(12), 2)
    sizes = R.ranks[:3]
    mats = [R.boundary_matrix_z(1), R.boundary_matrix_z(2)]
    H = chain_homology(sizes, mats)
    assert H[0] == AbelianInvariants(1, ())
    assert H[1] == AbelianInvariants(0, (4, 3))


def test_resolution_homology_s3():
    R = resolution_small(symmetric(3), 4)
    assert resolution_homology(R, 3).torsion == (2, 3)
    assert resolution_homology(R, 0) == AbelianInvariants(1, ())


def test_cyclic_sylow_patterns():
    # (group, p, 2e): nontrivial p-part exactly at n = 2ek - 1
    for grp, p, period in (
        (symmetric(3), 3, 4),
        (mathieu(11), 5, 8),
        (mathieu(21), 5, 4),
        (mathieu(21), 7, 6),
    ):
        got = [n for n in range(1, 20) if cyclic_sylow_ppart(grp, p, n).torsion]
        assert got == [period * k - 1 for k in range(1, 20) if period * k - 1 < 20]
        assert all(
            cyclic_sylow_ppart(grp, p, n).torsion in ((), (p,)) for n in range(1, 8)
        )


def test_cyclic_sylow_absent_prime():
    assert cyclic_sylow_ppart(mathieu(11), 7, 5) == TRIVIAL
    assert cyclic_sylow_ppart(mathieu(22), 23, 21) == TRIVIAL


def test_cyclic_sylow_rejects_higher_power():
    with pytest.raises(ValueError):
        cyclic_sylow_ppart(mathieu(11), 2, 1)
    with pytest.raises(ValueError):
        cyclic_sylow_ppart(alternating(4), 2, 1)


def test_ce_convention_selected():
    conv = ce_convention()
    assert conv in CE_CONVENTIONS
    assert ce_convention() == conv


def test_ce_matches_oracle_small():
    for grp, p in ((symmetric(3), 3), (alternating(4), 2), (alternating(4), 3)):
        P = sylow_ascent(grp, p)
        R = resolution_small(grp, 4)
        for n in (1, 2, 3):
            want = resolution_homology(R, n).ppart(p)
            assert ce_ppart_general(grp, P, n) == want


def test_ce_both_conventions_agree():
    grp = alternating(4)
    P = sylow_ascent(grp, 2)
    for n in (1, 2, 3):
        a = ce_ppart_general(grp, P, n, convention="intersect-right")
        b = ce_ppart_general(grp, P, n, convention="intersect-left")
        assert a == b


def test_ce_matches_closed_form_mathieu():
    for m, p in ((11, 5), (11, 11), (12, 5), (12, 11)):
        grp = mathieu(m)
        P = sylow_ascent(grp, p)
        for n in (1, 2, 3):
            assert ce_ppart_general(grp, P, n) == cyclic_sylow_ppart(grp, p, n)


def test_ce_rejects():
    grp = cyclic(4)
    sq = PermGroup([(2, 3, 0, 1)], 4)
    with pytest.raises(ValueError):
        ce_ppart_general(grp, sq, 1)  # not a Sylow subgroup
    P = sylow_ascent(symmetric(3), 3)
    with pytest.raises(ValueError):
        ce_ppart_general(symmetric(3), P, 0)
    assert ce_ppart_general(symmetric(3), PermGroup([], 3), 2) == TRIVIAL
