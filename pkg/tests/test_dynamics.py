"""Tests for state construction and the amplitude-damping evolution."""

import math

import numpy as np
import pytest

from mmesdyn.dynamics import (
    FAMILIES,
    MAX_FOCK,
    PAIR_NAMES,
    ChannelParams,
    MmesSpec,
    analytic_rho_c1c2,
    analytic_rho_c1r2,
    build_mmes,
    damp_fock_component,
    damping_amplitudes,
    evolve_four_partite,
    family_spec,
    pair_state,
    swap_xi_chi,
)
from mmesdyn.linalg import check_state, eigvals_hermitian, partial_trace, purity

rng = np.random.default_rng(7)


def test_damping_amplitudes_normalization():
    for kt in [0.0, 0.01, 0.3, 1.0, 2.5, 10.0, 40.0]:
        par = damping_amplitudes(kt)
        assert abs(par.xi**2 + par.chi**2 - 1.0) < 1e-14
        assert 0.0 <= par.chi <= 1.0


def test_damping_amplitudes_limits():
    par0 = damping_amplitudes(0.0)
    assert par0.xi == 1.0 and par0.chi == 0.0
    late = damping_amplitudes(60.0)
    assert late.xi < 1e-13 and late.chi > 1.0 - 1e-13


def test_damping_amplitudes_rejects_bad_time():
    for bad in (-0.1, math.nan, math.inf):
        with pytest.raises(ValueError):
            damping_amplitudes(bad)


def test_channel_params_validates_consistency():
    with pytest.raises(ValueError):
        ChannelParams(0.5, 0.9, 0.9)
    with pytest.raises(ValueError):
        ChannelParams(0.5, 1.2, 0.0)


def test_damp_fock_component_is_normalized():
    par = damping_amplitudes(0.37)
    for n in range(MAX_FOCK + 1):
        amps = damp_fock_component(n, par)
        assert abs(np.sum(np.abs(amps) ** 2) - 1.0) < 1e-12


def test_damp_fock_component_binomial_amplitudes():
    par = damping_amplitudes(0.8)
    xi, chi = par.xi, par.chi
    amps = damp_fock_component(2, par, dim=4)
    # photon number 2 splits as sqrt(C(2,j)) xi^(2-j) chi^j over (cavity, reservoir)
    assert abs(amps[2, 0] - xi**2) < 1e-15
    assert abs(amps[1, 1] - math.sqrt(2) * xi * chi) < 1e-15
    assert abs(amps[0, 2] - chi**2) < 1e-15
    assert amps[3, 0] == 0.0


def test_damp_fock_component_rejects_out_of_range():
    par = damping_amplitudes(0.5)
    with pytest.raises(ValueError):
        damp_fock_component(MAX_FOCK + 1, par)
    with pytest.raises(ValueError):
        damp_fock_component(3, par, dim=2)


def test_mmes_spec_validation():
    with pytest.raises(ValueError):
        MmesSpec((0.6, 0.6), (1, 2))  # weights do not sum to 1
    with pytest.raises(ValueError):
        MmesSpec((0.5, 0.5), (2, 2))  # repeated index
    with pytest.raises(ValueError):
        MmesSpec((0.5, 0.5), (0, 1))  # non-positive index
    spec = MmesSpec((0.25, 0.75), (1, 4))
    assert spec.qudit_dim == 8


def test_family_spec_dimensions_and_errors():
    dims = {"dim4": 4, "dim6": 6, "dim8": 8}
    for fam in FAMILIES:
        spec = family_spec(fam, 0.3)
        assert spec.qudit_dim == dims[fam]
        assert spec.probabilities == (0.3, 0.7)
    with pytest.raises(ValueError):
        family_spec("dim5", 0.3)
    with pytest.raises(ValueError):
        family_spec("dim4", 1.2)


def test_build_mmes_state_properties():
    for fam in FAMILIES:
        for p in (0.0, 0.3, 1.0):
            rho = build_mmes(family_spec(fam, p))
            check_state(rho)
            # two orthogonal pure components mixed with weights (p, 1-p)
            assert abs(purity(rho) - (p**2 + (1 - p) ** 2)) < 1e-12
            # qubit marginal of each component is maximally mixed
            red = partial_trace(rho, (0,)).data
            assert np.allclose(red, np.eye(2) / 2, atol=1e-12)


def test_evolve_four_partite_stays_a_state():
    for fam in FAMILIES:
        spec = family_spec(fam, 0.4)
        for kt in (0.0, 0.7, 3.0):
            rho = evolve_four_partite(spec, kt)
            d = spec.qudit_dim
            assert rho.dims == (2, 2, d, d)
            check_state(rho)


def test_evolution_starts_at_initial_state():
    spec = family_spec("dim4", 0.25)
    rho0 = evolve_four_partite(spec, 0.0)
    # at t=0 the reservoirs are in vacuum and the cavities carry the MMES
    cav = partial_trace(rho0, (0, 2)).data
    assert np.allclose(cav, build_mmes(spec).data, atol=1e-13)


def test_pair_state_matches_explicit_partial_trace():
    keep = {"c1c2": (0, 2), "c1r2": (0, 3), "r1c2": (1, 2), "r1r2": (1, 3)}
    for fam in FAMILIES:
        spec = family_spec(fam, 0.35)
        full = evolve_four_partite(spec, 0.9)
        for pair in PAIR_NAMES:
            got = pair_state(spec, 0.9, pair)
            want = partial_trace(full, keep[pair])
            assert np.allclose(got.data, want.data, atol=1e-13)
    with pytest.raises(ValueError):
        pair_state(family_spec("dim4", 0.5), 0.5, "c1c3")


def test_analytic_pair_matrices_match_numerics():
    for p in (0.0, 0.3, 0.62, 1.0):
        for kt in (0.0, 0.45, 0.8, 2.2):
            spec = family_spec("dim4", p)
            a = analytic_rho_c1c2(p, kt)
            b = analytic_rho_c1r2(p, kt)
            assert np.max(np.abs(a.data - pair_state(spec, kt, "c1c2").data)) < 1e-12
            assert np.max(np.abs(b.data - pair_state(spec, kt, "c1r2").data)) < 1e-12


def test_analytic_matrix_reference_entries():
    # frozen reference entries at p=0.3, kappa_t=0.8
    a = analytic_rho_c1c2(0.3, 0.8).data
    assert abs(a[0, 0] - 0.3338030696920229) < 1e-15
    assert abs(a[0, 5] - 0.1499988704877273) < 1e-15
    assert abs(a[1, 6] - 0.09531576385199694) < 1e-15
    assert abs(a[7, 7] - 0.014266771392428178) < 1e-15
    b = analytic_rho_c1r2(0.3, 0.8).data
    assert abs(b[0, 0] - 0.2752631604753806) < 1e-15
    assert abs(b[0, 5] - 0.13549544037430866) < 1e-15
    assert abs(b[2, 7] - 0.05279354642860852) < 1e-15


def test_swap_xi_chi_mirrors_pair_states():
    # swapping survival and leakage amplitudes maps c1c2 onto r1r2 and
    # c1r2 onto r1c2: check through the smallest eigenvalue of each pair

    def min_eig_c1c2(p, xi, chi):
        kt = -2.0 * math.log(xi)
        return eigvals_hermitian(pair_state(family_spec("dim4", p), kt, "c1c2").data)[0]

    spec = family_spec("dim4", 0.3)
    for kt in (0.3, 0.9):
        mirrored = swap_xi_chi(min_eig_c1c2, 0.3, kt)
        direct = eigvals_hermitian(pair_state(spec, kt, "r1r2").data)[0]
        assert abs(mirrored - direct) < 1e-12
