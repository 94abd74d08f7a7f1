import itertools

import pytest

from qcot.homology import (ext1_dim, hom_dim, injective, injective_envelope,
                           is_injective_module, is_projective_module,
                           min_presentation_data, projective_cover,
                           stable_hom_mod_inj, tau, tau_inverse)
from qcot.modrep import (ModuleRep, decompose, enumerate_indecomposables,
                         is_isomorphic, projective)


def S(A, v):
    return ModuleRep.simple(A, v)


def test_hom_examples(kqba):
    assert hom_dim(projective(kqba, 0), S(kqba, 0)) == 1
    assert hom_dim(S(kqba, 0), S(kqba, 1)) == 0
    for M in [projective(kqba, 0), S(kqba, 1)]:
        assert hom_dim(M, M) >= 1


def test_projective_cover_of_projective(kqba):
    P1 = projective(kqba, 0)
    cov = projective_cover(P1)
    assert cov.source.verts == (0,)
    assert cov.source.module.total_dim == P1.total_dim


def test_cover_of_simples(kqba):
    # cover of S_1 is P_1 with kernel S_2; cover of S_2 is P_2 with kernel S_3
    from qcot.modrep import kernel_sub
    cov = projective_cover(S(kqba, 0))
    assert cov.source.verts == (0,)
    ker = kernel_sub(cov.epi, cov.source.module)
    assert is_isomorphic(ker.sub, S(kqba, 1)) is not None
    cov2 = projective_cover(S(kqba, 1))
    assert cov2.source.verts == (1,)
    ker2 = kernel_sub(cov2.epi, cov2.source.module)
    assert is_isomorphic(ker2.sub, S(kqba, 2)) is not None


def test_min_presentation_examples(kqba):
    pres = min_presentation_data(S(kqba, 0))
    assert pres.p0.verts == (0,)
    assert pres.p1.verts == (1,)
    pres_p = min_presentation_data(projective(kqba, 1))
    assert pres_p.p1.verts == ()
    pres_z = min_presentation_data(ModuleRep.zero(kqba))
    assert pres_z.p0.verts == () and pres_z.p1.verts == ()


def test_presentation_h0(kqba):
    from qcot.modrep import kernel_sub
    for M in enumerate_indecomposables(kqba, 4):
        pres = min_presentation_data(M)
        from qcot.modrep import image_sub
        img = image_sub(pres.diff, pres.p1.module, pres.p0.module)
        assert is_isomorphic(img.quotient, M) is not None


def test_tau_of_projectives_vanishes(kqba, ka2, ka3):
    for A in (kqba, ka2, ka3):
        for v in range(A.n_vertices):
            assert tau(projective(A, v)).is_zero()


def test_tau_s1_is_s2(kqba):
    t = tau(S(kqba, 0))
    assert is_isomorphic(t, S(kqba, 1)) is not None
    # cross-check via the AR formula: Ext^1(S_1, S_2) is at least 1
    assert ext1_dim(S(kqba, 0), S(kqba, 1)) >= 1


def test_tau_round_trip(kqba, ka3, loop):
    for A in (kqba, ka3, loop):
        for M in enumerate_indecomposables(A, 4):
            if is_projective_module(M):
                continue
            back = tau_inverse(tau(M))
            assert is_isomorphic(back, M) is not None


def test_tau_inverse_of_injectives(kqba):
    for v in range(3):
        assert tau_inverse(injective(kqba, v)).is_zero()


def test_duality_involution(kqba, ka3):
    for A in (kqba, ka3):
        for M in enumerate_indecomposables(A, 3):
            dd = M.dual().dual()
            assert dd.algebra is A
            assert is_isomorphic(dd, M) is not None


def test_ext1_examples(kqba):
    for v in range(3):
        for M in enumerate_indecomposables(kqba, 3):
            assert ext1_dim(projective(kqba, v), M) == 0
    assert ext1_dim(S(kqba, 0), S(kqba, 1)) == 1
    assert ext1_dim(S(kqba, 0), S(kqba, 2)) == 0


def test_ext1_nonsplit_extension_witness(kqba):
    # the extension 0 -> S_2 -> P_1 -> S_1 -> 0 is not split: Hom(P_1, S_2) = 0
    assert hom_dim(projective(kqba, 0), S(kqba, 1)) == 0
    assert ext1_dim(S(kqba, 0), S(kqba, 1)) == 1


def test_stable_hom_injective_source(kqba):
    for v in range(3):
        I = injective(kqba, v)
        for M in enumerate_indecomposables(kqba, 3):
            assert stable_hom_mod_inj(I, M) == 0


def test_ar_formula_sweep(kqba, ka2, ka3, loop):
    # dim Ext^1(M, N) == dim stable-Hom(N, tau M) over all indecomposable pairs
    for A in (kqba, ka2, ka3, loop):
        indecs = enumerate_indecomposables(A, 4)
        for M in indecs:
            tM = tau(M)
            for N in indecs:
                assert ext1_dim(M, N) == stable_hom_mod_inj(N, tM), (A.name, M.dims, N.dims)


def test_injective_envelope_embeds(kqba):
    for M in enumerate_indecomposables(kqba, 3):
        env, emb = injective_envelope(M)
        assert is_injective_module(env)
        from qcot.exactla import EchelonReport
        for v in range(3):
            assert EchelonReport(emb[v]).rank == M.dims[v]  # embedding is injective
