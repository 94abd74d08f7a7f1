import itertools
import random

import numpy as np
import pytest

from qcot.errors import GuardExceeded, UsageError
from qcot.exactla import FpMatrix, invert
from qcot.modrep import (ModuleRep, compose, decompose, direct_sum,
                         enumerate_indecomposables, hom_dim, identity_intertwiner,
                         intertwiner_is_iso, is_indecomposable, is_isomorphic,
                         module_from_data, module_to_data, projective)


def test_iso_reflexive(kqba):
    M = projective(kqba, 0)
    w = is_isomorphic(M, M)
    assert w is not None and intertwiner_is_iso(w)


def test_iso_dimension_obstruction(kqba):
    s1 = ModuleRep.simple(kqba, 0)
    s2 = ModuleRep.simple(kqba, 1)
    assert is_isomorphic(s1, s2) is None


def test_iso_after_conjugation(kqba):
    # conjugate P_1 by an invertible change of basis at each vertex
    M = projective(kqba, 0)
    rng = random.Random(2)
    p = kqba.p
    chg = []
    for d in M.dims:
        while True:
            c = FpMatrix(p, [[rng.randrange(p) for _ in range(d)] for _ in range(d)])
            if invert(c) is not None:
                chg.append(c)
                break
    mats = []
    for a in range(len(kqba.arrows)):
        s, t = kqba.arrow_source(a), kqba.arrow_target(a)
        mats.append(invert(chg[t]) @ M.mats[a] @ chg[s])
    N = ModuleRep(kqba, M.dims, mats)
    w = is_isomorphic(M, N)
    assert w is not None and intertwiner_is_iso(w)


def test_decompose_sum_of_simples(kqba):
    s1 = ModuleRep.simple(kqba, 0)
    M = s1.direct_sum(s1)
    parts = decompose(M)
    assert len(parts) == 2
    for fac, incl, proj in parts:
        assert fac.dims == s1.dims
        assert is_isomorphic(fac, s1, known_indec=True) is not None
        assert intertwiner_is_iso(compose(proj, incl))


def test_projective_indecomposable(kqba):
    assert is_indecomposable(projective(kqba, 0))


def test_regular_module_decomposes_into_projectives(kqba):
    regular = direct_sum([projective(kqba, v) for v in range(3)])
    parts = decompose(regular)
    assert len(parts) == 3
    found = sorted(fac.dims for fac, _, _ in parts)
    expect = sorted(projective(kqba, v).dims for v in range(3))
    assert found == expect
    for fac, _, _ in parts:
        matches = [v for v in range(3) if is_isomorphic(fac, projective(kqba, v), known_indec=True)]
        assert len(matches) == 1


def test_decompose_witness_assembles_identity(kqba):
    M = direct_sum([projective(kqba, 0), ModuleRep.simple(kqba, 1), projective(kqba, 2)])
    parts = decompose(M)
    total = None
    for fac, incl, proj in parts:
        part = compose(incl, proj)
        total = part if total is None else tuple(a + b for a, b in zip(total, part))
    assert total == identity_intertwiner(M)


def test_decompose_idempotent(kqba):
    M = direct_sum([projective(kqba, 0), projective(kqba, 0), ModuleRep.simple(kqba, 2)])
    for fac, _, _ in decompose(M):
        again = decompose(fac)
        assert len(again) == 1
        assert again[0][0].dims == fac.dims


def test_dims_add_up(kqba):
    M = direct_sum([projective(kqba, 0), ModuleRep.simple(kqba, 1)])
    parts = decompose(M)
    sums = [sum(col) for col in zip(*[f.dims for f, _, _ in parts])]
    assert tuple(sums) == M.dims


def test_enumerate_paper_example(kqba):
    # [PAPER] exactly five indecomposables: P_1, P_2, P_3 = S_3, S_1, S_2
    indecs = enumerate_indecomposables(kqba, 3)
    assert len(indecs) == 5
    dimsets = sorted(m.dims for m in indecs)
    assert dimsets == sorted([(1, 1, 0), (0, 1, 1), (0, 0, 1), (1, 0, 0), (0, 1, 0)])


def test_enumerate_point(point):
    assert len(enumerate_indecomposables(point, 4)) == 1


def test_enumerate_loop(loop):
    # oracle: 1-dim (x acts 0) and 2-dim regular (x acts by the nilpotent Jordan block)
    indecs = enumerate_indecomposables(loop, 2)
    assert len(indecs) == 2
    assert sorted(m.total_dim for m in indecs) == [1, 2]


def test_enumerate_ka2(ka2):
    indecs = enumerate_indecomposables(ka2, 4)
    assert len(indecs) == 3
    assert sorted(m.dims for m in indecs) == [(0, 1), (1, 0), (1, 1)]


def test_enumeration_guard():
    from qcot.algebra import from_data
    data = {
        "field": {"p": 2},
        "quiver": {"vertices": ["1", "2"],
                   "arrows": [{"name": "a", "source": "1", "target": "2"},
                              {"name": "b", "source": "1", "target": "2"}]},
        "relations": [],
    }
    kronecker = from_data(data)
    with pytest.raises(GuardExceeded):
        enumerate_indecomposables(kronecker, 8, guard=1000)


def test_random_modules_are_sums_of_enumerated(kqba):
    from helpers import random_module

    indecs = enumerate_indecomposables(kqba, 4)
    rng = random.Random(17)
    for _ in range(12):
        M = random_module(rng, kqba, max_vertex_dim=2)
        for fac, _, _ in decompose(M):
            hit = [k for k in indecs
                   if fac.dims == k.dims and is_isomorphic(fac, k, known_indec=True)]
            assert len(hit) == 1


def test_module_file_round_trip(kqba):
    M = projective(kqba, 0)
    data = module_to_data(M)
    back = module_from_data(kqba, data)
    assert back.dims == M.dims
    assert is_isomorphic(M, back) is not None


def test_hom_dim_basics(kqba):
    s1 = ModuleRep.simple(kqba, 0)
    s2 = ModuleRep.simple(kqba, 1)
    assert hom_dim(s1, s2) == 0
    assert hom_dim(s1, s1) == 1
    assert hom_dim(projective(kqba, 0), s1) == 1


def _m2_blocked():
    import numpy as np
    from qcot.algebra import sc_algebra_from_endo, SCAlgebra
    p = 2
    mats = [
        FpMatrix(p, [[1, 0], [0, 0]]),
        FpMatrix(p, [[0, 1], [0, 0]]),
        FpMatrix(p, [[0, 0], [1, 0]]),
        FpMatrix(p, [[0, 0], [0, 1]]),
    ]
    raw = sc_algebra_from_endo(p, mats)
    return SCAlgebra(p, raw.table, raw.unit_vec,
                     blocks=((0, 3), ((0, 0), (0, 1), (1, 0), (1, 1))))


def test_sc_enumerate_matrix_algebra():
    from qcot.modrep import enumerate_sc_modules
    B = _m2_blocked()
    indecs = enumerate_sc_modules(B, 3)
    assert len(indecs) == 1
    assert indecs[0].dim == 2


def test_sc_enumerate_dual_numbers():
    import numpy as np
    from qcot.algebra import SCAlgebra
    from qcot.modrep import enumerate_sc_modules
    # k[x]/(x^2): basis {1, x}
    table = np.zeros((2, 2, 2), dtype=np.int64)
    table[0, 0, 0] = 1
    table[0, 1, 1] = 1
    table[1, 0, 1] = 1
    B = SCAlgebra(2, table, np.array([1, 0]), blocks=((0,), ((0, 0), (0, 0))))
    indecs = enumerate_sc_modules(B, 3)
    assert sorted(v.dim for v in indecs) == [1, 2]


def test_sc_hom_and_iso():
    from qcot.modrep import SCModule, enumerate_sc_modules, sc_decompose, sc_hom_dim, sc_is_isomorphic
    B = _m2_blocked()
    simple = enumerate_sc_modules(B, 2)[0]
    assert sc_hom_dim(simple, simple) == 1
    double = simple.direct_sum(simple)
    parts = sc_decompose(double)
    assert len(parts) == 2
    for fac, incl, proj in parts:
        assert sc_is_isomorphic(fac, simple, known_indec=True) is not None
        assert (proj @ incl) == FpMatrix.identity(2, fac.dim)
