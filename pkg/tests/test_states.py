import json
import math

import numpy as np
import pytest

import tanglekit as tk
from tanglekit.errors import (
    BadBitstring,
    DuplicateBasisTerm,
    EmptyKeepSet,
    IncompatibleQubitCount,
    IndexOutOfRange,
    ShapeMismatch,
    TooManyQubits,
    UnnormalizedState,
)

from tests.oracles import brute_reduced_density, random_state

S2 = 1.0 / math.sqrt(2.0)


def test_make_state_bell():
    st = tk.make_state(2, [("00", S2), ("11", S2)])
    assert np.allclose(st.amplitudes, [S2, 0, 0, S2])
    assert st.is_normalized()


def test_make_state_basis():
    st = tk.make_state(3, [("000", 1)])
    assert st.amplitudes[0] == 1 and np.count_nonzero(st.amplitudes) == 1


def test_make_state_no_implicit_normalization():
    st = tk.make_state(2, [("01", 2.0)])
    assert st.norm() == 2.0


def test_make_state_duplicate():
    with pytest.raises(DuplicateBasisTerm):
        tk.make_state(2, [("00", 1), ("00", 1)])


def test_make_state_bad_bitstring():
    with pytest.raises(BadBitstring):
        tk.make_state(2, [("012", 1)])
    with pytest.raises(BadBitstring):
        tk.make_state(2, [("0a", 1)])


def test_max_qubits_cap():
    with pytest.raises(TooManyQubits):
        tk.PureState(17, np.zeros(1 << 17))


def test_generate_ghz():
    st = tk.generate("ghz", 3)
    assert np.allclose(st.amplitudes[[0, 7]], [S2, S2])
    assert np.count_nonzero(st.amplitudes) == 2


def test_generate_x3():
    st = tk.generate("x", 3)
    expected = np.zeros(8)
    for idx in (0b111, 0b100, 0b010, 0b001):
        expected[idx] = 0.5
    assert np.allclose(st.amplitudes, expected)


def test_generate_x4():
    st = tk.generate("x", 4)
    assert abs(st.amplitude("1111") - math.sqrt(2.0) / math.sqrt(6.0)) < 1e-15
    for bits in ("1000", "0100", "0010", "0001"):
        assert abs(st.amplitude(bits) - 1.0 / math.sqrt(6.0)) < 1e-15
    assert abs(st.norm() - 1.0) < 1e-14


def test_generate_chi5():
    st = tk.generate("chi5", 5)
    support = st.support()
    assert len(support) == 6
    assert all(abs(st.amplitudes[i] - 1 / math.sqrt(6)) < 1e-15 for i in support)


def test_generate_kind_qubit_guards():
    with pytest.raises(IncompatibleQubitCount):
        tk.generate("bell", 3)
    with pytest.raises(IncompatibleQubitCount):
        tk.generate("chi5", 4)
    with pytest.raises(IncompatibleQubitCount):
        tk.generate("x", 2)


def test_apply_local_identity():
    rng = np.random.default_rng(0)
    st = random_state(rng, 3)
    out = tk.apply_local(st, [np.eye(2)] * 3)
    assert np.allclose(out.amplitudes, st.amplitudes)


def test_apply_local_diagonal_on_bell():
    bell = tk.generate("bell", 2)
    out = tk.apply_local(bell, [np.diag([2.0, 0.5]), np.eye(2)])
    assert abs(out.amplitude("00") - 2.0 / math.sqrt(2.0)) < 1e-15
    assert abs(out.amplitude("11") - 0.5 / math.sqrt(2.0)) < 1e-15


def test_apply_local_hadamard_x3():
    # exact image of the length-four maximal state under H x H x H:
    # equal moduli with GHZ, relative sign on |111>
    x3 = tk.generate("x", 3)
    out = tk.apply_local(x3, [tk.HADAMARD] * 3)
    expected = np.zeros(8)
    expected[0] = S2
    expected[7] = -S2
    assert np.allclose(out.amplitudes, expected, atol=1e-14)
    ghz = tk.generate("ghz", 3)
    assert np.allclose(np.abs(out.amplitudes), np.abs(ghz.amplitudes), atol=1e-14)


def test_apply_local_unitary_preserves_norm():
    rng = np.random.default_rng(5)
    for q in (2, 3, 4):
        st = random_state(rng, q)
        ops = []
        for _ in range(q):
            mat = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            uu, _ = np.linalg.qr(mat)
            ops.append(uu)
        out = tk.apply_local(st, ops)
        assert abs(out.norm() - 1.0) <= 1e-12


def test_apply_local_shape_errors():
    bell = tk.generate("bell", 2)
    with pytest.raises(ShapeMismatch):
        tk.apply_local(bell, [np.eye(2)])
    with pytest.raises(ShapeMismatch):
        tk.apply_local(bell, [np.eye(3), np.eye(2)])


def test_reduced_density_ghz():
    rho = tk.reduced_density(tk.generate("ghz", 3), {1})
    assert np.allclose(rho.entries, np.eye(2) / 2)


def test_reduced_density_w3():
    rho = tk.reduced_density(tk.generate("w", 3), {1})
    assert np.allclose(rho.entries, np.diag([2 / 3, 1 / 3]))
    assert np.allclose(sorted(np.linalg.eigvalsh(rho.entries)), [1 / 3, 2 / 3])


def test_reduced_density_product():
    rho = tk.reduced_density(tk.make_state(2, [("00", 1)]), {2})
    assert np.allclose(rho.entries, np.diag([1.0, 0.0]))


def test_reduced_density_matches_bruteforce():
    rng = np.random.default_rng(11)
    for _ in range(10):
        q = int(rng.integers(2, 5))
        st = random_state(rng, q)
        size = int(rng.integers(1, q))
        keep = sorted(rng.choice(np.arange(1, q + 1), size=size, replace=False))
        rho = tk.reduced_density(st, keep)
        assert np.allclose(rho.entries, brute_reduced_density(st, keep), atol=1e-12)


def test_reduced_density_schmidt_property():
    rng = np.random.default_rng(12)
    for _ in range(10):
        q = int(rng.integers(2, 6))
        st = random_state(rng, q)
        size = int(rng.integers(1, q))
        keep = sorted(rng.choice(np.arange(1, q + 1), size=size, replace=False))
        comp = [k for k in range(1, q + 1) if k not in keep]
        ev_a = np.linalg.eigvalsh(tk.reduced_density(st, keep).entries)
        ev_b = np.linalg.eigvalsh(tk.reduced_density(st, comp).entries)
        ev_a = np.sort(ev_a[ev_a > 1e-12])[::-1]
        ev_b = np.sort(ev_b[ev_b > 1e-12])[::-1]
        assert ev_a.size == ev_b.size
        assert np.allclose(ev_a, ev_b, atol=1e-10)


def test_reduced_density_errors():
    ghz = tk.generate("ghz", 2)
    with pytest.raises(EmptyKeepSet):
        tk.reduced_density(ghz, set())
    with pytest.raises(IndexOutOfRange):
        tk.reduced_density(ghz, {3})
    with pytest.raises(UnnormalizedState):
        tk.reduced_density(tk.make_state(2, [("00", 2.0)]), {1})


def test_telescope_bell_to_ghz():
    out = tk.telescope(tk.generate("bell", 2), 1)
    assert np.allclose(out.amplitudes, tk.generate("ghz", 3).amplitudes)


def test_telescope_ghz3_to_ghz4():
    out = tk.telescope(tk.generate("ghz", 3), 2)
    assert np.allclose(out.amplitudes, tk.generate("ghz", 4).amplitudes)


def test_telescope_preserves_support_size_and_balance():
    rng = np.random.default_rng(3)
    st = tk.generate("x", 4)
    for qubit in (1, 3):
        out = tk.telescope(st, qubit)
        assert len(out.support()) == len(st.support())
        rep_in = tk.analyze(tk.support_matrices(st).alternating)
        rep_out = tk.analyze(tk.support_matrices(out).alternating)
        assert rep_out.is_balanced == rep_in.is_balanced
        assert rep_out.witness == rep_in.witness
    with pytest.raises(IndexOutOfRange):
        tk.telescope(st, 9)


def test_random_sl2_determinant_and_determinism():
    op1 = tk.random_sl2(7, 10.0)
    op2 = tk.random_sl2(7, 10.0)
    assert abs(op1.determinant() - 1.0) < 1e-14
    assert np.array_equal(op1.entries, op2.entries)
    op3 = tk.random_sl2(8, 10.0)
    assert not np.allclose(op1.entries, op3.entries)
    assert np.linalg.cond(op1.entries) <= 10.0
    with pytest.raises(ValueError):
        tk.random_sl2(1, 0.5)


def test_state_json_roundtrip():
    rng = np.random.default_rng(21)
    st = random_state(rng, 3)
    obj = tk.state_to_json(st)
    back = tk.state_from_json(obj)
    assert np.allclose(back.amplitudes, st.amplitudes)
    # serialized form is valid JSON
    back2 = tk.state_from_json(json.loads(json.dumps(obj)))
    assert np.allclose(back2.amplitudes, st.amplitudes)


def test_state_json_duplicate_is_load_error():
    obj = {
        "qubits": 2,
        "terms": [
            {"basis": "00", "amp": [1.0, 0.0]},
            {"basis": "00", "amp": [0.5, 0.0]},
        ],
    }
    with pytest.raises(DuplicateBasisTerm):
        tk.state_from_json(obj)


def test_state_file_roundtrip(tmp_path):
    st = tk.generate("x", 4)
    path = tmp_path / "x4.json"
    tk.save_state(st, path)
    assert np.allclose(tk.load_state(path).amplitudes, st.amplitudes)


def test_density_json_roundtrip(tmp_path):
    rho = tk.reduced_density(tk.generate("ghz", 3), {1, 2})
    path = tmp_path / "rho.json"
    tk.save_density(rho, path)
    back = tk.load_density(path)
    assert back.dim == rho.dim
    assert np.allclose(back.entries, rho.entries)


def test_density_validate():
    good = tk.DensityMatrix(2, np.eye(2) / 2)
    good.validate()
    with pytest.raises(tk.TanglekitError):
        tk.DensityMatrix(2, np.array([[1.0, 1.0], [0.0, 0.0]])).validate()


def test_subnormalized_states_are_first_class():
    st = tk.make_state(3, [("000", 1), ("111", 1), ("001", 2j)])
    assert st.norm() > 1
    # support matrices and filter evaluation accept them unchanged
    sup = tk.support_matrices(st)
    assert sup.binary.length == 3
    tk.eval_filter(st, tk.builtin("F3_1"))
