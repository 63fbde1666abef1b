import numpy as np
import pytest

from multiport_ghz.linalg import build_2n_port, build_dft, compose, embed_two_mode, is_unitary


class TestBuildDft:
    def test_n1(self):
        assert np.allclose(build_dft(1), [[1]])

    def test_n2(self):
        assert np.allclose(build_dft(2), np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)

    def test_n3_last_row(self):
        w = np.exp(2j * np.pi / 3)
        assert np.allclose(build_dft(3)[2], np.array([1, w**2, w]) / np.sqrt(3), atol=1e-15)

    @pytest.mark.parametrize("n", range(1, 17))
    def test_unitary(self, n):
        assert is_unitary(build_dft(n), 1e-12)

    @pytest.mark.parametrize("n", [5, 7, 12, 16])
    def test_periodicity_matches_direct_exponent(self, n):
        k = np.arange(n)
        direct = np.exp(2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)
        assert np.max(np.abs(build_dft(n) - direct)) < 1e-14

    @pytest.mark.parametrize("bad", [0, -1, 2.5])
    def test_rejects_bad_n(self, bad):
        with pytest.raises(ValueError):
            build_dft(bad)


class TestBuild2nPort:
    def test_n1(self):
        assert np.allclose(build_2n_port(1), [[1, 0], [0, -1]])

    def test_n2_blocks(self):
        u = build_2n_port(2)
        assert np.allclose(u[:2, :2], [[0.5, 0.5], [0.5, 0.5]])
        assert np.allclose(u[:2, 2:], [[0.5, -0.5], [-0.5, 0.5]])

    @pytest.mark.parametrize("n", range(1, 17))
    def test_unitary(self, n):
        assert is_unitary(build_2n_port(n), 1e-12)

    def test_root_block_squares_to_complement(self):
        n = 5
        u = build_2n_port(n)
        a = u[:n, :n]
        root = u[:n, n:]
        assert np.allclose(root @ root, np.eye(n) - a @ a.conj().T, atol=1e-14)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            build_2n_port(0)


class TestEmbedTwoMode:
    def test_full_embedding(self):
        assert np.allclose(embed_two_mode(2, 1, 2, build_dft(2)), build_dft(2))

    def test_identity(self):
        assert np.allclose(embed_two_mode(3, 1, 2, np.eye(2)), np.eye(3))

    def test_swap(self):
        swap = embed_two_mode(3, 2, 3, [[0, 1], [1, 0]])
        assert np.allclose(swap, [[1, 0, 0], [0, 0, 1], [0, 1, 0]])

    @pytest.mark.parametrize("i,j", [(1, 1), (2, 1), (0, 2), (2, 4)])
    def test_rejects_bad_indices(self, i, j):
        with pytest.raises(ValueError):
            embed_two_mode(3, i, j, np.eye(2))

    def test_rejects_nonunitary_block(self):
        with pytest.raises(ValueError):
            embed_two_mode(3, 1, 2, [[1, 0], [0, 2]])

    def test_disjoint_embeddings_commute(self):
        g = build_dft(2)
        h = np.array([[0, 1j], [1j, 0]])
        a = embed_two_mode(5, 1, 3, g)
        b = embed_two_mode(5, 2, 5, h)
        assert np.max(np.abs(compose(a, b) - compose(b, a))) < 1e-14


class TestCompose:
    def test_identity(self):
        u = build_dft(4)
        assert np.allclose(compose(u, np.eye(4)), u)

    def test_network_order(self):
        # a photon in mode 1 is first swapped to mode 2, then sees the phase on mode 2
        swap = np.array([[0, 1], [1, 0]])
        phase = np.diag([1, 1j])
        total = compose(swap, phase)
        assert total[0, 1] == pytest.approx(1j)
        assert total[0, 0] == 0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            compose(np.eye(2), np.eye(3))


class TestIsUnitary:
    def test_dft(self):
        assert is_unitary(build_dft(5), 1e-12)

    def test_non_unitary(self):
        assert not is_unitary([[1, 0], [0, 2]], 1e-12)

    def test_non_square(self):
        assert not is_unitary(np.ones((2, 3)))

    def test_nan(self):
        assert not is_unitary([[np.nan, 0], [0, 1]])
