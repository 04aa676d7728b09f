import numpy as np
import pytest

from annmf import (
    InputError,
    Matrix,
    ShapeError,
    frobenius_norm,
    load_csv,
    matmul,
    residual_norm,
    save_csv,
)


class TestMatrix:
    def test_from_rows_shape(self):
        m = Matrix.from_rows([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        assert (m.rows, m.cols) == (3, 2)
        assert m.row(1) == [3.0, 4.0]
        assert m.col(1) == [2.0, 4.0, 6.0]

    def test_from_flat(self):
        m = Matrix.from_flat(2, 3, [1, 2, 3, 4, 5, 6])
        assert m.array[1, 2] == 6.0

    def test_from_flat_wrong_count(self):
        with pytest.raises(ShapeError):
            Matrix.from_flat(2, 3, [1, 2, 3])

    def test_ragged_rows_rejected(self):
        with pytest.raises(ShapeError):
            Matrix.from_rows([[1.0, 2.0], [3.0]])

    def test_empty_rejected(self):
        with pytest.raises(ShapeError):
            Matrix.from_rows([])

    def test_non_finite_rejected(self):
        with pytest.raises(InputError):
            Matrix.from_rows([[1.0, np.nan]])
        with pytest.raises(InputError):
            Matrix.from_rows([[np.inf, 1.0]])

    def test_one_dimensional_rejected(self):
        with pytest.raises(ShapeError):
            Matrix(np.array([1.0, 2.0]))

    def test_immutable(self):
        m = Matrix.identity(2)
        with pytest.raises(ValueError):
            m.array[0, 0] = 5.0

    def test_construction_copies_input(self):
        buf = np.ones((2, 2))
        m = Matrix(buf)
        buf[0, 0] = 99.0
        assert m.array[0, 0] == 1.0

    def test_data_row_major(self):
        m = Matrix.from_rows([[1.0, 2.0], [3.0, 4.0]])
        assert m.data == (1.0, 2.0, 3.0, 4.0)


class TestOps:
    def test_matmul(self):
        a = Matrix.from_rows([[1.0, 2.0], [3.0, 4.0]])
        b = Matrix.from_rows([[5.0], [6.0]])
        assert matmul(a, b).data == (17.0, 39.0)

    def test_matmul_mismatch(self):
        with pytest.raises(ShapeError):
            matmul(Matrix.identity(2), Matrix.identity(3))

    def test_frobenius(self):
        assert frobenius_norm(Matrix.from_rows([[3.0, 4.0]])) == 5.0

    def test_residual_norm_exact_factor(self):
        w = Matrix.from_rows([[1.0, 0.0], [0.0, 1.0]])
        h = Matrix.from_rows([[2.0, 0.0], [0.0, 2.0]])
        v = matmul(w, h)
        assert residual_norm(v, w, h) == 0.0

    def test_residual_norm_shape_checks(self):
        v = Matrix.identity(2)
        with pytest.raises(ShapeError):
            residual_norm(v, Matrix.identity(2), Matrix.identity(3))
        with pytest.raises(ShapeError):
            residual_norm(Matrix.identity(3), Matrix.identity(2), Matrix.identity(2))


class TestCsv:
    def test_round_trip_exact(self, tmp_path):
        m = Matrix.from_rows([[0.1, 1.0 / 3.0], [1e-17, 12345.678]])
        path = tmp_path / "m.csv"
        save_csv(m, path)
        back = load_csv(path)
        assert np.array_equal(back.array, m.array)

    def test_non_numeric_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1.0,2.0\n3.0,oops\n")
        with pytest.raises(InputError, match="line 2"):
            load_csv(path)

    def test_ragged_reports_line(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("1.0,2.0\n3.0\n")
        with pytest.raises(InputError, match="line 2"):
            load_csv(path)

    def test_non_finite_reports_line(self, tmp_path):
        path = tmp_path / "inf.csv"
        path.write_text("1.0,2.0\n3.0,inf\n")
        with pytest.raises(InputError, match="line 2"):
            load_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(InputError):
            load_csv(path)

    def test_trailing_blank_lines_tolerated(self, tmp_path):
        path = tmp_path / "padded.csv"
        path.write_text("1.0,2.0\n\n\n")
        assert load_csv(path).rows == 1
