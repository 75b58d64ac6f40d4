// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace cirauth {

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
    if (data.size() != rows * cols) {
        throw ShapeError("Matrix: data length " + std::to_string(data.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    }
}

Matrix Matrix::column(std::vector<double> values) {
    std::size_t n = values.size();
    return Matrix(n, 1, std::move(values));
}

bool Matrix::all_finite() const {
    for (double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* where) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(where) + ": shape mismatch " + std::to_string(a.rows) +
                         "x" + std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" +
                         std::to_string(b.cols));
    }
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw ShapeError("multiply: inner dimensions " + std::to_string(a.cols) + " vs " +
                         std::to_string(b.rows));
    }
    Matrix c(a.rows, b.cols);
    const double* pa = a.data.data();
    const double* pb = b.data.data();
    double* pc = c.data.data();
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = pa[i * a.cols + k];
            if (aik == 0.0) continue;
            const double* brow = pb + k * b.cols;
            double* crow = pc + i * b.cols;
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix multiply_bt(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols) {
        throw ShapeError("multiply_bt: inner dimensions " + std::to_string(a.cols) + " vs " +
                         std::to_string(b.cols));
    }
    Matrix c(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + i * a.cols;
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = b.data.data() + j * b.cols;
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            c(i, j) = acc;
        }
    }
    return c;
}

Matrix multiply_at(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows) {
        throw ShapeError("multiply_at: inner dimensions " + std::to_string(a.rows) + " vs " +
                         std::to_string(b.rows));
    }
    Matrix c(a.cols, b.cols);
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double* arow = a.data.data() + k * a.cols;
        const double* brow = b.data.data() + k * b.cols;
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* crow = c.data.data() + i * b.cols;
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
        }
    }
    return c;
}

Matrix add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] += b.data[i];
    return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "subtract");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] -= b.data[i];
    return c;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "hadamard");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] *= b.data[i];
    return c;
}

Matrix scaled(const Matrix& a, double factor) {
    Matrix c = a;
    for (double& v : c.data) v *= factor;
    return c;
}

void add_in_place(Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add_in_place");
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

void scale_in_place(Matrix& a, double factor) {
    for (double& v : a.data) v *= factor;
}

void add_column_broadcast(Matrix& m, const Matrix& column) {
    if (column.rows != m.rows || column.cols != 1) {
        throw ShapeError("add_column_broadcast: column is " + std::to_string(column.rows) + "x" +
                         std::to_string(column.cols) + ", matrix has " + std::to_string(m.rows) +
                         " rows");
    }
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double v = column(i, 0);
        double* row = m.data.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) row[j] += v;
    }
}

Matrix row_sums(const Matrix& m) {
    Matrix c(m.rows, 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double acc = 0.0;
        const double* row = m.data.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) acc += row[j];
        c(i, 0) = acc;
    }
    return c;
}

double sum(const Matrix& m) {
    double acc = 0.0;
    for (double v : m.data) acc += v;
    return acc;
}

double sum_squares(const Matrix& m) {
    double acc = 0.0;
    for (double v : m.data) acc += v * v;
    return acc;
}

double squared_distance(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "squared_distance");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        acc += d * d;
    }
    return acc;
}

}  // namespace cirauth
