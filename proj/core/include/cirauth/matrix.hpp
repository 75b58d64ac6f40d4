// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <cstddef>
#include <vector>

#include "cirauth/errors.hpp"

namespace cirauth {

/// Dense row-major matrix of doubles. Column vectors are rows x 1 matrices;
/// sample batches are stored feature-major (features x batch).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    Matrix(std::size_t r, std::size_t c, std::vector<double> values);

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }

    bool all_finite() const;

    static Matrix column(std::vector<double> values);
};

bool operator==(const Matrix& a, const Matrix& b);

/// C = A * B.
Matrix multiply(const Matrix& a, const Matrix& b);
/// C = A * B^T.
Matrix multiply_bt(const Matrix& a, const Matrix& b);
/// C = A^T * B.
Matrix multiply_at(const Matrix& a, const Matrix& b);

Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scaled(const Matrix& a, double factor);

void add_in_place(Matrix& a, const Matrix& b);
void scale_in_place(Matrix& a, double factor);

/// Adds a column vector to every column of m.
void add_column_broadcast(Matrix& m, const Matrix& column);

/// Row sums as a rows x 1 matrix (multiplication by the all-ones vector).
Matrix row_sums(const Matrix& m);

double sum(const Matrix& m);
double sum_squares(const Matrix& m);
/// Sum of squared differences, i.e. ||a - b||_F^2.
double squared_distance(const Matrix& a, const Matrix& b);

void require_same_shape(const Matrix& a, const Matrix& b, const char* where);

}  // namespace cirauth
