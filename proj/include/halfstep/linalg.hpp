#pragma once

#include <vector>

#include "halfstep/lattice.hpp"

namespace halfstep::linalg {

struct Svd {
  Matrix U;
  Eigen::VectorXd s;  // descending
  Matrix V;
};

Svd svd(const Matrix& m);
// Descending, min(rows, cols) values.
Eigen::VectorXd singular_values(const Matrix& m);

// Hermitian square root with negative eigenvalues above -clip floored to zero.
Matrix hermitian_sqrt(const Matrix& h, double clip = 1e-12);

// U V* from the SVD; the unitary factor of an invertible square matrix.
Matrix polar_unitary(const Matrix& m);

// Orthonormal basis of the orthogonal complement of span(q) in C^n.
Matrix orth_complement(const Matrix& q, Index n);

// Orthonormal eigenbasis of the Hermitian matrix q* diag(weights) q, ascending eigenvalues.
struct Localized {
  Matrix basis;                 // q times eigenvectors
  Eigen::VectorXd expectation;  // eigenvalues
};
Localized diagonalize_weight(const Matrix& q, const Eigen::VectorXd& weights);

// Rebases the columns of q so they are ordered by position expectation, with ties
// (within 1e-6) resolved by diagonalizing the grading and putting +1 first.
Matrix position_ordered(const Matrix& q, const Eigen::VectorXd& positions, const Eigen::VectorXd& grading);

// Near-null directions of m: singular values below tol, or below tol·σ_max when relative.
struct NullSpace {
  Matrix right;  // ker m
  Matrix left;   // ker m*
  std::vector<double> right_values;
  std::vector<double> left_values;
  double largest = 0.0;
};
NullSpace near_null(const Matrix& m, double tol, bool relative = false);

// Projector-weighted mass of each column: sum over rows of weight |q_ij|^2.
std::vector<double> masses(const Matrix& q, const Eigen::VectorXd& weights);

}  // namespace halfstep::linalg
