#pragma once

// Eigenface model: mean face plus the leading principal directions of a set
// of training images, found through the small M x M Gram matrix A^T A.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "svdlab/decompose.hpp"
#include "svdlab/matrix.hpp"

namespace svdlab {

/// Grayscale image as a flat column of width * height reals, row by row.
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  Vector pixels;
};

/// 8-bit PGM, plain (P2) or raw (P5). Throws Errc::ParseError or Errc::IoError.
Image read_pgm(std::istream& in);
Image read_pgm(const std::filesystem::path& path);
/// Raw P5 with values rounded and clamped to [0, 255].
void write_pgm(std::ostream& out, const Image& img);
void write_pgm(const std::filesystem::path& path, const Image& img);

struct LabeledImages {
  std::vector<Image> images;
  std::vector<std::string> labels;
};

/// Every *.pgm inside the class subdirectories of dir; the subdirectory name
/// is the label. Classes and files are taken in lexicographic order.
LabeledImages load_training_set(const std::filesystem::path& dir);

struct EigenfaceModel {
  std::size_t width = 0;
  std::size_t height = 0;
  Vector psi;                        // mean image
  DenseMatrix eigenfaces;            // pixels x k, orthonormal columns
  Vector energy_fractions;           // lambda_i / sum(lambda), descending, length k
  DenseMatrix class_projections;     // k x M, column i = Omega of training image i
  std::vector<std::string> labels;   // class of training image i
  std::size_t requested_k = 0;       // k asked for before any rank cap
  bool rank_capped = false;          // k was lowered because lambda_k was negligible

  std::size_t k() const noexcept { return eigenfaces.cols(); }
  std::size_t pixels() const noexcept { return width * height; }
  std::size_t training_count() const noexcept { return class_projections.cols(); }
};

struct TrainOptions {
  /// Number of eigenfaces; unset picks the smallest k whose cumulative
  /// energy fraction reaches energy_target.
  std::optional<std::size_t> k;
  double energy_target = 0.95;
  Algorithm backend = Algorithm::DivideConquer;
  DecomposeOptions decompose;
};

/// Throws DimensionMismatch for mixed sizes, InvalidInput for M < 2 or a bad
/// k, and RankDeficient when every eigenvalue is negligible. Eigenvalues with
/// lambda_i <= M * eps * lambda_1 are dropped and the model is marked capped.
EigenfaceModel train(const std::vector<Image>& images, const std::vector<std::string>& labels,
                     const TrainOptions& opt = {});

/// Omega = U^T (image - psi), using the first k eigenfaces (all when k is unset).
Vector project(const EigenfaceModel& m, const Image& img, std::optional<std::size_t> k = std::nullopt);
/// Centered reconstruction sum_i omega_i u_i from the first omega.size() eigenfaces.
Vector reconstruct(const EigenfaceModel& m, std::span<const double> omega);
/// ||Phi - Phi_hat|| for the first k eigenfaces.
double reconstruction_error(const EigenfaceModel& m, const Image& img, std::optional<std::size_t> k = std::nullopt);

struct Classification {
  std::string label;
  std::size_t nearest = 0;  // index of the closest training projection
  double distance = 0.0;    // Euclidean distance in Omega space
  double error = 0.0;       // reconstruction error of the image
};

/// Nearest stored projection in Omega space. Throws EmptyModel when the
/// model has no eigenfaces or no training projections.
Classification classify(const EigenfaceModel& m, const Image& img);

/// "EIGF" container, version 1, little-endian; see README for the layout.
void save_model(std::ostream& out, const EigenfaceModel& m);
void save_model(const std::filesystem::path& path, const EigenfaceModel& m);
EigenfaceModel load_model(std::istream& in);
EigenfaceModel load_model(const std::filesystem::path& path);

}  // namespace svdlab
