#include "svdlab/eigenface.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "svdlab/errors.hpp"

namespace svdlab {

namespace {

// --- PGM ------------------------------------------------------------------

// Next header token, skipping whitespace and # comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw Error(Errc::ParseError, "pgm: truncated header");
  return tok;
}

std::size_t pgm_number(std::istream& in, const char* what) {
  const std::string tok = pgm_token(in);
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size() || tok[0] == '-') throw Error(Errc::ParseError, std::string("pgm: bad ") + what + " '" + tok + "'");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::IoError, "cannot write " + path.string());
  return f;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::IoError, "cannot read " + path.string());
  return f;
}

// --- little-endian container ------------------------------------------------

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), 4);
}

void put_f64(std::ostream& out, double x) {
  const auto v = std::bit_cast<std::uint64_t>(x);
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), 8);
}

void get_bytes(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw Error(Errc::ParseError, "model: truncated file");
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b;
  get_bytes(in, reinterpret_cast<char*>(b.data()), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  std::array<unsigned char, 8> b;
  get_bytes(in, reinterpret_cast<char*>(b.data()), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

constexpr std::array<char, 4> kMagic = {'E', 'I', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t narrow(std::size_t v, const char* what) {
  if (v > 0xffffffffu) throw Error(Errc::InvalidInput, std::string("model: ") + what + " too large");
  return static_cast<std::uint32_t>(v);
}

void require_image(const EigenfaceModel& m, const Image& img) {
  if (img.width != m.width || img.height != m.height || img.pixels.size() != m.pixels()) {
    throw Error(Errc::DimensionMismatch, "image is " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                                             ", model expects " + std::to_string(m.width) + "x" +
                                             std::to_string(m.height));
  }
}

std::size_t resolve_k(const EigenfaceModel& m, std::optional<std::size_t> k) {
  const std::size_t kk = k.value_or(m.k());
  if (kk > m.k()) throw Error(Errc::InvalidInput, "k exceeds the model's eigenface count");
  return kk;
}

Vector centered(const EigenfaceModel& m, const Image& img) {
  require_image(m, img);
  Vector phi(m.pixels());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = img.pixels[i] - m.psi[i];
  return phi;
}

Vector project_centered(const EigenfaceModel& m, std::span<const double> phi, std::size_t k) {
  Vector omega(k);
  for (std::size_t i = 0; i < k; ++i) omega[i] = dot(m.eigenfaces.col(i), phi);
  return omega;
}

}  // namespace

Image read_pgm(std::istream& in) {
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") throw Error(Errc::ParseError, "pgm: expected P2 or P5, got '" + magic + "'");
  Image img;
  img.width = pgm_number(in, "width");
  img.height = pgm_number(in, "height");
  const std::size_t maxval = pgm_number(in, "maxval");
  if (img.width == 0 || img.height == 0) throw Error(Errc::ParseError, "pgm: empty image");
  if (maxval == 0 || maxval > 255) throw Error(Errc::ParseError, "pgm: only 8-bit images are supported");
  const std::size_t n = img.width * img.height;
  img.pixels.resize(n);
  if (magic == "P5") {
    // pgm_token consumed the single whitespace byte after maxval
    std::vector<unsigned char> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) throw Error(Errc::ParseError, "pgm: truncated pixel data");
    for (std::size_t i = 0; i < n; ++i) {
      if (raw[i] > maxval) throw Error(Errc::ParseError, "pgm: pixel exceeds maxval");
      img.pixels[i] = raw[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t v = pgm_number(in, "pixel");
      if (v > maxval) throw Error(Errc::ParseError, "pgm: pixel exceeds maxval");
      img.pixels[i] = static_cast<double>(v);
    }
  }
  return img;
}

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream f = open_in(path);
  try {
    return read_pgm(f);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_pgm(std::ostream& out, const Image& img) {
  if (img.pixels.size() != img.width * img.height) throw Error(Errc::DimensionMismatch, "pgm: pixel count");
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  std::vector<unsigned char> raw(img.pixels.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = static_cast<unsigned char>(std::clamp(std::lround(img.pixels[i]), 0L, 255L));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

void write_pgm(const std::filesystem::path& path, const Image& img) {
  std::ofstream f = open_out(path);
  write_pgm(f, img);
}

LabeledImages load_training_set(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(Errc::IoError, dir.string() + " is not a directory");
  std::vector<fs::path> classes;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) classes.push_back(e.path());
  }
  std::sort(classes.begin(), classes.end());
  LabeledImages out;
  for (const auto& c : classes) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(c)) {
      if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      out.images.push_back(read_pgm(f));
      out.labels.push_back(c.filename().string());
    }
  }
  if (out.images.empty()) throw Error(Errc::InvalidInput, "no .pgm files in class subdirectories of " + dir.string());
  return out;
}

EigenfaceModel train(const std::vector<Image>& images, const std::vector<std::string>& labels,
                     const TrainOptions& opt) {
  const std::size_t m = images.size();
  if (m < 2) throw Error(Errc::InvalidInput, "training needs at least 2 images");
  if (labels.size() != m) throw Error(Errc::LengthMismatch, "one label per training image");
  const std::size_t w = images[0].width, h = images[0].height, n = w * h;
  for (const Image& img : images) {
    if (img.width != w || img.height != h || img.pixels.size() != n) {
      throw Error(Errc::DimensionMismatch, "training images differ in size");
    }
    for (double p : img.pixels) {
      if (!std::isfinite(p)) throw Error(Errc::NonFinite, "training pixel");
    }
  }
  if (opt.k && (*opt.k < 1 || *opt.k > m)) {
    throw Error(Errc::InvalidInput, "k must satisfy 1 <= k <= " + std::to_string(m));
  }

  EigenfaceModel model;
  model.width = w;
  model.height = h;
  model.labels = labels;
  model.psi.assign(n, 0.0);
  for (const Image& img : images) {
    for (std::size_t i = 0; i < n; ++i) model.psi[i] += img.pixels[i];
  }
  for (double& v : model.psi) v /= static_cast<double>(m);
  DenseMatrix a(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) a(i, j) = images[j].pixels[i] - model.psi[i];
  }

  // Small covariance (1/M) A^T A; 1/M scales the eigenvalues only.
  DenseMatrix g = multiply_tn(a, a);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = j; i < m; ++i) {
      g(i, j) /= static_cast<double>(m);
      g(j, i) = g(i, j);
    }
  }
  const SvdResult svd = decompose(opt.backend, SymmetricMatrix(std::move(g)), opt.decompose);
  const double lambda1 = svd.sigma[0];
  std::size_t rank = 0;
  while (rank < m && svd.sigma[rank] > static_cast<double>(m) * kEps * lambda1) ++rank;
  if (rank == 0) throw Error(Errc::RankDeficient, "training images have zero covariance");
  const double total = std::accumulate(svd.sigma.begin(), svd.sigma.begin() + rank, 0.0);

  std::size_t k;
  if (opt.k) {
    k = *opt.k;
  } else {
    k = 0;
    double cum = 0.0;
    while (k < rank && cum < opt.energy_target) cum += svd.sigma[k++] / total;
  }
  model.requested_k = k;
  if (k > rank) {
    k = rank;
    model.rank_capped = true;
  }

  // Lift u_i = A v_i. One re-orthogonalization pass keeps the columns
  // orthonormal when a small eigenvalue makes the lift inexact.
  model.eigenfaces = DenseMatrix(n, k);
  for (std::size_t i = 0; i < k; ++i) {
    auto u = model.eigenfaces.col(i);
    const auto v = svd.u.col(i);
    for (std::size_t j = 0; j < m; ++j) {
      const auto aj = a.col(j);
      for (std::size_t r = 0; r < n; ++r) u[r] += aj[r] * v[j];
    }
    for (std::size_t pass = 0; pass < 2; ++pass) {
      const double nrm = norm2(u);
      for (double& x : u) x /= nrm;
      if (pass == 1) break;
      for (std::size_t q = 0; q < i; ++q) {
        const auto uq = model.eigenfaces.col(q);
        const double c = dot(uq, u);
        for (std::size_t r = 0; r < n; ++r) u[r] -= c * uq[r];
      }
    }
  }
  model.energy_fractions.resize(k);
  for (std::size_t i = 0; i < k; ++i) model.energy_fractions[i] = svd.sigma[i] / total;
  model.class_projections = multiply_tn(model.eigenfaces, a);
  return model;
}

Vector project(const EigenfaceModel& m, const Image& img, std::optional<std::size_t> k) {
  const std::size_t kk = resolve_k(m, k);
  return project_centered(m, centered(m, img), kk);
}

Vector reconstruct(const EigenfaceModel& m, std::span<const double> omega) {
  if (omega.size() > m.k()) throw Error(Errc::LengthMismatch, "more weights than eigenfaces");
  Vector out(m.pixels(), 0.0);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const auto u = m.eigenfaces.col(i);
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += omega[i] * u[r];
  }
  return out;
}

double reconstruction_error(const EigenfaceModel& m, const Image& img, std::optional<std::size_t> k) {
  const std::size_t kk = resolve_k(m, k);
  Vector phi = centered(m, img);
  const Vector rec = reconstruct(m, project_centered(m, phi, kk));
  for (std::size_t r = 0; r < phi.size(); ++r) phi[r] -= rec[r];
  return norm2(phi);
}

Classification classify(const EigenfaceModel& m, const Image& img) {
  if (m.k() == 0 || m.training_count() == 0) throw Error(Errc::EmptyModel, "model has no eigenfaces or projections");
  const Vector phi = centered(m, img);
  const Vector omega = project_centered(m, phi, m.k());
  Classification out;
  out.distance = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m.training_count(); ++j) {
    const auto c = m.class_projections.col(j);
    double s = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) s += (omega[i] - c[i]) * (omega[i] - c[i]);
    const double d = std::sqrt(s);
    if (d < out.distance) {
      out.distance = d;
      out.nearest = j;
    }
  }
  out.label = m.labels.empty() ? std::string() : m.labels[out.nearest];
  out.error = reconstruction_error(m, img);
  return out;
}

void save_model(std::ostream& out, const EigenfaceModel& m) {
  const std::size_t n = m.pixels(), k = m.k(), count = m.training_count();
  if (m.psi.size() != n || m.eigenfaces.rows() != n || m.energy_fractions.size() != k ||
      m.class_projections.rows() != k || m.labels.size() != count) {
    throw Error(Errc::DimensionMismatch, "model parts have inconsistent sizes");
  }
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kVersion);
  put_u32(out, narrow(m.width, "width"));
  put_u32(out, narrow(m.height, "height"));
  put_u32(out, narrow(count, "M"));
  put_u32(out, narrow(k, "K"));
  for (double v : m.psi) put_f64(out, v);
  for (std::size_t i = 0; i < n * k; ++i) put_f64(out, m.eigenfaces.data()[i]);
  for (double v : m.energy_fractions) put_f64(out, v);
  for (std::size_t i = 0; i < k * count; ++i) put_f64(out, m.class_projections.data()[i]);
  for (const std::string& s : m.labels) {
    put_u32(out, narrow(s.size(), "label"));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  if (!out) throw Error(Errc::IoError, "model write failed");
}

void save_model(const std::filesystem::path& path, const EigenfaceModel& m) {
  std::ofstream f = open_out(path);
  save_model(f, m);
}

EigenfaceModel load_model(std::istream& in) {
  std::array<char, 4> magic;
  get_bytes(in, magic.data(), magic.size());
  if (magic != kMagic) throw Error(Errc::ParseError, "model: bad magic");
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) throw Error(Errc::ParseError, "model: unsupported version " + std::to_string(version));
  EigenfaceModel m;
  m.width = get_u32(in);
  m.height = get_u32(in);
  const std::size_t count = get_u32(in), k = get_u32(in);
  const std::size_t n = m.width * m.height;
  if (n == 0 || k > count || n > (std::size_t{1} << 28)) throw Error(Errc::ParseError, "model: implausible header");
  m.psi.resize(n);
  for (double& v : m.psi) v = get_f64(in);
  m.eigenfaces = DenseMatrix(n, k);
  for (std::size_t i = 0; i < n * k; ++i) m.eigenfaces.data()[i] = get_f64(in);
  m.energy_fractions.resize(k);
  for (double& v : m.energy_fractions) v = get_f64(in);
  m.class_projections = DenseMatrix(k, count);
  for (std::size_t i = 0; i < k * count; ++i) m.class_projections.data()[i] = get_f64(in);
  m.labels.resize(count);
  for (std::string& s : m.labels) {
    const std::size_t len = get_u32(in);
    if (len > 4096) throw Error(Errc::ParseError, "model: label too long");
    s.resize(len);
    get_bytes(in, s.data(), len);
  }
  m.requested_k = k;
  return m;
}

EigenfaceModel load_model(const std::filesystem::path& path) {
  std::ifstream f = open_in(path);
  return load_model(f);
}

}  // namespace svdlab
