#include "svdlab/decompose.hpp"

#include "svdlab/divide_conquer.hpp"
#include "svdlab/errors.hpp"
#include "svdlab/golub_kahan.hpp"
#include "svdlab/hestenes.hpp"
#include "svdlab/jacobi.hpp"
#include "svdlab/tridiag_qr.hpp"

namespace svdlab {

const char* to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Jacobi: return "jacobi";
    case Algorithm::Hestenes: return "hestenes";
    case Algorithm::GolubKahan: return "gk";
    case Algorithm::TridiagQr: return "qr";
    case Algorithm::DivideConquer: return "dc";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

SvdResult decompose(Algorithm alg, const SymmetricMatrix& a, const DecomposeOptions& opt) {
  switch (alg) {
    case Algorithm::Jacobi: {
      JacobiConfig c;
      if (opt.tol > 0.0) c.tol = opt.tol;
      return jacobi_svd(a, c);
    }
    case Algorithm::Hestenes: {
      HestenesConfig c;
      if (opt.tol > 0.0) c.tol = opt.tol;
      return hestenes_svd(a, c);
    }
    case Algorithm::GolubKahan: {
      GkConfig c;
      if (opt.tol > 0.0) c.tol = opt.tol;
      return gk_svd(a, c);
    }
    case Algorithm::TridiagQr: {
      QrConfig c;
      if (opt.tol > 0.0) c.tol = opt.tol;
      return tridiag_qr_svd(a, c);
    }
    case Algorithm::DivideConquer: {
      DcConfig c;
      if (opt.tol > 0.0) c.leaf.tol = opt.tol;
      c.cutoff = opt.cutoff;
      c.scheme = opt.scheme;
      c.parallel = opt.parallel;
      return dc_svd(a, c);
    }
  }
  throw Error(Errc::InvalidInput, "unknown algorithm");
}

}  // namespace svdlab
