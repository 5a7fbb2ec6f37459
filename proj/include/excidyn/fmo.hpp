#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "excidyn/hilbert.hpp"
#include "excidyn/kvdoc.hpp"

namespace excidyn {

// Unit bridge between spectroscopic wavenumbers and the angular-frequency
// rates used by the dynamics code.
struct UnitSystem {
  double cm1_to_rad_per_ps;  // 2*pi*c, c in cm/ps
  double kB_cm1_per_K;       // Boltzmann constant over h*c
  double cm1_to_zJ;          // h*c in zJ*cm (1 zJ = 1e-21 J)

  static UnitSystem codata() {
    constexpr double c_cm_per_ps = 0.0299792458;            // exact
    constexpr double kB_J_per_K = 1.380649e-23;             // exact
    constexpr double h_Js = 6.62607015e-34;                 // exact
    constexpr double c_cm_per_s = 2.99792458e10;            // exact
    return UnitSystem{2.0 * std::numbers::pi * c_cm_per_ps,
                      kB_J_per_K / (h_Js * c_cm_per_s),
                      h_Js * c_cm_per_s * 1e21};
  }
};

inline double cm1_to_angular(double e_cm1) {
  return e_cm1 * UnitSystem::codata().cm1_to_rad_per_ps;
}

// Real symmetric site/coupling matrix in cm^-1 over labeled pigment sites.
class SiteHamiltonian {
 public:
  SiteHamiltonian(RealMatrix energies_cm1, std::vector<std::string> site_labels,
                  double symmetry_tol = 1e-12)
      : energies_(std::move(energies_cm1)), labels_(std::move(site_labels)) {
    if (energies_.rows() != energies_.cols())
      throw numeric_error("DimensionError", "SiteHamiltonian: matrix not square");
    if (!energies_.allFinite())
      throw numeric_error("DomainError", "SiteHamiltonian: non-finite entry");
    double defect = (energies_ - energies_.transpose()).cwiseAbs().maxCoeff();
    if (defect > symmetry_tol)
      throw numeric_error("AsymmetricInput",
                          "SiteHamiltonian: asymmetry " + std::to_string(defect));
    if (labels_.empty()) {
      labels_.resize(static_cast<std::size_t>(energies_.rows()));
      for (Eigen::Index i = 0; i < energies_.rows(); ++i)
        labels_[static_cast<std::size_t>(i)] = "site " + std::to_string(i + 1);
    }
    if (static_cast<Eigen::Index>(labels_.size()) != energies_.rows())
      throw numeric_error("DimensionError",
                          "SiteHamiltonian: label count != dimension");
  }

  Eigen::Index n_sites() const { return energies_.rows(); }
  const RealMatrix& energies_cm1() const { return energies_; }
  const std::vector<std::string>& site_labels() const { return labels_; }

  Eigen::Index site_index(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<Eigen::Index>(i);
    throw numeric_error("UnknownSite", "no site labeled '" + label + "'");
  }

 private:
  RealMatrix energies_;
  std::vector<std::string> labels_;
};

// Built-in eight-site Hamiltonian of the FMO monomer, cm^-1.
inline SiteHamiltonian builtin_fmo8() {
  RealMatrix h(8, 8);
  h << 310.0, -97.9,   5.5,  -5.8,   6.7, -12.1, -10.3,  37.5,
       -97.9, 230.0,  30.1,   7.3,   2.0,  11.5,   4.8,   7.9,
         5.5,  30.1,   0.0, -58.8,  -1.5,  -9.6,   4.7,   1.5,
        -5.8,   7.3, -58.8, 180.0, -64.9, -17.4, -64.4,  -1.7,
         6.7,   2.0,  -1.5, -64.9, 405.0,  89.0,  -6.4,   4.5,
       -12.1,  11.5,  -9.6, -17.4,  89.0, 320.0,  31.7,  -9.7,
       -10.3,   4.8,   4.7, -64.4,  -6.4,  31.7, 270.0, -11.4,
        37.5,   7.9,   1.5,  -1.7,   4.5,  -9.7, -11.4, 505.0;
  std::vector<std::string> labels;
  for (int i = 1; i <= 8; ++i) labels.push_back("BChl " + std::to_string(i));
  return SiteHamiltonian(std::move(h), std::move(labels));
}

// Hamiltonian file schema: `units: cm-1`, optional `site_labels: a, b, ...`,
// `matrix:` block of N rows with N whitespace-separated reals each.
// Mild asymmetry (<= asym_tol) is scrubbed as (M + M^T)/2.
inline SiteHamiltonian load_site_hamiltonian(const kv::Document& doc,
                                             double asym_tol = 1e-9) {
  auto units = doc.scalar("units");
  if (!units)
    throw config_error("ParseError", doc.source() + ": missing 'units' key");
  if (*units != "cm-1")
    throw config_error("ParseError",
                       doc.source() + ": units must be \"cm-1\", got \"" +
                           *units + "\"");
  if (!doc.has("matrix") || !doc.at("matrix").is_block)
    throw config_error("ParseError",
                       doc.source() + ": missing 'matrix:' block");
  const kv::Entry& block = doc.at("matrix");
  Eigen::Index n = static_cast<Eigen::Index>(block.rows.size());
  if (n == 0)
    throw config_error("ParseError", doc.source() + ": empty matrix block");
  RealMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const kv::BlockRow& row = block.rows[static_cast<std::size_t>(i)];
    std::vector<double> vals = kv::parse_real_row(
        row.text, doc.source() + " line " + std::to_string(row.line));
    if (static_cast<Eigen::Index>(vals.size()) != n)
      throw numeric_error("DimensionError",
                          doc.source() + " line " + std::to_string(row.line) +
                              ": row has " + std::to_string(vals.size()) +
                              " entries, expected " + std::to_string(n));
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = vals[static_cast<std::size_t>(j)];
  }
  double defect = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (defect > asym_tol)
    throw numeric_error("AsymmetricInput",
                        doc.source() + ": asymmetry " + std::to_string(defect) +
                            " exceeds " + std::to_string(asym_tol));
  RealMatrix sym = 0.5 * (m + m.transpose());

  std::vector<std::string> labels;
  if (auto raw = doc.scalar("site_labels")) labels = kv::split_list(*raw);
  return SiteHamiltonian(std::move(sym), std::move(labels));
}

// Eigenstructure of a site Hamiltonian. Energies ascend; each amplitude row
// is sign-fixed so its largest-magnitude component is positive.
struct ExcitonBasis {
  RealVector energies_cm1;   // ascending
  RealMatrix site_amplitudes;  // row k = components of exciton k on each site
  std::string sign_convention = "largest-magnitude-component-positive";
};

inline ExcitonBasis diagonalize(const SiteHamiltonian& h) {
  HermitianEig eig = hermitian_eig(h.energies_cm1().cast<Complex>());
  Eigen::Index n = h.n_sites();
  RealMatrix amps(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    RealVector v = eig.eigenvectors.col(k).real();
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    amps.row(k) = v.transpose();
  }
  return ExcitonBasis{eig.eigenvalues, std::move(amps)};
}

// Row k, column s = probability of finding exciton k on site s.
inline RealMatrix site_occupation_probabilities(const ExcitonBasis& basis) {
  return basis.site_amplitudes.cwiseAbs2();
}

// Frozen one-decimal reference eigenstructure for the built-in eight-site
// Hamiltonian, used by the `eig` regression report. Energies descend.
struct ExcitonReferenceRow {
  double energy_cm1;
  std::array<double, 8> site_amplitudes;
};

inline const std::vector<ExcitonReferenceRow>& fmo8_reference_excitons() {
  static const std::vector<ExcitonReferenceRow> rows = {
      {514.3, {0.209, -0.049, 0.002, 0.012, -0.022, -0.087, -0.069, 0.969}},
      {478.4, {-0.004, 0.032, 0.020, -0.237, 0.816, 0.505, 0.122, 0.078}},
      {374.1, {0.779, -0.558, -0.029, -0.030, 0.118, -0.106, -0.102, -0.210}},
      {303.7, {-0.129, 0.093, -0.062, 0.318, 0.358, -0.227, -0.830, -0.042}},
      {262.4, {-0.092, 0.075, 0.121, -0.371, 0.351, -0.806, 0.245, -0.019}},
      {167.3, {-0.546, -0.784, -0.203, 0.140, 0.076, -0.042, 0.106, 0.082}},
      {143.9, {0.154, 0.186, -0.247, 0.769, 0.245, -0.146, 0.456, -0.008}},
      {-24.2, {0.051, 0.142, -0.937, -0.307, -0.046, -0.028, -0.051, -0.005}},
  };
  return rows;
}

// Reference tolerances reflecting the one-decimal rounding of the frozen table.
inline constexpr double fmo8_reference_energy_tol_cm1 = 0.15;
inline constexpr double fmo8_reference_amplitude_tol = 0.01;

}  // namespace excidyn
