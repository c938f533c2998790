#include "spdc/fock.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "spdc/config.hpp"

namespace spdc {

uint64_t FockBasis::pack(const std::vector<uint8_t>& occ) {
  uint64_t key = 0;
  for (uint8_t n : occ) key = key * 64 + n;  // cutoff < 64
  return key;
}

FockBasis FockBasis::build(int m_signal, int l_pump, int cutoff, bool si_sector) {
  if (cutoff >= 64) throw ConfigError("fock cutoff must be below 64");
  FockBasis b;
  b.m_ = m_signal;
  b.l_ = l_pump;
  b.n_ = cutoff;
  b.sector_ = si_sector;
  const int modes = 2 * m_signal + l_pump;
  std::vector<uint8_t> occ(modes, 0);
  // depth-first enumeration in row-major (last mode fastest) order
  while (true) {
    if (!si_sector || [&] {
          int s = 0, i = 0;
          for (int k = 0; k < m_signal; ++k) s += occ[k];
          for (int k = 0; k < m_signal; ++k) i += occ[m_signal + k];
          return s == i;
        }()) {
      b.index_.emplace(pack(occ), static_cast<int32_t>(b.occ_.size()));
      b.occ_.push_back(occ);
    }
    int pos = modes - 1;
    while (pos >= 0 && occ[pos] == cutoff) occ[pos--] = 0;
    if (pos < 0) break;
    ++occ[pos];
  }
  return b;
}

int FockBasis::find(const std::vector<uint8_t>& occ) const {
  auto it = index_.find(pack(occ));
  return it == index_.end() ? -1 : it->second;
}

int FockBasis::vacuum_index() const {
  std::vector<uint8_t> occ(modes(), 0);
  const int idx = find(occ);
  if (idx < 0) throw NumericalError("vacuum not contained in basis");
  return idx;
}

MonomialOp::MonomialOp(const FockBasis& basis, const LadderMonomial& mono) {
  const int dim = basis.dim();
  src_.assign(dim, -1);
  amp_.assign(dim, 0.0);
  std::vector<uint8_t> occ;
  for (int i = 0; i < dim; ++i) {
    occ = basis.occupations(i);
    double amp = 1.0;
    bool ok = true;
    for (int m : mono.annihilate) {
      if (occ[m] == 0) {
        ok = false;
        break;
      }
      amp *= std::sqrt(static_cast<double>(occ[m]));
      --occ[m];
    }
    if (!ok) continue;
    for (int m : mono.create) {
      if (occ[m] >= basis.cutoff()) {
        ok = false;
        break;
      }
      ++occ[m];
      amp *= std::sqrt(static_cast<double>(occ[m]));
    }
    if (!ok) continue;
    const int j = basis.find(occ);
    if (j < 0) continue;  // outside the sector
    src_[j] = i;
    amp_[j] = amp;
    max_amp_ = std::max(max_amp_, amp);
  }
}

void MonomialOp::accumulate(cplx coeff, const Vec& in, Vec& out) const {
  const int dim = static_cast<int>(src_.size());
  for (int r = 0; r < dim; ++r)
    if (src_[r] >= 0) out[r] += coeff * amp_[r] * in[src_[r]];
}

void AssembledHamiltonian::apply(const Vec& in, Vec& out) const {
  out.setZero();
  for (size_t k = 0; k < ops.size(); ++k)
    if (coeffs[k] != cplx(0, 0)) ops[k]->accumulate(coeffs[k], in, out);
}

double AssembledHamiltonian::norm_bound() const {
  double b = 0.0;
  for (size_t k = 0; k < ops.size(); ++k) b += std::abs(coeffs[k]) * ops[k]->max_amplitude();
  return b;
}

Mat AssembledHamiltonian::dense(int dim) const {
  Mat h = Mat::Zero(dim, dim);
  Vec e = Vec::Zero(dim), col(dim);
  for (int j = 0; j < dim; ++j) {
    e[j] = 1.0;
    apply(e, col);
    h.col(j) = col;
    e[j] = 0.0;
  }
  return h;
}

void evolve_exp(const AssembledHamiltonian& h, double dt, Vec& psi) {
  const double hn = h.norm_bound() * std::abs(dt);
  const int substeps = std::max(1, static_cast<int>(std::ceil(hn / 0.5)));
  const cplx step = -I * dt / static_cast<double>(substeps);
  Vec term = psi, out(psi.size()), acc(psi.size());
  for (int s = 0; s < substeps; ++s) {
    acc = psi;
    term = psi;
    for (int k = 1; k <= 60; ++k) {
      h.apply(term, out);
      term = (step / static_cast<double>(k)) * out;
      acc += term;
      if (term.norm() < 1e-16 * acc.norm()) break;
    }
    psi = acc;
  }
}

FockKet vacuum_ket(std::shared_ptr<const FockBasis> basis) {
  FockKet k;
  k.basis = std::move(basis);
  k.c = Vec::Zero(k.basis->dim());
  k.c[k.basis->vacuum_index()] = 1.0;
  return k;
}

RVec mode_populations(const FockKet& ket) {
  const FockBasis& b = *ket.basis;
  RVec pop = RVec::Zero(b.modes());
  for (int i = 0; i < b.dim(); ++i) {
    const double w = std::norm(ket.c[i]);
    if (w == 0.0) continue;
    const auto& occ = b.occupations(i);
    for (int m = 0; m < b.modes(); ++m) pop[m] += w * occ[m];
  }
  return pop;
}

ReducedState reduce_ket(const FockKet& ket, const std::vector<int>& keep_modes,
                        double weight_floor) {
  const FockBasis& b = *ket.basis;
  ReducedState red;
  red.keep_modes = keep_modes;
  red.cutoff = b.cutoff();
  red.keep_dim = 1;
  for (size_t k = 0; k < keep_modes.size(); ++k) red.keep_dim *= b.cutoff() + 1;

  std::vector<bool> kept(b.modes(), false);
  for (int m : keep_modes) kept[m] = true;

  // group amplitudes by traced-mode occupations
  struct Entry {
    int kidx, group;
    cplx val;
  };
  std::unordered_map<uint64_t, int> group_of;
  int n_groups = 0;
  std::vector<Entry> entries;
  for (int i = 0; i < b.dim(); ++i) {
    if (ket.c[i] == cplx(0, 0)) continue;
    const auto& occ = b.occupations(i);
    uint64_t gkey = 0;
    int kidx = 0;
    for (int m : keep_modes) kidx = kidx * (b.cutoff() + 1) + occ[m];
    for (int m = 0; m < b.modes(); ++m)
      if (!kept[m]) gkey = gkey * 64 + occ[m];
    auto [it, inserted] = group_of.emplace(gkey, n_groups);
    if (inserted) ++n_groups;
    entries.push_back({kidx, it->second, ket.c[i]});
  }
  Mat a = Mat::Zero(red.keep_dim, std::max(1, n_groups));
  for (const auto& e : entries) a(e.kidx, e.group) += e.val;

  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU);
  for (int m = 0; m < svd.singularValues().size(); ++m) {
    const double w = svd.singularValues()[m] * svd.singularValues()[m];
    if (w < weight_floor) break;
    red.weights.push_back(w);
  }
  red.vectors = svd.matrixU().leftCols(static_cast<int>(red.weights.size()));
  return red;
}

}  // namespace spdc
