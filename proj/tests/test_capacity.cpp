#include <catch_amalgamated.hpp>
#include <random>

#include "support.hpp"

using namespace sampcap;
using Catch::Approx;

namespace {

// Aliases at spacing 1 with |H|^2 = 4, 1, 0.25 and unit noise.
NamedChannel three_alias_channel() {
  return {"three_alias",
          SpectralFunction(-0.5, 1.0, {2.0, 1.0, 0.5}, SpectrumKind::channel),
          SpectralFunction(-0.5, 1.0, {1.0, 1.0, 1.0}, SpectrumKind::noise_psd), 5.0, ""};
}

SpectralFunction shifted(const SpectralFunction& S, double by) {
  return SpectralFunction(S.support_lo() - by, S.bin_width(), S.values(), S.kind());
}

}  // namespace

TEST_CASE("alias-free all-pass sampling reaches the Nyquist capacity", "[capacity]") {
  const NamedChannel ch = flat_channel(0.5);
  const auto S = SpectralFunction::constant(-0.5, 0.5, 1.0, SpectrumKind::prefilter);
  const double cn = nyquist_capacity(ch.H, ch.S_eta, 5.0).capacity;
  CHECK(cn == Approx(0.5 * std::log(6.0)).epsilon(1e-12));
  for (double f_s : {1.0, 1.5, 2.0, 3.0})
    CHECK(capacity_single_filter(ch.H, ch.S_eta, S, f_s, 5.0).capacity() == Approx(cn).epsilon(1e-9));
}

TEST_CASE("single-branch bank reduces to the single filter", "[capacity]") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto H = support::random_spectrum(-1.0, 0.1, 20, rng, SpectrumKind::channel, 0.3, true);
    const auto N = support::random_spectrum(-1.0, 0.1, 20, rng, SpectrumKind::noise_psd);
    const auto S = support::random_spectrum(-1.5, 0.1, 30, rng, SpectrumKind::prefilter, 0.0, true);
    for (double f_s : {0.4, 0.7, 1.3}) {
      const double single = capacity_single_filter(H, N, S, f_s, 2.0).capacity();
      CHECK(capacity_filterbank(H, N, {S}, f_s, 2.0).capacity() == Approx(single).epsilon(1e-9));
      CHECK(support::bank_capacity_reference(H, N, {S}, f_s, 2.0, 0.1) == Approx(single).epsilon(1e-9));
    }
  }
}

TEST_CASE("selection bank on three aliases keeps the two best gains", "[capacity]") {
  const NamedChannel ch = three_alias_channel();
  // Spacing 1: branch one passes the alias at 0, branch two the alias at 1.
  const std::vector<SpectralFunction> bank{
      SpectralFunction::constant(-0.5, 0.5, 1.0, SpectrumKind::prefilter),
      SpectralFunction::constant(0.5, 1.5, 1.0, SpectrumKind::prefilter)};
  const SymbolMatrices sym = filterbank_symbols(ch.H, ch.S_eta, bank, 2.0, 0.0);
  REQUIRE(sym.aliases.size() == 3);
  const Eigen::VectorXd g = whitened_gains(sym.F_s, sym.F_h);
  CHECK(g(0) == Approx(4.0));
  CHECK(g(1) == Approx(1.0));
  const Eigen::MatrixXcd W = whitened_rows(sym.F_s);
  CHECK((W * W.adjoint() - Eigen::MatrixXcd::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("random filter banks match the reference eigen-solve", "[capacity]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int M = 1 + static_cast<int>(rng() % 3);
    const auto H = support::random_spectrum(-1.0, 0.1, 20, rng, SpectrumKind::channel, 0.2, true);
    const auto N = support::random_spectrum(-1.0, 0.1, 20, rng, SpectrumKind::noise_psd);
    std::vector<SpectralFunction> filters;
    for (int i = 0; i < M; ++i)
      filters.push_back(support::random_spectrum(-1.0, 0.1, 20, rng, SpectrumKind::prefilter, 0.0, true));
    const double f_s = 0.6 * M;
    const double got = capacity_filterbank(H, N, filters, f_s, 3.0).capacity();
    CHECK(got == Approx(support::bank_capacity_reference(H, N, filters, f_s, 3.0, 0.1)).epsilon(1e-9));

    // Whitened rows are orthonormal at every bin.
    const FrequencyGrid grid = filterbank_grid(H, N, filters, f_s);
    for (std::size_t j = 0; j < grid.n_bins; ++j) {
      const SymbolMatrices sym = filterbank_symbols(H, N, filters, f_s, grid.center(j));
      const Eigen::MatrixXcd W = whitened_rows(sym.F_s);
      CHECK((W * W.adjoint() - Eigen::MatrixXcd::Identity(W.rows(), W.rows())).norm() <= 1e-8);
    }
  }
}

TEST_CASE("rescaling one branch leaves the bank capacity unchanged", "[capacity]") {
  std::mt19937_64 rng(12);
  const auto H = support::random_spectrum(-1.0, 0.1, 20, rng, SpectrumKind::channel, 0.2, true);
  const auto N = support::random_spectrum(-1.0, 0.1, 20, rng, SpectrumKind::noise_psd);
  std::vector<SpectralFunction> filters;
  for (int i = 0; i < 2; ++i)
    filters.push_back(support::random_spectrum(-1.0, 0.1, 20, rng, SpectrumKind::prefilter, 0.0, true));
  const double base = capacity_filterbank(H, N, filters, 1.0, 1.0).capacity();
  std::vector<cplx> v = filters[1].values();
  for (cplx& x : v) x *= cplx(0.0, -7.0);
  filters[1] = SpectralFunction(filters[1].support_lo(), 0.1, v, SpectrumKind::prefilter);
  CHECK(capacity_filterbank(H, N, filters, 1.0, 1.0).capacity() == Approx(base).epsilon(1e-9));
}

TEST_CASE("whitened gains never exceed the sorted alias SNRs", "[capacity]") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int M = 1 + static_cast<int>(rng() % 4);
    const auto H = support::random_spectrum(-1.0, 0.1, 20, rng, SpectrumKind::channel, 0.2, true);
    const auto N = support::random_spectrum(-1.0, 0.1, 20, rng, SpectrumKind::noise_psd);
    std::vector<SpectralFunction> filters;
    for (int i = 0; i < M; ++i)
      filters.push_back(support::random_spectrum(-1.0, 0.1, 20, rng, SpectrumKind::prefilter, 0.0, true));
    const double f_s = 0.4 * M;
    const double f = 0.05 - 0.1 * static_cast<double>(rng() % 2);
    const SymbolMatrices sym = filterbank_symbols(H, N, filters, f_s, f);
    std::vector<double> snr;
    for (const auto& a : support::scan_aliases(H, N, f, f_s / M)) snr.push_back(a.snr());
    std::sort(snr.begin(), snr.end(), std::greater<>());
    const Eigen::VectorXd g = whitened_gains(sym.F_s, sym.F_h);
    for (Eigen::Index k = 0; k < g.size() && k < static_cast<Eigen::Index>(snr.size()); ++k)
      CHECK(g(k) <= snr[static_cast<std::size_t>(k)] + 1e-9);
  }
}

TEST_CASE("sampling above the Nyquist rate helps under wide noise", "[capacity]") {
  const NamedChannel ch = wide_noise_channel(0.5, 1.0);
  const auto S = SpectralFunction::constant(-1.0, 1.0, 1.0, SpectrumKind::prefilter);
  const double c1 = capacity_single_filter(ch.H, ch.S_eta, S, 1.0, 1.0).capacity();
  const double c12 = capacity_single_filter(ch.H, ch.S_eta, S, 1.2, 1.0).capacity();
  CHECK(c12 > c1);
}

TEST_CASE("trivial modulation equals the single filter", "[capacity]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto H = support::random_spectrum(-1.0, 0.125, 16, rng, SpectrumKind::channel, 0.2, true);
    const auto N = support::random_spectrum(-1.0, 0.125, 16, rng, SpectrumKind::noise_psd);
    const auto S = support::random_spectrum(-1.0, 0.125, 16, rng, SpectrumKind::prefilter, 0.0, true);
    ModulationBank bank;
    bank.f_q = 0.5;
    bank.branches.push_back({SpectralFunction::constant(-1.0, 1.0, 1.0, SpectrumKind::premodulation),
                             {{0, 1.0}}, S});
    const double single = capacity_single_filter(H, N, S, 0.5, 1.5).capacity();
    CHECK(capacity_modbank(H, N, bank, 0.5, 1.5).capacity() == Approx(single).epsilon(1e-9));
    CHECK(sampled_capacity(H, N, bank, 0.5, 1.5).capacity() == Approx(single).epsilon(1e-9));
  }
}

TEST_CASE("a single modulation tone shifts the equivalent prefilter", "[capacity]") {
  std::mt19937_64 rng(32);
  for (int u : {-2, -1, 1, 3}) {
    const auto H = support::random_spectrum(-1.0, 0.125, 16, rng, SpectrumKind::channel, 0.2, true);
    const auto N = support::random_spectrum(-1.0, 0.125, 16, rng, SpectrumKind::noise_psd);
    const auto S = support::random_spectrum(-3.0, 0.125, 48, rng, SpectrumKind::prefilter, 0.0, true);
    ModulationBank bank;
    bank.f_q = 0.5;
    bank.branches.push_back({SpectralFunction::constant(-1.0, 1.0, 1.0, SpectrumKind::premodulation),
                             {{u, cplx(0.3, -0.4)}}, S});
    // x(t) e^{j2pi u f_q t} moves input frequency f to f + u f_q before S.
    const double expected = capacity_single_filter(H, N, shifted(S, u * 0.5), 0.5, 1.0).capacity();
    CHECK(capacity_modbank(H, N, bank, 0.5, 1.0).capacity() == Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("both phase conventions give the same capacity", "[capacity]") {
  std::mt19937_64 rng(77);
  int evaluated = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const support::RandomBankCase c = support::random_bank_case(rng);
    try {
      const double d = capacity_modbank(c.ch.H, c.ch.S_eta, c.bank, c.f_s, 1.0, PhaseConvention::delay).capacity();
      const double j = capacity_modbank(c.ch.H, c.ch.S_eta, c.bank, c.f_s, 1.0, PhaseConvention::conjugate).capacity();
      CHECK(j == Approx(d).epsilon(1e-9));
      ++evaluated;
    } catch (const SingularWhitening&) {
    }
  }
  CHECK(evaluated >= 20);
}

TEST_CASE("modulation banks stay below the alias-selection bound", "[capacity]") {
  std::mt19937_64 rng(78);
  int evaluated = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const support::RandomBankCase c = support::random_bank_case(rng);
    try {
      const double got = capacity_modbank(c.ch.H, c.ch.S_eta, c.bank, c.f_s, 2.0).capacity();
      const double bound = support::selection_bound_reference(
          c.ch.H, c.ch.S_eta, c.bank.f_q / c.bank.b,
          static_cast<std::size_t>(c.bank.a) * c.bank.branches.size(), 2.0, 0.125);
      CHECK(got <= bound + 1e-9);
      ++evaluated;
    } catch (const SingularWhitening&) {
    }
  }
  CHECK(evaluated >= 20);
}

TEST_CASE("three-subband channel: modulation recovers both strong subbands", "[capacity]") {
  const NamedChannel ch = three_subband_channel();
  ModulationBank bank;
  bank.f_q = 1.0;
  bank.a = 2;
  bank.b = 1;
  bank.branches.push_back(
      {SpectralFunction::constant(-1.5, 1.5, 1.0, SpectrumKind::premodulation),
       {{0, 1.0}, {3, 1.0}},
       SpectralFunction::from_bands({{-1.5, -0.5, 1.0}, {3.5, 4.5, 1.0}}, 1.0, SpectrumKind::prefilter)});
  const SampledCapacity mod = capacity_modbank(ch.H, ch.S_eta, bank, 2.0, 1.0);
  REQUIRE(mod.per_bin == 2);
  for (double g : mod.gains) CHECK(g == Approx(2.0));
  CHECK(mod.capacity() == Approx(support::sorted_waterfill({2.0, 2.0}, 1.0, 1.0).capacity).epsilon(1e-9));

  const auto passband = SpectralFunction::constant(-1.5, 0.5, 1.0, SpectrumKind::prefilter);
  const SampledCapacity single = capacity_single_filter(ch.H, ch.S_eta, passband, 2.0, 1.0);
  std::vector<double> g = single.gains;
  std::sort(g.begin(), g.end());
  // Half of the fundamental interval at gain 1, half at gain 2.
  REQUIRE(g.size() % 2 == 0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == Approx(i < g.size() / 2 ? 1.0 : 2.0));
  CHECK(single.capacity() == Approx(support::sorted_waterfill({1.0, 2.0}, 1.0, 1.0).capacity).epsilon(1e-9));
  CHECK(mod.capacity() > single.capacity());
}

TEST_CASE("modulation rate equation is enforced", "[capacity]") {
  const NamedChannel ch = flat_channel(0.5);
  ModulationBank bank;
  bank.f_q = 0.5;
  bank.a = 1;
  bank.b = 1;
  bank.branches.push_back({SpectralFunction::constant(-0.5, 0.5, 1.0, SpectrumKind::premodulation),
                           {{0, 1.0}},
                           SpectralFunction::constant(-0.5, 0.5, 1.0, SpectrumKind::prefilter)});
  CHECK_THROWS_AS(capacity_modbank(ch.H, ch.S_eta, bank, 0.7, 1.0), IncommensurateRates);
  bank.a = 2;
  bank.b = 4;
  CHECK_THROWS_AS(validate_modbank(bank, 0.25), ConfigError);
}

TEST_CASE("a rank-deficient bank is rejected", "[capacity]") {
  const NamedChannel ch = flat_channel(0.5);
  const auto S = SpectralFunction::constant(-0.5, 0.5, 1.0, SpectrumKind::prefilter);
  CHECK_THROWS_AS(capacity_filterbank(ch.H, ch.S_eta, {S, S}, 1.0, 1.0), SingularWhitening);
}
