#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "wgvqe/error.hpp"
#include "wgvqe/waveguide.hpp"

using namespace wgvqe;

namespace {

double closed_form(ModeFamily f, std::size_t nodes, std::size_t k) {
  const double idx = static_cast<double>(f == ModeFamily::TM ? k + 1 : k);
  return 2.0 - 2.0 * std::cos(idx * std::numbers::pi / static_cast<double>(nodes));
}

}  // namespace

TEST(Operator, TmAndTeStructure) {
  const auto tm = build_operator(ModeFamily::TM, 3, 1.0);
  const auto te = build_operator(ModeFamily::TE, 3, 1.0);
  ASSERT_EQ(tm.grid_nodes, 8u);
  const double tm_diag[8] = {3, 2, 2, 2, 2, 2, 2, 3};
  const double te_diag[8] = {1, 2, 2, 2, 2, 2, 2, 1};
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(tm.matrix(i, i), tm_diag[i]);
    EXPECT_EQ(te.matrix(i, i), te_diag[i]);
    for (std::size_t j = 0; j < 8; ++j) {
      if (i == j) continue;
      const double off = (i + 1 == j || j + 1 == i) ? -1.0 : 0.0;
      EXPECT_EQ(tm.matrix(i, j), off);
      EXPECT_EQ(te.matrix(i, j), off);
    }
  }
}

TEST(Operator, SpacingScalesEveryEntry) {
  const auto a = build_operator(ModeFamily::TM, 3, 1.0);
  const auto b = build_operator(ModeFamily::TM, 3, 2.0);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) EXPECT_DOUBLE_EQ(b.matrix(i, j), a.matrix(i, j) / 4.0);
}

TEST(Operator, RejectsBadArguments) {
  EXPECT_THROW(build_operator(ModeFamily::TM, 3, 0.0), InvalidArgument);
  EXPECT_THROW(build_operator(ModeFamily::TM, 3, -1.0), InvalidArgument);
  EXPECT_THROW(build_operator(ModeFamily::TM, 0, 1.0), InvalidArgument);
  EXPECT_THROW(build_operator(ModeFamily::TM, 13, 1.0), InvalidArgument);
}

TEST(Spectrum, AnalyticTableValues) {
  const auto tm3 = reference_spectrum(build_operator(ModeFamily::TM, 3), 2);
  EXPECT_NEAR(tm3[0].value, 0.152241, 1e-6);
  EXPECT_NEAR(tm3[1].value, 0.585786, 1e-6);
  const auto te3 = reference_spectrum(build_operator(ModeFamily::TE, 3), 1);
  EXPECT_NEAR(te3[0].value, 0.0, 1e-12);
  for (double v : te3[0].vector) EXPECT_NEAR(v, 1.0 / std::sqrt(8.0), 1e-9);
  const auto tm5 = reference_spectrum(build_operator(ModeFamily::TM, 5), 2);
  EXPECT_NEAR(tm5[0].value, 0.00963055, 1e-6);
  EXPECT_NEAR(tm5[1].value, 0.0384294, 1e-6);
}

TEST(Spectrum, ClosedFormAllModes) {
  for (int n : {3, 5}) {
    for (auto f : {ModeFamily::TM, ModeFamily::TE}) {
      const auto op = build_operator(f, n);
      const auto spec = reference_spectrum(op, static_cast<int>(op.grid_nodes));
      for (std::size_t k = 0; k < spec.size(); ++k)
        EXPECT_NEAR(spec[k].value, closed_form(f, op.grid_nodes, k), 1e-9);
    }
  }
}

TEST(Spectrum, EigenvectorsOrthonormalWithSignConvention) {
  const auto op = build_operator(ModeFamily::TM, 4);
  const auto spec = reference_spectrum(op, 16);
  for (std::size_t a = 0; a < spec.size(); ++a) {
    for (std::size_t b = 0; b < spec.size(); ++b) {
      double dot = 0;
      for (std::size_t i = 0; i < 16; ++i) dot += spec[a].vector[i] * spec[b].vector[i];
      EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-9);
    }
    for (double v : spec[a].vector) {
      if (std::abs(v) > 1e-12) {
        EXPECT_GT(v, 0.0);
        break;
      }
    }
    // residual
    for (std::size_t i = 0; i < 16; ++i) {
      double av = 0;
      for (std::size_t j = 0; j < 16; ++j) av += op.matrix(i, j) * spec[a].vector[j];
      EXPECT_NEAR(av, spec[a].value * spec[a].vector[i], 1e-10);
    }
  }
}

TEST(Spectrum, ScalesWithSpacing) {
  const auto a = reference_spectrum(build_operator(ModeFamily::TE, 3, 1.0), 8);
  const auto b = reference_spectrum(build_operator(ModeFamily::TE, 3, 0.5), 8);
  for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(b[k].value, a[k].value / 0.25, 1e-10);
}

TEST(Spectrum, PositiveSemidefinite) {
  for (auto f : {ModeFamily::TM, ModeFamily::TE})
    EXPECT_GE(reference_spectrum(build_operator(f, 5), 1)[0].value, -1e-10);
}

TEST(Spectrum, RejectsBadK) {
  const auto op = build_operator(ModeFamily::TM, 3);
  EXPECT_THROW(reference_spectrum(op, 0), InvalidArgument);
  EXPECT_THROW(reference_spectrum(op, 9), InvalidArgument);
}

TEST(Mode, Tm11CutoffIsTwiceGround) {
  const auto op = build_operator(ModeFamily::TM, 3);
  const auto s = reference_spectrum(op, 1);
  const auto f = compose_mode(ModeFamily::TM, s[0], s[0], 1, 1);
  EXPECT_NEAR(f.kc2, 0.304482, 1e-6);
  EXPECT_NEAR(f.kc2, 2 * s[0].value, 1e-15);
}

TEST(Mode, GridIsRankOneAndNormalized) {
  const auto s = reference_spectrum(build_operator(ModeFamily::TM, 3), 2);
  const auto f = compose_mode(ModeFamily::TM, s[1], s[0], 2, 1);
  double peak = 0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      peak = std::max(peak, std::abs(f.grid(i, j)));
      EXPECT_NEAR(f.grid(i, j) * f.grid(0, 0), f.grid(i, 0) * f.grid(0, j), 1e-10);
    }
  EXPECT_NEAR(peak, 1.0, 1e-15);
}

TEST(Mode, Te10VariesOnlyAlongX) {
  const auto s = reference_spectrum(build_operator(ModeFamily::TE, 3), 2);
  const auto f = compose_mode(ModeFamily::TE, s[1], s[0], 1, 0);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 1; j < 8; ++j) EXPECT_NEAR(f.grid(i, j), f.grid(i, 0), 1e-12);
}

TEST(Mode, SizeMismatchRejected) {
  const auto a = reference_spectrum(build_operator(ModeFamily::TM, 3), 1);
  const auto b = reference_spectrum(build_operator(ModeFamily::TM, 4), 1);
  EXPECT_THROW(compose_mode(ModeFamily::TM, a[0], b[0]), InvalidArgument);
}

TEST(Mode, LabelsMapToEigenpairs) {
  const auto l = parse_mode_label("TM21");
  EXPECT_EQ(l.family, ModeFamily::TM);
  EXPECT_EQ(l.m, 2);
  EXPECT_EQ(l.n, 1);
  EXPECT_EQ(eigenpair_for_index(ModeFamily::TM, 1), 0);
  EXPECT_EQ(eigenpair_for_index(ModeFamily::TE, 1), 1);
  EXPECT_THROW(parse_mode_label("TM01"), InvalidArgument);
  EXPECT_THROW(parse_mode_label("TE00"), InvalidArgument);
  EXPECT_THROW(parse_mode_label("XX11"), InvalidArgument);
}

TEST(Mode, CsvRoundTrip) {
  const auto s = reference_spectrum(build_operator(ModeFamily::TM, 3), 2);
  const auto f = compose_mode(ModeFamily::TM, s[1], s[0], 2, 1);
  std::stringstream ss;
  write_field_csv(ss, f);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "x0,x1,x2,x3,x4,x5,x6,x7");
  ss.seekg(0);
  const RMatrix back = read_field_csv(ss);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(back(i, j), f.grid(i, j), 1e-9);
  const auto meta = field_metadata(f);
  EXPECT_EQ(meta["family"], "TM");
  EXPECT_EQ(meta["m"], 2);
}
