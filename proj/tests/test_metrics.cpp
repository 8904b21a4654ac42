// Copyright 2026 The vcguard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oracles.hpp"
#include "support.hpp"
#include "vcguard/metrics.hpp"
#include "vcguard/synth.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>

using namespace vcguard;

namespace {

AudioClip speech(std::uint64_t seed, Real seconds = 1.0) {
  return synth_toy_clip(make_toy_speaker(seed), seed, seconds);
}

}  // namespace

TEST_CASE("identical input column") {
  const AudioClip x = speech(1);
  CHECK(snr_db(x.samples, x.samples) == kDbCap);
  CHECK(sdr_db(x.samples, x.samples) == kDbCap);
  CHECK(lsd(x.samples, x.samples, 16000) == 0.0);
  CHECK(mcd(x.samples, x.samples, 16000) == 0.0);
  CHECK(stoi(x.samples, x.samples, 16000) == doctest::Approx(1.0).epsilon(1e-6));
  const SpeakerEncoder enc(1234);
  CHECK(srs(x, x, enc) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<Real> ones(4, 1.0);
  CHECK(dsr(ones) == 0.0);
}

TEST_CASE("snr analytic cases") {
  const Vector x = test::random_signal(3, 1000);
  CHECK(snr_db(x, Vector(1.1 * x)) == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(std::abs(snr_db(x, Vector(1.1 * x)) - 20.0) <= 1e-6);
  CHECK(std::abs(snr_db(x, Vector(-x)) - (-10.0 * std::log10(4.0))) <= 1e-6);
  CHECK(std::abs(snr_db(x, Vector(-x)) - (-6.0206)) <= 1e-4);
  CHECK(snr_db(x, Vector(x + Vector::Constant(1000, 1e3))) >= -kDbCap);
  CHECK_THROWS_AS(snr_db(x, Vector(x.head(10))), Error);
  CHECK_THROWS_AS(snr_db(Vector::Zero(5), Vector::Ones(5)), Error);
}

TEST_CASE("sdr is invariant to scaling the estimate") {
  const Vector x = test::random_signal(4, 2000);
  const Vector e = x + test::random_signal(5, 2000, 0.1);
  CHECK(sdr_db(x, e) == doctest::Approx(sdr_db(x, Vector(3.0 * e))).epsilon(1e-12));
  CHECK(sdr_db(x, Vector(0.5 * x)) == kDbCap);
}

TEST_CASE("lsd and mcd grow with distortion") {
  const AudioClip x = speech(2);
  const Vector small = x.samples + test::random_signal(6, x.size(), 0.005);
  const Vector large = x.samples + test::random_signal(6, x.size(), 0.05);
  CHECK(lsd(x.samples, small, 16000) > 0.0);
  CHECK(lsd(x.samples, large, 16000) > lsd(x.samples, small, 16000));
  CHECK(lsd(x.samples, large, 16000, LogBase::Base10) ==
        doctest::Approx(lsd(x.samples, large, 16000) / std::log(10.0)).epsilon(1e-9));
  CHECK(mcd(x.samples, large, 16000) > mcd(x.samples, small, 16000));
  CHECK(mfcc(x.samples, 16000).cols() == 13);
  CHECK_THROWS_AS(lsd(Vector::Ones(100), Vector::Ones(100), 16000), Error);
}

TEST_CASE("stoi matches the reference implementation on stored fixtures") {
  std::ifstream in(test::fixture("stoi_reference.json"));
  REQUIRE(in);
  const auto j = nlohmann::json::parse(in);
  REQUIRE(j.at("cases").size() >= 4);
  for (const auto& c : j.at("cases")) {
    const AudioClip ref = read_wav(test::fixture(c.at("reference").get<std::string>()));
    const AudioClip deg = read_wav(test::fixture(c.at("degraded").get<std::string>()));
    CHECK(ref.sample_rate_hz == c.at("sample_rate_hz").get<int>());
    const Real got = stoi(ref.samples, deg.samples, ref.sample_rate_hz);
    INFO(c.at("degraded").get<std::string>());
    CHECK(std::abs(got - c.at("stoi").get<Real>()) <= 0.02);
  }
}

TEST_CASE("stoi is bounded and needs enough frames") {
  const AudioClip x = speech(3);
  const Real v = stoi(x.samples, test::random_signal(9, x.size()), 16000);
  CHECK(v >= 0.0);
  CHECK(v <= 1.0);
  CHECK_THROWS_AS(stoi(Vector::Ones(500), Vector::Ones(500), 16000), Error);
}

TEST_CASE("resampler keeps a low tone") {
  Vector x(16000);
  for (Index i = 0; i < x.size(); ++i) x[i] = std::sin(2 * M_PI * 440.0 * i / 16000.0);
  const Vector y = resample(x, 16000, 10000);
  CHECK(y.size() == 10000);
  for (Index i = 200; i < 9800; i += 97) {
    CHECK(y[i] == doctest::Approx(std::sin(2 * M_PI * 440.0 * i / 10000.0)).epsilon(0.01).scale(1.0));
  }
  CHECK(resample(x, 16000, 16000) == x);
}

TEST_CASE("cer and wer equal a brute-force oracle") {
  const auto strings = oracle::ab_strings(4);
  CHECK(strings.size() == 31);
  for (const auto& r : strings) {
    for (const auto& h : strings) {
      const std::size_t expected = oracle::levenshtein(r, h);
      CHECK(edit_distance<char>(r, h) == expected);
      if (r.empty()) {
        CHECK_THROWS_AS(cer_wer(r, h), Error);
        continue;
      }
      const ErrorRates e = cer_wer(r, h);
      CHECK(e.cer == static_cast<Real>(expected) / r.size());
      const ErrorRates w = cer_wer(oracle::ab_words(r), oracle::ab_words(h));
      CHECK(w.wer == static_cast<Real>(expected) / r.size());
    }
  }
}

TEST_CASE("dsr counts values strictly below the threshold") {
  const std::vector<Real> v = {0.1, 0.5, 0.49, 0.9};
  CHECK(dsr(v) == 0.5);
  CHECK(dsr(v, 0.95) == 1.0);
  CHECK_THROWS_AS(dsr(std::vector<Real>{}), Error);
}

TEST_CASE("report nulls, proxy flag and aggregation") {
  std::vector<AudioClip> orig = {speech(4, 1.2), speech(5, 1.0)};
  std::vector<AudioClip> prot = orig;
  for (auto& c : prot) c.samples += test::random_signal(7, c.size(), 0.1);
  const SpeakerEncoder attacked(1234), verifier(1235);
  const ReportEncoders enc{attacked, verifier};
  const MetricsReport r = build_report(orig, prot, {}, {}, enc, 2);
  CHECK(r.proxy);
  REQUIRE(r.per_clip.size() == 2);
  for (const auto& m : r.per_clip) {
    CHECK_FALSE(m.cer);
    CHECK_FALSE(m.wer);
    CHECK(m.snr_db);
    CHECK(m.stoi);
    CHECK(m.error.empty());
  }
  Real below = 0;
  for (const auto& m : r.per_clip) below += *m.srs_output < 0.5 ? 1 : 0;
  CHECK(r.aggregate.dsr == below / 2);
  CHECK(*r.aggregate.snr_db == doctest::Approx((*r.per_clip[0].snr_db + *r.per_clip[1].snr_db) / 2));
  const MetricsReport again = build_report(orig, prot, {}, {}, enc, 1);
  CHECK(*again.per_clip[1].mcd == *r.per_clip[1].mcd);

  std::vector<std::optional<TranscriptPair>> texts = {TranscriptPair{"ab ab", "ab"}, std::nullopt};
  const MetricsReport with_outputs = build_report(orig, prot, orig, texts, enc);
  CHECK_FALSE(with_outputs.proxy);
  CHECK(*with_outputs.per_clip[0].srs_output == doctest::Approx(1.0));
  CHECK(*with_outputs.per_clip[0].wer == 0.5);
  CHECK_FALSE(with_outputs.per_clip[1].wer);

  std::vector<AudioClip> shorter = prot;
  shorter[1].samples.conservativeResize(1000);
  const MetricsReport bad = build_report(orig, shorter, {}, {}, enc);
  CHECK_FALSE(bad.per_clip[1].error.empty());
  CHECK(bad.aggregate.failed == 1);
  CHECK_THROWS_AS(build_report(orig, std::span(prot).first(1), {}, {}, enc), Error);
}
