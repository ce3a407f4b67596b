// Copyright 2026 The Dimlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dimlight/raw_noise.h"

#include <algorithm>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <cmath>
#include <string>

#include "dimlight/error.h"

namespace dimlight {
namespace {

using Uniform = boost::random::uniform_real_distribution<double>;

// Uniform on the open interval (0, 1) so the Tukey quantile stays finite.
double OpenUnit(RandomStream& rng) {
  double u = 0.0;
  while (u == 0.0) u = Uniform(0.0, 1.0)(rng);
  return u;
}

BayerRaw Difference(const BayerRaw& after, const BayerRaw& before) {
  BayerRaw delta = after;
  for (int p = 0; p < 4; ++p) {
    auto& out = delta.plane(p);
    const auto& in = before.plane(p);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= in[i];
  }
  return delta;
}

BayerRaw Sum(BayerRaw base, const BayerRaw& field) {
  for (int p = 0; p < 4; ++p) {
    auto& out = base.plane(p);
    const auto& add = field.plane(p);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += add[i];
  }
  return base;
}

}  // namespace

double TukeyLambdaQuantile(double p, double lambda) {
  if (std::abs(lambda) < 1e-12) return std::log(p / (1.0 - p));
  return (std::pow(p, lambda) - std::pow(1.0 - p, lambda)) / lambda;
}

BayerRaw AddShotNoise(BayerRaw raw_adu, const NoiseParams& params,
                      RandomStream& rng) {
  const double k = params.system_gain_k;
  const double r = params.iso_ratio_r;
  if (!(k > 0.0) || !(r > 0.0)) {
    throw Error(ErrorKind::kDomain, "shot noise needs K > 0 and r > 0");
  }
  boost::random::poisson_distribution<long long, double> poisson;
  using Param = boost::random::poisson_distribution<long long, double>::param_type;
  raw_adu.ForEachValue([&](double& v) {
    if (v < 0.0) {
      throw Error(ErrorKind::kDomain,
                  "shot noise input must be non-negative, got " +
                      std::to_string(v));
    }
    const double electrons = v / r / k;
    if (electrons == 0.0) return;
    v = static_cast<double>(poisson(rng, Param(electrons))) * k * r;
  });
  return raw_adu;
}

BayerRaw SampleReadNoiseField(const BayerRaw& shape, const NoiseParams& params,
                              RandomStream& rng) {
  if (!(params.read_sigma >= 0.0) || !std::isfinite(params.read_sigma)) {
    throw Error(ErrorKind::kDomain, "read noise sigma must be finite and >= 0");
  }
  BayerRaw field(shape.half_width(), shape.half_height());
  for (int p = 0; p < 4; ++p) {
    const double bias = params.color_bias[p];
    for (double& v : field.plane(p)) {
      const double sample = TukeyLambdaQuantile(OpenUnit(rng), params.tukey_lambda);
      v = params.read_sigma * sample + bias;
    }
  }
  return field;
}

BayerRaw SampleRowNoiseField(const BayerRaw& shape, const NoiseParams& params,
                             RandomStream& rng) {
  if (!(params.row_sigma >= 0.0)) {
    throw Error(ErrorKind::kDomain, "row noise sigma must be >= 0");
  }
  BayerRaw field(shape.half_width(), shape.half_height());
  if (params.row_sigma == 0.0) return field;
  boost::random::normal_distribution<double> normal(0.0, params.row_sigma);
  for (int y = 0; y < field.full_height(); ++y) {
    const double offset = normal(rng);
    for (int x = 0; x < field.full_width(); ++x) field.site(x, y) = offset;
  }
  return field;
}

BayerRaw SampleQuantNoiseField(const BayerRaw& shape, RandomStream& rng) {
  BayerRaw field(shape.half_width(), shape.half_height());
  Uniform uniform(-0.5, 0.5);
  field.ForEachValue([&](double& v) { v = uniform(rng); });
  return field;
}

BayerRaw AddReadNoise(BayerRaw raw_adu, const NoiseParams& params,
                      RandomStream& rng) {
  BayerRaw field = SampleReadNoiseField(raw_adu, params, rng);
  return Sum(std::move(raw_adu), field);
}

BayerRaw AddRowNoise(BayerRaw raw_adu, const NoiseParams& params,
                     RandomStream& rng) {
  BayerRaw field = SampleRowNoiseField(raw_adu, params, rng);
  return Sum(std::move(raw_adu), field);
}

BayerRaw AddQuantNoise(BayerRaw raw_adu, RandomStream& rng) {
  BayerRaw field = SampleQuantNoiseField(raw_adu, rng);
  return Sum(std::move(raw_adu), field);
}

BayerRaw InjectNoise(const BayerRaw& raw, const CameraParams& camera,
                     const NoiseParams& noise, RandomStream& rng,
                     NoiseRealization* diagnostics) {
  const double white = camera.white_level;
  BayerRaw adu = raw;
  adu.ForEachValue([&](double& v) { v *= white; });
  const NoiseComponents& on = noise.components;
  if (diagnostics == nullptr) {
    if (on.shot) adu = AddShotNoise(std::move(adu), noise, rng);
    if (on.read) adu = AddReadNoise(std::move(adu), noise, rng);
    if (on.row) adu = AddRowNoise(std::move(adu), noise, rng);
    if (on.quant) adu = AddQuantNoise(std::move(adu), rng);
  } else {
    const BayerRaw zero(raw.half_width(), raw.half_height());
    diagnostics->clean = adu;
    if (on.shot) {
      BayerRaw shot = AddShotNoise(adu, noise, rng);
      diagnostics->shot = Difference(shot, adu);
      adu = std::move(shot);
    } else {
      diagnostics->shot = zero;
    }
    diagnostics->read = on.read ? SampleReadNoiseField(adu, noise, rng) : zero;
    diagnostics->row = on.row ? SampleRowNoiseField(adu, noise, rng) : zero;
    diagnostics->quant = on.quant ? SampleQuantNoiseField(adu, rng) : zero;
    adu = Sum(Sum(Sum(std::move(adu), diagnostics->read), diagnostics->row),
              diagnostics->quant);
    diagnostics->composed = adu;
  }
  adu.ForEachValue([&](double& v) { v = std::clamp(v, 0.0, white) / white; });
  return adu;
}

}  // namespace dimlight
