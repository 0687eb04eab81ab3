// Copyright 2026 The Batik KG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "batik/dataset/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <variant>

#include "batik/core/error.h"

namespace batik::dataset {

const std::vector<std::string>& DefaultCategories() {
  static const std::vector<std::string> kCategories = {"bird", "butterfly", "drum",
                                                        "fish", "plant"};
  return kCategories;
}

namespace {

struct Vec {
  double x, y;
};

struct Ellipse {
  Vec c;
  double rx, ry, angle;
};
struct Triangle {
  Vec a, b, c;
};
struct Capsule {
  Vec a, b;
  double r;
};
struct Ring {
  Vec c;
  double inner, outer;
};

using Primitive = std::variant<Ellipse, Triangle, Capsule, Ring>;

bool Contains(const Primitive& prim, Vec p) {
  struct Visitor {
    Vec p;
    bool operator()(const Ellipse& e) const {
      const double dx = p.x - e.c.x, dy = p.y - e.c.y;
      const double cs = std::cos(e.angle), sn = std::sin(e.angle);
      const double u = (cs * dx + sn * dy) / e.rx;
      const double v = (-sn * dx + cs * dy) / e.ry;
      return u * u + v * v <= 1.0;
    }
    bool operator()(const Triangle& t) const {
      auto side = [&](Vec a, Vec b) { return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x); };
      const double d1 = side(t.a, t.b), d2 = side(t.b, t.c), d3 = side(t.c, t.a);
      const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
      const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
      return !(neg && pos);
    }
    bool operator()(const Capsule& s) const {
      const double vx = s.b.x - s.a.x, vy = s.b.y - s.a.y;
      const double len2 = vx * vx + vy * vy;
      double t = len2 > 0 ? ((p.x - s.a.x) * vx + (p.y - s.a.y) * vy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double dx = p.x - (s.a.x + t * vx), dy = p.y - (s.a.y + t * vy);
      return dx * dx + dy * dy <= s.r * s.r;
    }
    bool operator()(const Ring& r) const {
      const double d = std::hypot(p.x - r.c.x, p.y - r.c.y);
      return d >= r.inner && d <= r.outer;
    }
  };
  return std::visit(Visitor{p}, prim);
}

struct Figure {
  std::vector<Primitive> solid;
  std::vector<Primitive> holes;

  bool Inside(Vec p) const {
    for (const auto& h : holes) {
      if (Contains(h, p)) return false;
    }
    for (const auto& s : solid) {
      if (Contains(s, p)) return true;
    }
    return false;
  }
};

constexpr double kPi = std::numbers::pi;

Figure Bird(Rng& rng) {
  const double wing = rng.Uniform(0.45, 0.7);
  const double tail = rng.Uniform(0.2, 0.35);
  Figure f;
  f.solid.push_back(Ellipse{{-0.05, 0.0}, 0.45, rng.Uniform(0.2, 0.27), 0.0});
  f.solid.push_back(Ellipse{{0.42, 0.22}, 0.15, 0.15, 0.0});
  f.solid.push_back(Triangle{{0.52, 0.27}, {0.8, 0.18}, {0.52, 0.14}});
  f.solid.push_back(Triangle{{-0.4, 0.05}, {-0.85, tail}, {-0.85, -tail}});
  f.solid.push_back(Triangle{{-0.25, 0.1}, {0.15, 0.1}, {-0.3, wing}});
  f.solid.push_back(Capsule{{-0.05, -0.2}, {-0.1, -0.55}, 0.03});
  f.solid.push_back(Capsule{{0.1, -0.2}, {0.12, -0.55}, 0.03});
  f.holes.push_back(Ellipse{{0.46, 0.25}, 0.035, 0.035, 0.0});
  return f;
}

Figure Butterfly(Rng& rng) {
  const double upper = rng.Uniform(0.3, 0.38);
  const double lower = rng.Uniform(0.18, 0.25);
  Figure f;
  for (double s : {-1.0, 1.0}) {
    f.solid.push_back(Ellipse{{s * 0.36, 0.25}, upper, upper * 0.75, s * 0.45});
    f.solid.push_back(Ellipse{{s * 0.26, -0.32}, lower, lower * 0.8, -s * 0.5});
    f.solid.push_back(Capsule{{s * 0.03, 0.45}, {s * 0.22, 0.82}, 0.02});
    f.holes.push_back(Ellipse{{s * 0.42, 0.3}, 0.08, 0.08, 0.0});
  }
  f.solid.push_back(Ellipse{{0.0, 0.0}, 0.06, 0.5, 0.0});
  return f;
}

Figure Drum(Rng& rng) {
  Figure f;
  const double w = rng.Uniform(0.04, 0.07);
  for (double r : {0.88, 0.64, 0.42}) f.solid.push_back(Ring{{0, 0}, r - w, r});
  f.solid.push_back(Ellipse{{0, 0}, 0.12, 0.12, 0.0});
  const int rays = 8 + static_cast<int>(rng.Below(5));
  for (int i = 0; i < rays; ++i) {
    const double a = 2 * kPi * i / rays;
    const double b = a + kPi / rays;
    f.solid.push_back(Triangle{{0.1 * std::cos(a - 0.2), 0.1 * std::sin(a - 0.2)},
                               {0.1 * std::cos(a + 0.2), 0.1 * std::sin(a + 0.2)},
                               {0.3 * std::cos(a), 0.3 * std::sin(a)}});
    f.solid.push_back(Ellipse{{0.53 * std::cos(b), 0.53 * std::sin(b)}, 0.04, 0.04, 0.0});
  }
  return f;
}

Figure Fish(Rng& rng) {
  const double body = rng.Uniform(0.22, 0.32);
  const double tail = rng.Uniform(0.22, 0.36);
  Figure f;
  f.solid.push_back(Ellipse{{0.05, 0.0}, 0.55, body, 0.0});
  f.solid.push_back(Triangle{{-0.42, 0.0}, {-0.85, tail}, {-0.85, -tail}});
  f.solid.push_back(Triangle{{-0.1, body * 0.8}, {0.2, body * 0.8}, {-0.15, body + 0.22}});
  f.holes.push_back(Ellipse{{0.4, 0.07}, 0.05, 0.05, 0.0});
  f.holes.push_back(Capsule{{0.22, -0.18}, {0.22, 0.18}, 0.015});
  return f;
}

Figure Plant(Rng& rng) {
  Figure f;
  f.solid.push_back(Capsule{{0, -0.85}, {0, 0.8}, 0.04});
  const int pairs = 3 + static_cast<int>(rng.Below(2));
  for (int i = 0; i < pairs; ++i) {
    const double y = -0.6 + 1.2 * i / pairs;
    const double s = (i % 2 == 0) ? 1.0 : -1.0;
    const double len = rng.Uniform(0.35, 0.55);
    const Vec tip{s * len, y + 0.3};
    f.solid.push_back(Capsule{{0, y}, tip, 0.03});
    f.solid.push_back(Ellipse{tip, 0.16, 0.07, std::atan2(0.3, s * len)});
    f.solid.push_back(Ellipse{{-s * 0.22, y + 0.15}, 0.14, 0.06, std::atan2(0.15, -s * 0.22)});
  }
  f.solid.push_back(Ellipse{{0, 0.85}, 0.08, 0.14, 0.0});
  return f;
}

}  // namespace

Image RenderPattern(size_t category, size_t size, Rng& rng) {
  if (size == 0) throw InvalidArgument("image size must be positive");
  Figure fig;
  switch (category) {
    case 0: fig = Bird(rng); break;
    case 1: fig = Butterfly(rng); break;
    case 2: fig = Drum(rng); break;
    case 3: fig = Fish(rng); break;
    case 4: fig = Plant(rng); break;
    default: throw InvalidArgument("unknown synthetic category " + std::to_string(category));
  }
  const double angle = rng.Uniform(-kPi / 7, kPi / 7);
  const double scale = rng.Uniform(0.8, 1.05);
  const double tx = rng.Uniform(-0.08, 0.08), ty = rng.Uniform(-0.08, 0.08);
  const double ink[3] = {rng.Uniform(10, 60), rng.Uniform(40, 100), rng.Uniform(150, 220)};
  const double cs = std::cos(angle), sn = std::sin(angle);

  Image img(size, size);
  constexpr int kSuper = 2;
  for (size_t py = 0; py < size; ++py) {
    for (size_t px = 0; px < size; ++px) {
      int hits = 0;
      for (int sy = 0; sy < kSuper; ++sy) {
        for (int sx = 0; sx < kSuper; ++sx) {
          // Image y grows downward; figure y grows upward.
          const double x = 2.0 * (px + (sx + 0.5) / kSuper) / size - 1.0 - tx;
          const double y = 1.0 - 2.0 * (py + (sy + 0.5) / kSuper) / size - ty;
          const Vec q{(cs * x + sn * y) / scale, (-sn * x + cs * y) / scale};
          hits += fig.Inside(q);
        }
      }
      const double cover = hits / double(kSuper * kSuper);
      uint8_t* out = img.pixel(px, py);
      for (int c = 0; c < 3; ++c) {
        const double v = 255.0 * (1 - cover) + ink[c] * cover + rng.Uniform(-6, 6);
        out[c] = static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
      }
    }
  }
  return img;
}

Manifest GenerateSynthetic(const std::filesystem::path& dir, const SyntheticOptions& options) {
  if (options.per_class == 0) throw InvalidArgument("per_class must be at least 1");
  std::error_code ec;
  std::filesystem::create_directories(dir / "images", ec);
  if (ec) throw IoError("cannot create " + (dir / "images").string() + ": " + ec.message());
  Rng rng(options.seed);
  Manifest m;
  const auto& cats = DefaultCategories();
  for (size_t c = 0; c < cats.size(); ++c) {
    for (size_t i = 0; i < options.per_class; ++i) {
      char name[64];
      std::snprintf(name, sizeof(name), "images/%s_%04zu.ppm", cats[c].c_str(), i);
      WritePpm(dir / name, RenderPattern(c, options.size, rng));
      m.rows.push_back({name, cats[c], Split::kNone});
    }
  }
  WriteManifest(dir / "manifest.csv", m);
  return m;
}

}  // namespace batik::dataset
