#include "wetting/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace wetting {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
    case Errc::Io: return "Io";
    case Errc::ZeroMass: return "ZeroMass";
    case Errc::UncenteredPotential: return "UncenteredPotential";
    case Errc::DegenerateSupport: return "DegenerateSupport";
    case Errc::KernelTooShort: return "KernelTooShort";
    case Errc::NegativeDelta: return "NegativeDelta";
    case Errc::NotLocalized: return "NotLocalized";
    case Errc::KernelMassDeficit: return "KernelMassDeficit";
    case Errc::InconsistentTables: return "InconsistentTables";
    case Errc::ImpossibleExcursion: return "ImpossibleExcursion";
    case Errc::NotDelocalized: return "NotDelocalized";
    case Errc::DomainError: return "DomainError";
    case Errc::TooLarge: return "TooLarge";
    case Errc::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

Rational parse_rational(const std::string& raw) {
  auto fail = [&] { throw Error(Errc::Parse, "not a number: '" + raw + "'"); };
  std::string text = raw;
  text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }),
             text.end());
  if (text.empty()) fail();

  if (auto slash = text.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw Error(Errc::Parse, "zero denominator in '" + raw + "'");
    Rational r = num / den;
    r.canonicalize();
    return r;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) fail();
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') fail();
    ++pos;
    std::size_t used = 0;
    try {
      exponent = std::stol(text.substr(pos), &used);
    } catch (const std::exception&) {
      fail();
    }
    if (pos + used != text.size()) fail();
  }
  exponent -= frac_digits;
  if (std::abs(exponent) > 4000) fail();

  mpz_class mantissa(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exponent)));
  Rational r = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

namespace {

DiscretePotential::Point make_point(int step, Rational w) { return {step, std::move(w)}; }

}  // namespace

DiscretePotential DiscretePotential::from_rationals(std::vector<std::pair<int, Rational>> weights) {
  std::map<int, Rational> by_step;
  for (auto& [step, w] : weights) {
    if (w < 0) throw Error(Errc::InvalidArgument, "negative weight at step " + std::to_string(step));
    if (!by_step.emplace(step, w).second)
      throw Error(Errc::InvalidArgument, "duplicate step " + std::to_string(step));
  }
  DiscretePotential out;
  for (auto& [step, w] : by_step)
    if (w > 0) out.points_.push_back(make_point(step, w));
  return out;
}

DiscretePotential DiscretePotential::from_doubles(const std::vector<std::pair<int, double>>& weights) {
  std::vector<std::pair<int, Rational>> exact;
  exact.reserve(weights.size());
  for (const auto& [step, w] : weights) {
    if (!std::isfinite(w)) throw Error(Errc::InvalidArgument, "non-finite weight at step " + std::to_string(step));
    exact.emplace_back(step, Rational(w));
  }
  DiscretePotential out = from_rationals(std::move(exact));
  out.exact_ = false;
  return out;
}

DiscretePotential DiscretePotential::parse(std::string_view text) {
  std::vector<std::pair<int, Rational>> weights;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string step_text, weight_text, extra;
    if (!(fields >> step_text)) continue;
    auto where = [&] { return " (line " + std::to_string(line_no) + ")"; };
    if (!(fields >> weight_text)) throw Error(Errc::Parse, "missing weight" + where());
    if (fields >> extra) throw Error(Errc::Parse, "trailing field '" + extra + "'" + where());
    std::size_t used = 0;
    long step = 0;
    try {
      step = std::stol(step_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != step_text.size() || step < -1000000 || step > 1000000)
      throw Error(Errc::Parse, "bad step '" + step_text + "'" + where());
    try {
      weights.emplace_back(static_cast<int>(step), parse_rational(weight_text));
    } catch (const Error& e) {
      throw Error(Errc::Parse, std::string(e.what()) + where());
    }
  }
  return from_rationals(std::move(weights));
}

DiscretePotential DiscretePotential::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Rational DiscretePotential::weight_exact(int step) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), step,
                             [](const Point& p, int s) { return p.step < s; });
  return (it != points_.end() && it->step == step) ? it->weight : Rational(0);
}

Rational DiscretePotential::kappa_exact() const {
  Rational k = 0;
  for (const auto& p : points_) k += p.weight;
  return k;
}

std::string DiscretePotential::canonical_text() const {
  std::string out;
  for (const auto& p : points_) out += std::to_string(p.step) + " " + p.weight.get_str() + "\n";
  return out;
}

std::uint64_t DiscretePotential::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

void check_support(const DiscretePotential& potential) {
  if (potential.empty()) throw Error(Errc::ZeroMass, "potential has no positive weight");
  if (potential.min_step() >= 0 || potential.max_step() <= 0)
    throw Error(Errc::DegenerateSupport,
                "support must contain both a negative and a positive step (got [" +
                    std::to_string(potential.min_step()) + ", " + std::to_string(potential.max_step()) + "])");
}

}  // namespace

ExactWalkLaw build_exact_walk(const DiscretePotential& potential) {
  check_support(potential);
  ExactWalkLaw walk;
  walk.min_step = potential.min_step();
  walk.max_step = potential.max_step();
  walk.kappa = potential.kappa_exact();
  walk.p.assign(static_cast<std::size_t>(walk.max_step - walk.min_step + 1), Rational(0));
  for (const auto& pt : potential.points()) {
    Rational p = pt.weight / walk.kappa;
    p.canonicalize();
    walk.p[static_cast<std::size_t>(pt.step - walk.min_step)] = p;
  }
  Rational mean = 0, second = 0;
  for (int x = walk.min_step; x <= walk.max_step; ++x) {
    mean += x * walk.prob(x);
    second += x * x * walk.prob(x);
  }
  walk.mean = mean;
  walk.sigma2 = second - mean * mean;
  const bool centered = potential.exact() ? mean == 0 : std::abs(mean.get_d()) <= 1e-12;
  if (!centered)
    throw Error(Errc::UncenteredPotential, "increment law has mean " + std::to_string(mean.get_d()) + ", not 0");
  walk.l_const = 1.0 / std::sqrt(walk.sigma2.get_d());
  return walk;
}

WalkLaw build_walk(const DiscretePotential& potential) {
  const ExactWalkLaw exact = build_exact_walk(potential);
  WalkLaw walk;
  walk.min_step = exact.min_step;
  walk.max_step = exact.max_step;
  walk.kappa = exact.kappa.get_d();
  walk.mean = exact.mean.get_d();
  walk.sigma2 = exact.sigma2.get_d();
  walk.l_const = exact.l_const;
  walk.p.reserve(exact.p.size());
  for (const auto& p : exact.p) walk.p.push_back(p.get_d());
  return walk;
}

double truncated_variance(const WalkLaw& walk, double t) {
  if (!(t >= 0)) throw Error(Errc::InvalidArgument, "truncated_variance needs t >= 0");
  CompensatedSum acc;
  for (int x = walk.min_step; x <= walk.max_step; ++x)
    if (std::abs(x) <= t) acc.add(static_cast<double>(x) * x * walk.prob(x));
  return acc.value();
}

}  // namespace wetting
