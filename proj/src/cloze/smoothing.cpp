#include <charconv>
#include <cmath>

#include "pred/cloze.hpp"
#include "pred/error.hpp"

namespace pred::cloze {

double smoothed_probability(int count, int total, int smoothing) {
  if (count < 0 || total < 1 || smoothing < 1) {
    throw DomainError("smoothing needs count >= 0, N >= 1, S >= 1");
  }
  return (static_cast<double>(count) + 1.0) / (static_cast<double>(total) + smoothing);
}

double cloze_probability(const ClozeResponseSet& responses, const ContextId& context,
                         std::string_view word, int smoothing) {
  return smoothed_probability(responses.count(context, word), responses.total(context), smoothing);
}

std::string TransformKind::name() const {
  switch (kind) {
    case Kind::kRawProb: return "P";
    case Kind::kSurprisal: return "S";
    case Kind::kSurprisalPow:
      return exp_den == 1 ? "S^" + std::to_string(exp_num)
                          : "S^" + std::to_string(exp_num) + "/" + std::to_string(exp_den);
  }
  return "?";
}

TransformKind parse_transform(std::string_view name) {
  if (name == "P") return TransformKind::raw_prob();
  if (name == "S") return TransformKind::surprisal();
  if (name.starts_with("S^")) {
    std::string_view rest = name.substr(2);
    int num = 0, den = 1;
    auto slash = rest.find('/');
    auto parse = [&](std::string_view s, int& out) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      return ec == std::errc() && ptr == s.data() + s.size() && out > 0;
    };
    if (parse(rest.substr(0, slash), num) &&
        (slash == std::string_view::npos || parse(rest.substr(slash + 1), den))) {
      return TransformKind::surprisal_pow(num, den);
    }
  }
  throw ParseError("unknown transform '" + std::string(name) + "'");
}

std::vector<TransformKind> transform_grid() {
  return {TransformKind::raw_prob(),         TransformKind::surprisal(),
          TransformKind::surprisal_pow(1, 2), TransformKind::surprisal_pow(3, 4),
          TransformKind::surprisal_pow(4, 3), TransformKind::surprisal_pow(2, 1)};
}

double transform(double p, const TransformKind& kind) {
  if (!(p > 0.0) || p > 1.0) throw DomainError("probability must lie in (0, 1]");
  switch (kind.kind) {
    case TransformKind::Kind::kRawProb: return p;
    case TransformKind::Kind::kSurprisal: return -std::log2(p);
    case TransformKind::Kind::kSurprisalPow: {
      const double s = -std::log2(p);
      if (kind.exp_num == kind.exp_den) return s;
      return std::pow(s, kind.exponent());
    }
  }
  return p;
}

}  // namespace pred::cloze
