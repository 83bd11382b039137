#include "remap/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "remap/util.hpp"

namespace remap {

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  const TokenSeq& outer = a.size() >= b.size() ? a : b;
  const TokenSeq& inner = a.size() >= b.size() ? b : a;
  std::vector<std::size_t> row(inner.size() + 1, 0);
  for (const auto& x : outer) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= inner.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = x == inner[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[inner.size()];
}

Similarity lcs_sim(const TokenSeq& a, const TokenSeq& b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return std::nullopt;
  return 2.0 * static_cast<double>(lcs_length(a, b)) / static_cast<double>(total);
}

void WeightConfig::validate() const {
  constexpr double eps = 1e-9;
  for (double w : {alpha, beta, theta, delta, eta, phi})
    if (!(w >= 0.0 && w <= 1.0)) throw UsageError("weights must lie in [0,1]");
  if (std::abs(alpha + beta + theta - 1.0) > eps) throw UsageError("alpha + beta + theta must equal 1");
  if (std::abs(delta + eta + phi - 1.0) > eps) throw UsageError("delta + eta + phi must equal 1");
}

std::string to_string(Ablation a) {
  switch (a) {
    case Ablation::All: return "ALL";
    case Ablation::Exr1: return "EXR1";
    case Ablation::Exr2: return "EXR2";
    case Ablation::Exr3: return "EXR3";
    case Ablation::Exr4: return "EXR4";
  }
  return "ALL";
}

Ablation parse_ablation(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
  if (t == "ALL") return Ablation::All;
  if (t == "EXR1") return Ablation::Exr1;
  if (t == "EXR2") return Ablation::Exr2;
  if (t == "EXR3") return Ablation::Exr3;
  if (t == "EXR4") return Ablation::Exr4;
  throw UsageError("unknown ablation setting: " + std::string(text));
}

FieldSims field_sims(const NormalizedDetails& a, const NormalizedDetails& b) {
  return FieldSims{lcs_sim(a.class_name, b.class_name), lcs_sim(a.class_doc, b.class_doc),
                   lcs_sim(a.method_name, b.method_name), lcs_sim(a.return_type, b.return_type),
                   lcs_sim(a.params, b.params),           lcs_sim(a.local_vars, b.local_vars),
                   lcs_sim(a.method_doc, b.method_doc),   lcs_sim(a.comments, b.comments)};
}

SASBreakdown components(const FieldSims& input, const WeightConfig& w, Ablation ablation,
                        const AbsentPolicy& policy) {
  SASBreakdown out;
  out.ablation = ablation;
  out.fields = input;
  FieldSims& f = out.fields;
  switch (ablation) {
    case Ablation::Exr2: f.local_var = 0.0; break;
    case Ablation::Exr3:
      f.method_doc = 0.0;
      f.class_doc = 0.0;
      break;
    case Ablation::Exr4: f.comment = 0.0; break;
    default: break;
  }

  const double class_name = f.class_name.value_or(0.0);
  out.sim_class = class_name + (1.0 - class_name) * f.class_doc.value_or(policy.class_doc_absent);

  out.sim_method_header = w.delta * f.method_name.value_or(0.0) + w.eta * f.return_type.value_or(0.0) +
                          w.phi * f.param.value_or(policy.params_absent);

  double sum = 0.0;
  int count = 0;
  for (const Similarity& s : {f.local_var, f.method_doc, f.comment}) {
    if (s) {
      sum += *s;
      ++count;
    } else if (!policy.drop_absent_optional) {
      ++count;
    }
  }
  out.optional_missing = !f.local_var && !f.method_doc && !f.comment;
  out.sim_optional = count > 0 ? sum / count : 0.0;

  if (ablation == Ablation::Exr2) out.sim_method_header = 0.0;
  return out;
}

SASBreakdown components(const NormalizedDetails& a, const NormalizedDetails& b, const WeightConfig& w,
                        Ablation ablation, const AbsentPolicy& policy) {
  return components(field_sims(a, b), w, ablation, policy);
}

double sas(const SASBreakdown& b, const WeightConfig& w, const AbsentPolicy& policy) {
  if (policy.renormalize_missing_optional && b.optional_missing && w.alpha + w.beta > 0.0)
    return (w.alpha * b.sim_class + w.beta * b.sim_method_header) / (w.alpha + w.beta);
  return w.alpha * b.sim_class + w.beta * b.sim_method_header + w.theta * b.sim_optional;
}

SASBreakdown score(const FieldSims& fields, const WeightConfig& w, Ablation ablation, const AbsentPolicy& policy) {
  SASBreakdown b = components(fields, w, ablation, policy);
  b.sas = sas(b, w, policy);
  return b;
}

}  // namespace remap
