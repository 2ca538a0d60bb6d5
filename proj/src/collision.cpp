#include "mmt/collision.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <vector>

namespace mmt {

std::string_view to_string(Evaluator e) {
  switch (e) {
    case Evaluator::sum_form:
      return "sum_form";
    case Evaluator::symmetric:
      return "symmetric";
    case Evaluator::split:
      return "split";
  }
  return "?";
}

Evaluator parse_evaluator(std::string_view s) {
  if (s == "sum_form" || s == "sum") return Evaluator::sum_form;
  if (s == "symmetric") return Evaluator::symmetric;
  if (s == "split") return Evaluator::split;
  throw std::invalid_argument("unknown evaluator '" + std::string(s) + "'");
}

namespace {

void require_form(const SpectrumField& f, Form want, std::string_view who) {
  if (f.form() != want)
    throw std::invalid_argument(std::string(who) + " expects an " + std::string(to_string(want)) +
                                "-form field");
}

}  // namespace

double collide_sum_form(const SpectrumField& n, double omega, const ResonanceQuad& quad) {
  require_form(n, Form::n_form, "collide_sum_form");
  return collide_sum_form(FieldSampler{&n}, omega, quad);
}

double collide_symmetric(const SpectrumField& N, double omega, const ResonanceQuad& quad) {
  require_form(N, Form::N_form, "collide_symmetric");
  return collide_symmetric(FieldSampler{&N}, omega, quad);
}

double collide_split(const SpectrumField& N, double omega, const ResonanceQuad& quad) {
  require_form(N, Form::N_form, "collide_split");
  return collide_split(FieldSampler{&N}, omega, quad);
}

double collide_epsilon(const SpectrumField& N, double omega, const ResonanceQuad& quad, double eps) {
  require_form(N, Form::N_form, "collide_epsilon");
  return collide_epsilon(FieldSampler{&N}, omega, quad, eps);
}

CollisionResult collide_grid(const SpectrumField& field, const ResonanceQuad& quad, Evaluator evaluator,
                             Execution exec) {
  require_form(field, evaluator == Evaluator::sum_form ? Form::n_form : Form::N_form, "collide_grid");
  const FieldSampler sampler{&field};
  const auto& nodes = field.grid().nodes();
  const long n = static_cast<long>(nodes.size());
  std::vector<double> out(nodes.size());
  std::vector<SplitStats> stats(nodes.size());
  std::vector<std::exception_ptr> errors(nodes.size());

  auto one = [&](long m) {
    const auto j = static_cast<std::size_t>(m);
    try {
      switch (evaluator) {
        case Evaluator::sum_form:
          out[j] = collide_sum_form(sampler, nodes[j], quad);
          break;
        case Evaluator::symmetric:
          out[j] = collide_symmetric(sampler, nodes[j], quad);
          break;
        case Evaluator::split:
          out[j] = collide_split(sampler, nodes[j], quad, stats[j]);
          break;
      }
    } catch (...) {
      errors[j] = std::current_exception();
    }
  };

  if (exec == Execution::serial) {
    for (long m = 0; m < n; ++m) one(m);
  } else {
#pragma omp parallel for schedule(dynamic, 4) num_threads(max_workers())
    for (long m = 0; m < n; ++m) one(m);
  }

  for (std::size_t j = 0; j < errors.size(); ++j) {
    if (!errors[j]) continue;
    try {
      std::rethrow_exception(errors[j]);
    } catch (const NonFiniteError& e) {
      throw NonFiniteError("node " + std::to_string(j) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("node " + std::to_string(j) + ": " + e.what());
    }
  }

  // node-index order keeps the reduction independent of scheduling
  double total = 0.0, off = 0.0;
  for (const SplitStats& s : stats) {
    total += s.total;
    off += s.extrapolated;
  }
  CollisionResult r{GridFunction{field.grid(), std::move(out)}, evaluator, quad.spec, quad.u_lo, quad.size(),
                    total > 0.0 ? off / total : 0.0};
  return r;
}

}  // namespace mmt
