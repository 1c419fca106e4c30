#include "stqc/potential.hpp"

#include <cmath>
#include <json.hpp>

#include "stqc/errors.hpp"

namespace stqc {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

void validate_potential(const PotentialSpec& v, int dim) {
  std::visit(overloaded{
                 [&](const potential::AbsPower& p) {
                   const double floor = std::max(-2.0, -0.5 * dim);
                   if (!(p.gamma > floor))
                     throw InvalidArgument("AbsPower exponent violates gamma > max(-2, -d/2)");
                   if (!std::isfinite(p.c)) throw InvalidArgument("AbsPower coefficient not finite");
                 },
                 [](const potential::GaussianExp& p) {
                   if (!(p.a < 0.0)) throw InvalidArgument("GaussianExp needs a < 0");
                 },
                 [&](const potential::LinearCtrl& p) {
                   if (p.axis < 0 || p.axis >= dim) throw InvalidArgument("LinearCtrl axis out of range");
                 },
                 [](const auto&) {},
             },
             v);
}

std::vector<double> sample_potential(const PotentialSpec& v, const Grid& grid) {
  validate_potential(v, grid.dim());
  const auto n = grid.size();
  std::vector<double> out(n, 0.0);
  const double h = grid.spacing();
  std::visit(overloaded{
                 [](const potential::Zero&) {},
                 [&](const potential::AbsPower& p) {
                   for (std::size_t j = 0; j < n; ++j) {
                     const double x = grid.x(j);
                     out[j] = p.gamma < 0.0 ? p.c * std::pow(x * x + h * h, 0.5 * p.gamma)
                                            : p.c * std::pow(std::abs(x), p.gamma);
                   }
                 },
                 [&](const potential::GaussianExp& p) {
                   for (std::size_t j = 0; j < n; ++j) {
                     const double x = grid.x(j);
                     out[j] = std::exp(p.a * x * x + p.b * x);
                   }
                 },
                 [&](const potential::BoundedSample& p) {
                   if (p.values.size() != n)
                     throw InvalidArgument("BoundedSample size does not match grid");
                   out = p.values;
                 },
                 [&](const potential::QuadraticCtrl&) {
                   for (std::size_t j = 0; j < n; ++j) out[j] = grid.x(j) * grid.x(j);
                 },
                 [&](const potential::LinearCtrl&) {
                   for (std::size_t j = 0; j < n; ++j) out[j] = grid.x(j);
                 },
             },
             v);
  return out;
}

bool is_zero(const PotentialSpec& v) { return std::holds_alternative<potential::Zero>(v); }

nlohmann::json potential_to_json(const PotentialSpec& v) {
  return std::visit(
      overloaded{
          [](const potential::Zero&) { return nlohmann::json{{"type", "zero"}}; },
          [](const potential::AbsPower& p) {
            return nlohmann::json{{"type", "abs_power"}, {"c", p.c}, {"gamma", p.gamma}};
          },
          [](const potential::GaussianExp& p) {
            return nlohmann::json{{"type", "gaussian_exp"}, {"a", p.a}, {"b", p.b}};
          },
          [](const potential::BoundedSample& p) {
            return nlohmann::json{{"type", "bounded_sample"}, {"values", p.values}};
          },
          [](const potential::QuadraticCtrl&) { return nlohmann::json{{"type", "quadratic"}}; },
          [](const potential::LinearCtrl& p) {
            return nlohmann::json{{"type", "linear"}, {"axis", p.axis}};
          },
      },
      v);
}

PotentialSpec potential_from_json(const nlohmann::json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    PotentialSpec out;
    if (type == "zero")
      out = potential::Zero{};
    else if (type == "abs_power")
      out = potential::AbsPower{j.at("c").get<double>(), j.at("gamma").get<double>()};
    else if (type == "gaussian_exp")
      out = potential::GaussianExp{j.at("a").get<double>(), j.value("b", 0.0)};
    else if (type == "bounded_sample")
      out = potential::BoundedSample{j.at("values").get<std::vector<double>>()};
    else if (type == "quadratic")
      out = potential::QuadraticCtrl{};
    else if (type == "linear")
      out = potential::LinearCtrl{j.value("axis", 0)};
    else
      throw ConfigError("unknown potential type '" + type + "'");
    validate_potential(out);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid potential JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace stqc
